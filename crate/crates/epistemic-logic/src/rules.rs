//! The inference rules and the trust relation that licenses them.
//!
//! Every rule application is identified by a [`RuleId`] carrying all of its
//! parameters (prefix depth, introspection target, ...), so that
//! [`apply_rule`] is a *function*: given the rule id and the premises it
//! either produces exactly one conclusion or nothing. The derivation engine
//! enumerates candidate ids and the independent trace checker replays them.
//!
//! Rules that combine two nested-knowledge formulas first descend their
//! common knowledge prefix: at each level both operators must name the same
//! agent with the same context tag and overlapping windows, and the
//! conclusion keeps the *intersected* window. Cross-window reasoning only
//! ever happens through explicit rules (introspection with a shifted
//! target), never silently.

use std::fmt;

use crate::formula::{AgentInstance, Context, Formula, TimeSet};

/// Whether cross-agent absorption requires matching measurement contexts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrustMode {
    /// Any licensed pair may absorb knowledge.
    Naive,
    /// Licensed pairs may absorb knowledge only within one context.
    Contextual,
}

impl fmt::Display for TrustMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrustMode::Naive => "naive",
            TrustMode::Contextual => "contextual",
        })
    }
}

/// Who is entitled to adopt whose knowledge.
#[derive(Clone, Debug)]
pub struct TrustRelation {
    mode: TrustMode,
    pairs: Vec<(AgentInstance, AgentInstance)>,
}

impl TrustRelation {
    /// `pairs` lists (truster, trusted) with the *widest* windows for which
    /// the trust holds; narrower occurrences are licensed by containment.
    pub fn new(mode: TrustMode, pairs: Vec<(AgentInstance, AgentInstance)>) -> Self {
        TrustRelation { mode, pairs }
    }

    pub fn mode(&self) -> TrustMode {
        self.mode
    }

    pub fn pairs(&self) -> &[(AgentInstance, AgentInstance)] {
        &self.pairs
    }

    /// Whether `outer` may absorb what `inner` knows. Self-trust (same
    /// agent, any windows) is structural; everything else must fit inside a
    /// declared pair. In contextual mode both operators must carry the same
    /// context tag.
    pub fn licensed(
        &self,
        outer: (&AgentInstance, Option<Context>),
        inner: (&AgentInstance, Option<Context>),
    ) -> bool {
        if self.mode == TrustMode::Contextual && (outer.1.is_none() || outer.1 != inner.1) {
            return false;
        }
        if outer.0.agent == inner.0.agent {
            return true;
        }
        self.pairs.iter().any(|(truster, trusted)| {
            truster.agent == outer.0.agent
                && outer.0.times.is_subset(truster.times)
                && trusted.agent == inner.0.agent
                && inner.0.times.is_subset(trusted.times)
        })
    }
}

/// A fully parameterized rule application.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RuleId {
    /// A declared theory premise (no inference).
    Premise,
    /// A declared observation of the running scenario (no inference).
    ScenarioFact,
    /// From K(f) and K(f' -> g) with f covering f', conclude K(g); at depth
    /// 0 this is plain modus ponens.
    Distribution { depth: usize },
    /// From K(a -> b) and K(b' -> c) with b covering b', conclude
    /// K(a -> c).
    Syllogism { depth: usize },
    /// From K_outer(K_inner(f)) with outer trusting inner, conclude
    /// K_outer(f).
    Trust { depth: usize },
    /// From K_i(x) and K_j(y), same agent, conclude K_{i meet j}(x & y).
    KAndMerge { depth: usize },
    /// From K(a & b) conclude K(a) (or K(b) with `right`).
    AndElim { depth: usize, right: bool },
    /// From K[a@T](f) conclude K[a@target](K[a@T](f)): the agent holds on
    /// to (or anticipates) its own knowledge at other steps. Requires
    /// min(target) >= min(T).
    PositiveIntrospection { depth: usize, target: TimeSet },
    /// From !K(f) conclude K(!K(f)).
    NegativeIntrospection { depth: usize },
    /// From a theory-level tautology f, conclude K[target](f). Only valid
    /// on premises flagged as tautologies; the engine enforces the flag.
    KnowledgeGeneralization {
        target: AgentInstance,
        context: Option<Context>,
    },
    /// From K(x & y) with y the denial of x, conclude K(x) & !K(x): an
    /// agent knowing a contradiction both asserts and forfeits the claim.
    ConditionS,
}

impl RuleId {
    /// Human-readable label; trust and distribution advertise their
    /// contextual variants when the run is contextual.
    pub fn label(&self, mode: TrustMode) -> String {
        let contextual = mode == TrustMode::Contextual;
        match self {
            RuleId::Premise => "premise".into(),
            RuleId::ScenarioFact => "scenario-fact".into(),
            RuleId::Distribution { depth } if contextual => {
                format!("contextual-distribution@{depth}")
            }
            RuleId::Distribution { depth } => format!("distribution@{depth}"),
            RuleId::Syllogism { depth } => format!("syllogism@{depth}"),
            RuleId::Trust { depth } if contextual => format!("contextual-information@{depth}"),
            RuleId::Trust { depth } => format!("trust@{depth}"),
            RuleId::KAndMerge { depth } => format!("k-and-merge@{depth}"),
            RuleId::AndElim { depth, right } => {
                format!("and-elim@{depth}.{}", if *right { "right" } else { "left" })
            }
            RuleId::PositiveIntrospection { depth, target } => {
                format!("positive-introspection@{depth}[{target}]")
            }
            RuleId::NegativeIntrospection { depth } => format!("negative-introspection@{depth}"),
            RuleId::KnowledgeGeneralization { target, context } => match context {
                Some(ctx) => format!("knowledge-generalization[{target}|{ctx}]"),
                None => format!("knowledge-generalization[{target}]"),
            },
            RuleId::ConditionS => "condition-s".into(),
        }
    }

    /// How many premises the rule consumes.
    pub fn arity(&self) -> usize {
        match self {
            RuleId::Premise | RuleId::ScenarioFact => 0,
            RuleId::Distribution { .. } | RuleId::Syllogism { .. } | RuleId::KAndMerge { .. } => 2,
            _ => 1,
        }
    }
}

/// One stripped knowledge level.
type Level = (AgentInstance, Option<Context>);

fn rewrap(levels: &[Level], body: Formula) -> Formula {
    levels.iter().rev().fold(body, |acc, (instance, context)| {
        Formula::Knows(*instance, *context, Box::new(acc))
    })
}

/// Strips `depth` knowledge operators off the front of one formula,
/// returning them verbatim.
fn strip_prefix(formula: &Formula, depth: usize) -> Option<(Vec<Level>, &Formula)> {
    let mut levels = Vec::with_capacity(depth);
    let mut current = formula;
    for _ in 0..depth {
        let Formula::Knows(instance, context, body) = current else {
            return None;
        };
        levels.push((*instance, *context));
        current = body;
    }
    Some((levels, current))
}

/// Strips `depth` knowledge operators off two formulas in lock-step: each
/// level must name the same agent with the same context tag and overlapping
/// windows, and the collected level keeps the intersection.
fn strip_common<'a>(
    f: &'a Formula,
    g: &'a Formula,
    depth: usize,
) -> Option<(Vec<Level>, &'a Formula, &'a Formula)> {
    let mut levels = Vec::with_capacity(depth);
    let (mut cf, mut cg) = (f, g);
    for _ in 0..depth {
        let Formula::Knows(fi, fc, fb) = cf else {
            return None;
        };
        let Formula::Knows(gi, gc, gb) = cg else {
            return None;
        };
        if fi.agent != gi.agent || fc != gc {
            return None;
        }
        let joint = fi.times.intersect(gi.times);
        if joint.is_empty() {
            return None;
        }
        levels.push((AgentInstance::new(fi.agent, joint), *fc));
        cf = fb;
        cg = gb;
    }
    Some((levels, cf, cg))
}

/// In contextual mode every knowledge operator a rule touches must carry a
/// context tag; untagged operators are not assignable to a context.
fn levels_tagged(levels: &[Level], mode: TrustMode) -> bool {
    mode == TrustMode::Naive || levels.iter().all(|(_, c)| c.is_some())
}

/// Applies one fully parameterized rule to its premises. Returns the unique
/// conclusion in canonical form, or `None` when the rule does not fit.
pub fn apply_rule(rule: &RuleId, premises: &[&Formula], trust: &TrustRelation) -> Option<Formula> {
    if premises.len() != rule.arity() {
        return None;
    }
    let mode = trust.mode();
    let conclusion = match rule {
        RuleId::Premise | RuleId::ScenarioFact => return None,
        RuleId::Distribution { depth } => {
            let (levels, fact, implication) = strip_common(premises[0], premises[1], *depth)?;
            if !levels_tagged(&levels, mode) {
                return None;
            }
            let Formula::Implies(antecedent, consequent) = implication else {
                return None;
            };
            if !fact.subsumes(antecedent) {
                return None;
            }
            rewrap(&levels, (**consequent).clone())
        }
        RuleId::Syllogism { depth } => {
            let (levels, first, second) = strip_common(premises[0], premises[1], *depth)?;
            if !levels_tagged(&levels, mode) {
                return None;
            }
            let Formula::Implies(a, b) = first else {
                return None;
            };
            let Formula::Implies(b2, c) = second else {
                return None;
            };
            if !b.subsumes(b2) {
                return None;
            }
            rewrap(&levels, Formula::implies((**a).clone(), (**c).clone()))
        }
        RuleId::Trust { depth } => {
            let (levels, base) = strip_prefix(premises[0], *depth)?;
            if !levels_tagged(&levels, mode) {
                return None;
            }
            let Formula::Knows(outer, outer_ctx, inner_formula) = base else {
                return None;
            };
            let Formula::Knows(inner, inner_ctx, body) = &**inner_formula else {
                return None;
            };
            if !trust.licensed((outer, *outer_ctx), (inner, *inner_ctx)) {
                return None;
            }
            rewrap(
                &levels,
                Formula::Knows(*outer, *outer_ctx, Box::new((**body).clone())),
            )
        }
        RuleId::KAndMerge { depth } => {
            let (levels, left, right) = strip_common(premises[0], premises[1], *depth)?;
            if !levels_tagged(&levels, mode) {
                return None;
            }
            let Formula::Knows(i, ci, x) = left else {
                return None;
            };
            let Formula::Knows(j, cj, y) = right else {
                return None;
            };
            if i.agent != j.agent || ci != cj {
                return None;
            }
            if mode == TrustMode::Contextual && ci.is_none() {
                return None;
            }
            let joint = i.times.intersect(j.times);
            if joint.is_empty() {
                return None;
            }
            rewrap(
                &levels,
                Formula::Knows(
                    AgentInstance::new(i.agent, joint),
                    *ci,
                    Box::new(Formula::and((**x).clone(), (**y).clone())),
                ),
            )
        }
        RuleId::AndElim { depth, right } => {
            let (levels, base) = strip_prefix(premises[0], *depth)?;
            let Formula::And(a, b) = base else {
                return None;
            };
            rewrap(&levels, if *right { (**b).clone() } else { (**a).clone() })
        }
        RuleId::PositiveIntrospection { depth, target } => {
            let (levels, base) = strip_prefix(premises[0], *depth)?;
            let Formula::Knows(instance, context, _) = base else {
                return None;
            };
            if target.is_empty() || target.earliest() < instance.times.earliest() {
                return None;
            }
            rewrap(
                &levels,
                Formula::Knows(
                    AgentInstance::new(instance.agent, *target),
                    *context,
                    Box::new(base.clone()),
                ),
            )
        }
        RuleId::NegativeIntrospection { depth } => {
            let (levels, base) = strip_prefix(premises[0], *depth)?;
            let Formula::Not(inner) = base else {
                return None;
            };
            let Formula::Knows(instance, context, _) = &**inner else {
                return None;
            };
            rewrap(
                &levels,
                Formula::Knows(*instance, *context, Box::new(base.clone())),
            )
        }
        RuleId::KnowledgeGeneralization { target, context } => {
            match (mode, context) {
                (TrustMode::Naive, None) | (TrustMode::Contextual, Some(_)) => {}
                _ => return None,
            }
            Formula::Knows(*target, *context, Box::new(premises[0].clone()))
        }
        RuleId::ConditionS => condition_s_lift(premises[0])?,
    };
    Some(conclusion.canonicalize())
}

/// The self-defeater lift: K(x & y) where y denies x becomes K(x) & !K(x).
/// The representative of the complementary pair is the positive side of a
/// syntactic negation, or the alphabetically earlier printing for
/// complementary atoms.
pub fn condition_s_lift(formula: &Formula) -> Option<Formula> {
    let Formula::Knows(instance, context, body) = formula else {
        return None;
    };
    let Formula::And(x, y) = &**body else {
        return None;
    };
    let representative = complementary_representative(x, y)?;
    let claim = Formula::Knows(*instance, *context, Box::new(representative.clone()));
    Some(Formula::and(claim.clone(), Formula::not(claim)))
}

/// The positive side of a complementary pair (`x`/`!x`, or two atoms
/// asserting opposite outcomes of one measurement), if the pair is one.
pub(crate) fn complementary_representative<'a>(
    x: &'a Formula,
    y: &'a Formula,
) -> Option<&'a Formula> {
    if let Formula::Not(inner) = y {
        if **inner == *x {
            return Some(x);
        }
    }
    if let Formula::Not(inner) = x {
        if **inner == *y {
            return Some(y);
        }
    }
    if let (Formula::Atom(a), Formula::Atom(b)) = (x, y) {
        if a.complement() == *b {
            return Some(if a.as_str() <= b.as_str() { x } else { y });
        }
    }
    None
}

/// Recognizes the self-defeater shape K_i(f) & !K_i(f), returning the
/// conflicted instance.
pub fn epistemic_clash(formula: &Formula) -> Option<AgentInstance> {
    let Formula::And(a, b) = formula else {
        return None;
    };
    let (positive, negated) = match (&**a, &**b) {
        (pos, Formula::Not(negated)) => (pos, &**negated),
        (Formula::Not(negated), pos) => (pos, &**negated),
        _ => return None,
    };
    if positive != negated {
        return None;
    }
    match positive {
        Formula::Knows(instance, _, _) => Some(*instance),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use fr_protocol::Agent;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    fn inst(agent: Agent, times: &[u8]) -> AgentInstance {
        AgentInstance::new(agent, TimeSet::from_times(times).unwrap())
    }

    fn naive_trust(pairs: &[(AgentInstance, AgentInstance)]) -> TrustRelation {
        TrustRelation::new(TrustMode::Naive, pairs.to_vec())
    }

    #[test]
    fn distribution_at_depth_one_is_knowledge_modus_ponens() {
        let trust = naive_trust(&[]);
        let fact = f("K[F1@<3](S1=psi)");
        let imp = f("K[F1@<3](S1=psi -> PchiL2=0)");
        let out = apply_rule(&RuleId::Distribution { depth: 1 }, &[&fact, &imp], &trust);
        assert_eq!(out, Some(f("K[F1@<3](PchiL2=0)")));
    }

    #[test]
    fn distribution_intersects_windows_and_uses_covering() {
        let trust = naive_trust(&[]);
        let fact = f("K[F2@2](K[F1@<3](S1=psi))");
        let imp = f("K[F2@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0))");
        let out = apply_rule(&RuleId::Distribution { depth: 1 }, &[&fact, &imp], &trust);
        assert_eq!(out, Some(f("K[F2@2](K[W2@4](PchiL2=0))")));
        // Without window overlap the rule does not fire.
        let disjoint = f("K[F2@4](K[F1@<3](S1=psi))");
        assert_eq!(
            apply_rule(&RuleId::Distribution { depth: 1 }, &[&disjoint, &imp], &trust),
            None
        );
        // A narrower fact does not cover the antecedent.
        let narrow = f("K[F2@2](K[F1@0](S1=psi))");
        assert_eq!(
            apply_rule(&RuleId::Distribution { depth: 1 }, &[&narrow, &imp], &trust),
            None
        );
    }

    #[test]
    fn depth_zero_distribution_is_modus_ponens() {
        let trust = naive_trust(&[]);
        let fact = f("S1=psi");
        let imp = f("S1=psi -> PchiL2=0");
        assert_eq!(
            apply_rule(&RuleId::Distribution { depth: 0 }, &[&fact, &imp], &trust),
            Some(f("PchiL2=0"))
        );
    }

    #[test]
    fn syllogism_chains_implications_through_covering() {
        let trust = naive_trust(&[]);
        let first = f("K[W1@3](K[F2@1](S2=psi) -> K[F1@<3](S1=psi))");
        let second = f("K[W1@<4](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0))");
        let out = apply_rule(&RuleId::Syllogism { depth: 1 }, &[&first, &second], &trust);
        assert_eq!(
            out,
            Some(f("K[W1@3](K[F2@1](S2=psi) -> K[W2@4](PchiL2=0))"))
        );
    }

    #[test]
    fn trust_absorbs_a_licensed_inner_operator() {
        let pairs = [(inst(Agent::W1, &[2, 3, 4]), inst(Agent::F2, &[2]))];
        let trust = naive_trust(&pairs);
        let premise = f("K[W1@3](K[F2@2](S2=psi))");
        assert_eq!(
            apply_rule(&RuleId::Trust { depth: 0 }, &[&premise], &trust),
            Some(f("K[W1@3](S2=psi)"))
        );
        // Unlicensed directions do not fire.
        let reverse = f("K[F2@2](K[W1@3](S2=psi))");
        assert_eq!(apply_rule(&RuleId::Trust { depth: 0 }, &[&reverse], &trust), None);
        // Self-trust is structural.
        let own = f("K[F1@4](K[F1@<3](S1=psi))");
        assert_eq!(
            apply_rule(&RuleId::Trust { depth: 0 }, &[&own], &trust),
            Some(f("K[F1@4](S1=psi)"))
        );
    }

    #[test]
    fn contextual_trust_requires_matching_tags() {
        let pairs = [(inst(Agent::W1, &[2, 3, 4]), inst(Agent::F2, &[2]))];
        let contextual = TrustRelation::new(TrustMode::Contextual, pairs.to_vec());
        let cross = f("K[W1@3|C2](K[F2@2|C1](S2=psi))");
        assert_eq!(
            apply_rule(&RuleId::Trust { depth: 0 }, &[&cross], &contextual),
            None
        );
        let same_pairs = [(inst(Agent::W2, &[3, 4]), inst(Agent::W1, &[2, 3, 4]))];
        let contextual = TrustRelation::new(TrustMode::Contextual, same_pairs.to_vec());
        let within = f("K[W2@4|C2](K[W1@3|C2](PchiL1!=0))");
        assert_eq!(
            apply_rule(&RuleId::Trust { depth: 0 }, &[&within], &contextual),
            Some(f("K[W2@4|C2](PchiL1!=0)"))
        );
        // Untagged operators cannot be absorbed contextually at all.
        let untagged = f("K[W2@4](K[W1@3](PchiL1!=0))");
        assert_eq!(
            apply_rule(&RuleId::Trust { depth: 0 }, &[&untagged], &contextual),
            None
        );
    }

    #[test]
    fn merge_intersects_instances_of_one_agent() {
        let trust = naive_trust(&[]);
        let a = f("K[W2@4](PchiL2=0)");
        let b = f("K[W2@3,4](PchiL2!=0)");
        let out = apply_rule(&RuleId::KAndMerge { depth: 0 }, &[&a, &b], &trust);
        assert_eq!(out, Some(f("K[W2@4](PchiL2!=0 & PchiL2=0)")));
        // Different agents never merge.
        let c = f("K[W1@4](PchiL2!=0)");
        assert_eq!(apply_rule(&RuleId::KAndMerge { depth: 0 }, &[&a, &c], &trust), None);
    }

    #[test]
    fn and_elim_picks_one_side() {
        let trust = naive_trust(&[]);
        let both = f("K[W2@4](PchiL2!=0 & PchiL2=0)");
        assert_eq!(
            apply_rule(&RuleId::AndElim { depth: 1, right: false }, &[&both], &trust),
            Some(f("K[W2@4](PchiL2!=0)"))
        );
        assert_eq!(
            apply_rule(&RuleId::AndElim { depth: 1, right: true }, &[&both], &trust),
            Some(f("K[W2@4](PchiL2=0)"))
        );
    }

    #[test]
    fn introspection_wraps_with_a_later_window() {
        let trust = naive_trust(&[]);
        let premise = f("K[F1@<3](S1=psi)");
        let target = TimeSet::single(4).unwrap();
        let out = apply_rule(
            &RuleId::PositiveIntrospection { depth: 0, target },
            &[&premise],
            &trust,
        );
        assert_eq!(out, Some(f("K[F1@4](K[F1@<3](S1=psi))")));
        // Targets beginning before the source window are rejected.
        let premise = f("K[W1@3](PchiL1!=0)");
        let early = TimeSet::from_times(&[2]).unwrap();
        assert_eq!(
            apply_rule(
                &RuleId::PositiveIntrospection { depth: 0, target: early },
                &[&premise],
                &trust
            ),
            None
        );
    }

    #[test]
    fn deep_rules_keep_the_outer_prefix() {
        let trust = naive_trust(&[(inst(Agent::F2, &[2]), inst(Agent::F1, &[0, 1, 2]))]);
        let premise = f("K[W2@4](K[W1@3](K[F2@2](K[F1@<3](S1=psi))))");
        let out = apply_rule(&RuleId::Trust { depth: 2 }, &[&premise], &trust);
        assert_eq!(out, Some(f("K[W2@4](K[W1@3](K[F2@2](S1=psi)))")));
    }

    #[test]
    fn negative_introspection_wraps_denials() {
        let trust = naive_trust(&[]);
        let premise = f("!K[W2@4](PchiL2!=0)");
        assert_eq!(
            apply_rule(&RuleId::NegativeIntrospection { depth: 0 }, &[&premise], &trust),
            Some(f("K[W2@4](!K[W2@4](PchiL2!=0))"))
        );
    }

    #[test]
    fn generalization_wraps_only_with_mode_matching_context() {
        let trust = naive_trust(&[]);
        let taut = f("K[F1@1](S1=psi) -> K[W2@4](PchiL2=0)");
        let target = inst(Agent::F1, &[0, 1, 2]);
        assert_eq!(
            apply_rule(
                &RuleId::KnowledgeGeneralization { target, context: None },
                &[&taut],
                &trust
            ),
            Some(f("K[F1@<3](K[F1@1](S1=psi) -> K[W2@4](PchiL2=0))"))
        );
        assert_eq!(
            apply_rule(
                &RuleId::KnowledgeGeneralization { target, context: Some(Context::C1) },
                &[&taut],
                &trust
            ),
            None,
        );
    }

    #[test]
    fn condition_s_lifts_known_contradictions() {
        let conflicted = f("K[W2@4](PchiL2!=0 & PchiL2=0)");
        let lifted = condition_s_lift(&conflicted).unwrap();
        assert_eq!(lifted, f("K[W2@4](PchiL2!=0) & !K[W2@4](PchiL2!=0)"));
        assert_eq!(
            epistemic_clash(&lifted),
            Some(inst(Agent::W2, &[4]))
        );
        // Syntactic negation picks the positive side as representative.
        let negated = f("K[F1@4](S1=psi & !S1=psi)");
        assert_eq!(
            condition_s_lift(&negated).unwrap(),
            f("K[F1@4](S1=psi) & !K[F1@4](S1=psi)")
        );
        // Non-complementary conjunctions do not lift.
        let benign = f("K[F1@4](S1=psi & S2=psi)");
        assert_eq!(condition_s_lift(&benign), None);
    }

    #[test]
    fn clash_detection_requires_identical_operands() {
        assert!(epistemic_clash(&f("K[W2@4](PchiL2!=0) & !K[W2@4](PchiL2!=0)")).is_some());
        assert!(epistemic_clash(&f("K[W2@4](PchiL2!=0) & !K[W2@4](PchiL2=0)")).is_none());
        assert!(epistemic_clash(&f("K[W2@4](PchiL2!=0) & !K[W2@3,4](PchiL2!=0)")).is_none());
        assert!(epistemic_clash(&f("S1=psi & !S1=psi")).is_none());
    }
}
