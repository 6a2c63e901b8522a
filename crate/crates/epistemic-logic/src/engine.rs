//! Forward-chaining derivation engine with checkable traces.
//!
//! The engine saturates a set of named premises under the rule catalog,
//! breadth-first (semi-naive: each round pairs the previous round's new
//! formulas against everything seen so far), deduplicating on the canonical
//! printed form, first derivation wins. Every stored formula remembers the
//! rule id and premise indices that produced it, so any member of the
//! closure can be expanded into a [`DerivationTrace`] and re-validated by
//! the independent [`check_trace`] — which replays each step through
//! [`apply_rule`] and accepts nothing the rules themselves do not produce.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fr_protocol::Agent;
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{AgentInstance, Context, Formula, TimeSet};
use crate::rules::{
    apply_rule, complementary_representative, epistemic_clash, RuleId, TrustMode, TrustRelation,
};

/// How a declared premise participates in derivations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PremiseRole {
    /// A protocol-level agreement every agent signed off on; eligible for
    /// knowledge generalization.
    Tautology,
    /// An observation of one particular run; never generalizable.
    ScenarioFact,
}

impl PremiseRole {
    fn rule(self) -> RuleId {
        match self {
            PremiseRole::Tautology => RuleId::Premise,
            PremiseRole::ScenarioFact => RuleId::ScenarioFact,
        }
    }
}

/// A named input formula.
#[derive(Clone, Debug)]
pub struct PremiseEntry {
    pub name: String,
    pub role: PremiseRole,
    pub formula: Formula,
}

impl PremiseEntry {
    pub fn new(name: &str, role: PremiseRole, formula: Formula) -> Self {
        PremiseEntry {
            name: name.to_string(),
            role,
            formula: formula.canonicalize(),
        }
    }
}

/// Search limits and optional rules.
#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    /// Maximum number of saturation rounds.
    pub max_rounds: usize,
    /// Hard cap on stored formulas; exceeding it aborts the search.
    pub max_formulas: usize,
    /// Enumerate negative introspection (off by default; the protocol
    /// derivations never need it).
    pub enable_negative_introspection: bool,
    /// Enumerate knowledge generalization over tautology premises (off by
    /// default; it only widens the closure).
    pub enable_generalization: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_rounds: 24,
            max_formulas: 200_000,
            enable_negative_introspection: false,
            enable_generalization: false,
        }
    }
}

/// What the search is after.
#[derive(Clone, Debug)]
pub enum SearchGoal {
    /// Stop when this exact formula (canonicalized) is derived.
    Exact(Formula),
    /// Stop at the first self-defeater `K_i(f) & !K_i(f)` for this agent.
    ContradictionFor(Agent),
    /// Stop at the first self-defeater for any agent.
    AnyContradiction,
    /// Run to fixpoint (or the round limit) and keep everything.
    Saturate,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("search aborted at {formulas} formulas without exhausting the frontier")]
    SearchAborted { formulas: usize },
    #[error("contextual derivation rejects untagged premise {name:?}")]
    UntaggedPremise { name: String },
}

/// One stored formula with its provenance.
#[derive(Clone, Debug)]
struct Entry {
    formula: Formula,
    rule: RuleId,
    premises: Vec<usize>,
    tautology: bool,
    note: Option<String>,
}

/// One line of a checkable proof.
#[derive(Clone, Debug)]
pub struct TraceStep {
    /// 1-based position in the trace.
    pub index: usize,
    pub formula: Formula,
    pub rule: RuleId,
    /// 1-based indices of the earlier steps this one consumes.
    pub premises: Vec<usize>,
    /// Whether the step rests on tautology premises only.
    pub tautology: bool,
    /// The declared premise name, for premise steps.
    pub note: Option<String>,
}

/// A self-contained, independently checkable derivation.
#[derive(Clone, Debug)]
pub struct DerivationTrace {
    pub mode: TrustMode,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The final formula of the trace.
    pub fn conclusion(&self) -> &Formula {
        &self.steps.last().expect("trace has steps").formula
    }

    /// Whether some step derives exactly this formula.
    pub fn contains(&self, formula: &Formula) -> bool {
        let wanted = formula.canonicalize();
        self.steps.iter().any(|s| s.formula == wanted)
    }

    /// Numbered lines `n. <formula> [rule: premises i,j]`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let label = step.rule.label(self.mode);
            let detail = match (&step.note, step.premises.is_empty()) {
                (Some(name), _) => name.clone(),
                (None, true) => String::new(),
                (None, false) => format!(
                    "premises {}",
                    step.premises
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            };
            if detail.is_empty() {
                out.push_str(&format!("{}. {} [{}]\n", step.index, step.formula, label));
            } else {
                out.push_str(&format!(
                    "{}. {} [{}: {}]\n",
                    step.index, step.formula, label, detail
                ));
            }
        }
        out
    }

    /// Machine-readable dump of the same content.
    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.to_string(),
            "steps": self
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index,
                        "formula": s.formula.to_string(),
                        "rule": s.rule.label(self.mode),
                        "premises": s.premises,
                        "tautology": s.tautology,
                        "note": s.note,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// The outcome of a [`derive`] call: the full closure plus, when the goal
/// was met, the index of the goal formula.
#[derive(Clone, Debug)]
pub struct Derivation {
    mode: TrustMode,
    entries: Vec<Entry>,
    by_key: HashMap<String, usize>,
    goal_index: Option<usize>,
    rounds: usize,
    fixpoint: bool,
}

impl Derivation {
    pub fn mode(&self) -> TrustMode {
        self.mode
    }

    /// Number of saturation rounds executed.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Whether a round added nothing new (the closure is complete).
    pub fn reached_fixpoint(&self) -> bool {
        self.fixpoint
    }

    /// Number of distinct formulas in the closure.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn goal_met(&self) -> bool {
        self.goal_index.is_some()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.iter().map(|e| &e.formula)
    }

    /// Whether the closure contains exactly this formula.
    pub fn contains(&self, formula: &Formula) -> bool {
        self.by_key
            .contains_key(&formula.canonicalize().to_string())
    }

    /// Whether the closure contains this formula once context tags are
    /// ignored on both sides.
    pub fn contains_up_to_contexts(&self, formula: &Formula) -> bool {
        let wanted = formula.strip_contexts().canonicalize();
        self.formulas()
            .any(|f| f.strip_contexts().canonicalize() == wanted)
    }

    /// The trace of the goal formula, when the goal was met.
    pub fn trace(&self) -> Option<DerivationTrace> {
        self.trace_with_milestones(&[])
    }

    /// The trace of the goal formula, widened to also derive each named
    /// milestone found in the closure. Returns `None` when the goal was not
    /// met or a milestone is absent.
    pub fn trace_with_milestones(&self, milestones: &[&Formula]) -> Option<DerivationTrace> {
        let mut roots = vec![self.goal_index?];
        for milestone in milestones {
            roots.push(self.index_of(milestone)?);
        }
        Some(self.trace_from_roots(roots))
    }

    /// The trace of any single formula in the closure.
    pub fn trace_of(&self, formula: &Formula) -> Option<DerivationTrace> {
        Some(self.trace_from_roots(vec![self.index_of(formula)?]))
    }

    fn index_of(&self, formula: &Formula) -> Option<usize> {
        self.by_key
            .get(&formula.canonicalize().to_string())
            .copied()
    }

    fn trace_from_roots(&self, roots: Vec<usize>) -> DerivationTrace {
        let mut needed = BTreeSet::new();
        let mut stack = roots;
        while let Some(idx) = stack.pop() {
            if needed.insert(idx) {
                stack.extend(self.entries[idx].premises.iter().copied());
            }
        }
        let order: Vec<usize> = needed.into_iter().collect();
        let renumber: HashMap<usize, usize> = order
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new + 1))
            .collect();
        let steps = order
            .iter()
            .enumerate()
            .map(|(new, &old)| {
                let entry = &self.entries[old];
                TraceStep {
                    index: new + 1,
                    formula: entry.formula.clone(),
                    rule: entry.rule.clone(),
                    premises: entry.premises.iter().map(|p| renumber[p]).collect(),
                    tautology: entry.tautology,
                    note: entry.note.clone(),
                }
            })
            .collect();
        DerivationTrace {
            mode: self.mode,
            steps,
        }
    }
}

/// Saturates `premises` under the rule catalog, licensed by `trust`,
/// stopping early when `goal` is met.
pub fn derive(
    premises: &[PremiseEntry],
    trust: &TrustRelation,
    goal: &SearchGoal,
    config: &EngineConfig,
) -> Result<Derivation, EngineError> {
    if trust.mode() == TrustMode::Contextual {
        if let Some(p) = premises.iter().find(|p| !fully_tagged(&p.formula)) {
            return Err(EngineError::UntaggedPremise {
                name: p.name.clone(),
            });
        }
    }
    let goal = match goal {
        SearchGoal::Exact(f) => SearchGoal::Exact(f.canonicalize()),
        other => other.clone(),
    };
    let mut engine = Engine::new(premises, trust, goal, *config);
    engine.run(premises)?;
    Ok(engine.finish())
}

/// A knowledge level: the operator's instance and context tag.
type Level = (AgentInstance, Option<Context>);
/// The part of a level that partner lookups key on (windows may differ).
type LevelKey = (Agent, Option<Context>);

fn level_keys(levels: &[Level]) -> Vec<LevelKey> {
    levels.iter().map(|(i, c)| (i.agent, *c)).collect()
}

/// The chain of knowledge operators from the root down, plus the first
/// non-`Knows` node.
fn spine_of(formula: &Formula) -> (Vec<Level>, &Formula) {
    let mut levels = Vec::new();
    let mut current = formula;
    while let Formula::Knows(instance, context, body) = current {
        levels.push((*instance, *context));
        current = body;
    }
    (levels, current)
}

fn fully_tagged(formula: &Formula) -> bool {
    match formula {
        Formula::Atom(_) => true,
        Formula::Not(f) => fully_tagged(f),
        Formula::And(a, b) | Formula::Implies(a, b) => fully_tagged(a) && fully_tagged(b),
        Formula::Knows(_, c, f) => c.is_some() && fully_tagged(f),
    }
}

fn is_literal(formula: &Formula) -> bool {
    match formula {
        Formula::Atom(_) => true,
        Formula::Not(f) => matches!(**f, Formula::Atom(_)),
        _ => false,
    }
}

struct Engine<'a> {
    trust: &'a TrustRelation,
    goal: SearchGoal,
    config: EngineConfig,
    entries: Vec<Entry>,
    by_key: HashMap<String, usize>,
    /// (depth, level keys) -> formulas whose spine extends that prefix.
    prefix_groups: HashMap<(usize, Vec<LevelKey>), Vec<usize>>,
    /// (depth, level keys) -> formulas with an implication exactly there.
    implication_groups: HashMap<(usize, Vec<LevelKey>), Vec<usize>>,
    /// Introspection targets per agent, harvested from the inputs.
    universe: BTreeMap<Agent, Vec<TimeSet>>,
    depth_cap: usize,
    goal_index: Option<usize>,
    rounds: usize,
    fixpoint: bool,
}

impl<'a> Engine<'a> {
    fn new(
        premises: &[PremiseEntry],
        trust: &'a TrustRelation,
        goal: SearchGoal,
        config: EngineConfig,
    ) -> Self {
        let mut instances = BTreeSet::new();
        for premise in premises {
            premise.formula.instances(&mut instances);
        }
        for (truster, trusted) in trust.pairs() {
            instances.insert(*truster);
            instances.insert(*trusted);
        }
        if let SearchGoal::Exact(f) = &goal {
            f.instances(&mut instances);
        }
        let mut universe: BTreeMap<Agent, BTreeSet<TimeSet>> = BTreeMap::new();
        for instance in &instances {
            universe
                .entry(instance.agent)
                .or_default()
                .insert(instance.times);
        }
        let universe = universe
            .into_iter()
            .map(|(agent, sets)| (agent, sets.into_iter().collect()))
            .collect();
        let goal_depth = match &goal {
            SearchGoal::Exact(f) => f.modal_depth(),
            _ => 0,
        };
        let depth_cap = premises
            .iter()
            .map(|p| p.formula.modal_depth())
            .max()
            .unwrap_or(0)
            .max(goal_depth)
            // Necessitation wraps a tautology in one more operator; leave it
            // room to fire once before the cap closes the search.
            + usize::from(config.enable_generalization);
        Engine {
            trust,
            goal,
            config,
            entries: Vec::new(),
            by_key: HashMap::new(),
            prefix_groups: HashMap::new(),
            implication_groups: HashMap::new(),
            universe,
            depth_cap,
            goal_index: None,
            rounds: 0,
            fixpoint: false,
        }
    }

    fn run(&mut self, premises: &[PremiseEntry]) -> Result<(), EngineError> {
        for premise in premises {
            self.insert(Entry {
                formula: premise.formula.clone(),
                rule: premise.role.rule(),
                premises: Vec::new(),
                tautology: premise.role == PremiseRole::Tautology,
                note: Some(premise.name.clone()),
            })?;
            if self.goal_index.is_some() {
                return Ok(());
            }
        }
        let mut frontier_start = 0;
        while self.rounds < self.config.max_rounds {
            let frontier_end = self.entries.len();
            if frontier_start == frontier_end {
                self.fixpoint = true;
                return Ok(());
            }
            self.rounds += 1;
            for idx in frontier_start..frontier_end {
                self.process(idx)?;
                if self.goal_index.is_some() {
                    return Ok(());
                }
            }
            frontier_start = frontier_end;
        }
        // Out of rounds; a trailing empty frontier still counts as closure.
        if frontier_start == self.entries.len() {
            self.fixpoint = true;
        }
        Ok(())
    }

    /// Applies every candidate rule with `idx` as (one of) the premises.
    /// Partner lookups consult the group indexes, so only formulas sharing
    /// the relevant knowledge-operator prefix are ever paired.
    fn process(&mut self, idx: usize) -> Result<(), EngineError> {
        let formula = self.entries[idx].formula.clone();
        let tautology = self.entries[idx].tautology;
        let (levels, base) = spine_of(&formula);
        let depth = levels.len();
        let keys = level_keys(&levels);
        let mut pending: Vec<(RuleId, Vec<usize>)> = Vec::new();

        // Trust: absorb a licensed inner operator anywhere down the spine.
        for d in 0..depth.saturating_sub(1) {
            pending.push((RuleId::Trust { depth: d }, vec![idx]));
        }
        // Conjunction elimination at the base.
        if matches!(base, Formula::And(_, _)) {
            pending.push((
                RuleId::AndElim {
                    depth,
                    right: false,
                },
                vec![idx],
            ));
            pending.push((RuleId::AndElim { depth, right: true }, vec![idx]));
            if depth == 1 {
                pending.push((RuleId::ConditionS, vec![idx]));
            }
        }
        // Positive introspection at the two outermost operators, with
        // targets limited to windows the inputs mention.
        for (d, (source, _)) in levels.iter().enumerate().take(depth.min(2)) {
            if let Some(targets) = self.universe.get(&source.agent) {
                for &target in targets {
                    if target.earliest() >= source.times.earliest() {
                        pending.push((
                            RuleId::PositiveIntrospection { depth: d, target },
                            vec![idx],
                        ));
                    }
                }
            }
        }
        if self.config.enable_negative_introspection && depth <= 1 {
            if let Formula::Not(inner) = base {
                if matches!(**inner, Formula::Knows(_, _, _)) {
                    pending.push((RuleId::NegativeIntrospection { depth }, vec![idx]));
                }
            }
        }
        if self.config.enable_generalization
            && self.trust.mode() == TrustMode::Naive
            && tautology
        {
            for (&agent, sets) in &self.universe {
                for &times in sets {
                    pending.push((
                        RuleId::KnowledgeGeneralization {
                            target: AgentInstance::new(agent, times),
                            context: None,
                        },
                        vec![idx],
                    ));
                }
            }
        }
        // As a fact, against every implication sharing a prefix of its spine.
        for d in 0..=depth {
            if let Some(partners) = self.implication_groups.get(&(d, keys[..d].to_vec())) {
                for &j in partners {
                    pending.push((RuleId::Distribution { depth: d }, vec![idx, j]));
                }
            }
        }
        // As an implication, against every fact and implication sharing its
        // whole spine.
        if matches!(base, Formula::Implies(_, _)) {
            if let Some(partners) = self.prefix_groups.get(&(depth, keys.clone())) {
                for &j in partners {
                    pending.push((RuleId::Distribution { depth }, vec![j, idx]));
                }
            }
            if let Some(partners) = self.implication_groups.get(&(depth, keys.clone())) {
                for &j in partners {
                    pending.push((RuleId::Syllogism { depth }, vec![idx, j]));
                    pending.push((RuleId::Syllogism { depth }, vec![j, idx]));
                }
            }
        }
        // Merging two knowledge claims of one agent into a known
        // conjunction is enumerated only for complementary literal bodies —
        // the shape the self-defeater lift consumes.
        if depth >= 1 && is_literal(base) {
            if let Some(partners) = self.prefix_groups.get(&(depth - 1, keys[..depth - 1].to_vec()))
            {
                for &j in partners {
                    let (other_levels, other_base) = spine_of(&self.entries[j].formula);
                    if other_levels.len() == depth
                        && is_literal(other_base)
                        && complementary_representative(base, other_base).is_some()
                    {
                        pending.push((RuleId::KAndMerge { depth: depth - 1 }, vec![idx, j]));
                    }
                }
            }
        }

        for (rule, premise_indices) in pending {
            let inputs: Vec<&Formula> = premise_indices
                .iter()
                .map(|&i| &self.entries[i].formula)
                .collect();
            let Some(conclusion) = apply_rule(&rule, &inputs, self.trust) else {
                continue;
            };
            if conclusion.modal_depth() > self.depth_cap {
                continue;
            }
            let tautology = premise_indices.iter().all(|&i| self.entries[i].tautology);
            self.insert(Entry {
                formula: conclusion,
                rule,
                premises: premise_indices,
                tautology,
                note: None,
            })?;
            if self.goal_index.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }

    fn insert(&mut self, entry: Entry) -> Result<(), EngineError> {
        let key = entry.formula.to_string();
        if self.by_key.contains_key(&key) {
            return Ok(());
        }
        if self.entries.len() >= self.config.max_formulas {
            return Err(EngineError::SearchAborted {
                formulas: self.entries.len(),
            });
        }
        let idx = self.entries.len();
        let (levels, base) = spine_of(&entry.formula);
        let keys = level_keys(&levels);
        for d in 0..=levels.len() {
            self.prefix_groups
                .entry((d, keys[..d].to_vec()))
                .or_default()
                .push(idx);
        }
        if matches!(base, Formula::Implies(_, _)) {
            self.implication_groups
                .entry((levels.len(), keys))
                .or_default()
                .push(idx);
        }
        let met = match &self.goal {
            SearchGoal::Exact(f) => entry.formula == *f,
            SearchGoal::ContradictionFor(agent) => {
                epistemic_clash(&entry.formula).is_some_and(|i| i.agent == *agent)
            }
            SearchGoal::AnyContradiction => epistemic_clash(&entry.formula).is_some(),
            SearchGoal::Saturate => false,
        };
        self.by_key.insert(key, idx);
        self.entries.push(entry);
        if met {
            self.goal_index = Some(idx);
        }
        Ok(())
    }

    fn finish(self) -> Derivation {
        Derivation {
            mode: self.trust.mode(),
            entries: self.entries,
            by_key: self.by_key,
            goal_index: self.goal_index,
            rounds: self.rounds,
            fixpoint: self.fixpoint,
        }
    }
}

/// Why an offered trace was rejected.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace is empty")]
    Empty,
    #[error("step {index}: steps must be numbered 1..n in order")]
    BadNumbering { index: usize },
    #[error("step {index}: premise references must point at earlier steps")]
    BadReference { index: usize },
    #[error("step {index}: {name:?} is not a declared premise with this role and formula")]
    UnknownPremise { index: usize, name: String },
    #[error("step {index}: rule {rule:?} does not produce this formula from its premises")]
    RuleMismatch { index: usize, rule: String },
    #[error("step {index}: tautology flag disagrees with the cited premises")]
    BadTautologyFlag { index: usize },
    #[error("step {index}: knowledge generalization requires a tautology premise")]
    GeneralizationFromFact { index: usize },
}

/// Independent validator: replays every step of `trace` against the
/// declared premises and the rule catalog. Accepts exactly the traces whose
/// steps are either declared premises (cited by name) or rule applications
/// reproducible by [`apply_rule`].
pub fn check_trace(
    trace: &DerivationTrace,
    declared: &[PremiseEntry],
    trust: &TrustRelation,
) -> Result<(), TraceError> {
    if trace.steps.is_empty() {
        return Err(TraceError::Empty);
    }
    for (position, step) in trace.steps.iter().enumerate() {
        let index = position + 1;
        if step.index != index {
            return Err(TraceError::BadNumbering { index });
        }
        match step.rule {
            RuleId::Premise | RuleId::ScenarioFact => {
                if !step.premises.is_empty() {
                    return Err(TraceError::BadReference { index });
                }
                let name = step.note.clone().unwrap_or_default();
                let matches_declaration = declared.iter().any(|p| {
                    p.name == name
                        && p.role.rule() == step.rule
                        && p.formula == step.formula
                });
                if !matches_declaration {
                    return Err(TraceError::UnknownPremise { index, name });
                }
                let expected = step.rule == RuleId::Premise;
                if step.tautology != expected {
                    return Err(TraceError::BadTautologyFlag { index });
                }
            }
            ref rule => {
                if step.premises.iter().any(|&p| p == 0 || p >= index) {
                    return Err(TraceError::BadReference { index });
                }
                let inputs: Vec<&Formula> = step
                    .premises
                    .iter()
                    .map(|&p| &trace.steps[p - 1].formula)
                    .collect();
                if apply_rule(rule, &inputs, trust).as_ref() != Some(&step.formula) {
                    return Err(TraceError::RuleMismatch {
                        index,
                        rule: rule.label(trace.mode),
                    });
                }
                if let RuleId::KnowledgeGeneralization { .. } = rule {
                    if !trace.steps[step.premises[0] - 1].tautology {
                        return Err(TraceError::GeneralizationFromFact { index });
                    }
                }
                let expected = step
                    .premises
                    .iter()
                    .all(|&p| trace.steps[p - 1].tautology);
                if step.tautology != expected {
                    return Err(TraceError::BadTautologyFlag { index });
                }
            }
        }
    }
    Ok(())
}
