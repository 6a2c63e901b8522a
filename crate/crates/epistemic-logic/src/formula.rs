//! Formulas of a multi-agent epistemic logic whose knowledge operators are
//! indexed by an agent, a set of protocol steps, and optionally the
//! measurement context the agent reasons in.
//!
//! `K[a@T](f)` reads "a knows f throughout every step in T". Time sets are
//! subsets of the protocol steps 0..=4; an operator with a larger window
//! makes the *stronger* claim, so `K[a@T](f)` covers `K[a@T'](f)` whenever
//! T' is contained in T. Formulas have a canonical form (conjunctions
//! flattened, sorted, and right-nested) and a canonical printing, which the
//! derivation engine uses as its identity key.

use std::collections::BTreeSet;
use std::fmt;

use fr_protocol::{Agent, Scenario, SystemOutcome, WignerOutcome};

/// A nonempty-by-convention subset of the protocol steps 0..=4, stored as a
/// five-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TimeSet(u8);

impl TimeSet {
    pub const MAX_TIME: u8 = 4;
    const MASK: u8 = 0b1_1111;

    pub fn empty() -> Self {
        TimeSet(0)
    }

    pub fn full() -> Self {
        TimeSet(Self::MASK)
    }

    pub fn single(t: u8) -> Option<Self> {
        (t <= Self::MAX_TIME).then(|| TimeSet(1 << t))
    }

    pub fn from_times(times: &[u8]) -> Option<Self> {
        let mut bits = 0u8;
        for &t in times {
            if t > Self::MAX_TIME {
                return None;
            }
            bits |= 1 << t;
        }
        Some(TimeSet(bits))
    }

    /// The steps strictly before `t`: `{0, .., t-1}`.
    pub fn before(t: u8) -> Option<Self> {
        (1..=Self::MAX_TIME + 1)
            .contains(&t)
            .then(|| TimeSet(((1u16 << t) - 1) as u8))
    }

    /// The steps from `t` on: `{t, .., 4}`.
    pub fn at_least(t: u8) -> Option<Self> {
        (t <= Self::MAX_TIME).then(|| TimeSet(Self::MASK & !(((1u16 << t) - 1) as u8)))
    }

    pub fn contains(self, t: u8) -> bool {
        t <= Self::MAX_TIME && self.0 & (1 << t) != 0
    }

    pub fn is_subset(self, other: TimeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: TimeSet) -> TimeSet {
        TimeSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    /// The earliest step in the window (`None` when empty).
    pub fn earliest(self) -> Option<u8> {
        self.iter().next()
    }

    /// The latest step in the window (`None` when empty).
    pub fn latest(self) -> Option<u8> {
        self.iter().last()
    }

    pub fn iter(self) -> impl Iterator<Item = u8> {
        (0..=Self::MAX_TIME).filter(move |&t| self.contains(t))
    }
}

impl fmt::Display for TimeSet {
    /// Canonical forms: `<k` for {0..k-1} (two or more steps), `>=k` for
    /// {k..4} (two or more steps), otherwise a comma list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let (min, max) = (self.earliest().unwrap(), self.latest().unwrap());
        let contiguous = self.len() == (max - min + 1) as u32;
        if contiguous && self.len() >= 2 {
            if min == 0 {
                return write!(f, "<{}", max + 1);
            }
            if max == Self::MAX_TIME {
                return write!(f, ">={min}");
            }
        }
        let mut first = true;
        for t in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A measurement context an agent may be confined to: the record-reading
/// (product-basis) context of the friends, or the flip-basis context of the
/// outside observers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Context {
    C1,
    C2,
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Context::C1 => "C1",
            Context::C2 => "C2",
        })
    }
}

/// An agent holding knowledge throughout a window of protocol steps.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AgentInstance {
    pub agent: Agent,
    pub times: TimeSet,
}

impl AgentInstance {
    pub fn new(agent: Agent, times: TimeSet) -> Self {
        AgentInstance { agent, times }
    }
}

impl fmt::Display for AgentInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.agent, self.times)
    }
}

/// The eight primitive facts of a round: each spin's recorded value and each
/// flip measurement's announced outcome.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    S1Phi,
    S1Psi,
    S2Phi,
    S2Psi,
    PchiL1Nonnull,
    PchiL1Null,
    PchiL2Nonnull,
    PchiL2Null,
}

impl Atom {
    pub const ALL: [Atom; 8] = [
        Atom::S1Phi,
        Atom::S1Psi,
        Atom::S2Phi,
        Atom::S2Psi,
        Atom::PchiL1Nonnull,
        Atom::PchiL1Null,
        Atom::PchiL2Nonnull,
        Atom::PchiL2Null,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Atom::S1Phi => "S1=phi",
            Atom::S1Psi => "S1=psi",
            Atom::S2Phi => "S2=phi",
            Atom::S2Psi => "S2=psi",
            Atom::PchiL1Nonnull => "PchiL1!=0",
            Atom::PchiL1Null => "PchiL1=0",
            Atom::PchiL2Nonnull => "PchiL2!=0",
            Atom::PchiL2Null => "PchiL2=0",
        }
    }

    /// The atom asserting the opposite outcome of the same measurement.
    pub fn complement(self) -> Atom {
        match self {
            Atom::S1Phi => Atom::S1Psi,
            Atom::S1Psi => Atom::S1Phi,
            Atom::S2Phi => Atom::S2Psi,
            Atom::S2Psi => Atom::S2Phi,
            Atom::PchiL1Nonnull => Atom::PchiL1Null,
            Atom::PchiL1Null => Atom::PchiL1Nonnull,
            Atom::PchiL2Nonnull => Atom::PchiL2Null,
            Atom::PchiL2Null => Atom::PchiL2Nonnull,
        }
    }

    /// Whether the atom holds in a sampled scenario.
    pub fn holds_in(self, scenario: &Scenario) -> bool {
        match self {
            Atom::S1Phi => scenario.f1 == SystemOutcome::Phi,
            Atom::S1Psi => scenario.f1 == SystemOutcome::Psi,
            Atom::S2Phi => scenario.f2 == SystemOutcome::Phi,
            Atom::S2Psi => scenario.f2 == SystemOutcome::Psi,
            Atom::PchiL1Nonnull => scenario.w1 == WignerOutcome::Nonnull,
            Atom::PchiL1Null => scenario.w1 == WignerOutcome::Null,
            Atom::PchiL2Nonnull => scenario.w2 == WignerOutcome::Nonnull,
            Atom::PchiL2Null => scenario.w2 == WignerOutcome::Null,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A formula. The variant order fixes the structural ordering used to sort
/// conjunctions: atoms, then knowledge, then negations, then compounds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Knows(AgentInstance, Option<Context>, Box<Formula>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    /// Constructor named for symmetry with [`Formula::and`] and
    /// [`Formula::implies`]; the operator trait would read worse at call
    /// sites that pass owned formulas.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction in canonical (sorted) order.
    pub fn and(a: Formula, b: Formula) -> Formula {
        if a <= b {
            Formula::And(Box::new(a), Box::new(b))
        } else {
            Formula::And(Box::new(b), Box::new(a))
        }
    }

    pub fn implies(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Implies(Box::new(antecedent), Box::new(consequent))
    }

    pub fn knows(instance: AgentInstance, body: Formula) -> Formula {
        Formula::Knows(instance, None, Box::new(body))
    }

    pub fn knows_in(instance: AgentInstance, context: Context, body: Formula) -> Formula {
        Formula::Knows(instance, Some(context), Box::new(body))
    }

    /// Canonical form: conjunctions flattened, children canonicalized,
    /// sorted structurally, and rebuilt right-nested.
    pub fn canonicalize(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(*a),
            Formula::Not(f) => Formula::not(f.canonicalize()),
            Formula::Implies(a, b) => Formula::implies(a.canonicalize(), b.canonicalize()),
            Formula::Knows(i, c, f) => Formula::Knows(*i, *c, Box::new(f.canonicalize())),
            Formula::And(_, _) => {
                let mut children = Vec::new();
                self.collect_and_children(&mut children);
                let mut children: Vec<Formula> =
                    children.into_iter().map(|f| f.canonicalize()).collect();
                children.sort();
                let mut iter = children.into_iter().rev();
                let last = iter.next().expect("conjunction has children");
                iter.fold(last, |acc, f| {
                    Formula::And(Box::new(f), Box::new(acc))
                })
            }
        }
    }

    fn collect_and_children<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::And(a, b) => {
                a.collect_and_children(out);
                b.collect_and_children(out);
            }
            other => out.push(other),
        }
    }

    /// Nesting depth of knowledge operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(a, b) | Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Knows(_, _, f) => 1 + f.modal_depth(),
        }
    }

    /// Structural entailment: `self` covers `other` when `self` makes the
    /// same claim with knowledge windows at least as wide. Knowledge is
    /// covariant (a wider window knows more), implication antecedents are
    /// contravariant, negation flips direction, and context tags must match
    /// exactly.
    pub fn subsumes(&self, other: &Formula) -> bool {
        match (self, other) {
            (Formula::Atom(a), Formula::Atom(b)) => a == b,
            (Formula::Not(a), Formula::Not(b)) => b.subsumes(a),
            (Formula::And(a1, a2), Formula::And(b1, b2)) => {
                (a1.subsumes(b1) && a2.subsumes(b2)) || (a1.subsumes(b2) && a2.subsumes(b1))
            }
            (Formula::Implies(a1, c1), Formula::Implies(a2, c2)) => {
                a2.subsumes(a1) && c1.subsumes(c2)
            }
            (Formula::Knows(i, ci, a), Formula::Knows(j, cj, b)) => {
                i.agent == j.agent && j.times.is_subset(i.times) && ci == cj && a.subsumes(b)
            }
            _ => false,
        }
    }

    /// Every agent instance occurring in the formula.
    pub fn instances(&self, out: &mut BTreeSet<AgentInstance>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(f) => f.instances(out),
            Formula::And(a, b) | Formula::Implies(a, b) => {
                a.instances(out);
                b.instances(out);
            }
            Formula::Knows(i, _, f) => {
                out.insert(*i);
                f.instances(out);
            }
        }
    }

    /// The same formula with all context tags removed.
    pub fn strip_contexts(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(*a),
            Formula::Not(f) => Formula::not(f.strip_contexts()),
            Formula::And(a, b) => Formula::and(a.strip_contexts(), b.strip_contexts()),
            Formula::Implies(a, b) => Formula::implies(a.strip_contexts(), b.strip_contexts()),
            Formula::Knows(i, _, f) => Formula::Knows(*i, None, Box::new(f.strip_contexts())),
        }
    }

    /// The same formula with every knowledge operator tagged by its agent's
    /// context.
    pub fn with_agent_contexts(&self, context_of: fn(Agent) -> Context) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(*a),
            Formula::Not(f) => Formula::not(f.with_agent_contexts(context_of)),
            Formula::And(a, b) => Formula::and(
                a.with_agent_contexts(context_of),
                b.with_agent_contexts(context_of),
            ),
            Formula::Implies(a, b) => Formula::implies(
                a.with_agent_contexts(context_of),
                b.with_agent_contexts(context_of),
            ),
            Formula::Knows(i, _, f) => Formula::Knows(
                *i,
                Some(context_of(i.agent)),
                Box::new(f.with_agent_contexts(context_of)),
            ),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(_, _) => 1,
            Formula::And(_, _) => 2,
            Formula::Not(_) => 3,
            Formula::Atom(_) | Formula::Knows(_, _, _) => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ambient: u8) -> fmt::Result {
        let mine = self.precedence();
        let parens = mine < ambient;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_prec(f, 3)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Knows(i, c, body) => {
                match c {
                    Some(ctx) => write!(f, "K[{i}|{ctx}](")?,
                    None => write!(f, "K[{i}](")?,
                }
                body.fmt_prec(f, 0)?;
                f.write_str(")")?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
