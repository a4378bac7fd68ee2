//! Agent system specifications: agents with decision atoms, facts, belief
//! and desire rules, desire priorities and initial decisions.

mod dsl;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use dsl::{parse_spec, print_spec};
pub use validate::{validate_spec, ValidationReport, Violation, ViolationKind, Warning};

use crate::decision::DecisionMode;
use crate::extension::{Rule, RuleId};
use crate::logic::{AgentId, AtomId, Formula, FormulaSet, Reasoner, Vocabulary, DEFAULT_MAX_ATOMS};

/// Default cap on enumerated candidates (decisions, profiles, goal sets).
pub const DEFAULT_MAX_ENUMERATION: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    UndeclaredAtom {
        line: usize,
        column: usize,
        name: String,
    },
    Duplicate {
        line: usize,
        what: &'static str,
        name: String,
    },
    NoAgents,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Syntax { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            SpecError::UndeclaredAtom { line, column, name } => {
                write!(f, "line {line}, column {column}: undeclared atom `{name}`")
            }
            SpecError::Duplicate { line, what, name } => {
                write!(f, "line {line}: duplicate {what} `{name}`")
            }
            SpecError::NoAgents => f.write_str("at least one agent is required"),
        }
    }
}

impl std::error::Error for SpecError {}

/// A literal over a decision atom. Positive literals sort before negative
/// ones on the same atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: AtomId,
    pub negated: bool,
}

impl Literal {
    pub fn positive(atom: AtomId) -> Self {
        Literal { atom, negated: false }
    }

    pub fn negative(atom: AtomId) -> Self {
        Literal { atom, negated: true }
    }

    pub fn to_formula(self) -> Formula {
        Formula::literal(self.atom, !self.negated)
    }

    pub fn complement(self) -> Self {
        Literal {
            atom: self.atom,
            negated: !self.negated,
        }
    }

    pub fn to_source(self, vocabulary: &Vocabulary) -> String {
        let name = vocabulary.name(self.atom);
        if self.negated {
            format!("!{name}")
        } else {
            name.to_string()
        }
    }
}

pub type LiteralSet = BTreeSet<Literal>;

/// True iff no atom occurs with both polarities.
pub fn literals_consistent(lits: &LiteralSet) -> bool {
    lits.iter().all(|l| !lits.contains(&l.complement()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorityMode {
    /// Strict total ranking; higher rank means higher priority.
    Ranked,
    /// `d >= d'` only when `d = d'`; no desire outranks another.
    Identity,
}

impl PriorityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PriorityMode::Ranked => "ranked",
            PriorityMode::Identity => "identity",
        }
    }
}

/// Priority over one agent's desire rules.
///
/// Every desire of the agent has an entry; in ranked mode the entry carries
/// its rank (absent only in specs that fail validation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityOrder {
    mode: PriorityMode,
    entries: BTreeMap<RuleId, Option<u32>>,
}

impl PriorityOrder {
    pub fn identity<I: IntoIterator<Item = RuleId>>(desires: I) -> Self {
        PriorityOrder {
            mode: PriorityMode::Identity,
            entries: desires.into_iter().map(|d| (d, None)).collect(),
        }
    }

    pub fn ranked<I: IntoIterator<Item = (RuleId, u32)>>(ranks: I) -> Self {
        PriorityOrder {
            mode: PriorityMode::Ranked,
            entries: ranks.into_iter().map(|(d, r)| (d, Some(r))).collect(),
        }
    }

    /// Ranked order that may leave some desires unranked.
    pub fn ranked_partial<I: IntoIterator<Item = (RuleId, Option<u32>)>>(ranks: I) -> Self {
        PriorityOrder {
            mode: PriorityMode::Ranked,
            entries: ranks.into_iter().collect(),
        }
    }

    pub fn mode(&self) -> PriorityMode {
        self.mode
    }

    pub fn contains(&self, id: &RuleId) -> bool {
        self.entries.contains_key(id)
    }

    pub fn rank(&self, id: &RuleId) -> Option<u32> {
        self.entries.get(id).copied().flatten()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&RuleId, Option<u32>)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    /// Strict priority `higher > lower`.
    pub fn is_above(&self, higher: &RuleId, lower: &RuleId) -> bool {
        match self.mode {
            PriorityMode::Identity => false,
            PriorityMode::Ranked => match (self.rank(higher), self.rank(lower)) {
                (Some(h), Some(l)) => h > l,
                _ => false,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSpec {
    pub name: String,
    pub decision_atoms: Vec<AtomId>,
    pub facts: FormulaSet,
    pub beliefs: Vec<Rule>,
    pub desires: Vec<Rule>,
    pub priority: PriorityOrder,
    pub initial_decision: LiteralSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecOptions {
    pub decision_mode: DecisionMode,
    pub max_atoms: usize,
    pub max_enumeration: usize,
}

impl Default for SpecOptions {
    fn default() -> Self {
        SpecOptions {
            decision_mode: DecisionMode::LiteralSubsets,
            max_atoms: DEFAULT_MAX_ATOMS,
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentSystemSpec {
    pub name: String,
    pub vocabulary: Vocabulary,
    pub agents: Vec<AgentSpec>,
    pub options: SpecOptions,
}

impl AgentSystemSpec {
    pub fn reasoner(&self) -> Reasoner {
        Reasoner::new(self.options.max_atoms)
    }

    pub fn agent(&self, id: AgentId) -> &AgentSpec {
        &self.agents[id.0]
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len()).map(AgentId)
    }

    pub fn agent_by_name(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a.name == name).map(AgentId)
    }

    pub fn world_atoms(&self) -> Vec<AtomId> {
        self.vocabulary.world_atoms()
    }

    /// The joint desire set, agent by agent in declaration order.
    pub fn all_desires(&self) -> impl Iterator<Item = &Rule> {
        self.agents.iter().flat_map(|a| a.desires.iter())
    }

    pub fn all_beliefs(&self) -> impl Iterator<Item = &Rule> {
        self.agents.iter().flat_map(|a| a.beliefs.iter())
    }

    /// All facts `F = F_1 ∪ ... ∪ F_n`.
    pub fn facts(&self) -> FormulaSet {
        self.agents.iter().flat_map(|a| a.facts.iter().cloned()).collect()
    }

    pub fn with_decision_mode(mut self, mode: DecisionMode) -> Self {
        self.options.decision_mode = mode;
        self
    }

    pub fn with_max_atoms(mut self, max_atoms: usize) -> Self {
        self.options.max_atoms = max_atoms;
        self
    }

    pub fn with_max_enumeration(mut self, cap: usize) -> Self {
        self.options.max_enumeration = cap;
        self
    }

    /// Renders a literal set such as `[a, !b]`.
    pub fn literals_to_strings(&self, lits: &LiteralSet) -> Vec<String> {
        lits.iter().map(|l| l.to_source(&self.vocabulary)).collect()
    }
}
