use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// Index of an agent inside an agent system, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Index of an atom in a [`Vocabulary`]. Ids follow the lexicographic order
/// of atom names, so the derived ordering on ids is the name ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Whether an atom is a decision variable of some agent or a world parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomClass {
    Decision(AgentId),
    World,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub class: AtomClass,
}

/// The partitioned set of atoms: per-agent decision atoms plus world atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    atoms: Vec<Atom>,
    index: HashMap<String, AtomId>,
}

/// Sublanguages of the full propositional language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sublanguage {
    /// Formulas over one agent's decision atoms only.
    Agent(AgentId),
    /// Formulas over world atoms only.
    World,
    /// Unrestricted.
    All,
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_reserved(name: &str) -> bool {
    matches!(name, "true" | "false")
}

impl Vocabulary {
    /// Builds a vocabulary from declarations. Atoms are re-indexed in name
    /// order; duplicate or malformed names are rejected.
    pub fn new<I, S>(declarations: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = (S, AtomClass)>,
        S: Into<String>,
    {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut seen: HashMap<String, AtomClass> = HashMap::new();
        for (name, class) in declarations {
            let name = name.into();
            if !is_identifier(&name) || is_reserved(&name) {
                return Err(LogicError::InvalidAtomName(name));
            }
            if seen.insert(name.clone(), class).is_some() {
                return Err(LogicError::DuplicateAtom(name));
            }
            atoms.push(Atom { name, class });
        }
        atoms.sort_by(|a, b| a.name.cmp(&b.name));
        let index = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.name.clone(), AtomId(i as u32)))
            .collect();
        Ok(Vocabulary { atoms, index })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id.index()]
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.atoms[id.index()].name
    }

    pub fn class(&self, id: AtomId) -> AtomClass {
        self.atoms[id.index()].class
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.atoms.len()).map(|i| AtomId(i as u32))
    }

    pub fn world_atoms(&self) -> Vec<AtomId> {
        self.ids().filter(|&id| self.class(id) == AtomClass::World).collect()
    }

    /// Decision atoms of `agent`, in name order.
    pub fn decision_atoms(&self, agent: AgentId) -> Vec<AtomId> {
        self.ids()
            .filter(|&id| self.class(id) == AtomClass::Decision(agent))
            .collect()
    }

    pub fn in_sublanguage(&self, id: AtomId, lang: Sublanguage) -> bool {
        match lang {
            Sublanguage::All => true,
            Sublanguage::World => self.class(id) == AtomClass::World,
            Sublanguage::Agent(agent) => self.class(id) == AtomClass::Decision(agent),
        }
    }
}
