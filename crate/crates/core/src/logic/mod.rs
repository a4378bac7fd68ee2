//! Propositional vocabulary, formulas, parsing and classical entailment.

mod entail;
mod formula;
mod parser;
mod vocabulary;

use thiserror::Error;

pub use entail::{Reasoner, DEFAULT_MAX_ATOMS};
pub use formula::{display_set, DisplayFormula, Formula, FormulaSet};
pub use parser::parse_formula;
pub use vocabulary::{is_identifier, is_reserved, AgentId, Atom, AtomClass, AtomId, Sublanguage, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared atom `{name}` at offset {offset}")]
    UndeclaredAtom { name: String, offset: usize },
    #[error("atom `{0}` declared more than once")]
    DuplicateAtom(String),
    #[error("`{0}` is not a valid atom name")]
    InvalidAtomName(String),
    #[error("entailment query ranges over {count} atoms, above the bound of {bound}")]
    VocabularyOverflow { count: usize, bound: usize },
}
