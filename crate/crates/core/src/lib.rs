//! Qualitative decision and game theory over belief and desire rules.
//!
//! An agent system specification assigns each agent decision atoms, facts,
//! belief rules, prioritised desire rules and an initial decision. From it
//! this crate computes rule extensions, feasible decision profiles, the
//! preference orders induced by unreached desires, the usual solution
//! concepts (Pareto, strongly Pareto, dominant, Nash) and joint goal sets.

pub mod checks;
pub mod cli;
pub mod decision;
pub mod extension;
pub mod game;
pub mod goals;
pub mod instances;
pub mod logic;
pub mod model;

mod error;

pub use error::Error;
