use thiserror::Error;

use crate::logic::LogicError;
use crate::model::SpecError;

/// Errors raised by the solver layers above the logic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{what}: {count} candidates exceed the enumeration cap of {cap}")]
    Bound { what: String, count: u128, cap: usize },
    #[error("profile {0} is infeasible: its joint belief extension is inconsistent")]
    InfeasibleProfile(String),
    #[error("rule `{0}` is not in the priority order of the compared agent")]
    ForeignRule(String),
    #[error("profile family is not U-closed")]
    NotUClosed,
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("profile does not match the agent system: {0}")]
    MalformedProfile(String),
}

/// Counts `base^exponent` candidates and fails when the count exceeds `cap`.
pub(crate) fn check_bound(what: &str, base: u128, exponent: usize, cap: usize) -> Result<u128, Error> {
    let mut count: u128 = 1;
    for _ in 0..exponent {
        count = count.saturating_mul(base);
        if count > cap as u128 {
            return Err(Error::Bound {
                what: what.to_string(),
                count: base.saturating_pow(exponent.min(u32::MAX as usize) as u32),
                cap,
            });
        }
    }
    Ok(count)
}
