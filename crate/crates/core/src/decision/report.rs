use std::collections::BTreeSet;

use super::{joint_extension, DecisionProfile};
use crate::error::Error;
use crate::extension::{Extension, RuleId};
use crate::logic::Reasoner;
use crate::model::AgentSystemSpec;

/// Classification of one agent's desires against a joint extension `E`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AgentDesires {
    /// `E ⊨ x` and `E ⊭ y`.
    pub unreached: BTreeSet<RuleId>,
    /// `E ⊨ x ∧ y`.
    pub reached: BTreeSet<RuleId>,
    /// `E ⊨ x ∧ ¬y`; a subset of `unreached` for consistent `E`.
    pub violated: BTreeSet<RuleId>,
    /// `E ⊭ x`.
    pub inapplicable: BTreeSet<RuleId>,
}

/// Per-agent desire classification, indexed by agent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DesireReport {
    pub agents: Vec<AgentDesires>,
}

impl DesireReport {
    pub fn unreached(&self, agent: crate::logic::AgentId) -> &BTreeSet<RuleId> {
        &self.agents[agent.0].unreached
    }

    /// The tuple of unreached sets, which decides indistinguishability.
    pub fn unreached_key(&self) -> Vec<BTreeSet<RuleId>> {
        self.agents.iter().map(|a| a.unreached.clone()).collect()
    }
}

/// Classifies every agent's desires against an already computed joint
/// extension. The extension must be consistent.
pub fn report_for_extension(
    spec: &AgentSystemSpec,
    joint: &Extension,
    reasoner: &Reasoner,
) -> Result<DesireReport, Error> {
    let e = joint.formulas();
    let mut agents = Vec::with_capacity(spec.agents.len());
    for agent in &spec.agents {
        let mut out = AgentDesires::default();
        for d in &agent.desires {
            if !reasoner.entails(&e, &d.antecedent)? {
                out.inapplicable.insert(d.id.clone());
                continue;
            }
            if reasoner.entails(&e, &d.consequent)? {
                out.reached.insert(d.id.clone());
            } else {
                out.unreached.insert(d.id.clone());
                if reasoner.entails(&e, &d.consequent.clone().not())? {
                    out.violated.insert(d.id.clone());
                }
            }
        }
        agents.push(out);
    }
    Ok(DesireReport { agents })
}

/// Desire classification for a feasible profile. Unreached desires are
/// undefined on inconsistent extensions, so infeasible profiles are errors.
pub fn desire_report(spec: &AgentSystemSpec, profile: &DecisionProfile) -> Result<DesireReport, Error> {
    let joint = joint_extension(spec, profile)?;
    if !joint.consistent {
        return Err(Error::InfeasibleProfile(profile.display(spec)));
    }
    report_for_extension(spec, &joint, &spec.reasoner())
}
