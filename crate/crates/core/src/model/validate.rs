use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{literals_consistent, AgentSystemSpec, PriorityMode};
use crate::logic::{AtomClass, LogicError, Sublanguage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    BeliefConsequentNotInWorld,
    FactNotInWorld,
    PriorityNotTotal,
    InitialDecisionInconsistent,
    InitialDecisionForeignAtom,
    CrossAgentPriority,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::BeliefConsequentNotInWorld => "belief-consequent-not-in-L_W",
            ViolationKind::FactNotInWorld => "fact-not-in-L_W",
            ViolationKind::PriorityNotTotal => "priority-not-total",
            ViolationKind::InitialDecisionInconsistent => "initial-decision-inconsistent",
            ViolationKind::InitialDecisionForeignAtom => "initial-decision-foreign-atom",
            ViolationKind::CrossAgentPriority => "cross-agent-priority",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub agent: String,
    /// The offending item: a rule id, a printed fact, or a description.
    pub subject: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (agent `{}`): {}", self.kind.as_str(), self.agent, self.subject)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Warning {
    /// The union of all agents' facts is inconsistent, so no profile can be
    /// feasible.
    FactsInconsistent,
    /// Consistency of the facts could not be decided within the atom bound.
    FactsUndecided(String),
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::FactsInconsistent => f.write_str("the joint facts are inconsistent"),
            Warning::FactsUndecided(e) => write!(f, "fact consistency undecided: {e}"),
        }
    }
}

/// Violations sorted canonically, plus non-fatal warnings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks rule typing, fact typing, priority totality and initial decisions.
pub fn validate_spec(spec: &AgentSystemSpec) -> ValidationReport {
    let v = &spec.vocabulary;
    let mut violations = BTreeSet::new();
    let mut push = |kind, agent: &str, subject: String| {
        violations.insert(Violation {
            kind,
            agent: agent.to_string(),
            subject,
        });
    };

    let mut desire_owner: BTreeMap<&str, &str> = BTreeMap::new();
    for agent in &spec.agents {
        for d in &agent.desires {
            desire_owner.insert(d.id.as_str(), &agent.name);
        }
    }

    for (index, agent) in spec.agents.iter().enumerate() {
        let name = agent.name.as_str();
        for fact in &agent.facts {
            if !fact.in_sublanguage(v, Sublanguage::World) {
                push(ViolationKind::FactNotInWorld, name, fact.to_source(v));
            }
        }
        for rule in &agent.beliefs {
            if !rule.consequent.in_sublanguage(v, Sublanguage::World) {
                push(ViolationKind::BeliefConsequentNotInWorld, name, rule.id.to_string());
            }
        }

        if !literals_consistent(&agent.initial_decision) {
            push(
                ViolationKind::InitialDecisionInconsistent,
                name,
                spec.literals_to_strings(&agent.initial_decision).join(", "),
            );
        }
        for lit in &agent.initial_decision {
            if v.class(lit.atom) != AtomClass::Decision(crate::logic::AgentId(index)) {
                push(ViolationKind::InitialDecisionForeignAtom, name, lit.to_source(v));
            }
        }

        let own: BTreeSet<&str> = agent.desires.iter().map(|d| d.id.as_str()).collect();
        let mut ranks_seen: BTreeMap<u32, &str> = BTreeMap::new();
        for (id, rank) in agent.priority.entries() {
            if !own.contains(id.as_str()) {
                let subject = match desire_owner.get(id.as_str()) {
                    Some(owner) => format!("`{id}` belongs to agent `{owner}`"),
                    None => format!("`{id}` is not a declared desire"),
                };
                push(ViolationKind::CrossAgentPriority, name, subject);
                continue;
            }
            if agent.priority.mode() == PriorityMode::Ranked {
                match rank {
                    None => push(ViolationKind::PriorityNotTotal, name, format!("`{id}` has no rank")),
                    Some(r) => {
                        if let Some(other) = ranks_seen.insert(r, id.as_str()) {
                            push(
                                ViolationKind::PriorityNotTotal,
                                name,
                                format!("`{other}` and `{id}` share rank {r}"),
                            );
                        }
                    }
                }
            }
        }
        for d in &agent.desires {
            if !agent.priority.contains(&d.id) {
                push(
                    ViolationKind::PriorityNotTotal,
                    name,
                    format!("`{}` is missing from the priority order", d.id),
                );
            }
        }
    }

    let mut warnings = Vec::new();
    match spec.reasoner().consistent(&spec.facts()) {
        Ok(true) => {}
        Ok(false) => warnings.push(Warning::FactsInconsistent),
        Err(e @ LogicError::VocabularyOverflow { .. }) => warnings.push(Warning::FactsUndecided(e.to_string())),
        Err(e) => warnings.push(Warning::FactsUndecided(e.to_string())),
    }

    ValidationReport {
        violations: violations.into_iter().collect(),
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::RuleId;
    use crate::model::{parse_spec, PriorityOrder};

    #[test]
    fn belief_on_decision_atom_is_rejected() {
        let spec = parse_spec("agent x {\n atoms a\n belief t: true => a\n}\n").unwrap();
        let report = validate_spec(&spec);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::BeliefConsequentNotInWorld);
        assert_eq!(report.violations[0].subject, "t");
    }

    #[test]
    fn fact_over_decision_atom() {
        let spec = parse_spec("agent x {\n atoms a\n fact a\n}\n").unwrap();
        let kinds: Vec<_> = validate_spec(&spec).violations.iter().map(|v| v.kind).collect();
        assert_eq!(kinds, vec![ViolationKind::FactNotInWorld]);
    }

    #[test]
    fn shared_rank_breaks_totality() {
        let text =
            "agent x {\n atoms a b\n priority ranked\n desire [rank=1]: true => a\n desire [rank=1]: true => b\n}\n";
        let report = validate_spec(&parse_spec(text).unwrap());
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::PriorityNotTotal);
    }

    #[test]
    fn missing_rank_breaks_totality() {
        let text = "agent x {\n atoms a b\n priority ranked\n desire [rank=1]: true => a\n desire true => b\n}\n";
        let report = validate_spec(&parse_spec(text).unwrap());
        assert_eq!(report.violations[0].kind, ViolationKind::PriorityNotTotal);
    }

    #[test]
    fn inconsistent_initial_decision() {
        let spec = parse_spec("agent x {\n atoms a\n initial a !a\n}\n").unwrap();
        let report = validate_spec(&spec);
        assert_eq!(report.violations[0].kind, ViolationKind::InitialDecisionInconsistent);
    }

    #[test]
    fn cross_agent_priority_detected() {
        let text = "agent x {\n atoms a\n priority ranked\n desire dx [rank=1]: true => a\n}\nagent y {\n atoms b\n priority ranked\n desire dy [rank=1]: true => b\n}\n";
        let mut spec = parse_spec(text).unwrap();
        assert!(validate_spec(&spec).is_valid());
        spec.agents[0].priority = PriorityOrder::ranked([(RuleId::new("dx"), 2), (RuleId::new("dy"), 1)]);
        let report = validate_spec(&spec);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].kind, ViolationKind::CrossAgentPriority);
    }

    #[test]
    fn contradictory_facts_only_warn() {
        let text = "agent x {\n atoms a\n fact p\n}\nagent y {\n atoms b\n fact !p\n}\nworld p\n";
        let report = validate_spec(&parse_spec(text).unwrap());
        assert!(report.is_valid());
        assert_eq!(report.warnings, vec![Warning::FactsInconsistent]);
    }
}
