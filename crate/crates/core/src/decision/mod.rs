//! Decisions, decision profiles, feasibility and the preference order
//! induced by unreached desires.

mod order;
mod report;

use std::fmt;
use std::str::FromStr;

pub use order::{compare_profiles, compare_unreached, set_preference, weakly_prefers, ProfileOrdering, SetRelation};
pub use report::{desire_report, report_for_extension, AgentDesires, DesireReport};

use crate::error::{check_bound, Error};
use crate::extension::{extension, Extension};
use crate::logic::{AgentId, AtomClass, FormulaSet};
use crate::model::{literals_consistent, AgentSystemSpec, Literal, LiteralSet};

/// Which literal sets count as candidate decisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionMode {
    /// The initial decision plus any set of positive literals over the
    /// remaining atoms.
    PositiveSubsets,
    /// Exactly one literal per decision atom.
    TotalAssignments,
    /// Any consistent literal set containing the initial decision.
    LiteralSubsets,
}

impl DecisionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionMode::PositiveSubsets => "positive-subsets",
            DecisionMode::TotalAssignments => "total-assignments",
            DecisionMode::LiteralSubsets => "literal-subsets",
        }
    }
}

impl FromStr for DecisionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive-subsets" => Ok(DecisionMode::PositiveSubsets),
            "total-assignments" => Ok(DecisionMode::TotalAssignments),
            "literal-subsets" => Ok(DecisionMode::LiteralSubsets),
            other => Err(format!(
                "unknown decision mode `{other}` (expected positive-subsets, total-assignments or literal-subsets)"
            )),
        }
    }
}

impl fmt::Display for DecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One agent's decision: a consistent literal set over its decision atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decision {
    pub agent: AgentId,
    pub literals: LiteralSet,
}

impl Decision {
    pub fn new(agent: AgentId, literals: impl IntoIterator<Item = Literal>) -> Self {
        Decision {
            agent,
            literals: literals.into_iter().collect(),
        }
    }

    pub fn formulas(&self) -> FormulaSet {
        self.literals.iter().map(|l| l.to_formula()).collect()
    }
}

/// One decision per agent, in agent order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecisionProfile {
    pub decisions: Vec<Decision>,
}

impl DecisionProfile {
    pub fn new(decisions: Vec<Decision>) -> Self {
        DecisionProfile { decisions }
    }

    pub fn decision(&self, agent: AgentId) -> &Decision {
        &self.decisions[agent.0]
    }

    /// `(δ_{-i}, d)`: this profile with agent `d.agent`'s decision replaced.
    pub fn with_decision(&self, d: Decision) -> Self {
        let mut out = self.clone();
        let i = d.agent.0;
        out.decisions[i] = d;
        out
    }

    /// Renders the profile as `<a, !b>` when every decision is a single
    /// literal and as `<{a, c}, {}>` otherwise.
    pub fn display(&self, spec: &AgentSystemSpec) -> String {
        let singletons = self.decisions.iter().all(|d| d.literals.len() == 1);
        let parts: Vec<String> = self
            .decisions
            .iter()
            .map(|d| {
                let lits = spec.literals_to_strings(&d.literals).join(", ");
                if singletons {
                    lits
                } else {
                    format!("{{{lits}}}")
                }
            })
            .collect();
        format!("<{}>", parts.join(", "))
    }
}

/// Checks that `profile` has one well-formed decision per agent.
pub fn check_profile(spec: &AgentSystemSpec, profile: &DecisionProfile) -> Result<(), Error> {
    if profile.decisions.len() != spec.agents.len() {
        return Err(Error::MalformedProfile(format!(
            "{} decisions for {} agents",
            profile.decisions.len(),
            spec.agents.len()
        )));
    }
    for (i, d) in profile.decisions.iter().enumerate() {
        check_decision(spec, AgentId(i), d)?;
    }
    Ok(())
}

fn check_decision(spec: &AgentSystemSpec, agent: AgentId, d: &Decision) -> Result<(), Error> {
    let name = &spec.agent(agent).name;
    if d.agent != agent {
        return Err(Error::MalformedProfile(format!(
            "decision for agent {} placed at `{name}`",
            d.agent
        )));
    }
    if let Some(l) = d
        .literals
        .iter()
        .find(|l| spec.vocabulary.class(l.atom) != AtomClass::Decision(agent))
    {
        return Err(Error::MalformedProfile(format!(
            "`{}` is not a decision atom of `{name}`",
            l.to_source(&spec.vocabulary)
        )));
    }
    if !literals_consistent(&d.literals) {
        return Err(Error::MalformedProfile(format!("decision of `{name}` is inconsistent")));
    }
    if !spec.agent(agent).initial_decision.is_subset(&d.literals) {
        return Err(Error::MalformedProfile(format!(
            "decision of `{name}` does not contain the initial decision"
        )));
    }
    Ok(())
}

/// All decisions of `agent` under the configured mode, in canonical order.
pub fn enumerate_decisions(spec: &AgentSystemSpec, agent: AgentId) -> Result<Vec<Decision>, Error> {
    let a = spec.agent(agent);
    if !literals_consistent(&a.initial_decision) {
        return Ok(Vec::new());
    }
    let free: Vec<_> = a
        .decision_atoms
        .iter()
        .copied()
        .filter(|&atom| {
            !a.initial_decision.contains(&Literal::positive(atom))
                && !a.initial_decision.contains(&Literal::negative(atom))
        })
        .collect();
    let choices: &[Option<bool>] = match spec.options.decision_mode {
        DecisionMode::PositiveSubsets => &[None, Some(true)],
        DecisionMode::TotalAssignments => &[Some(true), Some(false)],
        DecisionMode::LiteralSubsets => &[None, Some(true), Some(false)],
    };
    check_bound(
        &format!("decisions of agent `{}`", a.name),
        choices.len() as u128,
        free.len(),
        spec.options.max_enumeration,
    )?;

    let mut out = vec![a.initial_decision.clone()];
    for &atom in &free {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for partial in &out {
            for choice in choices {
                let mut lits = partial.clone();
                if let Some(positive) = choice {
                    lits.insert(if *positive {
                        Literal::positive(atom)
                    } else {
                        Literal::negative(atom)
                    });
                }
                next.push(lits);
            }
        }
        out = next;
    }
    let mut decisions: Vec<Decision> = out.into_iter().map(|literals| Decision { agent, literals }).collect();
    decisions.sort();
    Ok(decisions)
}

/// The cartesian product of per-agent decision lists, in canonical order.
pub fn product_profiles(per_agent: &[Vec<Decision>], cap: usize) -> Result<Vec<DecisionProfile>, Error> {
    let count = per_agent
        .iter()
        .fold(1u128, |acc, ds| acc.saturating_mul(ds.len() as u128));
    if count > cap as u128 {
        return Err(Error::Bound {
            what: "decision profiles".into(),
            count,
            cap,
        });
    }
    let mut out = vec![Vec::new()];
    for ds in per_agent {
        let mut next = Vec::with_capacity(out.len() * ds.len());
        for partial in &out {
            for d in ds {
                let mut p: Vec<Decision> = partial.clone();
                p.push(d.clone());
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(DecisionProfile::new).collect())
}

/// Every decision profile, feasible or not.
pub fn enumerate_profiles(spec: &AgentSystemSpec) -> Result<Vec<DecisionProfile>, Error> {
    let per_agent = spec
        .agent_ids()
        .map(|a| enumerate_decisions(spec, a))
        .collect::<Result<Vec<_>, _>>()?;
    product_profiles(&per_agent, spec.options.max_enumeration)
}

/// `E_{B_i}(F_i ∪ δ_i)`: one agent's belief extension of its facts and decision.
pub fn agent_extension(spec: &AgentSystemSpec, d: &Decision) -> Result<Extension, Error> {
    let a = spec.agent(d.agent);
    let mut base = a.facts.clone();
    base.extend(d.formulas());
    Ok(extension(&a.beliefs, &base, &spec.reasoner())?)
}

/// Union of the agents' belief extensions, with consistency of the union.
pub fn joint_extension(spec: &AgentSystemSpec, profile: &DecisionProfile) -> Result<Extension, Error> {
    check_profile(spec, profile)?;
    let parts = profile
        .decisions
        .iter()
        .map(|d| agent_extension(spec, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Extension::union(&parts, &spec.reasoner())?)
}

pub fn is_feasible_decision(spec: &AgentSystemSpec, d: &Decision) -> Result<bool, Error> {
    check_decision(spec, d.agent, d)?;
    Ok(agent_extension(spec, d)?.consistent)
}

pub fn is_feasible_profile(spec: &AgentSystemSpec, profile: &DecisionProfile) -> Result<bool, Error> {
    Ok(joint_extension(spec, profile)?.consistent)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::logic::display_set;
    use crate::model::parse_spec;

    pub(crate) const EXAMPLE_TWO: &str = r#"
system "example 2"
option decision_mode = positive-subsets
agent alpha1 {
  atoms a b c d e
  priority ranked
  fact !p
  belief c => q
  belief d => q
  belief e => !q
  desire ta [rank=3]: true => a
  desire tb [rank=2]: true => b
  desire bp [rank=5]: b => p
  desire tq [rank=4]: true => q
  desire dq [rank=1]: d => q
  initial a
}
world p q
"#;

    pub(crate) const EXAMPLE_THREE: &str = r#"
option decision_mode = positive-subsets
agent alpha1 {
  atoms a
  priority identity
  belief a => p
  desire true => p
}
agent alpha2 {
  atoms b
  priority identity
  belief b => !p
  desire true => !p
}
world p
"#;

    fn decision(spec: &AgentSystemSpec, agent: usize, lits: &[&str]) -> Decision {
        let literals = lits.iter().map(|s| match s.strip_prefix('!') {
            Some(n) => Literal::negative(spec.vocabulary.lookup(n).unwrap()),
            None => Literal::positive(spec.vocabulary.lookup(s).unwrap()),
        });
        Decision::new(AgentId(agent), literals)
    }

    #[test]
    fn positive_subsets_containing_initial_decision() {
        let spec = parse_spec(EXAMPLE_TWO).unwrap();
        let ds = enumerate_decisions(&spec, AgentId(0)).unwrap();
        assert_eq!(ds.len(), 16);
        assert_eq!(ds[0], decision(&spec, 0, &["a"]));
        assert_eq!(ds[1], decision(&spec, 0, &["a", "b"]));
        let a = spec.agents[0].initial_decision.clone();
        assert!(ds.iter().all(|d| a.is_subset(&d.literals)));
        for expected in [&["a", "c"][..], &["a", "d"], &["a", "e"], &["a", "d", "e"]] {
            assert!(ds.contains(&decision(&spec, 0, expected)));
        }
    }

    #[test]
    fn total_assignments_and_literal_subsets() {
        let spec = parse_spec("agent x {\n atoms a\n}\n")
            .unwrap()
            .with_decision_mode(DecisionMode::TotalAssignments);
        let ds = enumerate_decisions(&spec, AgentId(0)).unwrap();
        assert_eq!(ds, vec![decision(&spec, 0, &["a"]), decision(&spec, 0, &["!a"])]);

        let spec = spec.with_decision_mode(DecisionMode::LiteralSubsets);
        let ds = enumerate_decisions(&spec, AgentId(0)).unwrap();
        assert_eq!(
            ds,
            vec![
                decision(&spec, 0, &[]),
                decision(&spec, 0, &["a"]),
                decision(&spec, 0, &["!a"])
            ]
        );
    }

    #[test]
    fn zero_atoms_give_one_empty_decision() {
        for mode in [
            DecisionMode::PositiveSubsets,
            DecisionMode::TotalAssignments,
            DecisionMode::LiteralSubsets,
        ] {
            let spec = parse_spec("agent x {\n}\n").unwrap().with_decision_mode(mode);
            assert_eq!(
                enumerate_decisions(&spec, AgentId(0)).unwrap(),
                vec![Decision::new(AgentId(0), [])]
            );
        }
    }

    #[test]
    fn enumeration_cap() {
        let spec = parse_spec(EXAMPLE_TWO).unwrap().with_max_enumeration(8);
        assert!(matches!(
            enumerate_decisions(&spec, AgentId(0)),
            Err(Error::Bound { .. })
        ));
    }

    #[test]
    fn single_agent_extensions_and_feasibility() {
        let spec = parse_spec(EXAMPLE_TWO).unwrap();
        let show = |lits: &[&str]| {
            let p = DecisionProfile::new(vec![decision(&spec, 0, lits)]);
            let e = joint_extension(&spec, &p).unwrap();
            (display_set(&e.formulas(), &spec.vocabulary), e.consistent)
        };
        assert_eq!(show(&["a"]), ("{a, !p}".to_string(), true));
        assert_eq!(show(&["a", "c"]), ("{a, c, q, !p}".to_string(), true));
        assert_eq!(show(&["a", "d", "e"]), ("{a, d, e, q, !p, !q}".to_string(), false));
        assert!(is_feasible_decision(&spec, &decision(&spec, 0, &["a", "c"])).unwrap());
        assert!(!is_feasible_decision(&spec, &decision(&spec, 0, &["a", "d", "e"])).unwrap());
    }

    #[test]
    fn feasibility_depends_on_other_agents() {
        let spec = parse_spec(EXAMPLE_THREE).unwrap();
        let ok = DecisionProfile::new(vec![decision(&spec, 0, &[]), decision(&spec, 1, &["b"])]);
        let bad = DecisionProfile::new(vec![decision(&spec, 0, &["a"]), decision(&spec, 1, &["b"])]);
        assert!(is_feasible_profile(&spec, &ok).unwrap());
        assert!(!is_feasible_profile(&spec, &bad).unwrap());
        let e = joint_extension(&spec, &bad).unwrap();
        assert_eq!(display_set(&e.formulas(), &spec.vocabulary), "{a, b, p, !p}");
        // Each component is individually feasible.
        assert!(is_feasible_decision(&spec, &decision(&spec, 0, &["a"])).unwrap());
        assert!(is_feasible_decision(&spec, &decision(&spec, 1, &["b"])).unwrap());
    }

    #[test]
    fn no_beliefs_means_extension_is_the_profile() {
        let spec = parse_spec("agent x {\n atoms a b\n}\n").unwrap();
        let p = DecisionProfile::new(vec![decision(&spec, 0, &["a", "!b"])]);
        let e = joint_extension(&spec, &p).unwrap();
        assert_eq!(e.formulas(), p.decisions[0].formulas());
        assert!(e.consistent);
    }

    #[test]
    fn malformed_profiles_rejected() {
        let spec = parse_spec(EXAMPLE_THREE).unwrap();
        let short = DecisionProfile::new(vec![decision(&spec, 0, &[])]);
        assert!(matches!(
            joint_extension(&spec, &short),
            Err(Error::MalformedProfile(_))
        ));
        let swapped = DecisionProfile::new(vec![decision(&spec, 0, &["a"]), decision(&spec, 0, &["a"])]);
        assert!(matches!(
            joint_extension(&spec, &swapped),
            Err(Error::MalformedProfile(_))
        ));
    }

    #[test]
    fn profiles_display() {
        let spec = parse_spec(EXAMPLE_THREE).unwrap();
        let p = DecisionProfile::new(vec![decision(&spec, 0, &[]), decision(&spec, 1, &["b"])]);
        assert_eq!(p.display(&spec), "<{}, {b}>");
    }
}
