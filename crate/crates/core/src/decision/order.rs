use std::collections::BTreeSet;

use super::{desire_report, DecisionProfile};
use crate::error::Error;
use crate::extension::RuleId;
use crate::logic::AgentId;
use crate::model::{AgentSystemSpec, PriorityOrder};

/// Outcome of comparing two desire sets under the lifted order `⪰`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetRelation {
    /// `D1 ≻ D2`.
    Succeeds,
    /// `D2 ≻ D1`.
    Precedes,
    /// `D1 ≃ D2`.
    Equivalent,
    Incomparable,
}

/// Outcome of comparing two profiles for one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileOrdering {
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl ProfileOrdering {
    pub fn at_least(self) -> bool {
        matches!(self, ProfileOrdering::Better | ProfileOrdering::Equal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileOrdering::Better => "better",
            ProfileOrdering::Worse => "worse",
            ProfileOrdering::Equal => "equal",
            ProfileOrdering::Incomparable => "incomparable",
        }
    }
}

/// `D1 ⪰ D2`: every desire only in `D2` is outranked by some desire only
/// in `D1`.
pub fn weakly_prefers(order: &PriorityOrder, d1: &BTreeSet<RuleId>, d2: &BTreeSet<RuleId>) -> bool {
    d2.difference(d1)
        .all(|lower| d1.difference(d2).any(|higher| order.is_above(higher, lower)))
}

fn relation(forward: bool, backward: bool) -> SetRelation {
    match (forward, backward) {
        (true, true) => SetRelation::Equivalent,
        (true, false) => SetRelation::Succeeds,
        (false, true) => SetRelation::Precedes,
        (false, false) => SetRelation::Incomparable,
    }
}

/// Compares two sets of one agent's desires.
pub fn set_preference(
    d1: &BTreeSet<RuleId>,
    d2: &BTreeSet<RuleId>,
    order: &PriorityOrder,
) -> Result<SetRelation, Error> {
    if let Some(id) = d1.iter().chain(d2).find(|id| !order.contains(id)) {
        return Err(Error::ForeignRule(id.to_string()));
    }
    Ok(relation(weakly_prefers(order, d1, d2), weakly_prefers(order, d2, d1)))
}

/// Compares profiles given their unreached sets `u1`, `u2` for one agent.
/// The profile whose unreached set is `⪰`-smaller is the better one.
pub fn compare_unreached(order: &PriorityOrder, u1: &BTreeSet<RuleId>, u2: &BTreeSet<RuleId>) -> ProfileOrdering {
    let p1_at_least = weakly_prefers(order, u2, u1);
    let p2_at_least = weakly_prefers(order, u1, u2);
    match (p1_at_least, p2_at_least) {
        (true, true) => ProfileOrdering::Equal,
        (true, false) => ProfileOrdering::Better,
        (false, true) => ProfileOrdering::Worse,
        (false, false) => ProfileOrdering::Incomparable,
    }
}

/// Compares two feasible profiles from `agent`'s point of view.
pub fn compare_profiles(
    spec: &AgentSystemSpec,
    p1: &DecisionProfile,
    p2: &DecisionProfile,
    agent: AgentId,
) -> Result<ProfileOrdering, Error> {
    let r1 = desire_report(spec, p1)?;
    let r2 = desire_report(spec, p2)?;
    Ok(compare_unreached(
        &spec.agent(agent).priority,
        r1.unreached(agent),
        r2.unreached(agent),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Decision;
    use crate::model::{parse_spec, Literal};

    fn ids(items: &[&str]) -> BTreeSet<RuleId> {
        items.iter().map(|s| RuleId::new(*s)).collect()
    }

    fn ranked(items: &[(&str, u32)]) -> PriorityOrder {
        PriorityOrder::ranked(items.iter().map(|(id, r)| (RuleId::new(*id), *r)))
    }

    fn subsets(universe: &[&str]) -> Vec<BTreeSet<RuleId>> {
        (0..1u32 << universe.len())
            .map(|mask| {
                universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| RuleId::new(*s))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn reflexive_and_priority_driven() {
        let order = ranked(&[("bp", 2), ("tb", 1)]);
        let d = ids(&["bp", "tb"]);
        assert_eq!(set_preference(&d, &d, &order).unwrap(), SetRelation::Equivalent);
        assert_eq!(
            set_preference(&ids(&["bp"]), &ids(&["tb"]), &order).unwrap(),
            SetRelation::Succeeds
        );
        assert_eq!(
            set_preference(&ids(&["tb"]), &ids(&["bp"]), &order).unwrap(),
            SetRelation::Precedes
        );
    }

    #[test]
    fn empty_set_is_vacuously_dominated() {
        let order = ranked(&[("x", 1)]);
        assert_eq!(
            set_preference(&ids(&["x"]), &BTreeSet::new(), &order).unwrap(),
            SetRelation::Succeeds
        );
        assert_eq!(
            set_preference(&BTreeSet::new(), &BTreeSet::new(), &order).unwrap(),
            SetRelation::Equivalent
        );
    }

    #[test]
    fn identity_mode_is_the_superset_relation() {
        let universe = ["w", "x", "y", "z"];
        let order = PriorityOrder::identity(universe.iter().map(|s| RuleId::new(*s)));
        let all = subsets(&universe);
        for d1 in &all {
            for d2 in &all {
                assert_eq!(weakly_prefers(&order, d1, d2), d2.is_subset(d1), "{d1:?} vs {d2:?}");
            }
        }
    }

    #[test]
    fn foreign_rules_rejected() {
        let order = ranked(&[("x", 1)]);
        assert_eq!(
            set_preference(&ids(&["x"]), &ids(&["y"]), &order),
            Err(Error::ForeignRule("y".into()))
        );
    }

    fn decision(spec: &AgentSystemSpec, agent: usize, items: &[&str]) -> Decision {
        Decision::new(
            AgentId(agent),
            items.iter().map(|s| match s.strip_prefix('!') {
                Some(n) => Literal::negative(spec.vocabulary.lookup(n).unwrap()),
                None => Literal::positive(spec.vocabulary.lookup(s).unwrap()),
            }),
        )
    }

    #[test]
    fn dominance_between_single_agent_decisions() {
        let spec = parse_spec(crate::decision::tests::EXAMPLE_TWO).unwrap();
        let p = |items: &[&str]| DecisionProfile::new(vec![decision(&spec, 0, items)]);
        let cmp = |x: &[&str], y: &[&str]| compare_profiles(&spec, &p(x), &p(y), AgentId(0)).unwrap();
        assert_eq!(cmp(&["a", "c"], &["a"]), ProfileOrdering::Better);
        assert_eq!(cmp(&["a", "c"], &["a", "b", "c"]), ProfileOrdering::Better);
        assert_eq!(cmp(&["a"], &["a", "c"]), ProfileOrdering::Worse);
        assert_eq!(cmp(&["a", "c"], &["a", "c"]), ProfileOrdering::Equal);
        // {a} and {a,e} leave the same desires unreached.
        assert_eq!(cmp(&["a"], &["a", "e"]), ProfileOrdering::Equal);
    }

    #[test]
    fn opposed_total_orders_over_four_profiles() {
        let spec = parse_spec(
            r#"
option decision_mode = total-assignments
agent alpha1 {
  atoms a
  priority ranked
  belief a => p
  belief !a => !p
  desire [rank=2]: true => p
  desire [rank=1]: true => q
}
agent alpha2 {
  atoms b
  priority ranked
  belief b => q
  belief !b => !q
  desire [rank=2]: true => !p
  desire [rank=1]: true => !q
}
world p q
"#,
        )
        .unwrap();
        let p = |x: &str, y: &str| DecisionProfile::new(vec![decision(&spec, 0, &[x]), decision(&spec, 1, &[y])]);
        let chain1 = [p("a", "b"), p("a", "!b"), p("!a", "b"), p("!a", "!b")];
        let chain2 = [p("!a", "!b"), p("!a", "b"), p("a", "!b"), p("a", "b")];
        for (agent, chain) in [(AgentId(0), &chain1), (AgentId(1), &chain2)] {
            for i in 0..chain.len() {
                for j in i + 1..chain.len() {
                    assert_eq!(
                        compare_profiles(&spec, &chain[i], &chain[j], agent).unwrap(),
                        ProfileOrdering::Better
                    );
                }
            }
        }
    }
}
