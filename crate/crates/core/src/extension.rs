//! Rule extensions: the least superset of a theory closed under a set of
//! rules read as inference rules, where a rule fires once its antecedent is
//! entailed by the current set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_bound, Error};
use crate::logic::{AgentId, Formula, FormulaSet, LogicError, Reasoner};

/// Upper bound on candidate consequents the brute-force certificate will
/// enumerate subsets of.
pub const CERTIFICATE_MAX_CANDIDATES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleId(pub String);

impl RuleId {
    pub fn new(id: impl Into<String>) -> Self {
        RuleId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Belief,
    Desire,
}

/// A rule `antecedent => consequent` owned by one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub antecedent: Formula,
    pub consequent: Formula,
    pub kind: RuleKind,
    pub owner: AgentId,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        antecedent: Formula,
        consequent: Formula,
        kind: RuleKind,
        owner: AgentId,
    ) -> Self {
        Rule {
            id: RuleId::new(id),
            antecedent,
            consequent,
            kind,
            owner,
        }
    }
}

/// Result of closing a base theory under a rule set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    /// The input theory.
    pub base: FormulaSet,
    /// Consequents added on top of `base`.
    pub derived: FormulaSet,
    /// Number of rounds that added at least one formula.
    pub iterations: usize,
    pub consistent: bool,
}

impl Extension {
    /// `base ∪ derived`.
    pub fn formulas(&self) -> FormulaSet {
        self.base.union(&self.derived).cloned().collect()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.base.contains(f) || self.derived.contains(f)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.base
            .iter()
            .chain(self.derived.iter().filter(|f| !self.base.contains(*f)))
    }

    /// Total rounds evaluated, including the final round that added nothing.
    pub fn rounds(&self) -> usize {
        self.iterations + 1
    }

    /// Union of extensions; the consistency flag is recomputed on the union.
    pub fn union<'a, I>(parts: I, reasoner: &Reasoner) -> Result<Extension, LogicError>
    where
        I: IntoIterator<Item = &'a Extension>,
    {
        let mut base = FormulaSet::new();
        let mut all = FormulaSet::new();
        let mut iterations = 0;
        for part in parts {
            base.extend(part.base.iter().cloned());
            all.extend(part.iter().cloned());
            iterations = iterations.max(part.iterations);
        }
        let derived: FormulaSet = all.difference(&base).cloned().collect();
        let consistent = reasoner.consistent(base.iter().chain(derived.iter()))?;
        Ok(Extension {
            base,
            derived,
            iterations,
            consistent,
        })
    }
}

/// Consequents of the rules whose antecedent is entailed by `theory`.
pub fn applicable_consequents<'r, I>(
    rules: I,
    theory: &FormulaSet,
    reasoner: &Reasoner,
) -> Result<FormulaSet, LogicError>
where
    I: IntoIterator<Item = &'r Rule>,
{
    let mut out = FormulaSet::new();
    for rule in rules {
        if out.contains(&rule.consequent) {
            continue;
        }
        if reasoner.entails(theory, &rule.antecedent)? {
            out.insert(rule.consequent.clone());
        }
    }
    Ok(out)
}

/// Computes the extension of `base` under `rules` by iterating rounds until
/// a round adds nothing. Every rule applicable in a round fires in that
/// round, which keeps the iteration count independent of rule order.
pub fn extension<'r, I>(rules: I, base: &FormulaSet, reasoner: &Reasoner) -> Result<Extension, LogicError>
where
    I: IntoIterator<Item = &'r Rule>,
{
    let mut pending: Vec<&Rule> = rules.into_iter().collect();
    let mut current = base.clone();
    let mut iterations = 0;
    loop {
        let mut fired = Vec::new();
        let mut remaining = Vec::with_capacity(pending.len());
        for rule in pending {
            if current.contains(&rule.consequent) {
                // Nothing to add, and the antecedent stays entailed once it is.
                continue;
            }
            if reasoner.entails(&current, &rule.antecedent)? {
                fired.push(rule.consequent.clone());
            } else {
                remaining.push(rule);
            }
        }
        pending = remaining;
        let before = current.len();
        current.extend(fired);
        if current.len() == before {
            break;
        }
        iterations += 1;
    }
    let consistent = reasoner.consistent(&current)?;
    let derived = current.difference(base).cloned().collect();
    Ok(Extension {
        base: base.clone(),
        derived,
        iterations,
        consistent,
    })
}

/// Checks `claimed` against the intersection of every superset of `base`
/// closed under `rules`. The closed sets are enumerated by brute force over
/// subsets of the rule consequents, so this is independent of the iterative
/// construction in [`extension`].
pub fn fixpoint_certificate(
    rules: &[Rule],
    base: &FormulaSet,
    claimed: &FormulaSet,
    reasoner: &Reasoner,
) -> Result<bool, Error> {
    if !base.is_subset(claimed) {
        return Ok(false);
    }
    let candidates: Vec<Formula> = rules
        .iter()
        .map(|r| r.consequent.clone())
        .filter(|c| !base.contains(c))
        .collect::<FormulaSet>()
        .into_iter()
        .collect();
    if claimed.iter().any(|f| !base.contains(f) && !candidates.contains(f)) {
        return Ok(false);
    }
    check_bound(
        "fixpoint certificate subsets",
        2,
        candidates.len(),
        1 << CERTIFICATE_MAX_CANDIDATES,
    )?;

    // Membership mask of the running intersection over closed candidates.
    let mut least: u64 = (1u64 << candidates.len()) - 1;
    for mask in 0u64..(1u64 << candidates.len()) {
        if mask & least == least {
            // Cannot shrink the intersection.
            continue;
        }
        let mut x = base.clone();
        for (i, c) in candidates.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x.insert(c.clone());
            }
        }
        let closed = rules
            .iter()
            .filter(|r| !x.contains(&r.consequent))
            .try_fold(true, |acc, r| {
                Ok::<_, LogicError>(acc && !reasoner.entails(&x, &r.antecedent)?)
            })?;
        if closed {
            least &= mask;
        }
    }
    let mut expected = base.clone();
    for (i, c) in candidates.iter().enumerate() {
        if least >> i & 1 == 1 {
            expected.insert(c.clone());
        }
    }
    Ok(&expected == claimed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, AtomClass, Vocabulary};

    struct Fixture {
        vocab: Vocabulary,
    }

    impl Fixture {
        fn new() -> Self {
            let mut decls: Vec<(String, AtomClass)> = ["a", "b", "c", "d", "e"]
                .iter()
                .map(|n| (n.to_string(), AtomClass::Decision(AgentId(0))))
                .collect();
            for w in ["p", "q", "r"] {
                decls.push((w.into(), AtomClass::World));
            }
            Fixture {
                vocab: Vocabulary::new(decls).unwrap(),
            }
        }

        fn f(&self, s: &str) -> Formula {
            parse_formula(s, &self.vocab).unwrap()
        }

        fn set(&self, items: &[&str]) -> FormulaSet {
            items.iter().map(|s| self.f(s)).collect()
        }

        fn rules(&self, items: &[(&str, &str)]) -> Vec<Rule> {
            items
                .iter()
                .enumerate()
                .map(|(i, (x, y))| Rule::new(format!("r{i}"), self.f(x), self.f(y), RuleKind::Belief, AgentId(0)))
                .collect()
        }
    }

    #[test]
    fn applicable_consequents_use_entailment() {
        let fx = Fixture::new();
        let r = Reasoner::default();
        let rules = fx.rules(&[("true", "p"), ("a", "!p")]);
        assert_eq!(
            applicable_consequents(&rules, &FormulaSet::new(), &r).unwrap(),
            fx.set(&["p"])
        );
        assert!(applicable_consequents(&[], &fx.set(&["a"]), &r).unwrap().is_empty());
        let rules = fx.rules(&[("p", "q")]);
        assert_eq!(
            applicable_consequents(&rules, &fx.set(&["p & r"]), &r).unwrap(),
            fx.set(&["q"])
        );
    }

    #[test]
    fn inconsistent_extension_is_a_legal_output() {
        let fx = Fixture::new();
        let r = Reasoner::default();
        let rules = fx.rules(&[("true", "p"), ("a", "!p")]);
        let ext = extension(&rules, &fx.set(&["a"]), &r).unwrap();
        assert_eq!(ext.formulas(), fx.set(&["a", "p", "!p"]));
        assert!(!ext.consistent);
        let empty = extension(&rules, &FormulaSet::new(), &r).unwrap();
        assert_eq!(empty.formulas(), fx.set(&["p"]));
        assert!(empty.consistent);
    }

    #[test]
    fn empty_rule_set_is_identity() {
        let fx = Fixture::new();
        let base = fx.set(&["a", "p | q"]);
        let ext = extension(&[], &base, &Reasoner::default()).unwrap();
        assert_eq!(ext.formulas(), base);
        assert_eq!(ext.iterations, 0);
    }

    #[test]
    fn belief_extension_of_single_agent_decision() {
        let fx = Fixture::new();
        let rules = fx.rules(&[("c", "q"), ("d", "q"), ("e", "!q")]);
        let ext = extension(&rules, &fx.set(&["!p", "a", "c"]), &Reasoner::default()).unwrap();
        assert_eq!(ext.formulas(), fx.set(&["!p", "a", "c", "q"]));
        assert!(ext.consistent);
    }

    #[test]
    fn chained_rules_take_two_rounds() {
        let fx = Fixture::new();
        let rules = fx.rules(&[("p", "q"), ("true", "p")]);
        let ext = extension(&rules, &FormulaSet::new(), &Reasoner::default()).unwrap();
        assert_eq!(ext.formulas(), fx.set(&["p", "q"]));
        assert_eq!(ext.iterations, 2);
        assert_eq!(ext.rounds(), 3);
    }

    #[test]
    fn consequents_are_not_decomposed() {
        let fx = Fixture::new();
        let rules = fx.rules(&[("true", "p & q")]);
        let ext = extension(&rules, &FormulaSet::new(), &Reasoner::default()).unwrap();
        assert_eq!(ext.formulas(), fx.set(&["p & q"]));
        assert!(!ext.contains(&fx.f("p")));
    }

    #[test]
    fn certificate_accepts_only_the_least_fixpoint() {
        let fx = Fixture::new();
        let r = Reasoner::default();
        let rules = fx.rules(&[("true", "p"), ("a", "!p")]);
        let base = fx.set(&["a"]);
        assert!(fixpoint_certificate(&rules, &base, &fx.set(&["a", "p", "!p"]), &r).unwrap());
        assert!(!fixpoint_certificate(&rules, &base, &fx.set(&["a", "p"]), &r).unwrap());
        assert!(fixpoint_certificate(&[], &base, &base, &r).unwrap());
    }

    #[test]
    fn certificate_rejects_self_supporting_loops() {
        // {p, q} is closed and removing either element breaks closure, yet
        // the least fixpoint from the empty theory is empty.
        let fx = Fixture::new();
        let r = Reasoner::default();
        let rules = fx.rules(&[("p", "q"), ("q", "p")]);
        let base = FormulaSet::new();
        assert!(!fixpoint_certificate(&rules, &base, &fx.set(&["p", "q"]), &r).unwrap());
        assert!(fixpoint_certificate(&rules, &base, &base, &r).unwrap());
    }
}
