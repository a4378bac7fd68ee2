//! Property suites: algebraic laws of extensions and of the lifted order,
//! solution-concept inclusions, the goal-based representation and the
//! agreement of the two Pareto pipelines.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::decision::{agent_extension, enumerate_decisions, weakly_prefers, DecisionProfile};
use crate::error::Error;
use crate::extension::{applicable_consequents, extension, fixpoint_certificate, RuleId};
use crate::game::{derive_game, witness_is_genuine, Concept, GameSpecification, SwapPolicy};
use crate::goals::{
    delta_goal_sets, feasible_representation_check, goals_first, is_componentwise_syntactic, is_syntactic_goal_set,
    profile_first, representation_check_indexed, u_closure, GoalIndex, ProfileFamily,
};
use crate::instances::{random_rule_instance, random_spec_text, rng, SpecShape};
use crate::logic::{display_set, Reasoner};
use crate::model::{parse_spec, AgentSystemSpec, PriorityOrder};

/// Outcome of one named check, with evidence when it fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            counterexample: None,
        }
    }

    pub fn fail(name: impl Into<String>, counterexample: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            counterexample: Some(counterexample.into()),
        }
    }
}

/// Counts of one law over many instances, keeping the first failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally {
            name: name.into(),
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    pub fn record(&mut self, ok: bool, evidence: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(evidence());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Adds `other`'s counts; the earlier first failure wins.
    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    pub fn to_result(&self) -> CheckResult {
        match &self.first_failure {
            None => CheckResult::pass(&self.name),
            Some(first) => CheckResult::fail(
                &self.name,
                format!("{} of {} failed; first: {first}", self.failed, self.checked),
            ),
        }
    }
}

fn tally_map(names: &[&str]) -> BTreeMap<String, Tally> {
    names.iter().map(|n| (n.to_string(), Tally::new(*n))).collect()
}

fn ordered(map: BTreeMap<String, Tally>, names: &[&str]) -> Vec<Tally> {
    let mut map = map;
    names.iter().map(|n| map.remove(*n).unwrap()).collect()
}

const EXTENSION_LAWS: [&str; 6] = [
    "containment",
    "monotonicity",
    "idempotence",
    "termination",
    "fixpoint",
    "least-fixpoint",
];

/// Extension laws over seeded random rule instances with at most
/// `max_atoms` atoms and `max_rules` rules. The least-fixpoint comparison
/// against the intersection characterization runs on instances with at
/// most five atoms and five rules.
pub fn extension_law_suite(
    seeds: std::ops::Range<u64>,
    max_atoms: usize,
    max_rules: usize,
) -> Result<Vec<Tally>, Error> {
    let reasoner = Reasoner::default();
    let mut t = tally_map(&EXTENSION_LAWS);
    for seed in seeds {
        let inst = random_rule_instance(seed, max_atoms, max_rules);
        let v = &inst.vocabulary;
        let show = |label: &str| format!("seed {seed} ({label}): base {}", display_set(&inst.base, v));
        let ext = extension(&inst.rules, &inst.base, &reasoner)?;
        let all = ext.formulas();

        t.get_mut("containment")
            .unwrap()
            .record(inst.base.is_subset(&all), || show("base not contained"));

        let mut bigger = inst.base.clone();
        bigger.extend(inst.extra.iter().cloned());
        let ext2 = extension(&inst.rules, &bigger, &reasoner)?;
        let r1 = applicable_consequents(&inst.rules, &inst.base, &reasoner)?;
        let r2 = applicable_consequents(&inst.rules, &bigger, &reasoner)?;
        t.get_mut("monotonicity")
            .unwrap()
            .record(all.is_subset(&ext2.formulas()) && r1.is_subset(&r2), || {
                format!("{} with extra {}", show("monotonicity"), display_set(&inst.extra, v))
            });

        let again = extension(&inst.rules, &all, &reasoner)?;
        t.get_mut("idempotence")
            .unwrap()
            .record(again.formulas() == all, || show("idempotence"));

        t.get_mut("termination")
            .unwrap()
            .record(ext.rounds() <= inst.rules.len() + 1, || show("too many rounds"));

        let once_more = applicable_consequents(&inst.rules, &all, &reasoner)?;
        t.get_mut("fixpoint")
            .unwrap()
            .record(once_more.is_subset(&all), || show("not closed"));

        if v.len() <= 5 && inst.rules.len() <= 5 {
            let ok = fixpoint_certificate(&inst.rules, &inst.base, &all, &reasoner)?;
            t.get_mut("least-fixpoint")
                .unwrap()
                .record(ok, || show("certificate rejected"));
        }
    }
    Ok(ordered(t, &EXTENSION_LAWS))
}

const ORDER_LAWS: [&str; 4] = ["reflexivity", "transitivity", "identity-is-superset", "antisymmetry"];

fn subsets_of(ids: &[RuleId]) -> Vec<BTreeSet<RuleId>> {
    (0u32..1 << ids.len())
        .map(|m| {
            ids.iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, id)| id.clone())
                .collect()
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n as u32);
            out.push(q);
        }
    }
    out
}

/// Laws of the lifted order checked on one priority order over `ids`.
fn order_laws_for(order: &PriorityOrder, ids: &[RuleId], t: &mut BTreeMap<String, Tally>, label: &str) {
    let sets = subsets_of(ids);
    let identity = order.mode() == crate::model::PriorityMode::Identity;
    let geq: Vec<Vec<bool>> = sets
        .iter()
        .map(|d1| sets.iter().map(|d2| weakly_prefers(order, d1, d2)).collect())
        .collect();
    let show = |xs: &[&BTreeSet<RuleId>]| {
        let parts: Vec<String> = xs
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("{label}: {}", parts.join(" / "))
    };
    for (i, d1) in sets.iter().enumerate() {
        t.get_mut("reflexivity").unwrap().record(geq[i][i], || show(&[d1]));
        for (j, d2) in sets.iter().enumerate() {
            if identity {
                t.get_mut("identity-is-superset")
                    .unwrap()
                    .record(geq[i][j] == d2.is_subset(d1), || show(&[d1, d2]));
            }
            if geq[i][j] && geq[j][i] {
                t.get_mut("antisymmetry").unwrap().record(i == j, || show(&[d1, d2]));
            }
            if !geq[i][j] {
                continue;
            }
            for (k, d3) in sets.iter().enumerate() {
                if geq[j][k] {
                    t.get_mut("transitivity")
                        .unwrap()
                        .record(geq[i][k], || show(&[d1, d2, d3]));
                }
            }
        }
    }
}

/// Exhaustive order laws over every ranking of up to `max_rules` rules and
/// over identity orders of the same sizes.
pub fn order_law_suite(max_rules: usize) -> Vec<Tally> {
    let mut t = tally_map(&ORDER_LAWS);
    for n in 0..=max_rules {
        let ids: Vec<RuleId> = (0..n).map(|i| RuleId::new(format!("r{i}"))).collect();
        for ranks in permutations(n) {
            let order = PriorityOrder::ranked(ids.iter().cloned().zip(ranks.iter().copied()));
            order_laws_for(&order, &ids, &mut t, &format!("ranks {ranks:?}"));
        }
        let order = PriorityOrder::identity(ids.iter().cloned());
        order_laws_for(&order, &ids, &mut t, &format!("identity over {n}"));
    }
    ordered(t, &ORDER_LAWS)
}

/// Order laws on the priority orders of one spec, skipping agents with
/// more than ten desires.
pub fn order_law_checks(spec: &AgentSystemSpec) -> Vec<Tally> {
    let mut t = tally_map(&ORDER_LAWS);
    for agent in &spec.agents {
        if agent.desires.len() > 10 {
            continue;
        }
        let ids: Vec<RuleId> = agent.desires.iter().map(|d| d.id.clone()).collect();
        order_laws_for(&agent.priority, &ids, &mut t, &agent.name);
    }
    ordered(t, &ORDER_LAWS)
}

const GAME_LAWS: [&str; 5] = [
    "strong-pareto-within-pareto",
    "dominant-within-nash",
    "pareto-nonempty",
    "witnesses-genuine",
    "relabeling-invariance",
];

type ProfileKey = BTreeMap<String, BTreeSet<String>>;

fn profile_key(spec: &AgentSystemSpec, p: &DecisionProfile, rename: &BTreeMap<String, String>) -> ProfileKey {
    p.decisions
        .iter()
        .map(|d| {
            let lits = spec
                .literals_to_strings(&d.literals)
                .into_iter()
                .map(|l| {
                    let (neg, name) = match l.strip_prefix('!') {
                        Some(n) => ("!", n),
                        None => ("", l.as_str()),
                    };
                    format!("{neg}{}", rename.get(name).map(String::as_str).unwrap_or(name))
                })
                .collect();
            (spec.agent(d.agent).name.clone(), lits)
        })
        .collect()
}

/// Renames identifiers by whole-word replacement.
fn rename_words(text: &str, map: &BTreeMap<String, String>) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        out.push_str(map.get(word.as_str()).map(String::as_str).unwrap_or(word));
        word.clear();
    };
    for c in text.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            word.push(c);
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

/// Moves the last agent block first and renames atoms in reverse name
/// order, so ids and enumeration orders all change.
fn permuted(text: &str, spec: &AgentSystemSpec) -> (String, BTreeMap<String, String>) {
    let names: Vec<String> = spec
        .vocabulary
        .ids()
        .map(|id| spec.vocabulary.name(id).to_string())
        .collect();
    let forward: BTreeMap<String, String> = names
        .iter()
        .zip(names.iter().rev())
        .map(|(a, b)| (a.clone(), format!("{b}_x")))
        .collect();
    let renamed = rename_words(text, &forward);
    let mut blocks: Vec<String> = Vec::new();
    let mut rest = String::new();
    let mut current: Option<String> = None;
    for line in renamed.lines() {
        if line.starts_with("agent ") {
            current = Some(String::new());
        }
        match current.as_mut() {
            Some(block) => {
                block.push_str(line);
                block.push('\n');
                if line.trim() == "}" {
                    blocks.push(current.take().unwrap());
                }
            }
            None => {
                rest.push_str(line);
                rest.push('\n');
            }
        }
    }
    if let Some(last) = blocks.pop() {
        blocks.insert(0, last);
    }
    let backward = forward.into_iter().map(|(a, b)| (b, a)).collect();
    (format!("{}{}", blocks.concat(), rest), backward)
}

fn solution_keys(
    game: &GameSpecification,
    concept: Concept,
    rename: &BTreeMap<String, String>,
) -> Result<BTreeSet<ProfileKey>, Error> {
    Ok(game
        .solve(concept, SwapPolicy::Skip)?
        .profiles
        .iter()
        .map(|&i| profile_key(&game.spec, game.profile(i), rename))
        .collect())
}

/// Game laws over one generated spec text.
fn game_laws_for(text: &str, label: &str, t: &mut BTreeMap<String, Tally>) -> Result<(), Error> {
    let spec = parse_spec(text)?;
    let game = derive_game(&spec)?;
    let reports: BTreeMap<Concept, _> = Concept::ALL
        .into_iter()
        .map(|c| Ok((c, game.solve(c, SwapPolicy::Skip)?)))
        .collect::<Result<_, Error>>()?;
    let pareto = &reports[&Concept::Pareto];
    t.get_mut("strong-pareto-within-pareto").unwrap().record(
        reports[&Concept::StrongPareto]
            .profiles
            .iter()
            .all(|&i| pareto.contains(i)),
        || label.to_string(),
    );
    t.get_mut("dominant-within-nash").unwrap().record(
        reports[&Concept::Dominant]
            .profiles
            .iter()
            .all(|&i| reports[&Concept::Nash].contains(i)),
        || label.to_string(),
    );
    if !game.is_empty() {
        t.get_mut("pareto-nonempty")
            .unwrap()
            .record(!pareto.profiles.is_empty(), || label.to_string());
    }
    let genuine = reports
        .iter()
        .all(|(c, r)| r.witnesses.iter().all(|w| witness_is_genuine(&game, *c, w)));
    t.get_mut("witnesses-genuine")
        .unwrap()
        .record(genuine, || label.to_string());

    let (other_text, back) = permuted(text, &spec);
    let other = derive_game(&parse_spec(&other_text)?)?;
    let mut same = true;
    for c in Concept::ALL {
        same &= solution_keys(&game, c, &BTreeMap::new())? == solution_keys(&other, c, &back)?;
    }
    t.get_mut("relabeling-invariance")
        .unwrap()
        .record(same, || label.to_string());
    Ok(())
}

/// Game laws over seeded random specs of the given shape.
pub fn game_law_suite(seeds: std::ops::Range<u64>, shape: &SpecShape) -> Result<Vec<Tally>, Error> {
    let mut t = tally_map(&GAME_LAWS);
    for seed in seeds {
        let text = random_spec_text(&mut rng(seed), shape);
        game_laws_for(&text, &format!("seed {seed}"), &mut t)?;
    }
    Ok(ordered(t, &GAME_LAWS))
}

pub const REPRESENTATION_LAWS: [&str; 5] = [
    "goal-based-members",
    "goal-based-closure",
    "feasible-representation",
    "goal-sets-componentwise-syntactic",
    "goal-sets-single-generator",
];

/// Families whose representation is checked: the closure of every
/// singleton, the closures of the Pareto and Nash sets, and all of `Δ_f`.
pub fn checked_families(game: &GameSpecification) -> Result<Vec<(String, ProfileFamily)>, Error> {
    let mut out = Vec::new();
    for i in 0..game.len() {
        out.push((
            format!("closure of {}", game.profile(i).display(&game.spec)),
            u_closure(game, &ProfileFamily::new([i])),
        ));
    }
    for c in [Concept::Pareto, Concept::Nash] {
        let r = game.solve(c, SwapPolicy::Skip)?;
        out.push((format!("{c} family"), u_closure(game, &ProfileFamily::new(r.profiles))));
    }
    out.push((
        "all feasible profiles".into(),
        u_closure(game, &ProfileFamily::new(0..game.len())),
    ));
    Ok(out)
}

/// Representation laws on one game, added to `t`.
pub fn representation_laws_for(
    game: &GameSpecification,
    label: &str,
    t: &mut BTreeMap<String, Tally>,
) -> Result<(), Error> {
    let spec = &game.spec;
    let index = GoalIndex::new(game)?;
    for (name, family) in checked_families(game)? {
        let results = representation_check_indexed(&index, &family)?;
        for r in results {
            t.get_mut(&r.name).unwrap().record(r.passed, || {
                format!("{label}, {name}: {}", r.counterexample.clone().unwrap_or_default())
            });
        }
        for (g, _) in delta_goal_sets(game, &family)? {
            t.get_mut("goal-sets-componentwise-syntactic")
                .unwrap()
                .record(is_componentwise_syntactic(spec, &g), || {
                    format!("{label}: {}", g.display(&spec.vocabulary))
                });
            t.get_mut("goal-sets-single-generator")
                .unwrap()
                .record(is_syntactic_goal_set(spec, &g), || {
                    format!("{label}: {}", g.display(&spec.vocabulary))
                });
        }
    }
    let r = feasible_representation_check(game)?;
    t.get_mut("feasible-representation").unwrap().record(r.passed, || {
        format!("{label}: {}", r.counterexample.clone().unwrap_or_default())
    });
    Ok(())
}

/// Representation laws over a stream of spec texts.
pub fn representation_suite<I>(texts: I) -> Result<Vec<Tally>, Error>
where
    I: IntoIterator<Item = (String, String)>,
{
    let texts: Vec<(String, String)> = texts.into_iter().collect();
    let parts = texts
        .par_iter()
        .map(|(label, text)| {
            let mut t = tally_map(&REPRESENTATION_LAWS);
            let game = derive_game(&parse_spec(text)?)?;
            representation_laws_for(&game, label, &mut t)?;
            Ok(t)
        })
        .collect::<Vec<Result<_, Error>>>();
    let mut t = tally_map(&REPRESENTATION_LAWS);
    for part in parts {
        for (name, tally) in part? {
            t.get_mut(&name).unwrap().merge(tally);
        }
    }
    Ok(ordered(t, &REPRESENTATION_LAWS))
}

pub fn representation_checks(game: &GameSpecification) -> Result<Vec<Tally>, Error> {
    let mut t = tally_map(&REPRESENTATION_LAWS);
    representation_laws_for(game, &game.spec.name, &mut t)?;
    Ok(ordered(t, &REPRESENTATION_LAWS))
}

/// Each agent's belief extension grows with its decision: for decisions
/// `d ⊆ d'`, `E_B(F ∪ d) ⊆ E_B(F ∪ d')`.
pub fn monotonicity_checks(spec: &AgentSystemSpec) -> Result<Vec<Tally>, Error> {
    let mut t = Tally::new("decision-monotonicity");
    for agent in spec.agent_ids() {
        let ds = enumerate_decisions(spec, agent)?;
        let exts = ds
            .iter()
            .map(|d| agent_extension(spec, d))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, d1) in ds.iter().enumerate() {
            for (j, d2) in ds.iter().enumerate() {
                if i != j && d1.literals.is_subset(&d2.literals) {
                    let ok = exts[i].formulas().is_subset(&exts[j].formulas());
                    t.record(ok, || {
                        format!(
                            "agent `{}`: {} vs {}",
                            spec.agent(agent).name,
                            spec.literals_to_strings(&d1.literals).join(","),
                            spec.literals_to_strings(&d2.literals).join(",")
                        )
                    });
                }
            }
        }
    }
    Ok(vec![t])
}

/// Profile-first and goals-first Pareto families coincide.
pub fn pipeline_equivalence_check(game: &GameSpecification, label: &str, t: &mut Tally) -> Result<(), Error> {
    let a = profile_first(game);
    let b = goals_first(game)?.family;
    t.record(a == b, || {
        let show = |f: &ProfileFamily| {
            f.profiles
                .iter()
                .map(|&i| game.profile(i).display(&game.spec))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{label}: profile-first [{}] vs goals-first [{}]", show(&a), show(&b))
    });
    Ok(())
}

pub fn pipeline_suite<I>(texts: I) -> Result<Tally, Error>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut t = Tally::new("pipeline-equivalence");
    for (label, text) in texts {
        let game = derive_game(&parse_spec(&text)?)?;
        pipeline_equivalence_check(&game, &label, &mut t)?;
    }
    Ok(t)
}

/// Seeded random spec texts, labelled by seed.
pub fn seeded_texts(seeds: std::ops::Range<u64>, shape: &SpecShape) -> impl Iterator<Item = (String, String)> + '_ {
    seeds.map(move |s| (format!("seed {s}"), random_spec_text(&mut rng(s), shape)))
}
