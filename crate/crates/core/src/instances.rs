//! Seeded random and exhaustive instance generators for the property
//! suites. Specs are produced as `.bdg` text so every instance also goes
//! through the parser.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extension::{Rule, RuleKind};
use crate::logic::{AgentId, AtomClass, AtomId, Formula, FormulaSet, Vocabulary};
use crate::model::{parse_spec, AgentSystemSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of randomly generated agent systems.
#[derive(Debug, Clone)]
pub struct SpecShape {
    pub agents: RangeInclusive<usize>,
    pub atoms_per_agent: RangeInclusive<usize>,
    pub world_atoms: RangeInclusive<usize>,
    pub beliefs_per_agent: RangeInclusive<usize>,
    pub desires_per_agent: RangeInclusive<usize>,
    pub max_depth: usize,
    /// Literal-subset decisions are only used when they keep the profile
    /// count at or below this.
    pub max_profiles: usize,
}

impl SpecShape {
    /// At most two agents with at most two decision atoms each.
    pub fn small() -> Self {
        SpecShape {
            agents: 1..=2,
            atoms_per_agent: 1..=2,
            world_atoms: 1..=2,
            beliefs_per_agent: 0..=3,
            desires_per_agent: 0..=3,
            max_depth: 1,
            max_profiles: 81,
        }
    }

    /// Up to three agents and deeper formulas.
    pub fn larger() -> Self {
        SpecShape {
            agents: 2..=3,
            atoms_per_agent: 1..=2,
            world_atoms: 1..=3,
            beliefs_per_agent: 0..=3,
            desires_per_agent: 1..=3,
            max_depth: 2,
            max_profiles: 243,
        }
    }
}

const AGENT_ATOMS: [[&str; 2]; 3] = [["a", "b"], ["c", "d"], ["e", "f"]];
const WORLD_ATOMS: [&str; 3] = ["p", "q", "r"];

fn literal_text(rng: &mut impl Rng, atoms: &[&str]) -> String {
    let atom = atoms.choose(rng).expect("no atoms");
    if rng.gen_bool(0.5) {
        (*atom).to_string()
    } else {
        format!("!{atom}")
    }
}

/// A random formula in `.bdg` syntax over `atoms`.
pub fn random_formula_text(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.1) {
            "true".to_string()
        } else {
            literal_text(rng, atoms)
        };
    }
    let left = random_formula_text(rng, atoms, depth - 1);
    match rng.gen_range(0..4) {
        0 => format!("!({left})"),
        1 => format!("({left} & {})", random_formula_text(rng, atoms, depth - 1)),
        2 => format!("({left} | {})", random_formula_text(rng, atoms, depth - 1)),
        _ => format!("({left} -> {})", random_formula_text(rng, atoms, depth - 1)),
    }
}

/// Random `.bdg` text of the given shape.
pub fn random_spec_text(rng: &mut impl Rng, shape: &SpecShape) -> String {
    let n_agents = rng.gen_range(shape.agents.clone());
    let world: Vec<&str> = WORLD_ATOMS[..rng.gen_range(shape.world_atoms.clone())].to_vec();
    let own: Vec<Vec<&str>> = (0..n_agents)
        .map(|i| AGENT_ATOMS[i][..rng.gen_range(shape.atoms_per_agent.clone())].to_vec())
        .collect();
    let mut all: Vec<&str> = own.iter().flatten().copied().collect();
    all.extend(&world);

    let decision_atoms: u32 = own.iter().map(|o| o.len() as u32).sum();
    let mode = match rng.gen_range(0..3) {
        0 if 3usize.pow(decision_atoms) <= shape.max_profiles => "literal-subsets",
        1 => "positive-subsets",
        _ => "total-assignments",
    };

    let mut out = String::new();
    writeln!(out, "option decision_mode = {mode}").unwrap();
    for (i, atoms) in own.iter().enumerate() {
        writeln!(out, "agent alpha{} {{", i + 1).unwrap();
        writeln!(out, "  atoms {}", atoms.join(" ")).unwrap();
        if rng.gen_bool(0.2) {
            writeln!(out, "  fact {}", literal_text(rng, &world)).unwrap();
        }
        if rng.gen_bool(0.15) {
            writeln!(out, "  initial {}", literal_text(rng, atoms)).unwrap();
        }
        for _ in 0..rng.gen_range(shape.beliefs_per_agent.clone()) {
            let x = random_formula_text(rng, &all, shape.max_depth);
            let y = random_formula_text(rng, &world, shape.max_depth);
            writeln!(out, "  belief {x} => {y}").unwrap();
        }
        let desires = rng.gen_range(shape.desires_per_agent.clone());
        let ranked = rng.gen_bool(0.7);
        writeln!(out, "  priority {}", if ranked { "ranked" } else { "identity" }).unwrap();
        let mut ranks: Vec<usize> = (1..=desires).collect();
        ranks.shuffle(rng);
        for rank in ranks {
            let x = if rng.gen_bool(0.6) {
                "true".to_string()
            } else {
                random_formula_text(rng, &all, shape.max_depth)
            };
            let y = random_formula_text(rng, &all, shape.max_depth);
            if ranked {
                writeln!(out, "  desire [rank={rank}]: {x} => {y}").unwrap();
            } else {
                writeln!(out, "  desire {x} => {y}").unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
    }
    writeln!(out, "world {}", world.join(" ")).unwrap();
    out
}

/// The random spec for `seed`; generated text always parses.
pub fn random_spec(seed: u64, shape: &SpecShape) -> AgentSystemSpec {
    let text = random_spec_text(&mut rng(seed), shape);
    parse_spec(&text).unwrap_or_else(|e| panic!("generated spec failed to parse: {e}\n{text}"))
}

/// Every spec of the exhaustive family: two agents with one or two
/// decision atoms each, world atom `p`, and every subset of at most three
/// rules from a fixed six-rule pool per agent, with ranked desires.
pub fn exhaustive_family() -> impl Iterator<Item = String> {
    let subsets: Vec<Vec<usize>> = (0u32..64)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| (0..6).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    let mut texts = Vec::new();
    for n1 in 1..=2 {
        for n2 in 1..=2 {
            for s1 in &subsets {
                for s2 in &subsets {
                    texts.push(family_member([n1, n2], [s1, s2]));
                }
            }
        }
    }
    texts.into_iter()
}

fn family_member(sizes: [usize; 2], chosen: [&Vec<usize>; 2]) -> String {
    let mut out = String::new();
    for i in 0..2 {
        let own = &AGENT_ATOMS[i][..sizes[i]];
        let first = own[0];
        let other = AGENT_ATOMS[1 - i][0];
        let second_cause = if own.len() == 2 {
            own[1].to_string()
        } else {
            format!("!{first}")
        };
        let pool: [(&str, String, String); 6] = [
            ("belief", first.to_string(), "p".to_string()),
            ("belief", second_cause, "!p".to_string()),
            ("desire", "true".to_string(), "p".to_string()),
            ("desire", "true".to_string(), "!p".to_string()),
            ("desire", "true".to_string(), other.to_string()),
            ("desire", "p".to_string(), format!("!{first}")),
        ];
        writeln!(out, "agent alpha{} {{", i + 1).unwrap();
        writeln!(out, "  atoms {}", own.join(" ")).unwrap();
        writeln!(out, "  priority ranked").unwrap();
        for &k in chosen[i] {
            let (kind, x, y) = &pool[k];
            if *kind == "belief" {
                writeln!(out, "  belief {x} => {y}").unwrap();
            } else {
                writeln!(out, "  desire [rank={}]: {x} => {y}", 10 - k).unwrap();
            }
        }
        writeln!(out, "}}").unwrap();
    }
    writeln!(out, "world p").unwrap();
    out
}

/// Rules and theories over world atoms for the extension laws.
#[derive(Debug, Clone)]
pub struct RuleInstance {
    pub vocabulary: Vocabulary,
    pub rules: Vec<Rule>,
    pub base: FormulaSet,
    /// A second theory `T'` for monotonicity.
    pub extra: FormulaSet,
}

fn random_formula(rng: &mut impl Rng, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.5) {
        if rng.gen_bool(0.1) {
            return Formula::True;
        }
        return Formula::literal(AtomId(rng.gen_range(0..atoms as u32)), rng.gen_bool(0.5));
    }
    let left = random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..4) {
        0 => left.not(),
        1 => left.and(random_formula(rng, atoms, depth - 1)),
        2 => left.or(random_formula(rng, atoms, depth - 1)),
        _ => left.implies(random_formula(rng, atoms, depth - 1)),
    }
}

/// A random instance with at most `max_atoms` atoms and `max_rules` rules.
pub fn random_rule_instance(seed: u64, max_atoms: usize, max_rules: usize) -> RuleInstance {
    let mut rng = rng(seed);
    let atoms = rng.gen_range(1..=max_atoms);
    let vocabulary =
        Vocabulary::new((0..atoms).map(|i| (format!("x{i}"), AtomClass::World))).expect("generated names are valid");
    let rules = (0..rng.gen_range(0..=max_rules))
        .map(|i| {
            Rule::new(
                format!("r{i}"),
                random_formula(&mut rng, atoms, 1),
                random_formula(&mut rng, atoms, 1),
                RuleKind::Belief,
                AgentId(0),
            )
        })
        .collect();
    let base = (0..rng.gen_range(0..=3))
        .map(|_| random_formula(&mut rng, atoms, 1))
        .collect();
    let extra = (0..rng.gen_range(0..=2))
        .map(|_| random_formula(&mut rng, atoms, 1))
        .collect();
    RuleInstance {
        vocabulary,
        rules,
        base,
        extra,
    }
}
