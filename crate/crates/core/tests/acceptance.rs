//! Acceptance criteria. Prints one PASS or FAIL line per criterion and
//! exits nonzero when any fails.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use bdgame::checks::{
    extension_law_suite, game_law_suite, order_law_suite, pipeline_suite, representation_suite, seeded_texts, Tally,
};
use bdgame::decision::{
    agent_extension, is_feasible_decision, is_feasible_profile, Decision, DecisionProfile, ProfileOrdering,
};
use bdgame::game::{derive_game, Concept, GameSpecification, SwapPolicy};
use bdgame::goals::{delta_goal_sets, u_closure, ProfileFamily};
use bdgame::instances::{exhaustive_family, SpecShape};
use bdgame::logic::{display_set, AgentId};
use bdgame::model::{parse_spec, AgentSystemSpec, Literal};

const FIXTURES: [&str; 7] = ["ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "coop"];

/// A note for the PASS line, or the list of problems.
type Outcome = Result<String, Vec<String>>;
type Criterion = (&'static str, fn() -> Outcome);

struct Problems(Vec<String>, Vec<String>);

impl Problems {
    fn new() -> Self {
        Problems(Vec::new(), Vec::new())
    }

    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.0.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn tallies(&mut self, tallies: &[Tally], recorded: &[&str]) {
        for t in tallies {
            let note = if t.passed() {
                String::new()
            } else {
                format!(", {} failed", t.failed)
            };
            self.1.push(format!("{} {}{note}", t.name, t.checked));
            if t.checked == 0 {
                self.0.push(format!("{}: nothing checked", t.name));
            } else if !t.passed() && !recorded.contains(&t.name.as_str()) {
                self.0.push(format!(
                    "{}: {} of {} failed, first: {}",
                    t.name,
                    t.failed,
                    t.checked,
                    t.first_failure.as_deref().unwrap_or("")
                ));
            }
        }
    }

    fn done(self) -> Outcome {
        if self.0.is_empty() {
            Ok(self.1.join("; "))
        } else {
            Err(self.0)
        }
    }
}

fn fixture_text(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(format!("{name}.bdg"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn fixture(name: &str) -> AgentSystemSpec {
    parse_spec(&fixture_text(name)).unwrap()
}

fn decision(spec: &AgentSystemSpec, agent: usize, lits: &[&str]) -> Decision {
    let literals = lits.iter().map(|s| match s.strip_prefix('!') {
        Some(n) => Literal::negative(spec.vocabulary.lookup(n).unwrap()),
        None => Literal::positive(spec.vocabulary.lookup(s).unwrap()),
    });
    Decision::new(AgentId(agent), literals)
}

fn extension_text(spec: &AgentSystemSpec, lits: &[&str]) -> (String, bool) {
    let e = agent_extension(spec, &decision(spec, 0, lits)).unwrap();
    (display_set(&e.formulas(), &spec.vocabulary), e.consistent)
}

fn index_named(game: &GameSpecification, shown: &str) -> usize {
    (0..game.len())
        .find(|&i| game.profile(i).display(&game.spec) == shown)
        .unwrap_or_else(|| panic!("no profile {shown}"))
}

fn solution_names(game: &GameSpecification, concept: Concept) -> Vec<String> {
    game.solve(concept, SwapPolicy::Skip)
        .unwrap()
        .profiles
        .iter()
        .map(|&i| game.profile(i).display(&game.spec))
        .collect()
}

fn unreached_ids(game: &GameSpecification, i: usize, agent: usize) -> Vec<String> {
    game.profiles[i].report.agents[agent]
        .unreached
        .iter()
        .map(|id| id.as_str().to_string())
        .collect()
}

fn example_one() -> Outcome {
    let spec = fixture("ex1");
    let mut p = Problems::new();
    p.expect("E({a})", extension_text(&spec, &["a"]), ("{a, p, !p}".into(), false));
    p.expect("E({})", extension_text(&spec, &[]), ("{p}".into(), true));
    p.done()
}

fn example_two() -> Outcome {
    let spec = fixture("ex2");
    let mut p = Problems::new();
    for (lits, want) in [
        (&["a"][..], "{a, !p}"),
        (&["a", "b"], "{a, b, !p}"),
        (&["a", "c"], "{a, c, q, !p}"),
        (&["a", "d"], "{a, d, q, !p}"),
        (&["a", "e"], "{a, e, !p, !q}"),
    ] {
        p.expect(
            &format!("E({lits:?})"),
            extension_text(&spec, lits),
            (want.to_string(), true),
        );
    }
    p.expect(
        "E({a, d, e})",
        extension_text(&spec, &["a", "d", "e"]),
        ("{a, d, e, q, !p, !q}".into(), false),
    );
    p.expect(
        "{a, d, e} feasible",
        is_feasible_decision(&spec, &decision(&spec, 0, &["a", "d", "e"])).unwrap(),
        false,
    );
    p.done()
}

fn example_five() -> Outcome {
    let spec = fixture("ex5");
    let game = derive_game(&spec).unwrap();
    let mut p = Problems::new();
    let named = |lits: &[&str]| {
        let shown = DecisionProfile::new(vec![decision(&spec, 0, lits)]).display(&spec);
        index_named(&game, &shown)
    };
    for (lits, want) in [
        (&["a"][..], &["tb", "tq"][..]),
        (&["a", "b"], &["bp", "tq"]),
        (&["a", "c"], &["tq"]),
        (&["a", "d"], &["dq", "tb"]),
        (&["a", "e"], &["tb", "tq"]),
        (&["a", "b", "c"], &["bp"]),
    ] {
        let got = unreached_ids(&game, named(lits), 0);
        p.expect(
            &format!("U({lits:?})"),
            got,
            want.iter().map(|s| s.to_string()).collect(),
        );
    }
    let ac = named(&["a", "c"]);
    p.expect(
        "{a,c} vs {a}",
        game.compare(ac, named(&["a"]), AgentId(0)),
        ProfileOrdering::Better,
    );
    p.expect(
        "{a,c} vs {a,b,c}",
        game.compare(ac, named(&["a", "b", "c"]), AgentId(0)),
        ProfileOrdering::Better,
    );
    p.done()
}

fn example_three() -> Outcome {
    let spec = fixture("ex3");
    let mut p = Problems::new();
    let profile = |d1: &[&str], d2: &[&str]| DecisionProfile::new(vec![decision(&spec, 0, d1), decision(&spec, 1, d2)]);
    p.expect(
        "<{}, {b}> feasible",
        is_feasible_profile(&spec, &profile(&[], &["b"])).unwrap(),
        true,
    );
    p.expect(
        "<{a}, {b}> feasible",
        is_feasible_profile(&spec, &profile(&["a"], &["b"])).unwrap(),
        false,
    );
    p.done()
}

fn example_four() -> Outcome {
    let spec = fixture("ex4");
    let game = derive_game(&spec).unwrap();
    let mut p = Problems::new();
    let rows = [
        ("<a, b>", "{a, b, p, q}", &[][..], &["np2", "nq2"][..]),
        ("<a, !b>", "{a, p, !b, !q}", &["q1"], &["np2"]),
        ("<!a, b>", "{b, q, !a, !p}", &["p1"], &["nq2"]),
        ("<!a, !b>", "{!a, !b, !p, !q}", &["p1", "q1"], &[]),
    ];
    p.expect("feasible profiles", game.len(), 4);
    for (name, outcome, u1, u2) in rows {
        let i = index_named(&game, name);
        p.expect(
            &format!("E{name}"),
            display_set(&game.profiles[i].extension.formulas(), &spec.vocabulary),
            outcome.to_string(),
        );
        let strings = |ids: &[&str]| ids.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        p.expect(&format!("U1{name}"), unreached_ids(&game, i, 0), strings(u1));
        p.expect(&format!("U2{name}"), unreached_ids(&game, i, 1), strings(u2));
    }
    let chains = [
        (0, ["<a, b>", "<a, !b>", "<!a, b>", "<!a, !b>"]),
        (1, ["<!a, !b>", "<!a, b>", "<a, !b>", "<a, b>"]),
    ];
    for (agent, chain) in chains {
        for w in chain.windows(2) {
            let (i, j) = (index_named(&game, w[0]), index_named(&game, w[1]));
            p.expect(
                &format!("alpha{}: {} over {}", agent + 1, w[0], w[1]),
                game.compare(i, j, AgentId(agent)),
                ProfileOrdering::Better,
            );
        }
    }
    p.expect("dominant", solution_names(&game, Concept::Dominant), vec![]);
    p.expect(
        "nash",
        solution_names(&game, Concept::Nash),
        vec!["<a, !b>".to_string()],
    );
    p.done()
}

fn example_six() -> Outcome {
    let game = derive_game(&fixture("ex6")).unwrap();
    let mut p = Problems::new();
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    p.expect("nash", solution_names(&game, Concept::Nash), names(&["<!a, !b>"]));
    p.expect(
        "pareto",
        solution_names(&game, Concept::Pareto),
        names(&["<a, b>", "<a, !b>", "<!a, b>"]),
    );
    let (ab, nn) = (index_named(&game, "<a, b>"), index_named(&game, "<!a, !b>"));
    for agent in game.agents() {
        p.expect(
            &format!("<a, b> over <!a, !b> for agent {}", agent.0 + 1),
            game.compare(ab, nn, agent),
            ProfileOrdering::Better,
        );
    }
    p.done()
}

fn cooperation() -> Outcome {
    let game = derive_game(&fixture("coop")).unwrap();
    let mut p = Problems::new();
    let i = index_named(&game, "<a, c>");
    p.expect("U1", unreached_ids(&game, i, 0), vec![]);
    p.expect("U2", unreached_ids(&game, i, 1), vec![]);
    let family = u_closure(&game, &ProfileFamily::new([i]));
    let sets: Vec<String> = delta_goal_sets(&game, &family)
        .unwrap()
        .iter()
        .filter(|(_, gens)| gens.contains(&i))
        .map(|(g, _)| g.display(&game.spec.vocabulary))
        .collect();
    p.expect("goal set", sets, vec!["<{p & q}, {}>".to_string()]);
    p.done()
}

fn extension_laws() -> Outcome {
    let mut p = Problems::new();
    p.tallies(&extension_law_suite(0..1000, 6, 6).unwrap(), &[]);
    p.done()
}

fn order_laws() -> Outcome {
    let mut p = Problems::new();
    p.tallies(&order_law_suite(4), &["antisymmetry"]);
    p.done()
}

fn game_laws() -> Outcome {
    let mut p = Problems::new();
    p.tallies(&game_law_suite(0..400, &SpecShape::small()).unwrap(), &[]);
    p.done()
}

fn representation() -> Outcome {
    let mut p = Problems::new();
    let family = exhaustive_family()
        .enumerate()
        .map(|(k, text)| (format!("family #{k}"), text));
    let shape = SpecShape::larger();
    let larger = seeded_texts(0..500, &shape);
    p.tallies(
        &representation_suite(family.chain(larger)).unwrap(),
        &["goal-sets-single-generator"],
    );
    p.done()
}

fn pipeline() -> Outcome {
    let mut p = Problems::new();
    let fixtures = FIXTURES.iter().map(|n| (n.to_string(), fixture_text(n)));
    let (small, larger) = (SpecShape::small(), SpecShape::larger());
    let seeded = seeded_texts(0..300, &small).chain(seeded_texts(1000..1100, &larger));
    p.tallies(&[pipeline_suite(fixtures.chain(seeded)).unwrap()], &[]);
    p.done()
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("example 1 extensions", example_one),
        ("example 2 extensions and feasibility", example_two),
        ("example 5 unreached sets and comparisons", example_five),
        ("example 3 profile feasibility", example_three),
        ("example 4 table, orders, dominance and nash", example_four),
        ("example 6 nash and pareto", example_six),
        ("cooperation goal set", cooperation),
        ("extension laws on 1000 instances", extension_laws),
        ("order laws up to four rules", order_laws),
        ("game laws on seeded games", game_laws),
        (
            "representation on the exhaustive family and 500 larger instances",
            representation,
        ),
        ("pipeline equivalence", pipeline),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(note) if note.is_empty() => println!("PASS {:>2} {name} ({secs:.1}s)", n + 1),
            Ok(note) => println!("PASS {:>2} {name} ({secs:.1}s): {note}", n + 1),
            Err(problems) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s)", n + 1);
                for problem in problems {
                    println!("       {problem}");
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
