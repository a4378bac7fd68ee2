//! The game specification of an agent system and its solution concepts.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::decision::{
    agent_extension, compare_unreached, enumerate_decisions, product_profiles, report_for_extension, Decision,
    DecisionProfile, DesireReport, ProfileOrdering,
};
use crate::error::Error;
use crate::extension::Extension;
use crate::logic::AgentId;
use crate::model::AgentSystemSpec;

/// What to do when a dominance or Nash comparison needs a swapped profile
/// that is jointly infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SwapPolicy {
    /// Leave the comparison out of the quantifier's range.
    #[default]
    Skip,
    /// Abort with an infeasible-profile error.
    Fail,
}

impl SwapPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            SwapPolicy::Skip => "skip",
            SwapPolicy::Fail => "fail",
        }
    }
}

impl FromStr for SwapPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "skip" => Ok(SwapPolicy::Skip),
            "fail" => Ok(SwapPolicy::Fail),
            other => Err(format!(
                "unknown infeasible-swap policy `{other}` (expected skip or fail)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Concept {
    Pareto,
    StrongPareto,
    Dominant,
    Nash,
}

impl Concept {
    pub const ALL: [Concept; 4] = [Concept::Pareto, Concept::StrongPareto, Concept::Dominant, Concept::Nash];

    pub fn as_str(self) -> &'static str {
        match self {
            Concept::Pareto => "pareto",
            Concept::StrongPareto => "strong-pareto",
            Concept::Dominant => "dominant",
            Concept::Nash => "nash",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Concept {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Concept::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown concept `{s}` (expected pareto, strong-pareto, dominant or nash)"))
    }
}

/// A jointly feasible profile with its cached extension and desire report.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub profile: DecisionProfile,
    pub extension: Extension,
    pub report: DesireReport,
}

/// `⟨S, Δ_f, (≥^U_i)⟩`: the feasible profiles and per-agent preferences.
#[derive(Debug, Clone)]
pub struct GameSpecification {
    pub spec: AgentSystemSpec,
    /// `A_i`: the individually feasible decisions of each agent.
    pub feasible_decisions: Vec<Vec<Decision>>,
    /// `Δ_f` in canonical order.
    pub profiles: Vec<ProfileEntry>,
    index: HashMap<DecisionProfile, usize>,
}

impl GameSpecification {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> {
        (0..self.spec.agents.len()).map(AgentId)
    }

    /// Position of a profile in `Δ_f`, or `None` when it is infeasible.
    pub fn index_of(&self, profile: &DecisionProfile) -> Option<usize> {
        self.index.get(profile).copied()
    }

    pub fn profile(&self, i: usize) -> &DecisionProfile {
        &self.profiles[i].profile
    }

    /// How profile `i` compares to profile `j` for `agent`.
    pub fn compare(&self, i: usize, j: usize, agent: AgentId) -> ProfileOrdering {
        compare_unreached(
            &self.spec.agent(agent).priority,
            self.profiles[i].report.unreached(agent),
            self.profiles[j].report.unreached(agent),
        )
    }

    pub fn solve(&self, concept: Concept, policy: SwapPolicy) -> Result<SolutionReport, Error> {
        match concept {
            Concept::Pareto => Ok(pareto(self)),
            Concept::StrongPareto => Ok(strongly_pareto(self)),
            Concept::Dominant => dominant(self, policy),
            Concept::Nash => nash(self, policy),
        }
    }
}

/// Builds `Δ_f` from the product of the agents' feasible decisions.
pub fn derive_game(spec: &AgentSystemSpec) -> Result<GameSpecification, Error> {
    let reasoner = spec.reasoner();
    let mut feasible_decisions = Vec::with_capacity(spec.agents.len());
    let mut cache: Vec<HashMap<Decision, Extension>> = Vec::with_capacity(spec.agents.len());
    for agent in spec.agent_ids() {
        let all = enumerate_decisions(spec, agent)?;
        let exts = all
            .par_iter()
            .map(|d| agent_extension(spec, d))
            .collect::<Result<Vec<_>, _>>()?;
        let mut kept = Vec::new();
        let mut map = HashMap::new();
        for (d, e) in all.into_iter().zip(exts) {
            if e.consistent {
                kept.push(d.clone());
                map.insert(d, e);
            }
        }
        feasible_decisions.push(kept);
        cache.push(map);
    }

    let candidates = product_profiles(&feasible_decisions, spec.options.max_enumeration)?;
    let evaluated = candidates
        .into_par_iter()
        .map(|profile| {
            let parts: Vec<&Extension> = profile.decisions.iter().map(|d| &cache[d.agent.0][d]).collect();
            let joint = Extension::union(parts, &reasoner)?;
            if !joint.consistent {
                return Ok(None);
            }
            let report = report_for_extension(spec, &joint, &reasoner)?;
            Ok(Some(ProfileEntry {
                profile,
                extension: joint,
                report,
            }))
        })
        // Collected in order first so the reported error never depends on scheduling.
        .collect::<Vec<Result<_, Error>>>()
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;

    let profiles: Vec<ProfileEntry> = evaluated.into_iter().flatten().collect();
    let index = profiles
        .iter()
        .enumerate()
        .map(|(i, e)| (e.profile.clone(), i))
        .collect();
    Ok(GameSpecification {
        spec: spec.clone(),
        feasible_decisions,
        profiles,
        index,
    })
}

/// Why a profile was excluded: the profile index that beats it, and for
/// dominance and Nash the agent whose condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub excluded: usize,
    pub witness: usize,
    pub agent: Option<AgentId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionReport {
    pub concept: Concept,
    /// Indexes into the game's feasible profiles, ascending.
    pub profiles: Vec<usize>,
    pub witnesses: Vec<Witness>,
}

impl SolutionReport {
    fn collect(concept: Concept, outcomes: Vec<(usize, Option<Witness>)>) -> Self {
        let mut profiles = Vec::new();
        let mut witnesses = Vec::new();
        for (i, w) in outcomes {
            match w {
                None => profiles.push(i),
                Some(w) => witnesses.push(w),
            }
        }
        SolutionReport {
            concept,
            profiles,
            witnesses,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.profiles.binary_search(&i).is_ok()
    }
}

/// `j` is strictly better than `i` for every agent.
pub fn pareto_improves(game: &GameSpecification, j: usize, i: usize) -> bool {
    game.agents().all(|a| game.compare(j, i, a) == ProfileOrdering::Better)
}

/// `j` is at least as good as `i` for every agent and better for one.
pub fn strongly_improves(game: &GameSpecification, j: usize, i: usize) -> bool {
    let mut strict = false;
    for a in game.agents() {
        match game.compare(j, i, a) {
            ProfileOrdering::Better => strict = true,
            ProfileOrdering::Equal => {}
            _ => return false,
        }
    }
    strict
}

/// Pareto profiles among `candidates`, a subset of the game's profiles.
pub fn pareto_among(game: &GameSpecification, candidates: &[usize]) -> SolutionReport {
    let outcomes = candidates
        .par_iter()
        .map(|&i| {
            let w = candidates
                .iter()
                .find(|&&j| pareto_improves(game, j, i))
                .map(|&j| Witness {
                    excluded: i,
                    witness: j,
                    agent: None,
                });
            (i, w)
        })
        .collect();
    SolutionReport::collect(Concept::Pareto, outcomes)
}

pub fn pareto(game: &GameSpecification) -> SolutionReport {
    let all: Vec<usize> = (0..game.len()).collect();
    pareto_among(game, &all)
}

pub fn strongly_pareto(game: &GameSpecification) -> SolutionReport {
    let outcomes = (0..game.len())
        .into_par_iter()
        .map(|i| {
            let w = (0..game.len())
                .find(|&j| strongly_improves(game, j, i))
                .map(|j| Witness {
                    excluded: i,
                    witness: j,
                    agent: None,
                });
            (i, w)
        })
        .collect();
    SolutionReport::collect(Concept::StrongPareto, outcomes)
}

fn swapped(
    game: &GameSpecification,
    base: &DecisionProfile,
    d: &Decision,
    policy: SwapPolicy,
) -> Result<Option<usize>, Error> {
    let p = base.with_decision(d.clone());
    match (game.index_of(&p), policy) {
        (Some(i), _) => Ok(Some(i)),
        (None, SwapPolicy::Skip) => Ok(None),
        (None, SwapPolicy::Fail) => Err(Error::InfeasibleProfile(p.display(&game.spec))),
    }
}

/// Profiles in which every agent's decision is weakly best against every
/// feasible choice of the others.
pub fn dominant(game: &GameSpecification, policy: SwapPolicy) -> Result<SolutionReport, Error> {
    let outcomes = (0..game.len())
        .into_par_iter()
        .map(|i| {
            let mine = game.profile(i);
            for a in game.agents() {
                let own = mine.decision(a);
                for k in 0..game.len() {
                    let other = game.profile(k);
                    // (δ'_{-i}, δ_i) against δ' itself.
                    let Some(j) = swapped(game, other, own, policy)? else {
                        continue;
                    };
                    if !game.compare(j, k, a).at_least() {
                        return Ok((
                            i,
                            Some(Witness {
                                excluded: i,
                                witness: k,
                                agent: Some(a),
                            }),
                        ));
                    }
                }
            }
            Ok((i, None))
        })
        .collect::<Vec<Result<_, Error>>>()
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SolutionReport::collect(Concept::Dominant, outcomes))
}

/// Profiles in which no agent has a unilateral deviation, among its
/// individually feasible decisions, to a strictly better feasible profile.
pub fn nash(game: &GameSpecification, policy: SwapPolicy) -> Result<SolutionReport, Error> {
    let outcomes = (0..game.len())
        .into_par_iter()
        .map(|i| {
            let mine = game.profile(i);
            for a in game.agents() {
                for d in &game.feasible_decisions[a.0] {
                    let Some(j) = swapped(game, mine, d, policy)? else {
                        continue;
                    };
                    if game.compare(j, i, a) == ProfileOrdering::Better {
                        return Ok((
                            i,
                            Some(Witness {
                                excluded: i,
                                witness: j,
                                agent: Some(a),
                            }),
                        ));
                    }
                }
            }
            Ok((i, None))
        })
        .collect::<Vec<Result<_, Error>>>()
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SolutionReport::collect(Concept::Nash, outcomes))
}

/// Rechecks a witness against the concept's definition.
pub fn witness_is_genuine(game: &GameSpecification, concept: Concept, w: &Witness) -> bool {
    let (i, j) = (w.excluded, w.witness);
    match (concept, w.agent) {
        (Concept::Pareto, None) => pareto_improves(game, j, i),
        (Concept::StrongPareto, None) => strongly_improves(game, j, i),
        (Concept::Dominant, Some(a)) => {
            let own = game.profile(i).decision(a);
            match game.index_of(&game.profile(j).with_decision(own.clone())) {
                Some(s) => !game.compare(s, j, a).at_least(),
                None => false,
            }
        }
        (Concept::Nash, Some(a)) => {
            game.profile(i).with_decision(game.profile(j).decision(a).clone()) == *game.profile(j)
                && game.compare(j, i, a) == ProfileOrdering::Better
        }
        _ => false,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::model::parse_spec;

    pub(crate) const EXAMPLE_FOUR: &str = r#"
system "example 4"
option decision_mode = total-assignments
agent alpha1 {
  atoms a
  priority ranked
  belief a => p
  belief !a => !p
  desire p1 [rank=2]: true => p
  desire q1 [rank=1]: true => q
}
agent alpha2 {
  atoms b
  priority ranked
  belief b => q
  belief !b => !q
  desire np2 [rank=2]: true => !p
  desire nq2 [rank=1]: true => !q
}
world p q
"#;

    pub(crate) const EXAMPLE_SIX: &str = r#"
system "example 6"
option decision_mode = total-assignments
agent alpha1 {
  atoms a
  priority identity
  desire true => !a & b
  desire true => b
  desire true => !(a & !b)
}
agent alpha2 {
  atoms b
  priority identity
  desire true => a & !b
  desire true => a
  desire true => !(!a & b)
}
"#;

    fn shown(game: &GameSpecification, r: &SolutionReport) -> Vec<String> {
        r.profiles
            .iter()
            .map(|&i| game.profile(i).display(&game.spec))
            .collect()
    }

    #[test]
    fn example_four_game() {
        let game = derive_game(&parse_spec(EXAMPLE_FOUR).unwrap()).unwrap();
        assert_eq!(game.len(), 4);
        assert_eq!(shown(&game, &pareto(&game)).len(), 4);
        assert_eq!(shown(&game, &nash(&game, SwapPolicy::Skip).unwrap()), vec!["<a, !b>"]);
        // The stated total orders make a dominant for alpha1 and !b for alpha2.
        assert_eq!(
            shown(&game, &dominant(&game, SwapPolicy::Skip).unwrap()),
            vec!["<a, !b>"]
        );
    }

    #[test]
    fn example_six_game() {
        let game = derive_game(&parse_spec(EXAMPLE_SIX).unwrap()).unwrap();
        let nash = nash(&game, SwapPolicy::Skip).unwrap();
        assert_eq!(shown(&game, &nash), vec!["<!a, !b>"]);
        let p = pareto(&game);
        assert_eq!(shown(&game, &p), vec!["<a, b>", "<a, !b>", "<!a, b>"]);
        assert_eq!(shown(&game, &strongly_pareto(&game)), shown(&game, &p));
        for w in &p.witnesses {
            assert!(witness_is_genuine(&game, Concept::Pareto, w));
        }
        for w in &nash.witnesses {
            assert!(witness_is_genuine(&game, Concept::Nash, w));
        }
    }

    #[test]
    fn infeasible_profiles_are_dropped() {
        let text = r#"
option decision_mode = positive-subsets
agent alpha1 {
  atoms a
  belief a => p
}
agent alpha2 {
  atoms b
  belief b => !p
}
world p
"#;
        let spec = parse_spec(text).unwrap();
        let game = derive_game(&spec).unwrap();
        assert_eq!(game.len(), 3);
        let shown: Vec<String> = game.profiles.iter().map(|e| e.profile.display(&spec)).collect();
        assert!(!shown.contains(&"<a, b>".to_string()));
        // Every agent can deviate into the infeasible corner.
        assert!(nash(&game, SwapPolicy::Fail).is_err());
        assert_eq!(nash(&game, SwapPolicy::Skip).unwrap().profiles.len(), 3);
    }

    #[test]
    fn desire_free_game_has_empty_unreached_sets() {
        let spec = parse_spec("agent x {\n atoms a\n}\nagent y {\n atoms b\n}\n").unwrap();
        let game = derive_game(&spec).unwrap();
        assert_eq!(game.len(), 9);
        for e in &game.profiles {
            assert!(e.report.agents.iter().all(|a| a.unreached.is_empty()));
        }
        for c in Concept::ALL {
            assert_eq!(game.solve(c, SwapPolicy::Skip).unwrap().profiles.len(), 9);
        }
    }

    #[test]
    fn concept_names_round_trip() {
        for c in Concept::ALL {
            assert_eq!(c.as_str().parse::<Concept>().unwrap(), c);
        }
        assert!("nope".parse::<Concept>().is_err());
    }
}
