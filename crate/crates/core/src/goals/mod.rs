//! Joint goals: U-closed profile families, Δ goal sets, goal-based
//! decisions, the representation checks, decision rules and the goal
//! generation heuristic.

mod heuristic;
mod pipeline;
mod representation;
mod rules;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use heuristic::{fragment_check, heuristic_containment, heuristic_goals, HeuristicMiss};
pub use pipeline::{goals_first, profile_first, GoalsFirst};
pub use representation::{feasible_representation_check, representation_check, representation_check_indexed};
pub use rules::{apply_decision_rule, DecisionRule};

use crate::decision::{joint_extension, DecisionProfile};
use crate::error::Error;
use crate::extension::RuleId;
use crate::game::GameSpecification;
use crate::logic::{display_set, Formula, FormulaSet, Vocabulary};
use crate::model::AgentSystemSpec;

/// `⟨G⁺, G⁻⟩`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoalSet {
    pub positive: FormulaSet,
    pub negative: FormulaSet,
}

impl GoalSet {
    pub fn display(&self, vocabulary: &Vocabulary) -> String {
        format!(
            "<{}, {}>",
            display_set(&self.positive, vocabulary),
            display_set(&self.negative, vocabulary)
        )
    }
}

/// A set of feasible profiles, held as indexes into the game's `Δ_f`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProfileFamily {
    pub profiles: BTreeSet<usize>,
    pub u_closed: bool,
}

impl ProfileFamily {
    /// A family whose closure status is unknown.
    pub fn new(profiles: impl IntoIterator<Item = usize>) -> Self {
        ProfileFamily {
            profiles: profiles.into_iter().collect(),
            u_closed: false,
        }
    }

    /// A family trusted to be U-closed without checking. Useful to exercise
    /// the closure direction of the representation check.
    pub fn assume_closed(profiles: impl IntoIterator<Item = usize>) -> Self {
        ProfileFamily {
            profiles: profiles.into_iter().collect(),
            u_closed: true,
        }
    }

    /// Looks up each profile in the game; infeasible profiles are errors.
    pub fn from_profiles<'a>(
        game: &GameSpecification,
        profiles: impl IntoIterator<Item = &'a DecisionProfile>,
    ) -> Result<Self, Error> {
        let mut out = BTreeSet::new();
        for p in profiles {
            match game.index_of(p) {
                Some(i) => {
                    out.insert(i);
                }
                None => return Err(Error::InfeasibleProfile(p.display(&game.spec))),
            }
        }
        Ok(ProfileFamily {
            profiles: out,
            u_closed: false,
        })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.profiles.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// Adds every feasible profile whose per-agent unreached sets equal those
/// of some member.
pub fn u_closure(game: &GameSpecification, family: &ProfileFamily) -> ProfileFamily {
    let keys: BTreeSet<Vec<BTreeSet<RuleId>>> = family
        .profiles
        .iter()
        .map(|&i| game.profiles[i].report.unreached_key())
        .collect();
    let profiles = game
        .profiles
        .iter()
        .enumerate()
        .filter(|(_, e)| keys.contains(&e.report.unreached_key()))
        .map(|(i, _)| i)
        .collect();
    ProfileFamily {
        profiles,
        u_closed: true,
    }
}

/// Whether the family is closed under indistinguishability, by inspection.
pub fn is_u_closed(game: &GameSpecification, family: &ProfileFamily) -> bool {
    u_closure(game, family).profiles == family.profiles
}

/// The Δ goal set of a single feasible profile: consequents of the reached
/// desires of all agents, antecedents of the untriggered ones.
pub fn goal_set_of(game: &GameSpecification, i: usize) -> GoalSet {
    let report = &game.profiles[i].report;
    let mut g = GoalSet::default();
    for (a, agent) in game.spec.agents.iter().enumerate() {
        let cls = &report.agents[a];
        for d in &agent.desires {
            if cls.reached.contains(&d.id) {
                g.positive.insert(d.consequent.clone());
            }
            if cls.inapplicable.contains(&d.id) {
                g.negative.insert(d.antecedent.clone());
            }
        }
    }
    g
}

/// Goal sets of a U-closed family, deduplicated, in canonical order, each
/// with the members that generate it.
pub fn delta_goal_sets(game: &GameSpecification, family: &ProfileFamily) -> Result<Vec<(GoalSet, Vec<usize>)>, Error> {
    if !family.u_closed && !is_u_closed(game, family) {
        return Err(Error::NotUClosed);
    }
    let mut out: BTreeMap<GoalSet, Vec<usize>> = BTreeMap::new();
    for &i in &family.profiles {
        out.entry(goal_set_of(game, i)).or_default().push(i);
    }
    Ok(out.into_iter().collect())
}

/// `E_B(F ∪ δ) ⊨ G⁺` and `E_B(F ∪ δ) ⊭ g` for every `g ∈ G⁻`.
pub fn is_goal_based(spec: &AgentSystemSpec, profile: &DecisionProfile, goals: &GoalSet) -> Result<bool, Error> {
    let joint = joint_extension(spec, profile)?;
    if !joint.consistent {
        return Err(Error::InfeasibleProfile(profile.display(spec)));
    }
    goal_based_in(&joint.formulas(), goals, spec)
}

fn goal_based_in(e: &FormulaSet, goals: &GoalSet, spec: &AgentSystemSpec) -> Result<bool, Error> {
    let r = spec.reasoner();
    for g in &goals.positive {
        if !r.entails(e, g)? {
            return Ok(false);
        }
    }
    for g in &goals.negative {
        if r.entails(e, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Precomputed entailment of every desire antecedent and consequent by
/// every feasible profile, so goal-basedness over desire-built goal sets
/// is a lookup.
pub struct GoalIndex<'g> {
    game: &'g GameSpecification,
    entailed: Vec<HashMap<Formula, bool>>,
}

impl<'g> GoalIndex<'g> {
    pub fn new(game: &'g GameSpecification) -> Result<Self, Error> {
        use rayon::prelude::*;
        let relevant: BTreeSet<Formula> = game
            .spec
            .all_desires()
            .flat_map(|d| [d.antecedent.clone(), d.consequent.clone()])
            .collect();
        let r = game.spec.reasoner();
        let entailed = game
            .profiles
            .par_iter()
            .map(|e| {
                let formulas = e.extension.formulas();
                relevant
                    .iter()
                    .map(|f| Ok((f.clone(), r.entails(&formulas, f)?)))
                    .collect::<Result<HashMap<_, _>, Error>>()
            })
            .collect::<Vec<Result<_, Error>>>()
            .into_iter()
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(GoalIndex { game, entailed })
    }

    fn entails(&self, i: usize, f: &Formula) -> Result<bool, Error> {
        match self.entailed[i].get(f) {
            Some(&b) => Ok(b),
            None => Ok(self
                .game
                .spec
                .reasoner()
                .entails(&self.game.profiles[i].extension.formulas(), f)?),
        }
    }

    /// Whether feasible profile `i` is goal-based for `goals`.
    pub fn game(&self) -> &'g GameSpecification {
        self.game
    }

    pub fn is_goal_based(&self, i: usize, goals: &GoalSet) -> Result<bool, Error> {
        for g in &goals.positive {
            if !self.entails(i, g)? {
                return Ok(false);
            }
        }
        for g in &goals.negative {
            if self.entails(i, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every feasible profile that is goal-based for `goals`.
    pub fn goal_based_profiles(&self, goals: &GoalSet) -> Result<Vec<usize>, Error> {
        let mut out = Vec::new();
        for i in 0..self.game.len() {
            if self.is_goal_based(i, goals)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// Goal sets `⟨{y | x⇒y ∈ D'}, {x | x⇒y ∈ D'}⟩` for every `D' ⊆ D`,
/// deduplicated.
pub fn syntactic_goal_sets(spec: &AgentSystemSpec) -> Result<Vec<GoalSet>, Error> {
    let desires: Vec<_> = spec.all_desires().collect();
    crate::error::check_bound("syntactic goal sets", 2, desires.len(), spec.options.max_enumeration)?;
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << desires.len()) {
        let mut g = GoalSet::default();
        for (i, d) in desires.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.positive.insert(d.consequent.clone());
                g.negative.insert(d.antecedent.clone());
            }
        }
        out.insert(g);
    }
    Ok(out.into_iter().collect())
}

/// Whether a single `D' ⊆ D` generates `g` in the syntactic clause.
pub fn is_syntactic_goal_set(spec: &AgentSystemSpec, g: &GoalSet) -> bool {
    // The largest candidate: every desire whose parts both appear in g.
    let mut pos = FormulaSet::new();
    let mut neg = FormulaSet::new();
    for d in spec.all_desires() {
        if g.positive.contains(&d.consequent) && g.negative.contains(&d.antecedent) {
            pos.insert(d.consequent.clone());
            neg.insert(d.antecedent.clone());
        }
    }
    pos == g.positive && neg == g.negative
}

/// Whether `G⁺` is the consequent set of some `D⁺ ⊆ D` and `G⁻` the
/// antecedent set of some `D⁻ ⊆ D`.
pub fn is_componentwise_syntactic(spec: &AgentSystemSpec, g: &GoalSet) -> bool {
    let consequents: FormulaSet = spec.all_desires().map(|d| d.consequent.clone()).collect();
    let antecedents: FormulaSet = spec.all_desires().map(|d| d.antecedent.clone()).collect();
    g.positive.is_subset(&consequents) && g.negative.is_subset(&antecedents)
}
