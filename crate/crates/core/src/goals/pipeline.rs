//! The two procedures for finding Pareto profiles: order all profiles
//! directly, or compute candidate joint goals first and order only the
//! profiles that are goal-based for a feasible one.

use std::collections::BTreeSet;

use super::{u_closure, GoalIndex, GoalSet, ProfileFamily};
use crate::error::{check_bound, Error};
use crate::game::{pareto, pareto_among, GameSpecification};

/// Profile-first: Pareto over all feasible profiles.
pub fn profile_first(game: &GameSpecification) -> ProfileFamily {
    u_closure(game, &ProfileFamily::new(pareto(game).profiles))
}

#[derive(Debug, Clone)]
pub struct GoalsFirst {
    /// Candidate goal sets after deduplication.
    pub candidates: usize,
    /// Goal sets with at least one goal-based feasible profile, with those
    /// profiles.
    pub feasible: Vec<(GoalSet, Vec<usize>)>,
    /// Pareto profiles among the union of goal-based profiles.
    pub family: ProfileFamily,
}

/// Goals-first: candidate goal sets pair the consequents of some desires
/// with the antecedents of some other desires, mirroring how a profile's
/// reached and untriggered desires shape its own goal set.
pub fn goals_first(game: &GameSpecification) -> Result<GoalsFirst, Error> {
    let spec = &game.spec;
    let desires: Vec<_> = spec.all_desires().collect();
    let total = check_bound(
        "candidate joint goal sets",
        3,
        desires.len(),
        spec.options.max_enumeration,
    )?;

    // Each desire is a positive source, a negative source, or neither.
    let mut candidates = BTreeSet::new();
    let mut digits = vec![0u8; desires.len()];
    for _ in 0..total {
        let mut g = GoalSet::default();
        for (d, &digit) in desires.iter().zip(&digits) {
            match digit {
                1 => {
                    g.positive.insert(d.consequent.clone());
                }
                2 => {
                    g.negative.insert(d.antecedent.clone());
                }
                _ => {}
            }
        }
        candidates.insert(g);
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < 3 {
                break;
            }
            *digit = 0;
        }
    }

    let index = GoalIndex::new(game)?;
    let mut feasible = Vec::new();
    let mut reached = BTreeSet::new();
    for g in &candidates {
        let profiles = index.goal_based_profiles(g)?;
        if !profiles.is_empty() {
            reached.extend(profiles.iter().copied());
            feasible.push((g.clone(), profiles));
        }
    }
    let pool: Vec<usize> = reached.into_iter().collect();
    let best = pareto_among(game, &pool).profiles;
    Ok(GoalsFirst {
        candidates: candidates.len(),
        feasible,
        family: u_closure(game, &ProfileFamily::new(best)),
    })
}
