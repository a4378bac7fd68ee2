use super::{delta_goal_sets, goal_set_of, is_goal_based, u_closure, GoalIndex, GoalSet, ProfileFamily};
use crate::checks::CheckResult;
use crate::decision::enumerate_profiles;
use crate::error::Error;
use crate::game::GameSpecification;

/// Both directions of the goal-based representation for a U-closed family:
/// every member is goal-based for its own goal set, and every feasible
/// profile that is goal-based for one of the family's goal sets is a member.
pub fn representation_check(game: &GameSpecification, family: &ProfileFamily) -> Result<Vec<CheckResult>, Error> {
    representation_check_indexed(&GoalIndex::new(game)?, family)
}

/// [`representation_check`] with a prebuilt index, for checking many
/// families of one game.
pub fn representation_check_indexed(index: &GoalIndex<'_>, family: &ProfileFamily) -> Result<Vec<CheckResult>, Error> {
    let game = index.game();
    let sets = delta_goal_sets(game, family)?;
    let vocab = &game.spec.vocabulary;

    let mut soundness = CheckResult::pass("goal-based-members");
    'outer: for (g, generators) in &sets {
        for &i in generators {
            if !index.is_goal_based(i, g)? {
                soundness = CheckResult::fail(
                    "goal-based-members",
                    format!(
                        "{} is not goal-based for its own goal set {}",
                        game.profile(i).display(&game.spec),
                        g.display(vocab)
                    ),
                );
                break 'outer;
            }
        }
    }

    let mut closure = CheckResult::pass("goal-based-closure");
    'outer2: for (g, generators) in &sets {
        for j in index.goal_based_profiles(g)? {
            if !family.contains(j) {
                closure = CheckResult::fail(
                    "goal-based-closure",
                    format!(
                        "{} is goal-based for {} (generated by {}) but not in the family",
                        game.profile(j).display(&game.spec),
                        g.display(vocab),
                        game.profile(generators[0]).display(&game.spec)
                    ),
                );
                break 'outer2;
            }
        }
    }
    Ok(vec![soundness, closure])
}

/// Every feasible profile is goal-based for the goal set of the closure of
/// its singleton; infeasible profiles admit no goal set at all.
pub fn feasible_representation_check(game: &GameSpecification) -> Result<CheckResult, Error> {
    let spec = &game.spec;
    for profile in enumerate_profiles(spec)? {
        match game.index_of(&profile) {
            Some(i) => {
                let closed = u_closure(game, &ProfileFamily::new([i]));
                let sets = delta_goal_sets(game, &closed)?;
                let own = goal_set_of(game, i);
                let found = sets.iter().any(|(g, _)| *g == own);
                if !found || !is_goal_based(spec, &profile, &own)? {
                    return Ok(CheckResult::fail(
                        "feasible-representation",
                        format!(
                            "feasible {} is not goal-based for {}",
                            profile.display(spec),
                            own.display(&spec.vocabulary)
                        ),
                    ));
                }
            }
            None => match is_goal_based(spec, &profile, &GoalSet::default()) {
                Err(Error::InfeasibleProfile(_)) => {}
                Ok(_) => {
                    return Ok(CheckResult::fail(
                        "feasible-representation",
                        format!("{} is missing from the game but feasible", profile.display(spec)),
                    ))
                }
                Err(e) => return Err(e),
            },
        }
    }
    Ok(CheckResult::pass("feasible-representation"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::derive_game;
    use crate::game::tests::EXAMPLE_SIX;
    use crate::goals::tests::index_named;
    use crate::model::parse_spec;

    #[test]
    fn soundness_holds_but_closure_fails_on_example_six() {
        let game = derive_game(&parse_spec(EXAMPLE_SIX).unwrap()).unwrap();
        let i = index_named(&game, "<!a, !b>");
        let family = u_closure(&game, &ProfileFamily::new([i]));
        let checks = representation_check(&game, &family).unwrap();
        assert!(checks[0].passed);
        // <a, b> also entails both positive goals.
        assert!(!checks[1].passed);
        assert!(checks[1].counterexample.as_deref().unwrap().starts_with("<a, b>"));
    }

    #[test]
    fn full_family_passes() {
        let game = derive_game(&parse_spec(EXAMPLE_SIX).unwrap()).unwrap();
        let family = u_closure(&game, &ProfileFamily::new(0..game.len()));
        assert!(representation_check(&game, &family).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn unclosed_family_misses_its_twin() {
        let spec = parse_spec(
            "option decision_mode = total-assignments\nagent x {\n atoms a\n priority identity\n desire true => p\n}\nagent y {\n atoms b\n}\nworld p\n",
        )
        .unwrap();
        let game = derive_game(&spec).unwrap();
        let family = ProfileFamily::assume_closed([index_named(&game, "<a, b>")]);
        let checks = representation_check(&game, &family).unwrap();
        assert!(!checks[1].passed);
    }

    #[test]
    fn feasible_representation_on_examples() {
        for text in [
            crate::decision::tests::EXAMPLE_TWO,
            crate::decision::tests::EXAMPLE_THREE,
            EXAMPLE_SIX,
        ] {
            let game = derive_game(&parse_spec(text).unwrap()).unwrap();
            assert!(feasible_representation_check(&game).unwrap().passed);
        }
    }
}
