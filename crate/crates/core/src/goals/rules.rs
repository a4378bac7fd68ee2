use std::fmt;
use std::str::FromStr;

use super::{u_closure, ProfileFamily};
use crate::error::Error;
use crate::game::{nash, pareto, GameSpecification, SwapPolicy};

/// Functions from agent systems to U-closed sets of feasible profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecisionRule {
    /// Select the Pareto profiles.
    BdRational,
    /// Nash equilibria when there are any, Pareto profiles otherwise.
    NashElsePareto,
}

impl DecisionRule {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionRule::BdRational => "bd-rational",
            DecisionRule::NashElsePareto => "nash-else-pareto",
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecisionRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bd-rational" => Ok(DecisionRule::BdRational),
            "nash-else-pareto" => Ok(DecisionRule::NashElsePareto),
            other => Err(format!(
                "unknown decision rule `{other}` (expected bd-rational or nash-else-pareto)"
            )),
        }
    }
}

pub fn apply_decision_rule(
    game: &GameSpecification,
    rule: DecisionRule,
    policy: SwapPolicy,
) -> Result<ProfileFamily, Error> {
    let chosen = match rule {
        DecisionRule::BdRational => pareto(game).profiles,
        DecisionRule::NashElsePareto => {
            let n = nash(game, policy)?.profiles;
            if n.is_empty() {
                pareto(game).profiles
            } else {
                n
            }
        }
    };
    Ok(u_closure(game, &ProfileFamily::new(chosen)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::derive_game;
    use crate::game::tests::EXAMPLE_SIX;
    use crate::goals::is_u_closed;
    use crate::model::parse_spec;

    fn shown(game: &GameSpecification, f: &ProfileFamily) -> Vec<String> {
        f.profiles
            .iter()
            .map(|&i| game.profile(i).display(&game.spec))
            .collect()
    }

    #[test]
    fn example_six_rules() {
        let game = derive_game(&parse_spec(EXAMPLE_SIX).unwrap()).unwrap();
        let n = apply_decision_rule(&game, DecisionRule::NashElsePareto, SwapPolicy::Skip).unwrap();
        assert_eq!(shown(&game, &n), vec!["<!a, !b>"]);
        let p = apply_decision_rule(&game, DecisionRule::BdRational, SwapPolicy::Skip).unwrap();
        assert_eq!(shown(&game, &p), vec!["<a, b>", "<a, !b>", "<!a, b>"]);
        assert!(is_u_closed(&game, &n) && is_u_closed(&game, &p));
    }

    #[test]
    fn single_profile_game() {
        let spec = parse_spec("agent x {\n atoms a\n initial a\n priority identity\n desire true => a\n}\n").unwrap();
        let game = derive_game(&spec).unwrap();
        assert_eq!(game.len(), 1);
        for rule in [DecisionRule::BdRational, DecisionRule::NashElsePareto] {
            assert_eq!(
                apply_decision_rule(&game, rule, SwapPolicy::Skip)
                    .unwrap()
                    .profiles
                    .len(),
                1
            );
        }
    }
}
