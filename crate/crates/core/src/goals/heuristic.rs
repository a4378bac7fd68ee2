use super::goal_set_of;
use crate::error::Error;
use crate::extension::extension;
use crate::game::GameSpecification;
use crate::logic::{Formula, FormulaSet, Sublanguage};
use crate::model::AgentSystemSpec;

/// `E_{B∪D}(F ∪ δ⁰)`: desires treated as inference rules, run from the
/// facts and initial decisions. A candidate pool for positive goals.
pub fn heuristic_goals(spec: &AgentSystemSpec) -> Result<FormulaSet, Error> {
    let mut base = spec.facts();
    for agent in &spec.agents {
        base.extend(agent.initial_decision.iter().map(|l| l.to_formula()));
    }
    let rules = spec.all_beliefs().chain(spec.all_desires());
    Ok(extension(rules, &base, &spec.reasoner())?.formulas())
}

/// True when no belief rule mentions a decision atom in its antecedent.
pub fn fragment_check(spec: &AgentSystemSpec) -> bool {
    spec.all_beliefs()
        .all(|r| r.antecedent.in_sublanguage(&spec.vocabulary, Sublanguage::World))
}

/// A positive goal of some feasible profile that the heuristic pool does
/// not entail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicMiss {
    pub profile: usize,
    pub goal: Formula,
}

/// Positive goals of the feasible profiles' goal sets that the heuristic
/// pool misses. Documents behaviour only; callers log rather than assert.
pub fn heuristic_containment(game: &GameSpecification) -> Result<Vec<HeuristicMiss>, Error> {
    let pool = heuristic_goals(&game.spec)?;
    let r = game.spec.reasoner();
    let mut misses = Vec::new();
    for i in 0..game.len() {
        for g in goal_set_of(game, i).positive {
            if !r.entails(&pool, &g)? {
                misses.push(HeuristicMiss { profile: i, goal: g });
            }
        }
    }
    Ok(misses)
}
