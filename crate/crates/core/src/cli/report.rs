use std::collections::BTreeMap;

use serde::Serialize;

use crate::checks::CheckResult;
use crate::decision::{DecisionProfile, DesireReport};
use crate::extension::Extension;
use crate::game::GameSpecification;
use crate::goals::GoalSet;
use crate::model::AgentSystemSpec;

#[derive(Debug, Clone, Serialize)]
pub struct ProfileJson {
    pub decisions: BTreeMap<String, Vec<String>>,
    pub extension: Vec<String>,
    pub consistent: bool,
    pub unreached: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoalSetJson {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub generators: Vec<usize>,
}

/// The structured report every command emits in json mode.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub system: String,
    pub command: String,
    pub profiles: Vec<ProfileJson>,
    pub solutions: BTreeMap<String, Vec<usize>>,
    pub goal_sets: Vec<GoalSetJson>,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(spec: &AgentSystemSpec, command: &str) -> Self {
        Report {
            system: spec.name.clone(),
            command: command.to_string(),
            profiles: Vec::new(),
            solutions: BTreeMap::new(),
            goal_sets: Vec::new(),
            checks: Vec::new(),
        }
    }
}

pub fn profile_json(
    spec: &AgentSystemSpec,
    profile: &DecisionProfile,
    extension: &Extension,
    report: Option<&DesireReport>,
) -> ProfileJson {
    let decisions = profile
        .decisions
        .iter()
        .map(|d| (spec.agent(d.agent).name.clone(), spec.literals_to_strings(&d.literals)))
        .collect();
    let unreached = match report {
        Some(r) => spec
            .agents
            .iter()
            .zip(&r.agents)
            .map(|(a, cls)| (a.name.clone(), cls.unreached.iter().map(|id| id.to_string()).collect()))
            .collect(),
        None => BTreeMap::new(),
    };
    ProfileJson {
        decisions,
        extension: extension
            .formulas()
            .iter()
            .map(|f| f.display(&spec.vocabulary).to_string())
            .collect(),
        consistent: extension.consistent,
        unreached,
    }
}

pub fn game_profiles(game: &GameSpecification) -> Vec<ProfileJson> {
    game.profiles
        .iter()
        .map(|e| profile_json(&game.spec, &e.profile, &e.extension, Some(&e.report)))
        .collect()
}

pub fn goal_set_json(spec: &AgentSystemSpec, g: &GoalSet, generators: &[usize]) -> GoalSetJson {
    let show = |s: &crate::logic::FormulaSet| s.iter().map(|f| f.display(&spec.vocabulary).to_string()).collect();
    GoalSetJson {
        positive: show(&g.positive),
        negative: show(&g.negative),
        generators: generators.to_vec(),
    }
}
