//! The line-oriented `.bdg` specification format.
//!
//! ```text
//! system "name"
//! option decision_mode = positive-subsets
//! agent alpha1 {
//!   atoms a b c
//!   priority ranked
//!   fact !p
//!   belief c => q
//!   desire r1 [rank=2]: b => p
//!   initial a
//! }
//! world p q
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use super::{AgentSpec, AgentSystemSpec, Literal, LiteralSet, PriorityMode, PriorityOrder, SpecError, SpecOptions};
use crate::decision::DecisionMode;
use crate::extension::{Rule, RuleId, RuleKind};
use crate::logic::{is_identifier, is_reserved, parse_formula, AgentId, AtomClass, Formula, LogicError, Vocabulary};

/// A line with its 1-based number, comments stripped.
#[derive(Debug, Clone, Copy)]
struct Line<'s> {
    number: usize,
    text: &'s str,
}

impl<'s> Line<'s> {
    /// Column (1-based) of `sub`, which must be a slice of this line.
    fn column_of(&self, sub: &str) -> usize {
        let offset = sub.as_ptr() as usize - self.text.as_ptr() as usize;
        self.text[..offset].chars().count() + 1
    }

    fn syntax(&self, at: &str, message: impl Into<String>) -> SpecError {
        SpecError::Syntax {
            line: self.number,
            column: self.column_of(at),
            message: message.into(),
        }
    }
}

fn strip_comment(text: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &text[..i],
            _ => {}
        }
    }
    text
}

/// Splits off the first whitespace-delimited word.
fn split_word(text: &str) -> (&str, &str) {
    let text = text.trim_start();
    match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], &text[i..]),
        None => (text, &text[text.len()..]),
    }
}

struct RawAgent<'s> {
    name: String,
    header: Line<'s>,
    body: Vec<Line<'s>>,
}

struct Skeleton<'s> {
    name: String,
    options: SpecOptions,
    agents: Vec<RawAgent<'s>>,
    world: Vec<(Line<'s>, &'s str)>,
}

fn parse_option(line: Line<'_>, rest: &str, options: &mut SpecOptions) -> Result<(), SpecError> {
    let Some((key, value)) = rest.split_once('=') else {
        return Err(line.syntax(rest.trim_start(), "expected `option KEY = VALUE`"));
    };
    let key_t = key.trim();
    let value_t = value.trim();
    match key_t {
        "decision_mode" => {
            options.decision_mode = value_t
                .parse::<DecisionMode>()
                .map_err(|msg| line.syntax(value_t, msg))?;
        }
        "max_atoms" | "max_enumeration" => {
            let n: usize = value_t
                .parse()
                .ok()
                .filter(|&n: &usize| n > 0)
                .ok_or_else(|| line.syntax(value_t, format!("`{key_t}` must be a positive integer")))?;
            if key_t == "max_atoms" {
                options.max_atoms = n;
            } else {
                options.max_enumeration = n;
            }
        }
        _ => return Err(line.syntax(key_t, format!("unknown option `{key_t}`"))),
    }
    Ok(())
}

fn skeleton(text: &str) -> Result<Skeleton<'_>, SpecError> {
    let mut sk = Skeleton {
        name: String::new(),
        options: SpecOptions::default(),
        agents: Vec::new(),
        world: Vec::new(),
    };
    let mut open: Option<RawAgent<'_>> = None;
    let mut seen_system = false;
    for (i, raw) in text.lines().enumerate() {
        let line = Line {
            number: i + 1,
            text: strip_comment(raw),
        };
        let trimmed = line.text.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(agent) = open.as_mut() {
            if trimmed == "}" {
                sk.agents.push(open.take().unwrap());
            } else {
                agent.body.push(Line {
                    number: line.number,
                    text: line.text,
                });
            }
            continue;
        }
        let (keyword, rest) = split_word(line.text);
        match keyword {
            "system" => {
                if seen_system {
                    return Err(line.syntax(keyword, "`system` declared twice"));
                }
                seen_system = true;
                let r = rest.trim();
                if r.len() < 2 || !r.starts_with('"') || !r.ends_with('"') {
                    return Err(line.syntax(keyword, "expected `system \"NAME\"`"));
                }
                sk.name = r[1..r.len() - 1].to_string();
            }
            "option" => parse_option(line, rest, &mut sk.options)?,
            "agent" => {
                let r = rest.trim();
                let Some(name) = r.strip_suffix('{').map(str::trim) else {
                    return Err(line.syntax(keyword, "expected `agent NAME {`"));
                };
                if !is_identifier(name) {
                    return Err(line.syntax(keyword, format!("invalid agent name `{name}`")));
                }
                if sk.agents.iter().any(|a| a.name == name) {
                    return Err(SpecError::Duplicate {
                        line: line.number,
                        what: "agent",
                        name: name.to_string(),
                    });
                }
                open = Some(RawAgent {
                    name: name.to_string(),
                    header: line,
                    body: Vec::new(),
                });
            }
            "world" => {
                for word in rest.split_whitespace() {
                    sk.world.push((line, word));
                }
            }
            _ => {
                return Err(line.syntax(keyword, format!("unexpected `{keyword}`")));
            }
        }
    }
    if let Some(agent) = open {
        return Err(agent.header.syntax(
            agent.header.text.trim_start(),
            format!("agent `{}` is not closed with `}}`", agent.name),
        ));
    }
    if sk.agents.is_empty() {
        return Err(SpecError::NoAgents);
    }
    if sk.name.is_empty() && !seen_system {
        sk.name = "unnamed".to_string();
    }
    Ok(sk)
}

fn parse_formula_at(line: Line<'_>, text: &str, vocabulary: &Vocabulary) -> Result<Formula, SpecError> {
    let trimmed = text.trim();
    let base = line.column_of(trimmed);
    parse_formula(trimmed, vocabulary).map_err(|e| match e {
        LogicError::Syntax { offset, message } => SpecError::Syntax {
            line: line.number,
            column: base + trimmed[..offset.min(trimmed.len())].chars().count(),
            message,
        },
        LogicError::UndeclaredAtom { name, offset } => SpecError::UndeclaredAtom {
            line: line.number,
            column: base + trimmed[..offset].chars().count(),
            name,
        },
        other => line.syntax(trimmed, other.to_string()),
    })
}

fn parse_rule_body(line: Line<'_>, text: &str, vocabulary: &Vocabulary) -> Result<(Formula, Formula), SpecError> {
    let parts: Vec<&str> = text.split("=>").collect();
    if parts.len() != 2 {
        return Err(line.syntax(text.trim_start(), "a rule needs exactly one `=>`"));
    }
    let antecedent = parse_formula_at(line, parts[0], vocabulary)?;
    let consequent = parse_formula_at(line, parts[1], vocabulary)?;
    Ok((antecedent, consequent))
}

/// Head of a rule line: optional label and optional `[rank=N]`.
struct RuleHead {
    label: Option<String>,
    rank: Option<u32>,
}

fn parse_rule_head<'s>(line: Line<'s>, text: &'s str) -> Result<(RuleHead, &'s str), SpecError> {
    let (head, body) = match text.split_once(':') {
        Some(split) => split,
        None => {
            // Without a `:` only a rank annotation may prefix the rule.
            let t = text.trim_start();
            if t.starts_with('[') {
                let end = t.find(']').ok_or_else(|| line.syntax(t, "unclosed `[`"))?;
                (&t[..=end], &t[end + 1..])
            } else {
                ("", text)
            }
        }
    };
    let mut label = None;
    let mut rank = None;
    let mut rest = head.trim();
    while !rest.is_empty() {
        if rest.starts_with('[') {
            let end = rest.find(']').ok_or_else(|| line.syntax(rest, "unclosed `[`"))?;
            let value = rest[1..end]
                .trim()
                .strip_prefix("rank")
                .map(str::trim_start)
                .and_then(|v| v.strip_prefix('='))
                .map(str::trim)
                .ok_or_else(|| line.syntax(rest, "expected `[rank=N]`"))?;
            let n: u32 = value
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| line.syntax(rest, "rank must be a positive integer"))?;
            if rank.replace(n).is_some() {
                return Err(line.syntax(rest, "rank given twice"));
            }
            rest = rest[end + 1..].trim_start();
        } else {
            let len = rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..len];
            if label.is_some() || !is_identifier(word) || is_reserved(word) {
                let shown = if word.is_empty() { &rest[..1] } else { word };
                return Err(line.syntax(rest, format!("invalid rule label `{shown}`")));
            }
            label = Some(word.to_string());
            rest = rest[len..].trim_start();
        }
    }
    Ok((RuleHead { label, rank }, body))
}

fn parse_literals(
    line: Line<'_>,
    text: &str,
    vocabulary: &Vocabulary,
    agent: AgentId,
    agent_name: &str,
) -> Result<Vec<Literal>, SpecError> {
    let mut out = Vec::new();
    for word in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if word.is_empty() {
            continue;
        }
        let (negated, name) = match word.strip_prefix('!') {
            Some(n) => (true, n),
            None => (false, word),
        };
        let Some(id) = vocabulary.lookup(name) else {
            return Err(SpecError::UndeclaredAtom {
                line: line.number,
                column: line.column_of(word),
                name: name.to_string(),
            });
        };
        if vocabulary.class(id) != AtomClass::Decision(agent) {
            return Err(line.syntax(
                word,
                format!("initial decisions are literals over `{agent_name}`'s decision atoms; `{name}` is not one"),
            ));
        }
        out.push(Literal { atom: id, negated });
    }
    Ok(out)
}

struct PendingDesire {
    rule: Rule,
    rank: Option<u32>,
    line: usize,
    column: usize,
}

/// Parses a `.bdg` specification. All formulas are resolved against the
/// declared vocabulary; validation of rule typing is left to
/// [`super::validate_spec`].
pub fn parse_spec(text: &str) -> Result<AgentSystemSpec, SpecError> {
    let sk = skeleton(text)?;

    // Declarations first: atoms may be used before the `world` line.
    let mut decls: Vec<(String, AtomClass)> = Vec::new();
    let mut decl_lines: HashSet<String> = HashSet::new();
    let mut declare = |line: Line<'_>, word: &str, class: AtomClass, decls: &mut Vec<(String, AtomClass)>| {
        if !is_identifier(word) || is_reserved(word) {
            return Err(line.syntax(word, format!("invalid atom name `{word}`")));
        }
        if !decl_lines.insert(word.to_string()) {
            return Err(SpecError::Duplicate {
                line: line.number,
                what: "atom",
                name: word.to_string(),
            });
        }
        decls.push((word.to_string(), class));
        Ok(())
    };
    for (i, agent) in sk.agents.iter().enumerate() {
        for line in &agent.body {
            let (keyword, rest) = split_word(line.text);
            if keyword == "atoms" {
                for word in rest.split_whitespace() {
                    declare(*line, word, AtomClass::Decision(AgentId(i)), &mut decls)?;
                }
            }
        }
    }
    for (line, word) in &sk.world {
        declare(*line, word, AtomClass::World, &mut decls)?;
    }
    let vocabulary = Vocabulary::new(decls).map_err(|e| SpecError::Syntax {
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;

    let mut rule_ids: HashSet<String> = HashSet::new();
    let mut claim_id = |id: &str, line: usize| {
        if rule_ids.insert(id.to_string()) {
            Ok(())
        } else {
            Err(SpecError::Duplicate {
                line,
                what: "rule id",
                name: id.to_string(),
            })
        }
    };

    // Explicit labels are claimed before generated ids so a generated id
    // never shadows a label declared later in the file.
    for agent in &sk.agents {
        for line in &agent.body {
            let (keyword, rest) = split_word(line.text);
            if keyword == "belief" || keyword == "desire" {
                let (head, _) = parse_rule_head(*line, rest)?;
                if let Some(label) = head.label {
                    claim_id(&label, line.number)?;
                }
            }
        }
    }

    let mut agents = Vec::with_capacity(sk.agents.len());
    for (i, raw) in sk.agents.iter().enumerate() {
        let id = AgentId(i);
        let mut facts = BTreeSet::new();
        let mut beliefs = Vec::new();
        let mut desires: Vec<PendingDesire> = Vec::new();
        let mut priority: Option<PriorityMode> = None;
        let mut initial = LiteralSet::new();
        for line in &raw.body {
            let line = *line;
            let (keyword, rest) = split_word(line.text);
            match keyword {
                "atoms" => {}
                "priority" => {
                    let mode = match rest.trim() {
                        "ranked" => PriorityMode::Ranked,
                        "identity" => PriorityMode::Identity,
                        other => {
                            return Err(line.syntax(
                                rest.trim_start(),
                                format!("expected `ranked` or `identity`, found `{other}`"),
                            ))
                        }
                    };
                    if priority.replace(mode).is_some() {
                        return Err(line.syntax(keyword, "`priority` given twice"));
                    }
                }
                "fact" => {
                    facts.insert(parse_formula_at(line, rest, &vocabulary)?);
                }
                "belief" | "desire" => {
                    let (head, body) = parse_rule_head(line, rest)?;
                    let (antecedent, consequent) = parse_rule_body(line, body, &vocabulary)?;
                    let kind = if keyword == "belief" {
                        RuleKind::Belief
                    } else {
                        RuleKind::Desire
                    };
                    let rule_id = match head.label {
                        Some(label) => label,
                        None => {
                            let n = if kind == RuleKind::Belief {
                                beliefs.len()
                            } else {
                                desires.len()
                            } + 1;
                            let tag = if kind == RuleKind::Belief { 'b' } else { 'd' };
                            let generated = format!("{}_{tag}{n}", raw.name);
                            claim_id(&generated, line.number)?;
                            generated
                        }
                    };
                    let rule = Rule {
                        id: RuleId(rule_id),
                        antecedent,
                        consequent,
                        kind,
                        owner: id,
                    };
                    if kind == RuleKind::Belief {
                        if head.rank.is_some() {
                            return Err(line.syntax(keyword, "belief rules take no rank"));
                        }
                        beliefs.push(rule);
                    } else {
                        desires.push(PendingDesire {
                            rule,
                            rank: head.rank,
                            line: line.number,
                            column: line.column_of(keyword),
                        });
                    }
                }
                "initial" => {
                    initial.extend(parse_literals(line, rest, &vocabulary, id, &raw.name)?);
                }
                _ => return Err(line.syntax(keyword, format!("unexpected `{keyword}` in agent block"))),
            }
        }

        let mode = match priority {
            Some(mode) => mode,
            None if desires.is_empty() => PriorityMode::Identity,
            None => {
                return Err(raw.header.syntax(
                    raw.header.text.trim_start(),
                    format!("agent `{}` declares desires but no `priority` line", raw.name),
                ))
            }
        };
        let priority = match mode {
            PriorityMode::Identity => {
                if let Some(d) = desires.iter().find(|d| d.rank.is_some()) {
                    return Err(SpecError::Syntax {
                        line: d.line,
                        column: d.column,
                        message: "ranks are only allowed with `priority ranked`".into(),
                    });
                }
                PriorityOrder::identity(desires.iter().map(|d| d.rule.id.clone()))
            }
            PriorityMode::Ranked => PriorityOrder::ranked_partial(desires.iter().map(|d| (d.rule.id.clone(), d.rank))),
        };

        agents.push(AgentSpec {
            name: raw.name.clone(),
            decision_atoms: vocabulary.decision_atoms(id),
            facts,
            beliefs,
            desires: desires.into_iter().map(|d| d.rule).collect(),
            priority,
            initial_decision: initial,
        });
    }

    Ok(AgentSystemSpec {
        name: sk.name,
        vocabulary,
        agents,
        options: sk.options,
    })
}

/// Canonical printer; `parse_spec(&print_spec(s)) == s` for every parsed spec.
pub fn print_spec(spec: &AgentSystemSpec) -> String {
    let v = &spec.vocabulary;
    let mut out = String::new();
    let _ = writeln!(out, "system \"{}\"", spec.name);
    let _ = writeln!(out, "option decision_mode = {}", spec.options.decision_mode.as_str());
    let _ = writeln!(out, "option max_atoms = {}", spec.options.max_atoms);
    let _ = writeln!(out, "option max_enumeration = {}", spec.options.max_enumeration);
    for agent in &spec.agents {
        out.push('\n');
        let _ = writeln!(out, "agent {} {{", agent.name);
        if !agent.decision_atoms.is_empty() {
            let names: Vec<&str> = agent.decision_atoms.iter().map(|&a| v.name(a)).collect();
            let _ = writeln!(out, "  atoms {}", names.join(" "));
        }
        let _ = writeln!(out, "  priority {}", agent.priority.mode().as_str());
        for fact in &agent.facts {
            let _ = writeln!(out, "  fact {}", fact.to_source(v));
        }
        for rule in &agent.beliefs {
            let _ = writeln!(
                out,
                "  belief {}: {} => {}",
                rule.id,
                rule.antecedent.to_source(v),
                rule.consequent.to_source(v)
            );
        }
        for rule in &agent.desires {
            let rank = match agent.priority.rank(&rule.id) {
                Some(r) => format!(" [rank={r}]"),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "  desire {}{}: {} => {}",
                rule.id,
                rank,
                rule.antecedent.to_source(v),
                rule.consequent.to_source(v)
            );
        }
        if !agent.initial_decision.is_empty() {
            let lits: Vec<String> = agent.initial_decision.iter().map(|l| l.to_source(v)).collect();
            let _ = writeln!(out, "  initial {}", lits.join(" "));
        }
        out.push_str("}\n");
    }
    let world: Vec<&str> = spec.world_atoms().iter().map(|&a| v.name(a)).collect();
    if !world.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "world {}", world.join(" "));
    }
    out
}
