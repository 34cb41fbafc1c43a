use std::fmt;

use super::engine::{ChaseState, CuppingContext};
use super::expr::{Claim, SheafExpr};
use super::registry::Registry;
use super::ses::{Ses, SesRule};
use super::sources::{FactRef, FactSources};
use super::trace::ProofTrace;
use super::ChaseError;
use crate::tables::SpaceDescriptor;

/// Scripts shipped with the crate, by name.
pub const BUILTIN_SCRIPTS: &[(&str, &str)] = &[
    ("prop_2_9", include_str!("../../../../scripts/prop_2_9.chase")),
    ("prop_2_11", include_str!("../../../../scripts/prop_2_11.chase")),
    ("lemma_2_12", include_str!("../../../../scripts/lemma_2_12.chase")),
    ("lemma_2_13", include_str!("../../../../scripts/lemma_2_13.chase")),
];

/// Fact files shipped with the crate, by stem.
pub const BUILTIN_FACTS: &[(&str, &str)] = &[("spinor10", include_str!("../../../../facts/spinor10.facts"))];

pub fn builtin_script(name: &str) -> Option<&'static str> {
    BUILTIN_SCRIPTS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin_facts(name: &str) -> Option<&'static str> {
    BUILTIN_FACTS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Grassmannian { id: String, k: usize, n: usize },
    Space { id: String, dim: usize, index: i64 },
    Section { id: String, parent: String, degree: u32 },
    Cover { id: String, base: String, k: u32, d: u32 },
    Special(String),
    Facts(String),
    UseSes(SesRule, SheafExpr, SheafExpr, SheafExpr),
    UseCupping(CuppingContext),
    UseRestriction { section: String, ambient: String, p: i64, q: i64 },
    UseSurjectivity { section: String, ambient: String, q: i64, c: i64 },
    UseFact(Claim),
    Goal(Claim),
    Conclude(Claim),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Script {
    pub name: String,
    pub commands: Vec<(usize, Command)>,
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T, ChaseError> {
    s.parse().map_err(|_| ChaseError::Syntax(format!("expected a number, found `{s}`")))
}

impl Script {
    pub fn parse(name: &str, text: &str) -> Result<Self, ChaseError> {
        let mut commands = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let cmd = Self::parse_line(content).map_err(|e| ChaseError::Script { line, source: Box::new(e) })?;
            commands.push((line, cmd));
        }
        Ok(Script { name: name.to_string(), commands })
    }

    fn parse_line(content: &str) -> Result<Command, ChaseError> {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let rest_after = |n: usize| content.splitn(n + 1, char::is_whitespace).nth(n).unwrap_or("").trim();
        Ok(match tokens.as_slice() {
            ["grassmannian", id, k, n] => Command::Grassmannian { id: id.to_string(), k: num(k)?, n: num(n)? },
            ["space", id, "dim", n, "index", r] => Command::Space { id: id.to_string(), dim: num(n)?, index: num(r)? },
            ["section", id, "of", parent, "degree", d] => {
                Command::Section { id: id.to_string(), parent: parent.to_string(), degree: num(d)? }
            }
            ["cover", id, "of", base, "k", k, "d", d] => {
                Command::Cover { id: id.to_string(), base: base.to_string(), k: num(k)?, d: num(d)? }
            }
            ["special", id] => Command::Special(id.to_string()),
            ["facts", stem] => Command::Facts(stem.to_string()),
            ["use", "ses", rule, l, m, r] => {
                Command::UseSes(SesRule::parse(rule)?, SheafExpr::parse(l)?, SheafExpr::parse(m)?, SheafExpr::parse(r)?)
            }
            ["use", "cupping", x, "in", y, "p", p, "q", q] => Command::UseCupping(CuppingContext::Section {
                ambient: y.to_string(),
                section: x.to_string(),
                p: num(p)?,
                q: num(q)?,
            }),
            ["use", "restriction", x, "in", y, "p", p, "q", q] => {
                Command::UseRestriction { section: x.to_string(), ambient: y.to_string(), p: num(p)?, q: num(q)? }
            }
            ["use", "restriction", x, "in", y, "q", q, "c", c, "surjective"] => {
                Command::UseSurjectivity { section: x.to_string(), ambient: y.to_string(), q: num(q)?, c: num(c)? }
            }
            ["use", "fact", ..] => Command::UseFact(Claim::parse(rest_after(2))?),
            ["goal", ..] => Command::Goal(Claim::parse(rest_after(1))?),
            ["conclude", ..] => Command::Conclude(Claim::parse(rest_after(1))?),
            _ => return Err(ChaseError::Syntax(format!("unrecognized command `{content}`"))),
        })
    }

    /// Fact files the script asks for.
    pub fn fact_files(&self) -> Vec<&str> {
        self.commands
            .iter()
            .filter_map(|(_, c)| match c {
                Command::Facts(s) => Some(s.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn goals(&self) -> Vec<&Claim> {
        self.commands
            .iter()
            .filter_map(|(_, c)| match c {
                Command::Goal(g) => Some(g),
                _ => None,
            })
            .collect()
    }
}

/// Why a replay could not reach its conclusions.
#[derive(Clone, Debug, PartialEq)]
pub struct StuckReport {
    pub script: String,
    /// Cited facts no source could supply.
    pub missing: Vec<FactRef>,
    /// Conclusions and goals not derived.
    pub unreached: Vec<Claim>,
    /// Hypotheses of deferred rules that never arrived.
    pub pending: Vec<Claim>,
}

impl fmt::Display for StuckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "stuck {}", self.script)?;
        for m in &self.missing {
            writeln!(f, "missing fact {m}")?;
        }
        for p in &self.pending {
            writeln!(f, "missing premise {p}")?;
        }
        for u in &self.unreached {
            writeln!(f, "unreached {u}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum ReplayOutcome {
    Proved(ProofTrace),
    Stuck(StuckReport),
}

impl ReplayOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ReplayOutcome::Proved(_))
    }
}

fn declare(reg: &mut Registry, cmd: &Command) -> Result<(), ChaseError> {
    match cmd {
        Command::Grassmannian { id, k, n } => reg.grassmannian(id, *k, *n),
        Command::Space { id, dim, index } => reg.declare(SpaceDescriptor::abstract_space(id.clone(), *dim, *index)),
        Command::Section { id, parent, degree } => reg.section(id, parent, *degree),
        Command::Cover { id, base, k, d } => reg.cover(id, base, *k, *d),
        Command::Special(id) => reg.mark_special(id),
        _ => Ok(()),
    }
}

/// Run a script against the given sources.
pub fn replay(script: &Script, sources: &FactSources) -> Result<ReplayOutcome, ChaseError> {
    let mut registry = Registry::new();
    for (line, cmd) in &script.commands {
        declare(&mut registry, cmd).map_err(|e| ChaseError::Script { line: *line, source: Box::new(e) })?;
    }
    let mut state = ChaseState::new(registry, sources.clone());
    let mut targets: Vec<Claim> = Vec::new();
    let mut unreached: Vec<Claim> = Vec::new();
    for (line, cmd) in &script.commands {
        let at = |e: ChaseError| ChaseError::Script { line: *line, source: Box::new(e) };
        match cmd {
            Command::UseSes(rule, l, m, r) => {
                let ses = Ses::new(*rule, l.clone(), m.clone(), r.clone(), &state.registry).map_err(at)?;
                state.add_sequence(ses).map_err(at)?;
            }
            Command::UseCupping(ctx) => {
                state.add_cupping(ctx).map_err(at)?;
            }
            Command::UseRestriction { section, ambient, p, q } => {
                state.add_restriction_edge(ambient, section, *p, *q).map_err(at)?;
            }
            Command::UseSurjectivity { section, ambient, q, c } => {
                state.restriction_surjectivity(ambient, section, *q, *c).map_err(at)?;
            }
            Command::UseFact(claim) => {
                state.cite(claim).map_err(at)?;
            }
            Command::Goal(claim) => {
                state.add_goal_group(claim);
                if !targets.contains(claim) {
                    targets.push(claim.clone());
                }
            }
            Command::Conclude(claim) => {
                state.add_goal_group(claim);
                state.saturate().map_err(at)?;
                if state.support(claim).is_none() {
                    unreached.push(claim.clone());
                }
                if !targets.contains(claim) {
                    targets.push(claim.clone());
                }
            }
            _ => {}
        }
    }
    state.saturate()?;
    for g in script.goals() {
        if state.support(g).is_none() && !unreached.contains(g) {
            unreached.push(g.clone());
        }
    }
    if unreached.is_empty() {
        return Ok(ReplayOutcome::Proved(ProofTrace::from_state(&script.name, &state, &targets)));
    }
    Ok(ReplayOutcome::Stuck(StuckReport {
        script: script.name.clone(),
        missing: state.missing_facts().cloned().collect(),
        unreached,
        pending: state.pending_hypotheses(),
    }))
}

/// Load the fact files a script names, taking each from `dir` when present
/// there and from the shipped copies otherwise.
pub fn sources_for(script: &Script, dir: Option<&std::path::Path>) -> Result<FactSources, ChaseError> {
    let mut store = crate::tables::FactStore::new();
    for stem in script.fact_files() {
        let file = format!("{stem}.facts");
        let from_dir = dir.map(|d| d.join(&file)).filter(|p| p.exists());
        let text = match &from_dir {
            Some(path) => std::fs::read_to_string(path).map_err(|e| ChaseError::Syntax(format!("{}: {e}", path.display())))?,
            None => builtin_facts(stem).ok_or_else(|| ChaseError::Syntax(format!("no fact file {file}")))?.to_string(),
        };
        store.ingest(&text, &file).map_err(|e| ChaseError::Syntax(format!("{file}: {e}")))?;
    }
    Ok(FactSources::new(store))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_builtin() {
        for (name, text) in BUILTIN_SCRIPTS {
            let s = Script::parse(name, text).unwrap();
            assert!(!s.goals().is_empty(), "{name} has no goal");
        }
    }

    #[test]
    fn rejects_unknown_command() {
        let err = Script::parse("x", "grassmannian G 1 4\nfrobnicate\n").unwrap_err();
        assert!(matches!(err, ChaseError::Script { line: 2, .. }));
    }

    #[test]
    fn small_chase_proves_and_sticks() {
        let text = "grassmannian G 1 5\nsection Y of G degree 1\n\
                    use ses restriction Omega(G,3,0) Omega(G,3,1) OmegaR(G|Y,3,1)\n\
                    use fact H2(Omega(G,3,1)) = 0\nuse fact H3(Omega(G,3,1)) = 0\n\
                    use fact H3(Omega(G,3,0)) = 2\ngoal H2(OmegaR(G|Y,3,1)) = 2\n";
        let s = Script::parse("t", text).unwrap();
        assert!(replay(&s, &FactSources::default()).unwrap().is_proved());
        let mut masked = FactSources::default();
        masked.mask(FactRef::Cell { space: "G".into(), p: 3, q: 3, t: 1 });
        match replay(&s, &masked).unwrap() {
            ReplayOutcome::Stuck(r) => assert_eq!(r.missing.len(), 1),
            ReplayOutcome::Proved(_) => panic!("masked fact should block the chase"),
        }
    }
}
