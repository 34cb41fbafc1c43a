use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use super::engine::{ChaseState, Step};
use super::expr::Claim;
use super::registry::Registry;
use super::ses::Ses;
use crate::tables::SpaceKind;

/// The derivation cone of a replay's conclusions, renumbered from zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofTrace {
    pub script: String,
    pub declarations: Vec<String>,
    pub sequences: Vec<Ses>,
    pub steps: Vec<Step>,
    /// Each conclusion with the steps supporting it.
    pub goals: Vec<(Claim, Vec<usize>)>,
}

fn declarations(reg: &Registry) -> Vec<String> {
    let mut out = Vec::new();
    let mut done: BTreeSet<String> = BTreeSet::new();
    while done.len() < reg.spaces().count() {
        let before = done.len();
        for s in reg.spaces() {
            if done.contains(&s.id) {
                continue;
            }
            let line = match &s.kind {
                SpaceKind::Grassmannian(g) => format!("grassmannian {} {} {}", s.id, g.k, g.n),
                SpaceKind::Abstract => format!("space {} dim {} index {}", s.id, s.dim, s.index),
                SpaceKind::Section { parent, degree } if done.contains(parent) => {
                    format!("section {} of {parent} degree {degree}", s.id)
                }
                SpaceKind::CyclicCover { parent, k, d } if done.contains(parent) => {
                    format!("cover {} of {parent} k {k} d {d}", s.id)
                }
                _ => continue,
            };
            out.push(line);
            done.insert(s.id.clone());
        }
        if done.len() == before {
            break;
        }
    }
    for s in reg.spaces() {
        let automatic = matches!(&s.kind, SpaceKind::Grassmannian(g) if g.k == 0);
        if reg.is_special(&s.id) && !automatic {
            out.push(format!("special {}", s.id));
        }
    }
    out
}

impl ProofTrace {
    pub fn from_state(script: &str, state: &ChaseState, targets: &[Claim]) -> Self {
        let mut roots = Vec::new();
        let mut goals = Vec::new();
        for t in targets {
            let support = state.support(t).unwrap_or_default();
            roots.extend(support.iter().copied());
            goals.push((t.clone(), support));
        }
        let cone = state.cone(&roots);
        let renumber: BTreeMap<usize, usize> = cone.iter().enumerate().map(|(new, old)| (*old, new)).collect();
        let used_contexts: BTreeSet<String> = cone.iter().filter_map(|id| state.steps()[*id].context.clone()).collect();
        let sequences: Vec<Ses> = state.sequences().filter(|s| used_contexts.contains(&s.to_string())).cloned().collect();
        let steps = cone
            .iter()
            .map(|old| {
                let s = &state.steps()[*old];
                Step {
                    id: renumber[old],
                    claim: s.claim.clone(),
                    rule: s.rule.clone(),
                    context: s.context.clone(),
                    premises: s.premises.iter().map(|p| renumber[p]).collect(),
                }
            })
            .collect();
        let goals = goals
            .into_iter()
            .map(|(c, ids)| (c, ids.iter().map(|i| renumber[i]).collect()))
            .collect();
        ProofTrace { script: script.to_string(), declarations: declarations(&state.registry), sequences, steps, goals }
    }

    /// Input facts the trace rests on.
    pub fn fact_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.rule == "fact")
    }

    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.steps.len()];
        for s in &self.steps {
            depth[s.id] = s.premises.iter().map(|p| depth[*p] + 1).max().unwrap_or(0);
        }
        depth
    }

    /// The indented step log read by the checker.
    pub fn render(&self) -> String {
        let mut out = format!("trace {}\n", self.script);
        for d in &self.declarations {
            let _ = writeln!(out, "{d}");
        }
        let index: BTreeMap<String, usize> = self.sequences.iter().enumerate().map(|(i, s)| (s.to_string(), i)).collect();
        for (i, s) in self.sequences.iter().enumerate() {
            let _ = writeln!(out, "ses s{i} {s}");
        }
        let depth = self.depths();
        for s in &self.steps {
            let _ = write!(out, "{:width$}step {} {} {}", "", s.id, s.rule, s.claim, width = 2 * depth[s.id]);
            match (&s.context, s.rule.as_str()) {
                (Some(c), "fact") => {
                    let _ = write!(out, " from {c}");
                }
                (Some(c), _) => {
                    if let Some(i) = index.get(c) {
                        let _ = write!(out, " ses s{i}");
                    }
                }
                _ => {}
            }
            out.push_str(" using");
            for p in &s.premises {
                let _ = write!(out, " {p}");
            }
            out.push('\n');
        }
        for (claim, ids) in &self.goals {
            let ids: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
            let _ = writeln!(out, "goal {claim} by {}", ids.join(" "));
        }
        out
    }

    /// Counts of steps per rule.
    pub fn rule_histogram(&self) -> BTreeMap<&str, usize> {
        let mut h = BTreeMap::new();
        for s in &self.steps {
            *h.entry(s.rule.as_str()).or_insert(0) += 1;
        }
        h
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
