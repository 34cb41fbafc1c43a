use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Stable,
    Semistable,
    Unknown,
    NotApplicable,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Stable => "Stable",
            Outcome::Semistable => "Semistable",
            Outcome::Unknown => "Unknown",
            Outcome::NotApplicable => "NotApplicable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a reason step rests on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backing {
    /// A proved rule applied to earlier steps.
    Rule,
    /// A chase trace that replayed and passed the trace checker.
    Trace(String),
    /// A published theorem taken as known.
    Axiom,
    /// A hypothesis supplied by the caller.
    Assumption,
    /// An obligation nobody discharged.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReasonStep {
    pub claim: String,
    pub rule: String,
    pub backing: Backing,
    /// Earlier steps, zero-based.
    pub using: Vec<usize>,
}

/// A chain of reason steps whose last entry is the supported claim.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Support {
    pub reasons: Vec<ReasonStep>,
    pub dependencies: Vec<String>,
}

impl Support {
    pub fn single(claim: impl Into<String>, rule: impl Into<String>, backing: Backing) -> Self {
        let dependencies = match &backing {
            Backing::Trace(t) => vec![format!("trace:{t}")],
            _ => Vec::new(),
        };
        Support { reasons: vec![ReasonStep { claim: claim.into(), rule: rule.into(), backing, using: Vec::new() }], dependencies }
    }

    pub fn claim(&self) -> Option<&str> {
        self.reasons.last().map(|s| s.claim.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub outcome: Outcome,
    pub reasons: Vec<ReasonStep>,
    pub dependencies: Vec<String>,
}

impl StabilityVerdict {
    pub fn not_applicable(why: impl Into<String>) -> Self {
        let mut r = Reasons::new();
        r.push(why, "precondition", Backing::Rule, &[]);
        r.finish(Outcome::NotApplicable)
    }

    pub fn unknown(why: impl Into<String>) -> Self {
        let mut r = Reasons::new();
        r.push(why, "unresolved", Backing::Open, &[]);
        r.finish(Outcome::Unknown)
    }

    pub fn is_stable(&self) -> bool {
        self.outcome == Outcome::Stable
    }

    /// No step is an undischarged obligation.
    pub fn is_backed(&self) -> bool {
        self.reasons.iter().all(|s| s.backing != Backing::Open)
    }

    pub fn conclusion(&self) -> Option<&str> {
        self.reasons.last().map(|s| s.claim.as_str())
    }

    /// Names of the chase traces the reasons rest on.
    pub fn traces(&self) -> BTreeSet<&str> {
        self.reasons
            .iter()
            .filter_map(|s| match &s.backing {
                Backing::Trace(t) => Some(t.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn as_support(&self) -> Support {
        Support { reasons: self.reasons.clone(), dependencies: self.dependencies.clone() }
    }

    /// The `STEP n: claim BY rule USING deps` log.
    pub fn log(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.reasons.iter().enumerate() {
            let using = if s.using.is_empty() {
                "-".to_string()
            } else {
                s.using.iter().map(|u| (u + 1).to_string()).collect::<Vec<_>>().join(", ")
            };
            out.push_str(&format!("STEP {}: {} BY {} USING {}\n", i + 1, s.claim, s.rule, using));
        }
        out
    }
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VERDICT {}", self.outcome)?;
        f.write_str(&self.log())?;
        for d in &self.dependencies {
            writeln!(f, "DEPENDS {d}")?;
        }
        Ok(())
    }
}

/// Accumulates reason steps while a verdict is being built.
#[derive(Clone, Debug, Default)]
pub(crate) struct Reasons {
    steps: Vec<ReasonStep>,
    deps: BTreeSet<String>,
}

impl Reasons {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, claim: impl Into<String>, rule: impl Into<String>, backing: Backing, using: &[usize]) -> usize {
        if let Backing::Trace(t) = &backing {
            self.deps.insert(format!("trace:{t}"));
        }
        self.steps.push(ReasonStep { claim: claim.into(), rule: rule.into(), backing, using: using.to_vec() });
        self.steps.len() - 1
    }

    pub fn rule(&mut self, claim: impl Into<String>, rule: impl Into<String>, using: &[usize]) -> usize {
        self.push(claim, rule, Backing::Rule, using)
    }

    pub fn depend(&mut self, dep: impl Into<String>) {
        self.deps.insert(dep.into());
    }

    /// Append another chain, returning the index of its final step.
    pub fn absorb(&mut self, steps: &[ReasonStep], deps: &[String]) -> Option<usize> {
        let offset = self.steps.len();
        for s in steps {
            let mut s = s.clone();
            for u in &mut s.using {
                *u += offset;
            }
            self.steps.push(s);
        }
        self.deps.extend(deps.iter().cloned());
        (!steps.is_empty()).then(|| self.steps.len() - 1)
    }

    pub fn absorb_verdict(&mut self, v: &StabilityVerdict) -> Option<usize> {
        self.absorb(&v.reasons, &v.dependencies)
    }

    pub fn absorb_support(&mut self, s: &Support) -> Option<usize> {
        self.absorb(&s.reasons, &s.dependencies)
    }

    pub fn finish(self, outcome: Outcome) -> StabilityVerdict {
        let open = self.steps.iter().any(|s| s.backing == Backing::Open);
        let outcome = if outcome == Outcome::Stable && open { Outcome::Unknown } else { outcome };
        StabilityVerdict { outcome, reasons: self.steps, dependencies: self.deps.into_iter().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_numbers_from_one() {
        let mut r = Reasons::new();
        let a = r.rule("a", "r1", &[]);
        r.rule("b", "r2", &[a]);
        let v = r.finish(Outcome::Stable);
        assert_eq!(v.log(), "STEP 1: a BY r1 USING -\nSTEP 2: b BY r2 USING 1\n");
    }

    #[test]
    fn open_step_blocks_stable() {
        let mut r = Reasons::new();
        r.push("x", "todo", Backing::Open, &[]);
        assert_eq!(r.finish(Outcome::Stable).outcome, Outcome::Unknown);
    }

    #[test]
    fn absorb_shifts_references() {
        let mut inner = Reasons::new();
        let a = inner.rule("a", "r", &[]);
        inner.rule("b", "r", &[a]);
        let inner = inner.finish(Outcome::Stable);
        let mut outer = Reasons::new();
        outer.rule("z", "r", &[]);
        let last = outer.absorb_verdict(&inner).unwrap();
        assert_eq!(last, 2);
        let v = outer.finish(Outcome::Stable);
        assert_eq!(v.reasons[2].using, vec![1]);
    }
}
