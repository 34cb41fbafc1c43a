use super::script::{replay, ReplayOutcome, Script};
use super::sources::{FactRef, FactSources};
use super::trace::ProofTrace;
use super::ChaseError;

/// Result of replaying a script with one input fact withheld.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationOutcome {
    pub fact: FactRef,
    pub stuck: bool,
    /// The withheld fact is named in the stuck report.
    pub named: bool,
}

/// Cited facts in the derivation cone of the conclusions.
pub fn load_bearing_facts(trace: &ProofTrace) -> Vec<FactRef> {
    let mut out: Vec<FactRef> = trace.fact_steps().filter_map(|s| FactRef::of_claim(&s.claim).ok()).collect();
    out.sort();
    out.dedup();
    out
}

/// Withhold each load-bearing fact in turn and replay.
pub fn mutation_suite(script: &Script, sources: &FactSources) -> Result<Vec<MutationOutcome>, ChaseError> {
    let trace = match replay(script, sources)? {
        ReplayOutcome::Proved(t) => t,
        ReplayOutcome::Stuck(r) => {
            return Err(ChaseError::MissingPremise(format!("unmutated replay is already stuck:\n{r}")));
        }
    };
    let mut out = Vec::new();
    for fact in load_bearing_facts(&trace) {
        let mut masked = sources.clone();
        masked.mask(fact.clone());
        let outcome = match replay(script, &masked)? {
            ReplayOutcome::Proved(_) => MutationOutcome { fact, stuck: false, named: false },
            ReplayOutcome::Stuck(r) => {
                let named = r.missing.contains(&fact);
                MutationOutcome { fact, stuck: true, named }
            }
        };
        out.push(outcome);
    }
    Ok(out)
}
