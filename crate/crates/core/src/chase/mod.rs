//! Diagram chases over long exact cohomology sequences.
//!
//! A chase script declares spaces, instantiates short exact sequences and
//! cupping maps, cites input facts, and names the vanishings it concludes.
//! The engine saturates exactness and morphism rules to a fixpoint; the
//! resulting derivation log is re-verified by a separate checker.

mod checker;
mod engine;
mod expr;
mod mutation;
mod registry;
mod script;
mod ses;
mod sources;
mod trace;

pub use checker::{check_trace, CheckReport};
pub use engine::{cupping_rule, ChaseState, CuppingContext, MorphismFact, Step, StepId};
pub use expr::{Claim, Group, MapProperty, SheafExpr};
pub use mutation::{load_bearing_facts, mutation_suite, MutationOutcome};
pub use registry::Registry;
pub use script::{builtin_facts, builtin_script, replay, sources_for, Command, ReplayOutcome, Script, StuckReport, BUILTIN_FACTS, BUILTIN_SCRIPTS};
pub use ses::{Ses, SesRule};
pub use sources::{FactRef, FactSources};
pub use trace::ProofTrace;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChaseError {
    #[error("syntax: {0}")]
    Syntax(String),
    #[error("space: {0}")]
    Space(String),
    #[error("sequence bookkeeping: {0}")]
    Bookkeeping(String),
    #[error("rule out of range: {0}")]
    OutOfRange(String),
    #[error("missing premise: {0}")]
    MissingPremise(String),
    #[error("contradiction:\n{0}")]
    Contradiction(String),
    #[error("script line {line}: {source}")]
    Script { line: usize, source: Box<ChaseError> },
    #[error("trace check failed at step {step}: {msg}")]
    Check { step: usize, msg: String },
}
