//! Slope-stability verdicts for tangent bundles of Fano manifolds with
//! Picard number one.
//!
//! Every verdict carries an ordered reason log. Steps rest on a rule applied
//! to earlier steps, on a checked chase trace, on a cited theorem, or on a
//! caller assumption; a verdict is only `Stable` when no step is left open.
//! All slope comparisons use exact rationals.

mod coindex;
mod hypersurface;
mod profile;
mod slicing;
mod threshold;
mod verdict;

pub use coindex::{
    classify, coindex3_classify, complete_intersection_verdict, homogeneous_axiom, lemma26_criterion, prop24_analyze, rigid_section_verdict,
    CheckedTrace, CoindexRoute, H0Vanishing, Resources, RouteRegistry,
};
pub use hypersurface::{cyclic_stability, cyclic_thresholds, hypersurface_stability, hypersurface_thresholds, ThresholdCase, ThresholdRow};
pub use profile::{slope, FanoProfile, SubsheafProfile};
pub use slicing::{
    del_pezzo_verdict, is_exhaustive, reid_bound, reid_verdict, slicing_search, slicing_search_with, Branch, Endpoints, NodeKind, SliceNode,
    SlicingOutcome, SubsheafBound, Survivor,
};
pub use threshold::{h0_threshold_stability, CellOracle, FlennerOracle, VanishingOracle};
pub use verdict::{Backing, Outcome, ReasonStep, StabilityVerdict, Support};

use thiserror::Error;

use crate::chase::ChaseError;
use crate::special::SpecialError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilityError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("unknown route: {0}")]
    UnknownRoute(String),
    #[error("missing resource: {0}")]
    Missing(String),
    #[error("rule: {0}")]
    Rule(String),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Chase(#[from] ChaseError),
}
