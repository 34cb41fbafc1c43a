//! Exact cohomology of twisted forms on Grassmannians.
//!
//! `Ω^q(t)` on `G(k,n)` splits into Schur functors of the tautological
//! bundles; each summand is handled by Borel–Weil–Bott. Projective space
//! is the case `k = 0`, so the Bott formulae are not coded separately.

mod bwb;
mod forms;
mod partition;

pub use bwb::{bwb, weyl_dimension, CohomologyClass, Weight};
pub use forms::{grassmann_cohomology, line_grassmannian_nonvanishing, omega_decompose, Grassmannian};
pub use partition::Partition;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("{0:?} is not weakly decreasing")]
    NotAPartition(Vec<u32>),
    #[error("{what} = {value} out of range ({bound})")]
    OutOfRange { what: &'static str, value: i64, bound: String },
}
