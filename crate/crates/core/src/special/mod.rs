//! Special cohomology: the Bott-type vanishing pattern, its propagation to
//! smooth divisors and cyclic covers, and the closed form for complete
//! intersections used to cross-check propagated certificates.

mod certificate;
mod flenner;
mod predicate;
mod propagate;
mod serial;

pub use certificate::{Evidence, Premise, SpecialCohomologyCertificate, Support};
pub use flenner::{flenner_agreement, flenner_predicate, FlennerAnswer, FlennerClause};
pub use predicate::{condition_of, is_special, Condition, SpecialReport, Violation};
pub use propagate::{pushforward_layer, propagate_cyclic, propagate_section};

use thiserror::Error;

use crate::tables::{Cell, CohomologyValue, TableError, Window};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("special cohomology needs dimension >= 3, got {dim}")]
    TooSmall { dim: usize },
    #[error("insufficient table: {} checked cells are unknown, first {}", .0.len(), .0[0])]
    InsufficientTable(Vec<Cell>),
    #[error("{} violations, first {}", .0.len(), .0[0])]
    NotSpecial(Vec<Violation>),
    #[error("{space} needs twists {needed} but its certificate covers {available}")]
    Footprint { space: String, needed: Window, available: Window },
    #[error("{rule} needs H^{}({space}, Ω^{}({})) to be {expected}, found {found}", .cell.p, .cell.q, .cell.t)]
    PremiseFailed { rule: &'static str, space: String, cell: Cell, expected: String, found: CohomologyValue },
    #[error("window {0} must contain 0")]
    WindowMissesZero(Window),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("certificate line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
