//! Partial knowledge of twisted-form cohomology over bounded twist windows.

mod euler;
mod facts;
mod space;
mod table;

pub use euler::euler_recursion;
pub use facts::{BettiFact, CellFact, FactStore};
pub use space::{SpaceDescriptor, SpaceKind};
pub use table::{kodaira_nakano_zone, serre_close, Cell, CohomologyTable, CohomologyValue, Window};

use num_bigint::BigInt;
use thiserror::Error;

use crate::weyl::WeylError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("empty window {min}:{max}")]
    EmptyWindow { min: i64, max: i64 },
    #[error("cell {cell} outside 0..={dim}")]
    CellOutOfRange { cell: Cell, dim: usize },
    #[error("cell {cell} outside window {window}")]
    OutsideWindow { cell: Cell, window: Window },
    #[error("conflicting values at {cell}: {old} vs {new}")]
    Conflict { cell: Cell, old: CohomologyValue, new: CohomologyValue },
    #[error("Serre duality violated: {cell} = {value} but {dual} = {dual_value}")]
    SerreContradiction { cell: Cell, value: CohomologyValue, dual: Cell, dual_value: CohomologyValue },
    #[error("Euler characteristic {chi} forces a negative dimension at {cell}")]
    NegativeDimension { cell: Cell, chi: BigInt },
    #[error("Euler recursion needs column q={q} t={t} of {space}, which is not fully known")]
    FootprintUnknown { space: String, q: usize, t: i64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("contradictory facts for {what}: {first} vs {second}")]
    Contradiction { what: String, first: String, second: String },
    #[error("unknown space {0}")]
    UnknownSpace(String),
}
