use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::{SpaceDescriptor, TableError};
use crate::weyl::{grassmann_cohomology, Grassmannian};

/// What is known about one cohomology group. `Dim(0)` never survives
/// construction through [`CohomologyValue::from_dim`], and compares equal to
/// `Zero` regardless.
#[derive(Clone, Debug, Eq)]
pub enum CohomologyValue {
    Zero,
    Dim(BigUint),
    Unknown,
}

impl CohomologyValue {
    pub fn from_dim(d: impl Into<BigUint>) -> Self {
        let d = d.into();
        if d.is_zero() {
            CohomologyValue::Zero
        } else {
            CohomologyValue::Dim(d)
        }
    }

    pub fn one() -> Self {
        CohomologyValue::Dim(BigUint::from(1u32))
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, CohomologyValue::Unknown)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CohomologyValue::Zero => true,
            CohomologyValue::Dim(d) => d.is_zero(),
            CohomologyValue::Unknown => false,
        }
    }

    /// Dimension if known.
    pub fn dim(&self) -> Option<BigUint> {
        match self {
            CohomologyValue::Zero => Some(BigUint::zero()),
            CohomologyValue::Dim(d) => Some(d.clone()),
            CohomologyValue::Unknown => None,
        }
    }

    fn normalized(self) -> Self {
        match self {
            CohomologyValue::Dim(d) if d.is_zero() => CohomologyValue::Zero,
            v => v,
        }
    }
}

impl PartialEq for CohomologyValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (CohomologyValue::Unknown, CohomologyValue::Unknown) => true,
            (CohomologyValue::Unknown, _) | (_, CohomologyValue::Unknown) => false,
            _ => self.dim() == other.dim(),
        }
    }
}

impl fmt::Display for CohomologyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyValue::Zero => write!(f, "0"),
            CohomologyValue::Dim(d) => write!(f, "{d}"),
            CohomologyValue::Unknown => write!(f, "?"),
        }
    }
}

/// Index of `H^p(Ω^q(t))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub p: usize,
    pub q: usize,
    pub t: i64,
}

impl Cell {
    pub fn new(p: usize, q: usize, t: i64) -> Self {
        Cell { p, q, t }
    }

    /// Serre dual cell on a manifold of dimension `dim`.
    pub fn serre_dual(&self, dim: usize) -> Cell {
        Cell { p: dim - self.p, q: dim - self.q, t: -self.t }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={},q={},t={})", self.p, self.q, self.t)
    }
}

/// Closed twist range `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub min: i64,
    pub max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Result<Self, TableError> {
        if min > max {
            return Err(TableError::EmptyWindow { min, max });
        }
        Ok(Window { min, max })
    }

    pub fn symmetric(radius: i64) -> Self {
        Window { min: -radius.abs(), max: radius.abs() }
    }

    pub fn contains(&self, t: i64) -> bool {
        self.min <= t && t <= self.max
    }

    pub fn covers(&self, other: &Window) -> bool {
        self.min <= other.min && other.max <= self.max
    }

    pub fn twists(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

/// Zero where Kodaira–Nakano forces vanishing, `Unknown` otherwise.
pub fn kodaira_nakano_zone(dim: usize, p: usize, q: usize, t: i64) -> CohomologyValue {
    if (t > 0 && p + q > dim) || (t < 0 && p + q < dim) {
        CohomologyValue::Zero
    } else {
        CohomologyValue::Unknown
    }
}

/// Partial knowledge of `H^p(Y, Ω^q_Y(t))` over a bounded twist window.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyTable {
    pub space: SpaceDescriptor,
    pub window: Window,
    cells: BTreeMap<Cell, CohomologyValue>,
}

impl CohomologyTable {
    pub fn new(space: SpaceDescriptor, window: Window) -> Self {
        CohomologyTable { space, window, cells: BTreeMap::new() }
    }

    /// Every cell of `G(k,n)` inside the window, computed by BWB.
    pub fn from_grassmannian(g: Grassmannian, window: Window) -> Self {
        let space = SpaceDescriptor::grassmannian(g);
        let dim = g.dim();
        let mut table = CohomologyTable::new(space, window);
        for t in window.twists() {
            for q in 0..=dim {
                let h = grassmann_cohomology(g.k, g.n, q, t).expect("q within dimension");
                for p in 0..=dim {
                    let v = h.get(&p).cloned().map_or(CohomologyValue::Zero, CohomologyValue::from_dim);
                    table.cells.insert(Cell::new(p, q, t), v);
                }
            }
        }
        table
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    fn check_cell(&self, cell: Cell) -> Result<(), TableError> {
        if cell.p > self.dim() || cell.q > self.dim() {
            return Err(TableError::CellOutOfRange { cell, dim: self.dim() });
        }
        if !self.window.contains(cell.t) {
            return Err(TableError::OutsideWindow { cell, window: self.window });
        }
        Ok(())
    }

    /// Record a value; an existing known value must agree.
    pub fn set(&mut self, cell: Cell, value: CohomologyValue) -> Result<(), TableError> {
        self.check_cell(cell)?;
        let value = value.normalized();
        if !value.is_known() {
            return Ok(());
        }
        match self.cells.get(&cell) {
            Some(old) if old.is_known() && *old != value => Err(TableError::Conflict {
                cell,
                old: old.clone(),
                new: value,
            }),
            _ => {
                self.cells.insert(cell, value);
                Ok(())
            }
        }
    }

    /// Stored value, or the Kodaira–Nakano answer, or `Unknown`. Cells
    /// outside the window are never extrapolated beyond the named rules.
    pub fn get(&self, cell: Cell) -> CohomologyValue {
        if cell.p > self.dim() || cell.q > self.dim() {
            return CohomologyValue::Zero;
        }
        if let Some(v) = self.cells.get(&cell) {
            return v.clone();
        }
        kodaira_nakano_zone(self.dim(), cell.p, cell.q, cell.t)
    }

    /// Stored entries only, in canonical `(p, q, t)` order.
    pub fn stored(&self) -> impl Iterator<Item = (&Cell, &CohomologyValue)> {
        self.cells.iter()
    }

    /// All cells of the window, in `(t, q, p)` order.
    pub fn window_cells(&self) -> Vec<Cell> {
        let dim = self.dim();
        let mut out = Vec::new();
        for t in self.window.twists() {
            for q in 0..=dim {
                for p in 0..=dim {
                    out.push(Cell::new(p, q, t));
                }
            }
        }
        out
    }

    /// Materialize the Kodaira–Nakano zone inside the window.
    pub fn with_kodaira_nakano(mut self) -> Result<Self, TableError> {
        for cell in self.window_cells() {
            let v = kodaira_nakano_zone(self.dim(), cell.p, cell.q, cell.t);
            if v.is_known() {
                self.set(cell, v)?;
            }
        }
        Ok(self)
    }

    /// `χ(Ω^q(t)) = Σ (-1)^p h^p` if the whole column is known.
    pub fn euler_characteristic(&self, q: usize, t: i64) -> Option<BigInt> {
        let mut chi = BigInt::zero();
        for p in 0..=self.dim() {
            let d = BigInt::from(self.get(Cell::new(p, q, t)).dim()?);
            if p % 2 == 0 {
                chi += d;
            } else {
                chi -= d;
            }
        }
        Some(chi)
    }

    /// If exactly one cell of the `(q, t)` column is unknown, solve for it
    /// from the Euler characteristic. Returns the filled cell.
    pub fn fill_column_by_euler(&mut self, q: usize, t: i64, chi: &BigInt) -> Result<Option<Cell>, TableError> {
        let column: Vec<Cell> = (0..=self.dim()).map(|p| Cell::new(p, q, t)).collect();
        let unknown: Vec<Cell> = column.iter().copied().filter(|c| !self.get(*c).is_known()).collect();
        if unknown.len() != 1 {
            return Ok(None);
        }
        let target = unknown[0];
        let mut rest = BigInt::zero();
        for c in column.iter().filter(|c| **c != target) {
            let d = BigInt::from(self.get(*c).dim().expect("known"));
            if c.p % 2 == 0 {
                rest += d;
            } else {
                rest -= d;
            }
        }
        let mut value = chi - rest;
        if target.p % 2 == 1 {
            value = -value;
        }
        let value = value
            .to_biguint()
            .ok_or_else(|| TableError::NegativeDimension { cell: target, chi: chi.clone() })?;
        self.set(target, CohomologyValue::from_dim(value))?;
        Ok(Some(target))
    }
}

/// Fill every unknown cell whose Serre dual is known; contradictions between
/// two known dual cells are errors naming both cells.
pub fn serre_close(table: &CohomologyTable) -> Result<CohomologyTable, TableError> {
    let dim = table.dim();
    let mut out = table.clone();
    for cell in table.window_cells() {
        let dual = cell.serre_dual(dim);
        if !table.window.contains(dual.t) {
            continue;
        }
        let (a, b) = (table.get(cell), table.get(dual));
        match (a.is_known(), b.is_known()) {
            (true, true) if a != b => {
                return Err(TableError::SerreContradiction { cell, value: a, dual, dual_value: b });
            }
            (false, true) => out.set(cell, b)?,
            _ => {}
        }
    }
    Ok(out)
}
