use std::fmt;

use super::SpecialError;
use crate::tables::{Cell, CohomologyTable, CohomologyValue};

/// The three clauses of the special-cohomology pattern. They partition the
/// checked cells: (a) twisted, (b) untwisted off-diagonal, (c) diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    A,
    B,
    C,
}

impl Condition {
    pub fn expected(&self) -> CohomologyValue {
        match self {
            Condition::A | Condition::B => CohomologyValue::Zero,
            Condition::C => CohomologyValue::one(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "a" => Some(Condition::A),
            "b" => Some(Condition::B),
            "c" => Some(Condition::C),
            _ => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

/// Which clause constrains `cell` on a manifold of dimension `dim`, if any.
pub fn condition_of(dim: usize, cell: Cell) -> Option<Condition> {
    let Cell { p, q, t } = cell;
    let interior = 0 < p && p < dim && p + q != dim;
    if interior && t != 0 {
        Some(Condition::A)
    } else if interior && p != q {
        Some(Condition::B)
    } else if t == 0 && p == q && 2 * p != dim {
        Some(Condition::C)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub cell: Cell,
    pub condition: Condition,
    pub found: CohomologyValue,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: found {}, expected {}", self.condition, self.cell, self.found, self.condition.expected())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialReport {
    pub special: bool,
    pub violations: Vec<Violation>,
}

/// Check every constrained cell of the table's window.
pub fn is_special(table: &CohomologyTable) -> Result<SpecialReport, SpecialError> {
    let dim = table.dim();
    if dim < 3 {
        return Err(SpecialError::TooSmall { dim });
    }
    let mut unknown = Vec::new();
    let mut violations = Vec::new();
    for cell in table.window_cells() {
        let Some(condition) = condition_of(dim, cell) else { continue };
        let found = table.get(cell);
        if !found.is_known() {
            unknown.push(cell);
        } else if found != condition.expected() {
            violations.push(Violation { cell, condition, found });
        }
    }
    if !unknown.is_empty() {
        return Err(SpecialError::InsufficientTable(unknown));
    }
    Ok(SpecialReport { special: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::Window;
    use crate::weyl::Grassmannian;

    #[test]
    fn projective_space_is_special() {
        for n in 3..=6 {
            let t = CohomologyTable::from_grassmannian(Grassmannian::projective(n).unwrap(), Window::symmetric(10));
            let r = is_special(&t).unwrap();
            assert!(r.special, "P^{n}: {:?}", r.violations);
        }
    }

    #[test]
    fn g14_fails_at_middle_diagonal() {
        let t = CohomologyTable::from_grassmannian(Grassmannian::new(1, 4).unwrap(), Window::symmetric(4));
        let r = is_special(&t).unwrap();
        assert!(!r.special);
        assert!(r.violations.iter().any(|v| v.cell == Cell::new(2, 2, 0)
            && v.found == CohomologyValue::from_dim(2u32)));
        assert!(r.violations.iter().any(|v| v.condition == Condition::A));
    }

    #[test]
    fn injected_h1_of_o1() {
        let g = Grassmannian::projective(3).unwrap();
        let full = CohomologyTable::from_grassmannian(g, Window::symmetric(3));
        let mut t = CohomologyTable::new(full.space.clone(), full.window);
        for (c, v) in full.stored() {
            let v = if *c == Cell::new(1, 0, 1) { CohomologyValue::one() } else { v.clone() };
            t.set(*c, v).unwrap();
        }
        let r = is_special(&t).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].condition, Condition::A);
    }

    #[test]
    fn unknown_cells_are_insufficient_not_false() {
        let g = Grassmannian::projective(3).unwrap();
        let t = CohomologyTable::new(crate::tables::SpaceDescriptor::grassmannian(g), Window::symmetric(1));
        assert!(matches!(is_special(&t), Err(SpecialError::InsufficientTable(_))));
    }

    #[test]
    fn surfaces_rejected() {
        let t = CohomologyTable::from_grassmannian(Grassmannian::projective(2).unwrap(), Window::symmetric(1));
        assert!(matches!(is_special(&t), Err(SpecialError::TooSmall { dim: 2 })));
    }

    #[test]
    fn conditions_are_disjoint_and_exhaustive_on_interior() {
        for dim in 3..=6 {
            for p in 0..=dim {
                for q in 0..=dim {
                    for t in -2..=2 {
                        let c = condition_of(dim, Cell::new(p, q, t));
                        if 0 < p && p < dim && p + q != dim && !(p == q && t == 0) {
                            assert!(matches!(c, Some(Condition::A) | Some(Condition::B)));
                        }
                    }
                }
            }
        }
    }
}
