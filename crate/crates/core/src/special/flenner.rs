use super::certificate::SpecialCohomologyCertificate;
use super::predicate::{condition_of, Condition};
use super::SpecialError;
use crate::tables::{Cell, TableError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlennerClause {
    /// `0<p<n, p+q≠n, p≠q`
    OffDiagonal,
    /// `0<p<n, p+q≠n, t≠0`
    Twisted,
    /// `p+q>n, t>q-p`
    Above,
    /// `p+q<n, t<q-p`
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlennerAnswer {
    Zero(FlennerClause),
    /// `expected_one` marks the diagonal cells known to be one-dimensional.
    Unknown { expected_one: bool },
}

impl FlennerAnswer {
    pub fn is_zero(&self) -> bool {
        matches!(self, FlennerAnswer::Zero(_))
    }
}

/// Vanishing pattern of twisted forms on a smooth complete intersection of
/// dimension `n` in projective space.
pub fn flenner_predicate(n: usize, p: usize, q: usize, t: i64) -> Result<FlennerAnswer, SpecialError> {
    if p > n || q > n {
        return Err(TableError::CellOutOfRange { cell: Cell::new(p, q, t), dim: n }.into());
    }
    let interior = 0 < p && p < n && p + q != n;
    let slope = q as i64 - p as i64;
    let clause = if interior && p != q {
        Some(FlennerClause::OffDiagonal)
    } else if interior && t != 0 {
        Some(FlennerClause::Twisted)
    } else if p + q > n && t > slope {
        Some(FlennerClause::Above)
    } else if p + q < n && t < slope {
        Some(FlennerClause::Below)
    } else {
        None
    };
    Ok(match clause {
        Some(c) => FlennerAnswer::Zero(c),
        None => FlennerAnswer::Unknown { expected_one: p == q && t == 0 && 2 * p != n },
    })
}

/// Condition-(a) cells of the certificate where its value disagrees with the
/// closed form.
pub fn flenner_agreement(cert: &SpecialCohomologyCertificate) -> Result<Vec<Cell>, SpecialError> {
    let n = cert.dim();
    let mut mismatches = Vec::new();
    for cell in cert.table.window_cells() {
        if condition_of(n, cell) != Some(Condition::A) {
            continue;
        }
        let predicted = flenner_predicate(n, cell.p, cell.q, cell.t)?.is_zero();
        if predicted != cert.get(cell).is_zero() {
            mismatches.push(cell);
        }
    }
    Ok(mismatches)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(flenner_predicate(4, 1, 2, 5).unwrap(), FlennerAnswer::Zero(FlennerClause::OffDiagonal));
        assert!(flenner_predicate(4, 0, 3, 2).unwrap().is_zero());
        assert_eq!(flenner_predicate(4, 0, 3, 2).unwrap(), FlennerAnswer::Zero(FlennerClause::Below));
        assert_eq!(flenner_predicate(4, 2, 2, 0).unwrap(), FlennerAnswer::Unknown { expected_one: false });
        assert_eq!(flenner_predicate(5, 2, 2, 0).unwrap(), FlennerAnswer::Unknown { expected_one: true });
        assert_eq!(flenner_predicate(4, 2, 2, 3).unwrap(), FlennerAnswer::Unknown { expected_one: false });
        assert!(flenner_predicate(4, 5, 0, 0).is_err());
    }

    #[test]
    fn twisted_clause_reached_on_diagonal() {
        assert_eq!(flenner_predicate(5, 1, 1, 2).unwrap(), FlennerAnswer::Zero(FlennerClause::Twisted));
    }
}
