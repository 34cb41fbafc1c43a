use std::fmt;

use super::WeylError;

/// A weakly decreasing sequence of positive integers. Trailing zeros are
/// trimmed on construction, so `(2,1,0)` and `(2,1)` are the same partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, WeylError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(WeylError::NotAPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|λ|`
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|i| self.0.iter().filter(|&&x| x > i).count() as u32)
            .collect();
        Partition(parts)
    }

    pub fn fits_in_box(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.0.first().is_none_or(|&w| w <= cols)
    }

    /// `parts` padded with zeros (or truncated check) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<i64> {
        debug_assert!(self.len() <= len);
        let mut out: Vec<i64> = self.0.iter().map(|&x| x as i64).collect();
        out.resize(len, 0);
        out
    }

    /// All partitions of `size` inside a `rows × cols` box, in reverse
    /// lexicographic order (largest first part first).
    pub fn in_box(size: u32, rows: usize, cols: u32) -> Vec<Partition> {
        fn rec(rem: u32, max_part: u32, rows_left: usize, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(acc.clone()));
                return;
            }
            if rows_left == 0 {
                return;
            }
            for a in (1..=rem.min(max_part)).rev() {
                acc.push(a);
                rec(rem - a, a, rows_left - 1, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(size, cols, rows, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trims_trailing_zeros() {
        let p = Partition::new(vec![3, 1, 0, 0]).unwrap();
        assert_eq!(p.parts(), &[3, 1]);
        assert_eq!(p.size(), 4);
    }

    #[test]
    fn rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn conjugate_of_hook() {
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(p.conjugate().parts(), &[2, 1, 1]);
    }

    #[test]
    fn box_enumeration_counts() {
        // partitions of 2 in a 2x3 box: (2), (1,1)
        assert_eq!(Partition::in_box(2, 2, 3).len(), 2);
        // partitions of 4 in a 2x4 box: (4),(3,1),(2,2)
        assert_eq!(Partition::in_box(4, 2, 4).len(), 3);
        assert_eq!(Partition::in_box(0, 0, 0), vec![Partition::empty()]);
        assert!(Partition::in_box(3, 1, 2).is_empty());
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(mut v in prop::collection::vec(0u32..8, 0..8)) {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let p = Partition::new(v).unwrap();
            prop_assert_eq!(p.conjugate().conjugate(), p.clone());
            prop_assert_eq!(p.conjugate().size(), p.size());
        }
    }
}
