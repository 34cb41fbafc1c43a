use std::fmt;

use num_bigint::BigUint;

use super::TableError;
use crate::weyl::Grassmannian;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Includes projective space as `G(0,n)`.
    Grassmannian(Grassmannian),
    /// Smooth member of `|O(degree)|` on `parent`.
    Section { parent: String, degree: u32 },
    /// `k`-cyclic cover of `parent` branched along a divisor in `|O(k·d)|`.
    CyclicCover { parent: String, k: u32, d: u32 },
    Abstract,
}

/// A polarized manifold `(X, O(1))`. `index` is `s` with `-K = O(s)`, and may
/// be zero or negative for non-Fano spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDescriptor {
    pub id: String,
    pub dim: usize,
    pub index: i64,
    /// Self-intersection `H^dim`, when known.
    pub degree: Option<BigUint>,
    pub kind: SpaceKind,
}

impl SpaceDescriptor {
    pub fn grassmannian(g: Grassmannian) -> Self {
        SpaceDescriptor {
            id: g.to_string(),
            dim: g.dim(),
            index: g.index() as i64,
            degree: Some(g.degree()),
            kind: SpaceKind::Grassmannian(g),
        }
    }

    pub fn projective(n: usize) -> Result<Self, TableError> {
        Ok(Self::grassmannian(Grassmannian::projective(n)?))
    }

    pub fn abstract_space(id: impl Into<String>, dim: usize, index: i64) -> Self {
        SpaceDescriptor { id: id.into(), dim, index, degree: None, kind: SpaceKind::Abstract }
    }

    pub fn section(&self, id: impl Into<String>, degree: u32) -> Result<Self, TableError> {
        if degree == 0 {
            return Err(TableError::InvalidSpace("section degree must be positive".into()));
        }
        if self.dim == 0 {
            return Err(TableError::InvalidSpace(format!("{} has no divisors", self.id)));
        }
        Ok(SpaceDescriptor {
            id: id.into(),
            dim: self.dim - 1,
            index: self.index - degree as i64,
            degree: self.degree.as_ref().map(|h| h * BigUint::from(degree)),
            kind: SpaceKind::Section { parent: self.id.clone(), degree },
        })
    }

    pub fn cyclic_cover(&self, id: impl Into<String>, k: u32, d: u32) -> Result<Self, TableError> {
        if k == 0 || d == 0 {
            return Err(TableError::InvalidSpace("cyclic cover needs k >= 1 and d >= 1".into()));
        }
        Ok(SpaceDescriptor {
            id: id.into(),
            dim: self.dim,
            index: self.index - (k as i64 - 1) * d as i64,
            degree: self.degree.as_ref().map(|h| h * BigUint::from(k)),
            kind: SpaceKind::CyclicCover { parent: self.id.clone(), k, d },
        })
    }

    pub fn grassmannian_kind(&self) -> Option<Grassmannian> {
        match self.kind {
            SpaceKind::Grassmannian(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, index {})", self.id, self.dim, self.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_index_is_n_plus_one() {
        let p = SpaceDescriptor::projective(4).unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.index, 5);
        assert_eq!(p.id, "P(4)");
    }

    #[test]
    fn section_bookkeeping() {
        let p = SpaceDescriptor::projective(5).unwrap();
        let x = p.section("X", 3).unwrap();
        assert_eq!(x.dim, 4);
        assert_eq!(x.index, 3);
        assert_eq!(x.degree, Some(BigUint::from(3u32)));
    }

    #[test]
    fn cover_bookkeeping() {
        let p = SpaceDescriptor::projective(3).unwrap();
        let x = p.cyclic_cover("X", 2, 3).unwrap();
        assert_eq!(x.dim, 3);
        assert_eq!(x.index, 1);
        assert_eq!(x.degree, Some(BigUint::from(2u32)));
    }
}
