use std::collections::{BTreeMap, BTreeSet};

use super::expr::SheafExpr;
use super::ChaseError;
use crate::tables::{SpaceDescriptor, SpaceKind};
use crate::weyl::Grassmannian;

/// The spaces a chase talks about, with their section and cover relations.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    spaces: BTreeMap<String, SpaceDescriptor>,
    special: BTreeSet<String>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, space: SpaceDescriptor) -> Result<(), ChaseError> {
        if let Some(old) = self.spaces.get(&space.id) {
            if old.dim != space.dim || old.index != space.index {
                return Err(ChaseError::Space(format!("{} redeclared as {space}, was {old}", space.id)));
            }
            return Ok(());
        }
        if let SpaceKind::Grassmannian(g) = space.kind {
            if g.k == 0 {
                self.special.insert(space.id.clone());
            }
        }
        self.spaces.insert(space.id.clone(), space);
        Ok(())
    }

    pub fn grassmannian(&mut self, id: &str, k: usize, n: usize) -> Result<(), ChaseError> {
        let g = Grassmannian::new(k, n).map_err(|e| ChaseError::Space(e.to_string()))?;
        let mut s = SpaceDescriptor::grassmannian(g);
        s.id = id.to_string();
        self.declare(s)
    }

    pub fn section(&mut self, id: &str, parent: &str, degree: u32) -> Result<(), ChaseError> {
        let s = self.get(parent)?.section(id, degree).map_err(|e| ChaseError::Space(e.to_string()))?;
        self.declare(s)
    }

    pub fn cover(&mut self, id: &str, base: &str, k: u32, d: u32) -> Result<(), ChaseError> {
        let s = self.get(base)?.cyclic_cover(id, k, d).map_err(|e| ChaseError::Space(e.to_string()))?;
        self.declare(s)
    }

    pub fn mark_special(&mut self, id: &str) -> Result<(), ChaseError> {
        self.get(id)?;
        self.special.insert(id.to_string());
        Ok(())
    }

    pub fn is_special(&self, id: &str) -> bool {
        self.special.contains(id)
    }

    pub fn get(&self, id: &str) -> Result<&SpaceDescriptor, ChaseError> {
        self.spaces.get(id).ok_or_else(|| ChaseError::Space(format!("undeclared space {id}")))
    }

    pub fn spaces(&self) -> impl Iterator<Item = &SpaceDescriptor> {
        self.spaces.values()
    }

    /// `(ambient, degree)` when `id` was declared as a divisor.
    pub fn section_of(&self, id: &str) -> Option<(&str, u32)> {
        match &self.spaces.get(id)?.kind {
            SpaceKind::Section { parent, degree } => Some((parent.as_str(), *degree)),
            _ => None,
        }
    }

    /// `(base, k, d)` when `id` was declared as a cyclic cover.
    pub fn cover_of(&self, id: &str) -> Option<(&str, u32, u32)> {
        match &self.spaces.get(id)?.kind {
            SpaceKind::CyclicCover { parent, k, d } => Some((parent.as_str(), *k, *d)),
            _ => None,
        }
    }

    pub fn grassmannian_of(&self, id: &str) -> Option<Grassmannian> {
        self.spaces.get(id)?.grassmannian_kind()
    }

    /// Check that every space exists and every relation matches.
    pub fn validate(&self, e: &SheafExpr) -> Result<(), ChaseError> {
        match e {
            SheafExpr::Omega { space, .. } | SheafExpr::Structure { space, .. } => self.get(space).map(|_| ()),
            SheafExpr::Restricted { ambient, section, .. } => match self.section_of(section) {
                Some((parent, _)) if parent == ambient => Ok(()),
                _ => Err(ChaseError::Space(format!("{section} is not a divisor in {ambient}"))),
            },
            SheafExpr::Pushforward { cover, .. } => self
                .cover_of(cover)
                .map(|_| ())
                .ok_or_else(|| ChaseError::Space(format!("{cover} is not a cyclic cover"))),
            SheafExpr::Sum(items) => items.iter().try_for_each(|i| self.validate(i)),
        }
    }

    /// Dimension of the space whose cohomology computes `H^p(e)`.
    pub fn cohomological_dim(&self, e: &SheafExpr) -> Result<usize, ChaseError> {
        match e {
            SheafExpr::Omega { space, .. } | SheafExpr::Structure { space, .. } => Ok(self.get(space)?.dim),
            SheafExpr::Restricted { section, .. } => Ok(self.get(section)?.dim),
            SheafExpr::Pushforward { cover, .. } => Ok(self.get(cover)?.dim),
            SheafExpr::Sum(items) => {
                let mut best = 0;
                for i in items {
                    best = best.max(self.cohomological_dim(i)?);
                }
                Ok(best)
            }
        }
    }

    /// The sheaf itself vanishes for degree reasons.
    pub fn sheaf_vanishes(&self, e: &SheafExpr) -> Result<bool, ChaseError> {
        Ok(match e {
            SheafExpr::Omega { space, q, .. } => *q < 0 || *q > self.get(space)?.dim as i64,
            SheafExpr::Structure { .. } => false,
            SheafExpr::Restricted { ambient, q, .. } => *q < 0 || *q > self.get(ambient)?.dim as i64,
            SheafExpr::Pushforward { cover, q, .. } => *q < 0 || *q > self.get(cover)?.dim as i64 + 1,
            SheafExpr::Sum(items) => {
                let mut all = true;
                for i in items {
                    all &= self.sheaf_vanishes(i)?;
                }
                all
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_bookkeeping() {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 4).unwrap();
        r.section("Y", "G", 2).unwrap();
        r.section("X", "Y", 1).unwrap();
        assert_eq!(r.get("X").unwrap().dim, 4);
        assert_eq!(r.get("X").unwrap().index, 2);
        assert_eq!(r.section_of("Y"), Some(("G", 2)));
        r.validate(&SheafExpr::restricted("Y", "X", 2, 1)).unwrap();
        assert!(r.validate(&SheafExpr::restricted("G", "X", 2, 1)).is_err());
        assert!(r.sheaf_vanishes(&SheafExpr::omega("X", 5, 0)).unwrap());
        assert!(!r.sheaf_vanishes(&SheafExpr::restricted("Y", "X", 5, 0)).unwrap());
    }

    #[test]
    fn redeclaration_must_agree() {
        let mut r = Registry::new();
        r.declare(SpaceDescriptor::abstract_space("S", 10, 8)).unwrap();
        r.declare(SpaceDescriptor::abstract_space("S", 10, 8)).unwrap();
        assert!(r.declare(SpaceDescriptor::abstract_space("S", 9, 8)).is_err());
    }
}
