use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;

use super::expr::{Claim, SheafExpr};
use super::registry::Registry;
use super::ChaseError;
use crate::tables::{Cell, FactStore};
use crate::weyl::grassmann_cohomology;

/// An input a script may cite: one cohomology cell or one Betti number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactRef {
    Cell { space: String, p: i64, q: i64, t: i64 },
    Betti { space: String, i: u32 },
}

impl FactRef {
    pub fn of_claim(claim: &Claim) -> Result<Self, ChaseError> {
        match claim {
            Claim::Value(g, _) => match &g.expr {
                SheafExpr::Omega { space, q, t } => Ok(FactRef::Cell { space: space.clone(), p: g.p, q: *q, t: *t }),
                _ => Err(ChaseError::Syntax(format!("only Omega cells can be cited as facts, not {g}"))),
            },
            Claim::Betti(space, i, _) => Ok(FactRef::Betti { space: space.clone(), i: *i }),
            Claim::Map(..) => Err(ChaseError::Syntax("maps cannot be cited as facts".into())),
        }
    }

    pub fn space(&self) -> &str {
        match self {
            FactRef::Cell { space, .. } | FactRef::Betti { space, .. } => space,
        }
    }
}

impl fmt::Display for FactRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactRef::Cell { space, p, q, t } => write!(f, "H{p}(Omega({space},{q},{t}))"),
            FactRef::Betti { space, i } => write!(f, "b{i}({space})"),
        }
    }
}

/// Where cited facts come from: Borel–Weil–Bott for Grassmannians, fact
/// files for everything else. Masked facts behave as if absent.
#[derive(Clone, Debug, Default)]
pub struct FactSources {
    pub store: FactStore,
    masked: BTreeSet<FactRef>,
}

pub struct Found {
    pub value: BigUint,
    pub provenance: String,
}

impl FactSources {
    pub fn new(store: FactStore) -> Self {
        FactSources { store, masked: BTreeSet::new() }
    }

    pub fn mask(&mut self, fact: FactRef) {
        self.masked.insert(fact);
    }

    pub fn masked(&self) -> impl Iterator<Item = &FactRef> {
        self.masked.iter()
    }

    pub fn lookup(&self, reg: &Registry, fact: &FactRef) -> Result<Option<Found>, ChaseError> {
        if self.masked.contains(fact) {
            return Ok(None);
        }
        let space = reg.get(fact.space())?;
        if let Some(g) = space.grassmannian_kind() {
            let dim = space.dim as i64;
            let provenance = format!("weyl:{g}");
            let value = match fact {
                FactRef::Cell { p, q, t, .. } => {
                    if *p < 0 || *p > dim || *q < 0 || *q > dim {
                        BigUint::default()
                    } else {
                        let h = grassmann_cohomology(g.k, g.n, *q as usize, *t).map_err(|e| ChaseError::Space(e.to_string()))?;
                        h.get(&(*p as usize)).cloned().unwrap_or_default()
                    }
                }
                FactRef::Betti { i, .. } => {
                    let mut total = BigUint::default();
                    for q in 0..=(*i as i64).min(dim) {
                        let p = *i as i64 - q;
                        if p > dim {
                            continue;
                        }
                        let h = grassmann_cohomology(g.k, g.n, q as usize, 0).map_err(|e| ChaseError::Space(e.to_string()))?;
                        total += h.get(&(p as usize)).cloned().unwrap_or_default();
                    }
                    total
                }
            };
            return Ok(Some(Found { value, provenance }));
        }
        Ok(match fact {
            FactRef::Cell { space, p, q, t } => {
                if *p < 0 || *q < 0 {
                    return Ok(None);
                }
                self.store.cell(space, Cell::new(*p as usize, *q as usize, *t)).and_then(|f| {
                    f.value.dim().map(|value| Found { value, provenance: f.provenance.clone() })
                })
            }
            FactRef::Betti { space, i } => {
                self.store.betti(space, *i).map(|f| Found { value: f.value.clone(), provenance: f.provenance.clone() })
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_backed_cells_and_betti() {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 5).unwrap();
        let s = FactSources::default();
        let cell = FactRef::Cell { space: "G".into(), p: 2, q: 2, t: 0 };
        assert_eq!(s.lookup(&r, &cell).unwrap().unwrap().value, BigUint::from(2u32));
        let b4 = FactRef::Betti { space: "G".into(), i: 4 };
        assert_eq!(s.lookup(&r, &b4).unwrap().unwrap().value, BigUint::from(2u32));
        let b5 = FactRef::Betti { space: "G".into(), i: 5 };
        assert_eq!(s.lookup(&r, &b5).unwrap().unwrap().value, BigUint::default());
    }

    #[test]
    fn masking_hides_facts() {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 4).unwrap();
        let mut s = FactSources::default();
        let cell = FactRef::Cell { space: "G".into(), p: 0, q: 3, t: 2 };
        assert!(s.lookup(&r, &cell).unwrap().is_some());
        s.mask(cell.clone());
        assert!(s.lookup(&r, &cell).unwrap().is_none());
    }
}
