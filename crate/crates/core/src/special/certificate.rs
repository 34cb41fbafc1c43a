use std::collections::BTreeMap;
use std::fmt;

use super::predicate::{condition_of, is_special, Condition};
use super::SpecialError;
use crate::tables::{Cell, CohomologyTable, CohomologyValue, SpaceDescriptor, Window};

/// A cohomology value a derivation step relied on.
#[derive(Clone, Debug, PartialEq)]
pub struct Premise {
    pub space: String,
    pub cell: Cell,
    pub value: CohomologyValue,
}

impl Premise {
    pub fn new(space: impl Into<String>, cell: Cell, value: CohomologyValue) -> Self {
        Premise { space: space.into(), cell, value }
    }
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{},{}={}", self.space, self.cell.p, self.cell.q, self.cell.t, self.value)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    RuleBacked { rule: String, premises: Vec<Premise> },
    CellChecked(CohomologyValue),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub condition: Condition,
    pub support: Support,
}

impl Evidence {
    pub fn rule(condition: Condition, rule: &str, premises: Vec<Premise>) -> Self {
        Evidence { condition, support: Support::RuleBacked { rule: rule.to_string(), premises } }
    }

    pub fn rule_name(&self) -> Option<&str> {
        match &self.support {
            Support::RuleBacked { rule, .. } => Some(rule),
            Support::CellChecked(_) => None,
        }
    }
}

/// A table with special cohomology together with one evidence entry per
/// constrained cell of its window.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialCohomologyCertificate {
    pub space: SpaceDescriptor,
    pub window: Window,
    pub table: CohomologyTable,
    pub evidence: BTreeMap<Cell, Evidence>,
    pub parent: Option<String>,
}

impl SpecialCohomologyCertificate {
    /// Certify a fully known table by checking each constrained cell.
    pub fn certify(table: CohomologyTable) -> Result<Self, SpecialError> {
        let report = is_special(&table)?;
        if !report.special {
            return Err(SpecialError::NotSpecial(report.violations));
        }
        let dim = table.dim();
        let evidence = table
            .window_cells()
            .into_iter()
            .filter_map(|cell| {
                condition_of(dim, cell).map(|condition| {
                    (cell, Evidence { condition, support: Support::CellChecked(table.get(cell)) })
                })
            })
            .collect();
        Ok(SpecialCohomologyCertificate {
            space: table.space.clone(),
            window: table.window,
            table,
            evidence,
            parent: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn get(&self, cell: Cell) -> CohomologyValue {
        self.table.get(cell)
    }

    /// Re-check the invariants: full evidence coverage with matching
    /// conditions, and the underlying table passes [`is_special`].
    pub fn validate(&self) -> Result<(), SpecialError> {
        let dim = self.dim();
        for cell in self.table.window_cells() {
            let expected = condition_of(dim, cell);
            let recorded = self.evidence.get(&cell).map(|e| e.condition);
            if expected != recorded {
                return Err(SpecialError::InvalidParameter(format!(
                    "evidence at {cell} is {recorded:?}, expected {expected:?}"
                )));
            }
        }
        if let Some(cell) = self.evidence.keys().find(|c| !self.window.contains(c.t)) {
            return Err(SpecialError::InvalidParameter(format!("evidence at {cell} outside window")));
        }
        let report = is_special(&self.table)?;
        if !report.special {
            return Err(SpecialError::NotSpecial(report.violations));
        }
        Ok(())
    }

    /// The same certificate over a smaller window.
    pub fn restrict(&self, window: Window) -> Result<Self, SpecialError> {
        if !self.window.covers(&window) {
            return Err(SpecialError::Footprint {
                space: self.space.id.clone(),
                needed: window,
                available: self.window,
            });
        }
        let mut table = CohomologyTable::new(self.space.clone(), window);
        for (cell, v) in self.table.stored().filter(|(c, _)| window.contains(c.t)) {
            table.set(*cell, v.clone())?;
        }
        let evidence = self
            .evidence
            .iter()
            .filter(|(c, _)| window.contains(c.t))
            .map(|(c, e)| (*c, e.clone()))
            .collect();
        Ok(SpecialCohomologyCertificate { space: self.space.clone(), window, table, evidence, parent: self.parent.clone() })
    }

    /// Number of evidence entries backed by each rule name.
    pub fn rule_histogram(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in self.evidence.values() {
            let key = e.rule_name().unwrap_or("cell-checked").to_string();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::Grassmannian;

    fn p4() -> SpecialCohomologyCertificate {
        let t = CohomologyTable::from_grassmannian(Grassmannian::projective(4).unwrap(), Window::symmetric(5));
        SpecialCohomologyCertificate::certify(t).unwrap()
    }

    #[test]
    fn certified_projective_space_validates() {
        let c = p4();
        c.validate().unwrap();
        assert!(c.evidence.values().all(|e| matches!(e.support, Support::CellChecked(_))));
    }

    #[test]
    fn grassmannian_of_lines_cannot_be_certified() {
        let t = CohomologyTable::from_grassmannian(Grassmannian::new(1, 4).unwrap(), Window::symmetric(3));
        assert!(matches!(SpecialCohomologyCertificate::certify(t), Err(SpecialError::NotSpecial(_))));
    }

    #[test]
    fn restriction_keeps_invariants() {
        let c = p4().restrict(Window::new(-2, 3).unwrap()).unwrap();
        c.validate().unwrap();
        assert!(p4().restrict(Window::symmetric(9)).is_err());
    }
}
