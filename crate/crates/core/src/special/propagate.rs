use std::collections::BTreeMap;

use super::certificate::{Evidence, Premise, SpecialCohomologyCertificate};
use super::predicate::{condition_of, Condition};
use super::SpecialError;
use crate::tables::{kodaira_nakano_zone, Cell, CohomologyTable, CohomologyValue, SpaceDescriptor, Window};

/// Read access to the parent certificate with premise checking.
struct Parent<'a> {
    cert: &'a SpecialCohomologyCertificate,
}

impl Parent<'_> {
    fn id(&self) -> &str {
        &self.cert.space.id
    }

    fn lookup(&self, rule: &'static str, cell: Cell) -> Result<CohomologyValue, SpecialError> {
        let v = self.cert.get(cell);
        if v.is_known() {
            return Ok(v);
        }
        if !self.cert.window.contains(cell.t) {
            return Err(SpecialError::Footprint {
                space: self.id().to_string(),
                needed: Window { min: cell.t.min(self.cert.window.min), max: cell.t.max(self.cert.window.max) },
                available: self.cert.window,
            });
        }
        Err(SpecialError::PremiseFailed {
            rule,
            space: self.id().to_string(),
            cell,
            expected: "known".into(),
            found: v,
        })
    }

    fn zero(&self, rule: &'static str, p: usize, q: usize, t: i64) -> Result<Premise, SpecialError> {
        let cell = Cell::new(p, q, t);
        let v = self.lookup(rule, cell)?;
        if !v.is_zero() {
            return Err(SpecialError::PremiseFailed {
                rule,
                space: self.id().to_string(),
                cell,
                expected: "0".into(),
                found: v,
            });
        }
        Ok(Premise::new(self.id(), cell, v))
    }

    fn one(&self, rule: &'static str, p: usize, q: usize) -> Result<Premise, SpecialError> {
        let cell = Cell::new(p, q, 0);
        let v = self.lookup(rule, cell)?;
        if v != CohomologyValue::one() {
            return Err(SpecialError::PremiseFailed {
                rule,
                space: self.id().to_string(),
                cell,
                expected: "1".into(),
                found: v,
            });
        }
        Ok(Premise::new(self.id(), cell, v))
    }

    fn value(&self, rule: &'static str, p: usize, q: usize, t: i64) -> Result<Premise, SpecialError> {
        let cell = Cell::new(p, q, t);
        Ok(Premise::new(self.id(), cell, self.lookup(rule, cell)?))
    }
}

/// Positive-twist cells with `0 < p`, `p+q < n`, already derived on the new
/// space.
struct Derived {
    id: String,
    dim: usize,
    cells: BTreeMap<Cell, Evidence>,
}

impl Derived {
    /// Premise for an earlier cell of the induction; negative twists fall in
    /// the Kodaira–Nakano zone.
    fn earlier(&self, p: usize, q: usize, t: i64) -> Result<Premise, SpecialError> {
        let cell = Cell::new(p, q, t);
        let known = t < 0 && kodaira_nakano_zone(self.dim, p, q, t).is_zero() || self.cells.contains_key(&cell);
        if !known {
            return Err(SpecialError::InvalidParameter(format!("induction reached {cell} before deriving it")));
        }
        Ok(Premise::new(self.id.clone(), cell, CohomologyValue::Zero))
    }
}

fn check_inputs(y: &SpecialCohomologyCertificate, window: Window, footprint: Window) -> Result<(), SpecialError> {
    y.validate()?;
    if !window.contains(0) {
        return Err(SpecialError::WindowMissesZero(window));
    }
    if !y.window.covers(&footprint) {
        return Err(SpecialError::Footprint { space: y.space.id.clone(), needed: footprint, available: y.window });
    }
    Ok(())
}

fn radius(window: Window) -> i64 {
    window.min.abs().max(window.max).max(1)
}

/// Fill the new table from the positive-twist induction, Kodaira–Nakano,
/// Serre duality and a caller-supplied rule for untwisted cells with
/// `p + q < n`.
fn assemble(
    space: SpaceDescriptor,
    window: Window,
    parent: &str,
    derived: &Derived,
    mut untwisted: impl FnMut(Cell, Condition) -> Result<Evidence, SpecialError>,
) -> Result<SpecialCohomologyCertificate, SpecialError> {
    let n = space.dim;
    let mut table = CohomologyTable::new(space.clone(), window);
    let mut evidence = BTreeMap::new();
    for cell in table.window_cells() {
        let Some(condition) = condition_of(n, cell) else { continue };
        let low = cell.p + cell.q < n;
        let ev = if cell.t != 0 && kodaira_nakano_zone(n, cell.p, cell.q, cell.t).is_zero() {
            Evidence::rule(condition, "kodaira-nakano", Vec::new())
        } else if low && cell.t > 0 {
            derived.cells[&cell].clone()
        } else if low {
            untwisted(cell, condition)?
        } else {
            let dual = cell.serre_dual(n);
            let value = condition.expected();
            Evidence::rule(condition, "serre-duality", vec![Premise::new(space.id.clone(), dual, value)])
        };
        table.set(cell, condition.expected())?;
        evidence.insert(cell, ev);
    }
    Ok(SpecialCohomologyCertificate { space, window, table, evidence, parent: Some(parent.to_string()) })
}

/// Certificate for a smooth member of `|O(d)|` on a space with special
/// cohomology, by induction on the twist through the restriction and
/// conormal sequences.
pub fn propagate_section(
    y: &SpecialCohomologyCertificate,
    d: u32,
    window: Window,
) -> Result<SpecialCohomologyCertificate, SpecialError> {
    if d == 0 {
        return Err(SpecialError::InvalidParameter("section degree must be positive".into()));
    }
    if y.dim() < 4 {
        return Err(SpecialError::TooSmall { dim: y.dim().saturating_sub(1) });
    }
    let di = d as i64;
    let m = radius(window);
    check_inputs(y, window, Window { min: (1 - di).min(0), max: m })?;
    let parent = Parent { cert: y };
    let x = y.space.section(format!("{}.cut{}", y.space.id, d), d)?;
    let n = x.dim;
    let mut derived = Derived { id: x.id.clone(), dim: n, cells: BTreeMap::new() };

    for t in 1..=m {
        for q in 0..n {
            for p in 1..(n - q) {
                let ev = if q == 0 {
                    let rule = "structure-sheaf-sequence";
                    Evidence::rule(Condition::A, rule, vec![parent.zero(rule, p, 0, t)?, parent.zero(rule, p + 1, 0, t - di)?])
                } else if t != di {
                    let rule = "restriction-conormal-induction";
                    let premises = vec![
                        parent.zero(rule, p, q, t)?,
                        parent.zero(rule, p + 1, q, t)?,
                        parent.zero(rule, p + 1, q, t - di)?,
                        derived.earlier(p + 1, q - 1, t - di)?,
                    ];
                    Evidence::rule(Condition::A, rule, premises)
                } else {
                    // restriction surjective by cupping, next map injective by hard Lefschetz
                    let rule = "cupping-hard-lefschetz";
                    let premises = vec![
                        parent.zero(rule, p, q, di)?,
                        parent.zero(rule, p + 1, q, di)?,
                        parent.value(rule, p + 1, q, 0)?,
                        parent.value(rule, p + 1, q - 1, 0)?,
                    ];
                    Evidence::rule(Condition::A, rule, premises)
                };
                derived.cells.insert(Cell::new(p, q, t), ev);
            }
        }
    }

    assemble(x, window, parent.id(), &derived, |cell, condition| {
        let rule = "lefschetz-restriction";
        let premise = match condition {
            Condition::C => parent.one(rule, cell.p, cell.q)?,
            _ => parent.zero(rule, cell.p, cell.q, 0)?,
        };
        Ok(Evidence::rule(condition, rule, vec![premise]))
    })
}

fn layer_premises(
    parent: &Parent<'_>,
    k: u32,
    d: u32,
    p: usize,
    q: usize,
    t: i64,
) -> Result<Vec<Premise>, SpecialError> {
    let (k, d) = (k as i64, d as i64);
    let mut premises = Vec::new();
    for j in 0..k {
        let tw = t - j * d;
        if tw == 0 && p == q && j >= 1 {
            // the connecting map hits this summand by cupping
            let rule = "cover-cupping";
            premises.push(parent.one(rule, p, p)?);
            premises.push(parent.one(rule, p - 1, p - 1)?);
        } else {
            premises.push(parent.zero("cover-pushforward-sub", p, q, tw)?);
        }
    }
    if q >= 1 {
        for j in 1..=k {
            let tw = t - j * d;
            if tw == 0 && p + 1 == q && j < k {
                // injects into the sub part by cupping
                premises.push(parent.value("cover-cupping", p, p, 0)?);
            } else {
                premises.push(parent.zero("cover-pushforward-quotient", p, q - 1, tw)?);
            }
        }
    }
    Ok(premises)
}

/// Vanishing of `H^p(X, Ω^q_{L|X}(t))` through its pushforward to the base,
/// for `t ∉ {0, kd}`, `p > 0`, `p + q < dim`. Returns the base cells used.
pub fn pushforward_layer(
    y: &SpecialCohomologyCertificate,
    k: u32,
    d: u32,
    p: usize,
    q: usize,
    t: i64,
) -> Result<Vec<Premise>, SpecialError> {
    let kd = k as i64 * d as i64;
    if t == 0 || t == kd || p == 0 || p + q >= y.dim() || k == 0 || d == 0 {
        return Err(SpecialError::InvalidParameter(format!(
            "pushforward layer vanishing needs t ∉ {{0,{kd}}}, p > 0, p+q < {}",
            y.dim()
        )));
    }
    layer_premises(&Parent { cert: y }, k, d, p, q, t)
}

/// Certificate for the `k`-cyclic cover branched along a divisor in
/// `|O(kd)|`, with the pulled-back polarization.
pub fn propagate_cyclic(
    y: &SpecialCohomologyCertificate,
    k: u32,
    d: u32,
    window: Window,
) -> Result<SpecialCohomologyCertificate, SpecialError> {
    if k == 0 || d == 0 {
        return Err(SpecialError::InvalidParameter("cyclic cover needs k >= 1 and d >= 1".into()));
    }
    if k == 1 {
        y.validate()?;
        return y.restrict(window);
    }
    let kd = k as i64 * d as i64;
    let m = radius(window);
    check_inputs(y, window, Window { min: 1 - kd, max: m })?;
    let parent = Parent { cert: y };
    let x = y.space.cyclic_cover(format!("{}.cover{}x{}", y.space.id, k, d), k, d)?;
    let n = x.dim;
    let mut derived = Derived { id: x.id.clone(), dim: n, cells: BTreeMap::new() };

    for t in 1..=m {
        for q in 0..n {
            for p in 1..(n - q) {
                let ev = if t != kd || q == 0 {
                    let rule = "cover-conormal-induction";
                    let mut premises = layer_premises(&parent, k, d, p, q, t)?;
                    if q >= 1 {
                        premises.push(derived.earlier(p + 1, q - 1, t - kd)?);
                    }
                    Evidence::rule(Condition::A, rule, premises)
                } else {
                    // both maps out of the untwisted forms are injective by cupping;
                    // the first one is onto by the dimension bound on the layer
                    let rule = "cover-cupping-dimension-count";
                    Evidence::rule(Condition::A, rule, vec![parent.value(rule, p, q - 1, 0)?])
                };
                derived.cells.insert(Cell::new(p, q, t), ev);
            }
        }
    }

    assemble(x, window, parent.id(), &derived, |cell, condition| {
        if cell.p == 0 {
            let rule = "connectedness";
            return Ok(Evidence::rule(condition, rule, vec![parent.one(rule, 0, 0)?]));
        }
        let rule = "cover-pushforward-iso";
        let premise = match condition {
            Condition::C => parent.one(rule, cell.p, cell.q)?,
            _ => parent.zero(rule, cell.p, cell.q, 0)?,
        };
        Ok(Evidence::rule(condition, rule, vec![premise]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::flenner_agreement;
    use crate::weyl::Grassmannian;
    use num_bigint::BigUint;

    fn projective(n: usize, r: i64) -> SpecialCohomologyCertificate {
        let t = CohomologyTable::from_grassmannian(Grassmannian::projective(n).unwrap(), Window::symmetric(r));
        SpecialCohomologyCertificate::certify(t).unwrap()
    }

    #[test]
    fn quadric_threefold() {
        let q3 = propagate_section(&projective(4, 10), 2, Window::symmetric(8)).unwrap();
        q3.validate().unwrap();
        assert_eq!(q3.dim(), 3);
        assert_eq!(q3.space.index, 3);
        assert_eq!(q3.space.degree, Some(BigUint::from(2u32)));
        assert!(flenner_agreement(&q3).unwrap().is_empty());
    }

    #[test]
    fn cubic_fourfold_matches_closed_form() {
        let x = propagate_section(&projective(5, 12), 3, Window::symmetric(8)).unwrap();
        assert!(flenner_agreement(&x).unwrap().is_empty());
        assert!(x.rule_histogram().contains_key("cupping-hard-lefschetz"));
    }

    #[test]
    fn iterated_sections() {
        let y = propagate_section(&projective(6, 14), 2, Window::symmetric(12)).unwrap();
        let x = propagate_section(&y, 2, Window::symmetric(6)).unwrap();
        assert_eq!(x.dim(), 4);
        assert_eq!(x.space.degree, Some(BigUint::from(4u32)));
        assert_eq!(x.parent.as_deref(), Some(y.space.id.as_str()));
        assert!(flenner_agreement(&x).unwrap().is_empty());
    }

    #[test]
    fn surface_sections_rejected() {
        assert!(matches!(
            propagate_section(&projective(3, 5), 1, Window::symmetric(2)),
            Err(SpecialError::TooSmall { dim: 2 })
        ));
    }

    #[test]
    fn footprint_checked() {
        let e = propagate_section(&projective(4, 3), 2, Window::symmetric(8)).unwrap_err();
        assert!(matches!(e, SpecialError::Footprint { .. }), "{e}");
    }

    #[test]
    fn sextic_double_solid() {
        let x = propagate_cyclic(&projective(3, 10), 2, 3, Window::symmetric(4)).unwrap();
        x.validate().unwrap();
        assert_eq!(x.space.index, 1);
        assert_eq!(x.space.degree, Some(BigUint::from(2u32)));
    }

    #[test]
    fn trivial_cover_is_identity() {
        let y = projective(4, 5);
        assert_eq!(propagate_cyclic(&y, 1, 3, y.window).unwrap(), y);
    }

    #[test]
    fn layer_vanishes_off_special_twists() {
        let y = projective(5, 12);
        for t in [-3, 1, 2, 3, 5, 7] {
            assert!(pushforward_layer(&y, 3, 2, 1, 2, t).is_ok(), "t={t}");
        }
        assert!(pushforward_layer(&y, 3, 2, 1, 2, 6).is_err());
        assert!(pushforward_layer(&y, 3, 2, 1, 2, 0).is_err());
    }

    #[test]
    fn covers_of_sections() {
        let q = propagate_section(&projective(5, 14), 2, Window::symmetric(12)).unwrap();
        let x = propagate_cyclic(&q, 2, 2, Window::symmetric(5)).unwrap();
        x.validate().unwrap();
        assert_eq!(x.space.index, 2);
    }
}
