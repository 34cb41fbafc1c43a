use num_integer::Integer;
use num_rational::Rational64;

use super::verdict::{Backing, Outcome, Reasons, StabilityVerdict};
use super::StabilityError;
use crate::chase::{cupping_rule, CuppingContext, MapProperty, Registry};
use crate::special::{propagate_cyclic, propagate_section, SpecialCohomologyCertificate};
use crate::tables::{Cell, SpaceDescriptor};

/// One exact comparison `target < vanishing` for a form degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdRow {
    pub q: usize,
    /// Twists up to this bound must carry no sections on `X`.
    pub target: Rational64,
    /// Sections are known to vanish strictly below this bound.
    pub vanishing: Rational64,
}

impl ThresholdRow {
    pub fn holds(&self) -> bool {
        self.target < self.vanishing
    }

    /// Largest integer twist that has to be discharged.
    pub fn last_twist(&self) -> i64 {
        self.target.numer().div_floor(self.target.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThresholdCase {
    /// `X` is of general type and Kodaira–Nakano settles it.
    KodairaNakano,
    /// A boundary case outside the theorem, with its name.
    Excluded(String),
    Checked(Vec<ThresholdRow>),
}

impl ThresholdCase {
    pub fn all_hold(&self) -> bool {
        match self {
            ThresholdCase::Checked(rows) => rows.iter().all(ThresholdRow::holds),
            _ => false,
        }
    }
}

/// Guards and inequalities for a smooth member of `|O(d)|` of dimension `n`
/// in a space with `-K = O(s)`.
pub fn hypersurface_thresholds(n: usize, s: i64, d: u32) -> Result<ThresholdCase, StabilityError> {
    if n < 3 || d == 0 {
        return Err(StabilityError::InvalidProfile(format!("hypersurface needs n >= 3 and d >= 1, got n={n} d={d}")));
    }
    let (ni, di) = (n as i64, d as i64);
    if s < di {
        return Ok(ThresholdCase::KodairaNakano);
    }
    if s > ni + 2 {
        return Ok(ThresholdCase::Excluded(format!("index {s} exceeds dim Y + 1 = {}", ni + 2)));
    }
    if di == 1 && s == ni + 2 {
        return Ok(ThresholdCase::Excluded(format!("(s,d) = (n+2,1): hyperplane in P^{}", n + 1)));
    }
    if di == 1 && s == ni + 1 {
        return Ok(ThresholdCase::Excluded(format!("(s,d) = (n+1,1): hyperplane section of Q^{}", n + 1)));
    }
    let rows = (1..n)
        .map(|q| {
            let qi = q as i64;
            ThresholdRow { q, target: Rational64::new(qi * (s - di), ni), vanishing: Rational64::new(qi * s, ni + 1) }
        })
        .collect();
    Ok(ThresholdCase::Checked(rows))
}

/// Guards and inequalities for a `k`-cyclic cover of a `dim`-fold with
/// `-K = O(s)`, branched along a divisor in `|O(k d)|`.
pub fn cyclic_thresholds(dim: usize, s: i64, k: u32, d: u32) -> Result<ThresholdCase, StabilityError> {
    if dim < 3 || d == 0 {
        return Err(StabilityError::InvalidProfile(format!("cyclic cover needs dim >= 3 and d >= 1, got dim={dim} d={d}")));
    }
    let (ni, ki, di) = (dim as i64, k as i64, d as i64);
    if k < 2 {
        return Ok(ThresholdCase::Excluded(format!("k = {k}: not a proper cover")));
    }
    if s > ni + 1 {
        return Ok(ThresholdCase::Excluded(format!("index {s} exceeds dim Y + 1 = {}", ni + 1)));
    }
    if s < (ki - 1) * di {
        return Ok(ThresholdCase::Excluded(format!("s = {s} below (k-1)d = {}", (ki - 1) * di)));
    }
    if s == ni + 1 && k == 2 && d == 1 {
        return Ok(ThresholdCase::Excluded(format!("(s,k,d) = (dim Y+1,2,1): double cover of P^{dim} is a quadric")));
    }
    let rows = (1..dim)
        .map(|q| {
            let qi = q as i64;
            let first = Rational64::new(qi * s, ni);
            let second = Rational64::new((qi - 1) * s, ni) + Rational64::from_integer(di);
            ThresholdRow { q, target: Rational64::new(qi * (s - (ki - 1) * di), ni), vanishing: first.min(second) }
        })
        .collect();
    Ok(ThresholdCase::Checked(rows))
}

fn semistable_ambient(reasons: &mut Reasons, omega: &StabilityVerdict, id: &str) -> Option<usize> {
    if !matches!(omega.outcome, Outcome::Stable | Outcome::Semistable) {
        return None;
    }
    let from = reasons.absorb_verdict(omega);
    Some(reasons.rule(format!("Ω of {id} is semistable"), "duality", &from.into_iter().collect::<Vec<_>>()))
}

fn arithmetic_step(reasons: &mut Reasons, row: &ThresholdRow) -> usize {
    reasons.rule(
        format!("q={}: {} < {}", row.q, row.target, row.vanishing),
        "exact-arithmetic",
        &[],
    )
}

fn cell_zero(reasons: &mut Reasons, cert: &SpecialCohomologyCertificate, cell: Cell) -> Option<usize> {
    cert.get(cell).is_zero().then(|| {
        reasons.rule(
            format!("H{}({}, Ω^{}({})) = 0", cell.p, cert.space.id, cell.q, cell.t),
            format!("certificate {}", cert.space.id),
            &[],
        )
    })
}

/// Injectivity of `H^1(Ω^{q-1}_X) → H^1(Ω^q_{Y|X}(d))` from the cupping
/// chain and Lefschetz restriction.
fn cupping_injective(reasons: &mut Reasons, ambient: &SpaceDescriptor, d: u32, q: usize) -> Result<usize, StabilityError> {
    let mut reg = Registry::new();
    reg.declare(SpaceDescriptor::abstract_space("Y", ambient.dim, ambient.index))?;
    reg.mark_special("Y")?;
    reg.section("X", "Y", d)?;
    let q = q as i64;
    let chain = cupping_rule(&reg, &CuppingContext::Section { ambient: "Y".into(), section: "X".into(), p: 2, q })?;
    let restriction = cupping_rule(&reg, &CuppingContext::Restriction { ambient: "Y".into(), section: "X".into(), p: 1, q: q - 1 })?;
    if !chain.property.implies(MapProperty::Injective) || restriction.property != MapProperty::Bijective {
        return Err(StabilityError::Rule(format!("cupping chain for q={q} is only {}", chain.property.name())));
    }
    let c = reasons.rule(chain.claim().to_string(), chain.justification, &[]);
    let r = reasons.rule(restriction.claim().to_string(), restriction.justification, &[]);
    Ok(reasons.rule(
        format!("H1(Ω^{}_X) → H1(Ω^{q}_(Y|X)({d})) injective", q - 1),
        "composite-tail-injective",
        &[c, r],
    ))
}

/// Stability of `Ω_X` for a smooth member `X` of `|O(d)|` on a space `Y`
/// with special cohomology, given semistability of `Ω_Y`.
pub fn hypersurface_stability(
    ambient: &SpecialCohomologyCertificate,
    d: u32,
    ambient_omega: &StabilityVerdict,
) -> Result<StabilityVerdict, StabilityError> {
    let dim_y = ambient.dim();
    if dim_y < 4 {
        return Ok(StabilityVerdict::not_applicable(format!("X has dimension {} < 3", dim_y.saturating_sub(1))));
    }
    let n = dim_y - 1;
    let s = ambient.space.index;
    let y = ambient.space.id.clone();
    let rows = match hypersurface_thresholds(n, s, d)? {
        ThresholdCase::Excluded(why) => return Ok(StabilityVerdict::not_applicable(why)),
        ThresholdCase::KodairaNakano => {
            let mut reasons = Reasons::new();
            let kn = reasons.rule(format!("K_X = O({}) is ample, H0(Ω^q_X(t)) = 0 for t <= 0", d as i64 - s), "kodaira-nakano", &[]);
            reasons.rule(format!("Ω_X of the degree-{d} divisor in {y} is stable"), "slope-threshold", &[kn]);
            return Ok(reasons.finish(Outcome::Stable));
        }
        ThresholdCase::Checked(rows) => rows,
    };
    let mut reasons = Reasons::new();
    let Some(semi) = semistable_ambient(&mut reasons, ambient_omega, &y) else {
        return Ok(StabilityVerdict::unknown(format!("semistability of Ω on {y} is not established")));
    };
    reasons.depend(format!("certificate:{y}"));
    let x_cert = propagate_section(ambient, d, ambient.window)?;
    let x = x_cert.space.id.clone();
    reasons.depend(format!("certificate:{x}"));
    let mut cells = Vec::new();
    for row in &rows {
        let arith = arithmetic_step(&mut reasons, row);
        if !row.holds() {
            reasons.push(format!("q={}: threshold inequality fails", row.q), "exact-arithmetic", Backing::Open, &[arith]);
            return Ok(reasons.finish(Outcome::Unknown));
        }
        let q = row.q;
        let maru = reasons.rule(
            format!("H0(Ω^{q}_{y}(t)) = 0 for t < {}", row.vanishing),
            "maruyama-wedge-semistability",
            &[semi, arith],
        );
        cells.push(reasons.rule(format!("H0(Ω^{q}_{x}(t)) = 0 for t < 0"), "kodaira-nakano", &[]));
        for t in 0..=row.last_twist() {
            let shift = t - d as i64;
            let Some(a) = cell_zero(&mut reasons, ambient, Cell::new(1, q, shift)) else {
                reasons.push(format!("H1({y}, Ω^{q}({shift})) not zero"), "certificate", Backing::Open, &[]);
                return Ok(reasons.finish(Outcome::Unknown));
            };
            let b = match cell_zero(&mut reasons, &x_cert, Cell::new(1, q - 1, shift)) {
                Some(b) => b,
                None if shift == 0 => cupping_injective(&mut reasons, &ambient.space, d, q)?,
                None => {
                    reasons.push(format!("H1({x}, Ω^{}({shift})) not zero", q - 1), "certificate", Backing::Open, &[]);
                    return Ok(reasons.finish(Outcome::Unknown));
                }
            };
            cells.push(reasons.rule(format!("H0(Ω^{q}_{x}({t})) = 0"), "restriction and conormal sequences", &[maru, a, b]));
        }
    }
    reasons.rule(format!("Ω_{x} and T_{x} are stable"), "slope-threshold", &cells);
    Ok(reasons.finish(Outcome::Stable))
}

/// Stability of `Ω_X` for the `k`-cyclic cover of a space with special
/// cohomology branched along a divisor in `|O(k d)|`, given semistability of
/// `Ω` on the base.
pub fn cyclic_stability(
    base: &SpecialCohomologyCertificate,
    k: u32,
    d: u32,
    base_omega: &StabilityVerdict,
) -> Result<StabilityVerdict, StabilityError> {
    let dim = base.dim();
    let s = base.space.index;
    let y = base.space.id.clone();
    let rows = match cyclic_thresholds(dim, s, k, d)? {
        ThresholdCase::Excluded(why) => return Ok(StabilityVerdict::not_applicable(why)),
        ThresholdCase::KodairaNakano => unreachable!("cyclic guards have no general-type branch"),
        ThresholdCase::Checked(rows) => rows,
    };
    let mut reasons = Reasons::new();
    let Some(semi) = semistable_ambient(&mut reasons, base_omega, &y) else {
        return Ok(StabilityVerdict::unknown(format!("semistability of Ω on {y} is not established")));
    };
    reasons.depend(format!("certificate:{y}"));
    let x_cert = propagate_cyclic(base, k, d, base.window)?;
    let x = x_cert.space.id.clone();
    reasons.depend(format!("certificate:{x}"));
    let kd = k as i64 * d as i64;
    let mut cells = Vec::new();
    for row in &rows {
        let arith = arithmetic_step(&mut reasons, row);
        if !row.holds() {
            reasons.push(format!("q={}: threshold inequality fails", row.q), "exact-arithmetic", Backing::Open, &[arith]);
            return Ok(reasons.finish(Outcome::Unknown));
        }
        let q = row.q;
        if !x_cert.get(Cell::new(1, q - 1, 0)).is_zero() && Rational64::from_integer(kd) > row.target {
            reasons.rule(
                format!("q={q}: the cupping twist {kd} lies above {}", row.target),
                "exact-arithmetic",
                &[],
            );
        }
        let maru = reasons.rule(
            format!("H0(π_*Ω^{q}_(L|{x})(t)) = 0 for t < {}", row.vanishing),
            "maruyama-wedge-semistability, pushforward sequence",
            &[semi, arith],
        );
        cells.push(reasons.rule(format!("H0(Ω^{q}_{x}(t)) = 0 for t < 0"), "kodaira-nakano", &[]));
        for t in 0..=row.last_twist() {
            let Some(b) = cell_zero(&mut reasons, &x_cert, Cell::new(1, q - 1, t - kd)) else {
                reasons.push(format!("H1({x}, Ω^{}({})) not zero", q - 1, t - kd), "certificate", Backing::Open, &[]);
                return Ok(reasons.finish(Outcome::Unknown));
            };
            cells.push(reasons.rule(format!("H0(Ω^{q}_{x}({t})) = 0"), "cyclic conormal sequence", &[maru, b]));
        }
    }
    reasons.rule(format!("Ω_{x} and T_{x} are stable"), "slope-threshold", &cells);
    Ok(reasons.finish(Outcome::Stable))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::SpecialCohomologyCertificate;
    use crate::tables::{CohomologyTable, Window};
    use crate::weyl::Grassmannian;

    fn projective(n: usize) -> SpecialCohomologyCertificate {
        let table = CohomologyTable::from_grassmannian(Grassmannian::projective(n).unwrap(), Window::symmetric(n as i64 + 3));
        SpecialCohomologyCertificate::certify(table).unwrap()
    }

    fn homogeneous() -> StabilityVerdict {
        let mut r = Reasons::new();
        r.push("T stable", "homogeneous", Backing::Axiom, &[]);
        r.finish(Outcome::Stable)
    }

    #[test]
    fn cubic_fourfold() {
        let v = hypersurface_stability(&projective(5), 3, &homogeneous()).unwrap();
        assert_eq!(v.outcome, Outcome::Stable, "{v}");
        assert!(v.is_backed());
    }

    #[test]
    fn hyperplanes_are_excluded() {
        assert!(matches!(hypersurface_thresholds(4, 6, 1).unwrap(), ThresholdCase::Excluded(_)));
        assert!(matches!(hypersurface_thresholds(4, 5, 1).unwrap(), ThresholdCase::Excluded(_)));
        assert_eq!(hypersurface_stability(&projective(5), 1, &homogeneous()).unwrap().outcome, Outcome::NotApplicable);
    }

    #[test]
    fn general_type_goes_to_kodaira_nakano() {
        assert_eq!(hypersurface_thresholds(4, 6, 7).unwrap(), ThresholdCase::KodairaNakano);
        let v = hypersurface_stability(&projective(5), 7, &homogeneous()).unwrap();
        assert_eq!(v.outcome, Outcome::Stable);
        assert!(v.log().contains("kodaira-nakano"));
    }

    #[test]
    fn cubic_threefold_needs_the_cupping_boundary() {
        let cubic4 = propagate_section(&projective(5), 3, Window::symmetric(8)).unwrap();
        let omega = hypersurface_stability(&projective(5), 3, &homogeneous()).unwrap();
        let v = hypersurface_stability(&cubic4, 1, &omega).unwrap();
        assert_eq!(v.outcome, Outcome::Stable, "{v}");
        assert!(v.log().contains("composite-tail-injective"));
    }

    #[test]
    fn quartic_double_solid() {
        assert!(cyclic_thresholds(3, 4, 2, 2).unwrap().all_hold());
        let v = cyclic_stability(&projective(3), 2, 2, &homogeneous()).unwrap();
        assert_eq!(v.outcome, Outcome::Stable, "{v}");
    }

    #[test]
    fn double_quadric_is_excluded() {
        assert!(matches!(cyclic_thresholds(4, 5, 2, 1).unwrap(), ThresholdCase::Excluded(_)));
        assert_eq!(cyclic_stability(&projective(4), 2, 1, &homogeneous()).unwrap().outcome, Outcome::NotApplicable);
    }

    #[test]
    fn unknown_ambient_stability_propagates() {
        let v = hypersurface_stability(&projective(5), 3, &StabilityVerdict::unknown("no idea")).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
    }
}
