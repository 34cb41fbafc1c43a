use std::collections::BTreeMap;

use num_integer::Integer;

use super::verdict::{Backing, Outcome, Reasons, StabilityVerdict};
use super::StabilityError;
use crate::special::{flenner_predicate, FlennerAnswer};

/// Answers `H^0(Ω^q(t)) = 0` questions, returning a citation when the
/// vanishing is known.
pub trait VanishingOracle {
    fn h0_vanishing(&self, q: usize, t: i64) -> Option<String>;
}

impl<F: Fn(usize, i64) -> Option<String>> VanishingOracle for F {
    fn h0_vanishing(&self, q: usize, t: i64) -> Option<String> {
        self(q, t)
    }
}

/// Closed-form vanishing on a smooth complete intersection of dimension `n`.
#[derive(Clone, Copy, Debug)]
pub struct FlennerOracle {
    pub n: usize,
}

impl VanishingOracle for FlennerOracle {
    fn h0_vanishing(&self, q: usize, t: i64) -> Option<String> {
        match flenner_predicate(self.n, 0, q, t) {
            Ok(FlennerAnswer::Zero(clause)) => Some(format!("flenner {clause:?}")),
            _ => None,
        }
    }
}

/// A finite list of known vanishing cells, each with its citation.
#[derive(Clone, Debug, Default)]
pub struct CellOracle {
    pub cells: BTreeMap<(usize, i64), String>,
}

impl CellOracle {
    pub fn insert(&mut self, q: usize, t: i64, citation: impl Into<String>) {
        self.cells.insert((q, t), citation.into());
    }
}

impl VanishingOracle for CellOracle {
    fn h0_vanishing(&self, q: usize, t: i64) -> Option<String> {
        self.cells.get(&(q, t)).cloned()
    }
}

/// Stability of the tangent bundle of a Fano `n`-fold of index `r` with
/// Picard number one from vanishing of `H^0(Ω^q(t))` for
/// `t <= floor(q r / n)`. Twists below zero fall to Kodaira–Nakano; the
/// oracle is consulted from zero up.
pub fn h0_threshold_stability(oracle: &dyn VanishingOracle, n: usize, r: usize) -> Result<StabilityVerdict, StabilityError> {
    if n == 0 || r == 0 || r > n + 1 {
        return Err(StabilityError::InvalidProfile(format!("index {r} outside 1..={} for dimension {n}", n + 1)));
    }
    if r >= n {
        let what = if r == n { "a quadric" } else { "projective space" };
        return Ok(StabilityVerdict::not_applicable(format!("index {r} in dimension {n}: X is {what}")));
    }
    let mut reasons = Reasons::new();
    let mut cells = Vec::new();
    let mut boundary = Vec::new();
    let mut binding = Vec::new();
    for q in 1..n {
        let qr = (q * r) as i64;
        let (top, rem) = qr.div_rem(&(n as i64));
        cells.push(reasons.rule(format!("H0(Ω^{q}(t)) = 0 for t < 0"), "kodaira-nakano", &[]));
        for t in 0..=top {
            match oracle.h0_vanishing(q, t) {
                Some(cite) => cells.push(reasons.push(format!("H0(Ω^{q}({t})) = 0"), cite, Backing::Rule, &[])),
                None if rem == 0 && t == top => boundary.push((q, t)),
                None => binding.push((q, t)),
            }
        }
    }
    if let Some(&(q, t)) = binding.first() {
        let id = reasons.push(format!("H0(Ω^{q}({t})) not known to vanish (binding cell q={q}, t={t})"), "oracle", Backing::Open, &[]);
        reasons.rule("stability undecided", "slope-threshold", &[id]);
        return Ok(reasons.finish(Outcome::Unknown));
    }
    if !boundary.is_empty() {
        let mut open = Vec::new();
        for (q, t) in &boundary {
            open.push(reasons.push(format!("H0(Ω^{q}({t})) with t = q r / n not known to vanish"), "oracle", Backing::Open, &[]));
        }
        cells.extend(open);
        reasons.rule("T_X semistable: no subsheaf of larger slope", "slope-threshold (non-strict)", &cells);
        return Ok(reasons.finish(Outcome::Semistable));
    }
    reasons.rule(format!("T_X stable: H0(Ω^q(t)) = 0 for all 1 <= q <= {} and t <= q·{r}/{n}", n - 1), "slope-threshold", &cells);
    Ok(reasons.finish(Outcome::Stable))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complete_intersections_are_stable() {
        for n in 3..9 {
            for r in 1..n {
                let v = h0_threshold_stability(&FlennerOracle { n }, n, r).unwrap();
                assert_eq!(v.outcome, Outcome::Stable, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn quadric_and_projective_space_are_out_of_scope() {
        assert_eq!(h0_threshold_stability(&FlennerOracle { n: 4 }, 4, 4).unwrap().outcome, Outcome::NotApplicable);
        assert_eq!(h0_threshold_stability(&FlennerOracle { n: 4 }, 4, 5).unwrap().outcome, Outcome::NotApplicable);
    }

    #[test]
    fn injected_section_breaks_index_one() {
        let flenner = FlennerOracle { n: 5 };
        let oracle = |q: usize, t: i64| if (q, t) == (1, 0) { None } else { flenner.h0_vanishing(q, t) };
        let v = h0_threshold_stability(&oracle, 5, 1).unwrap();
        assert_eq!(v.outcome, Outcome::Unknown);
        assert!(v.log().contains("q=1, t=0"));
    }

    #[test]
    fn boundary_cell_gives_semistable() {
        // n = 4, r = 2: q = 2 has q r / n = 1 exactly.
        let flenner = FlennerOracle { n: 4 };
        let oracle = |q: usize, t: i64| if (q, t) == (2, 1) { None } else { flenner.h0_vanishing(q, t) };
        assert_eq!(h0_threshold_stability(&oracle, 4, 2).unwrap().outcome, Outcome::Semistable);
    }

    proptest! {
        #[test]
        fn monotone_in_the_oracle(n in 2usize..8, r in 1usize..8, small in proptest::collection::btree_set((1usize..8, 0i64..8), 0..30), extra in proptest::collection::btree_set((1usize..8, 0i64..8), 0..30)) {
            prop_assume!(r < n);
            let mut a = CellOracle::default();
            for (q, t) in &small {
                a.insert(*q, *t, "given");
            }
            let mut b = a.clone();
            for (q, t) in &extra {
                b.insert(*q, *t, "given");
            }
            let va = h0_threshold_stability(&a, n, r).unwrap();
            let vb = h0_threshold_stability(&b, n, r).unwrap();
            if va.outcome == Outcome::Stable {
                prop_assert_eq!(vb.outcome, Outcome::Stable);
            }
            if va.outcome == Outcome::Semistable {
                prop_assert!(vb.outcome == Outcome::Stable || vb.outcome == Outcome::Semistable);
            }
        }
    }
}
