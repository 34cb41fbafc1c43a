use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use super::{bwb, CohomologyClass, Partition, Weight, WeylError};

/// `G(k,n)`: `k`-planes in `P^n`, i.e. `(k+1)`-dimensional subspaces of
/// `C^{n+1}`. Projective space is `G(0,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grassmannian {
    pub k: usize,
    pub n: usize,
}

impl Grassmannian {
    pub fn new(k: usize, n: usize) -> Result<Self, WeylError> {
        if k >= n {
            return Err(WeylError::OutOfRange { what: "k", value: k as i64, bound: format!("0 <= k < n = {n}") });
        }
        Ok(Grassmannian { k, n })
    }

    pub fn projective(n: usize) -> Result<Self, WeylError> {
        Self::new(0, n)
    }

    pub fn sub_rank(&self) -> usize {
        self.k + 1
    }

    pub fn quotient_rank(&self) -> usize {
        self.n - self.k
    }

    pub fn dim(&self) -> usize {
        self.sub_rank() * self.quotient_rank()
    }

    /// `-K = O(n+1)`.
    pub fn index(&self) -> usize {
        self.n + 1
    }

    /// Plücker degree: standard Young tableaux of the `(k+1) × (n-k)` rectangle,
    /// by the hook length formula.
    pub fn degree(&self) -> BigUint {
        let (a, b) = (self.sub_rank(), self.quotient_rank());
        let mut num = BigUint::one();
        for i in 1..=(a * b) {
            num *= BigUint::from(i);
        }
        let mut den = BigUint::one();
        for i in 0..a {
            for j in 0..b {
                den *= BigUint::from((a - i) + (b - j) - 1);
            }
        }
        num / den
    }
}

impl fmt::Display for Grassmannian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "P({})", self.n)
        } else {
            write!(f, "G({},{})", self.k, self.n)
        }
    }
}

/// Irreducible summands of `Ω^q(t)` on `G(k,n)`, one weight per partition `λ`
/// of `q` fitting in the `(k+1) × (n-k)` box, from
/// `Λ^q(S ⊗ Q^∨) = ⊕ Σ^λ S ⊗ Σ^{λ'} Q^∨` and `O(1) = det S^∨`.
///
/// Weight layout: `(-reverse(pad(λ', n-k)), pad(λ, k+1) - t)`.
pub fn omega_decompose(k: usize, n: usize, q: usize, t: i64) -> Result<Vec<Weight>, WeylError> {
    let g = Grassmannian::new(k, n)?;
    if q > g.dim() {
        return Ok(Vec::new());
    }
    let weights = Partition::in_box(q as u32, g.sub_rank(), g.quotient_rank() as u32)
        .into_iter()
        .map(|lambda| {
            let mut entries: Vec<i64> = lambda
                .conjugate()
                .padded(g.quotient_rank())
                .into_iter()
                .rev()
                .map(|x| -x)
                .collect();
            entries.extend(lambda.padded(g.sub_rank()).into_iter().map(|x| x - t));
            Weight::new(entries)
        })
        .collect();
    Ok(weights)
}

/// `p ↦ h^p(G(k,n), Ω^q(t))`; absent keys are zero.
pub fn grassmann_cohomology(k: usize, n: usize, q: usize, t: i64) -> Result<BTreeMap<usize, BigUint>, WeylError> {
    let mut out: BTreeMap<usize, BigUint> = BTreeMap::new();
    for w in omega_decompose(k, n, q, t)? {
        if let CohomologyClass::Nonzero { degree, dim } = bwb(&w) {
            *out.entry(degree).or_default() += dim;
        }
    }
    Ok(out)
}

/// Closed-form nonvanishing criterion for `H^p(G(1,n), Ω^q(t))`.
///
/// The negative-twist band is the Serre dual of the positive one:
/// `n-2-p <= t <= p-2n+1` with `q = 2p+t-2n+3`.
pub fn line_grassmannian_nonvanishing(n: usize, p: usize, q: usize, t: i64) -> Result<bool, WeylError> {
    if n < 2 {
        return Err(WeylError::OutOfRange { what: "n", value: n as i64, bound: "n >= 2".into() });
    }
    let top = 2 * (n as i64 - 1);
    let (n, p, q) = (n as i64, p as i64, q as i64);
    for (what, v) in [("p", p), ("q", q)] {
        if v > top {
            return Err(WeylError::OutOfRange { what, value: v, bound: format!("0 <= {what} <= {top}") });
        }
    }
    let interior = 0 < p && p < top;
    let holds = (t == 0 && p == q)
        || (p == 0 && t >= (q + 1).min(div_ceil(q, 2) + 2))
        || (p == top && t <= (-2 * n + q + 1).max(q.div_euclid(2) - n - 1))
        || (interior && p < t && t <= n - p && q == 2 * p + t - 1)
        || (interior && n - 2 - p <= t && t <= p - 2 * n + 1 && q == 2 * p + t - 2 * n + 3);
    Ok(holds)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(entries: &[(usize, u32)]) -> BTreeMap<usize, BigUint> {
        entries.iter().map(|&(p, d)| (p, BigUint::from(d))).collect()
    }

    #[test]
    fn projective_forms_are_irreducible() {
        for n in 1..=6 {
            for q in 0..=n {
                assert_eq!(omega_decompose(0, n, q, 3).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn two_forms_on_g14_have_two_summands() {
        assert_eq!(omega_decompose(1, 4, 2, 0).unwrap().len(), 2);
    }

    #[test]
    fn above_top_degree_is_empty() {
        assert!(omega_decompose(1, 3, 5, 0).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_k_rejected() {
        assert!(omega_decompose(3, 3, 0, 0).is_err());
    }

    #[test]
    fn middle_hodge_number_of_g15() {
        assert_eq!(grassmann_cohomology(1, 5, 2, 0).unwrap(), map(&[(2, 2)]));
    }

    #[test]
    fn g14_three_forms_twisted_by_two() {
        let h = grassmann_cohomology(1, 4, 3, 2).unwrap();
        assert!(!h.contains_key(&0));
        // H^1 survives, consistent with the positive-twist band of the closed form
        assert_eq!(h, map(&[(1, 5)]));
    }

    #[test]
    fn plane_cotangent() {
        assert_eq!(grassmann_cohomology(0, 2, 1, 0).unwrap(), map(&[(1, 1)]));
    }

    #[test]
    fn degrees_of_small_grassmannians() {
        assert_eq!(Grassmannian::new(1, 3).unwrap().degree(), BigUint::from(2u32));
        assert_eq!(Grassmannian::new(1, 4).unwrap().degree(), BigUint::from(5u32));
        assert_eq!(Grassmannian::new(1, 5).unwrap().degree(), BigUint::from(14u32));
        assert_eq!(Grassmannian::projective(7).unwrap().degree(), BigUint::from(1u32));
    }

    #[test]
    fn closed_form_examples() {
        assert!(!line_grassmannian_nonvanishing(5, 1, 4, 2).unwrap());
        assert!(!line_grassmannian_nonvanishing(5, 2, 4, 1).unwrap());
        assert!(!line_grassmannian_nonvanishing(5, 2, 3, 1).unwrap());
        assert!(!line_grassmannian_nonvanishing(5, 3, 3, 1).unwrap());
        assert!(line_grassmannian_nonvanishing(5, 1, 4, 3).unwrap());
        for n in 2..=6 {
            for p in 0..=2 * (n - 1) {
                assert!(line_grassmannian_nonvanishing(n, p, p, 0).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_bwb_on_small_cases() {
        for n in 2..=4 {
            let top = 2 * (n - 1);
            for q in 0..=top {
                for t in -6..=6 {
                    let h = grassmann_cohomology(1, n, q, t).unwrap();
                    for p in 0..=top {
                        assert_eq!(
                            line_grassmannian_nonvanishing(n, p, q, t).unwrap(),
                            h.contains_key(&p),
                            "n={n} p={p} q={q} t={t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_range_errors() {
        assert!(line_grassmannian_nonvanishing(1, 0, 0, 0).is_err());
        assert!(line_grassmannian_nonvanishing(3, 5, 0, 0).is_err());
    }
}
