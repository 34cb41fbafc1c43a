use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::WeylError;

/// A `GL(m)` weight. For bundles on `G(k,n)` the first `n-k` entries belong to
/// the dual quotient bundle and the last `k+1` to the tautological subbundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Self {
        Weight(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Cohomology of an irreducible homogeneous bundle: BWB puts all of it in a
/// single degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyClass {
    Zero,
    Nonzero { degree: usize, dim: BigUint },
}

/// Weyl dimension formula, evaluated exactly: the full numerator product is
/// formed before the single division by the superfactorial.
pub fn weyl_dimension(w: &Weight) -> Result<BigUint, WeylError> {
    if !w.is_dominant() {
        return Err(WeylError::NotDominant(w.0.clone()));
    }
    let m = w.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        for j in (i + 1)..m {
            num *= BigInt::from(w.0[i] - w.0[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    debug_assert!((&num % &den) == BigInt::from(0));
    let q = num / den;
    debug_assert!(!q.is_negative());
    Ok(q.to_biguint().expect("dominant weights have positive dimension"))
}

/// Borel–Weil–Bott through the dotted Weyl action.
pub fn bwb(w: &Weight) -> CohomologyClass {
    let m = w.len();
    let shifted: Vec<i64> = w
        .0
        .iter()
        .enumerate()
        .map(|(i, &x)| x + (m - 1 - i) as i64)
        .collect();
    let mut sorted = shifted.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return CohomologyClass::Zero;
    }
    let inversions = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .filter(|&(i, j)| shifted[i] < shifted[j])
        .count();
    let dominant = Weight(
        sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (m - 1 - i) as i64)
            .collect(),
    );
    let dim = weyl_dimension(&dominant).expect("sorted minus rho is dominant");
    CohomologyClass::Nonzero { degree: inversions, dim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn binomial(n: u64, k: u64) -> BigUint {
        // independent count: lattice points / stars and bars by multiplicative formula
        let mut acc = BigUint::one();
        for i in 0..k {
            acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
        }
        acc
    }

    /// Number of monomials of degree `t` in `n+1` variables, by brute-force enumeration.
    fn monomial_count(vars: usize, t: u64) -> u64 {
        fn rec(vars: usize, t: u64) -> u64 {
            if vars == 1 {
                return 1;
            }
            (0..=t).map(|a| rec(vars - 1, t - a)).sum()
        }
        rec(vars, t)
    }

    #[test]
    fn trivial_and_standard() {
        assert_eq!(weyl_dimension(&Weight::new(vec![0, 0, 0])).unwrap(), BigUint::from(1u32));
        assert_eq!(weyl_dimension(&Weight::new(vec![1, 0, 0])).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn symmetric_powers_match_monomial_count() {
        for n in 1..=5usize {
            for t in 0..=8i64 {
                let mut w = vec![0; n + 1];
                w[0] = t;
                let dim = weyl_dimension(&Weight::new(w)).unwrap();
                assert_eq!(dim, BigUint::from(monomial_count(n + 1, t as u64)), "n={n} t={t}");
                assert_eq!(dim, binomial(n as u64 + t as u64, n as u64));
            }
        }
    }

    #[test]
    fn non_dominant_rejected() {
        assert!(matches!(
            weyl_dimension(&Weight::new(vec![0, 1])),
            Err(WeylError::NotDominant(_))
        ));
    }

    #[test]
    fn singular_weight_is_zero() {
        // (0,0,1) + rho = (2,1,1)
        assert_eq!(bwb(&Weight::new(vec![0, 0, 1])), CohomologyClass::Zero);
    }

    #[test]
    fn dominant_weight_sits_in_degree_zero() {
        let w = Weight::new(vec![2, 1, 0]);
        assert_eq!(
            bwb(&w),
            CohomologyClass::Nonzero { degree: 0, dim: BigUint::from(8u32) }
        );
    }

    #[test]
    fn cotangent_of_plane_in_degree_one() {
        // the Omega^1 summand of P^2 at t=0
        assert_eq!(
            bwb(&Weight::new(vec![0, -1, 1])),
            CohomologyClass::Nonzero { degree: 1, dim: BigUint::from(1u32) }
        );
    }

    #[test]
    fn large_dimensions_do_not_overflow() {
        let w = Weight::new(vec![400, 300, 200, 100, 50, 0, 0, 0, 0, 0, 0, 0]);
        let d = weyl_dimension(&w).unwrap();
        assert!(d.bits() > 64);
    }
}
