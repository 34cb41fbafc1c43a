use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CohomologyTable, TableError};

/// `χ(Ω^q_X(t))` for the complete intersection `X` of multidegree `degrees`
/// in the ambient space of `ambient`, through the restriction and conormal
/// sequences. Every ambient column the recursion touches must be fully known.
pub fn euler_recursion(ambient: &CohomologyTable, degrees: &[u32], q: i64, t: i64) -> Result<BigInt, TableError> {
    let mut memo = HashMap::new();
    chi(ambient, degrees, degrees.len(), q, t, &mut memo)
}

type Memo = HashMap<(usize, i64, i64), BigInt>;

/// `χ` on the intersection of the first `level` divisors.
fn chi(ambient: &CohomologyTable, degrees: &[u32], level: usize, q: i64, t: i64, memo: &mut Memo) -> Result<BigInt, TableError> {
    if q < 0 {
        return Ok(BigInt::zero());
    }
    if let Some(v) = memo.get(&(level, q, t)) {
        return Ok(v.clone());
    }
    let value = if level == 0 {
        if q as usize > ambient.dim() {
            BigInt::zero()
        } else {
            ambient.euler_characteristic(q as usize, t).ok_or_else(|| TableError::FootprintUnknown {
                space: ambient.space.id.clone(),
                q: q as usize,
                t,
            })?
        }
    } else {
        let d = degrees[level - 1] as i64;
        let relative = chi(ambient, degrees, level - 1, q, t, memo)? - chi(ambient, degrees, level - 1, q, t - d, memo)?;
        relative - chi(ambient, degrees, level, q - 1, t - d, memo)?
    };
    memo.insert((level, q, t), value.clone());
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::Window;
    use crate::weyl::Grassmannian;

    fn p3() -> CohomologyTable {
        CohomologyTable::from_grassmannian(Grassmannian::projective(3).unwrap(), Window::symmetric(12))
    }

    #[test]
    fn cubic_surface_structure_sheaf() {
        assert_eq!(euler_recursion(&p3(), &[3], 0, 0).unwrap(), BigInt::from(1));
    }

    #[test]
    fn quadric_surface_one_forms() {
        assert_eq!(euler_recursion(&p3(), &[2], 1, 0).unwrap(), BigInt::from(-2));
    }

    #[test]
    fn empty_multidegree_is_ambient() {
        let t = p3();
        for q in 0..=3 {
            for tw in -3..=3 {
                assert_eq!(euler_recursion(&t, &[], q, tw).unwrap(), t.euler_characteristic(q as usize, tw).unwrap());
            }
        }
    }

    #[test]
    fn permutation_invariant() {
        let p5 = CohomologyTable::from_grassmannian(Grassmannian::projective(5).unwrap(), Window::symmetric(14));
        for q in 0..=3 {
            let a = euler_recursion(&p5, &[2, 3], q, 1).unwrap();
            let b = euler_recursion(&p5, &[3, 2], q, 1).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn footprint_outside_window() {
        let small = CohomologyTable::from_grassmannian(Grassmannian::projective(3).unwrap(), Window::symmetric(1));
        assert!(matches!(euler_recursion(&small, &[4], 0, 0), Err(TableError::FootprintUnknown { .. })));
    }
}
