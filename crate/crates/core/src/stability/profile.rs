use num_rational::Rational64;

use super::StabilityError;

/// Numerical data of a Fano manifold: dimension, index, degree and genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoProfile {
    pub n: usize,
    pub r: usize,
    /// Top self-intersection of the ample generator, when known.
    pub degree: Option<u64>,
    /// Only for index `n - 2`.
    pub genus: Option<u32>,
    pub assume_es: bool,
    pub b2_is_1: bool,
}

impl FanoProfile {
    pub fn new(n: usize, r: usize) -> Result<Self, StabilityError> {
        if n == 0 || r == 0 || r > n + 1 {
            return Err(StabilityError::InvalidProfile(format!("index {r} outside 1..={} for dimension {n}", n + 1)));
        }
        Ok(FanoProfile { n, r, degree: None, genus: None, assume_es: false, b2_is_1: true })
    }

    pub fn with_genus(mut self, g: u32) -> Result<Self, StabilityError> {
        if self.r + 2 != self.n {
            return Err(StabilityError::InvalidProfile(format!(
                "genus is defined for index n-2 only; dimension {} index {} has coindex {}",
                self.n,
                self.r,
                self.coindex()
            )));
        }
        match g {
            2..=10 => {}
            12 if self.n == 3 => {}
            12 => return Err(StabilityError::InvalidProfile(format!("genus 12 occurs only in dimension 3, not {}", self.n))),
            11 => return Err(StabilityError::InvalidProfile("genus 11 does not occur".into())),
            _ => return Err(StabilityError::InvalidProfile(format!("genus {g} outside 2..=10 and 12"))),
        }
        self.genus = Some(g);
        self.degree = Some(2 * g as u64 - 2);
        Ok(self)
    }

    pub fn with_degree(self, h: u64) -> Result<Self, StabilityError> {
        if h == 0 {
            return Err(StabilityError::InvalidProfile("degree must be positive".into()));
        }
        if self.r + 2 == self.n {
            if !h.is_multiple_of(2) {
                return Err(StabilityError::InvalidProfile(format!("degree {h} is odd, so no integral genus")));
            }
            return self.with_genus((h / 2 + 1) as u32);
        }
        Ok(FanoProfile { degree: Some(h), ..self })
    }

    pub fn assume_es(mut self, yes: bool) -> Self {
        self.assume_es = yes;
        self
    }

    pub fn b2_is_1(mut self, yes: bool) -> Self {
        self.b2_is_1 = yes;
        self
    }

    pub fn coindex(&self) -> usize {
        self.n + 1 - self.r
    }
}

/// Rank and first Chern class of a reflexive subsheaf of the tangent bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsheafProfile {
    pub m: usize,
    pub k: i64,
}

impl SubsheafProfile {
    pub fn new(n: usize, m: usize, k: i64) -> Result<Self, StabilityError> {
        if m == 0 || m >= n {
            return Err(StabilityError::InvalidProfile(format!("subsheaf rank {m} outside 1..{n}")));
        }
        Ok(SubsheafProfile { m, k })
    }

    pub fn slope(&self) -> Rational64 {
        Rational64::new(self.k, self.m as i64)
    }
}

/// `k / m`, the slope of a rank-`m` sheaf with `c1 = k H`.
pub fn slope(k: i64, m: usize) -> Result<Rational64, StabilityError> {
    if m == 0 {
        return Err(StabilityError::InvalidProfile("slope of a rank-0 sheaf".into()));
    }
    Ok(Rational64::new(k, m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes() {
        assert_eq!(slope(0, 5).unwrap(), Rational64::from_integer(0));
        assert_eq!(slope(3, 2).unwrap(), Rational64::new(3, 2));
        for n in 3..12 {
            assert_eq!(slope(n as i64 - 1, n).unwrap(), Rational64::from_integer(1) - Rational64::new(1, n as i64));
        }
        assert!(slope(1, 0).is_err());
    }

    #[test]
    fn genus_rules() {
        assert!(FanoProfile::new(5, 3).unwrap().with_genus(11).is_err());
        assert!(FanoProfile::new(5, 3).unwrap().with_genus(12).is_err());
        assert!(FanoProfile::new(5, 3).unwrap().with_genus(13).is_err());
        assert!(FanoProfile::new(3, 1).unwrap().with_genus(12).is_ok());
        assert!(FanoProfile::new(5, 2).unwrap().with_genus(6).is_err());
        let p = FanoProfile::new(6, 4).unwrap().with_genus(8).unwrap();
        assert_eq!(p.degree, Some(14));
        assert_eq!(FanoProfile::new(6, 4).unwrap().with_degree(14).unwrap().genus, Some(8));
        assert!(FanoProfile::new(4, 6).is_err());
        assert!(FanoProfile::new(4, 0).is_err());
        assert_eq!(FanoProfile::new(4, 2).unwrap().coindex(), 3);
    }
}
