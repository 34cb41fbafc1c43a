use std::fmt;

use super::expr::{Group, SheafExpr};
use super::registry::Registry;
use super::ChaseError;

/// The short exact sequences a chase may instantiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SesRule {
    /// `0 → Ω^q_Y(t) → Ω^q_Y(t+d) → Ω^q_{Y|X}(t+d) → 0` on the ambient.
    Restriction,
    /// `0 → Ω^q_X(t) → Ω^{q+1}_{Y|X}(t+d) → Ω^{q+1}_X(t+d) → 0` on the divisor.
    Conormal,
    /// The pushforward of the relative cotangent sequence of a cyclic cover.
    CyclicPushforward,
    /// `0 → Ω^{q-1}_X(t) → Ω^q_{L|X}(t+kd) → Ω^q_X(t+kd) → 0` on the cover.
    CyclicConormal,
}

impl SesRule {
    pub fn name(self) -> &'static str {
        match self {
            SesRule::Restriction => "restriction",
            SesRule::Conormal => "conormal",
            SesRule::CyclicPushforward => "cyclic-pushforward",
            SesRule::CyclicConormal => "cyclic-conormal",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ChaseError> {
        match s {
            "restriction" => Ok(SesRule::Restriction),
            "conormal" => Ok(SesRule::Conormal),
            "cyclic-pushforward" => Ok(SesRule::CyclicPushforward),
            "cyclic-conormal" => Ok(SesRule::CyclicConormal),
            _ => Err(ChaseError::Syntax(format!("unknown sequence rule `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ses {
    pub rule: SesRule,
    pub left: SheafExpr,
    pub middle: SheafExpr,
    pub right: SheafExpr,
}

impl Ses {
    /// Build and check the index bookkeeping of `rule`.
    pub fn new(rule: SesRule, left: SheafExpr, middle: SheafExpr, right: SheafExpr, reg: &Registry) -> Result<Self, ChaseError> {
        let ses = Ses { rule, left: left.canonical(), middle: middle.canonical(), right: right.canonical() };
        for e in [&ses.left, &ses.middle, &ses.right] {
            reg.validate(e)?;
        }
        let expected = ses.expected(reg).ok_or_else(|| ses.mismatch())?;
        if expected != ses {
            return Err(ses.mismatch());
        }
        Ok(ses)
    }

    fn mismatch(&self) -> ChaseError {
        ChaseError::Bookkeeping(format!("{self} does not match the shape of the {} sequence", self.rule.name()))
    }

    /// The sequence of this rule determined by the middle term.
    fn expected(&self, reg: &Registry) -> Option<Ses> {
        let build = |l, m, r| Ses { rule: self.rule, left: l, middle: m, right: r };
        match (self.rule, &self.middle) {
            (SesRule::Restriction, SheafExpr::Omega { space: y, q, t }) => {
                let SheafExpr::Restricted { section: x, .. } = &self.right else { return None };
                let (parent, d) = reg.section_of(x)?;
                (parent == y).then(|| {
                    build(SheafExpr::omega(y, *q, t - d as i64), self.middle.clone(), SheafExpr::restricted(y, x, *q, *t))
                })
            }
            (SesRule::Conormal, SheafExpr::Restricted { section: x, q, t, .. }) => {
                let (_, d) = reg.section_of(x)?;
                Some(build(SheafExpr::omega(x, q - 1, t - d as i64), self.middle.clone(), SheafExpr::omega(x, *q, *t)))
            }
            (SesRule::CyclicPushforward, SheafExpr::Pushforward { cover, q, t }) => {
                let (base, k, d) = reg.cover_of(cover)?;
                let (k, d) = (k as i64, d as i64);
                let left = SheafExpr::Sum((0..k).map(|j| SheafExpr::omega(base, *q, t - j * d)).collect()).canonical();
                let right = SheafExpr::Sum((1..=k).map(|j| SheafExpr::omega(base, q - 1, t - j * d)).collect()).canonical();
                Some(build(left, self.middle.clone(), right))
            }
            (SesRule::CyclicConormal, SheafExpr::Pushforward { cover, q, t }) => {
                let (_, k, d) = reg.cover_of(cover)?;
                let kd = k as i64 * d as i64;
                Some(build(SheafExpr::omega(cover, q - 1, t - kd), self.middle.clone(), SheafExpr::omega(cover, *q, *t)))
            }
            _ => None,
        }
    }

    /// The long exact sequence `H^{-1}(C), H^0(A), H^0(B), H^0(C), H^1(A), …`
    /// through the top degree, as consecutive groups joined by maps.
    pub fn long_exact_sequence(&self, reg: &Registry) -> Result<Vec<Group>, ChaseError> {
        let top = [&self.left, &self.middle, &self.right]
            .into_iter()
            .map(|e| reg.cohomological_dim(e))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .max()
            .unwrap_or(0) as i64;
        let mut out = vec![Group::new(-1, self.right.clone())];
        for p in 0..=top + 1 {
            out.push(Group::new(p, self.left.clone()));
            out.push(Group::new(p, self.middle.clone()));
            out.push(Group::new(p, self.right.clone()));
        }
        Ok(out)
    }
}

impl fmt::Display for Ses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.rule.name(), self.left, self.middle, self.right)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Registry {
        let mut r = Registry::new();
        r.grassmannian("G", 1, 5).unwrap();
        r.section("Y", "G", 1).unwrap();
        r.section("X", "Y", 1).unwrap();
        r.grassmannian("P", 0, 4).unwrap();
        r.cover("Z", "P", 2, 3).unwrap();
        r
    }

    #[test]
    fn conormal_bookkeeping() {
        let r = reg();
        let e = |s: &str| SheafExpr::parse(s).unwrap();
        Ses::new(SesRule::Conormal, e("Omega(X,3,2)"), e("OmegaR(Y|X,4,3)"), e("Omega(X,4,3)"), &r).unwrap();
        assert!(Ses::new(SesRule::Conormal, e("Omega(X,3,1)"), e("OmegaR(Y|X,4,3)"), e("Omega(X,4,3)"), &r).is_err());
        Ses::new(SesRule::Restriction, e("Omega(Y,4,2)"), e("Omega(Y,4,3)"), e("OmegaR(Y|X,4,3)"), &r).unwrap();
        assert!(Ses::new(SesRule::Restriction, e("Omega(G,4,2)"), e("Omega(G,4,3)"), e("OmegaR(Y|X,4,3)"), &r).is_err());
    }

    #[test]
    fn cover_bookkeeping() {
        let r = reg();
        let e = |s: &str| SheafExpr::parse(s).unwrap();
        Ses::new(
            SesRule::CyclicPushforward,
            e("Omega(P,2,4)+Omega(P,2,1)"),
            e("Push(Z,2,4)"),
            e("Omega(P,1,1)+Omega(P,1,-2)"),
            &r,
        )
        .unwrap();
        Ses::new(SesRule::CyclicConormal, e("Omega(Z,1,-2)"), e("Push(Z,2,4)"), e("Omega(Z,2,4)"), &r).unwrap();
    }

    #[test]
    fn les_shape() {
        let r = reg();
        let e = |s: &str| SheafExpr::parse(s).unwrap();
        let s = Ses::new(SesRule::Conormal, e("Omega(X,3,2)"), e("OmegaR(Y|X,4,3)"), e("Omega(X,4,3)"), &r).unwrap();
        let les = s.long_exact_sequence(&r).unwrap();
        assert_eq!(les.len(), 1 + 3 * 8);
        assert_eq!(les[0].p, -1);
        assert_eq!(les[3], Group::new(0, e("Omega(X,4,3)")));
        assert_eq!(les[4], Group::new(1, e("Omega(X,3,2)")));
    }
}
