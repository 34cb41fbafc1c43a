//! Re-verification of a rendered proof trace.
//!
//! Works from the text alone: declarations rebuild the spaces, each sequence
//! is re-checked against its twist bookkeeping, long exact sequences are laid
//! out afresh, and every step is matched against the local meaning of its
//! rule. Nothing here calls into the saturation engine.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::expr::{Claim, Group, MapProperty, SheafExpr};
use super::registry::Registry;
use super::sources::{FactRef, FactSources};
use super::ChaseError;
use crate::tables::SpaceDescriptor;

/// What a successful check covered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub script: String,
    pub steps: usize,
    pub sequences: usize,
    pub goals: usize,
    pub facts: usize,
}

struct ParsedStep {
    claim: Claim,
    rule: String,
    ses: Option<usize>,
    from: Option<String>,
    premises: Vec<usize>,
}

struct Checker<'a> {
    reg: Registry,
    sources: &'a FactSources,
    les: Vec<Vec<Group>>,
    steps: Vec<ParsedStep>,
}

fn fail(step: usize, msg: impl Into<String>) -> ChaseError {
    ChaseError::Check { step, msg: msg.into() }
}

fn num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, ChaseError> {
    s.parse().map_err(|_| ChaseError::Syntax(format!("trace line {line}: bad number `{s}`")))
}

/// Verify a rendered trace. Facts are looked up again in `sources`.
pub fn check_trace(text: &str, sources: &FactSources) -> Result<CheckReport, ChaseError> {
    let mut checker = Checker { reg: Registry::new(), sources, les: Vec::new(), steps: Vec::new() };
    let mut script = String::new();
    let mut goals: Vec<(Claim, Vec<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let space_err = |e: ChaseError| ChaseError::Syntax(format!("trace line {line}: {e}"));
        match tokens.as_slice() {
            ["trace", name] => script = name.to_string(),
            ["grassmannian", id, k, n] => checker.reg.grassmannian(id, num(k, line)?, num(n, line)?).map_err(space_err)?,
            ["space", id, "dim", n, "index", r] => checker
                .reg
                .declare(SpaceDescriptor::abstract_space(*id, num(n, line)?, num(r, line)?))
                .map_err(space_err)?,
            ["section", id, "of", y, "degree", d] => checker.reg.section(id, y, num(d, line)?).map_err(space_err)?,
            ["cover", id, "of", y, "k", k, "d", d] => checker.reg.cover(id, y, num(k, line)?, num(d, line)?).map_err(space_err)?,
            ["special", id] => checker.reg.mark_special(id).map_err(space_err)?,
            ["ses", label, rule, l, m, r] => {
                if *label != format!("s{}", checker.les.len()) {
                    return Err(ChaseError::Syntax(format!("trace line {line}: sequence label {label} out of order")));
                }
                let l = SheafExpr::parse(l)?;
                let m = SheafExpr::parse(m)?;
                let r = SheafExpr::parse(r)?;
                checker.check_shape(rule, &l, &m, &r).map_err(|msg| ChaseError::Syntax(format!("trace line {line}: {msg}")))?;
                let les = checker.lay_out(&l, &m, &r)?;
                checker.les.push(les);
            }
            ["step", id, rule, ..] => {
                let id: usize = num(id, line)?;
                if id != checker.steps.len() {
                    return Err(fail(id, "step numbers must be consecutive"));
                }
                let body = content.splitn(4, ' ').nth(3).unwrap_or("");
                let (body, using) = body.rsplit_once(" using").ok_or_else(|| fail(id, "missing `using`"))?;
                let premises = using.split_whitespace().map(|p| num(p, line)).collect::<Result<Vec<usize>, _>>()?;
                if premises.iter().any(|p| *p >= id) {
                    return Err(fail(id, "premise refers forward"));
                }
                let (body, from) = match body.rsplit_once(" from ") {
                    Some((b, f)) => (b, Some(f.to_string())),
                    None => (body, None),
                };
                let (body, ses) = match body.rsplit_once(" ses s") {
                    Some((b, s)) => (b, Some(num::<usize>(s, line)?)),
                    None => (body, None),
                };
                let claim = Claim::parse(body)?;
                let step = ParsedStep { claim, rule: rule.to_string(), ses, from, premises };
                checker.verify(id, &step)?;
                checker.steps.push(step);
            }
            ["goal", ..] => {
                let body = content.strip_prefix("goal ").unwrap_or("");
                let (claim, ids) = body.rsplit_once(" by ").ok_or_else(|| ChaseError::Syntax(format!("trace line {line}: goal without `by`")))?;
                let ids = ids.split_whitespace().map(|p| num(p, line)).collect::<Result<Vec<usize>, _>>()?;
                goals.push((Claim::parse(claim)?, ids));
            }
            _ => return Err(ChaseError::Syntax(format!("trace line {line}: unrecognized `{content}`"))),
        }
    }
    if goals.is_empty() {
        return Err(ChaseError::Syntax("trace has no goal".into()));
    }
    for (claim, ids) in &goals {
        checker.check_goal(claim, ids)?;
    }
    Ok(CheckReport {
        script,
        steps: checker.steps.len(),
        sequences: checker.les.len(),
        goals: goals.len(),
        facts: checker.steps.iter().filter(|s| s.rule == "fact").count(),
    })
}

fn sorted(e: &SheafExpr) -> Vec<SheafExpr> {
    let mut v: Vec<SheafExpr> = match e {
        SheafExpr::Sum(items) => items.clone(),
        other => vec![other.clone()],
    };
    v.sort();
    v
}

impl Checker<'_> {
    fn space_dim(&self, id: &str) -> Result<i64, ChaseError> {
        Ok(self.reg.get(id)?.dim as i64)
    }

    /// Dimension of the variety carrying the cohomology of `e`.
    fn carrier_dim(&self, e: &SheafExpr) -> Result<i64, ChaseError> {
        Ok(match e {
            SheafExpr::Omega { space, .. } | SheafExpr::Structure { space, .. } => self.space_dim(space)?,
            SheafExpr::Restricted { section, .. } => self.space_dim(section)?,
            SheafExpr::Pushforward { cover, .. } => self.space_dim(cover)?,
            SheafExpr::Sum(items) => {
                let mut m = 0;
                for i in items {
                    m = m.max(self.carrier_dim(i)?);
                }
                m
            }
        })
    }

    fn zero_sheaf(&self, e: &SheafExpr) -> Result<bool, ChaseError> {
        Ok(match e {
            SheafExpr::Omega { space, q, .. } => *q < 0 || *q > self.space_dim(space)?,
            SheafExpr::Structure { .. } => false,
            SheafExpr::Restricted { ambient, q, .. } => *q < 0 || *q > self.space_dim(ambient)?,
            SheafExpr::Pushforward { cover, q, .. } => *q < 0 || *q > self.space_dim(cover)? + 1,
            SheafExpr::Sum(items) => {
                for i in items {
                    if !self.zero_sheaf(i)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    fn divisor(&self, x: &str) -> Option<(String, i64)> {
        self.reg.section_of(x).map(|(y, d)| (y.to_string(), d as i64))
    }

    fn check_shape(&self, rule: &str, l: &SheafExpr, m: &SheafExpr, r: &SheafExpr) -> Result<(), String> {
        use SheafExpr::*;
        let ok = match (rule, l, m, r) {
            ("restriction", Omega { space: a, q: qa, t: ta }, Omega { space: b, q: qb, t: tb }, Restricted { ambient, section, q: qc, t: tc }) => {
                let d = self.divisor(section).filter(|(y, _)| y == ambient).map(|(_, d)| d);
                a == b && b == ambient && qa == qb && qb == qc && tb == tc && d.is_some_and(|d| *ta == tb - d)
            }
            ("conormal", Omega { space: a, q: qa, t: ta }, Restricted { ambient, section, q: qb, t: tb }, Omega { space: c, q: qc, t: tc }) => {
                let d = self.divisor(section).filter(|(y, _)| y == ambient).map(|(_, d)| d);
                a == section && c == section && *qa + 1 == *qb && qb == qc && tb == tc && d.is_some_and(|d| *ta == tb - d)
            }
            ("cyclic-conormal", Omega { space: a, q: qa, t: ta }, Pushforward { cover, q: qb, t: tb }, Omega { space: c, q: qc, t: tc }) => {
                let kd = self.reg.cover_of(cover).map(|(_, k, d)| (k * d) as i64);
                a == cover && c == cover && *qa + 1 == *qb && qb == qc && tb == tc && kd.is_some_and(|kd| *ta == tb - kd)
            }
            ("cyclic-pushforward", _, Pushforward { cover, q, t }, _) => match self.reg.cover_of(cover) {
                Some((base, k, d)) => {
                    let (k, d) = (k as i64, d as i64);
                    let mut want_l: Vec<SheafExpr> = (0..k).map(|j| SheafExpr::omega(base, *q, t - j * d)).collect();
                    let mut want_r: Vec<SheafExpr> = (1..=k).map(|j| SheafExpr::omega(base, q - 1, t - j * d)).collect();
                    want_l.sort();
                    want_r.sort();
                    sorted(l) == want_l && sorted(r) == want_r
                }
                None => false,
            },
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{rule} {l} {m} {r} fails the sequence bookkeeping"))
        }
    }

    fn lay_out(&self, l: &SheafExpr, m: &SheafExpr, r: &SheafExpr) -> Result<Vec<Group>, ChaseError> {
        let top = self.carrier_dim(l)?.max(self.carrier_dim(m)?).max(self.carrier_dim(r)?);
        let mut out = Vec::with_capacity(3 * (top as usize + 2) + 1);
        out.push(Group::new(-1, r.clone()));
        for p in 0..=top + 1 {
            for e in [l, m, r] {
                out.push(Group::new(p, e.clone()));
            }
        }
        Ok(out)
    }

    fn premise(&self, s: &ParsedStep, i: usize) -> Option<&Claim> {
        s.premises.get(i).map(|p| &self.steps[*p].claim)
    }

    fn value_premise(&self, s: &ParsedStep, i: usize) -> Option<(&Group, &BigUint)> {
        match self.premise(s, i)? {
            Claim::Value(g, v) => Some((g, v)),
            _ => None,
        }
    }

    fn map_premise(&self, s: &ParsedStep, i: usize, chain: &[Group], prop: MapProperty) -> bool {
        match self.premise(s, i) {
            Some(Claim::Map(c, p)) => c == chain && (*p == prop || (*p == MapProperty::Bijective && matches!(prop, MapProperty::Injective | MapProperty::Surjective))),
            _ => false,
        }
    }

    fn verify(&self, id: usize, s: &ParsedStep) -> Result<(), ChaseError> {
        let ok = self.verify_rule(id, s)?;
        if ok {
            Ok(())
        } else {
            Err(fail(id, format!("`{}` does not follow by {} from {:?}", s.claim, s.rule, s.premises)))
        }
    }

    fn verify_rule(&self, id: usize, s: &ParsedStep) -> Result<bool, ChaseError> {
        use MapProperty::*;
        let n_prem = s.premises.len();
        Ok(match (s.rule.as_str(), &s.claim) {
            ("fact", claim) => {
                let fact = FactRef::of_claim(claim)?;
                let found = self.sources.lookup(&self.reg, &fact)?.ok_or_else(|| fail(id, format!("no source for {fact}")))?;
                let stated = match claim {
                    Claim::Value(_, v) | Claim::Betti(_, _, v) => v,
                    Claim::Map(..) => return Ok(false),
                };
                n_prem == 0 && *stated == found.value && s.from.as_deref() == Some(found.provenance.as_str())
            }
            ("degree-range", Claim::Value(g, v)) => {
                v.is_zero() && n_prem == 0 && (g.p < 0 || g.p > self.carrier_dim(&g.expr)? || self.zero_sheaf(&g.expr)?)
            }
            ("kodaira-nakano", Claim::Value(g, v)) => match &g.expr {
                SheafExpr::Omega { space, q, t } => {
                    let n = self.space_dim(space)?;
                    v.is_zero() && n_prem == 0 && ((*t > 0 && g.p + q > n) || (*t < 0 && g.p + q < n))
                }
                _ => false,
            },
            ("betti-hodge", Claim::Value(g, v)) => match (&g.expr, self.premise(s, 0)) {
                (SheafExpr::Omega { space, q, t: 0 }, Some(Claim::Betti(bs, i, b))) => {
                    n_prem == 1
                        && bs == space
                        && i64::from(*i) == g.p + q
                        && ((b.is_zero() && v.is_zero()) || (g.p == *q && b.is_one() && v.is_one()))
                }
                _ => false,
            },
            ("hodge-symmetry", Claim::Value(g, v)) => match (&g.expr, self.value_premise(s, 0)) {
                (SheafExpr::Omega { space, q, t: 0 }, Some((h, w))) => {
                    n_prem == 1 && *h == Group::new(*q, SheafExpr::omega(space, g.p, 0)) && v == w
                }
                _ => false,
            },
            ("direct-sum", Claim::Value(g, v)) => {
                if let SheafExpr::Sum(items) = &g.expr {
                    let mut total = BigUint::zero();
                    let mut matched = n_prem == items.len();
                    for (i, item) in items.iter().enumerate() {
                        match self.value_premise(s, i) {
                            Some((h, w)) if *h == Group::new(g.p, item.clone()) => total += w,
                            _ => matched = false,
                        }
                    }
                    matched && total == *v
                } else {
                    match self.value_premise(s, 0) {
                        Some((h, w)) => {
                            let inside = matches!(&h.expr, SheafExpr::Sum(items) if items.contains(&g.expr));
                            n_prem == 1 && h.p == g.p && inside && w.is_zero() && v.is_zero()
                        }
                        None => false,
                    }
                }
            }
            ("lefschetz-betti", Claim::Betti(x, i, v)) => match (self.premise(s, 0), self.divisor(x)) {
                (Some(Claim::Betti(y, j, w)), Some((parent, _))) => {
                    n_prem == 1 && *y == parent && i == j && v == w && i64::from(*i) < self.space_dim(x)?
                }
                _ => false,
            },
            ("zero-group-map", Claim::Map(chain, prop)) if chain.len() == 2 => match self.value_premise(s, 0) {
                Some((g, w)) if w.is_zero() && n_prem == 1 => {
                    (*g == chain[0] && matches!(prop, Zero | Injective)) || (*g == chain[1] && matches!(prop, Zero | Surjective))
                }
                _ => false,
            },
            ("injective-zero-map", Claim::Value(g, v)) | ("surjective-zero-map", Claim::Value(g, v)) => {
                let (end, prop) = if s.rule == "injective-zero-map" { (0, Injective) } else { (usize::MAX, Surjective) };
                match self.premise(s, 0) {
                    Some(Claim::Map(chain, Zero)) => {
                        let end = if end == 0 { &chain[0] } else { &chain[chain.len() - 1] };
                        n_prem == 2 && v.is_zero() && end == g && self.map_premise(s, 1, chain, prop)
                    }
                    _ => false,
                }
            }
            ("bijective-transfer", Claim::Value(g, v)) => match self.premise(s, 0) {
                Some(Claim::Map(chain, _)) => {
                    let (a, b) = (&chain[0], &chain[chain.len() - 1]);
                    let other = match self.value_premise(s, 2) {
                        Some((h, w)) if h == a && w == v => b,
                        Some((h, w)) if h == b && w == v => a,
                        _ => return Ok(false),
                    };
                    n_prem == 3 && other == g && self.map_premise(s, 0, chain, Injective) && self.map_premise(s, 1, chain, Surjective)
                }
                _ => false,
            },
            ("dimension-count", Claim::Map(chain, prop)) => {
                let from = match prop {
                    Surjective => Injective,
                    Injective => Surjective,
                    _ => return Ok(false),
                };
                let ends = (self.value_premise(s, 1), self.value_premise(s, 2));
                match ends {
                    (Some((a, va)), Some((b, vb))) => {
                        n_prem == 3 && *a == chain[0] && *b == chain[chain.len() - 1] && va == vb && self.map_premise(s, 0, chain, from)
                    }
                    _ => false,
                }
            }
            ("composite-last-surjective", Claim::Map(part, Surjective)) => match self.premise(s, 0) {
                Some(Claim::Map(whole, _)) => {
                    whole.len() > 2 && part[..] == whole[whole.len() - 2..] && self.map_premise(s, 0, whole, Surjective) && n_prem == 1
                }
                _ => false,
            },
            ("composite-prefix-surjective", Claim::Map(part, Surjective)) => match self.premise(s, 0) {
                Some(Claim::Map(whole, _)) => {
                    let n = whole.len();
                    n > 2
                        && n_prem == 2
                        && part[..] == whole[..n - 1]
                        && self.map_premise(s, 0, whole, Surjective)
                        && self.map_premise(s, 1, &whole[n - 2..], Injective)
                }
                _ => false,
            },
            ("composite-first-injective", Claim::Map(part, Injective)) => match self.premise(s, 0) {
                Some(Claim::Map(whole, _)) => {
                    whole.len() > 2 && n_prem == 1 && part[..] == whole[..2] && self.map_premise(s, 0, whole, Injective)
                }
                _ => false,
            },
            ("composite-tail-injective", Claim::Map(part, Injective)) => match self.premise(s, 0) {
                Some(Claim::Map(whole, _)) => {
                    whole.len() > 2
                        && n_prem == 2
                        && part[..] == whole[1..]
                        && self.map_premise(s, 0, whole, Injective)
                        && self.map_premise(s, 1, &whole[..2], Surjective)
                }
                _ => false,
            },
            ("exactness", Claim::Map(chain, prop)) if chain.len() == 2 => {
                let les = self.sequence(id, s)?;
                let (Some(Claim::Map(pre, _)), true) = (self.premise(s, 0), n_prem == 1) else { return Ok(false) };
                if pre.len() != 2 {
                    return Ok(false);
                }
                let before = adjacent(les, pre, chain);
                let after = adjacent(les, chain, pre);
                (before && *prop == Injective && self.map_premise(s, 0, pre, Zero))
                    || (after && *prop == Surjective && self.map_premise(s, 0, pre, Zero))
                    || (after && *prop == Zero && self.map_premise(s, 0, pre, Injective))
                    || (before && *prop == Zero && self.map_premise(s, 0, pre, Surjective))
            }
            ("exact-zero", Claim::Value(g, v)) => {
                let les = self.sequence(id, s)?;
                match (self.premise(s, 0), self.premise(s, 1)) {
                    (Some(Claim::Map(f, Zero)), Some(Claim::Map(h, Zero))) => {
                        n_prem == 2 && v.is_zero() && f.len() == 2 && f[1] == *g && adjacent(les, f, h)
                    }
                    _ => false,
                }
            }
            ("hard-lefschetz" | "cupping-lemma", Claim::Map(chain, prop)) => n_prem == 0 && self.cupping_shape(chain, *prop, &s.rule)?,
            ("lefschetz-restriction", Claim::Map(chain, prop)) => n_prem == 0 && self.restriction_shape(chain, *prop)?,
            ("restriction-surjective", Claim::Map(chain, Surjective)) => self.surjectivity_shape(s, chain)?,
            _ => false,
        })
    }

    fn sequence(&self, id: usize, s: &ParsedStep) -> Result<&[Group], ChaseError> {
        let i = s.ses.ok_or_else(|| fail(id, "exactness step without a sequence"))?;
        self.les.get(i).map(Vec::as_slice).ok_or_else(|| fail(id, format!("unknown sequence s{i}")))
    }

    fn cupping_shape(&self, chain: &[Group], prop: MapProperty, rule: &str) -> Result<bool, ChaseError> {
        let [a, b, c, e] = chain else { return Ok(false) };
        let (SheafExpr::Omega { space: y, q, t: 0 }, SheafExpr::Omega { space: x, .. }) = (&e.expr, &b.expr) else {
            return Ok(false);
        };
        let Some((parent, d)) = self.divisor(x) else { return Ok(false) };
        let (p, q) = (e.p, *q);
        let shape = parent == *y
            && p >= 1
            && q >= 1
            && *a == Group::new(p - 1, SheafExpr::omega(y, q - 1, 0))
            && *b == Group::new(p - 1, SheafExpr::omega(x, q - 1, 0))
            && *c == Group::new(p - 1, SheafExpr::restricted(y, x, q, d));
        let dim_y = self.space_dim(y)?;
        Ok(shape
            && match rule {
                "cupping-lemma" => prop == MapProperty::Bijective && self.reg.is_special(y) && p + q < dim_y,
                _ => prop == MapProperty::Injective && p + q - 2 < dim_y,
            })
    }

    fn restriction_shape(&self, chain: &[Group], prop: MapProperty) -> Result<bool, ChaseError> {
        let [a, b] = chain else { return Ok(false) };
        let (SheafExpr::Omega { space: y, q, t: 0 }, SheafExpr::Omega { space: x, q: q2, t: 0 }) = (&a.expr, &b.expr) else {
            return Ok(false);
        };
        let in_y = self.divisor(x).is_some_and(|(parent, _)| parent == *y);
        let deg = a.p + q;
        let dim_x = self.space_dim(x)?;
        Ok(in_y
            && a.p == b.p
            && q == q2
            && a.p >= 0
            && *q >= 0
            && ((deg < dim_x && prop == MapProperty::Bijective) || (deg == dim_x && prop == MapProperty::Injective)))
    }

    fn surjectivity_shape(&self, s: &ParsedStep, chain: &[Group]) -> Result<bool, ChaseError> {
        let [a, b] = chain else { return Ok(false) };
        let (SheafExpr::Omega { space: y, q, t: c }, SheafExpr::Omega { space: x, q: q2, t: c2 }) = (&a.expr, &b.expr) else {
            return Ok(false);
        };
        let Some((parent, d)) = self.divisor(x) else { return Ok(false) };
        let (q, c) = (*q, *c);
        if parent != *y || a.p != 0 || b.p != 0 || q != *q2 || c != *c2 || c > d || q < 0 || q >= self.space_dim(y)? - 1 {
            return Ok(false);
        }
        let zero_at = |i: usize, g: Group| matches!(self.value_premise(s, i), Some((h, w)) if *h == g && w.is_zero());
        Ok(if c < d {
            s.premises.len() == 2
                && zero_at(0, Group::new(1, SheafExpr::omega(x, q - 1, c - d)))
                && zero_at(1, Group::new(1, SheafExpr::omega(y, q, c - d)))
        } else {
            s.premises.len() == 1 && zero_at(0, Group::new(1, SheafExpr::omega(y, q, 0)))
        })
    }

    fn check_goal(&self, claim: &Claim, ids: &[usize]) -> Result<(), ChaseError> {
        let err = || fail(ids.first().copied().unwrap_or(0), format!("goal {claim} is not supported by its steps"));
        let claims: Vec<&Claim> = ids.iter().map(|i| self.steps.get(*i).map(|s| &s.claim).ok_or_else(err)).collect::<Result<_, _>>()?;
        let has = |want: MapProperty, chain: &[Group]| {
            claims.iter().any(|c| matches!(c, Claim::Map(ch, p) if ch == chain && (*p == want || *p == MapProperty::Bijective)))
        };
        let ok = match claim {
            Claim::Map(chain, MapProperty::Bijective) => has(MapProperty::Injective, chain) && has(MapProperty::Surjective, chain),
            Claim::Map(chain, MapProperty::Injective) => has(MapProperty::Injective, chain),
            Claim::Map(chain, MapProperty::Surjective) => has(MapProperty::Surjective, chain),
            other => claims.contains(&other),
        };
        if ok {
            Ok(())
        } else {
            Err(err())
        }
    }
}

/// `f` followed by `g` at consecutive positions of the long exact sequence.
fn adjacent(les: &[Group], f: &[Group], g: &[Group]) -> bool {
    if f.len() != 2 || g.len() != 2 || f[1] != g[0] {
        return false;
    }
    let positions: BTreeMap<&Group, usize> = les.iter().enumerate().map(|(i, g)| (g, i)).collect();
    match (positions.get(&f[0]), positions.get(&f[1]), positions.get(&g[1])) {
        (Some(a), Some(b), Some(c)) => a + 1 == *b && b + 1 == *c,
        _ => false,
    }
}
