use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;

use super::hypersurface::{cyclic_stability, hypersurface_stability};
use super::profile::FanoProfile;
use super::slicing::{del_pezzo_verdict, reid_verdict, slicing_search, SlicingOutcome};
use super::verdict::{Backing, Outcome, Reasons, StabilityVerdict, Support};
use super::StabilityError;
use crate::chase::{builtin_script, check_trace, replay, sources_for, CheckReport, Claim, ProofTrace, ReplayOutcome, Script};
use crate::special::{propagate_section, SpecialCohomologyCertificate};
use crate::tables::{CohomologyTable, Window};
use crate::weyl::Grassmannian;

/// A vanishing `H^0(Ω^q(t)) = 0` with the reasons behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Vanishing {
    pub q: usize,
    pub t: i64,
    pub support: Support,
}

/// Coindex three: a destabilizing subsheaf can only have rank `n/2` and
/// the slope of `T_X`, and a vanishing `H^0(Ω^{n/2}(n/2 - 1)) = 0` rules it
/// out.
pub fn prop24_analyze(n: usize, section: Option<&StabilityVerdict>, h0_vanishing: Option<&H0Vanishing>) -> StabilityVerdict {
    if n < 4 {
        return StabilityVerdict::not_applicable(format!("dimension {n} < 4"));
    }
    let Some(section) = section.filter(|v| v.is_stable()) else {
        return StabilityVerdict::unknown(format!("stability of the tangent bundle of a hyperplane section ({}-fold) is not established", n - 1));
    };
    let mut reasons = Reasons::new();
    let es = if n == 4 {
        reasons.push("(ES) holds for 4-folds of index 2", "wilson", Backing::Axiom, &[])
    } else {
        reasons.push("(ES)", "assumption", Backing::Assumption, &[])
    };
    let sec = reasons.absorb_verdict(section).expect("stable verdicts have reasons");
    let ni = n as i64;
    let mu = Rational64::new(ni - 2, ni);
    let mu_section = Rational64::new(ni - 3, ni - 1);
    let mut excluded = Vec::new();
    let mut survivors = Vec::new();
    for m in 1..n {
        let mi = m as i64;
        let cap = match slicing_search(n, n - 2, m, mi) {
            SlicingOutcome::Refuted { nodes, .. } => reasons.rule(
                format!("rank {m}: μ(F) >= 1 refuted on all {nodes} branches, so c1(F) <= {}", m - 1),
                "slicing-lemma",
                &[es],
            ),
            other => {
                reasons.push(format!("rank {m}: slicing search did not close: {other:?}"), "slicing-lemma", Backing::Open, &[es]);
                return reasons.finish(Outcome::Unknown);
            }
        };
        let top = Rational64::new(mi - 1, mi);
        if top < mu {
            excluded.push(reasons.rule(format!("rank {m}: μ(F) <= {top} < {mu}"), "exact-arithmetic", &[cap]));
            continue;
        }
        let zero = reasons.rule(
            format!("rank {m}, α=0: F ⊂ T_H1 so μ(F) < {mu_section} < {mu}"),
            "stable hyperplane section",
            &[cap, sec],
        );
        let kernel = Rational64::new(mi - 2, mi - 1);
        if kernel >= mu_section {
            excluded.push(reasons.rule(
                format!("rank {m}, α≠0: μ(ker α) >= {kernel} >= {mu_section} contradicts stability of T_H1"),
                "exact-arithmetic",
                &[zero, sec],
            ));
        } else {
            survivors.push((m, reasons.rule(format!("rank {m}: c1(F) = {} and μ(F) = {top} = μ(T_X) not excluded", m - 1), "exact-arithmetic", &[zero])));
        }
    }
    let Some(&(m, surv)) = survivors.first() else {
        reasons.rule(format!("T_X stable for the coindex-3 {n}-fold"), "slicing-lemma", &excluded);
        return reasons.finish(Outcome::Stable);
    };
    let t = m as i64 - 1;
    let needed = format!("H0(Ω^{m}({t})) = 0");
    let det = reasons.rule(
        format!("a rank-{m} subsheaf with c1 = {t} gives a nonzero section of Ω^{m}({t})"),
        "determinant",
        &[surv],
    );
    match h0_vanishing {
        Some(v) if v.q == m && v.t == t => {
            let fact = reasons.absorb_support(&v.support).expect("vanishing has reasons");
            let kill = reasons.rule(format!("{needed}, so no rank-{m} subsheaf of slope {}", Rational64::new(t, m as i64)), "determinant", &[det, fact]);
            excluded.push(kill);
            reasons.rule(format!("T_X stable for the coindex-3 {n}-fold"), "slicing-lemma", &excluded);
            reasons.finish(Outcome::Stable)
        }
        other => {
            if let Some(v) = other {
                reasons.push(format!("supplied H0(Ω^{}({})) = 0 does not match", v.q, v.t), "mismatch", Backing::Rule, &[]);
            }
            let open = reasons.push(format!("obligation {needed}"), "open", Backing::Open, &[det]);
            excluded.push(open);
            reasons.rule(format!("T_X semistable for the coindex-3 {n}-fold"), "slicing-lemma", &excluded);
            reasons.finish(Outcome::Semistable)
        }
    }
}

/// `H^0(T_{X_m}) = 0` for the linear sections of dimension
/// `3 <= m <= n/2 + 1` gives stability.
pub fn lemma26_criterion(n: usize, h0_tangent: &BTreeMap<usize, Support>) -> StabilityVerdict {
    if n < 4 {
        return StabilityVerdict::not_applicable(format!("dimension {n} < 4"));
    }
    let mut reasons = Reasons::new();
    let mut used = Vec::new();
    for m in 3..=n / 2 + 1 {
        match h0_tangent.get(&m) {
            Some(s) => used.extend(reasons.absorb_support(s)),
            None => {
                reasons.push(format!("H0(T_X{m}) = 0 for the {m}-dimensional section is not known (m={m})"), "open", Backing::Open, &[]);
                return reasons.finish(Outcome::Unknown);
            }
        }
    }
    reasons.rule(format!("T_X stable for the coindex-3 {n}-fold"), "tangent-vanishing criterion", &used);
    reasons.finish(Outcome::Stable)
}

pub fn homogeneous_axiom(space: &str) -> StabilityVerdict {
    let mut reasons = Reasons::new();
    reasons.push(format!("T stable on the rational homogeneous {space}"), format!("homogeneous {space}"), Backing::Axiom, &[]);
    reasons.finish(Outcome::Stable)
}

/// Four-folds of genus 7 to 10: the three-fold section has no vector fields.
pub fn rigid_section_verdict(g: u32) -> StabilityVerdict {
    if !(7..=10).contains(&g) {
        return StabilityVerdict::not_applicable(format!("genus {g} outside 7..=10"));
    }
    let fact = Support::single(format!("H0(T_Y) = 0 for the genus-{g} index-1 3-fold Y"), "prokhorov automorphism groups", Backing::Axiom);
    lemma26_criterion(4, &BTreeMap::from([(3, fact)]))
}

/// A chase trace that replayed and passed the independent checker.
#[derive(Clone, Debug)]
pub struct CheckedTrace {
    pub trace: ProofTrace,
    pub report: CheckReport,
}

/// Chase traces and special-cohomology certificates the routes consume,
/// built on first use.
#[derive(Debug, Default)]
pub struct Resources {
    facts_dir: Option<PathBuf>,
    withheld: BTreeSet<String>,
    traces: Mutex<BTreeMap<String, Result<Arc<CheckedTrace>, String>>>,
    certs: Mutex<BTreeMap<String, Arc<SpecialCohomologyCertificate>>>,
}

impl Resources {
    pub fn shipped() -> Self {
        Self::default()
    }

    pub fn with_facts_dir(dir: impl Into<PathBuf>) -> Self {
        Resources { facts_dir: Some(dir.into()), ..Self::default() }
    }

    /// Pretend a resource is unavailable.
    pub fn withhold(mut self, name: impl Into<String>) -> Self {
        self.withheld.insert(name.into());
        self
    }

    pub fn trace(&self, name: &str) -> Result<Arc<CheckedTrace>, String> {
        if self.withheld.contains(name) {
            return Err(format!("chase trace {name} unavailable"));
        }
        let mut cache = self.traces.lock().expect("trace cache");
        if let Some(hit) = cache.get(name) {
            return hit.clone();
        }
        let built = self.build_trace(name).map(Arc::new);
        cache.insert(name.to_string(), built.clone());
        built
    }

    fn build_trace(&self, name: &str) -> Result<CheckedTrace, String> {
        let text = builtin_script(name).ok_or_else(|| format!("no chase script {name}"))?;
        let script = Script::parse(name, text).map_err(|e| format!("{name}: {e}"))?;
        let sources = sources_for(&script, self.facts_dir.as_deref()).map_err(|e| format!("{name}: {e}"))?;
        let trace = match replay(&script, &sources).map_err(|e| format!("{name}: {e}"))? {
            ReplayOutcome::Proved(t) => t,
            ReplayOutcome::Stuck(r) => return Err(format!("chase {name} is stuck: {}", r.to_string().trim_end().replace('\n', "; "))),
        };
        let report = check_trace(&trace.render(), &sources).map_err(|e| format!("{name}: trace check failed: {e}"))?;
        Ok(CheckedTrace { trace, report })
    }

    /// The vanishing `claim` as concluded by a checked trace.
    pub fn trace_vanishing(&self, name: &str, claim: &str, q: usize, t: i64) -> Result<H0Vanishing, String> {
        let checked = self.trace(name)?;
        let wanted = Claim::parse(claim).map_err(|e| e.to_string())?;
        if !checked.trace.goals.iter().any(|(c, _)| *c == wanted) {
            return Err(format!("chase {name} does not conclude {claim}"));
        }
        let support = Support::single(
            format!("{claim} ({} checked steps)", checked.report.steps),
            format!("chase {name}"),
            Backing::Trace(name.to_string()),
        );
        Ok(H0Vanishing { q, t, support })
    }

    fn cached(&self, key: String, build: impl FnOnce() -> Result<SpecialCohomologyCertificate, StabilityError>) -> Result<Arc<SpecialCohomologyCertificate>, StabilityError> {
        if let Some(hit) = self.certs.lock().expect("certificate cache").get(&key) {
            return Ok(hit.clone());
        }
        let cert = Arc::new(build()?);
        self.certs.lock().expect("certificate cache").insert(key, cert.clone());
        Ok(cert)
    }

    /// `P^n` with twists `|t| <= n + 3`.
    pub fn projective(&self, n: usize) -> Result<Arc<SpecialCohomologyCertificate>, StabilityError> {
        if self.withheld.contains("certificates") {
            return Err(StabilityError::Missing("special-cohomology certificates".into()));
        }
        self.cached(format!("P({n})"), || {
            let g = Grassmannian::projective(n).map_err(|e| StabilityError::Rule(e.to_string()))?;
            let table = CohomologyTable::from_grassmannian(g, Window::symmetric(n as i64 + 3));
            Ok(SpecialCohomologyCertificate::certify(table)?)
        })
    }

    pub fn section(&self, base: &SpecialCohomologyCertificate, d: u32) -> Result<Arc<SpecialCohomologyCertificate>, StabilityError> {
        self.cached(format!("{}.cut{d}", base.space.id), || Ok(propagate_section(base, d, base.window)?))
    }
}

/// Verdict for the complete intersection of the given degrees in `P^N`,
/// cutting by the degrees in order.
pub fn complete_intersection_verdict(n: usize, degrees: &[u32], res: &Resources) -> Result<StabilityVerdict, StabilityError> {
    let (&last, rest) = degrees.split_last().ok_or_else(|| StabilityError::InvalidProfile("no degrees".into()))?;
    let mut ambient = res.projective(n + degrees.len())?;
    let mut omega = homogeneous_axiom(&format!("P^{}", n + degrees.len()));
    for &d in rest {
        let next = res.section(&ambient, d)?;
        omega = if d == 2 && ambient.space.index == ambient.dim() as i64 + 1 {
            homogeneous_axiom(&format!("Q^{}", next.dim()))
        } else {
            hypersurface_stability(&ambient, d, &omega)?
        };
        ambient = next;
    }
    hypersurface_stability(&ambient, last, &omega)
}

/// A family of coindex-3 Fano manifolds and the argument for it.
pub trait CoindexRoute: Send + Sync {
    fn name(&self) -> &'static str;
    fn family(&self) -> &'static str;
    fn genera(&self) -> &'static [u32];
    /// Largest dimension in which the family exists.
    fn max_dim(&self) -> Option<usize> {
        None
    }
    /// Verdict in dimension `n >= 4` and genus `g`.
    fn verdict(&self, n: usize, g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError>;
}

fn missing(what: String) -> StabilityVerdict {
    StabilityVerdict::unknown(format!("missing resource: {what}"))
}

/// Descend by hyperplane sections to the index-1 three-fold and climb back
/// with the coindex-3 slope analysis. `base` may settle a dimension
/// outright; `obligation` supplies the even-dimensional vanishing.
fn ladder(
    n: usize,
    base: &dyn Fn(usize) -> Option<StabilityVerdict>,
    obligation: &dyn Fn(usize) -> Result<Option<H0Vanishing>, String>,
) -> StabilityVerdict {
    if n == 3 {
        return reid_verdict(&FanoProfile { n: 3, r: 1, degree: None, genus: None, assume_es: true, b2_is_1: true });
    }
    if let Some(v) = base(n) {
        return v;
    }
    let section = ladder(n - 1, base, obligation);
    if !section.is_stable() {
        return section;
    }
    let fact = if n.is_multiple_of(2) {
        match obligation(n) {
            Ok(f) => f,
            Err(why) => return missing(why),
        }
    } else {
        None
    };
    prop24_analyze(n, Some(&section), fact.as_ref())
}

struct DoubleProjective;

impl CoindexRoute for DoubleProjective {
    fn name(&self) -> &'static str {
        "double-projective"
    }
    fn family(&self) -> &'static str {
        "double cover of P^n branched in a sextic"
    }
    fn genera(&self) -> &'static [u32] {
        &[2]
    }
    fn verdict(&self, n: usize, _g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let base = res.projective(n)?;
        cyclic_stability(&base, 2, 3, &homogeneous_axiom(&format!("P^{n}")))
    }
}

struct DoubleQuadric;

impl CoindexRoute for DoubleQuadric {
    fn name(&self) -> &'static str {
        "double-quadric"
    }
    fn family(&self) -> &'static str {
        "double cover of Q^n branched in a quartic section"
    }
    fn genera(&self) -> &'static [u32] {
        &[3]
    }
    fn verdict(&self, n: usize, _g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let quadric = res.section(&*res.projective(n + 1)?, 2)?;
        cyclic_stability(&quadric, 2, 2, &homogeneous_axiom(&format!("Q^{n}")))
    }
}

struct CompleteIntersection;

impl CoindexRoute for CompleteIntersection {
    fn name(&self) -> &'static str {
        "complete-intersection"
    }
    fn family(&self) -> &'static str {
        "complete intersections (4), (2,3), (2,2,2)"
    }
    fn genera(&self) -> &'static [u32] {
        &[3, 4, 5]
    }
    fn verdict(&self, n: usize, g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        complete_intersection_verdict(n, Self::degrees(g), res)
    }
}

impl CompleteIntersection {
    fn degrees(g: u32) -> &'static [u32] {
        match g {
            3 => &[4],
            4 => &[2, 3],
            _ => &[2, 2, 2],
        }
    }
}

struct GushelMukai;

impl CoindexRoute for GushelMukai {
    fn name(&self) -> &'static str {
        "gushel-mukai"
    }
    fn family(&self) -> &'static str {
        "sections of G(1,4) with a quadric, and double covers of G(1,4) and its sections"
    }
    fn genera(&self) -> &'static [u32] {
        &[6]
    }
    fn max_dim(&self) -> Option<usize> {
        Some(6)
    }
    fn verdict(&self, n: usize, _g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let reid = reid_verdict(&FanoProfile { n: 3, r: 1, degree: None, genus: None, assume_es: true, b2_is_1: true });
        let fourfold = |claim: &str, case: &str| -> StabilityVerdict {
            match res.trace_vanishing("prop_2_9", claim, 2, 1) {
                Ok(mut fact) => {
                    if case == "b" {
                        fact.support = assume_cyclic(&fact.support);
                    }
                    prop24_analyze(4, Some(&reid), Some(&fact))
                }
                Err(why) => missing(why),
            }
        };
        let four = || -> StabilityVerdict {
            let a = fourfold("H0(Omega(X4,2,1)) = 0", "a");
            let b = fourfold("H0(Omega(Z4,2,1)) = 0", "b");
            combine(&[("case a: (2,1) section of G(1,4)", a), ("case b: double cover of a 4-fold section", b)], "4-folds of genus 6")
        };
        Ok(match n {
            4 => four(),
            5 => prop24_analyze(5, Some(&four()), None),
            6 => {
                let five = prop24_analyze(5, Some(&four()), None);
                match res.trace_vanishing("prop_2_9", "H0(Omega(Z6,3,2)) = 0", 3, 2) {
                    Ok(mut fact) => {
                        fact.support = assume_cyclic(&fact.support);
                        prop24_analyze(6, Some(&five), Some(&fact))
                    }
                    Err(why) => missing(why),
                }
            }
            _ => StabilityVerdict::not_applicable(format!("no genus-6 coindex-3 manifold in dimension {n}")),
        })
    }
}

/// Prefix a vanishing about a double cover with the assumption that the
/// cover is cyclic.
fn assume_cyclic(support: &Support) -> Support {
    let mut reasons = Reasons::new();
    let cyclic = reasons.push("the double cover of G(1,4) or of its section is cyclic", "assumption (cover is cyclic)", Backing::Assumption, &[]);
    let fact = reasons.absorb_support(support).expect("vanishing has reasons");
    let claim = support.claim().unwrap_or_default().to_string();
    reasons.rule(claim, "cyclic cover", &[cyclic, fact]);
    reasons.finish(Outcome::Stable).as_support()
}

/// All parts must be stable.
fn combine(parts: &[(&str, StabilityVerdict)], what: &str) -> StabilityVerdict {
    let mut reasons = Reasons::new();
    let mut used = Vec::new();
    let mut outcome = Outcome::Stable;
    for (label, v) in parts {
        let last: Vec<usize> = reasons.absorb_verdict(v).into_iter().collect();
        if v.outcome != Outcome::Stable {
            outcome = outcome.max(v.outcome).min(Outcome::Unknown);
            used.push(reasons.push(format!("{label}: {}", v.outcome), "subcase", Backing::Open, &last));
        } else {
            used.push(reasons.rule(format!("{label}: stable"), "subcase", &last));
        }
    }
    reasons.rule(format!("T_X {} for all {what}", if outcome == Outcome::Stable { "stable" } else { "not established" }), "case split", &used);
    reasons.finish(outcome)
}

struct Spinor;

impl CoindexRoute for Spinor {
    fn name(&self) -> &'static str {
        "spinor"
    }
    fn family(&self) -> &'static str {
        "linear sections of the spinor variety S10"
    }
    fn genera(&self) -> &'static [u32] {
        &[7]
    }
    fn max_dim(&self) -> Option<usize> {
        Some(10)
    }
    fn verdict(&self, n: usize, _g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let base = |m: usize| match m {
            10 => Some(homogeneous_axiom("S10")),
            4 => Some(rigid_section_verdict(7)),
            _ => None,
        };
        let obligation = |m: usize| match m {
            6 => res.trace_vanishing("lemma_2_12", "H0(Omega(X6,3,2)) = 0", 3, 2).map(Some),
            8 => res.trace_vanishing("lemma_2_13", "H0(Omega(X,4,3)) = 0", 4, 3).map(Some),
            _ => Ok(None),
        };
        Ok(ladder(n, &base, &obligation))
    }
}

struct LineGrassmannian;

impl CoindexRoute for LineGrassmannian {
    fn name(&self) -> &'static str {
        "grassmannian-g15"
    }
    fn family(&self) -> &'static str {
        "linear sections of G(1,5)"
    }
    fn genera(&self) -> &'static [u32] {
        &[8]
    }
    fn max_dim(&self) -> Option<usize> {
        Some(8)
    }
    fn verdict(&self, n: usize, _g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let base = |m: usize| match m {
            8 => Some(homogeneous_axiom("G(1,5)")),
            4 => Some(rigid_section_verdict(8)),
            _ => None,
        };
        let obligation = |m: usize| match m {
            6 => res.trace_vanishing("prop_2_11", "H0(Omega(X,3,2)) = 0", 3, 2).map(Some),
            _ => Ok(None),
        };
        Ok(ladder(n, &base, &obligation))
    }
}

/// Genus 9 and 10: homogeneous top, four-folds by vector fields, odd
/// dimensions by the slope analysis.
struct Homogeneous {
    name: &'static str,
    family: &'static str,
    genus: &'static [u32],
    top: usize,
    space: &'static str,
}

impl CoindexRoute for Homogeneous {
    fn name(&self) -> &'static str {
        self.name
    }
    fn family(&self) -> &'static str {
        self.family
    }
    fn genera(&self) -> &'static [u32] {
        self.genus
    }
    fn max_dim(&self) -> Option<usize> {
        Some(self.top)
    }
    fn verdict(&self, n: usize, g: u32, _res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        let base = |m: usize| {
            if m == self.top && m.is_multiple_of(2) {
                Some(homogeneous_axiom(self.space))
            } else if m == 4 {
                Some(rigid_section_verdict(g))
            } else {
                None
            }
        };
        let obligation = |m: usize| Err(format!("no vanishing H0(Ω^{}({})) for genus {g} in dimension {m}", m / 2, m / 2 - 1));
        Ok(ladder(n, &base, &obligation))
    }
}

/// Routes by name.
pub struct RouteRegistry {
    routes: BTreeMap<&'static str, Box<dyn CoindexRoute>>,
}

impl RouteRegistry {
    pub fn empty() -> Self {
        RouteRegistry { routes: BTreeMap::new() }
    }

    pub fn standard() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(DoubleProjective));
        reg.register(Box::new(DoubleQuadric));
        reg.register(Box::new(CompleteIntersection));
        reg.register(Box::new(GushelMukai));
        reg.register(Box::new(Spinor));
        reg.register(Box::new(LineGrassmannian));
        reg.register(Box::new(Homogeneous {
            name: "lagrangian",
            family: "linear sections of the Lagrangian Grassmannian LG(3,6)",
            genus: &[9],
            top: 6,
            space: "LG(3,6)",
        }));
        reg.register(Box::new(Homogeneous {
            name: "g2",
            family: "linear sections of the G2 homogeneous 5-fold",
            genus: &[10],
            top: 5,
            space: "G2/P",
        }));
        reg
    }

    pub fn register(&mut self, route: Box<dyn CoindexRoute>) {
        self.routes.insert(route.name(), route);
    }

    pub fn get(&self, name: &str) -> Option<&dyn CoindexRoute> {
        self.routes.get(name).map(|r| r.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.routes.keys().copied()
    }

    pub fn for_genus(&self, g: u32) -> Vec<&dyn CoindexRoute> {
        self.routes.values().filter(|r| r.genera().contains(&g)).map(|r| r.as_ref()).collect()
    }
}

impl Default for RouteRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

fn run_route(route: &dyn CoindexRoute, n: usize, g: u32, res: &Resources) -> Result<StabilityVerdict, StabilityError> {
    if let Some(top) = route.max_dim() {
        if n > top {
            return Ok(StabilityVerdict::not_applicable(format!("{} has no member of dimension {n}", route.family())));
        }
    }
    match route.verdict(n, g, res) {
        Err(StabilityError::Missing(what)) => Ok(missing(what)),
        other => other,
    }
}

/// Coindex three (`r = n - 2`) by genus. `route` restricts to one named
/// family; otherwise every family of the genus must come out stable.
pub fn coindex3_classify(
    profile: &FanoProfile,
    res: &Resources,
    registry: &RouteRegistry,
    route: Option<&str>,
) -> Result<StabilityVerdict, StabilityError> {
    if profile.r + 2 != profile.n {
        return Ok(StabilityVerdict::not_applicable(format!(
            "index {} in dimension {} is not coindex 3",
            profile.r, profile.n
        )));
    }
    if !profile.b2_is_1 {
        return Ok(StabilityVerdict::not_applicable("b2 is not 1"));
    }
    if profile.n == 3 {
        return Ok(reid_verdict(profile));
    }
    if !profile.assume_es && profile.n > 4 {
        return Ok(StabilityVerdict::not_applicable("(ES) is not assumed"));
    }
    let genera: Vec<u32> = match profile.genus {
        Some(g) => vec![g],
        None => (2..=10).collect(),
    };
    let n = profile.n;
    let mut parts = Vec::new();
    for g in genera {
        let routes = match route {
            Some(name) => {
                let r = registry.get(name).ok_or_else(|| StabilityError::UnknownRoute(name.to_string()))?;
                if !r.genera().contains(&g) {
                    if profile.genus.is_none() {
                        continue;
                    }
                    return Err(StabilityError::UnknownRoute(format!("route {name} does not handle genus {g}")));
                }
                vec![r]
            }
            None => registry.for_genus(g),
        };
        for r in routes {
            let v = run_route(r, n, g, res)?;
            if v.outcome == Outcome::NotApplicable && r.max_dim().is_some_and(|top| n > top) {
                continue;
            }
            parts.push((format!("genus {g}, {} ({})", r.family(), r.name()), v));
        }
    }
    if parts.is_empty() {
        return Ok(StabilityVerdict::not_applicable(format!("no coindex-3 family of the requested genus in dimension {n}")));
    }
    if parts.len() == 1 {
        return Ok(parts.pop().expect("one part").1);
    }
    let labelled: Vec<(&str, StabilityVerdict)> = parts.iter().map(|(l, v)| (l.as_str(), v.clone())).collect();
    Ok(combine(&labelled, &format!("coindex-3 {n}-folds")))
}

/// Stability of the tangent bundle of a Fano manifold with `b2 = 1` from
/// its profile.
pub fn classify(profile: &FanoProfile, res: &Resources, registry: &RouteRegistry, route: Option<&str>) -> Result<StabilityVerdict, StabilityError> {
    let (n, r) = (profile.n, profile.r);
    if !profile.b2_is_1 {
        return Ok(StabilityVerdict::not_applicable("b2 is not 1"));
    }
    if r == n + 1 {
        return Ok(homogeneous_axiom(&format!("P^{n}")));
    }
    if r == n {
        return Ok(homogeneous_axiom(&format!("Q^{n}")));
    }
    if r == 1 {
        return Ok(reid_verdict(profile));
    }
    if r + 1 == n {
        return Ok(del_pezzo_verdict(n));
    }
    if r + 2 == n {
        return coindex3_classify(profile, res, registry, route);
    }
    Ok(StabilityVerdict::not_applicable(format!("coindex {} is beyond the slicing methods (index <= n-3)", profile.coindex())))
}
