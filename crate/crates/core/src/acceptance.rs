//! The acceptance suite: one pass/fail result per criterion.

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chase::{builtin_script, check_trace, mutation_suite, replay, sources_for, Claim, ReplayOutcome, Script, BUILTIN_SCRIPTS};
use crate::special::{flenner_agreement, propagate_section, SpecialCohomologyCertificate};
use crate::stability::{
    classify, coindex3_classify, cyclic_stability, cyclic_thresholds, del_pezzo_verdict, homogeneous_axiom, hypersurface_stability,
    hypersurface_thresholds, FanoProfile, Outcome, Resources, RouteRegistry, StabilityVerdict, ThresholdCase,
};
use crate::tables::{CohomologyTable, Window};
use crate::weyl::{grassmann_cohomology, line_grassmannian_nonvanishing, Grassmannian};

const BUDGET: Duration = Duration::from_secs(300);
const SCRIPT_BUDGET: Duration = Duration::from_secs(5);

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Directory whose `.facts` files override the shipped ones.
    pub facts_dir: Option<PathBuf>,
    pub seed: u64,
    pub random_tuples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { facts_dir: None, seed: 0x5eed, random_tuples: 200 }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {} {}: {} ({:.2}s)", self.id, self.name, self.detail, self.elapsed.as_secs_f64())
    }
}

type Check = fn(&SuiteConfig) -> Result<String, String>;

const CRITERIA: &[(u8, &str, Check)] = &[
    (1, "line-grassmannian closed form vs BWB", closed_form_matches_bwb),
    (2, "Bott formula on projective space", bott_agreement),
    (3, "cell spot checks", spot_checks),
    (4, "complete intersections vs vanishing pattern", complete_intersections),
    (5, "chase replays and mutation suite", chase_replays),
    (6, "stability suite", stability_suite),
    (7, "threshold arithmetic and guards", threshold_arithmetic),
];

/// Run every criterion in order, finishing with the wall-clock budget.
pub fn run_all(config: &SuiteConfig) -> Vec<CriterionResult> {
    run_all_with(config, |_| {})
}

/// As [`run_all`], handing each result to `each` as it completes.
pub fn run_all_with(config: &SuiteConfig, mut each: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let start = Instant::now();
    let mut out = Vec::new();
    for &(id, name, check) in CRITERIA {
        let t0 = Instant::now();
        let (passed, detail) = match check(config) {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let result = CriterionResult { id, name, passed, detail, elapsed: t0.elapsed() };
        each(&result);
        out.push(result);
    }
    let total = start.elapsed();
    let timing = CriterionResult {
        id: 8,
        name: "wall-clock budget",
        passed: total < BUDGET,
        detail: format!("{:.2}s of {}s", total.as_secs_f64(), BUDGET.as_secs()),
        elapsed: total,
    };
    each(&timing);
    out.push(timing);
    out
}

fn closed_form_matches_bwb(_: &SuiteConfig) -> Result<String, String> {
    let mut cells = 0usize;
    let mut mismatches = Vec::new();
    for n in 2..=6usize {
        let top = 2 * (n - 1);
        for q in 0..=top {
            for t in -12..=12 {
                let h = grassmann_cohomology(1, n, q, t).map_err(|e| e.to_string())?;
                for p in 0..=top {
                    cells += 1;
                    let closed = line_grassmannian_nonvanishing(n, p, q, t).map_err(|e| e.to_string())?;
                    if closed != h.contains_key(&p) {
                        mismatches.push(format!("G(1,{n}) H^{p}(Ω^{q}({t}))"));
                    }
                }
            }
        }
    }
    summarize(cells, &mismatches)
}

fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < k {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from((n - i) as u64) / BigUint::from((i + 1) as u64))
}

/// `h^p(P^n, Ω^q(t))` by Bott's formula.
fn bott(n: usize, p: usize, q: usize, t: i64) -> BigUint {
    let (n, p, q) = (n as i64, p as i64, q as i64);
    if p == 0 && t > q {
        binomial(t + n - q, t) * binomial(t - 1, q)
    } else if p == n && t < q - n {
        binomial(-t + q, -t) * binomial(-t - 1, n - q)
    } else if t == 0 && p == q {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

fn bott_agreement(_: &SuiteConfig) -> Result<String, String> {
    let mut cells = 0usize;
    let mut mismatches = Vec::new();
    for n in 1..=8usize {
        let h = |q: usize, t: i64| grassmann_cohomology(0, n, q, t).map_err(|e| e.to_string());
        for q in 0..=n {
            for t in -15..=15 {
                let here = h(q, t)?;
                let dual = h(n - q, -t)?;
                for p in 0..=n {
                    cells += 1;
                    let got = here.get(&p).cloned().unwrap_or_default();
                    if got != bott(n, p, q, t) {
                        mismatches.push(format!("P^{n} H^{p}(Ω^{q}({t})) = {got}"));
                    }
                    if dual.get(&(n - p)).cloned().unwrap_or_default() != got {
                        mismatches.push(format!("P^{n} Serre duality at H^{p}(Ω^{q}({t}))"));
                    }
                    if t == 0 && h(p, 0)?.get(&q).cloned().unwrap_or_default() != got {
                        mismatches.push(format!("P^{n} Hodge symmetry at h^{{{p},{q}}}"));
                    }
                }
                if q == 0 && here.get(&0).cloned().unwrap_or_default() != binomial(n as i64 + t, n as i64) {
                    mismatches.push(format!("P^{n} h^0(O({t}))"));
                }
            }
        }
    }
    summarize(cells, &mismatches)
}

fn spot_checks(_: &SuiteConfig) -> Result<String, String> {
    let checks: [(&str, usize, usize, usize, i64, u32); 4] = [
        ("h^{2,2}(G(1,5))", 5, 2, 2, 0, 2),
        ("H^0(G(1,4), Ω^3(2))", 4, 0, 3, 2, 0),
        ("H^1(G(1,5), Ω^4(2))", 5, 1, 4, 2, 0),
        ("H^2(G(1,5), Ω^4(1))", 5, 2, 4, 1, 0),
    ];
    let mut bad = Vec::new();
    for (label, n, p, q, t, want) in checks {
        let got = grassmann_cohomology(1, n, q, t).map_err(|e| e.to_string())?.get(&p).cloned().unwrap_or_default();
        if got != BigUint::from(want) {
            bad.push(format!("{label} = {got}, expected {want}"));
        }
    }
    summarize(checks.len(), &bad)
}

/// Degree sequences (each at least 2) with sum at most `budget`.
fn degree_sequences(budget: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(seq) = stack.pop() {
        let used: u32 = seq.iter().sum();
        if !seq.is_empty() {
            out.push(seq.clone());
        }
        if seq.len() < max_len {
            for d in 2..=budget.saturating_sub(used) {
                let mut next = seq.clone();
                next.push(d);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

fn complete_intersections(_: &SuiteConfig) -> Result<String, String> {
    const RADIUS: i64 = 10;
    const TOTAL: u32 = 6;
    let mut cells = 0usize;
    let mut varieties = 0usize;
    let mut mismatches = Vec::new();
    for big_n in 4..=7usize {
        let grass = Grassmannian::projective(big_n).map_err(|e| e.to_string())?;
        let table = CohomologyTable::from_grassmannian(grass, Window::symmetric(RADIUS + TOTAL as i64));
        let ambient = SpecialCohomologyCertificate::certify(table).map_err(|e| e.to_string())?;
        for degrees in degree_sequences(TOTAL, big_n - 3) {
            let mut cert = ambient.clone();
            let mut remaining: u32 = degrees.iter().sum();
            for &d in &degrees {
                remaining -= d;
                let window = Window::symmetric(RADIUS + remaining as i64);
                cert = propagate_section(&cert, d, window).map_err(|e| format!("P^{big_n} {degrees:?}: {e}"))?;
            }
            varieties += 1;
            cells += cert.table.window_cells().len();
            for cell in flenner_agreement(&cert).map_err(|e| e.to_string())? {
                mismatches.push(format!("{degrees:?} in P^{big_n} at {cell}"));
            }
        }
    }
    summarize(cells, &mismatches).map(|s| format!("{varieties} complete intersections, {s}"))
}

fn chase_replays(config: &SuiteConfig) -> Result<String, String> {
    let dir = config.facts_dir.as_deref();
    let mut goals = 0;
    let mut mutants = 0;
    for (name, text) in BUILTIN_SCRIPTS {
        let start = Instant::now();
        let script = Script::parse(name, text).map_err(|e| format!("{name}: {e}"))?;
        let sources = sources_for(&script, dir).map_err(|e| format!("{name}: {e}"))?;
        let trace = match replay(&script, &sources).map_err(|e| format!("{name}: {e}"))? {
            ReplayOutcome::Proved(t) => t,
            ReplayOutcome::Stuck(r) => {
                let report = r.to_string().trim_end().replace('\n', "; ");
                return Err(format!("{name} stuck with facts from {}: {report}", fact_origins(&script, dir)));
            }
        };
        if start.elapsed() > SCRIPT_BUDGET {
            return Err(format!("{name} took {:.2}s", start.elapsed().as_secs_f64()));
        }
        check_trace(&trace.render(), &sources).map_err(|e| format!("{name}: trace check: {e}"))?;
        goals += trace.goals.len();
        for outcome in mutation_suite(&script, &sources).map_err(|e| format!("{name}: {e}"))? {
            mutants += 1;
            if !(outcome.stuck && outcome.named) {
                return Err(format!("{name}: withholding {} does not leave the chase stuck on it", outcome.fact));
            }
        }
    }
    let descent = builtin_script("lemma_2_12").ok_or("descent script missing")?;
    let script = Script::parse("lemma_2_12", descent).map_err(|e| e.to_string())?;
    let sources = sources_for(&script, dir).map_err(|e| e.to_string())?;
    if let ReplayOutcome::Proved(trace) = replay(&script, &sources).map_err(|e| e.to_string())? {
        for k in 5..=9 {
            let wanted = Claim::parse(&format!("H1(Omega(X{k},2,1)) = 0")).map_err(|e| e.to_string())?;
            if !trace.goals.iter().any(|(c, _)| *c == wanted) {
                return Err(format!("descent does not reach X{k}"));
            }
        }
    }
    Ok(format!("{} scripts, {goals} goals checked, {mutants} mutants all stuck", BUILTIN_SCRIPTS.len()))
}

fn fact_origins(script: &Script, dir: Option<&std::path::Path>) -> String {
    let origins: Vec<String> = script
        .fact_files()
        .into_iter()
        .map(|stem| {
            let file = format!("{stem}.facts");
            match dir.map(|d| d.join(&file)).filter(|p| p.exists()) {
                Some(path) => path.display().to_string(),
                None => format!("shipped {file}"),
            }
        })
        .collect();
    if origins.is_empty() {
        "no fact files".into()
    } else {
        origins.join(", ")
    }
}

fn expect_stable(v: &StabilityVerdict, what: String, failures: &mut Vec<String>) {
    if v.outcome != Outcome::Stable || !v.is_backed() {
        failures.push(format!("{what}: {}", v.outcome));
    }
}

fn stability_suite(config: &SuiteConfig) -> Result<String, String> {
    let res = match &config.facts_dir {
        Some(dir) => Resources::with_facts_dir(dir),
        None => Resources::shipped(),
    };
    let reg = RouteRegistry::standard();
    let mut failures = Vec::new();
    let mut verdicts = 0;
    for n in 3..=10 {
        verdicts += 1;
        expect_stable(&del_pezzo_verdict(n), format!("del Pezzo n={n}"), &mut failures);
    }
    for n in 1..=12 {
        verdicts += 1;
        let v = classify(&FanoProfile::new(n, 1).map_err(|e| e.to_string())?, &res, &reg, None).map_err(|e| e.to_string())?;
        expect_stable(&v, format!("index 1 n={n}"), &mut failures);
    }
    let mut skipped = 0;
    for n in 4..=10 {
        for g in 2..=10 {
            let profile = FanoProfile::new(n, n - 2).and_then(|p| p.with_genus(g)).map_err(|e| e.to_string())?.assume_es(true);
            let v = coindex3_classify(&profile, &res, &reg, None).map_err(|e| e.to_string())?;
            if v.outcome == Outcome::NotApplicable && reg.for_genus(g).iter().all(|r| r.max_dim().is_some_and(|top| n > top)) {
                skipped += 1;
                continue;
            }
            verdicts += 1;
            expect_stable(&v, format!("coindex 3 n={n} g={g}"), &mut failures);
        }
    }
    for r in 1..=5 {
        verdicts += 1;
        let v = classify(&FanoProfile::new(4, r).map_err(|e| e.to_string())?, &res, &reg, None).map_err(|e| e.to_string())?;
        expect_stable(&v, format!("4-fold of index {r}"), &mut failures);
    }
    if failures.is_empty() {
        Ok(format!("{verdicts} verdicts Stable ({skipped} (n,g) without a family skipped)"))
    } else {
        Err(failures.join("; "))
    }
}

fn check_case(case: &ThresholdCase, what: &str, failures: &mut Vec<String>) {
    match case {
        ThresholdCase::Checked(rows) => {
            for row in rows.iter().filter(|r| !r.holds()) {
                failures.push(format!("{what}: q={} target {} not below {}", row.q, row.target, row.vanishing));
            }
        }
        ThresholdCase::KodairaNakano => {}
        ThresholdCase::Excluded(why) => failures.push(format!("{what}: unexpectedly excluded ({why})")),
    }
}

fn threshold_arithmetic(config: &SuiteConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut failures = Vec::new();
    let err = |e: crate::stability::StabilityError| e.to_string();
    for i in 0..config.random_tuples {
        if i % 2 == 0 {
            let n = rng.gen_range(3..=12usize);
            let d = rng.gen_range(1..=n as u32 + 4);
            let s = loop {
                let s = rng.gen_range(1..=n as i64 + 2);
                if !(d == 1 && s > n as i64) {
                    break s;
                }
            };
            check_case(&hypersurface_thresholds(n, s, d).map_err(err)?, &format!("hypersurface n={n} s={s} d={d}"), &mut failures);
        } else {
            let dim = rng.gen_range(3..=12usize);
            let k = rng.gen_range(2..=5u32);
            let d = rng.gen_range(1..=(dim as u32 + 1) / (k - 1)).max(1);
            let s = loop {
                let s = rng.gen_range((k - 1) as i64 * d as i64..=dim as i64 + 1);
                if !(s == dim as i64 + 1 && k == 2 && d == 1) {
                    break s;
                }
            };
            check_case(&cyclic_thresholds(dim, s, k, d).map_err(err)?, &format!("cyclic dim={dim} s={s} k={k} d={d}"), &mut failures);
        }
    }
    let mut boundaries = 0;
    for n in 3..=10usize {
        let ni = n as i64;
        for s in 1..=ni + 3 {
            for d in 1..=n as u32 + 3 {
                boundaries += 1;
                let excluded = s > ni + 2 || (d == 1 && (s == ni + 2 || s == ni + 1));
                let case = hypersurface_thresholds(n, s, d).map_err(err)?;
                if excluded != matches!(case, ThresholdCase::Excluded(_)) {
                    failures.push(format!("hypersurface guard at n={n} s={s} d={d}"));
                }
                for k in 1..=4u32 {
                    boundaries += 1;
                    let excluded = k < 2 || s > ni + 1 || s < (k as i64 - 1) * d as i64 || (s == ni + 1 && k == 2 && d == 1);
                    let case = cyclic_thresholds(n, s, k, d).map_err(err)?;
                    if excluded != matches!(case, ThresholdCase::Excluded(_)) {
                        failures.push(format!("cyclic guard at dim={n} s={s} k={k} d={d}"));
                    }
                }
            }
        }
    }
    let mut verdicts = 0;
    for big_n in 4..=7usize {
        let g = Grassmannian::projective(big_n).map_err(|e| e.to_string())?;
        let cert = SpecialCohomologyCertificate::certify(CohomologyTable::from_grassmannian(g, Window::symmetric(big_n as i64 + 3)))
            .map_err(|e| e.to_string())?;
        let omega = homogeneous_axiom(&format!("P^{big_n}"));
        for d in 2..=big_n as u32 + 2 {
            verdicts += 1;
            let v = hypersurface_stability(&cert, d, &omega).map_err(err)?;
            expect_stable(&v, format!("degree-{d} hypersurface in P^{big_n}"), &mut failures);
        }
        for (k, d) in [(2, 2), (2, 3), (3, 1), (3, 2), (4, 1)] {
            if (k as usize - 1) * d as usize > big_n + 1 {
                continue;
            }
            verdicts += 1;
            let v = cyclic_stability(&cert, k, d, &omega).map_err(err)?;
            expect_stable(&v, format!("{k}-fold cover of P^{big_n} branched in degree {}", k * d), &mut failures);
        }
    }
    if failures.is_empty() {
        Ok(format!("{} random tuples, {boundaries} guard cases, {verdicts} certificate verdicts", config.random_tuples))
    } else {
        Err(failures.join("; "))
    }
}

fn summarize(cells: usize, mismatches: &[String]) -> Result<String, String> {
    if mismatches.is_empty() {
        Ok(format!("{cells} cells, 0 mismatches"))
    } else {
        let shown: Vec<&str> = mismatches.iter().take(5).map(String::as_str).collect();
        Err(format!("{cells} cells, {} mismatches: {}", mismatches.len(), shown.join(", ")))
    }
}
