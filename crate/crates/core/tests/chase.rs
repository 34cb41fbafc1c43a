use std::time::{Duration, Instant};

use fanostab_core::chase::{
    builtin_facts, builtin_script, check_trace, load_bearing_facts, mutation_suite, replay, sources_for, Claim,
    FactRef, FactSources, ReplayOutcome, Script, BUILTIN_SCRIPTS,
};
use fanostab_core::tables::FactStore;

fn script(name: &str) -> Script {
    Script::parse(name, builtin_script(name).unwrap()).unwrap()
}

fn proved(name: &str) -> (Script, FactSources, fanostab_core::chase::ProofTrace) {
    let s = script(name);
    let sources = sources_for(&s, None).unwrap();
    match replay(&s, &sources).unwrap() {
        ReplayOutcome::Proved(t) => (s, sources, t),
        ReplayOutcome::Stuck(r) => panic!("{name} stuck:\n{r}"),
    }
}

#[test]
fn every_script_replays_and_checks() {
    for (name, _) in BUILTIN_SCRIPTS {
        let start = Instant::now();
        let (_, sources, trace) = proved(name);
        assert!(start.elapsed() < Duration::from_secs(5), "{name} took {:?}", start.elapsed());
        let report = check_trace(&trace.render(), &sources).unwrap_or_else(|e| panic!("{name}: {e}\n{trace}"));
        assert_eq!(report.goals, trace.goals.len());
        assert!(report.facts > 0);
    }
}

#[test]
fn g15_section_chase_concludes_on_the_six_fold() {
    let (_, _, trace) = proved("prop_2_11");
    let goal = Claim::parse("H0(Omega(X,3,2)) = 0").unwrap();
    assert!(trace.goals.iter().any(|(c, _)| *c == goal));
    let hist = trace.rule_histogram();
    assert!(hist.contains_key("hard-lefschetz"));
    assert!(hist.contains_key("dimension-count"));
    assert!(hist.contains_key("composite-prefix-surjective"));
}

#[test]
fn spinor_eight_fold_chase_concludes() {
    let (_, _, trace) = proved("lemma_2_13");
    let goal = Claim::parse("H0(Omega(X,4,3)) = 0").unwrap();
    assert!(trace.goals.iter().any(|(c, _)| *c == goal));
    assert!(trace.render().contains("from spinor10.facts:"));
}

#[test]
fn deleting_a_spinor_line_names_it() {
    let s = script("lemma_2_13");
    let text: String = builtin_facts("spinor10")
        .unwrap()
        .lines()
        .filter(|l| l.trim() != "vanish S10 p 1 q 6 t 4")
        .map(|l| format!("{l}\n"))
        .collect();
    let store = FactStore::ingest_facts(&text, "spinor10.facts").unwrap();
    match replay(&s, &FactSources::new(store)).unwrap() {
        ReplayOutcome::Stuck(r) => {
            let fact = FactRef::Cell { space: "S10".into(), p: 1, q: 6, t: 4 };
            assert!(r.missing.contains(&fact), "{r}");
            assert!(r.to_string().contains("H1(Omega(S10,6,4))"));
        }
        ReplayOutcome::Proved(_) => panic!("replay should be stuck"),
    }
}

#[test]
fn mutation_suite_sticks_every_script() {
    for (name, _) in BUILTIN_SCRIPTS {
        let (s, sources, trace) = proved(name);
        assert!(!load_bearing_facts(&trace).is_empty(), "{name}");
        for m in mutation_suite(&s, &sources).unwrap() {
            assert!(m.stuck && m.named, "{name}: withholding {} left the chase unstuck", m.fact);
        }
    }
}

#[test]
fn tampered_trace_is_rejected() {
    let (_, sources, trace) = proved("prop_2_11");
    let text = trace.render();
    let tampered = text.replacen("kodaira-nakano", "degree-range", 1);
    if tampered != text {
        assert!(check_trace(&tampered, &sources).is_err());
    }
    let wrong_value = text.replacen("H3(Omega(G,3,0)) = 2", "H3(Omega(G,3,0)) = 3", 1);
    assert!(check_trace(&wrong_value, &sources).is_err());
    let forged = text.replacen("hard-lefschetz", "cupping-lemma", 1);
    assert!(check_trace(&forged, &sources).is_err());
}

#[test]
fn weyl_facts_agree_with_bott() {
    for (name, _) in BUILTIN_SCRIPTS {
        let (_, _, trace) = proved(name);
        for s in trace.fact_steps() {
            if let Some(ctx) = &s.context {
                if ctx.starts_with("weyl:") {
                    assert!(ctx == "weyl:G(1,4)" || ctx == "weyl:G(1,5)", "{ctx}");
                }
            }
        }
    }
}
