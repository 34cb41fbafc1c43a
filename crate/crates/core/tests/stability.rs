use std::collections::BTreeMap;

use fanostab_core::chase::{builtin_script, check_trace, replay, sources_for, ReplayOutcome, Script};
use fanostab_core::stability::{
    classify, coindex3_classify, del_pezzo_verdict, lemma26_criterion, prop24_analyze, Backing, CoindexRoute, FanoProfile, H0Vanishing,
    Outcome, Resources, RouteRegistry, StabilityError, StabilityVerdict, Support,
};

fn coindex3(n: usize, g: u32) -> FanoProfile {
    FanoProfile::new(n, n - 2).unwrap().with_genus(g).unwrap().assume_es(true)
}

fn recheck(v: &StabilityVerdict) {
    for name in v.traces() {
        let script = Script::parse(name, builtin_script(name).unwrap()).unwrap();
        let sources = sources_for(&script, None).unwrap();
        let trace = match replay(&script, &sources).unwrap() {
            ReplayOutcome::Proved(t) => t,
            ReplayOutcome::Stuck(r) => panic!("{name} stuck: {r}"),
        };
        check_trace(&trace.render(), &sources).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

fn assert_stable(v: &StabilityVerdict, what: &str) {
    assert_eq!(v.outcome, Outcome::Stable, "{what}:\n{v}");
    assert!(v.is_backed(), "{what}");
    recheck(v);
}

#[test]
fn del_pezzo_manifolds_are_stable() {
    for n in 3..=10 {
        assert_stable(&del_pezzo_verdict(n), &format!("del Pezzo {n}-fold"));
    }
}

#[test]
fn index_one_is_stable_in_every_dimension() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    for n in 2..=12 {
        let v = classify(&FanoProfile::new(n, 1).unwrap(), &res, &reg, None).unwrap();
        assert_stable(&v, &format!("index 1, n={n}"));
    }
}

#[test]
fn every_admissible_coindex_three_profile_is_stable() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    for n in 4..=10 {
        for g in 2..=10 {
            let v = coindex3_classify(&coindex3(n, g), &res, &reg, None).unwrap();
            if v.outcome == Outcome::NotApplicable {
                assert!(reg.for_genus(g).iter().all(|r| r.max_dim().is_some_and(|top| n > top)), "n={n} g={g}:\n{v}");
                continue;
            }
            assert_stable(&v, &format!("n={n} g={g}"));
        }
    }
}

#[test]
fn fourfolds_of_every_index_are_stable() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    for r in 1..=5 {
        let v = classify(&FanoProfile::new(4, r).unwrap(), &res, &reg, None).unwrap();
        assert_stable(&v, &format!("index {r}"));
    }
}

#[test]
fn named_examples() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    let four = coindex3_classify(&coindex3(4, 7), &res, &reg, None).unwrap();
    assert_stable(&four, "spinor 4-fold");
    assert!(four.log().contains("prokhorov"), "{four}");

    let six = coindex3_classify(&coindex3(6, 8), &res, &reg, None).unwrap();
    assert_stable(&six, "G(1,5) section 6-fold");
    assert!(six.traces().contains("prop_2_11"), "{six}");

    let eight = coindex3_classify(&coindex3(8, 7), &res, &reg, None).unwrap();
    assert_stable(&eight, "spinor 8-fold");
    assert!(eight.traces().contains("lemma_2_13"), "{eight}");
}

#[test]
fn forbidden_genera_are_rejected() {
    for (n, g) in [(5, 11), (5, 12), (4, 13), (6, 1)] {
        let err = FanoProfile::new(n, n - 2).unwrap().with_genus(g).unwrap_err();
        assert!(matches!(err, StabilityError::InvalidProfile(_)), "n={n} g={g}");
    }
    assert!(FanoProfile::new(3, 1).unwrap().with_genus(12).is_ok());
    assert!(FanoProfile::new(4, 6).is_err());
}

#[test]
fn withheld_resources_are_named() {
    let reg = RouteRegistry::standard();
    let res = Resources::shipped().withhold("prop_2_11");
    let v = coindex3_classify(&coindex3(6, 8), &res, &reg, None).unwrap();
    assert_eq!(v.outcome, Outcome::Unknown);
    assert!(v.log().contains("prop_2_11"), "{v}");

    let res = Resources::shipped().withhold("certificates");
    let v = coindex3_classify(&coindex3(5, 4), &res, &reg, None).unwrap();
    assert_eq!(v.outcome, Outcome::Unknown);
    assert!(v.log().contains("certificates"), "{v}");
}

#[test]
fn routes_are_selectable_by_name() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    let names: Vec<_> = reg.names().collect();
    for expected in ["complete-intersection", "double-projective", "double-quadric", "gushel-mukai", "spinor", "grassmannian-g15", "lagrangian", "g2"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    let v = coindex3_classify(&coindex3(5, 3), &res, &reg, Some("double-quadric")).unwrap();
    assert_stable(&v, "double quadric 5-fold");
    assert!(matches!(
        coindex3_classify(&coindex3(5, 3), &res, &reg, Some("spinor")),
        Err(StabilityError::UnknownRoute(_))
    ));
    assert!(matches!(coindex3_classify(&coindex3(5, 3), &res, &reg, Some("nope")), Err(StabilityError::UnknownRoute(_))));
}

struct AlwaysOpen;

impl CoindexRoute for AlwaysOpen {
    fn name(&self) -> &'static str {
        "always-open"
    }
    fn family(&self) -> &'static str {
        "a test family"
    }
    fn genera(&self) -> &'static [u32] {
        &[6]
    }
    fn verdict(&self, _n: usize, _g: u32, _res: &Resources) -> Result<StabilityVerdict, StabilityError> {
        Ok(StabilityVerdict::unknown("nothing known"))
    }
}

#[test]
fn a_registered_route_joins_its_genus() {
    let res = Resources::shipped();
    let mut reg = RouteRegistry::standard();
    reg.register(Box::new(AlwaysOpen));
    assert_eq!(coindex3_classify(&coindex3(4, 6), &res, &reg, None).unwrap().outcome, Outcome::Unknown);
    assert_eq!(coindex3_classify(&coindex3(4, 6), &res, &reg, Some("gushel-mukai")).unwrap().outcome, Outcome::Stable);
}

#[test]
fn even_dimension_needs_the_middle_vanishing() {
    let section = del_pezzo_verdict(3);
    assert_eq!(prop24_analyze(5, Some(&section), None).outcome, Outcome::Stable);
    assert_eq!(prop24_analyze(4, Some(&section), None).outcome, Outcome::Semistable);
    assert_eq!(prop24_analyze(4, None, None).outcome, Outcome::Unknown);
    let fact = H0Vanishing { q: 2, t: 1, support: Support::single("H0(Omega(X,2,1)) = 0", "given", Backing::Assumption) };
    assert_eq!(prop24_analyze(4, Some(&section), Some(&fact)).outcome, Outcome::Stable);
    let wrong = H0Vanishing { q: 2, t: 0, ..fact };
    assert_ne!(prop24_analyze(4, Some(&section), Some(&wrong)).outcome, Outcome::Stable);
}

#[test]
fn tangent_vanishing_criterion() {
    let zero = |m: usize| Support::single(format!("H0(T_X{m}) = 0"), "given", Backing::Assumption);
    let mut cells = BTreeMap::new();
    cells.insert(3, zero(3));
    assert_eq!(lemma26_criterion(4, &cells).outcome, Outcome::Stable);
    assert_eq!(lemma26_criterion(6, &cells).outcome, Outcome::Unknown);
    assert!(lemma26_criterion(6, &cells).log().contains("m=4"));
    cells.insert(4, zero(4));
    assert_eq!(lemma26_criterion(6, &cells).outcome, Outcome::Stable);
    assert_eq!(lemma26_criterion(6, &BTreeMap::new()).outcome, Outcome::Unknown);
}

#[test]
fn beyond_coindex_three_is_out_of_scope() {
    let res = Resources::shipped();
    let reg = RouteRegistry::standard();
    let v = classify(&FanoProfile::new(7, 3).unwrap(), &res, &reg, None).unwrap();
    assert_eq!(v.outcome, Outcome::NotApplicable);
}
