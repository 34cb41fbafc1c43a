use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fanostab_core::special::SpecialCohomologyCertificate;
use fanostab_core::tables::FactStore;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fanostab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanostab")).args(args).env_remove("FANOSTAB_FACTS_DIR").output().expect("run fanostab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn middle_hodge_number_of_g15() {
    let o = fanostab(&["cohomology", "--space", "G(1,5)", "--q", "2", "--t-range", "0:0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "p=2: 2"), "{out}");
    assert!(out.lines().any(|l| l == "p=0:"), "zero cells are blank:\n{out}");
}

#[test]
fn cotangent_of_p3() {
    let o = fanostab(&["cohomology", "--space", "P(3)", "--q", "1", "--t-range", "0:0"]);
    assert!(stdout(&o).lines().any(|l| l == "p=1: 1"));
}

#[test]
fn no_sections_of_three_forms_twisted_by_two_on_g14() {
    let o = fanostab(&["cohomology", "--space", "G(1,4)", "--q", "3", "--t-range", "2:2", "--p", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l == "p=0:"), "{}", stdout(&o));
}

#[test]
fn default_window_is_announced() {
    let out = stdout(&fanostab(&["cohomology", "--space", "P(2)", "--q", "0"]));
    assert!(out.contains("t-range -10:10 (default |t| <= 10)"), "{out}");
}

#[test]
fn records_reingest_as_facts() {
    let o = fanostab(&["cohomology", "--space", "G(1,4)", "--q", "3", "--t-range", "-3:3", "--format", "records"]);
    let store = FactStore::ingest_facts(&stdout(&o), "cli").unwrap();
    assert_eq!(store.cells().count(), stdout(&o).lines().filter(|l| l.starts_with("dim ")).count());
    assert!(store.cells().count() > 0);
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(code(&fanostab(&["cohomology", "--space", "Q(3)", "--q", "1"])), 2);
    assert_eq!(code(&fanostab(&["cohomology", "--space", "P(3)", "--q", "9"])), 2);
    assert_eq!(code(&fanostab(&["cohomology", "--space", "P(3)", "--q", "1", "--t-range", "4:1"])), 2);
    assert_eq!(code(&fanostab(&["frobnicate"])), 2);
}

#[test]
fn cubic_fourfold_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cubic.cert");
    let o = fanostab(&["special", "--from", "P(5)", "--section", "3", "--window", "-8:8", "--out", path(&cert)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("special: yes"));
    let parsed = SpecialCohomologyCertificate::from_text(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    parsed.validate().unwrap();
    assert_eq!(parsed.dim(), 4);
    assert_eq!((parsed.window.min, parsed.window.max), (-8, 8));
}

#[test]
fn quartic_double_solid_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("solid.cert");
    let o = fanostab(&["special", "--from", "P(3)", "--cover", "2", "3", "--window", "-6:6", "--out", path(&cert)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("special: yes"));
    assert!(cert.exists());
}

#[test]
fn steps_apply_in_command_line_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.cert");
    let o = fanostab(&["special", "--from", "P(6)", "--cover", "2", "1", "--section", "2", "--window", "-3:3", "--out", path(&a)]);
    assert!(stdout(&o).contains("space P(6).cover2x1.cut2 "), "{}", stdout(&o));
}

#[test]
fn g14_is_not_special() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("g14.cert");
    let o = fanostab(&["special", "--from", "G(1,4)", "--window", "-4:4", "--out", path(&cert)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("special: no"));
    assert!(out.contains("(c) at (p=2,q=2,t=0): found 2, expected 1"), "{out}");
    assert!(!cert.exists());
}

fn script(name: &str) -> String {
    root().join("scripts").join(format!("{name}.chase")).to_str().unwrap().to_string()
}

#[test]
fn chase_scripts_succeed() {
    let o = fanostab(&["chase", "--script", &script("prop_2_11")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("trace checked"));

    let facts = root().join("facts/spinor10.facts");
    let o = fanostab(&["chase", "--script", &script("lemma_2_13"), "--facts", path(&facts)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn truncated_facts_leave_the_chase_stuck() {
    let dir = tempfile::tempdir().unwrap();
    let full = std::fs::read_to_string(root().join("facts/spinor10.facts")).unwrap();
    let cut: String = full.lines().filter(|l| !l.starts_with("vanish S10 p 1 q 3 t 1")).map(|l| format!("{l}\n")).collect();
    let facts = dir.path().join("spinor10.facts");
    std::fs::write(&facts, cut).unwrap();
    let o = fanostab(&["chase", "--script", &script("lemma_2_12"), "--facts", path(&facts)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("missing fact H1(Omega(S10,3,1))"), "{}", stdout(&o));
}

#[test]
fn chase_parse_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.chase");
    std::fs::write(&bad, "frobnicate X\n").unwrap();
    assert_eq!(code(&fanostab(&["chase", "--script", path(&bad)])), 2);
}

#[test]
fn chase_trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let o = fanostab(&["chase", "--script", &script("prop_2_9"), "--trace-out", path(&trace)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(stdout(&o).starts_with(&text));
}

#[test]
fn stability_verdicts() {
    let o = fanostab(&["stability", "--n", "4", "--index", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("VERDICT Stable"));
    assert!(stdout(&o).contains("STEP 1: "));

    let o = fanostab(&["stability", "--n", "6", "--index", "4", "--genus", "8", "--assume-es"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("DEPENDS trace:prop_2_11"), "{}", stdout(&o));

    let o = fanostab(&["stability", "--n", "5", "--index", "3", "--genus", "6", "--assume-es"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("VERDICT Stable"));
}

#[test]
fn stability_negative_and_invalid() {
    assert_eq!(code(&fanostab(&["stability", "--n", "5", "--index", "3", "--genus", "11"])), 2);
    assert_eq!(code(&fanostab(&["stability", "--n", "5", "--index", "2", "--genus", "6", "--assume-es"])), 2);
    assert_eq!(code(&fanostab(&["stability", "--n", "4", "--index", "7"])), 2);
    assert_eq!(code(&fanostab(&["stability", "--n", "6", "--index", "4", "--genus", "8", "--assume-es", "--route", "nope"])), 2);
    let o = fanostab(&["stability", "--n", "7", "--index", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("VERDICT NotApplicable"));
    let o = fanostab(&["stability", "--n", "6", "--index", "4", "--genus", "7"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn routes_are_listed_and_selectable() {
    let o = fanostab(&["stability", "--list-routes"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("spinor\t")));
    let o = fanostab(&["stability", "--n", "5", "--index", "3", "--genus", "3", "--assume-es", "--route", "double-quadric"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn output_is_deterministic() {
    let args = ["stability", "--n", "8", "--index", "6", "--genus", "7", "--assume-es"];
    assert_eq!(fanostab(&args).stdout, fanostab(&args).stdout);
    let args = ["cohomology", "--space", "G(1,5)", "--q", "4", "--format", "records"];
    assert_eq!(fanostab(&args).stdout, fanostab(&args).stdout);
}

#[test]
fn selftest_passes_and_names_a_corrupted_fixture() {
    let o = fanostab(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 8);

    let dir = tempfile::tempdir().unwrap();
    let full = std::fs::read_to_string(root().join("facts/spinor10.facts")).unwrap();
    let cut: String = full.lines().filter(|l| !l.starts_with("vanish S10 p 1 q 3 t 1")).map(|l| format!("{l}\n")).collect();
    let fixture = dir.path().join("spinor10.facts");
    std::fs::write(&fixture, cut).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fanostab")).arg("selftest").env("FANOSTAB_FACTS_DIR", dir.path()).output().unwrap();
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("[FAIL] 5") && l.contains(path(&fixture))), "{out}");
}
