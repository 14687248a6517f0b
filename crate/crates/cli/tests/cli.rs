use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use torus_bundles::classify::{block_form, classify, iwasawa_form, split_form, ProblemInstance};
use torus_bundles::AlternatingLatticeForm;

fn tbclass(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tbclass"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn tbclass");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn corpus_file(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn bare(a: AlternatingLatticeForm) -> String {
    ProblemInstance { a, v: None, u: None }.to_json()
}

#[test]
fn every_corpus_file_validates() {
    for entry in std::fs::read_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")).unwrap() {
        let path = entry.unwrap().path();
        let (code, out, err) = tbclass(&["validate", "--instance", path.to_str().unwrap()], "");
        assert_eq!(code, 0, "{}: {err}", path.display());
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["valid"], Value::Bool(true));
    }
}

#[test]
fn malformed_input_exits_with_2() {
    let (code, _, err) = tbclass(&["classify"], "not json");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));

    let not_alternating = r#"{"A": {"m": 1, "d": 1, "components": [[[0, 1], [1, 0]], [[0, 0], [0, 0]]]}}"#;
    assert_eq!(tbclass(&["validate"], not_alternating).0, 2);

    let wrong_size = r#"{"A": {"m": 2, "d": 1, "components": [[[0, 1], [-1, 0]], [[0, 0], [0, 0]]]}}"#;
    assert_eq!(tbclass(&["validate"], wrong_size).0, 2);

    assert_eq!(tbclass(&["decompose", "--instance", &corpus_file("block_example")], "").0, 2);
    assert_eq!(tbclass(&["validate", "--instance", "/nonexistent/instance.json"], "").0, 2);
}

#[test]
fn unmet_preconditions_exit_with_3() {
    let (code, _, err) = tbclass(&["invariants", "--instance", &corpus_file("violating_pair")], "");
    assert_eq!(code, 3, "{err}");
    let degenerate = r#"{"A": {"m": 1, "d": 1, "components": [[[0, 1], [-1, 0]], [[0, 0], [0, 0]]]}, "V": {"basis": [["1"], ["1"]]}}"#;
    assert_eq!(tbclass(&["validate"], degenerate).0, 3);
    let cubic = corpus_file("cubic_d1");
    assert_eq!(tbclass(&["pencil", "--instance", &cubic], "").0, 3);
}

#[test]
fn violating_pair_still_classifies() {
    let (code, out, _) = tbclass(&["classify", "--instance", &corpus_file("violating_pair")], "");
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["riemann_ok"], Value::Bool(false));
    assert_eq!(r["bracket_closure"], Value::Bool(false));
}

#[test]
fn decompose_reports_obstruction() {
    let (code, out, _) = tbclass(&["decompose", "--format", "text", "--instance", &corpus_file("violating_pair")], "");
    assert_eq!(code, 0);
    assert!(out.contains("riemann relation: fails"));
    let (_, out, _) = tbclass(&["decompose", "--instance", &corpus_file("iwasawa")], "");
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["riemann_ok"], Value::Bool(true));
}

#[test]
fn group_check_succeeds() {
    let (code, out, _) = tbclass(
        &["group-check", "--points", "20", "--seed", "3", "--instance", &corpus_file("deformed_iwasawa")],
        "",
    );
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert!(r["inversion_counterexamples"].as_u64().unwrap() > 0);
}

#[test]
fn deformed_instance_round_trips_through_invariants() {
    let (_, instance, _) = tbclass(&["iwasawa", "--deformed"], "");
    let (code, out, _) = tbclass(&["invariants"], &instance);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["cohomology"]["h1_O"], 3);
    assert_eq!(r["deformation"]["ks_surjective_case"], "none");
}

#[test]
fn find_witness_supplies_a_bundle_point() {
    let (code, out, _) = tbclass(&["classify", "--find-witness", "--seed", "1"], &bare(split_form()));
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["main_theorem_verdict"], "connected-component");
    assert!(!r["witness"].is_null());
}

#[test]
fn text_output_is_deterministic() {
    let run = || tbclass(&["classify", "--format", "text", "--instance", &corpus_file("iwasawa")], "").1;
    assert_eq!(run(), run());
}

fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        if rng.gen_bool(0.2) {
            for row in &mut p {
                row.swap(a, b);
            }
        } else {
            let k = rng.gen_range(-2..=2);
            for row in &mut p {
                row[a] += k * row[b];
            }
        }
    }
    p
}

#[test]
fn verdict_is_invariant_under_lattice_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for form in [iwasawa_form(), split_form(), block_form()] {
        let base = classify(&ProblemInstance { a: form.clone(), v: None, u: None }).unwrap();
        for _ in 0..10 {
            let p = unimodular(&mut rng, 4);
            let n = unimodular(&mut rng, 2);
            let moved = form.change_gamma_basis(&p).unwrap().recombine_lambda(&n).unwrap();
            let r = classify(&ProblemInstance { a: moved.clone(), v: None, u: None }).unwrap();
            assert_eq!(r.main_theorem_verdict, base.main_theorem_verdict);
            assert_eq!(r.pencil.as_ref().map(|p| p.real_point_verdict), base.pencil.as_ref().map(|p| p.real_point_verdict));
            assert_eq!((r.form.kernel_dim, r.form.image_dim), (base.form.kernel_dim, base.form.image_dim));
        }
        let moved = form.change_gamma_basis(&unimodular(&mut rng, 4)).unwrap();
        let (code, out, _) = tbclass(&["classify"], &bare(moved));
        assert_eq!(code, 0);
        let r: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(r["main_theorem_verdict"], base.main_theorem_verdict.as_str());
    }
}
