use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use hgspectra_core::report::{from_json, Format, Payload};
use hgspectra_core::Verdict;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hgspectra"));
    c.env_remove("HGSPECTRA_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(text: &str) {
    let doc: Value = serde_json::from_str(text).unwrap();
    let v = schema();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema errors: {errors:#?}");
}

struct Fixtures {
    _dir: tempfile::TempDir,
    k34: PathBuf,
    bowtie: PathBuf,
    k33: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let k34 = dir.path().join("k34.hg");
    let bowtie = dir.path().join("bowtie.hg");
    let k33 = dir.path().join("k33.hg");
    for (path, args) in [
        (&k34, vec!["--family", "complete", "--n", "4", "--m", "3"]),
        (&bowtie, vec!["--family", "bowtie"]),
        (&k33, vec!["--family", "complete", "--n", "3", "--m", "3"]),
    ] {
        let mut full = vec!["gen"];
        full.extend(args);
        full.extend(["--output", path.to_str().unwrap()]);
        assert_valid(&stdout(&run(&full)));
    }
    Fixtures { _dir: dir, k34, bowtie, k33 }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generated_laplacian_of_k34() {
    let hg = stdout(&run(&["gen", "--family", "complete", "--n", "4", "--m", "3"]));
    assert!(hg.starts_with("p hg 4 4\n"));
    let text = stdout(&run_stdin(&["spectrum", "--matrix", "laplacian"], &hg));
    assert_valid(&text);
    let Payload::Spectrum(s) = from_json(&text).unwrap().payload else { panic!("not a spectrum") };
    let want = [0.0, 4.0, 4.0, 4.0];
    assert!(s.eigenvalues.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-9), "{:?}", s.eigenvalues);
    assert_eq!(s.clusters.iter().map(|c| c.1).collect::<Vec<_>>(), vec![1, 3]);
}

#[test]
fn adj1_on_k34_is_tight() {
    let f = fixtures();
    let text = stdout(&run(&["audit", "--bounds", "ADJ-1", "--input", p(&f.k34)]));
    assert_valid(&text);
    let Payload::Bounds(list) = from_json(&text).unwrap().payload else { panic!("not bounds") };
    assert_eq!(list.len(), 1);
    assert_eq!(list[0].verdict, Verdict::Holds);
    assert!(list[0].margin.unwrap().abs() <= 1e-9);
}

#[test]
fn bowtie_pair_curvature() {
    let f = fixtures();
    let text = stdout(&run(&["curvature", "--ollivier", "--pair", "1", "3", "--input", p(&f.bowtie)]));
    assert_valid(&text);
    let Payload::Curvature(c) = from_json(&text).unwrap().payload else { panic!("not curvature") };
    assert_eq!(c.pairs.len(), 1);
    assert_eq!(c.pairs[0].pair, (1, 3));
    assert!((c.pairs[0].kappa - 0.25).abs() <= 1e-9);
}

#[test]
fn every_subcommand_matches_the_schema() {
    let f = fixtures();
    let (k34, bowtie, k33) = (p(&f.k34), p(&f.bowtie), p(&f.k33));
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--matrix", "adjacency", "--vectors", "--input", k34],
        vec!["spectrum", "--matrix", "normalized", "--vectors", "--input", bowtie],
        vec!["audit", "--input", bowtie],
        vec!["audit", "--input", k33, "--cd", "2:0.25", "--cd", "inf:0.1"],
        vec!["audit", "--bounds", "LAP-3,LAP-7,STR-4", "--subset", "1,2", "--pair", "1,2", "4,5", "--input", bowtie],
        vec!["audit", "--bounds", "STR-1,STR-3", "--partner", k33, "--input", bowtie],
        vec!["cheeger", "--input", bowtie],
        vec!["cheeger", "--measure", "volume", "--input", k34],
        vec!["walk", "--input", bowtie, "--steps", "100", "--seed", "7", "--trajectory"],
        vec!["walk", "--input", bowtie, "--certificate", "1,2,5", "--f", "1,0,0,0,-1"],
        vec!["curvature", "--ollivier", "--input", bowtie],
        vec!["curvature", "--cd", "2", "--k", "-0.5", "--audit", "--input", k33],
        vec!["curvature", "--cd", "inf", "--input", k34],
    ];
    for args in cases {
        let text = stdout(&run(&args));
        assert_valid(&text);
        let back = from_json(&text).unwrap();
        assert_eq!(back.render(Format::Json), text, "{args:?} does not round-trip");
    }
}

#[test]
fn labels_are_one_based() {
    let f = fixtures();
    let text = stdout(&run(&["audit", "--bounds", "LAP-7", "--input", p(&f.bowtie)]));
    let Payload::Bounds(list) = from_json(&text).unwrap().payload else { panic!("not bounds") };
    assert_eq!(list[0].verdict, Verdict::Violated);
    let inst = list[0].worst_instance.as_ref().unwrap().to_string();
    assert_eq!(inst, "V1={1,2} V2={4,5}");

    let text = stdout(&run(&["cheeger", "--input", p(&f.bowtie)]));
    let Payload::Cheeger(c) = from_json(&text).unwrap().payload else { panic!("not cheeger") };
    assert!(c.witness.iter().all(|v| (1..=5).contains(&v)));
    assert_eq!(c.value, 0.5);
}

#[test]
fn reruns_are_byte_identical() {
    let f = fixtures();
    let args = ["audit", "--input", p(&f.bowtie)];
    let a = stdout(&run(&args));
    let b = stdout(&bin().args(args).env("HGSPECTRA_THREADS", "1").output().unwrap());
    let c = stdout(&bin().args(args).env("HGSPECTRA_THREADS", "4").output().unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let walk = ["walk", "--input", p(&f.k34), "--steps", "1000", "--seed", "11", "--trajectory"];
    assert_eq!(stdout(&run(&walk)), stdout(&run(&walk)));
}

#[test]
fn csv_has_one_row_per_item() {
    let f = fixtures();
    let spectrum = stdout(&run(&["--format", "csv", "spectrum", "--input", p(&f.bowtie)]));
    assert_eq!(spectrum.lines().count(), 1 + 5);
    let audit = stdout(&run(&["audit", "--format", "csv", "--input", p(&f.bowtie)]));
    assert_eq!(audit.lines().count(), 1 + hgspectra_core::BoundId::ALL.len());
    let pairs = stdout(&run(&["curvature", "--format", "csv", "--ollivier", "--input", p(&f.bowtie)]));
    assert_eq!(pairs.lines().count(), 1 + 6);
}

#[test]
fn text_format_is_readable() {
    let f = fixtures();
    let text = stdout(&run(&["--format", "text", "spectrum", "--input", p(&f.k34)]));
    assert!(text.contains("laplacian spectrum"));
    assert!(text.contains("4.0000000000000000e0 x3"));
}

#[test]
fn audit_mode_violations_do_not_fail_the_run() {
    let f = fixtures();
    // LAP-7 is violated on the bowtie but is an audit-mode bound.
    let o = run(&["audit", "--fail-on-violation", "--bounds", "LAP-7,ADJ-1", "--input", p(&f.bowtie)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let o = run_stdin(&["spectrum"], "p hg 3 1\ne 1 2 7\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    let o = run(&["spectrum", "--input", "/nonexistent/x.hg"]);
    assert_eq!(o.status.code(), Some(2));

    let f = fixtures();
    let o = run(&["audit", "--bounds", "LAP-99", "--input", p(&f.k34)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("LAP-99"));

    let o = run(&["audit", "--explicit", "--bounds", "LAP-3", "--input", p(&f.k34)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subset"));

    let o = run(&["audit", "--subset", "9", "--input", p(&f.k34)]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["curvature", "--input", p(&f.k34)]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["gen", "--family", "complete", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--m"));

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bin().args(["spectrum", "--input", p(&f.k34)]).env("HGSPECTRA_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
