use std::io::Write;
use std::process::{Command, Output, Stdio};

use apfact::factorize::Verdict;
use apfact::symbol::Classification;
use apfact::Frequency;
use apfact_cli::{emit, emit_report, parse_input, run, Outcome, OutputFormat, Overrides, Report};

const LAMBDA4: &str =
    r#"{"command":"classify","lambda":"4/1","g":[{"freq":"-1/1","re":1,"im":0},{"freq":"1/1","re":1,"im":0}]}"#;
const LAMBDA2: &str =
    r#"{"command":"factorize","lambda":"2/1","g":[{"freq":"-1/1","re":1,"im":0},{"freq":"1/1","re":1,"im":0}]}"#;
const LAMBDA3: &str =
    r#"{"command":"factorize","lambda":"3/1","g":[{"freq":"-2/1","re":1,"im":0},{"freq":"2/1","re":1,"im":0}]}"#;
/// Constant term with spectrum on both sides: no argument decides it.
const UNDECIDED: &str = r#"{"command":"factorize","lambda":"2/1","g":[{"freq":"-1/1","re":1,"im":0},{"freq":"0/1","re":1,"im":0},{"freq":"1/1","re":1,"im":0}]}"#;

fn apfact(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_apfact"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report_of(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_lambda4() {
    let out = apfact(&[], LAMBDA4);
    assert_eq!(out.status.code(), Some(0));
    let Outcome::Classify(c) = report_of(&out).outcome else { panic!("wrong outcome") };
    let Some(Classification::Member(m)) = c.classification else { panic!("not a member") };
    assert_eq!((m.n, m.chosen_nu), (2, Frequency::ONE));
    assert_eq!(m.a_minus, apfact::ApPoly::one());
    assert_eq!(m.a_plus, apfact::ApPoly::one());
}

#[test]
fn factorize_lambda2_is_canonical() {
    let out = apfact(&[], LAMBDA2);
    assert_eq!(out.status.code(), Some(0));
    let Outcome::Factorize(r) = report_of(&out).outcome else { panic!("wrong outcome") };
    assert_eq!(r.verdict.verdict, Verdict::Invertible);
    assert_eq!(r.verdict.mu, Some(Frequency::ZERO));
    let fac = r.factorization.unwrap();
    assert!(fac.is_exact() && fac.is_canonical());
    assert!(r.residuals.unwrap().max_residual < 1e-12);
}

#[test]
fn factorize_lambda3_is_noncanonical() {
    let out = apfact(&[], LAMBDA3);
    assert_eq!(out.status.code(), Some(0));
    let Outcome::Factorize(r) = report_of(&out).outcome else { panic!("wrong outcome") };
    assert_eq!(r.verdict.verdict, Verdict::FactorableNonCanonical);
    assert_eq!(r.verdict.mu, Some(Frequency::ONE));
    assert!(r.verdict.not_semi_fredholm);
}

#[test]
fn exit_codes() {
    assert_eq!(apfact(&[], UNDECIDED).status.code(), Some(2));
    let bad = r#"{"command":"classify","lambda":"0/1","g":[{"freq":"1/1","re":1,"im":0}]}"#;
    let out = apfact(&[], bad);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda must be positive"));
    assert_eq!(apfact(&[], "{not json").status.code(), Some(1));
    assert_eq!(apfact(&["--command", "suite", "--output", "text"], "").status.code(), Some(0));
}

#[test]
fn json_round_trips() {
    for text in [LAMBDA4, LAMBDA2, LAMBDA3, UNDECIDED] {
        let report = run(&parse_input(text, &Overrides::default()).unwrap()).unwrap();
        let bytes = emit_report(&report, OutputFormat::Json);
        let back: Report = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, report);
        assert_eq!(emit_report(&back, OutputFormat::Json), bytes);
    }
}

#[test]
fn factorization_file_can_be_verified() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lambda3.json");
    let out = apfact(&[], LAMBDA3);
    std::fs::write(&path, &out.stdout).unwrap();

    let job = parse_input(&std::fs::read_to_string(&path).unwrap(), &Overrides::default()).unwrap();
    assert_eq!(job.command, apfact_cli::Command::Verify);
    let report = run(&job).unwrap();
    assert_eq!(report.exit_code(), 0);

    let out = apfact(&["--input", path.to_str().unwrap(), "--output", "text"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("residual_within_tol"));
}

#[test]
fn tampered_factorization_fails_verification() {
    let report = run(&parse_input(LAMBDA2, &Overrides::default()).unwrap()).unwrap();
    let mut json: serde_json::Value = serde_json::from_slice(&emit_report(&report, OutputFormat::Json)).unwrap();
    // G_+ entry (0, 1) becomes 1 - 2 e_2
    json["outcome"]["factorize"]["factorization"]["g_plus"][0][1][1]["re"] = serde_json::json!(-2.0);
    let job = parse_input(&json.to_string(), &Overrides::default()).unwrap();
    assert_eq!(run(&job).unwrap().exit_code(), 1);
}

#[test]
fn text_output_names_mu_and_case() {
    let out = apfact(&["--output", "text"], LAMBDA3);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mu = 1"), "{text}");
    assert!(text.contains("BigGap"), "{text}");
    assert!(text.contains("[Transposition]"), "{text}");
}

#[test]
fn csv_output_has_the_plot_columns() {
    let out = apfact(&["--output", "csv"], LAMBDA2);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(emit::CSV_HEADER));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 201);
    for r in &rows {
        // |e_{-1}| = |e_1| = 1 on the real line
        assert!((r[1] - 1.0).abs() < 1e-12 && (r[2] - 1.0).abs() < 1e-12);
        assert!(r[3] < 1e-12);
    }
}

#[test]
fn flags_override_the_file() {
    let out = apfact(&["--command", "solve", "--nu", "1/1", "--seed", "7"], LAMBDA4);
    assert_eq!(out.status.code(), Some(0));
    let report = report_of(&out);
    assert_eq!(report.options.nu_override, Some(Frequency::ONE));
    assert_eq!(report.options.seed, 7);
    assert!(matches!(report.outcome, Outcome::Solve(_)));
    assert_eq!(apfact(&["--nu", "5/1"], LAMBDA4).status.code(), Some(1));
}
