//! End-to-end tests of the command-line surface through `cli::run`.

use moufang::cli::run;

fn run_capture(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["moufang"];
    argv.extend_from_slice(args);
    let mut out: Vec<u8> = Vec::new();
    let code = run(&argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn verify_all_at_p2_passes_and_reports_every_area() {
    let (code, out) = run_capture(&["verify", "--p", "2", "--what", "all"]);
    assert_eq!(code, 0, "output:\n{out}");
    for needle in [
        "GENERATORS theorem p=2 PASS",
        "GENERATORS prop5 p=2 PASS",
        "GENERATORS prop3 p=2 PASS",
        "GENERATORS prop2 p=2 PASS",
        "GENERATORS prop1 p=2 PASS",
        "IDENTITY s_e1_from_s_e3_s_e2 p=2 PASS",
        "IDENTITY s_e2_word p=2 PASS",
        "IDENTITY u_e3_from_x p=2 PASS",
        "IDENTITY s_e3_word p=2 PASS",
        "MOUFANG law p=2 PASS",
        "MOUFANG nonassociative p=2 PASS",
        "DIASSOC sampled-pairs p=2 PASS",
        "SIMPLICITY normal-closures p=2 PASS",
        "CENTER quotient p=2 PASS",
        "CENTER raw-loop p=2 PASS",
        "JPRIME closure p=2 PASS",
        "ISO correspondence p=2 PASS",
    ] {
        assert!(out.contains(needle), "missing {needle:?} in:\n{out}");
    }
    assert!(!out.contains("FAIL"), "unexpected FAIL in:\n{out}");
}

#[test]
fn composite_p_is_a_usage_error() {
    let (code, out) = run_capture(&["verify", "--p", "4", "--what", "all"]);
    assert_eq!(code, 2);
    assert!(out.contains("4 is not prime"), "output:\n{out}");
}

#[test]
fn unknown_flag_is_rejected() {
    let (code, _) = run_capture(&["verify", "--p", "2", "--frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_what_item_is_a_usage_error() {
    let (code, out) = run_capture(&["verify", "--p", "2", "--what", "simplicty"]);
    assert_eq!(code, 2);
    assert!(out.contains("unknown check"));
}

#[test]
fn order_reports_the_oracle_count() {
    let (code, out) = run_capture(&["order", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "order p=3: 1080");

    let (code, out) = run_capture(&["order", "--p", "11"]);
    assert_eq!(code, 2);
    assert!(out.contains("limited to p <= 7"));
}

#[test]
fn closure_subcommand_counts_and_deep_gating() {
    let (code, out) = run_capture(&["closure", "--p", "3", "--gens", "prop5"]);
    assert_eq!(code, 0);
    assert!(out.contains("6 generators"), "output:\n{out}");
    assert!(out.contains("1080 elements"), "output:\n{out}");

    let (code, out) = run_capture(&["closure", "--p", "5", "--gens", "theorem"]);
    assert_eq!(code, 2);
    assert!(out.contains("--deep"));

    let (code, out) = run_capture(&["closure", "--p", "2", "--gens", "nope"]);
    assert_eq!(code, 2);
    assert!(out.contains("unknown generator set"));

    // cap violations are verification failures, not usage errors
    let (code, out) = run_capture(&["closure", "--p", "2", "--gens", "theorem", "--cap", "10"]);
    assert_eq!(code, 1);
    assert!(out.contains("exceeded cap"));
}

#[test]
fn table_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m120.csv");
    let (code, out) = run_capture(&["table", "--p", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "output:\n{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n=120,p=2"));
    assert_eq!(text.lines().count(), 1 + 120 * 120);
    // row 0 and column 0 are the identity permutation
    assert_eq!(lines.next(), Some("0,0,0"));
    assert!(text.lines().any(|l| l == "0,57,57"));
    assert!(text.lines().any(|l| l == "57,0,57"));
}

#[test]
fn oct_mul_matches_the_arithmetic() {
    let (code, out) = run_capture(&["oct", "mul", "i", "j"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.trim(),
        "0 + 0 i + 0 j + 1 k + 0 e + 0 ie + 0 je + 0 ke"
    );

    // hi = -1 - ih, rendered with dyadic coefficients
    let (code, out) = run_capture(&["oct", "mul", "h", "i"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.trim(),
        "-1/2 + 0 i + 1/2 j + -1/2 k + 0 e + -1/2 ie + 0 je + 0 ke"
    );

    let (code, out) = run_capture(&["oct", "mul", "2 q", "j"]);
    assert_eq!(code, 2);
    assert!(out.contains("parse error"));
}

#[test]
fn jprime_and_iso_subcommands() {
    let (code, out) = run_capture(&["jprime", "--enumerate"]);
    assert_eq!(code, 0);
    assert!(out.contains("240 elements, 240 of norm 1, 240 integral"));

    let (code, out) = run_capture(&["jprime", "--check-basis-triples"]);
    assert_eq!(code, 0);
    assert!(out.contains("none generate the 240"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iso.csv");
    let (code, out) = run_capture(&["iso", "--verify", "--export", path.to_str().unwrap()]);
    assert_eq!(code, 0, "output:\n{out}");
    assert!(out.contains("ISO build PASS"));
    assert!(out.contains("ISO hom PASS"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 121);
    assert_eq!(text.lines().next(), Some("octonion_class,zorn_matrix"));
}

#[test]
fn reports_are_deterministic_for_a_fixed_seed() {
    let args = ["verify", "--p", "3", "--what", "moufang,diassoc", "--seed", "7"];
    let (code1, out1) = run_capture(&args);
    let (code2, out2) = run_capture(&args);
    assert_eq!(code1, 0);
    assert_eq!(code1, code2);
    assert_eq!(out1, out2);
}

#[test]
fn csv_report_mirrors_the_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let (code, _) = run_capture(&[
        "verify",
        "--p",
        "2",
        "--what",
        "identities",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("check,p,result,detail"));
    assert!(text.lines().skip(1).all(|l| l.contains(",2,PASS,")));
    assert_eq!(text.lines().count(), 1 + 6);
}

#[test]
fn threads_flag_controls_the_pool() {
    let (code, out) = run_capture(&["order", "--p", "5", "--threads", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("order p=5: 39000"));
}
