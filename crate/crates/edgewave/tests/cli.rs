use edgewave::angles::Angle;
use edgewave::cli::*;
use edgewave::vanish::{assemble_order_system, singular_values, Bound, CaseKind, VanishReport};
use num_complex::Complex64;

fn call(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("edgewave").chain(args.iter().copied());
    let code = run_with_env(argv, env_seed, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn analyze_rational_impedance_corner() {
    let (code, out, _) = call(
        &[
            "analyze", "--alpha", "1/3", "--case", "imp-imp", "--eta1", "1", "--eta2", "1",
        ],
        None,
    );
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("order_lower_bound: 2\n"), "{out}");
    assert!(out.contains("theorem_bound:     2\n"), "{out}");
}

#[test]
fn analyze_irrational_pec_pmc_corner() {
    let (code, out, _) = call(
        &[
            "analyze",
            "--alpha",
            "0.6180339887",
            "--case",
            "pec-pmc",
            "--nmax",
            "8",
        ],
        None,
    );
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("order_lower_bound: ≥ 8\n"), "{out}");
    assert!(
        out.contains("theorem_bound:     ≥ 8 (irrational)\n"),
        "{out}"
    );
}

#[test]
fn analyze_json_round_trips() {
    let args = [
        "--json", "analyze", "--alpha", "1/4", "--case", "imp-pec", "--eta2", "1+0.5i", "--nmax",
        "4",
    ];
    let (code, out, _) = call(&args, None);
    assert_eq!(code, EXIT_OK);
    let report: VanishReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.case, CaseKind::ImpPec);
    assert_eq!(report.n_max, 4);
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", out);
}

#[test]
fn mixed_cases_mention_the_reflected_angle() {
    let (code, out, _) = call(
        &[
            "analyze", "--alpha", "2/5", "--case", "imp-pmc", "--eta2", "2",
        ],
        None,
    );
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("reflected angle"), "{out}");
}

#[test]
fn invalid_input_exits_with_usage_code() {
    for args in [
        vec!["analyze", "--alpha", "3", "--case", "pec-pmc"],
        vec!["analyze", "--alpha", "1/3", "--case", "nope"],
        vec![
            "analyze", "--alpha", "1/3", "--case", "imp-imp", "--eta1", "1",
        ],
        vec![
            "analyze", "--alpha", "1/3", "--case", "pec-pmc", "--eta1", "1",
        ],
        vec![
            "analyze", "--alpha", "1/3", "--case", "imp-pec", "--eta2", "one",
        ],
        vec!["analyze", "--case", "pec-pmc"],
        vec!["frobnicate"],
        vec!["verify", "--suite", "nope"],
    ] {
        let (code, out, err) = call(&args, None);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_cleanly() {
    let (code, out, _) = call(&["--help"], None);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("analyze") && out.contains("verify") && out.contains("table"));
}

#[test]
fn rank_ambiguity_exits_with_code_two() {
    // Put the threshold exactly on the smallest singular-value ratio.
    let one = edgewave::corner::ImpedanceSpec::constant(Complex64::new(1.0, 0.0)).unwrap();
    let cfg = edgewave::corner::EdgeCornerConfig::new(
        Angle::from_fraction(1, 3).unwrap(),
        one.clone(),
        one,
        1.0,
    )
    .unwrap();
    let sv = singular_values(&assemble_order_system(1, &cfg).unwrap());
    let tol = format!("{:e}", sv[sv.len() - 1] / sv[0]);
    let args = [
        "analyze", "--alpha", "1/3", "--case", "imp-imp", "--eta1", "1", "--eta2", "1", "--tol",
        &tol,
    ];
    let (code, _, err) = call(&args, None);
    assert_eq!(code, EXIT_RANK_AMBIGUITY, "{err}");
}

#[test]
fn table_examples() {
    let (code, out, _) = call(
        &[
            "--json",
            "table",
            "--case",
            "imp-imp",
            "--alphas",
            "1/2,1/3,1/4,2/5",
        ],
        None,
    );
    assert_eq!(code, EXIT_OK);
    let t: TableReport = serde_json::from_str(&out).unwrap();
    let bounds: Vec<Bound> = t.rows.iter().map(|r| r.theorem_bound).collect();
    assert_eq!(bounds, [1, 2, 3, 4].map(Bound::Finite));
    assert!(t
        .rows
        .iter()
        .all(|r| r.order_lower_bound == r.theorem_bound));

    let (code, out, _) = call(
        &[
            "--json", "table", "--case", "pec-pmc", "--alphas", "1/2,1/4",
        ],
        None,
    );
    assert_eq!(code, EXIT_OK);
    let t: TableReport = serde_json::from_str(&out).unwrap();
    assert_eq!(
        t.rows.iter().map(|r| r.theorem_bound).collect::<Vec<_>>(),
        [Bound::Finite(0), Bound::Finite(1)]
    );

    let (code, out, _) = call(&["table", "--case", "pec-pmc", "--alphas", "1/3"], None);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("strict excess"), "{out}");
}

#[test]
fn empty_table_is_fine() {
    let (code, out, _) = call(
        &["--json", "table", "--case", "imp-imp", "--alphas", ""],
        None,
    );
    assert_eq!(code, EXIT_OK);
    let t: TableReport = serde_json::from_str(&out).unwrap();
    assert!(t.rows.is_empty());
    let (code, _, _) = call(&["table", "--case", "imp-imp", "--alphas"], None);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn seed_precedence() {
    let seed_of = |args: &[&str], env: Option<&str>| {
        let (code, out, _) = call(args, env);
        assert_eq!(code, EXIT_OK, "{out}");
        serde_json::from_str::<VerifyReport>(&out).unwrap().seed
    };
    let base = ["--json", "verify", "--suite", "specfun"];
    assert_eq!(seed_of(&base, None), 42);
    assert_eq!(seed_of(&base, Some("7")), 7);
    assert_eq!(
        seed_of(
            &["--json", "--seed", "9", "verify", "--suite", "specfun"],
            Some("7")
        ),
        9
    );
    let (code, _, err) = call(&base, Some("seven"));
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("EDGEWAVE_SEED"));
}

#[test]
fn verify_json_is_byte_identical_for_a_seed() {
    let args = ["--json", "--seed", "5", "verify", "--suite", "corner"];
    let (c1, a, _) = call(&args, None);
    let (c2, b, _) = call(&args, None);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: VerifyReport = serde_json::from_str(&a).unwrap();
    assert!(v.passed && !v.checks.is_empty());
}

#[test]
fn complex_parsing() {
    let c = |re, im| Complex64::new(re, im);
    assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
    assert_eq!(parse_complex("1+0.5i").unwrap(), c(1.0, 0.5));
    assert_eq!(parse_complex("2 - 3j").unwrap(), c(2.0, -3.0));
    assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
    assert_eq!(parse_complex("2.5i").unwrap(), c(0.0, 2.5));
    assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
    for bad in ["", "i1", "1+", "abc", "1+xi", "inf"] {
        assert!(parse_complex(bad).is_err(), "{bad}");
    }
}

#[test]
fn render_bound_forms() {
    assert_eq!(render_bound(Bound::Finite(3), 6), "3");
    assert_eq!(render_bound(Bound::GteNmax, 6), "≥ 6");
    assert_eq!(render_bound(Bound::Infinite, 6), "≥ 6 (irrational)");
}
