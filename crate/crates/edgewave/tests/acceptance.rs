//! Acceptance criteria 1–8. Prints one PASS/FAIL line per criterion with the
//! tolerance and runtime budget it was held to, and exits nonzero if any
//! criterion fails.

use edgewave::angles::{
    detect_rational, grid_exclusion_order, Angle, Grid, GridOrder, DEFAULT_MAX_DEN,
};
use edgewave::corner::{EdgeCornerConfig, ImpedanceSpec};
use edgewave::oracle::{
    collocation_nullspace_with, random_pure_mode, vani_estimate, CollocationSpec, DEFAULT_RADII,
};
use edgewave::vanish::*;
use edgewave::verify::{cross_oracle_configs, run_suite, unit_config, Suite};
use edgewave::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SEED: u64 = 42;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Result<(bool, String)>,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

/// Closed-form first-order determinants against numeric 3×3 determinants,
/// n = 1..10, five random impedance–impedance corners; 1e-10 relative.
fn determinant_fidelity() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let alpha = loop {
            if let Ok(a) = Angle::from_value(rng.gen_range(0.05..1.95)) {
                break a;
            }
        };
        let mut eta = || Complex64::new(rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0));
        let (e1, e2) = (eta(), eta());
        let k = rng.gen_range(0.5..3.0);
        let cfg = EdgeCornerConfig::new(
            alpha,
            ImpedanceSpec::constant(e1)?,
            ImpedanceSpec::constant(e2)?,
            k,
        )?;
        for n in 1..=10 {
            let sys = assemble_order_system(n, &cfg)?;
            let (na, nb) = (
                numeric_det_a(&sys).expect("ImpImp block"),
                numeric_det_b(&sys).expect("ImpImp block"),
            );
            worst = worst
                .max(rel(na, closed_det_a(n, &cfg)?))
                .max(rel(nb, closed_det_b(n, &cfg)?));
        }
    }
    Ok((
        worst < 1e-10,
        format!("max relative error {worst:.2e} (tol 1e-10)"),
    ))
}

/// Theorem bounds for every reduced q/p with p ≤ 8 against the closed forms,
/// via the brute-force grid scan.
fn theorem_grid() -> Result<(bool, String)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in 2..=8u64 {
        for q in 1..2 * p {
            let Ok(a) = Angle::from_fraction(q, p) else {
                continue;
            };
            if a.denominator() != Some(p) {
                continue;
            }
            checked += 1;
            let mixed = if p % 2 == 0 { p / 2 - 1 } else { p - 1 };
            let scan_qp = grid_exclusion_order(&a, Grid::Qp, p);
            let scan_q2p = grid_exclusion_order(&a, Grid::Q2p, p);
            let ok = theorem_bound(&a, CaseKind::ImpImp, 8) == Bound::Finite(p - 1)
                && scan_qp == GridOrder::Exact(p - 1)
                && [CaseKind::PecPmc, CaseKind::ImpPec, CaseKind::ImpPmc]
                    .iter()
                    .all(|&c| theorem_bound(&a, c, 8) == Bound::Finite(mixed))
                && scan_q2p == GridOrder::Exact(mixed);
            if !ok {
                bad.push(a.to_string());
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{checked} fractions, mismatches: {bad:?}"),
    ))
}

/// `order_lower_bound ≥ theorem_bound` for 20 random rational angles across
/// the four cases at N_max = 6, with every strict excess flagged.
fn induction_consistency() -> Result<(bool, String)> {
    const N_MAX: u32 = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut ok, mut excess, mut notes) = (true, 0, Vec::new());
    let mut done = 0;
    while done < 20 {
        let case = CaseKind::ALL[done % 4];
        let p = rng.gen_range(2..=8u64);
        let q = rng.gen_range(1..2 * p);
        let Ok(alpha) = Angle::from_fraction(q, p) else {
            continue;
        };
        // Mixed corners need a reflected angle that is still an edge-corner.
        let Ok(cfg) = unit_config(alpha, case) else {
            continue;
        };
        if case.is_mixed() && reflected_config(&cfg).is_err() {
            continue;
        }
        done += 1;
        let r = vanishing_order(&cfg, N_MAX, DEFAULT_RANK_TOL)?;
        let theorem = r.theorem_bound.finite().expect("rational angle");
        let (consistent, strict) = match r.order_lower_bound {
            Bound::Finite(v) => (v >= theorem, v > theorem),
            // No failure up to N_max: consistent; strictly above the theorem
            // whenever the theorem predicts a failure within range.
            Bound::GteNmax => (true, theorem < N_MAX as u64),
            Bound::Infinite => (false, false),
        };
        if r.strict_excess != strict || r.bound_violation == consistent {
            ok = false;
            notes.push(format!("{case} {alpha}: flags disagree"));
        }
        if !consistent {
            ok = false;
            notes.push(format!(
                "{case} {alpha}: {} < {theorem}",
                r.order_lower_bound
            ));
        }
        if strict {
            excess += 1;
            notes.push(format!(
                "{case} {alpha}: flagged excess {} > {theorem}",
                r.order_lower_bound
            ));
        }
    }
    Ok((
        ok,
        format!(
            "20 angles, {excess} flagged strict excess; {}",
            notes.join("; ")
        ),
    ))
}

/// Decimal proxies of irrational angles: no rational structure up to
/// denominator 1000 and a trivial nullspace at every order n ≤ 8.
fn irrational_proxy() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for v in [std::f64::consts::FRAC_1_SQRT_2, (5f64.sqrt() - 1.0) / 2.0] {
        let alpha = detect_rational(Angle::from_value(v)?, DEFAULT_MAX_DEN);
        if alpha.rational.is_some() {
            bad.push(format!("{v} detected as {alpha}"));
            continue;
        }
        for case in [CaseKind::ImpImp, CaseKind::PecPmc] {
            let r = vanishing_order(&unit_config(alpha, case)?, 8, DEFAULT_RANK_TOL)?;
            for o in r.per_order.iter().filter(|o| o.nullspace_dim > 0) {
                bad.push(format!(
                    "{case} {v}: n = {} nullity {}",
                    o.n, o.nullspace_dim
                ));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("tol {DEFAULT_RANK_TOL:e}; nontrivial: {bad:?}"),
    ))
}

/// Collocation nullspace equals the structured nullspace for n ≤ 4 over ten
/// configurations covering all four cases; exact integer agreement.
fn cross_oracle() -> Result<(bool, String)> {
    let mut mismatches = Vec::new();
    let configs = cross_oracle_configs()?;
    for cfg in &configs {
        let case = CaseKind::of(cfg)?;
        for n in 1..=4 {
            let structured = nullspace_dim(&assemble_order_system(n, cfg)?, DEFAULT_RANK_TOL)?;
            let coll = collocation_nullspace_with(n, cfg, &CollocationSpec::for_order(n))?;
            if coll != structured {
                mismatches.push(format!(
                    "{case} {} n={n}: {coll} vs {structured}",
                    cfg.alpha
                ));
            }
        }
    }
    let total = configs.len() * 4;
    Ok((
        mismatches.is_empty(),
        format!(
            "{}/{total} (config, n) pairs agree; mismatches: {}",
            total - mismatches.len(),
            mismatches.join(", ")
        ),
    ))
}

/// Log-log slope of the ball integral of pure degree-n fields is n + 2 ± 0.1.
fn vani_estimator() -> Result<(bool, String)> {
    let mut ok = true;
    let mut slopes = Vec::new();
    for n in 1..=5u32 {
        let c = random_pure_mode(n, 1.0, n, SEED + n as u64)?;
        let est = vani_estimate(&c, &DEFAULT_RADII)?;
        ok &= (est.slope - (n as f64 + 2.0)).abs() <= 0.1 && est.order == n as i64 - 1;
        slopes.push(format!("{:.4}", est.slope));
    }
    Ok((
        ok,
        format!("slopes [{}] (expected n + 2 ± 0.1)", slopes.join(", ")),
    ))
}

/// The special-function suite at the tolerances of the specfun module.
fn special_functions() -> Result<(bool, String)> {
    let checks = run_suite(Suite::Specfun, SEED);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    Ok((
        failed.is_empty(),
        format!(
            "{}/{} checks; failed: {failed:?}",
            checks.len() - failed.len(),
            checks.len()
        ),
    ))
}

/// Impedance–PEC at 1/5 is row-equivalent to impedance–impedance at 2/5:
/// equal ranks of each system and of the two stacked together, n ≤ 4.
fn reflection() -> Result<(bool, String)> {
    let eta = Complex64::new(1.3, -0.4);
    let mixed = EdgeCornerConfig::new(
        Angle::from_fraction(1, 5)?,
        ImpedanceSpec::Infinite,
        ImpedanceSpec::constant(eta)?,
        1.0,
    )?;
    let imp = ImpedanceSpec::constant(eta)?;
    let doubled = EdgeCornerConfig::new(Angle::from_fraction(2, 5)?, imp.clone(), imp, 1.0)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 1..=4 {
        let (a, b) = (
            assemble_order_system(n, &mixed)?,
            assemble_order_system(n, &doubled)?,
        );
        let stacked =
            nalgebra::DMatrix::from_fn(a.nrows() + b.nrows(), a.matrix.ncols(), |i, j| {
                if i < a.nrows() {
                    a.matrix[(i, j)]
                } else {
                    b.matrix[(i - a.nrows(), j)]
                }
            });
        let (na, nb) = (
            nullspace_dim(&a, DEFAULT_RANK_TOL)?,
            nullspace_dim(&b, DEFAULT_RANK_TOL)?,
        );
        let ns = matrix_nullspace_dim(&stacked, DEFAULT_RANK_TOL, n as usize)?;
        ok &= na == nb && ns == na;
        rows.push(format!("n={n}: {na}/{nb}/{ns}"));
    }
    Ok((
        ok,
        format!("nullity mixed/doubled/stacked {}", rows.join(", ")),
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "determinant fidelity",
            budget: Duration::from_secs(5),
            run: determinant_fidelity,
        },
        Criterion {
            id: 2,
            title: "theorem-grid reproduction",
            budget: Duration::from_secs(1),
            run: theorem_grid,
        },
        Criterion {
            id: 3,
            title: "induction consistency",
            budget: Duration::from_secs(60),
            run: induction_consistency,
        },
        Criterion {
            id: 4,
            title: "irrational proxy",
            budget: Duration::from_secs(120),
            run: irrational_proxy,
        },
        Criterion {
            id: 5,
            title: "cross-oracle equivalence",
            budget: Duration::from_secs(300),
            run: cross_oracle,
        },
        Criterion {
            id: 6,
            title: "vani estimator",
            budget: Duration::from_secs(60),
            run: vani_estimator,
        },
        Criterion {
            id: 7,
            title: "special-function suite",
            budget: Duration::from_secs(10),
            run: special_functions,
        },
        Criterion {
            id: 8,
            title: "reflection reduction",
            budget: Duration::from_secs(30),
            run: reflection,
        },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed <= c.budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let over = if elapsed > c.budget {
            " OVER BUDGET"
        } else {
            ""
        };
        println!(
            "criterion {}: {} {} ({:.2?} / budget {:?}{over}) — {detail}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.title,
            elapsed,
            c.budget
        );
        if !passed {
            failed.push(c.id);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
