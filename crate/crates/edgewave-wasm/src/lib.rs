//! Browser bindings: analyze one corner, tabulate bounds over a list of
//! angles, and classify an angle. Each operation has a plain Rust twin that
//! returns JSON (or an error message) so it can be tested natively.

use edgewave::angles::{detect_rational, parse_angle, DEFAULT_MAX_DEN};
use edgewave::cli::{build_config, render_bound};
use edgewave::vanish::{theorem_bound, vanishing_order, Bound, CaseKind, DEFAULT_RANK_TOL};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest order the page may request; keeps each call interactive.
pub const MAX_NMAX: u32 = 12;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn eta_for(case: CaseKind, eta1: &str, eta2: &str) -> (Option<String>, Option<String>) {
    let given = |s: &str| Some(s.trim()).filter(|s| !s.is_empty()).map(str::to_owned);
    match case {
        CaseKind::ImpImp => (given(eta1), given(eta2)),
        CaseKind::PecPmc => (None, None),
        CaseKind::ImpPec | CaseKind::ImpPmc => (None, given(eta2)),
    }
}

fn check_nmax(n_max: u32) -> Result<(), String> {
    if n_max == 0 || n_max > MAX_NMAX {
        return Err(format!("N_max must lie in 1..={MAX_NMAX}"));
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    alpha: String,
    rational: Option<(u64, u64)>,
    case: CaseKind,
    n_max: u32,
    order_lower_bound: String,
    theorem_bound: String,
    strict_excess: bool,
    nullity: Vec<usize>,
}

/// Full analysis of one corner as JSON. Impedances unused by the case are
/// ignored.
pub fn analyze_json(
    alpha: &str,
    case: &str,
    eta1: &str,
    eta2: &str,
    n_max: u32,
) -> Result<String, String> {
    check_nmax(n_max)?;
    let angle = detect_rational(parse_angle(alpha).map_err(err)?, DEFAULT_MAX_DEN);
    let case = CaseKind::parse(case).map_err(err)?;
    let (e1, e2) = eta_for(case, eta1, eta2);
    let config = build_config(angle, case, e1.as_deref(), e2.as_deref(), 1.0).map_err(err)?;
    let r = vanishing_order(&config, n_max, DEFAULT_RANK_TOL).map_err(err)?;
    let summary = Summary {
        alpha: angle.to_string(),
        rational: angle.rational,
        case,
        n_max,
        order_lower_bound: render_bound(r.order_lower_bound, n_max),
        theorem_bound: render_bound(r.theorem_bound, n_max),
        strict_excess: r.strict_excess,
        nullity: r.per_order.iter().map(|o| o.nullspace_dim).collect(),
    };
    serde_json::to_string(&summary).map_err(err)
}

#[derive(Serialize)]
struct TableEntry {
    alpha: String,
    theorem_bound: String,
    order_lower_bound: String,
}

/// Theorem and assembler bounds for comma-separated angles (unit
/// impedances), as a JSON array.
pub fn angle_table_json(case: &str, alphas: &str, n_max: u32) -> Result<String, String> {
    check_nmax(n_max)?;
    let case = CaseKind::parse(case).map_err(err)?;
    let (e1, e2) = eta_for(case, "1", "1");
    let rows = alphas
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|text| {
            let angle = detect_rational(parse_angle(text).map_err(err)?, DEFAULT_MAX_DEN);
            let config =
                build_config(angle, case, e1.as_deref(), e2.as_deref(), 1.0).map_err(err)?;
            let r = vanishing_order(&config, n_max, DEFAULT_RANK_TOL).map_err(err)?;
            Ok(TableEntry {
                alpha: angle.to_string(),
                theorem_bound: render_bound(r.theorem_bound, n_max),
                order_lower_bound: render_bound(r.order_lower_bound, n_max),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&rows).map_err(err)
}

#[derive(Serialize)]
struct AngleInfo {
    alpha: String,
    value: f64,
    rational: Option<(u64, u64)>,
    imp_imp_bound: String,
    pec_pmc_bound: String,
}

/// Rationality and the theorem bounds of both grids for one angle.
pub fn classify_angle_json(alpha: &str, max_den: u32) -> Result<String, String> {
    let angle = detect_rational(parse_angle(alpha).map_err(err)?, u64::from(max_den.max(1)));
    let bound = |case| match theorem_bound(&angle, case, 0) {
        Bound::Finite(n) => n.to_string(),
        _ => "∞".to_owned(),
    };
    let info = AngleInfo {
        alpha: angle.to_string(),
        value: angle.value,
        rational: angle.rational,
        imp_imp_bound: bound(CaseKind::ImpImp),
        pec_pmc_bound: bound(CaseKind::PecPmc),
    };
    serde_json::to_string(&info).map_err(err)
}

#[wasm_bindgen]
pub fn analyze(
    alpha: &str,
    case: &str,
    eta1: &str,
    eta2: &str,
    n_max: u32,
) -> Result<String, JsError> {
    analyze_json(alpha, case, eta1, eta2, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn angle_table(case: &str, alphas: &str, n_max: u32) -> Result<String, JsError> {
    angle_table_json(case, alphas, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn classify_angle(alpha: &str, max_den: u32) -> Result<String, JsError> {
    classify_angle_json(alpha, max_den).map_err(|e| JsError::new(&e))
}
