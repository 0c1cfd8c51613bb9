//! Command-line front end: `analyze`, `verify` and `table`.
//!
//! [`run`] is the whole program minus process plumbing, so it can be driven
//! from tests with in-memory writers. Exit codes: 0 ok, 1 usage or invalid
//! input, 2 numerical rank ambiguity, 3 verification failure.

use crate::angles::{detect_rational, parse_angle, Angle, DEFAULT_MAX_DEN};
use crate::corner::{EdgeCornerConfig, ImpedanceSpec};
use crate::error::{Error, Result};
use crate::oracle::DEFAULT_SEED;
use crate::vanish::{vanishing_order, Bound, CaseKind, VanishReport, DEFAULT_RANK_TOL};
use crate::verify::{run_suite, CheckResult, Suite};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RANK_AMBIGUITY: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "EDGEWAVE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "edgewave",
    version,
    about = "Vanishing orders of Maxwell fields at impedance edge-corners"
)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for stochastic checks (overrides EDGEWAVE_SEED; default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the order-by-order analysis for one corner.
    Analyze(AnalyzeArgs),
    /// Run a self-check suite.
    Verify {
        /// specfun | swe | corner | vanish | oracle | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Theorem bound and assembler bound for a list of angles.
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Dihedral angle in units of π: `q/p` or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// imp-imp | pec-pmc | imp-pec | imp-pmc
    #[arg(long)]
    case: String,
    /// Face-1 impedance η₀ (imp-imp only), e.g. `1+0.5i`.
    #[arg(long, allow_hyphen_values = true)]
    eta1: Option<String>,
    /// Face-2 impedance η₀ (imp-imp, imp-pec, imp-pmc).
    #[arg(long, allow_hyphen_values = true)]
    eta2: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    /// Largest denominator tried when detecting rational decimals.
    #[arg(long = "max-den", default_value_t = DEFAULT_MAX_DEN)]
    max_den: u64,
    /// Treat decimal angles as irrational without detection.
    #[arg(long = "no-detect")]
    no_detect: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    case: String,
    /// Comma-separated angles; empty gives an empty table.
    #[arg(long, value_delimiter = ',', num_args = 0.., allow_hyphen_values = true)]
    alphas: Vec<String>,
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eta1: String,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    eta2: String,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    tol: f64,
    #[arg(long = "max-den", default_value_t = DEFAULT_MAX_DEN)]
    max_den: u64,
}

/// Parse `a`, `bi`, `a+bi` or `a-bi` (`j` accepted for `i`; a bare `i`
/// means unit imaginary part).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || {
        Error::Parse(format!(
            "`{text}` is not a complex number (expected a, bi, a+bi or a-bi)"
        ))
    };
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(bad),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        let re = s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(bad)?;
        return Ok(Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(bad)?;
            Ok(Complex64::new(re, num(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn parse_alpha(text: &str, detect: bool, max_den: u64) -> Result<Angle> {
    let a = parse_angle(text)?;
    Ok(if detect {
        detect_rational(a, max_den)
    } else {
        a
    })
}

fn impedance(text: &str) -> Result<ImpedanceSpec> {
    ImpedanceSpec::constant(parse_complex(text)?)
}

/// Corner for a case kind from optional face impedances, enforcing which of
/// them the case needs.
pub fn build_config(
    alpha: Angle,
    case: CaseKind,
    eta1: Option<&str>,
    eta2: Option<&str>,
    k: f64,
) -> Result<EdgeCornerConfig> {
    let need = |name: &str, v: Option<&str>| {
        v.ok_or_else(|| Error::Parse(format!("case {case} needs --{name}")))
            .and_then(impedance)
    };
    let forbid = |name: &str, v: Option<&str>| match v {
        Some(_) => Err(Error::Parse(format!("case {case} takes no --{name}"))),
        None => Ok(()),
    };
    let (bc1, bc2) = match case {
        CaseKind::ImpImp => (need("eta1", eta1)?, need("eta2", eta2)?),
        CaseKind::PecPmc => {
            forbid("eta1", eta1)?;
            forbid("eta2", eta2)?;
            (ImpedanceSpec::Infinite, ImpedanceSpec::Zero)
        }
        CaseKind::ImpPec => {
            forbid("eta1", eta1)?;
            (ImpedanceSpec::Infinite, need("eta2", eta2)?)
        }
        CaseKind::ImpPmc => {
            forbid("eta1", eta1)?;
            (ImpedanceSpec::Zero, need("eta2", eta2)?)
        }
    };
    EdgeCornerConfig::new(alpha, bc1, bc2, k)
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        (None, None) => Ok(DEFAULT_SEED),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::RankAmbiguity { .. } => EXIT_RANK_AMBIGUITY,
        _ => EXIT_USAGE,
    }
}

/// Human rendering of a bound; `irrational` marks the theorem bound of an
/// angle without rational structure.
pub fn render_bound(b: Bound, n_max: u32) -> String {
    match b {
        Bound::Finite(v) => v.to_string(),
        Bound::GteNmax => format!("≥ {n_max}"),
        Bound::Infinite => format!("≥ {n_max} (irrational)"),
    }
}

fn fmt_c(c: Option<Complex64>) -> String {
    match c {
        Some(c) => format!("{:+.6e}{:+.6e}i", c.re, c.im),
        None => "-".into(),
    }
}

fn describe_angle(a: &Angle) -> String {
    match a.rational {
        Some((q, p)) => format!("{q}/{p} (rational, p = {p})"),
        None => format!("{} (no rational structure)", a.value),
    }
}

/// Human-readable report of an analysis.
pub fn render_report(r: &VanishReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "α = {}, case {}, N_max = {}, tol = {:e}\n",
        describe_angle(&r.alpha),
        r.case,
        r.n_max,
        r.tol
    ));
    if r.case.is_mixed() {
        s.push_str(&format!(
            "assembled as imp-imp at reflected angle {}\n",
            r.assembly_alpha
        ));
    }
    s.push_str(&format!(
        "{:>3}  {:>7}  {:>29}  {:>29}\n",
        "n", "nullity", "det A_n", "det B_n"
    ));
    for o in &r.per_order {
        s.push_str(&format!(
            "{:>3}  {:>7}  {:>29}  {:>29}\n",
            o.n,
            o.nullspace_dim,
            fmt_c(o.det_a),
            fmt_c(o.det_b)
        ));
    }
    s.push_str(&format!(
        "order_lower_bound: {}\n",
        render_bound(r.order_lower_bound, r.n_max)
    ));
    s.push_str(&format!(
        "theorem_bound:     {}\n",
        render_bound(r.theorem_bound, r.n_max)
    ));
    if r.strict_excess {
        s.push_str("note: assembler bound strictly exceeds theorem bound\n");
    }
    if r.bound_violation {
        s.push_str("warning: assembler bound is below theorem bound\n");
    }
    s
}

/// JSON document of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// One row of `table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub alpha: Angle,
    pub theorem_bound: Bound,
    pub order_lower_bound: Bound,
    pub strict_excess: bool,
}

/// JSON document of `table`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub case: CaseKind,
    pub n_max: u32,
    pub rows: Vec<TableRow>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<VanishReport> {
    let alpha = parse_alpha(&a.alpha, !a.no_detect, a.max_den)?;
    let case = CaseKind::parse(&a.case)?;
    let config = build_config(alpha, case, a.eta1.as_deref(), a.eta2.as_deref(), a.k)?;
    vanishing_order(&config, a.nmax, a.tol)
}

fn cmd_table(t: &TableArgs) -> Result<TableReport> {
    let case = CaseKind::parse(&t.case)?;
    let (eta1, eta2) = match case {
        CaseKind::ImpImp => (Some(t.eta1.as_str()), Some(t.eta2.as_str())),
        CaseKind::PecPmc => (None, None),
        _ => (None, Some(t.eta2.as_str())),
    };
    let rows = t
        .alphas
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|text| {
            let alpha = parse_alpha(text, true, t.max_den)?;
            let r = vanishing_order(&build_config(alpha, case, eta1, eta2, t.k)?, t.nmax, t.tol)?;
            Ok(TableRow {
                alpha,
                theorem_bound: r.theorem_bound,
                order_lower_bound: r.order_lower_bound,
                strict_excess: r.strict_excess,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport {
        case,
        n_max: t.nmax,
        rows,
    })
}

fn render_table(t: &TableReport) -> String {
    let mut s = format!("case {}, N_max = {}\n", t.case, t.n_max);
    s.push_str(&format!(
        "{:>14}  {:>12}  {:>18}  {:>16}\n",
        "alpha", "rational", "theorem_bound", "assembler_bound"
    ));
    for r in &t.rows {
        let rational = r
            .alpha
            .rational
            .map_or("no".to_string(), |(q, p)| format!("{q}/{p}"));
        let excess = if r.strict_excess {
            "  (strict excess)"
        } else {
            ""
        };
        s.push_str(&format!(
            "{:>14.10}  {:>12}  {:>18}  {:>16}{excess}\n",
            r.alpha.value,
            rational,
            render_bound(r.theorem_bound, t.n_max),
            render_bound(r.order_lower_bound, t.n_max)
        ));
    }
    s
}

fn render_verify(v: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &v.checks {
        s.push_str(&format!(
            "{} {}/{}: {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.detail
        ));
    }
    let ok = v.checks.iter().filter(|c| c.passed).count();
    s.push_str(&format!(
        "{ok}/{} checks passed (suite {}, seed {})\n",
        v.checks.len(),
        v.suite,
        v.seed
    ));
    let failed: Vec<String> = v
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}/{}", c.suite, c.name))
        .collect();
    if !failed.is_empty() {
        s.push_str(&format!("failed: {}\n", failed.join(", ")));
    }
    s
}

/// Run the program on `args` (including the program name), reading the seed
/// override from the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(SEED_ENV).ok();
    run_with_env(args, env.as_deref(), out, err)
}

/// [`run`] with an explicit value of `EDGEWAVE_SEED`.
pub fn run_with_env<I, T>(
    args: I,
    env_seed: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let fail = |err: &mut dyn Write, e: Error| {
        let _ = writeln!(err, "error: {e}");
        exit_code(&e)
    };
    match &cli.command {
        Command::Analyze(a) => match cmd_analyze(a) {
            Ok(r) => {
                let text = if cli.json {
                    to_json(&r) + "\n"
                } else {
                    render_report(&r)
                };
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(e) => fail(err, e),
        },
        Command::Table(t) => match cmd_table(t) {
            Ok(r) => {
                let text = if cli.json {
                    to_json(&r) + "\n"
                } else {
                    render_table(&r)
                };
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
            Err(e) => fail(err, e),
        },
        Command::Verify { suite } => {
            let seed = match resolve_seed(cli.seed, env_seed) {
                Ok(s) => s,
                Err(e) => return fail(err, e),
            };
            let suite = match Suite::parse(suite) {
                Ok(s) => s,
                Err(e) => return fail(err, e),
            };
            let checks = run_suite(suite, seed);
            let passed = checks.iter().all(|c| c.passed);
            let report = VerifyReport {
                suite: suite.name().into(),
                seed,
                passed,
                checks,
            };
            let text = if cli.json {
                to_json(&report) + "\n"
            } else {
                render_verify(&report)
            };
            let _ = out.write_all(text.as_bytes());
            if passed {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
    }
}
