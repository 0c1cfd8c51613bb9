//! Real special functions: associated Legendre functions, spherical Bessel
//! functions, and the derived radial factors `p_l`, `q_l`.
//!
//! Legendre functions use the convention *without* the Condon–Shortley phase:
//!
//! ```text
//! P_l^m(x) = (1 - x^2)^{m/2} d^m P_l(x) / dx^m            (m >= 0)
//! P_l^{-m}(x) = (-1)^m (l-m)!/(l+m)! P_l^m(x)
//! ```
//!
//! With this convention the two angular recursions used throughout the crate
//! read
//!
//! ```text
//! dP_l^m(cos θ)/dθ      = ½[(l+m)(l-m+1) P_l^{m-1} - P_l^{m+1}]
//! (m/sin θ) P_l^m(cos θ) = ½[P_{l-1}^{m+1} + (l+m-1)(l+m) P_{l-1}^{m-1}]
//! ```
//!
//! The second one is finite at θ = 0, which is how every `m/sin θ` factor on
//! the edge of a corner is evaluated.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Below this argument spherical Bessel functions are summed from their
/// power series instead of closed forms / recurrences.
pub const BESSEL_SERIES_CUTOFF: f64 = 1e-3;

/// Largest integer whose factorial is formed by exact integer products.
const EXACT_FACTORIAL_MAX: u32 = 20;

/// `n!` as a float: exact integer product for `n <= 20`, log-gamma above.
pub fn factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

/// `ln(n!)`.
pub fn ln_factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_MAX {
        factorial(n).ln()
    } else {
        libm::lgamma(n as f64 + 1.0)
    }
}

/// `a! / b!` without intermediate overflow.
pub fn factorial_ratio(a: u32, b: u32) -> f64 {
    if a <= EXACT_FACTORIAL_MAX && b <= EXACT_FACTORIAL_MAX {
        factorial(a) / factorial(b)
    } else {
        (ln_factorial(a) - ln_factorial(b)).exp()
    }
}

/// Double factorial `n!!` for `n >= -1` (with `(-1)!! = 0!! = 1`).
pub fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// A Legendre function value together with its arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendreValue {
    pub l: u32,
    pub m: i32,
    pub x: f64,
    pub value: f64,
}

impl LegendreValue {
    /// Evaluate and package `P_l^m(x)`.
    pub fn new(l: u32, m: i32, x: f64) -> Result<Self> {
        Ok(Self {
            l,
            m,
            x,
            value: assoc_legendre(l, m, x)?,
        })
    }
}

fn check_lm(l: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!(
            "|m| = {} exceeds degree l = {l}",
            m.unsigned_abs()
        )));
    }
    Ok(())
}

/// Associated Legendre function `P_l^m(x)` (no Condon–Shortley phase), any
/// signed order with `|m| <= l`.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> Result<f64> {
    check_lm(l, m)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("argument x = {x} outside [-1, 1]")));
    }
    let ma = m.unsigned_abs();
    let pos = legendre_nonneg(l, ma, x);
    if m >= 0 {
        Ok(pos)
    } else {
        let sign = if ma.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * factorial_ratio(l - ma, l + ma) * pos)
    }
}

/// `P_l^m(x)` for `0 <= m <= l` by upward recurrence in the degree.
fn legendre_nonneg(l: u32, m: u32, x: f64) -> f64 {
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= odd * somx2;
        odd += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let next = (x * (2 * ll - 1) as f64 * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// `P_l^m` that is zero whenever `|m| > l` (the recursions' convention
/// `P_l^{l+1} ≡ 0`).
fn legendre_or_zero(l: i64, m: i64, x: f64) -> f64 {
    if l < 0 || m.abs() > l {
        0.0
    } else {
        assoc_legendre(l as u32, m as i32, x).expect("indices checked")
    }
}

fn check_theta_closed(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) || theta.is_nan() {
        return Err(Error::Domain(format!(
            "polar angle θ = {theta} outside [0, π]"
        )));
    }
    Ok(())
}

/// `dP_l^m(cos θ)/dθ` for `0 <= m <= l`, from the first recursion.
pub fn legendre_dtheta(l: u32, m: u32, theta: f64) -> Result<f64> {
    if m > l {
        return Err(Error::Domain(format!(
            "order m = {m} exceeds degree l = {l}"
        )));
    }
    check_theta_closed(theta)?;
    let x = theta.cos();
    let (l, m) = (l as i64, m as i64);
    let lower = legendre_or_zero(l, m - 1, x);
    let upper = legendre_or_zero(l, m + 1, x);
    Ok(0.5 * ((l + m) * (l - m + 1)) as f64 * lower - 0.5 * upper)
}

/// `(m / sin θ) P_l^m(cos θ)` for `1 <= m <= l`, from the second recursion;
/// finite (and exact) at θ = 0 and θ = π.
pub fn legendre_over_sin(l: u32, m: u32, theta: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("m = 0 has no 1/sin θ factor".into()));
    }
    if m > l {
        return Err(Error::Domain(format!(
            "order m = {m} exceeds degree l = {l}"
        )));
    }
    check_theta_closed(theta)?;
    let x = theta.cos();
    let (l, m) = (l as i64, m as i64);
    let up = legendre_or_zero(l - 1, m + 1, x);
    let down = legendre_or_zero(l - 1, m - 1, x);
    Ok(0.5 * (up + ((l + m - 1) * (l + m)) as f64 * down))
}

/// Spherical Bessel function of the first kind `j_l(t)`.
///
/// Power series below [`BESSEL_SERIES_CUTOFF`], upward recurrence from the
/// closed forms of `j_0`, `j_1` when `l <= t`, and normalised downward
/// (Miller) recurrence otherwise. Negative arguments use the parity
/// `j_l(-t) = (-1)^l j_l(t)`.
pub fn sph_bessel(l: u32, t: f64) -> f64 {
    if t < 0.0 {
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        return sign * sph_bessel(l, -t);
    }
    if t < BESSEL_SERIES_CUTOFF {
        return bessel_series(l, t);
    }
    let j0 = t.sin() / t;
    if l == 0 {
        return j0;
    }
    let j1 = t.sin() / (t * t) - t.cos() / t;
    if l == 1 {
        return j1;
    }
    if (l as f64) <= t {
        let (mut prev, mut cur) = (j0, j1);
        for n in 1..l {
            let next = (2 * n + 1) as f64 / t * cur - prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }
    bessel_miller(l, t, j0, j1)
}

fn bessel_series(l: u32, t: f64) -> f64 {
    let lead = t.powi(l as i32) / double_factorial(2 * l as i64 + 1);
    let x = -0.5 * t * t;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..8u32 {
        term *= x / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn bessel_miller(l: u32, t: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 30 + (10.0 * (l as f64).sqrt()) as u32 + t as u32;
    let (mut above, mut cur) = (0.0_f64, 1e-300_f64);
    let mut target = 0.0;
    let mut f1 = 0.0;
    for n in (1..=start).rev() {
        let below = (2 * n + 1) as f64 / t * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds f_{n-1}
        if n - 1 == l {
            target = cur;
        }
        if n - 1 == 1 {
            f1 = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            target *= 1e-250;
            f1 *= 1e-250;
        }
    }
    let f0 = cur;
    if j0.abs() >= j1.abs() {
        target * (j0 / f0)
    } else {
        target * (j1 / f1)
    }
}

/// `j_l'(t) = (l j_{l-1} - (l+1) j_{l+1}) / (2l+1)` (and `j_0' = -j_1`).
pub fn sph_bessel_deriv(l: u32, t: f64) -> f64 {
    if l == 0 {
        return -sph_bessel(1, t);
    }
    let lf = l as f64;
    (lf * sph_bessel(l - 1, t) - (lf + 1.0) * sph_bessel(l + 1, t)) / (2.0 * lf + 1.0)
}

/// Radial factors of degree `l` at argument `t = k r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialFunctions {
    pub l: u32,
    pub t: f64,
    /// `j_l(t)`
    pub j: f64,
    /// `j_l'(t)`
    pub jprime: f64,
    /// `p_l(t) = (j_{l-1} + j_{l+1}) / (2l+1)` (equals `j_l(t)/t`)
    pub p: f64,
    /// `q_l(t) = ((l+1) j_{l-1} - l j_{l+1}) / (2l+1)` (equals `j_l/t + j_l'`)
    pub q: f64,
}

/// Evaluate `j_l, j_l', p_l, q_l` at `t >= 0`; exact limits at `t = 0`.
pub fn radial_pq(l: u32, t: f64) -> Result<RadialFunctions> {
    if l == 0 {
        return Err(Error::Domain("radial factors need degree l >= 1".into()));
    }
    if t < 0.0 || t.is_nan() {
        return Err(Error::Domain(format!(
            "radial argument t = {t} must be >= 0"
        )));
    }
    let lf = l as f64;
    let jm = sph_bessel(l - 1, t);
    let jp = sph_bessel(l + 1, t);
    let denom = 2.0 * lf + 1.0;
    Ok(RadialFunctions {
        l,
        t,
        j: sph_bessel(l, t),
        jprime: (lf * jm - (lf + 1.0) * jp) / denom,
        p: (jm + jp) / denom,
        q: ((lf + 1.0) * jm - lf * jp) / denom,
    })
}

/// Leading coefficients `(p̂, q̂)` with `p_l(t) ≈ p̂ t^{l-1}`, `q_l(t) ≈ q̂ t^{l-1}`
/// as `t → 0`: `p̂ = 1/((2l+1)(2l-1)!!)`, `q̂ = (l+1) p̂`.
pub fn radial_leading(l: u32) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(Error::Domain("radial factors need degree l >= 1".into()));
    }
    let p = 1.0 / ((2 * l + 1) as f64 * double_factorial(2 * l as i64 - 1));
    Ok((p, (l + 1) as f64 * p))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Adaptive Gauss–Legendre integration of `f` over `[a, b]` to absolute
/// tolerance `tol` (panel vs. two half-panels, depth-limited).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let rule = gauss_legendre(20);
    let panel = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        rule.0
            .iter()
            .zip(&rule.1)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    };
    fn recurse<G: Fn(f64, f64) -> f64>(
        g: &G,
        lo: f64,
        hi: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let mid = 0.5 * (lo + hi);
        let left = g(lo, mid);
        let right = g(mid, hi);
        let err = (left + right - whole).abs();
        if err <= tol {
            return Ok(left + right);
        }
        if depth == 0 {
            return Err(Error::Quadrature(format!(
                "panel [{lo}, {hi}] still has error estimate {err:e} > {tol:e}"
            )));
        }
        Ok(recurse(g, lo, mid, left, 0.5 * tol, depth - 1)?
            + recurse(g, mid, hi, right, 0.5 * tol, depth - 1)?)
    }
    let whole = panel(a, b);
    recurse(&panel, a, b, whole, tol, 30)
}

/// `∫_0^π P_n^m(cos θ) P_n^l(cos θ) / sin θ dθ` for `1 <= m, l <= n`, by
/// adaptive quadrature. Classical value: `0` for `l ≠ m`, `(n+m)!/(m (n-m)!)`
/// for `l = m`.
pub fn orthogonality_integral(n: u32, m: u32, l: u32) -> Result<f64> {
    if m == 0 || l == 0 || m > n || l > n {
        return Err(Error::Domain(format!(
            "orders (m, l) = ({m}, {l}) must lie in 1..={n}"
        )));
    }
    let scale = factorial_ratio(n + m.max(l), n - m.max(l)) / m.max(l) as f64;
    let f = |theta: f64| {
        let x = theta.cos();
        legendre_nonneg(n, m, x) * legendre_nonneg(n, l, x) / theta.sin()
    };
    integrate_adaptive(&f, 0.0, std::f64::consts::PI, 1e-12 * scale)
}
