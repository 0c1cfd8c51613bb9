//! Independent brute-force checks.
//!
//! * [`ball_integral`] / [`vani_estimate`]: the vanishing order read off the
//!   growth of `∫_{B_ρ} |E|` as `ρ → 0` (`I(ρ) ~ ρ^{order+3}`).
//! * [`collocation_nullspace`]: the order-`n` nullspace computed straight
//!   from sampled boundary residuals of unit basis fields, with the leading
//!   `r^{n-1}` coefficient extracted by Richardson extrapolation. It shares
//!   no row formulas with the structured assembler.

use crate::corner::{
    impedance_residual, normal_components, EdgeCornerConfig, FaceId, ImpedanceSpec,
};
use crate::error::{Error, Result};
use crate::specfun::gauss_legendre;
use crate::swe::{eval_field, eval_field_spherical, ModeCoefficients, SphericalPoint};
use crate::vanish::{matrix_nullspace_dim, unknowns, Family, Unknown};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default random seed of every stochastic routine.
pub const DEFAULT_SEED: u64 = 42;
/// Default radii of the vanishing-order fit.
pub const DEFAULT_RADII: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
/// Smallest acceptable coefficient of determination of the log-log fit.
pub const MIN_R_SQUARED: f64 = 0.999;
/// Default relative rank threshold of the collocation matrix.
pub const COLLOCATION_RANK_TOL: f64 = 1e-6;
/// Default largest Richardson step.
pub const COLLOCATION_STEP: f64 = 1e-2;

/// Product-quadrature settings for integrals over a ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes in `r` (first pass).
    pub radial: usize,
    /// Gauss–Legendre nodes in `θ` (first pass); `φ` uses twice as many
    /// equispaced nodes.
    pub angular: usize,
    /// Optional Monte-Carlo sample count for [`ball_integral_monte_carlo`].
    pub mc_samples: Option<usize>,
    pub seed: u64,
    /// Relative agreement required between successive refinements.
    pub rel_tol: f64,
    /// Number of node doublings allowed (radial nodes stop at four times
    /// their first-pass count).
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial: 12,
            angular: 12,
            mc_samples: None,
            seed: DEFAULT_SEED,
            rel_tol: 1e-6,
            max_refinements: 4,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.radial < 8 || self.angular < 8 || self.mc_samples.is_some_and(|s| s < 8) {
            return Err(Error::Domain(
                "quadrature node and sample counts must be >= 8".into(),
            ));
        }
        Ok(())
    }
}

/// Product rule over a ball; `ring(r, θ, φ-nodes)` returns the sum of the
/// integrand over one azimuthal ring.
fn product_rule<R: Fn(f64, f64, &[f64]) -> f64 + Sync>(
    ring: &R,
    rho: f64,
    nr: usize,
    nt: usize,
) -> f64 {
    let (xr, wr) = gauss_legendre(nr);
    let (xt, wt) = gauss_legendre(nt);
    let nphi = 2 * nt;
    let dphi = 2.0 * PI / nphi as f64;
    let phis: Vec<f64> = (0..nphi).map(|l| (l as f64 + 0.5) * dphi).collect();
    (0..nr)
        .into_par_iter()
        .map(|i| {
            let r = 0.5 * rho * (xr[i] + 1.0);
            let mut acc = 0.0;
            for j in 0..nt {
                let theta = 0.5 * PI * (xt[j] + 1.0);
                acc += wt[j] * theta.sin() * ring(r, theta, &phis) * dphi;
            }
            wr[i] * r * r * acc
        })
        .sum::<f64>()
        * (0.5 * rho)
        * (0.5 * PI)
}

fn refine<R: Fn(f64, f64, &[f64]) -> f64 + Sync>(
    ring: &R,
    rho: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate()?;
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("radius ρ = {rho} must be positive")));
    }
    let (mut nr, mut nt) = (quad.radial, quad.angular);
    let mut prev = product_rule(ring, rho, nr, nt);
    for _ in 0..quad.max_refinements {
        // Pure-degree fields are polynomial-like in r, while |E| can have
        // near-zeros on the sphere: keep refining θ/φ, cap the radial nodes.
        nr = (2 * nr).min(4 * quad.radial);
        nt *= 2;
        let cur = product_rule(ring, rho, nr, nt);
        let diff = (cur - prev).abs();
        if diff <= quad.rel_tol * cur.abs() || cur == 0.0 && prev == 0.0 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "ball integral at ρ = {rho:e} not converged to relative {:e} with {nr}×{nt} nodes",
        quad.rel_tol
    )))
}

/// `∫_{B_ρ} f(r, θ, φ) r² sinθ dr dθ dφ` by product Gauss quadrature, doubling
/// the nodes until successive values agree to `quad.rel_tol`.
pub fn ball_integrate<F: Fn(f64, f64, f64) -> f64 + Sync>(
    f: &F,
    rho: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    refine(
        &|r: f64, t: f64, phis: &[f64]| phis.iter().map(|&p| f(r, t, p)).sum(),
        rho,
        quad,
    )
}

/// `∫_{B_ρ} |E|` for the field of `coeffs`. Each azimuthal order contributes
/// `F_m(r, θ) e^{imφ}` in the spherical frame, so the `F_m` are evaluated
/// once per ring and only the phases vary along it.
pub fn ball_integral(coeffs: &ModeCoefficients, rho: f64, quad: &QuadratureSpec) -> Result<f64> {
    let lmax = coeffs.lmax as i32;
    let mut orders = Vec::new();
    for m in -lmax..=lmax {
        let mut c = ModeCoefficients::zeros(coeffs.k, coeffs.lmax)?;
        let mut any = false;
        for (l, mm, a, b) in coeffs.modes() {
            if mm == m && (a != Complex64::default() || b != Complex64::default()) {
                c.set_a(l, m, a)?;
                c.set_b(l, m, b)?;
                any = true;
            }
        }
        if any {
            orders.push((m, c));
        }
    }
    // Validate the evaluation domain once so the ring sums can be infallible.
    eval_field_spherical(coeffs, &SphericalPoint::new(rho, 0.5, 0.0))?;
    let ring = |r: f64, t: f64, phis: &[f64]| -> f64 {
        let parts: Vec<(f64, [Complex64; 3])> = orders
            .iter()
            .map(|(m, c)| {
                (
                    *m as f64,
                    eval_field_spherical(c, &SphericalPoint::new(r, t, 0.0))
                        .unwrap_or([Complex64::new(f64::NAN, 0.0); 3]),
                )
            })
            .collect();
        phis.iter()
            .map(|&p| {
                let mut e = [Complex64::default(); 3];
                for (m, f) in &parts {
                    let ph = Complex64::from_polar(1.0, m * p);
                    for i in 0..3 {
                        e[i] += f[i] * ph;
                    }
                }
                e.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            })
            .sum()
    };
    let v = refine(&ring, rho, quad)?;
    if v.is_nan() {
        return Err(Error::Quadrature(
            "field evaluation failed inside the ball".into(),
        ));
    }
    Ok(v)
}

/// Monte-Carlo estimate of `∫_{B_ρ} |E|` with uniformly distributed points,
/// reproducible from `seed`.
pub fn ball_integral_monte_carlo(
    coeffs: &ModeCoefficients,
    rho: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < 8 {
        return Err(Error::Domain(
            "Monte-Carlo sample count must be >= 8".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let r = rho * rng.gen::<f64>().cbrt();
        let theta = (1.0 - 2.0 * rng.gen::<f64>()).clamp(-1.0, 1.0).acos();
        let phi = 2.0 * PI * rng.gen::<f64>();
        acc += eval_field(coeffs, &SphericalPoint::new(r, theta, phi))?.norm();
    }
    Ok(acc / samples as f64 * 4.0 / 3.0 * PI * rho.powi(3))
}

/// Log-log fit of `∫_{B_ρ}|E|` against `ρ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VaniEstimate {
    /// Radii, strictly decreasing.
    pub radii: Vec<f64>,
    pub integrals: Vec<f64>,
    pub slope: f64,
    /// `slope - 3`, unrounded.
    pub raw_order: f64,
    /// `slope - 3` rounded to the nearest integer.
    pub order: i64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
}

/// Estimate the vanishing order from `∫_{B_ρ}|E| ~ ρ^{order + 3}`.
pub fn vani_estimate(coeffs: &ModeCoefficients, radii: &[f64]) -> Result<VaniEstimate> {
    vani_estimate_with(coeffs, radii, &QuadratureSpec::default())
}

/// [`vani_estimate`] with explicit quadrature settings.
pub fn vani_estimate_with(
    coeffs: &ModeCoefficients,
    radii: &[f64],
    quad: &QuadratureSpec,
) -> Result<VaniEstimate> {
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    if radii.len() < 4 {
        return Err(Error::Domain("need at least 4 radii".into()));
    }
    if radii.windows(2).any(|w| !(w[0] > w[1])) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Domain("radii must be positive and distinct".into()));
    }
    if (radii[0] / radii[radii.len() - 1]).log10() < 2.0 - 1e-9 {
        return Err(Error::Domain("radii must span at least two decades".into()));
    }
    let integrals = radii
        .iter()
        .map(|&r| ball_integral(coeffs, r, quad))
        .collect::<Result<Vec<_>>>()?;
    if integrals.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain(
            "field vanishes identically on a ball; no finite order".into(),
        ));
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = integrals.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - icpt - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    if r_squared < MIN_R_SQUARED {
        return Err(Error::FitResidual(r_squared));
    }
    let raw_order = slope - 3.0;
    Ok(VaniEstimate {
        radii,
        integrals,
        slope,
        raw_order,
        order: raw_order.round() as i64,
        r_squared,
    })
}

/// Settings of the collocation oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollocationSpec {
    /// Number of collocation points (alternating between the faces).
    pub samples: usize,
    pub seed: u64,
    /// Largest Richardson radius; each point draws its own `h ∈ [step/2, step]`.
    pub step: f64,
    /// Relative rank threshold.
    pub tol: f64,
}

impl CollocationSpec {
    /// Defaults for order `n`: six points per unknown.
    pub fn for_order(n: u32) -> Self {
        Self {
            samples: 6 * unknowns(n).len(),
            seed: DEFAULT_SEED,
            step: COLLOCATION_STEP,
            tol: COLLOCATION_RANK_TOL,
        }
    }
}

fn basis_field(n: u32, u: Unknown, k: f64) -> Result<ModeCoefficients> {
    let mut c = ModeCoefficients::zeros(k, n)?;
    let one = Complex64::new(1.0, 0.0);
    match u.family {
        Family::A => c.set_a(n, u.m, one)?,
        Family::B => c.set_b(n, u.m, one)?,
    }
    Ok(c)
}

/// Boundary data of one basis field at one point: the residual components
/// plus, on PEC/PMC faces, the implied normal component.
fn boundary_data(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<Vec<Complex64>> {
    let spec = config.spec(face);
    let res = impedance_residual(coeffs, config, face, spec, r, theta)?;
    let mut out = res.0.to_vec();
    match spec {
        ImpedanceSpec::Infinite => out.push(normal_components(coeffs, config, face, r, theta)?.1),
        ImpedanceSpec::Zero => out.push(normal_components(coeffs, config, face, r, theta)?.0),
        ImpedanceSpec::Series { .. } => {}
    }
    Ok(out)
}

/// Collocation matrix: one row per (point, residual component), one column
/// per order-`n` unknown, entries the Richardson-extrapolated `r^{n-1}`
/// coefficients. Rows are normalised; rows that vanish identically are
/// dropped.
pub fn collocation_matrix(
    n: u32,
    config: &EdgeCornerConfig,
    spec: &CollocationSpec,
) -> Result<DMatrix<Complex64>> {
    let cols = unknowns(n);
    if spec.samples < 4 * cols.len() {
        return Err(Error::Domain(format!(
            "need at least {} collocation samples at order {n}",
            4 * cols.len()
        )));
    }
    let basis = cols
        .iter()
        .map(|u| basis_field(n, *u, config.k))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let points: Vec<(FaceId, f64, f64)> = (0..spec.samples)
        .map(|s| {
            let face = FaceId::BOTH[s % 2];
            let theta = rng.gen_range(0.05..PI - 0.05);
            let h = spec.step * rng.gen_range(0.5..1.0);
            (face, theta, h)
        })
        .collect();
    let pw = (n - 1) as i32;
    let blocks: Vec<(Vec<Vec<Complex64>>, f64)> = points
        .par_iter()
        .map(|&(face, theta, h)| {
            let mut block: Vec<Vec<Complex64>> = Vec::new();
            let mut drift: f64 = 0.0;
            for (c, field) in basis.iter().enumerate() {
                let f = |r: f64| -> Result<Vec<Complex64>> {
                    Ok(boundary_data(field, config, face, r, theta)?
                        .into_iter()
                        .map(|v| v / r.powi(pw))
                        .collect())
                };
                let (f0, f1, f2) = (f(h)?, f(h / 2.0)?, f(h / 4.0)?);
                if block.is_empty() {
                    block = vec![vec![Complex64::default(); cols.len()]; f0.len()];
                }
                for i in 0..f0.len() {
                    let r1 = f1[i] * 2.0 - f0[i];
                    let r2 = f2[i] * 2.0 - f1[i];
                    let est = (r2 * 4.0 - r1) / 3.0;
                    drift = drift.max((est - r2).norm());
                    block[i][c] = est;
                }
            }
            Ok((block, drift))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Complex64>> = blocks.iter().flat_map(|(b, _)| b.iter().cloned()).collect();
    let row_norm = |r: &Vec<Complex64>| r.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let max_norm = rows.iter().map(row_norm).fold(0.0, f64::max);
    let max_drift = blocks.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    if max_norm > 0.0 && max_drift > 1e-2 * max_norm {
        return Err(Error::Extrapolation(format!(
            "Richardson estimates moved by {max_drift:e} relative to scale {max_norm:e}"
        )));
    }
    let kept: Vec<Vec<Complex64>> = rows
        .into_iter()
        .filter(|r| row_norm(r) > 1e-6 * max_norm)
        .map(|r| {
            let s = row_norm(&r);
            r.into_iter().map(|c| c / s).collect()
        })
        .collect();
    Ok(DMatrix::from_fn(kept.len(), cols.len(), |i, j| kept[i][j]))
}

/// Nullspace dimension of the collocation matrix with default settings
/// (seed [`DEFAULT_SEED`]) and `samples` points.
pub fn collocation_nullspace(n: u32, config: &EdgeCornerConfig, samples: usize) -> Result<usize> {
    let spec = CollocationSpec {
        samples,
        ..CollocationSpec::for_order(n)
    };
    collocation_nullspace_with(n, config, &spec)
}

/// Nullspace dimension of the collocation matrix.
pub fn collocation_nullspace_with(
    n: u32,
    config: &EdgeCornerConfig,
    spec: &CollocationSpec,
) -> Result<usize> {
    let m = collocation_matrix(n, config, spec)?;
    matrix_nullspace_dim(&m, spec.tol, n as usize)
}

/// Coefficients supported on degree `n` built from a vector over the
/// order-`n` unknowns (e.g. a nullspace vector of an assembled system).
pub fn coefficients_from_vector(
    n: u32,
    k: f64,
    lmax: u32,
    v: &[Complex64],
) -> Result<ModeCoefficients> {
    let cols = unknowns(n);
    if v.len() != cols.len() {
        return Err(Error::Domain(format!(
            "vector has {} entries, order {n} has {} unknowns",
            v.len(),
            cols.len()
        )));
    }
    let mut c = ModeCoefficients::zeros(k, lmax.max(n))?;
    for (u, x) in cols.iter().zip(v) {
        match u.family {
            Family::A => c.set_a(n, u.m, *x)?,
            Family::B => c.set_b(n, u.m, *x)?,
        }
    }
    Ok(c)
}

/// Random complex coefficients on a single degree `l` (all orders, both
/// families), reproducible from `seed`.
pub fn random_pure_mode(l: u32, k: f64, lmax: u32, seed: u64) -> Result<ModeCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = ModeCoefficients::zeros(k, lmax.max(l))?;
    for m in -(l as i32)..=l as i32 {
        c.set_a(
            l,
            m,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )?;
        c.set_b(
            l,
            m,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )?;
    }
    Ok(c)
}

/// Central finite-difference curl of the expansion at a Cartesian point.
pub fn fd_curl(
    coeffs: &ModeCoefficients,
    x: [f64; 3],
    step: f64,
) -> Result<crate::swe::ComplexVec3> {
    let d = fd_jacobian(coeffs, x, step)?;
    // d[i][j] = ∂E_j/∂x_i
    Ok(crate::swe::ComplexVec3([
        d[1][2] - d[2][1],
        d[2][0] - d[0][2],
        d[0][1] - d[1][0],
    ]))
}

/// Central finite-difference divergence of the expansion at a Cartesian point.
pub fn fd_divergence(coeffs: &ModeCoefficients, x: [f64; 3], step: f64) -> Result<Complex64> {
    let d = fd_jacobian(coeffs, x, step)?;
    Ok(d[0][0] + d[1][1] + d[2][2])
}

fn fd_jacobian(coeffs: &ModeCoefficients, x: [f64; 3], step: f64) -> Result<[[Complex64; 3]; 3]> {
    let mut d = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        let (mut xp, mut xm) = (x, x);
        xp[i] += step;
        xm[i] -= step;
        let ep = eval_field(coeffs, &SphericalPoint::from_cartesian(xp))?;
        let em = eval_field(coeffs, &SphericalPoint::from_cartesian(xm))?;
        for (dij, (p, m)) in d[i].iter_mut().zip(ep.0.iter().zip(&em.0)) {
            *dij = (p - m) / (2.0 * step);
        }
    }
    Ok(d)
}
