//! Spherical vector wavefunctions `M_l^m`, `N_l^m` and evaluation of the
//! radial wave expansion
//!
//! ```text
//! E = Σ_l Σ_m  a_l^m M_l^m + b_l^m N_l^m
//!   = -Σ 1/√(l(l+1)) { b l(l+1) p_l Y r̂
//!                     + [a j_l (m/sinθ) Y + b q_l ∂_θY] θ̂
//!                     + i [a j_l ∂_θY + b q_l (m/sinθ) Y] φ̂ }
//! ```
//!
//! from a table of mode coefficients. Curls use `∇∧M = -ik N`,
//! `∇∧N = ik M`, so `∇∧E` is the same expansion with
//! `(a, b) → (ik b, -ik a)`.

use crate::error::{Error, Result};
use crate::specfun::{
    assoc_legendre, legendre_dtheta, legendre_over_sin, radial_pq, sph_bessel, sph_bessel_deriv,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

/// Default truncation degree of the expansion.
pub const DEFAULT_LMAX: u32 = 12;
/// Default radius of the ball in which the expansion is trusted.
pub const DEFAULT_RHO0: f64 = 1.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Point in spherical coordinates (radius, polar angle, azimuth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Self {
        Self { r, theta, phi }
    }

    /// `(r sinθ cosφ, r sinθ sinφ, r cosθ)`.
    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }

    /// Inverse of [`to_cartesian`](Self::to_cartesian) with `φ ∈ [0, 2π)`.
    pub fn from_cartesian(x: [f64; 3]) -> Self {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let theta = if r == 0.0 {
            0.0
        } else {
            (x[2] / r).clamp(-1.0, 1.0).acos()
        };
        let mut phi = x[1].atan2(x[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        Self { r, theta, phi }
    }
}

/// Complex 3-vector in the Cartesian frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexVec3(pub [Complex64; 3]);

impl ComplexVec3 {
    pub const ZERO: Self = Self([Complex64 { re: 0.0, im: 0.0 }; 3]);

    /// Real vector scaled by a complex factor.
    pub fn from_real(v: [f64; 3], s: Complex64) -> Self {
        Self([s * v[0], s * v[1], s * v[2]])
    }

    /// Euclidean (Hermitian) norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest component modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Bilinear dot product with a real vector.
    pub fn dot_real(&self, v: [f64; 3]) -> Complex64 {
        self.0[0] * v[0] + self.0[1] * v[1] + self.0[2] * v[2]
    }

    /// `v ∧ self` for a real vector `v`.
    pub fn cross_from_left(&self, v: [f64; 3]) -> Self {
        let e = &self.0;
        Self([
            v[1] * e[2] - v[2] * e[1],
            v[2] * e[0] - v[0] * e[2],
            v[0] * e[1] - v[1] * e[0],
        ])
    }

    /// `self ∧ v` for a real vector `v`.
    pub fn cross_real(&self, v: [f64; 3]) -> Self {
        let c = self.cross_from_left(v);
        Self([-c.0[0], -c.0[1], -c.0[2]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

/// Orthonormal spherical frame `(r̂, θ̂, φ̂)` at `(θ, φ)`, right-handed with
/// `r̂ = θ̂ ∧ φ̂`.
pub fn unit_frame(theta: f64, phi: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
    )
}

/// Combine spherical components `(v_r, v_θ, v_φ)` into a Cartesian vector.
pub fn spherical_to_cartesian(comp: [Complex64; 3], theta: f64, phi: f64) -> ComplexVec3 {
    let (rh, th, ph) = unit_frame(theta, phi);
    ComplexVec3::from_real(rh, comp[0])
        + ComplexVec3::from_real(th, comp[1])
        + ComplexVec3::from_real(ph, comp[2])
}

/// Normalisation constant `c_l^m = √((2l+1)/(4π) · (l-|m|)!/(l+|m|)!)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConstant {
    pub l: u32,
    pub m: i32,
    pub value: f64,
}

impl NormalizationConstant {
    pub fn new(l: u32, m: i32) -> Result<Self> {
        Ok(Self {
            l,
            m,
            value: norm_const(l, m)?,
        })
    }
}

/// `c_l^m` (even in `m`).
pub fn norm_const(l: u32, m: i32) -> Result<f64> {
    let ma = m.unsigned_abs();
    if ma > l {
        return Err(Error::Index(format!("|m| = {ma} exceeds degree l = {l}")));
    }
    let ratio = crate::specfun::factorial_ratio(l - ma, l + ma);
    Ok(((2 * l + 1) as f64 / (4.0 * PI) * ratio).sqrt())
}

/// `Y_l^m(θ, φ) = c_l^m P_l^{|m|}(cos θ) e^{imφ}`.
pub fn sph_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let c = norm_const(l, m)?;
    let p = assoc_legendre(l, m.abs(), theta.cos())?;
    Ok(Complex64::from_polar(c * p, m as f64 * phi))
}

/// Angular pieces of one mode at `(θ, φ)`:
/// `(Y, ∂_θ Y, (m/sinθ) Y)`, all finite at θ = 0.
#[derive(Debug, Clone, Copy)]
pub struct AngularParts {
    pub y: Complex64,
    pub dy: Complex64,
    pub my_over_sin: Complex64,
}

/// Evaluate [`AngularParts`] for degree `l`, signed order `m`.
pub fn angular_parts(l: u32, m: i32, theta: f64, phi: f64) -> Result<AngularParts> {
    let c = norm_const(l, m)?;
    let ma = m.unsigned_abs();
    let phase = Complex64::from_polar(c, m as f64 * phi);
    let p = assoc_legendre(l, ma as i32, theta.cos())?;
    let dp = legendre_dtheta(l, ma, theta)?;
    let mps = if ma == 0 {
        0.0
    } else {
        m.signum() as f64 * legendre_over_sin(l, ma, theta)?
    };
    Ok(AngularParts {
        y: phase * p,
        dy: phase * dp,
        my_over_sin: phase * mps,
    })
}

/// Expansion coefficients `a_l^m, b_l^m` for `1 <= l <= lmax`, `|m| <= l`,
/// with the wavenumber `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub k: f64,
    pub lmax: u32,
    a: Vec<Vec<Complex64>>,
    b: Vec<Vec<Complex64>>,
}

impl ModeCoefficients {
    /// All-zero coefficients.
    pub fn zeros(k: f64, lmax: u32) -> Result<Self> {
        if lmax < 1 {
            return Err(Error::Domain("lmax must be >= 1".into()));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!(
                "wavenumber k = {k} must be positive"
            )));
        }
        let table = |_| {
            (1..=lmax)
                .map(|l| vec![Complex64::new(0.0, 0.0); (2 * l + 1) as usize])
                .collect()
        };
        Ok(Self {
            k,
            lmax,
            a: table(()),
            b: table(()),
        })
    }

    fn slot(&self, l: u32, m: i32) -> Result<(usize, usize)> {
        if l < 1 || l > self.lmax || m.unsigned_abs() > l {
            return Err(Error::Index(format!(
                "mode (l={l}, m={m}) outside table with lmax {}",
                self.lmax
            )));
        }
        Ok(((l - 1) as usize, (m + l as i32) as usize))
    }

    pub fn a(&self, l: u32, m: i32) -> Complex64 {
        self.slot(l, m)
            .map(|(i, j)| self.a[i][j])
            .unwrap_or_default()
    }

    pub fn b(&self, l: u32, m: i32) -> Complex64 {
        self.slot(l, m)
            .map(|(i, j)| self.b[i][j])
            .unwrap_or_default()
    }

    pub fn set_a(&mut self, l: u32, m: i32, v: Complex64) -> Result<()> {
        let (i, j) = self.slot(l, m)?;
        self.a[i][j] = v;
        Ok(())
    }

    pub fn set_b(&mut self, l: u32, m: i32, v: Complex64) -> Result<()> {
        let (i, j) = self.slot(l, m)?;
        self.b[i][j] = v;
        Ok(())
    }

    /// Copy into a table with a different truncation; modes above the new
    /// `lmax` must be zero.
    pub fn with_lmax(&self, lmax: u32) -> Result<Self> {
        let mut out = Self::zeros(self.k, lmax)?;
        for (l, m, a, b) in self.modes() {
            if l > lmax {
                if a != Complex64::default() || b != Complex64::default() {
                    return Err(Error::Domain(format!(
                        "nonzero mode l = {l} above new lmax {lmax}"
                    )));
                }
                continue;
            }
            out.set_a(l, m, a)?;
            out.set_b(l, m, b)?;
        }
        Ok(out)
    }

    /// Iterate `(l, m, a_l^m, b_l^m)` in text-format order.
    pub fn modes(&self) -> impl Iterator<Item = (u32, i32, Complex64, Complex64)> + '_ {
        (1..=self.lmax).flat_map(move |l| {
            (-(l as i32)..=l as i32).map(move |m| (l, m, self.a(l, m), self.b(l, m)))
        })
    }

    /// Smallest degree carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.modes()
            .find(|(_, _, a, b)| a.norm() > 0.0 || b.norm() > 0.0)
            .map(|(l, ..)| l)
    }

    /// Entry-wise sum (same `k`, `lmax` taken as the larger one).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::Domain(
                "cannot add coefficients with different k".into(),
            ));
        }
        let mut out = Self::zeros(self.k, self.lmax.max(other.lmax))?;
        for (l, m, _, _) in out.clone().modes() {
            out.set_a(l, m, self.a(l, m) + other.a(l, m))?;
            out.set_b(l, m, self.b(l, m) + other.b(l, m))?;
        }
        Ok(out)
    }

    /// Text serialisation: header `k <v> lmax <v>`, then one line
    /// `l m re(a) im(a) re(b) im(b)` per mode. Floats use the shortest
    /// representation that parses back to the identical value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "k {:?} lmax {}", self.k, self.lmax);
        for (l, m, a, b) in self.modes() {
            let _ = writeln!(s, "{l} {m} {:?} {:?} {:?} {:?}", a.re, a.im, b.re, b.im);
        }
        s
    }

    /// Parse the text format produced by [`to_text`](Self::to_text). Blank
    /// lines and lines starting with `#` are ignored; absent modes are zero;
    /// repeated modes are an error.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "k" || h[2] != "lmax" {
            return Err(Error::Parse(format!(
                "header must read `k <value> lmax <value>`, got `{header}`"
            )));
        }
        let k: f64 = h[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad k value `{}`", h[1])))?;
        let lmax: u32 = h[3]
            .parse()
            .map_err(|_| Error::Parse(format!("bad lmax value `{}`", h[3])))?;
        let mut out = Self::zeros(k, lmax).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seen = std::collections::HashSet::new();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 6 {
                return Err(Error::Parse(format!("mode line needs 6 fields: `{line}`")));
            }
            let l: u32 = f[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree in `{line}`")))?;
            let m: i32 = f[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad order in `{line}`")))?;
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{s}` in `{line}`")))
            };
            let a = Complex64::new(num(f[2])?, num(f[3])?);
            let b = Complex64::new(num(f[4])?, num(f[5])?);
            if !seen.insert((l, m)) {
                return Err(Error::Parse(format!("mode (l={l}, m={m}) given twice")));
            }
            out.set_a(l, m, a)
                .map_err(|e| Error::Parse(e.to_string()))?;
            out.set_b(l, m, b)
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(out)
    }
}

fn check_point(point: &SphericalPoint) -> Result<()> {
    if !(point.r >= 0.0) || !point.r.is_finite() {
        return Err(Error::Domain(format!(
            "radius r = {} must be finite and >= 0",
            point.r
        )));
    }
    if !(0.0..=PI).contains(&point.theta) {
        return Err(Error::Domain(format!(
            "polar angle θ = {} outside [0, π]",
            point.theta
        )));
    }
    Ok(())
}

/// Vector wavefunctions `(M_l^m, N_l^m)` at a point with `r > 0`:
///
/// ```text
/// X = i/√(l(l+1)) (i (m/sinθ) Y θ̂ - ∂_θY φ̂)
/// Z = i/√(l(l+1)) (∂_θY θ̂ + i (m/sinθ) Y φ̂)
/// M = j_l(kr) X
/// N = i (j_l(kr)/(kr) + j_l'(kr)) Z - √(l(l+1))/(kr) j_l(kr) Y r̂
/// ```
pub fn vector_modes(
    l: u32,
    m: i32,
    point: &SphericalPoint,
    k: f64,
) -> Result<(ComplexVec3, ComplexVec3)> {
    check_point(point)?;
    if l < 1 {
        return Err(Error::Index("vector modes need l >= 1".into()));
    }
    if point.r == 0.0 {
        return Err(Error::SingularPoint(
            "vector modes are evaluated for r > 0; use eval_field at r = 0".into(),
        ));
    }
    let ang = angular_parts(l, m, point.theta, point.phi)?;
    let t = k * point.r;
    let j = sph_bessel(l, t);
    let jp = sph_bessel_deriv(l, t);
    let sq = ((l * (l + 1)) as f64).sqrt();
    let x_th = I / sq * (I * ang.my_over_sin);
    let x_ph = I / sq * (-ang.dy);
    let z_th = I / sq * ang.dy;
    let z_ph = I / sq * (I * ang.my_over_sin);
    let mm = [Complex64::default(), x_th * j, x_ph * j];
    let radial = I * (j / t + jp);
    let nn = [-(sq / t) * j * ang.y, radial * z_th, radial * z_ph];
    Ok((
        spherical_to_cartesian(mm, point.theta, point.phi),
        spherical_to_cartesian(nn, point.theta, point.phi),
    ))
}

/// Spherical components `(E_r, E_θ, E_φ)` of the truncated expansion.
/// Valid at `r = 0` (exact limits of the radial factors) and on the polar
/// axis (recursion-based `m/sinθ`).
pub fn eval_field_spherical(
    coeffs: &ModeCoefficients,
    point: &SphericalPoint,
) -> Result<[Complex64; 3]> {
    expansion_spherical(coeffs, point, |a, b| (a, b))
}

/// Spherical components of `∇∧E`: the expansion with `(a, b) → (ik b, -ik a)`.
pub fn eval_curl_spherical(
    coeffs: &ModeCoefficients,
    point: &SphericalPoint,
) -> Result<[Complex64; 3]> {
    let ik = I * coeffs.k;
    expansion_spherical(coeffs, point, move |a, b| (ik * b, -ik * a))
}

fn expansion_spherical<F>(
    coeffs: &ModeCoefficients,
    point: &SphericalPoint,
    map: F,
) -> Result<[Complex64; 3]>
where
    F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
{
    check_point(point)?;
    let zero = Complex64::default();
    let mut out = [zero; 3];
    let t = coeffs.k * point.r;
    for l in 1..=coeffs.lmax {
        let lm = l as i32;
        if (-lm..=lm).all(|m| coeffs.a(l, m) == zero && coeffs.b(l, m) == zero) {
            continue;
        }
        let rad = radial_pq(l, t)?;
        let sq = ((l * (l + 1)) as f64).sqrt();
        for m in -lm..=lm {
            let (a, b) = map(coeffs.a(l, m), coeffs.b(l, m));
            if a == zero && b == zero {
                continue;
            }
            let ang = angular_parts(l, m, point.theta, point.phi)?;
            let s = -1.0 / sq;
            out[0] += s * b * (l * (l + 1)) as f64 * rad.p * ang.y;
            out[1] += s * (a * rad.j * ang.my_over_sin + b * rad.q * ang.dy);
            out[2] += s * I * (a * rad.j * ang.dy + b * rad.q * ang.my_over_sin);
        }
    }
    Ok(out)
}

/// `E(x)` in the Cartesian frame.
pub fn eval_field(coeffs: &ModeCoefficients, point: &SphericalPoint) -> Result<ComplexVec3> {
    Ok(spherical_to_cartesian(
        eval_field_spherical(coeffs, point)?,
        point.theta,
        point.phi,
    ))
}

/// `∇∧E(x)` in the Cartesian frame.
pub fn eval_curl(coeffs: &ModeCoefficients, point: &SphericalPoint) -> Result<ComplexVec3> {
    Ok(spherical_to_cartesian(
        eval_curl_spherical(coeffs, point)?,
        point.theta,
        point.phi,
    ))
}
