//! Edge-corner geometry and boundary traces.
//!
//! The corner has its edge on the z-axis, face 1 in the half-plane `φ = 0`
//! and face 2 in `φ = φ₀ = απ`. Exterior normals are `ν₁ = (0, -1, 0)` and
//! `ν₂ = (-sin φ₀, cos φ₀, 0)`, i.e. `ν₁ = -φ̂(0)` and `ν₂ = +φ̂(φ₀)`.
//!
//! On a face `φ = φ_f` the tangential frame is
//! `e₁(θ, φ) = θ̂(θ, φ)` and `e₂(θ, φ) = -r̂(θ, φ)`, and with
//! `ν = s φ̂(φ_f)` (`s = -1` on face 1, `s = +1` on face 2):
//!
//! ```text
//! ν ∧ E       = s (E_r e₁ + E_θ e₂)
//! ν ∧ (∇∧E)   = s ((∇∧E)_r e₁ + (∇∧E)_θ e₂)
//! (ν ∧ E) ∧ ν = E_θ e₁ - E_r e₂
//! ```
//!
//! Every coefficient is a closed-form series over the modes; `m/sinθ`
//! factors are evaluated by the Legendre recursion so the edge `θ = 0` is
//! regular.

use crate::angles::Angle;
use crate::error::{Error, Result};
use crate::swe::{
    eval_curl_spherical, eval_field_spherical, ComplexVec3, ModeCoefficients, SphericalPoint,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One θ-dependent term `η_j(θ) = Σ_i c_i cos^i θ` of an impedance series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaTerm {
    pub cos_poly: Vec<Complex64>,
}

impl EtaTerm {
    pub fn eval(&self, theta: f64) -> Complex64 {
        let x = theta.cos();
        self.cos_poly
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * x + c)
    }
}

/// Boundary condition on one face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ImpedanceSpec {
    /// `η ≡ 0`: perfect magnetic conductor, `ν∧(∇∧E) = 0`.
    Zero,
    /// `η ≡ ∞`: perfect electric conductor, `(ν∧E)∧ν = 0`.
    Infinite,
    /// Class-𝒜 impedance `η(r, θ) = η₀ + Σ_{j>=1} η_j(θ) r^j` with `η₀ ≠ 0`.
    Series {
        eta0: Complex64,
        higher: Vec<EtaTerm>,
    },
}

impl ImpedanceSpec {
    /// Constant impedance `η₀`.
    pub fn constant(eta0: Complex64) -> Result<Self> {
        Self::series(eta0, Vec::new())
    }

    /// Series impedance; rejects `η₀ = 0`.
    pub fn series(eta0: Complex64, higher: Vec<EtaTerm>) -> Result<Self> {
        if eta0.norm() == 0.0 || !eta0.re.is_finite() || !eta0.im.is_finite() {
            return Err(Error::Domain(
                "impedance series needs a finite nonzero constant term η₀".into(),
            ));
        }
        Ok(Self::Series { eta0, higher })
    }

    /// Constant term `η₀` of a series.
    pub fn eta0(&self) -> Option<Complex64> {
        match self {
            Self::Series { eta0, .. } => Some(*eta0),
            _ => None,
        }
    }

    /// Pointwise value `η(r, θ)` of a series.
    pub fn eta_at(&self, r: f64, theta: f64) -> Option<Complex64> {
        match self {
            Self::Series { eta0, higher } => {
                let mut acc = *eta0;
                let mut rp = 1.0;
                for term in higher {
                    rp *= r;
                    acc += term.eval(theta) * rp;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Zero => "pmc",
            Self::Infinite => "pec",
            Self::Series { .. } => "impedance",
        }
    }
}

/// Face of the corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceId {
    /// Half-plane `φ = 0`.
    One,
    /// Half-plane `φ = απ`.
    Two,
}

impl FaceId {
    pub const BOTH: [FaceId; 2] = [FaceId::One, FaceId::Two];

    /// Orientation sign `s` with `ν = s φ̂(φ_f)`.
    pub fn orientation(self) -> f64 {
        match self {
            FaceId::One => -1.0,
            FaceId::Two => 1.0,
        }
    }
}

/// Edge-corner: dihedral angle, boundary data of both faces, wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeCornerConfig {
    pub alpha: Angle,
    pub bc1: ImpedanceSpec,
    pub bc2: ImpedanceSpec,
    pub k: f64,
}

impl EdgeCornerConfig {
    pub fn new(alpha: Angle, bc1: ImpedanceSpec, bc2: ImpedanceSpec, k: f64) -> Result<Self> {
        if !(alpha.value > 0.0 && alpha.value < 2.0) || alpha.value == 1.0 {
            return Err(Error::Domain(format!(
                "α = {} must lie in (0, 2) and differ from 1",
                alpha.value
            )));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!(
                "wavenumber k = {k} must be positive"
            )));
        }
        for bc in [&bc1, &bc2] {
            if let ImpedanceSpec::Series { eta0, .. } = bc {
                if eta0.norm() == 0.0 {
                    return Err(Error::Domain("impedance series needs η₀ ≠ 0".into()));
                }
            }
        }
        Ok(Self { alpha, bc1, bc2, k })
    }

    pub fn spec(&self, face: FaceId) -> &ImpedanceSpec {
        match face {
            FaceId::One => &self.bc1,
            FaceId::Two => &self.bc2,
        }
    }

    /// Azimuth `φ_f` of a face.
    pub fn face_azimuth(&self, face: FaceId) -> f64 {
        match face {
            FaceId::One => 0.0,
            FaceId::Two => self.alpha.radians(),
        }
    }
}

/// Exterior unit normal `ν₁ = (0,-1,0)` or `ν₂ = (-sin φ₀, cos φ₀, 0)`.
pub fn face_normal(config: &EdgeCornerConfig, face: FaceId) -> [f64; 3] {
    match face {
        FaceId::One => [0.0, -1.0, 0.0],
        FaceId::Two => {
            let (s, c) = config.alpha.radians().sin_cos();
            [-s, c, 0.0]
        }
    }
}

/// Tangential frame `(e₁, e₂)` with `e₁ = θ̂`, `e₂ = -r̂`.
pub fn e1e2(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([cp * ct, sp * ct, -st], [-cp * st, -sp * st, -ct])
}

/// Coefficients of a trace along `(e₁, e₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaceTrace {
    pub e1: Complex64,
    pub e2: Complex64,
}

impl FaceTrace {
    /// Assemble `e1 e₁ + e2 e₂` in the Cartesian frame.
    pub fn to_vec(&self, theta: f64, phi: f64) -> ComplexVec3 {
        let (u, v) = e1e2(theta, phi);
        ComplexVec3::from_real(u, self.e1) + ComplexVec3::from_real(v, self.e2)
    }
}

fn face_point(config: &EdgeCornerConfig, face: FaceId, r: f64, theta: f64) -> SphericalPoint {
    SphericalPoint::new(r, theta, config.face_azimuth(face))
}

fn check_k(coeffs: &ModeCoefficients, config: &EdgeCornerConfig) -> Result<()> {
    if (coeffs.k - config.k).abs() > 1e-14 * config.k {
        return Err(Error::Domain(format!(
            "coefficient wavenumber {} differs from corner wavenumber {}",
            coeffs.k, config.k
        )));
    }
    Ok(())
}

/// `ν ∧ E` on a face as `(e₁, e₂)` coefficients.
pub fn trace_coefficients_e(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<FaceTrace> {
    check_k(coeffs, config)?;
    let e = eval_field_spherical(coeffs, &face_point(config, face, r, theta))?;
    let s = face.orientation();
    Ok(FaceTrace {
        e1: s * e[0],
        e2: s * e[1],
    })
}

/// `ν ∧ (∇∧E)` on a face as `(e₁, e₂)` coefficients.
pub fn trace_coefficients_curl(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<FaceTrace> {
    check_k(coeffs, config)?;
    let c = eval_curl_spherical(coeffs, &face_point(config, face, r, theta))?;
    let s = face.orientation();
    Ok(FaceTrace {
        e1: s * c[0],
        e2: s * c[1],
    })
}

/// `ν ∧ E` on a face (Cartesian).
pub fn trace_tangential_e(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<ComplexVec3> {
    Ok(trace_coefficients_e(coeffs, config, face, r, theta)?
        .to_vec(theta, config.face_azimuth(face)))
}

/// `ν ∧ (∇∧E)` on a face (Cartesian).
pub fn trace_tangential_curl(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<ComplexVec3> {
    Ok(trace_coefficients_curl(coeffs, config, face, r, theta)?
        .to_vec(theta, config.face_azimuth(face)))
}

/// `(ν ∧ E) ∧ ν`, the tangential part of `E`, on a face (Cartesian).
pub fn tangential_component(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<ComplexVec3> {
    let nu = face_normal(config, face);
    Ok(trace_tangential_e(coeffs, config, face, r, theta)?.cross_real(nu))
}

/// Boundary residual on a face:
///
/// * `Series`: `ν∧(∇∧E) + η(r,θ) (ν∧E)∧ν` with the full series `η`;
/// * `Zero`: `ν∧(∇∧E)`;
/// * `Infinite`: `(ν∧E)∧ν`.
pub fn impedance_residual(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    spec: &ImpedanceSpec,
    r: f64,
    theta: f64,
) -> Result<ComplexVec3> {
    match spec {
        ImpedanceSpec::Zero => trace_tangential_curl(coeffs, config, face, r, theta),
        ImpedanceSpec::Infinite => tangential_component(coeffs, config, face, r, theta),
        ImpedanceSpec::Series { .. } => {
            let eta = spec.eta_at(r, theta).expect("series has a value");
            let curl = trace_tangential_curl(coeffs, config, face, r, theta)?;
            let tang = tangential_component(coeffs, config, face, r, theta)?;
            Ok(curl + tang.scale(eta))
        }
    }
}

/// Normal components `(ν·E, ν·(∇∧E))` on a face. These vanish on PMC and
/// PEC faces respectively as consequences of the tangential conditions.
pub fn normal_components(
    coeffs: &ModeCoefficients,
    config: &EdgeCornerConfig,
    face: FaceId,
    r: f64,
    theta: f64,
) -> Result<(Complex64, Complex64)> {
    check_k(coeffs, config)?;
    let p = face_point(config, face, r, theta);
    let s = face.orientation();
    let e = eval_field_spherical(coeffs, &p)?;
    let c = eval_curl_spherical(coeffs, &p)?;
    Ok((s * e[2], s * c[2]))
}
