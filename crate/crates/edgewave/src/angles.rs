//! Dihedral angles in units of π: exact rational representation, rationality
//! detection by continued fractions, exclusion-grid arithmetic, and the
//! rational degree of a polyhedron.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default largest denominator tried by [`detect_rational`].
pub const DEFAULT_MAX_DEN: u64 = 1000;
/// A continued-fraction convergent is accepted only within this distance.
pub const RATIONAL_TOL: f64 = 1e-12;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Dihedral angle `φ₀ = απ` with `α ∈ (0, 2)`, `α ≠ 1`, optionally carrying an
/// exact reduced fraction `α = q/p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angle {
    pub value: f64,
    /// Reduced `(q, p)` when the angle is known to be exactly rational.
    pub rational: Option<(u64, u64)>,
}

impl Angle {
    /// Angle from a decimal value with no rational structure attached.
    pub fn from_value(value: f64) -> Result<Self> {
        check_range(value)?;
        Ok(Self {
            value,
            rational: None,
        })
    }

    /// Exact angle `q/p` (reduced on construction).
    pub fn from_fraction(q: u64, p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("denominator must be positive".into()));
        }
        let g = gcd(q, p).max(1);
        let (q, p) = (q / g, p / g);
        if q == 0 || q >= 2 * p || q == p {
            return Err(Error::Domain(format!(
                "α = {q}/{p} must lie in (0, 2) and differ from 1"
            )));
        }
        Ok(Self {
            value: q as f64 / p as f64,
            rational: Some((q, p)),
        })
    }

    /// Denominator `p` of the reduced fraction, if rational.
    pub fn denominator(&self) -> Option<u64> {
        self.rational.map(|(_, p)| p)
    }

    /// Dihedral angle `φ₀ = απ` in radians.
    pub fn radians(&self) -> f64 {
        self.value * std::f64::consts::PI
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rational {
            Some((q, p)) => write!(f, "{q}/{p}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn check_range(value: f64) -> Result<()> {
    if !(value > 0.0 && value < 2.0) || value == 1.0 {
        return Err(Error::Domain(format!(
            "α = {value} must lie in (0, 2) and differ from 1"
        )));
    }
    Ok(())
}

/// Parse `"q/p"` (stored exactly, reduced) or a decimal literal (stored
/// without rational structure).
pub fn parse_angle(text: &str) -> Result<Angle> {
    let t = text.trim();
    if let Some((q, p)) = t.split_once('/') {
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in `{t}`")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in `{t}`")))?;
        Angle::from_fraction(q, p)
    } else {
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("`{t}` is neither q/p nor a decimal")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("`{t}` is not finite")));
        }
        Angle::from_value(v)
    }
}

/// Attach `(q, p)` iff a continued-fraction convergent with `p <= max_den`
/// lies within [`RATIONAL_TOL`] of the value; otherwise return the angle
/// unchanged. Angles that are already rational are returned as they are.
pub fn detect_rational(angle: Angle, max_den: u64) -> Angle {
    if angle.rational.is_some() {
        return angle;
    }
    let x = angle.value;
    let (mut h0, mut h1) = (0u64, 1u64); // numerators h_{-2}, h_{-1}
    let (mut k0, mut k1) = (1u64, 0u64); // denominators
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let h2 = a.saturating_mul(h1).saturating_add(h0);
        let k2 = a.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den {
            break;
        }
        if (x - h2 as f64 / k2 as f64).abs() < RATIONAL_TOL {
            return Angle::from_fraction(h2, k2).unwrap_or(angle);
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rem - a as f64;
        if frac <= 0.0 {
            break;
        }
        rem = 1.0 / frac;
    }
    angle
}

/// Which exclusion grid to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Grid {
    /// `α ≠ q/p`, `q = 1..2p-1` (impedance–impedance).
    Qp,
    /// `α ≠ q/(2p)`, `q = 1..4p-1` (PEC/PMC and mixed corners).
    Q2p,
}

/// Result of a grid scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridOrder {
    /// Largest `N` such that no `p <= N` hits the angle.
    Exact(u64),
    /// No hit found for any `p <= N_max` (or the angle is not rational).
    AtLeast(u64),
}

/// First `p` whose grid contains the rational angle `q0/p0`, scanning
/// `p = 1..=limit` exactly in integer arithmetic.
fn first_hit(q0: u64, p0: u64, grid: Grid, limit: u64) -> Option<u64> {
    (1..=limit).find(|&p| {
        let (den, qmax) = match grid {
            Grid::Qp => (p, 2 * p - 1),
            Grid::Q2p => (2 * p, 4 * p - 1),
        };
        // q/den == q0/p0  <=>  q * p0 == q0 * den
        (1..=qmax).any(|q| q * p0 == q0 * den)
    })
}

/// Brute-force scan of `p = 1..=n_max`: the largest `N` with no grid hit at
/// any `p <= N`; angles without rational structure give `AtLeast(n_max)`.
pub fn grid_exclusion_order(angle: &Angle, grid: Grid, n_max: u64) -> GridOrder {
    match angle.rational {
        None => GridOrder::AtLeast(n_max),
        Some((q, p)) => match first_hit(q, p, grid, n_max) {
            Some(hit) => GridOrder::Exact(hit - 1),
            None => GridOrder::AtLeast(n_max),
        },
    }
}

/// Unbounded version used for theorem bounds: a rational `q/p` always hits
/// its grid by `p = p0`, so the scan terminates.
pub fn grid_exclusion_exact(angle: &Angle, grid: Grid) -> Option<u64> {
    angle
        .rational
        .map(|(q, p)| first_hit(q, p, grid, p).expect("every reduced fraction hits its grid") - 1)
}

/// Angles of the edge-corners of a polyhedron.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedronAngles(pub Vec<Angle>);

/// Rational degree classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyhedronDegree {
    Irrational,
    Rational(u64),
}

/// Irrational iff no angle is rational; otherwise the smallest denominator.
pub fn polyhedron_degree(angles: &PolyhedronAngles) -> Result<PolyhedronDegree> {
    if angles.0.is_empty() {
        return Err(Error::Domain(
            "a polyhedron needs at least one edge-corner angle".into(),
        ));
    }
    Ok(angles
        .0
        .iter()
        .filter_map(Angle::denominator)
        .min()
        .map_or(PolyhedronDegree::Irrational, PolyhedronDegree::Rational))
}
