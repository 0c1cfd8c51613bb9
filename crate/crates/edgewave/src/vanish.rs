//! Order-by-order constraint systems on the coefficients `a_n^m, b_n^m`,
//! their nullspaces, closed-form determinants, and the induction yielding a
//! lower bound on the vanishing order.
//!
//! At order `n` (all lower orders assumed zero) the unknowns are
//! `{a_n^m, b_n^m : |m| <= n}`, ordered
//! `(b^0, a^0, then for m = 1..n: a^m, a^{-m}, b^m, b^{-m})`.
//!
//! Impedance–impedance rows:
//!
//! * per face, the coefficients of `P_n^j(cos θ)`, `j = 0..n`, along `e₁` and
//!   `e₂` of the leading `r^{n-1}` term of the impedance condition, after
//!   expanding `∂_θ P_n^{|m|}` by the first Legendre recursion
//!   (`2(n+1)` rows per face);
//! * three rows from matching both faces' conditions along the edge, and
//!   three edge rows of face 2.
//!
//! PEC/PMC rows are the decoupled relations `b^0 = a^0 = 0`,
//! `b^m + b^{-m} = 0`, `a^m - a^{-m} = 0`, `a^m e^{imαπ} + a^{-m} e^{-imαπ} = 0`,
//! `b^m e^{imαπ} - b^{-m} e^{-imαπ} = 0`. Mixed corners are reflected across
//! their PEC/PMC face and assembled as impedance–impedance corners at the
//! doubled angle.

use crate::angles::{grid_exclusion_order, Angle, Grid, GridOrder};
use crate::complex_serde;
use crate::corner::{EdgeCornerConfig, ImpedanceSpec};
use crate::error::{Error, Result};
use crate::swe::norm_const;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Default relative rank threshold.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Singular values within this factor of the threshold are ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Face-1 / face-2 boundary pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// Impedance on both faces.
    ImpImp,
    /// PEC on face 1, PMC on face 2.
    PecPmc,
    /// PEC on face 1, impedance on face 2.
    ImpPec,
    /// PMC on face 1, impedance on face 2.
    ImpPmc,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [
        CaseKind::ImpImp,
        CaseKind::PecPmc,
        CaseKind::ImpPec,
        CaseKind::ImpPmc,
    ];

    /// Classify the boundary data of a corner.
    pub fn of(config: &EdgeCornerConfig) -> Result<Self> {
        use ImpedanceSpec::*;
        match (&config.bc1, &config.bc2) {
            (Series { .. }, Series { .. }) => Ok(CaseKind::ImpImp),
            (Infinite, Zero) => Ok(CaseKind::PecPmc),
            (Infinite, Series { .. }) => Ok(CaseKind::ImpPec),
            (Zero, Series { .. }) => Ok(CaseKind::ImpPmc),
            (a, b) => Err(Error::UnsupportedPairing(format!(
                "face 1 {} / face 2 {} (supported: imp-imp, pec-pmc, pec/pmc on face 1 with impedance on face 2)",
                a.label(),
                b.label()
            ))),
        }
    }

    /// Exclusion grid of the case's theorem.
    pub fn grid(self) -> Grid {
        match self {
            CaseKind::ImpImp => Grid::Qp,
            _ => Grid::Q2p,
        }
    }

    pub fn is_mixed(self) -> bool {
        matches!(self, CaseKind::ImpPec | CaseKind::ImpPmc)
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseKind::ImpImp => "imp-imp",
            CaseKind::PecPmc => "pec-pmc",
            CaseKind::ImpPec => "imp-pec",
            CaseKind::ImpPmc => "imp-pmc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        CaseKind::ALL
            .into_iter()
            .find(|c| c.label() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown case `{s}` (expected imp-imp, pec-pmc, imp-pec, imp-pmc)"
                ))
            })
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for CaseKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for CaseKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CaseKind::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// `a` or `b` family of coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

/// Column label `a_n^m` / `b_n^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Unknown {
    pub family: Family,
    pub m: i32,
}

impl Unknown {
    pub fn a(m: i32) -> Self {
        Self {
            family: Family::A,
            m,
        }
    }
    pub fn b(m: i32) -> Self {
        Self {
            family: Family::B,
            m,
        }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.family == Family::A { 'a' } else { 'b' };
        write!(f, "{c}^{}", self.m)
    }
}

/// Column order `(b^0, a^0, a^1, a^-1, b^1, b^-1, …, a^n, a^-n, b^n, b^-n)`.
pub fn unknowns(n: u32) -> Vec<Unknown> {
    let mut cols = vec![Unknown::b(0), Unknown::a(0)];
    for m in 1..=n as i32 {
        cols.extend([Unknown::a(m), Unknown::a(-m), Unknown::b(m), Unknown::b(-m)]);
    }
    cols
}

fn column_index(n: u32, u: Unknown) -> usize {
    match (u.family, u.m) {
        (Family::B, 0) => 0,
        (Family::A, 0) => 1,
        (fam, m) => {
            let base = 2 + 4 * (m.unsigned_abs() as usize - 1);
            let _ = n;
            base + match (fam, m > 0) {
                (Family::A, true) => 0,
                (Family::A, false) => 1,
                (Family::B, true) => 2,
                (Family::B, false) => 3,
            }
        }
    }
}

/// Source relation of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// Coefficient of `P_n^j` along `e₁` in the face's impedance condition.
    ChainE1 { face: u8, j: u32 },
    /// Coefficient of `P_n^j` along `e₂` in the face's impedance condition.
    ChainE2 { face: u8, j: u32 },
    /// Edge matching, first component.
    MatchA,
    /// Edge matching, second component.
    MatchB,
    /// Edge matching of the `b^{±1}` combinations.
    MatchC,
    /// Face-2 edge relations (1: `a^0`/`b^{±1}` cos row, 2: sin row, 3: `a^{±1}`/`b^0` row).
    EdgeFace2 { row: u8 },
    /// PEC: `b^0 = 0`.
    PecB0,
    /// PEC: `b^m + b^{-m} = 0`.
    PecTangential { m: u32 },
    /// PEC (second-lowest order): `a^m - a^{-m} = 0`.
    PecCoupling { m: u32 },
    /// PMC: `a^0 = 0`.
    PmcA0,
    /// PMC: `a^m e^{imαπ} + a^{-m} e^{-imαπ} = 0`.
    PmcTangential { m: u32 },
    /// PMC (second-lowest order): `b^m e^{imαπ} - b^{-m} e^{-imαπ} = 0`.
    PmcCoupling { m: u32 },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::ChainE1 { face, j } => write!(f, "face{face} e1 P^{j}"),
            Relation::ChainE2 { face, j } => write!(f, "face{face} e2 P^{j}"),
            Relation::MatchA => write!(f, "edge matching (a)"),
            Relation::MatchB => write!(f, "edge matching (b)"),
            Relation::MatchC => write!(f, "edge matching (c)"),
            Relation::EdgeFace2 { row } => write!(f, "face2 edge row {row}"),
            Relation::PecB0 => write!(f, "pec b^0"),
            Relation::PecTangential { m } => write!(f, "pec b^{m}+b^-{m}"),
            Relation::PecCoupling { m } => write!(f, "pec a^{m}-a^-{m}"),
            Relation::PmcA0 => write!(f, "pmc a^0"),
            Relation::PmcTangential { m } => write!(f, "pmc a^{m} phase"),
            Relation::PmcCoupling { m } => write!(f, "pmc b^{m} phase"),
        }
    }
}

/// Provenance of a row: its relation, and whether it was produced on the
/// reflected (doubled-angle) configuration of a mixed corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowTag {
    pub relation: Relation,
    pub reflected: bool,
}

/// Labelled complex constraint matrix for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    pub n: u32,
    pub case: CaseKind,
    /// Angle (units of π) at which the rows were assembled (doubled for mixed cases).
    pub assembly_alpha: f64,
    pub columns: Vec<Unknown>,
    pub matrix: DMatrix<Complex64>,
    pub provenance: Vec<RowTag>,
}

impl ConstraintSystem {
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Index of the (first) row with a given relation.
    pub fn row_of(&self, rel: Relation) -> Option<usize> {
        self.provenance.iter().position(|t| t.relation == rel)
    }

    /// Index of a column.
    pub fn col_of(&self, u: Unknown) -> Option<usize> {
        self.columns.iter().position(|c| *c == u)
    }

    /// Same system with every row multiplied by `s`.
    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.matrix *= s;
        out
    }
}

struct Builder {
    n: u32,
    ncols: usize,
    rows: Vec<Vec<Complex64>>,
    tags: Vec<RowTag>,
    reflected: bool,
}

impl Builder {
    fn new(n: u32, reflected: bool) -> Self {
        Self {
            n,
            ncols: unknowns(n).len(),
            rows: Vec::new(),
            tags: Vec::new(),
            reflected,
        }
    }

    fn push(&mut self, relation: Relation, entries: &[(Unknown, Complex64)]) {
        let mut row = vec![Complex64::default(); self.ncols];
        for (u, v) in entries {
            row[column_index(self.n, *u)] += v;
        }
        self.rows.push(row);
        self.tags.push(RowTag {
            relation,
            reflected: self.reflected,
        });
    }

    fn finish(self, case: CaseKind, assembly_alpha: f64) -> ConstraintSystem {
        let nr = self.rows.len();
        let matrix = DMatrix::from_fn(nr, self.ncols, |i, j| self.rows[i][j]);
        ConstraintSystem {
            n: self.n,
            case,
            assembly_alpha,
            columns: unknowns(self.n),
            matrix,
            provenance: self.tags,
        }
    }
}

/// Reflected angle of a mixed corner (four-branch table):
/// `2α` on `(0,½)`, `2(1-α)` on `[½,1)`, `2(α-1)` on `(1,3/2)`, `2(2-α)` on `[3/2,2)`.
/// Exact for rational angles. Fails when the image is 1 (α = ½ or 3/2).
pub fn reflected_angle(alpha: &Angle) -> Result<Angle> {
    let reject = |a: &Angle| {
        Error::Domain(format!(
            "α = {a} reflects to a flat angle; no edge-corner remains"
        ))
    };
    match alpha.rational {
        Some((q, p)) => {
            let (num, den) = if 2 * q < p {
                (2 * q, p)
            } else if q < p {
                (2 * (p - q), p)
            } else if 2 * q < 3 * p {
                (2 * (q - p), p)
            } else {
                (2 * (2 * p - q), p)
            };
            Angle::from_fraction(num, den).map_err(|_| reject(alpha))
        }
        None => {
            let a = alpha.value;
            let v = if a < 0.5 {
                2.0 * a
            } else if a < 1.0 {
                2.0 * (1.0 - a)
            } else if a < 1.5 {
                2.0 * (a - 1.0)
            } else {
                2.0 * (2.0 - a)
            };
            Angle::from_value(v).map_err(|_| reject(alpha))
        }
    }
}

/// For a mixed corner, the impedance–impedance corner obtained by reflecting
/// across the PEC/PMC face: doubled angle, both faces carry the face-2 series.
pub fn reflected_config(config: &EdgeCornerConfig) -> Result<EdgeCornerConfig> {
    let case = CaseKind::of(config)?;
    if !case.is_mixed() {
        return Err(Error::Case(format!(
            "reflection applies to mixed corners, not {case}"
        )));
    }
    if case == CaseKind::ImpPmc && config.alpha.value > 1.0 {
        return Err(Error::Domain(format!(
            "PMC–impedance corners are treated for α ∈ (0, 1); got α = {}",
            config.alpha
        )));
    }
    let alpha = reflected_angle(&config.alpha)?;
    EdgeCornerConfig::new(alpha, config.bc2.clone(), config.bc2.clone(), config.k)
}

fn eta0_of(spec: &ImpedanceSpec, face: u8) -> Result<Complex64> {
    spec.eta0()
        .ok_or_else(|| Error::Case(format!("face {face} is not an impedance face")))
}

/// Chain rows of one face: coefficients of `P_n^j` along `e₁` and `e₂` of
///
/// ```text
/// Σ_m e^{imφ_f} c_n^m / √(n(n+1)) {
///     (ik a n(n+1) p̂ P^{|m|} - η b q̂ ∂_θP^{|m|}) e₁
///   + (ik a q̂ ∂_θP^{|m|}     + η b n(n+1) p̂ P^{|m|}) e₂ }
/// ```
///
/// with `p̂ = 1/(2n+1)`, `q̂ = (n+1)/(2n+1)` and
/// `∂_θP^m = ½[(n+m)(n-m+1) P^{m-1} - P^{m+1}]`, `∂_θP^0 = -P^1`.
fn push_face_chains(b: &mut Builder, face: u8, eta: Complex64, k: f64, phi_f: f64) -> Result<()> {
    let n = b.n;
    let nf = n as f64;
    let sq = (nf * (nf + 1.0)).sqrt();
    let p_hat = 1.0 / (2.0 * nf + 1.0);
    let q_hat = (nf + 1.0) / (2.0 * nf + 1.0);
    let ik = I * k;
    let njs = (n + 1) as usize;
    let mut e1: Vec<Vec<(Unknown, Complex64)>> = vec![Vec::new(); njs];
    let mut e2: Vec<Vec<(Unknown, Complex64)>> = vec![Vec::new(); njs];
    for m in -(n as i32)..=n as i32 {
        let ma = m.unsigned_abs();
        let w = Complex64::from_polar(norm_const(n, m)?, m as f64 * phi_f) / sq;
        let (ua, ub) = (Unknown::a(m), Unknown::b(m));
        e1[ma as usize].push((ua, w * ik * nf * (nf + 1.0) * p_hat));
        e2[ma as usize].push((ub, w * eta * nf * (nf + 1.0) * p_hat));
        let dp: Vec<(u32, f64)> = if ma == 0 {
            vec![(1, -1.0)]
        } else {
            let mf = ma as f64;
            let mut v = vec![(ma - 1, 0.5 * (nf + mf) * (nf - mf + 1.0))];
            if ma < n {
                v.push((ma + 1, -0.5));
            }
            v
        };
        for (j, cf) in dp {
            if j > n {
                continue;
            }
            e1[j as usize].push((ub, -w * eta * q_hat * cf));
            e2[j as usize].push((ua, w * ik * q_hat * cf));
        }
    }
    for (j, entries) in e1.iter().enumerate() {
        b.push(Relation::ChainE1 { face, j: j as u32 }, entries);
    }
    for (j, entries) in e2.iter().enumerate() {
        b.push(Relation::ChainE2 { face, j: j as u32 }, entries);
    }
    Ok(())
}

/// Constants of the edge rows: `(K, C, K_b)` with
/// `K = k n(n+1)² c_n^1 / (2(2n+1)√(n(n+1)))`, `C = √(n(n+1)) c_n^0/(2n+1)`,
/// `K_b = K/k`.
fn edge_constants(n: u32, k: f64) -> Result<(f64, f64, f64)> {
    let nf = n as f64;
    let sq = (nf * (nf + 1.0)).sqrt();
    let kb = nf * (nf + 1.0).powi(2) * norm_const(n, 1)? / (2.0 * (2.0 * nf + 1.0) * sq);
    let c = sq * norm_const(n, 0)? / (2.0 * nf + 1.0);
    Ok((k * kb, c, kb))
}

fn push_edge_rows(
    b: &mut Builder,
    eta1: Complex64,
    eta2: Complex64,
    k: f64,
    alpha: f64,
) -> Result<()> {
    let (kk, c0, kb) = edge_constants(b.n, k)?;
    let (s, co) = (alpha * std::f64::consts::PI).sin_cos();
    let (a1, am1, b1, bm1) = (Unknown::a(1), Unknown::a(-1), Unknown::b(1), Unknown::b(-1));
    let plus = |p: Unknown, q: Unknown, w: Complex64| [(p, w), (q, w)];
    let minus = |p: Unknown, q: Unknown, w: Complex64| [(p, w), (q, -w)];
    let cat = |x: [(Unknown, Complex64); 2],
               y: [(Unknown, Complex64); 2],
               z: Option<(Unknown, Complex64)>| {
        let mut v = vec![x[0], x[1], y[0], y[1]];
        v.extend(z);
        v
    };
    let r = |x: f64| Complex64::new(x, 0.0);
    b.push(
        Relation::MatchA,
        &cat(
            plus(a1, am1, I * kk * s * s),
            minus(a1, am1, r(-kk * s * co)),
            Some((Unknown::b(0), (-eta2 * co - eta1) * c0)),
        ),
    );
    b.push(
        Relation::MatchB,
        &cat(
            plus(a1, am1, -I * kk * s * co),
            minus(a1, am1, r(-kk * s * s)),
            Some((Unknown::b(0), -eta2 * s * c0)),
        ),
    );
    b.push(
        Relation::MatchC,
        &cat(
            plus(b1, bm1, -kb * (eta2 * co - eta1)),
            minus(b1, bm1, I * eta2 * kb * s),
            None,
        ),
    );
    b.push(
        Relation::EdgeFace2 { row: 1 },
        &cat(
            plus(b1, bm1, -eta2 * kb * co * co),
            minus(b1, bm1, I * eta2 * kb * s * co),
            Some((Unknown::a(0), I * k * c0 * co)),
        ),
    );
    b.push(
        Relation::EdgeFace2 { row: 2 },
        &cat(
            plus(b1, bm1, eta2 * kb * s * co),
            minus(b1, bm1, I * eta2 * kb * s * s),
            Some((Unknown::a(0), I * k * c0 * s)),
        ),
    );
    b.push(
        Relation::EdgeFace2 { row: 3 },
        &cat(
            plus(a1, am1, I * kk * co),
            minus(a1, am1, r(kk * s)),
            Some((Unknown::b(0), eta2 * c0)),
        ),
    );
    Ok(())
}

fn assemble_impimp(
    n: u32,
    config: &EdgeCornerConfig,
    case: CaseKind,
    reflected: bool,
) -> Result<ConstraintSystem> {
    let eta1 = eta0_of(&config.bc1, 1)?;
    let eta2 = eta0_of(&config.bc2, 2)?;
    let mut b = Builder::new(n, reflected);
    push_face_chains(&mut b, 1, eta1, config.k, 0.0)?;
    push_face_chains(&mut b, 2, eta2, config.k, config.alpha.radians())?;
    push_edge_rows(&mut b, eta1, eta2, config.k, config.alpha.value)?;
    Ok(b.finish(case, config.alpha.value))
}

fn assemble_pecpmc(n: u32, alpha: f64) -> ConstraintSystem {
    let one = Complex64::new(1.0, 0.0);
    let mut b = Builder::new(n, false);
    b.push(Relation::PecB0, &[(Unknown::b(0), one)]);
    b.push(Relation::PmcA0, &[(Unknown::a(0), one)]);
    for m in 1..=n {
        let mi = m as i32;
        let e = Complex64::from_polar(1.0, m as f64 * alpha * std::f64::consts::PI);
        b.push(
            Relation::PecTangential { m },
            &[(Unknown::b(mi), one), (Unknown::b(-mi), one)],
        );
        b.push(
            Relation::PecCoupling { m },
            &[(Unknown::a(mi), one), (Unknown::a(-mi), -one)],
        );
        b.push(
            Relation::PmcTangential { m },
            &[(Unknown::a(mi), e), (Unknown::a(-mi), e.conj())],
        );
        b.push(
            Relation::PmcCoupling { m },
            &[(Unknown::b(mi), e), (Unknown::b(-mi), -e.conj())],
        );
    }
    b.finish(CaseKind::PecPmc, alpha)
}

/// Assemble the order-`n` constraint system of a corner.
pub fn assemble_order_system(n: u32, config: &EdgeCornerConfig) -> Result<ConstraintSystem> {
    if n < 1 {
        return Err(Error::Domain("order n must be >= 1".into()));
    }
    let case = CaseKind::of(config)?;
    match case {
        CaseKind::ImpImp => assemble_impimp(n, config, case, false),
        CaseKind::PecPmc => Ok(assemble_pecpmc(n, config.alpha.value)),
        CaseKind::ImpPec | CaseKind::ImpPmc => {
            let refl = reflected_config(config)?;
            assemble_impimp(n, &refl, case, true)
        }
    }
}

/// Singular values of the equilibrated row matrix (descending), the values
/// the rank decision is based on.
pub fn singular_values(system: &ConstraintSystem) -> Vec<f64> {
    let sv = equilibrate(&system.matrix)
        .0
        .svd(false, false)
        .singular_values;
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Row- and column-equilibrated copy of `matrix` together with the column
/// scale factors. Rows and columns are scaled to unit Euclidean norm (zero
/// ones are left alone); the rank is unchanged, but columns whose
/// normalisation constants differ by many decades no longer masquerade as
/// near-dependencies.
fn equilibrate(matrix: &DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>) {
    let mut m = matrix.clone();
    let mut scales = vec![1.0; m.ncols()];
    for _ in 0..2 {
        for mut row in m.row_iter_mut() {
            let n = row.norm();
            if n > 0.0 {
                row /= Complex64::new(n, 0.0);
            }
        }
        for (j, mut col) in m.column_iter_mut().enumerate() {
            let n = col.norm();
            if n > 0.0 {
                col /= Complex64::new(n, 0.0);
                scales[j] /= n;
            }
        }
    }
    (m, scales)
}

/// Nullspace dimension of a complex matrix with relative threshold `tol`
/// (after row/column equilibration); `n` only labels an ambiguity error.
pub fn matrix_nullspace_dim(matrix: &DMatrix<Complex64>, tol: f64, n: usize) -> Result<usize> {
    let ncols = matrix.ncols();
    if matrix.nrows() == 0 {
        return Ok(ncols);
    }
    let (eq, _) = equilibrate(matrix);
    let sv: Vec<f64> = eq
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(ncols);
    }
    let mut small = 0;
    for s in &sv {
        let ratio = s / smax;
        if ratio > tol / AMBIGUITY_FACTOR && ratio < tol * AMBIGUITY_FACTOR {
            return Err(Error::RankAmbiguity { n, ratio, tol });
        }
        if ratio <= tol / AMBIGUITY_FACTOR {
            small += 1;
        }
    }
    Ok(small + ncols.saturating_sub(sv.len()))
}

/// Nullspace dimension of an assembled system; errors if any equilibrated
/// singular value lies within a factor 10 of `tol · σ_max`.
pub fn nullspace_dim(system: &ConstraintSystem, tol: f64) -> Result<usize> {
    matrix_nullspace_dim(&system.matrix, tol, system.n as usize)
}

/// Unit-norm basis of the numerical nullspace (vectors over
/// [`ConstraintSystem::columns`]).
pub fn nullspace_basis(system: &ConstraintSystem, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    let dim = nullspace_dim(system, tol)?;
    let ncols = system.ncols();
    let (mut m, scales) = equilibrate(&system.matrix);
    if m.nrows() < ncols {
        m = m.resize_vertically(ncols, Complex64::default());
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a]
            .partial_cmp(&svd.singular_values[b])
            .unwrap()
    });
    Ok(order
        .into_iter()
        .take(dim)
        .map(|i| {
            let v: Vec<Complex64> = vt
                .row(i)
                .iter()
                .zip(&scales)
                .map(|(c, s)| c.conj() * *s)
                .collect();
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / norm).collect()
        })
        .collect())
}

fn impimp_parts(config: &EdgeCornerConfig) -> Result<(Complex64, Complex64)> {
    match CaseKind::of(config)? {
        CaseKind::ImpImp => Ok((eta0_of(&config.bc1, 1)?, eta0_of(&config.bc2, 2)?)),
        other => Err(Error::Case(format!(
            "closed-form determinants are defined for imp-imp corners, not {other}"
        ))),
    }
}

fn det_common(n: u32) -> Result<f64> {
    let nf = n as f64;
    let ratio = (nf + 1.0) / (2.0 * nf + 1.0);
    let c1 = norm_const(n, 1)?;
    Ok(ratio.powi(3) * (nf * (nf * (nf + 1.0)).sqrt() / 2.0) * c1 * c1 * norm_const(n, 0)?)
}

/// `det 𝒜_n = -i k² η₁ ((n+1)/(2n+1))³ (n√(n(n+1))/2) (c_n^1)² c_n^0 sin²(απ)`.
pub fn closed_det_a(n: u32, config: &EdgeCornerConfig) -> Result<Complex64> {
    let (eta1, _) = impimp_parts(config)?;
    let s = config.alpha.radians().sin();
    Ok(-I * config.k * config.k * eta1 * det_common(n)? * s * s)
}

/// `det ℬ_n = -k η₂² ((n+1)/(2n+1))³ (n√(n(n+1))/2) (c_n^1)² c_n^0 sin²(απ) cos²(απ)`.
pub fn closed_det_b(n: u32, config: &EdgeCornerConfig) -> Result<Complex64> {
    let (_, eta2) = impimp_parts(config)?;
    let (s, c) = config.alpha.radians().sin_cos();
    Ok(-config.k * eta2 * eta2 * det_common(n)? * s * s * c * c)
}

fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Extract a 3×3 block in the variables `(x + y, x - y, z)` where `x, y`
/// are the `±1` columns of a family and `z` a single column.
fn symmetric_block(
    sys: &ConstraintSystem,
    rows: [Relation; 3],
    pair: (Unknown, Unknown),
    single: Unknown,
    single_first: bool,
) -> Option<Complex64> {
    let cp = sys.col_of(pair.0)?;
    let cm = sys.col_of(pair.1)?;
    let cs = sys.col_of(single)?;
    let mut m = [[Complex64::default(); 3]; 3];
    for (i, rel) in rows.iter().enumerate() {
        let r = sys.row_of(*rel)?;
        let (x, y, z) = (
            sys.matrix[(r, cp)],
            sys.matrix[(r, cm)],
            sys.matrix[(r, cs)],
        );
        let (u, v) = ((x + y) * 0.5, (x - y) * 0.5);
        m[i] = if single_first { [z, u, v] } else { [u, v, z] };
    }
    Some(det3(m))
}

/// Numeric `det 𝒜_n`: rows (face-1 `e₂ P^0`, matching a, matching b) in the
/// variables `(a^1 + a^{-1}, a^1 - a^{-1}, b^0)`.
pub fn numeric_det_a(system: &ConstraintSystem) -> Option<Complex64> {
    symmetric_block(
        system,
        [
            Relation::ChainE2 { face: 1, j: 0 },
            Relation::MatchA,
            Relation::MatchB,
        ],
        (Unknown::a(1), Unknown::a(-1)),
        Unknown::b(0),
        false,
    )
}

/// Numeric `det ℬ_n`: rows (face-2 edge rows 1, 2, matching c) in the
/// variables `(a^0, b^1 + b^{-1}, b^1 - b^{-1})`.
pub fn numeric_det_b(system: &ConstraintSystem) -> Option<Complex64> {
    symmetric_block(
        system,
        [
            Relation::EdgeFace2 { row: 1 },
            Relation::EdgeFace2 { row: 2 },
            Relation::MatchC,
        ],
        (Unknown::b(1), Unknown::b(-1)),
        Unknown::a(0),
        true,
    )
}

/// Kind of 2×2 cascade block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// `[[1, 1], [e^{imαπ}, e^{-imαπ}]]`, determinant `-2i sin(mαπ)`.
    Sin,
    /// `[[1, -1], [e^{imαπ}, e^{-imαπ}]]`, determinant `2 cos(mαπ)`.
    Cos,
}

/// Closed-form cascade determinant `-2i sin(mαπ)` or `2 cos(mαπ)`.
pub fn block_det(m: u32, alpha: f64, kind: BlockKind) -> Complex64 {
    let x = m as f64 * alpha * std::f64::consts::PI;
    match kind {
        BlockKind::Sin => -2.0 * I * x.sin(),
        BlockKind::Cos => Complex64::new(2.0 * x.cos(), 0.0),
    }
}

/// Numeric cascade determinant at level `m`: the `(a^m, a^{-m})` columns of
/// the face-1 / face-2 `e₁ P^m` rows (impedance) or of the PEC coupling /
/// PMC tangential rows, each row normalised by its `a^m` entry.
pub fn numeric_block_det(system: &ConstraintSystem, m: u32) -> Option<Complex64> {
    let (r1, r2) = match system.case {
        CaseKind::PecPmc => (Relation::PecCoupling { m }, Relation::PmcTangential { m }),
        _ => (
            Relation::ChainE1 { face: 1, j: m },
            Relation::ChainE1 { face: 2, j: m },
        ),
    };
    let (r1, r2) = (system.row_of(r1)?, system.row_of(r2)?);
    let (cp, cm) = (
        system.col_of(Unknown::a(m as i32))?,
        system.col_of(Unknown::a(-(m as i32)))?,
    );
    let mat = &system.matrix;
    let n1 = mat[(r1, cp)];
    let row1 = [mat[(r1, cp)] / n1, mat[(r1, cm)] / n1];
    // The second row is normalised so that its a^m entry is e^{imαπ}.
    let e = Complex64::from_polar(1.0, m as f64 * system.assembly_alpha * std::f64::consts::PI);
    let n2 = mat[(r2, cp)] / e;
    let row2 = [mat[(r2, cp)] / n2, mat[(r2, cm)] / n2];
    Some(row1[0] * row2[1] - row1[1] * row2[0])
}

/// Integer bound or one of the two symbolic values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Finite(u64),
    /// No failure up to the scanned `N_max`.
    GteNmax,
    /// Irrational angle: the theorem gives no finite bound.
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<u64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::GteNmax => write!(f, "gte_nmax"),
            Bound::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_u64(*v),
            Bound::GteNmax => s.serialize_str("gte_nmax"),
            Bound::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(Bound::Finite(v)),
            Raw::S(s) if s == "gte_nmax" => Ok(Bound::GteNmax),
            Raw::S(s) if s == "infinite" => Ok(Bound::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("unknown bound `{s}`"))),
        }
    }
}

/// Order guaranteed by the case's theorem: the largest `N` such that `α`
/// avoids the case's grid for every `p <= N`, or `Infinite` for angles
/// without rational structure. Rational angles are scanned until the first
/// hit (at most their own denominator), so the result never depends on
/// `n_max` beyond that.
pub fn theorem_bound(alpha: &Angle, case: CaseKind, n_max: u64) -> Bound {
    match alpha.rational {
        None => Bound::Infinite,
        Some((_, p)) => match grid_exclusion_order(alpha, case.grid(), n_max.max(p)) {
            GridOrder::Exact(v) => Bound::Finite(v),
            GridOrder::AtLeast(v) => Bound::Finite(v),
        },
    }
}

/// Closed and numeric value of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockDet {
    pub m: u32,
    #[serde(with = "complex_serde::pair")]
    pub closed: Complex64,
    #[serde(with = "complex_serde::opt_pair")]
    pub numeric: Option<Complex64>,
}

/// Per-order results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub n: u32,
    pub nullspace_dim: usize,
    #[serde(rename = "det_A", with = "complex_serde::opt_pair")]
    pub det_a: Option<Complex64>,
    #[serde(rename = "det_A_numeric", with = "complex_serde::opt_pair")]
    pub det_a_numeric: Option<Complex64>,
    #[serde(rename = "det_B", with = "complex_serde::opt_pair")]
    pub det_b: Option<Complex64>,
    #[serde(rename = "det_B_numeric", with = "complex_serde::opt_pair")]
    pub det_b_numeric: Option<Complex64>,
    pub block_dets: Vec<BlockDet>,
}

/// Result of the induction over orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishReport {
    pub alpha: Angle,
    pub case: CaseKind,
    /// Angle (units of π) of the assembled systems; the doubled angle for mixed corners.
    pub assembly_alpha: f64,
    pub n_max: u32,
    pub tol: f64,
    pub per_order: Vec<OrderReport>,
    pub order_lower_bound: Bound,
    pub theorem_bound: Bound,
    /// Assembler bound strictly stronger than the theorem bound.
    pub strict_excess: bool,
    /// Assembler bound weaker than the theorem bound (must never happen).
    pub bound_violation: bool,
}

/// Compare the two bounds: `(strict_excess, violation)`.
fn compare_bounds(lower: Bound, theorem: Bound, n_max: u32) -> (bool, bool) {
    match (lower, theorem) {
        (Bound::Finite(l), Bound::Finite(t)) => (l > t, l < t),
        (Bound::GteNmax, Bound::Finite(t)) => (n_max as u64 > t, false),
        (Bound::Finite(_), Bound::Infinite) => (false, true),
        _ => (false, false),
    }
}

/// Run the induction for `n = 1..=n_max`: each order is assembled on its own
/// (lower orders assumed zero), its nullspace dimension computed, and the
/// lower bound set to the last order before the first nontrivial nullspace.
pub fn vanishing_order(config: &EdgeCornerConfig, n_max: u32, tol: f64) -> Result<VanishReport> {
    if n_max < 1 {
        return Err(Error::Domain("N_max must be >= 1".into()));
    }
    let case = CaseKind::of(config)?;
    let det_config = match case {
        CaseKind::ImpImp => Some(config.clone()),
        CaseKind::PecPmc => None,
        _ => Some(reflected_config(config)?),
    };
    let per_order: Vec<OrderReport> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let sys = assemble_order_system(n, config)?;
            let nullspace_dim = nullspace_dim(&sys, tol)?;
            let (det_a, det_b) = match &det_config {
                Some(c) => (Some(closed_det_a(n, c)?), Some(closed_det_b(n, c)?)),
                None => (None, None),
            };
            let kind = if case == CaseKind::PecPmc {
                BlockKind::Cos
            } else {
                BlockKind::Sin
            };
            let block_dets = (2..=n)
                .map(|m| BlockDet {
                    m,
                    closed: block_det(m, sys.assembly_alpha, kind),
                    numeric: numeric_block_det(&sys, m),
                })
                .collect();
            Ok(OrderReport {
                n,
                nullspace_dim,
                det_a,
                det_a_numeric: det_config.as_ref().and_then(|_| numeric_det_a(&sys)),
                det_b,
                det_b_numeric: det_config.as_ref().and_then(|_| numeric_det_b(&sys)),
                block_dets,
            })
        })
        .collect::<Result<_>>()?;
    let order_lower_bound = per_order
        .iter()
        .find(|o| o.nullspace_dim > 0)
        .map_or(Bound::GteNmax, |o| Bound::Finite(o.n as u64 - 1));
    let theorem = theorem_bound(&config.alpha, case, n_max as u64);
    let (strict_excess, bound_violation) = compare_bounds(order_lower_bound, theorem, n_max);
    Ok(VanishReport {
        alpha: config.alpha,
        case,
        assembly_alpha: det_config
            .as_ref()
            .map_or(config.alpha.value, |c| c.alpha.value),
        n_max,
        tol,
        per_order,
        order_lower_bound,
        theorem_bound: theorem,
        strict_excess,
        bound_violation,
    })
}
