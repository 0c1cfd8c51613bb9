//! Vanishing orders of time-harmonic Maxwell fields at edge-corners.
//!
//! An edge-corner is the wedge between two half-planes meeting along a line
//! with dihedral angle `απ`, each face carrying a PEC, PMC or impedance
//! condition. Writing the field near a point of the edge as a spherical wave
//! expansion `E = Σ a_l^m M_l^m + b_l^m N_l^m`, the boundary conditions turn
//! into order-by-order linear constraints on the coefficients. If every order
//! up to `N` admits only the trivial solution, the field vanishes to order
//! `N` at the point.
//!
//! Modules:
//!
//! * [`specfun`] – Legendre and spherical Bessel functions, radial factors.
//! * [`swe`] – vector spherical wavefunctions and the field expansion.
//! * [`corner`] – corner geometry, face traces, impedance residuals.
//! * [`vanish`] – constraint systems, determinants, the order induction.
//! * [`oracle`] – brute-force checks: ball integrals, collocation nullspaces.
//! * [`angles`] – angle rationality and exclusion grids.
//! * [`cli`] – the `edgewave` command-line front end.

// `!(x > 0.0)` is used deliberately so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angles;
pub mod cli;
mod complex_serde;
pub mod corner;
pub mod error;
pub mod oracle;
pub mod specfun;
pub mod swe;
pub mod vanish;
pub mod verify;

pub use error::{Error, Result};
