//! Self-check suites run by `edgewave verify`: each check recomputes an
//! identity or a cross-method agreement and reports pass/fail with a short
//! detail string. All randomness derives from the supplied seed, so the
//! report is byte-for-byte reproducible.

use crate::angles::{grid_exclusion_order, Angle, Grid, GridOrder};
use crate::corner::{
    e1e2, face_normal, impedance_residual, tangential_component, trace_tangential_curl,
    trace_tangential_e, EdgeCornerConfig, FaceId, ImpedanceSpec,
};
use crate::error::{Error, Result};
use crate::oracle::{
    collocation_nullspace_with, fd_curl, fd_divergence, random_pure_mode, vani_estimate,
    CollocationSpec, DEFAULT_RADII,
};
use crate::specfun::{
    assoc_legendre, factorial_ratio, legendre_dtheta, legendre_over_sin, orthogonality_integral,
    sph_bessel, sph_bessel_deriv,
};
use crate::swe::{eval_field, unit_frame, vector_modes, ModeCoefficients, SphericalPoint};
use crate::vanish::{
    assemble_order_system, block_det, closed_det_a, closed_det_b, nullspace_dim, numeric_block_det,
    numeric_det_a, numeric_det_b, theorem_bound, vanishing_order, BlockKind, Bound, CaseKind,
    DEFAULT_RANK_TOL,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Available suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Specfun,
    Swe,
    Corner,
    Vanish,
    Oracle,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "specfun" => Ok(Suite::Specfun),
            "swe" => Ok(Suite::Swe),
            "corner" => Ok(Suite::Corner),
            "vanish" => Ok(Suite::Vanish),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!(
                "unknown suite `{other}` (specfun|swe|corner|vanish|oracle|all)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Swe => "swe",
            Suite::Corner => "corner",
            Suite::Vanish => "vanish",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: Suite, name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        suite: suite.name().into(),
        name: name.into(),
        passed,
        detail,
    }
}

/// Run one suite (or all of them) with the given seed.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::Specfun => specfun_checks(seed),
        Suite::Swe => swe_checks(seed),
        Suite::Corner => corner_checks(seed),
        Suite::Vanish => vanish_checks(seed),
        Suite::Oracle => oracle_checks(seed),
        Suite::All => [
            Suite::Specfun,
            Suite::Swe,
            Suite::Corner,
            Suite::Vanish,
            Suite::Oracle,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, seed))
        .collect(),
    }
}

fn max_err<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0_f64, |acc, e| Ok(acc.max(e?)))
}

fn verdict(err: f64, tol: f64) -> (bool, String) {
    (
        err < tol,
        format!("max error {err:.3e} (tolerance {tol:.0e})"),
    )
}

fn specfun_checks(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Specfun;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thetas: Vec<f64> = (0..50).map(|_| rng.gen_range(0.01..PI - 0.01)).collect();
    // dP/dθ = (l cosθ P_l^m - (l+m) P_{l-1}^m) / sinθ, from the standard
    // x-derivative identity, independent of the recursion under test.
    let dtheta = max_err(thetas.iter().flat_map(|&t| {
        (1..=10u32).flat_map(move |l| {
            (0..=l).map(move |m| {
                let (x, sn) = (t.cos(), t.sin());
                let prev = if m < l {
                    assoc_legendre(l - 1, m as i32, x)?
                } else {
                    0.0
                };
                let direct =
                    ((l as f64) * x * assoc_legendre(l, m as i32, x)? - (l + m) as f64 * prev) / sn;
                let scale = 1.0_f64
                    .max(direct.abs())
                    .max(assoc_legendre(l, m as i32, x)?.abs());
                Ok((legendre_dtheta(l, m, t)? - direct).abs() / scale)
            })
        })
    }));
    let over_sin = max_err(thetas.iter().flat_map(|&t| {
        (1..=10u32).flat_map(move |l| {
            (1..=l).map(move |m| {
                let direct = m as f64 * assoc_legendre(l, m as i32, t.cos())? / t.sin();
                Ok((legendre_over_sin(l, m, t)? - direct).abs() / 1.0_f64.max(direct.abs()))
            })
        })
    }));
    let negative = max_err((0..=10u32).flat_map(|l| {
        let x = 0.3;
        (1..=l).map(move |m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let expect = sign * factorial_ratio(l - m, l + m) * assoc_legendre(l, m as i32, x)?;
            Ok((assoc_legendre(l, -(m as i32), x)? - expect).abs() / expect.abs().max(1e-300))
        })
    }));
    let at_one = max_err((0..=10u32).flat_map(|l| {
        (0..=l).map(move |m| {
            let expect = if m == 0 { 1.0 } else { 0.0 };
            Ok((assoc_legendre(l, m as i32, 1.0)? - expect).abs())
        })
    }));
    let bessel = max_err((1..=12u32).flat_map(|l| {
        [0.05, 0.5, 1.0, 3.3, 7.0, 10.0]
            .into_iter()
            .map(move |t: f64| {
                let (jm, j, jp) = (sph_bessel(l - 1, t), sph_bessel(l, t), sph_bessel(l + 1, t));
                let lf = l as f64;
                let scale = (jm.abs() + jp.abs()).max(1e-300);
                let r1 = (j / t - (jm + jp) / (2.0 * lf + 1.0)).abs() / (scale / (2.0 * lf + 1.0));
                let d = sph_bessel_deriv(l, t);
                let r2 = (d - (lf * jm - (lf + 1.0) * jp) / (2.0 * lf + 1.0)).abs() / scale;
                Ok(r1.max(r2))
            })
    }));
    let ortho = max_err((1..=6u32).flat_map(|n| {
        (1..=n).flat_map(move |m| {
            (1..=n).map(move |l| {
                let v = orthogonality_integral(n, m, l)?;
                let expect = if l == m {
                    factorial_ratio(n + m, n - m) / m as f64
                } else {
                    0.0
                };
                Ok((v - expect).abs() / expect.abs().max(1.0))
            })
        })
    }));
    vec![
        check(
            s,
            "legendre dθ recursion vs derivative identity",
            dtheta.map(|e| verdict(e, 1e-8)),
        ),
        check(
            s,
            "legendre m/sinθ recursion vs direct quotient",
            over_sin.map(|e| verdict(e, 1e-8)),
        ),
        check(
            s,
            "negative-order relation",
            negative.map(|e| verdict(e, 1e-12)),
        ),
        check(s, "P_l^m(1) values", at_one.map(|e| verdict(e, 1e-14))),
        check(s, "bessel recurrences", bessel.map(|e| verdict(e, 1e-12))),
        check(
            s,
            "orthogonality integrals n <= 6",
            ortho.map(|e| verdict(e, 1e-5)),
        ),
    ]
}

/// Interior point away from the origin, where the `O(h²)` truncation of a
/// step-`FD_STEP` central difference stays below the check tolerances for
/// degrees up to 4.
fn random_point(rng: &mut ChaCha8Rng) -> SphericalPoint {
    SphericalPoint::new(
        rng.gen_range(0.5..0.95),
        rng.gen_range(0.2..PI - 0.2),
        rng.gen_range(0.0..2.0 * PI),
    )
}

fn random_coeffs(rng: &mut ChaCha8Rng, k: f64, lmax: u32) -> Result<ModeCoefficients> {
    let mut c = ModeCoefficients::zeros(k, lmax)?;
    for l in 1..=lmax {
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
    }
    Ok(c)
}

fn single_mode(k: f64, l: u32, m: i32, a: bool) -> Result<ModeCoefficients> {
    let mut c = ModeCoefficients::zeros(k, l)?;
    if a {
        c.set_a(l, m, Complex64::new(1.0, 0.0))?;
    } else {
        c.set_b(l, m, Complex64::new(1.0, 0.0))?;
    }
    Ok(c)
}

/// Step of the central differences used by the field-identity checks.
const FD_STEP: f64 = 1e-4;

fn swe_checks(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Swe;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = 1.3;
    let points: Vec<SphericalPoint> = (0..10).map(|_| random_point(&mut rng)).collect();
    let curl = max_err(points.iter().flat_map(|p| {
        (1..=4u32).flat_map(move |l| {
            (-(l as i32)..=l as i32).map(move |m| {
                let (mm, nn) = vector_modes(l, m, p, k)?;
                let ma = single_mode(k, l, m, true)?;
                let nb = single_mode(k, l, m, false)?;
                let x = p.to_cartesian();
                let e1 = (fd_curl(&ma, x, FD_STEP)? + nn.scale(Complex64::new(0.0, k))).norm()
                    / (k * nn.norm()).max(1e-12);
                let e2 = (fd_curl(&nb, x, FD_STEP)? - mm.scale(Complex64::new(0.0, k))).norm()
                    / (k * mm.norm()).max(1e-12);
                Ok(e1.max(e2))
            })
        })
    }));
    let div =
        max_err(points.iter().flat_map(|p| {
            (1..=4u32).flat_map(move |l| {
                (-(l as i32)..=l as i32).flat_map(move |m| {
                    [true, false].into_iter().map(move |a| {
                        let c = single_mode(k, l, m, a)?;
                        let x = p.to_cartesian();
                        Ok(fd_divergence(&c, x, FD_STEP)?.norm()
                            / eval_field(&c, p)?.norm().max(1e-12))
                    })
                })
            })
        }));
    let lin = (|| -> Result<f64> {
        let c1 = random_coeffs(&mut rng, k, 5)?;
        let c2 = random_coeffs(&mut rng, k, 5)?;
        let sum = c1.add(&c2)?;
        max_err(points.iter().map(|p| {
            let lhs = eval_field(&sum, p)?;
            let rhs = eval_field(&c1, p)? + eval_field(&c2, p)?;
            Ok((lhs - rhs).norm() / rhs.norm().max(1e-300))
        }))
    })();
    let trunc = (|| -> Result<f64> {
        let c = random_coeffs(&mut rng, k, 4)?;
        let wide = c.with_lmax(9)?;
        max_err(
            points
                .iter()
                .map(|p| Ok((eval_field(&c, p)? - eval_field(&wide, p)?).norm())),
        )
    })();
    let frame = max_err((0..20).map(|_| {
        let (r, t, p) = unit_frame(rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let v = [r, t, p];
        let mut e: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|c| v[i][c] * v[j][c]).sum();
                e = e.max((d - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        Ok(e)
    }));
    vec![
        check(
            s,
            "curl M = -ik N and curl N = ik M (finite differences)",
            curl.map(|e| verdict(e, 1e-5)),
        ),
        check(s, "divergence-free modes", div.map(|e| verdict(e, 1e-5))),
        check(
            s,
            "linearity in coefficients",
            lin.map(|e| verdict(e, 1e-13)),
        ),
        check(
            s,
            "truncation consistency",
            trunc.map(|e| (e == 0.0, format!("max difference {e:e}"))),
        ),
        check(
            s,
            "unit frame orthonormal",
            frame.map(|e| verdict(e, 1e-14)),
        ),
    ]
}

fn corner_checks(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Corner;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = 1.1;
    let eta = ImpedanceSpec::constant(Complex64::new(0.7, 0.2)).expect("nonzero");
    let config =
        EdgeCornerConfig::new(Angle::from_value(0.37).expect("valid"), eta.clone(), eta, k)
            .expect("valid");
    let coeffs = random_coeffs(&mut rng, k, 4);
    let samples: Vec<(FaceId, f64, f64)> = (0..20)
        .map(|i| {
            (
                FaceId::BOTH[i % 2],
                rng.gen_range(0.05..0.8),
                rng.gen_range(0.1..PI - 0.1),
            )
        })
        .collect();
    let cross = coeffs.as_ref().map_err(Clone::clone).and_then(|c| {
        max_err(samples.iter().map(|&(f, r, t)| {
            let p = SphericalPoint::new(r, t, config.face_azimuth(f));
            let nu = face_normal(&config, f);
            let want = eval_field(c, &p)?.cross_from_left(nu);
            Ok((trace_tangential_e(c, &config, f, r, t)? - want).norm() / want.norm().max(1e-300))
        }))
    });
    let curl = coeffs.as_ref().map_err(Clone::clone).and_then(|c| {
        max_err(samples.iter().map(|&(f, r, t)| {
            let p = SphericalPoint::new(r, t, config.face_azimuth(f));
            let nu = face_normal(&config, f);
            let want = fd_curl(c, p.to_cartesian(), 1e-4)?.cross_from_left(nu);
            Ok((trace_tangential_curl(c, &config, f, r, t)? - want).norm()
                / want.norm().max(1e-300))
        }))
    });
    let tangential = coeffs.as_ref().map_err(Clone::clone).and_then(|c| {
        max_err(samples.iter().map(|&(f, r, t)| {
            let p = SphericalPoint::new(r, t, config.face_azimuth(f));
            let nu = face_normal(&config, f);
            let e = eval_field(c, &p)?;
            let want = e - crate::swe::ComplexVec3::from_real(nu, e.dot_real(nu));
            Ok((tangential_component(c, &config, f, r, t)? - want).norm() / e.norm().max(1e-300))
        }))
    });
    let compose = coeffs.as_ref().map_err(Clone::clone).and_then(|c| {
        max_err(samples.iter().map(|&(f, r, t)| {
            let spec = config.spec(f);
            let eta0 = spec.eta0().expect("series");
            let want = trace_tangential_curl(c, &config, f, r, t)?
                + tangential_component(c, &config, f, r, t)?.scale(eta0);
            Ok(
                (impedance_residual(c, &config, f, spec, r, t)? - want).norm()
                    / want.norm().max(1e-300),
            )
        }))
    });
    let frame = max_err((0..100).map(|_| {
        let (t, p) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let (u, v) = e1e2(t, p);
        let nu = [-p.sin(), p.cos(), 0.0];
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        Ok([
            dot(u, u) - 1.0,
            dot(v, v) - 1.0,
            dot(u, v),
            dot(u, nu),
            dot(v, nu),
        ]
        .iter()
        .fold(0.0_f64, |a, x| a.max(x.abs())))
    }));
    vec![
        check(
            s,
            "ν∧E series vs cross product",
            cross.map(|e| verdict(e, 1e-10)),
        ),
        check(
            s,
            "ν∧curl E series vs finite-difference curl",
            curl.map(|e| verdict(e, 1e-5)),
        ),
        check(
            s,
            "(ν∧E)∧ν = E - (ν·E)ν",
            tangential.map(|e| verdict(e, 1e-13)),
        ),
        check(
            s,
            "impedance residual composition",
            compose.map(|e| verdict(e, 1e-12)),
        ),
        check(
            s,
            "e1/e2 orthonormal and tangential",
            frame.map(|e| verdict(e, 1e-14)),
        ),
    ]
}

fn imp_config(alpha: Angle, eta1: Complex64, eta2: Complex64, k: f64) -> Result<EdgeCornerConfig> {
    EdgeCornerConfig::new(
        alpha,
        ImpedanceSpec::constant(eta1)?,
        ImpedanceSpec::constant(eta2)?,
        k,
    )
}

/// Configuration of a case with unit impedances.
pub fn unit_config(alpha: Angle, case: CaseKind) -> Result<EdgeCornerConfig> {
    let one = ImpedanceSpec::constant(Complex64::new(1.0, 0.0))?;
    let (bc1, bc2) = match case {
        CaseKind::ImpImp => (one.clone(), one),
        CaseKind::PecPmc => (ImpedanceSpec::Infinite, ImpedanceSpec::Zero),
        CaseKind::ImpPec => (ImpedanceSpec::Infinite, one),
        CaseKind::ImpPmc => (ImpedanceSpec::Zero, one),
    };
    EdgeCornerConfig::new(alpha, bc1, bc2, 1.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn vanish_checks(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Vanish;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dets = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let alpha = Angle::from_value(rng.gen_range(0.05..0.95))?;
            let eta1 = Complex64::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let eta2 = Complex64::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
            let c = imp_config(alpha, eta1, eta2, rng.gen_range(0.5..2.0))?;
            for n in 1..=10 {
                let sys = assemble_order_system(n, &c)?;
                worst = worst.max(rel(
                    numeric_det_a(&sys).expect("block"),
                    closed_det_a(n, &c)?,
                ));
                worst = worst.max(rel(
                    numeric_det_b(&sys).expect("block"),
                    closed_det_b(n, &c)?,
                ));
            }
        }
        Ok(worst)
    })();
    let cascade = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (case, kind) in [
            (CaseKind::ImpImp, BlockKind::Sin),
            (CaseKind::PecPmc, BlockKind::Cos),
        ] {
            let c = unit_config(Angle::from_value(0.3)?, case)?;
            for n in 2..=6 {
                let sys = assemble_order_system(n, &c)?;
                for m in 2..=n {
                    worst = worst.max(rel(
                        numeric_block_det(&sys, m).expect("block"),
                        block_det(m, 0.3, kind),
                    ));
                }
            }
        }
        Ok(worst)
    })();
    let monotone = (|| -> Result<(bool, String)> {
        let mut bad = Vec::new();
        for i in 0..20 {
            let p = rng.gen_range(1..=12u64);
            let q = rng.gen_range(1..2 * p);
            let Ok(alpha) = Angle::from_fraction(q, p) else {
                continue;
            };
            let case = if i % 2 == 0 {
                CaseKind::ImpImp
            } else {
                CaseKind::PecPmc
            };
            let r = vanishing_order(&unit_config(alpha, case)?, 6, DEFAULT_RANK_TOL)?;
            if r.bound_violation {
                bad.push(format!("{case} α={alpha}"));
            }
        }
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                "no violations".into()
            } else {
                bad.join(", ")
            },
        ))
    })();
    let reflection = (|| -> Result<(bool, String)> {
        let mixed = unit_config(Angle::from_fraction(1, 5)?, CaseKind::ImpPec)?;
        let doubled = unit_config(Angle::from_fraction(2, 5)?, CaseKind::ImpImp)?;
        let mut ok = true;
        for n in 1..=4 {
            let a = assemble_order_system(n, &mixed)?;
            let b = assemble_order_system(n, &doubled)?;
            ok &= (&a.matrix - &b.matrix).norm() < 1e-12 * b.matrix.norm();
            ok &= nullspace_dim(&a, DEFAULT_RANK_TOL)? == nullspace_dim(&b, DEFAULT_RANK_TOL)?;
        }
        Ok((
            ok,
            format!(
                "imp-pec 1/5 vs imp-imp 2/5 for n <= 4: {}",
                if ok { "equivalent" } else { "differ" }
            ),
        ))
    })();
    let grid: Result<(bool, String)> = {
        let mut ok = true;
        for p in 1..=8u64 {
            for q in 1..2 * p {
                let Ok(a) = Angle::from_fraction(q, p) else {
                    continue;
                };
                if a.denominator() != Some(p) {
                    continue;
                }
                ok &= theorem_bound(&a, CaseKind::ImpImp, 8) == Bound::Finite(p - 1);
                let mixed = if p % 2 == 0 { p / 2 - 1 } else { p - 1 };
                ok &= theorem_bound(&a, CaseKind::ImpPec, 8) == Bound::Finite(mixed);
                ok &= grid_exclusion_order(&a, Grid::Qp, 12) == GridOrder::Exact(p - 1);
            }
        }
        Ok((ok, "reduced q/p, p <= 8".into()))
    };
    let scaling = (|| -> Result<(bool, String)> {
        let c = unit_config(Angle::from_fraction(1, 3)?, CaseKind::ImpImp)?;
        let mut ok = true;
        for n in 1..=4 {
            let sys = assemble_order_system(n, &c)?;
            let d = nullspace_dim(&sys, DEFAULT_RANK_TOL)?;
            ok &= nullspace_dim(&sys.scaled(Complex64::new(-3.0, 7.5)), DEFAULT_RANK_TOL)? == d;
        }
        Ok((ok, "rows scaled by -3+7.5i".into()))
    })();
    vec![
        check(
            s,
            "closed vs numeric det A_n, det B_n (n <= 10)",
            dets.map(|e| verdict(e, 1e-10)),
        ),
        check(
            s,
            "cascade block determinants",
            cascade.map(|e| verdict(e, 1e-12)),
        ),
        check(s, "order_lower_bound >= theorem_bound", monotone),
        check(s, "reflection reduction", reflection),
        check(s, "theorem grid reproduction", grid),
        check(s, "rank invariant under row scaling", scaling),
    ]
}

/// Configurations of the cross-oracle comparison: rational and
/// irrational-proxy angles over all four case kinds.
pub fn cross_oracle_configs() -> Result<Vec<EdgeCornerConfig>> {
    let irr = Angle::from_value(std::f64::consts::FRAC_1_SQRT_2)?;
    let gold = Angle::from_value(0.618_033_988_749_894_9)?;
    Ok(vec![
        unit_config(irr, CaseKind::ImpImp)?,
        unit_config(Angle::from_fraction(1, 3)?, CaseKind::ImpImp)?,
        unit_config(Angle::from_fraction(1, 2)?, CaseKind::ImpImp)?,
        unit_config(Angle::from_fraction(1, 4)?, CaseKind::PecPmc)?,
        unit_config(gold, CaseKind::PecPmc)?,
        unit_config(Angle::from_fraction(1, 6)?, CaseKind::PecPmc)?,
        unit_config(Angle::from_fraction(1, 5)?, CaseKind::ImpPec)?,
        unit_config(gold, CaseKind::ImpPec)?,
        unit_config(Angle::from_fraction(1, 3)?, CaseKind::ImpPmc)?,
        unit_config(irr, CaseKind::ImpPmc)?,
    ])
}

fn oracle_checks(seed: u64) -> Vec<CheckResult> {
    let s = Suite::Oracle;
    let mut out = Vec::new();
    let configs = cross_oracle_configs();
    for group in [true, false] {
        let name = if group {
            "cross-oracle agreement (pec-pmc)"
        } else {
            "cross-oracle agreement (impedance faces)"
        };
        let outcome = configs.as_ref().map_err(Clone::clone).and_then(|cs| {
            let mut rows = Vec::new();
            let mut ok = true;
            for c in cs {
                let case = CaseKind::of(c)?;
                if (case == CaseKind::PecPmc) != group {
                    continue;
                }
                for n in 1..=4 {
                    let spec = CollocationSpec {
                        seed,
                        ..CollocationSpec::for_order(n)
                    };
                    let col = collocation_nullspace_with(n, c, &spec)?;
                    let st = nullspace_dim(&assemble_order_system(n, c)?, DEFAULT_RANK_TOL)?;
                    if col != st {
                        ok = false;
                        rows.push(format!(
                            "{case} α={} n={n}: collocation {col} vs structured {st}",
                            c.alpha
                        ));
                    }
                }
            }
            let detail = if ok {
                "all orders n <= 4 agree".to_string()
            } else {
                rows.join("; ")
            };
            Ok((ok, detail))
        });
        out.push(check(s, name, outcome));
    }
    let vani = (|| -> Result<(bool, String)> {
        let mut ok = true;
        let mut slopes = Vec::new();
        for l in 1..=5u32 {
            let c = random_pure_mode(l, 1.0, l, seed + l as u64)?;
            let est = vani_estimate(&c, &DEFAULT_RADII)?;
            ok &= (est.slope - (l as f64 + 2.0)).abs() <= 0.1 && est.order == l as i64 - 1;
            slopes.push(format!("l={l}: {:.4}", est.slope));
        }
        Ok((ok, slopes.join(", ")))
    })();
    out.push(check(s, "vani estimate slope = l + 2 for pure modes", vani));
    out
}
