use approx::assert_relative_eq;
use edgewave::specfun::*;
use edgewave::Error;
use std::f64::consts::PI;

#[test]
fn legendre_values_at_the_edge() {
    assert_eq!(assoc_legendre(3, 0, 1.0).unwrap(), 1.0);
    assert_eq!(assoc_legendre(2, 1, 1.0).unwrap(), 0.0);
}

#[test]
fn legendre_closed_form_without_phase() {
    let x: f64 = 0.5;
    let want = 3.0 * x * (1.0 - x * x).sqrt();
    assert_relative_eq!(assoc_legendre(2, 1, x).unwrap(), want, max_relative = 1e-14);
    assert_relative_eq!(want, 1.299038105676658, max_relative = 1e-14);
}

#[test]
fn legendre_rejects_out_of_range_arguments() {
    assert!(matches!(assoc_legendre(2, 3, 0.2), Err(Error::Domain(_))));
    assert!(matches!(assoc_legendre(2, -3, 0.2), Err(Error::Domain(_))));
    assert!(matches!(assoc_legendre(2, 1, 1.5), Err(Error::Domain(_))));
}

#[test]
fn legendre_dtheta_examples() {
    assert!(legendre_dtheta(1, 1, PI / 2.0).unwrap().abs() < 1e-15);
    assert_relative_eq!(
        legendre_dtheta(1, 0, PI / 2.0).unwrap(),
        -1.0,
        max_relative = 1e-15
    );
}

#[test]
fn legendre_dtheta_matches_finite_differences() {
    for i in 0..20 {
        let theta = 0.1 + 0.14 * i as f64;
        let h = 1e-6;
        let fd = (assoc_legendre(2, 2, (theta + h).cos()).unwrap()
            - assoc_legendre(2, 2, (theta - h).cos()).unwrap())
            / (2.0 * h);
        assert!(
            (legendre_dtheta(2, 2, theta).unwrap() - fd).abs() < 1e-8,
            "θ = {theta}"
        );
    }
}

#[test]
fn legendre_over_sin_examples() {
    let t = PI / 4.0;
    let direct = 2.0 * assoc_legendre(3, 2, t.cos()).unwrap() / t.sin();
    assert!((legendre_over_sin(3, 2, t).unwrap() - direct).abs() < 1e-10);
    assert_relative_eq!(
        legendre_over_sin(1, 1, PI / 2.0).unwrap(),
        1.0,
        max_relative = 1e-15
    );
    // Without the Condon–Shortley phase the recursion carries a plus sign:
    // ½[P_1^2(1) + 6 P_1^0(1)] = 3, the limit of 3 cosθ sinθ / sinθ.
    assert_relative_eq!(
        legendre_over_sin(2, 1, 0.0).unwrap(),
        3.0,
        max_relative = 1e-15
    );
    assert_relative_eq!(
        legendre_over_sin(2, 1, 1e-9).unwrap(),
        3.0,
        max_relative = 1e-12
    );
    assert!(legendre_over_sin(2, 0, 0.3).is_err());
}

#[test]
fn bessel_examples() {
    assert_eq!(sph_bessel(0, 0.0), 1.0);
    assert_relative_eq!(sph_bessel(0, 1e-8), 1.0, max_relative = 1e-15);
    let t: f64 = 0.5;
    let want = t.sin() / (t * t) - t.cos() / t;
    assert_relative_eq!(sph_bessel(1, t), want, max_relative = 1e-14);
    assert_relative_eq!(want, 0.162537, max_relative = 1e-5);
}

#[test]
fn bessel_closed_forms_across_regimes() {
    for t in [1e-4, 2e-3, 0.1, 1.0, 5.0, 20.0, 80.0] {
        let (s, c) = (f64::sin(t), f64::cos(t));
        let j2 = (3.0 / (t * t) - 1.0) * s / t - 3.0 * c / (t * t);
        let scale = sph_bessel(1, t).abs().max(j2.abs()).max(1e-300);
        if t > 1e-2 {
            assert!((sph_bessel(2, t) - j2).abs() / scale < 1e-9, "t = {t}");
        }
    }
    // Downward recurrence keeps tiny values accurate for l >> t.
    let leading = 0.1f64.powi(10) / double_factorial(21);
    assert_relative_eq!(
        sph_bessel(10, 0.1),
        leading * (1.0 - 0.01 / (2.0 * 23.0)),
        max_relative = 1e-6
    );
}

#[test]
fn radial_limits() {
    let r = radial_pq(1, 0.0).unwrap();
    assert_relative_eq!(r.p, 1.0 / 3.0, max_relative = 1e-15);
    assert_relative_eq!(r.q, 2.0 / 3.0, max_relative = 1e-15);
    let t = 1e-6;
    let r = radial_pq(2, t).unwrap();
    assert_relative_eq!(r.p / t, 1.0 / 15.0, max_relative = 1e-9);
    assert_relative_eq!(r.q / t, 3.0 / 15.0, max_relative = 1e-9);
    for l in 1..=8 {
        let (p, q) = radial_leading(l).unwrap();
        let t: f64 = 1e-4;
        let r = radial_pq(l, t).unwrap();
        assert_relative_eq!(r.p / t.powi(l as i32 - 1), p, max_relative = 1e-6);
        assert_relative_eq!(r.q / t.powi(l as i32 - 1), q, max_relative = 1e-6);
    }
    assert!(radial_pq(0, 1.0).is_err());
}

#[test]
fn p_and_q_are_the_field_combinations() {
    for l in 1..=6 {
        for t in [0.3, 1.7, 6.0] {
            let r = radial_pq(l, t).unwrap();
            assert_relative_eq!(r.p, r.j / t, max_relative = 1e-12);
            assert_relative_eq!(
                r.q,
                r.j / t + r.jprime,
                max_relative = 1e-12,
                epsilon = 1e-15
            );
        }
    }
}

#[test]
fn orthogonality_examples() {
    assert!(orthogonality_integral(2, 1, 2).unwrap().abs() < 1e-8);
    assert_relative_eq!(
        orthogonality_integral(2, 1, 1).unwrap(),
        6.0,
        max_relative = 1e-6
    );
    assert_relative_eq!(
        orthogonality_integral(4, 2, 2).unwrap(),
        180.0,
        max_relative = 1e-5
    );
}

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    let (x, w) = gauss_legendre(10);
    for deg in 0..20 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
        let exact = if deg % 2 == 0 {
            2.0 / (deg as f64 + 1.0)
        } else {
            0.0
        };
        assert!((q - exact).abs() < 1e-14, "degree {deg}");
    }
}

#[test]
fn factorials() {
    assert_eq!(factorial(5), 120.0);
    assert_relative_eq!(factorial(25), 1.5511210043330986e25, max_relative = 1e-12);
    assert_relative_eq!(factorial_ratio(6, 2), 360.0, max_relative = 1e-14);
    assert_eq!(double_factorial(7), 105.0);
    assert_eq!(double_factorial(-1), 1.0);
}
