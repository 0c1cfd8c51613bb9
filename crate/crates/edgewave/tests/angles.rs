use edgewave::angles::*;
use edgewave::Error;

fn frac(q: u64, p: u64) -> Angle {
    Angle::from_fraction(q, p).unwrap()
}

#[test]
fn parsing() {
    assert_eq!(parse_angle("2/6").unwrap().rational, Some((1, 3)));
    assert_eq!(parse_angle(" 5 / 3 ").unwrap().rational, Some((5, 3)));
    let half = parse_angle("0.5").unwrap();
    assert_eq!(half.rational, None);
    assert_eq!(half.value, 0.5);
    assert!(matches!(parse_angle("1/1"), Err(Error::Domain(_))));
    assert!(matches!(parse_angle("4/2"), Err(Error::Domain(_))));
    assert!(matches!(parse_angle("1/0"), Err(Error::Domain(_))));
    assert!(matches!(parse_angle("abc"), Err(Error::Parse(_))));
    assert!(matches!(parse_angle("x/3"), Err(Error::Parse(_))));
    assert!(parse_angle("NaN").is_err());
    assert!(parse_angle("2.0").is_err());
    assert!(parse_angle("0").is_err());
}

#[test]
fn display() {
    assert_eq!(frac(2, 6).to_string(), "1/3");
    assert_eq!(Angle::from_value(0.25).unwrap().to_string(), "0.25");
    assert!((frac(1, 2).radians() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn rationality_detection() {
    assert_eq!(
        detect_rational(Angle::from_value(0.333333333333).unwrap(), 10).rational,
        Some((1, 3))
    );
    assert_eq!(
        detect_rational(Angle::from_value(0.33333333).unwrap(), 10).rational,
        None
    );
    assert_eq!(
        detect_rational(Angle::from_value(1.0 / 3.0).unwrap(), 10).rational,
        Some((1, 3))
    );
    assert_eq!(
        detect_rational(Angle::from_value(0.6180339887).unwrap(), 50).rational,
        None
    );
    assert_eq!(
        detect_rational(Angle::from_value(0.75).unwrap(), 2).rational,
        None
    );
    assert_eq!(
        detect_rational(Angle::from_value(0.75).unwrap(), 4).rational,
        Some((3, 4))
    );
    assert_eq!(
        detect_rational(Angle::from_value(1.4).unwrap(), DEFAULT_MAX_DEN).rational,
        Some((7, 5))
    );
}

#[test]
fn detection_is_idempotent() {
    for v in [
        0.2,
        1.0 / 7.0,
        0.6180339887,
        1.25,
        std::f64::consts::FRAC_1_SQRT_2,
    ] {
        let once = detect_rational(Angle::from_value(v).unwrap(), DEFAULT_MAX_DEN);
        assert_eq!(detect_rational(once, DEFAULT_MAX_DEN), once);
    }
}

#[test]
fn grid_examples() {
    assert_eq!(
        grid_exclusion_order(&frac(1, 3), Grid::Qp, 10),
        GridOrder::Exact(2)
    );
    assert_eq!(
        grid_exclusion_order(&frac(5, 3), Grid::Qp, 10),
        GridOrder::Exact(2)
    );
    assert_eq!(
        grid_exclusion_order(&frac(1, 2), Grid::Q2p, 10),
        GridOrder::Exact(0)
    );
    assert_eq!(
        grid_exclusion_order(&frac(1, 4), Grid::Q2p, 10),
        GridOrder::Exact(1)
    );
    assert_eq!(
        grid_exclusion_order(&frac(1, 9), Grid::Qp, 5),
        GridOrder::AtLeast(5)
    );
    assert_eq!(
        grid_exclusion_order(&Angle::from_value(0.6180339887).unwrap(), Grid::Qp, 8),
        GridOrder::AtLeast(8)
    );
    assert_eq!(grid_exclusion_exact(&frac(2, 5), Grid::Qp), Some(4));
    assert_eq!(
        grid_exclusion_exact(&Angle::from_value(0.3).unwrap(), Grid::Qp),
        None
    );
}

#[test]
fn grid_closed_forms() {
    for p in 2..=12u64 {
        for q in 1..2 * p {
            let Ok(a) = Angle::from_fraction(q, p) else {
                continue;
            };
            let (q0, p0) = a.rational.unwrap();
            assert_eq!(
                grid_exclusion_exact(&a, Grid::Qp),
                Some(p0 - 1),
                "{q0}/{p0}"
            );
            let expected = if p0 % 2 == 0 { p0 / 2 - 1 } else { p0 - 1 };
            assert_eq!(
                grid_exclusion_exact(&a, Grid::Q2p),
                Some(expected),
                "{q0}/{p0}"
            );
        }
    }
}

#[test]
fn polyhedron_degrees() {
    let irr = Angle::from_value(0.6180339887).unwrap();
    assert_eq!(
        polyhedron_degree(&PolyhedronAngles(vec![irr, irr])).unwrap(),
        PolyhedronDegree::Irrational
    );
    assert_eq!(
        polyhedron_degree(&PolyhedronAngles(vec![frac(1, 2), irr, frac(1, 3)])).unwrap(),
        PolyhedronDegree::Rational(2)
    );
    assert_eq!(
        polyhedron_degree(&PolyhedronAngles(vec![frac(2, 5), frac(4, 3)])).unwrap(),
        PolyhedronDegree::Rational(3)
    );
    assert!(polyhedron_degree(&PolyhedronAngles(vec![])).is_err());
}

#[test]
fn angle_serde_round_trip() {
    let a = frac(3, 7);
    let back: Angle = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}
