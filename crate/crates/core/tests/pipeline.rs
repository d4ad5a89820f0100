//! Moment-to-polynomial pipeline checked against handbook data for the
//! shifted Legendre system: weight 1 on the unit interval, moments
//! `g_n = 1 / (n + 1)`, recurrence `b_n = 1/2`,
//! `u_n = n^2 / (4 (2n - 1)(2n + 1))`, and norms
//! `h_n = 1 / ((2n + 1) binom(2n, n)^2)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use umbral_ops::{Error, MomentSequence, MonicPolySystem, Polynomial, Tolerance};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn legendre_moments() -> MomentSequence<BigRational> {
    MomentSequence::from_fn(|n| Ok(r(1, n as i64 + 1))).unwrap()
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[test]
fn recurrence_matches_the_closed_forms() {
    let tol = Tolerance::default();
    let sys = MonicPolySystem::from_moments(&legendre_moments(), 8, &tol).unwrap();
    for n in 0..8 {
        assert_eq!(*sys.b(n), r(1, 2), "b_{n}");
    }
    for n in 1..8 {
        let expect = r((n * n) as i64, 4 * (2 * n - 1) as i64 * (2 * n + 1) as i64);
        assert_eq!(*sys.u(n), expect, "u_{n}");
    }
    for n in 0..=8u64 {
        let c = binomial(2 * n, n);
        let expect = BigRational::new(BigInt::from(1), BigInt::from(2 * n + 1) * (&c * &c));
        assert_eq!(*sys.h(n as usize), expect, "h_{n}");
    }
}

#[test]
fn low_degree_polynomials_are_the_published_ones() {
    let tol = Tolerance::default();
    let sys = MonicPolySystem::from_moments(&legendre_moments(), 3, &tol).unwrap();
    assert_eq!(*sys.poly(1), Polynomial::from_coeffs(vec![r(-1, 2), r(1, 1)]));
    assert_eq!(
        *sys.poly(2),
        Polynomial::from_coeffs(vec![r(1, 6), r(-1, 1), r(1, 1)])
    );
    assert_eq!(
        *sys.poly(3),
        Polynomial::from_coeffs(vec![r(-1, 20), r(3, 5), r(-3, 2), r(1, 1)])
    );
}

#[test]
fn polynomials_are_orthogonal_under_the_moment_form() {
    let tol = Tolerance::default();
    let g = legendre_moments();
    let sys = MonicPolySystem::from_moments(&g, 8, &tol).unwrap();
    for n in 0..=8 {
        for m in 0..=8 {
            let inner = g.bilinear(sys.poly(n), sys.poly(m)).unwrap();
            if n == m {
                assert_eq!(inner, *sys.h(n));
            } else {
                assert_eq!(inner, r(0, 1), "cross term ({n}, {m})");
            }
        }
    }
}

#[test]
fn recurrence_route_rebuilds_the_same_system() {
    let tol = Tolerance::default();
    let from_g = MonicPolySystem::from_moments(&legendre_moments(), 8, &tol).unwrap();
    let from_bu =
        MonicPolySystem::from_recurrence(from_g.recurrence_b(), from_g.recurrence_u()).unwrap();
    assert_eq!(from_g.polys(), from_bu.polys());
}

#[test]
fn moment_scaling_changes_nothing_but_the_scale() {
    let tol = Tolerance::default();
    let base = legendre_moments();
    let scaled = MomentSequence::from_fn({
        let base = base.clone();
        move |n| Ok(base.get(n)? * r(7, 3))
    })
    .unwrap();
    assert_eq!(*scaled.scale(), r(7, 3));
    let a = MonicPolySystem::from_moments(&base, 6, &tol).unwrap();
    let b = MonicPolySystem::from_moments(&scaled, 6, &tol).unwrap();
    assert_eq!(a.polys(), b.polys());
    assert_eq!(a.norms(), b.norms());
}

#[test]
fn float_construction_tracks_the_exact_one() {
    // These moments give Hilbert matrices, whose condition number grows
    // about forty-fold per size; the per-degree bounds track that envelope
    // with room to spare.
    const BOUND: [f64; 8] = [1e-15, 1e-14, 1e-13, 1e-12, 1e-10, 1e-9, 1e-7, 1e-6];
    let tol = Tolerance::default();
    let g = MomentSequence::from_fn(|n| {
        Ok(Complex64::new(1.0 / (n as f64 + 1.0), 0.0))
    })
    .unwrap();
    let sys = MonicPolySystem::from_moments(&g, 8, &tol).unwrap();
    for (n, bound) in BOUND.iter().enumerate() {
        let err = (sys.b(n) - Complex64::new(0.5, 0.0)).norm();
        assert!(err < *bound, "b_{n} error {err:.2e}");
    }
    for (n, bound) in BOUND.iter().enumerate().skip(1) {
        let expect = (n * n) as f64 / (4 * (2 * n - 1) * (2 * n + 1)) as f64;
        let err = (sys.u(n) - Complex64::new(expect, 0.0)).norm() / expect;
        assert!(err < *bound, "u_{n} relative error {err:.2e}");
    }
}

#[test]
fn finite_moment_lists_report_how_much_was_needed() {
    let tol = Tolerance::default();
    let values: Vec<BigRational> = (0..9).map(|n| r(1, n + 1)).collect();
    let g = MomentSequence::from_values(values).unwrap();
    let err = MonicPolySystem::from_moments(&g, 5, &tol).unwrap_err();
    match err {
        Error::InsufficientData { needed, available, .. } => {
            assert_eq!(needed, 11);
            assert_eq!(available, 9);
        }
        other => panic!("expected an insufficiency report, got {other}"),
    }
}

#[test]
fn hankel_determinants_of_a_definite_functional_stay_positive() {
    let tol = Tolerance::default();
    let report = legendre_moments().hankel_determinants(8, &tol).unwrap();
    assert_eq!(report.first_zero(), None);
    for n in 1..=8 {
        assert!(*report.det(n) > r(0, 1), "delta_{n}");
    }
}
