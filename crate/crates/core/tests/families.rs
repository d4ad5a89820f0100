//! Behavior of the bundled family generators against independent closed
//! forms: eigenvalue tables, moment tables, derived polynomials, and the
//! Appell property of the reflection-weight pair.

use num_bigint::BigInt;
use num_rational::BigRational;

use umbral_ops::families::{
    classical_derivative, classical_instance, dunkl_instance, krall_instance,
    q_classical_instance, q_derivative, ClassicalParams, KrallParams, QClassicalParams,
};
use umbral_ops::{MonicPolySystem, Polynomial, Tolerance};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficient-shift derivative, independent of the library's operator.
fn ddx(p: &Polynomial<BigRational>) -> Polynomial<BigRational> {
    let c = p.coeffs();
    let shifted: Vec<BigRational> =
        (1..c.len()).map(|k| r(k as i64, 1) * &c[k]).collect();
    Polynomial::from_coeffs(shifted)
}

fn hahn() -> umbral_ops::families::FamilyInstance<BigRational> {
    classical_instance(&ClassicalParams {
        xi: [r(1, 1), r(-1, 1), r(0, 1)],
        eta: [r(2, 1), r(-1, 1)],
    })
}

#[test]
fn classical_derivative_differentiates() {
    let d = classical_derivative::<BigRational>();
    let p = Polynomial::from_coeffs(vec![r(5, 1), r(-3, 1), r(0, 1), r(2, 7)]);
    assert_eq!(d.apply(&p).unwrap(), ddx(&p));
    for n in 0..8 {
        assert_eq!(d.mu(n).unwrap(), r(n as i64, 1));
    }
}

#[test]
fn derived_polynomials_are_scaled_derivatives_for_the_ordinary_operator() {
    let tol = Tolerance::default();
    let inst = hahn();
    let sys = MonicPolySystem::from_moments(&inst.moments, 8, &tol).unwrap();
    let q = inst.derivative.derived_polys(sys.polys(), 6).unwrap();
    for (n, qn) in q.iter().enumerate() {
        let expect = ddx(sys.poly(n + 1)).div_scalar(&r(n as i64 + 1, 1)).unwrap();
        assert_eq!(*qn, expect, "Q_{n}");
        assert!(qn.is_monic());
    }
}

#[test]
fn q_eigenvalues_are_geometric_partial_sums() {
    let d = q_derivative(&r(1, 2));
    // mu_n = 1 + q + ... + q^{n-1} = (2^n - 1) / 2^{n-1} at q = 1/2.
    for n in 1..10i64 {
        let expect = r((1i64 << n) - 1, 1i64 << (n - 1));
        assert_eq!(d.mu(n as usize).unwrap(), expect, "mu_{n}");
    }
    assert_eq!(d.mu(0).unwrap(), r(0, 1));
}

#[test]
fn q_instance_moments_satisfy_their_recurrence() {
    let q = r(1, 2);
    let inst = q_classical_instance(&QClassicalParams {
        q: q.clone(),
        xi: [r(1, 1), r(-1, 1), r(0, 1)],
        eta: [r(0, 1), r(1, 2)],
    });
    let g = inst.moments.prefix(12).unwrap();
    for n in 0..10usize {
        let qn = q.pow(n as i32);
        let mut acc = (&r(1, 1) + r(0, 1) * &qn) * &g[n + 1] + (&r(-1, 1) + &r(1, 2) * &qn) * &g[n];
        if n >= 1 {
            acc += r(0, 1) * (r(1, 1) - &qn) * &g[n - 1];
        }
        assert_eq!(acc, r(0, 1), "recurrence at n = {n}");
    }
}

#[test]
fn rational_family_matches_its_closed_forms() {
    let inst = krall_instance(&KrallParams { alpha: r(2, 1), beta: r(3, 1) }).unwrap();
    for n in 0..12i64 {
        // g_n = (alpha / beta) (n + beta) / (n + alpha).
        let expect = r(2, 3) * r(n + 3, n + 2);
        assert_eq!(inst.moments.get(n as usize).unwrap(), expect, "g_{n}");
        // mu_n = n / (n + alpha).
        assert_eq!(inst.derivative.mu(n as usize).unwrap(), r(n, n + 2), "mu_{n}");
    }
    let derived = inst.derived_moments.unwrap();
    for n in 0..12i64 {
        // Derived side is the same family at (alpha + 2, alpha + beta + 2).
        let expect = r(4, 7) * r(n + 7, n + 4);
        assert_eq!(derived.get(n as usize).unwrap(), expect, "derived g_{n}");
    }
}

#[test]
fn degenerate_rational_parameters_are_rejected() {
    assert!(krall_instance(&KrallParams { alpha: r(3, 1), beta: r(3, 1) }).is_err());
    assert!(krall_instance(&KrallParams { alpha: r(0, 1), beta: r(3, 1) }).is_err());
}

#[test]
fn reflection_weight_pair_is_appell() {
    let tol = Tolerance::default();
    let inst = dunkl_instance(&r(1, 3));
    let sys = MonicPolySystem::from_moments(&inst.moments, 9, &tol).unwrap();
    // The derivative lowers each polynomial to the previous one of the same
    // system, so the derived family repeats the source.
    let q = inst.derivative.derived_polys(sys.polys(), 7).unwrap();
    assert_eq!(q.as_slice(), &sys.polys()[..8]);
}

#[test]
fn reflection_weight_recurrence_halves_the_eigenvalues() {
    let tol = Tolerance::default();
    let eta = r(1, 3);
    let inst = dunkl_instance(&eta);
    let sys = MonicPolySystem::from_moments(&inst.moments, 9, &tol).unwrap();
    for n in 0..9 {
        assert_eq!(*sys.b(n), r(0, 1), "b_{n}");
    }
    for n in 1..9 {
        let mu = inst.derivative.mu(n).unwrap();
        assert_eq!(*sys.u(n), mu / r(2, 1), "u_{n}");
    }
}
