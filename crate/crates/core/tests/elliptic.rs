//! The degenerate elliptic family against independent references: a sigma
//! oracle built from the Laurent expansion of the p-function, exact limits
//! with zero residuals, and the closed moment forms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use umbral_ops::elliptic::{
    elliptic_pochhammer, elliptic_poly, elliptic_recurrence, elliptic_sequences, elliptic_verify,
    IdentityKernel, SigmaKernel, WeierstrassSigma,
};
use umbral_ops::{MonicPolySystem, Tolerance};

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sigma through a different derivation than the library's double series:
/// Laurent coefficients `c_k` of the p-function satisfy
///
/// ```text
/// c_2 = g2 / 20,  c_3 = g3 / 28,
/// c_k = 3 / ((2k + 1)(k - 3)) sum_{m=2}^{k-2} c_m c_{k-m},
/// ```
///
/// and `sigma(z) = z exp(-sum_k c_k z^{2k} / ((2k - 1) 2k))`.
fn sigma_oracle(g2: f64, g3: f64, z: Complex64) -> Complex64 {
    const TERMS: usize = 40;
    let mut c = vec![0.0f64; TERMS + 1];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..=TERMS {
        let mut s = 0.0;
        for m in 2..=(k - 2) {
            s += c[m] * c[k - m];
        }
        c[k] = 3.0 * s / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    let z2 = z * z;
    let mut total = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter().enumerate().skip(2) {
        total += *ck * z2.powu(k as u32) / ((2 * k - 1) as f64 * (2 * k) as f64);
    }
    z * (-total).exp()
}

#[test]
fn sigma_matches_the_independent_oracle() {
    for (g2, g3) in [(4.0, 1.0), (2.5, -0.7), (0.0, 1.3)] {
        let sigma = WeierstrassSigma::new(g2, g3);
        for k in 0..100 {
            let radius = 1.2 * (k as f64 + 1.0) / 100.0;
            let angle = std::f64::consts::TAU * 0.6180339887498949 * k as f64;
            let z = Complex64::from_polar(radius, angle);
            let (got, tail) = sigma.eval_with_tail(z);
            let want = sigma_oracle(g2, g3, z);
            let rel = (got - want).norm() / want.norm();
            assert!(rel < 1e-12, "(g2, g3) = ({g2}, {g3}), z = {z}: rel {rel:.2e}");
            assert!(tail < 1e-15, "tail at |z| = {radius}: {tail:.2e}");
        }
    }
}

#[test]
fn sigma_reduces_to_the_identity_at_zero_invariants() {
    let sigma = WeierstrassSigma::new(0.0, 0.0);
    for z in [Complex64::new(0.37, -1.1), Complex64::new(-2.0, 0.25)] {
        assert_eq!(sigma.eval(z), z);
    }
}

#[test]
fn exact_limit_verifies_with_zero_residuals() {
    let tol = Tolerance::default();
    let report = elliptic_verify(&IdentityKernel, &r(2, 1), &r(3, 1), 4, &tol).unwrap();
    assert!(report.verdict);
    assert!(report.derived_match);
    assert_eq!(report.derived_max_residual, 0.0);
    assert!(report.identities.pass);
    assert_eq!(report.identities.max_product_residual, 0.0);
    assert_eq!(report.identities.max_ratio_residual, 0.0);
    assert!(report.routes_pass);
    assert_eq!(report.routes_max_distance, 0.0);
    assert!(report.shift.pass);
    assert_eq!(report.shift.max_residual, 0.0);
}

#[test]
fn sequences_follow_the_closed_moment_forms() {
    let alpha = r(1, 2);
    let beta = r(5, 2);
    let seqs = elliptic_sequences(IdentityKernel, &alpha, &beta).unwrap();
    for n in 0..10i64 {
        // g_n = (alpha / beta) (n + beta) / (n + alpha) for y(x) = x.
        let expect = r(1, 5) * r(2 * n + 5, 1) / r(2 * n + 1, 1);
        assert_eq!(seqs.moments.get(n as usize).unwrap(), expect, "g_{n}");
        // mu_n = y(n) / y(n + alpha).
        let expect_mu = r(2 * n, 2 * n + 1);
        assert_eq!(seqs.derivative.mu(n as usize).unwrap(), expect_mu, "mu_{n}");
        // Derived moments live at (alpha + 2, alpha + beta + 2).
        let sa = r(5, 2);
        let sb = r(5, 1);
        let expect_t = (&sa / &sb) * (r(n, 1) + &sb) / (r(n, 1) + &sa);
        assert_eq!(seqs.derived.get(n as usize).unwrap(), expect_t, "derived g_{n}");
    }
}

#[test]
fn pochhammer_is_the_rising_product() {
    let a = r(3, 4);
    for k in 0..7i64 {
        let mut want = r(1, 1);
        for i in 0..k {
            want *= &a + r(i, 1);
        }
        assert_eq!(elliptic_pochhammer(&IdentityKernel, &a, k as usize).unwrap(), want);
    }
}

#[test]
fn three_routes_agree_on_a_second_parameter_set() {
    let tol = Tolerance::new(1e-12, 1e-9).unwrap();
    let kernel = SigmaKernel::new(3.0, 0.5, 0.08).unwrap();
    let alpha = Complex64::new(0.4, 0.0);
    let beta = Complex64::new(0.9, 0.0);
    let seqs = elliptic_sequences(kernel.clone(), &alpha, &beta).unwrap();
    let sys = MonicPolySystem::from_moments(&seqs.moments, 6, &tol).unwrap();
    let (b, u) = elliptic_recurrence(&kernel, &alpha, &beta, 6).unwrap();
    let rec = MonicPolySystem::from_recurrence(&b, &u).unwrap();
    for n in 0..=6 {
        let series = elliptic_poly(&kernel, &alpha, &beta, n).unwrap();
        let scale = series
            .coeffs()
            .iter()
            .fold(1.0f64, |m, c| m.max(c.norm()));
        let d1 = sys.poly(n).max_coeff_distance(&series) / scale;
        let d2 = rec.poly(n).max_coeff_distance(&series) / scale;
        // The Hankel solves lose a little over a digit per degree on this
        // lattice; degree six lands near 2e-8 through the moment route.
        assert!(d1 < 1e-7, "moment route, degree {n}: {d1:.2e}");
        assert!(d2 < 1e-7, "recurrence route, degree {n}: {d2:.2e}");
    }
}

#[test]
fn lattice_collisions_are_rejected() {
    let exact = elliptic_sequences(IdentityKernel, &r(3, 1), &r(3, 1));
    assert!(exact.is_err(), "beta - alpha on the lattice");
    let zero = elliptic_sequences(IdentityKernel, &r(0, 1), &r(3, 1));
    assert!(zero.is_err(), "alpha on the lattice");
    let kernel = SigmaKernel::new(4.0, 1.0, 0.1).unwrap();
    let float = elliptic_sequences(kernel, &Complex64::new(0.5, 0.0), &Complex64::new(0.5, 0.0));
    assert!(float.is_err(), "float collision");
}
