//! Structure analysis: linear recurrences satisfied by the derivative
//! eigenvalues, their normalization to an averaging identity, and
//! polynomial-factor (Christoffel-type) relations between a functional and
//! its derived functional.
//!
//! The guiding facts: a raising operator whose columns stay within `j + 1`
//! diagonals forces `mu_n` to satisfy a constant-coefficient linear
//! recurrence of order at most `j + 1`, each diagonal sequence
//! `m -> K_m^{(i)}` satisfies that same recurrence, and conversely a
//! recurrence of order `r` keeps the operator within `r + 1` diagonals.

use crate::error::{Error, Result};
use crate::linalg;
use crate::moments::MomentSequence;
use crate::poly::Polynomial;
use crate::scalar::{Field, Tolerance};
use crate::umbral::RaisingOperator;

/// A constant-coefficient recurrence `sum_{i=0}^{r} alpha_i mu_{n-i} = 0`
/// (valid for `n >= r`), normalized to `alpha_0 = 1`. At the minimal order
/// `alpha_r` is automatically nonzero.
#[derive(Clone, Debug)]
pub struct RecurrenceProfile<F: Field> {
    pub alpha: Vec<F>,
    /// Pivot-ratio estimate from the defining solve (1.0 in exact mode or
    /// for tiny systems).
    pub condition: f64,
}

impl<F: Field> RecurrenceProfile<F> {
    pub fn order(&self) -> usize {
        self.alpha.len() - 1
    }
}

/// Find the minimal-order recurrence satisfied by the given eigenvalue
/// prefix (`mu[k]` is `mu_k`, starting at `k = 0`), trying orders
/// `1 ..= max_order`. `Ok(None)` means no order fits the whole prefix.
/// Requires at least `2 * max_order + 2` values so even the largest order
/// is overdetermined.
pub fn min_linear_recurrence<F: Field>(
    mu: &[F],
    max_order: usize,
    tol: &Tolerance,
) -> Result<Option<RecurrenceProfile<F>>> {
    if max_order == 0 {
        return Err(Error::InvalidParameter("max_order must be at least 1".into()));
    }
    if mu.len() < 2 * max_order + 2 {
        return Err(Error::InsufficientData {
            what: "derivative eigenvalues",
            needed: 2 * max_order + 2,
            available: mu.len(),
        });
    }
    for r in 1..=max_order {
        let rows: Vec<Vec<F>> =
            (r..mu.len()).map(|n| (1..=r).map(|i| mu[n - i].clone()).collect()).collect();
        let rhs: Vec<F> = (r..mu.len()).map(|n| mu[n].neg()).collect();
        let solved = linalg::solve_consistent(rows, rhs, tol)?;
        let Some(sol) = solved.solution else {
            continue;
        };
        let mut alpha = Vec::with_capacity(r + 1);
        alpha.push(F::one());
        alpha.extend(sol);
        if F::EXACT || residuals_vanish(mu, &alpha, tol) {
            return Ok(Some(RecurrenceProfile { alpha, condition: solved.condition }));
        }
    }
    Ok(None)
}

/// Float-mode guard: the consistency decision inside the elimination can be
/// more lenient than the recurrence itself, so re-check every window.
fn residuals_vanish<F: Field>(mu: &[F], alpha: &[F], tol: &Tolerance) -> bool {
    let r = alpha.len() - 1;
    for n in r..mu.len() {
        let mut acc = F::zero();
        let mut scale = 0.0f64;
        for (i, a) in alpha.iter().enumerate() {
            let term = a.mul(&mu[n - i]);
            scale = scale.max(term.magnitude());
            acc = acc.add(&term);
        }
        if acc.magnitude() > tol.abs_eps + tol.rel_eps * scale {
            return false;
        }
    }
    true
}

/// A recurrence profile brought to zero coefficient sum by the geometric
/// rescaling `mu'_n = q^{-n} mu_n`, together with the averaging identity it
/// induces: `sum_{i=0}^{r-1} beta_i mu'_{n-i} = 1` for every `n >= r - 1`.
#[derive(Clone, Debug)]
pub struct NormalizedProfile<F: Field> {
    /// Root of the characteristic polynomial chosen as rescale base; one
    /// when the original coefficients already sum to zero.
    pub rescale_q: F,
    /// `alpha_i q^{-i}`, summing to zero.
    pub alpha_prime: Vec<F>,
    /// `beta_i = gamma s_{i+1}` where `s` are the partial sums of
    /// `alpha_prime`.
    pub beta: Vec<F>,
    /// Reciprocal of the constant `sum_i s_{i+1} mu'_{n-i}`.
    pub gamma: F,
}

/// Normalize a minimal profile. When the coefficient sum is nonzero the
/// characteristic polynomial `sum_i alpha_i u^{r-i}` is solved for `q`;
/// among its nonzero roots the one closest to one is chosen (ties broken
/// toward the root nearest 1 in the plane, then by the deterministic root
/// order). Exact mode fails with a no-rational-root error when the
/// characteristic polynomial has none.
pub fn normalize_profile<F: Field>(
    mu: &[F],
    profile: &RecurrenceProfile<F>,
    tol: &Tolerance,
) -> Result<NormalizedProfile<F>> {
    let r = profile.order();
    if r == 0 || mu.len() <= r {
        return Err(Error::InsufficientData {
            what: "derivative eigenvalues",
            needed: r + 1,
            available: mu.len(),
        });
    }

    let sum = profile.alpha.iter().fold(F::zero(), |acc, a| acc.add(a));
    let alpha_scale: f64 = profile.alpha.iter().map(Field::magnitude).sum();
    let zero_sum = if F::EXACT {
        sum.is_zero()
    } else {
        sum.magnitude() <= tol.abs_eps + tol.rel_eps * alpha_scale
    };

    let q = if zero_sum {
        F::one()
    } else {
        let char_coeffs: Vec<F> =
            (0..=r).map(|k| profile.alpha[r - k].clone()).collect();
        let mut candidates: Vec<F> = F::poly_roots(&char_coeffs)?
            .into_iter()
            .filter(|u| !u.is_zero())
            .collect();
        if candidates.is_empty() {
            return Err(Error::NoRationalRoot);
        }
        candidates.sort_by(|a, b| {
            let ka = (a.magnitude() - 1.0).abs();
            let kb = (b.magnitude() - 1.0).abs();
            ka.total_cmp(&kb).then(
                a.sub(&F::one()).magnitude().total_cmp(&b.sub(&F::one()).magnitude()),
            )
        });
        candidates.swap_remove(0)
    };

    let alpha_prime: Vec<F> = profile
        .alpha
        .iter()
        .enumerate()
        .map(|(i, a)| Ok(a.mul(&q.powi(-(i as i64))?)))
        .collect::<Result<_>>()?;
    let prime_sum = alpha_prime.iter().fold(F::zero(), |acc, a| acc.add(a));
    if !prime_sum.is_negligible(tol) && !prime_sum.is_zero() {
        return Err(Error::Internal(
            "rescaled recurrence coefficients do not sum to zero".into(),
        ));
    }

    let mut s = Vec::with_capacity(r);
    let mut acc = F::zero();
    for a in alpha_prime.iter().take(r) {
        acc = acc.add(a);
        s.push(acc.clone());
    }

    let mu_prime: Vec<F> = mu
        .iter()
        .enumerate()
        .map(|(n, v)| Ok(v.mul(&q.powi(-(n as i64))?)))
        .collect::<Result<_>>()?;
    let v_at = |n: usize| {
        let mut v = F::zero();
        for (j, sj) in s.iter().enumerate() {
            v = v.add(&sj.mul(&mu_prime[n - j]));
        }
        v
    };
    let v = v_at(r - 1);
    for n in r - 1..mu_prime.len() {
        if !v_at(n).approx_eq(&v, tol) {
            return Err(Error::Internal(format!(
                "averaging constant drifts at n = {n}, contradicting the minimal order"
            )));
        }
    }
    let gamma = v.inv().map_err(|_| {
        Error::Internal("zero averaging constant contradicts the minimal order".into())
    })?;
    let beta = s.iter().map(|sj| gamma.mul(sj)).collect();

    Ok(NormalizedProfile { rescale_q: q, alpha_prime, beta, gamma })
}

/// Coefficients relating a functional to its derived functional through
/// multiplication by a polynomial: `gt_m = sum_{s=-1}^{j} eps_s g_{m+j-s}`
/// for every `m`, equivalently `tau = pi sigma` with
/// `pi(x) = sum_s eps_s x^{j-s}` of degree at most `j + 1`.
#[derive(Clone, Debug)]
pub struct ChristoffelFactor<F: Field> {
    /// `eps_{-1} .. eps_j` in order.
    pub epsilon: Vec<F>,
    pub pi: Polynomial<F>,
    pub condition: f64,
}

/// Solve for the factor of the given width from moment windows
/// `m = 0 ..= n_max` (overdetermined once `n_max >= width + 2`). Both
/// sequences are taken in their normalized scaling, which pins the scale of
/// `pi` through `<sigma, pi> = 1`. Inconsistency of the windows means no
/// factor of this width links the two functionals.
pub fn christoffel_factor<F: Field>(
    g: &MomentSequence<F>,
    gt: &MomentSequence<F>,
    width: usize,
    n_max: usize,
    tol: &Tolerance,
) -> Result<ChristoffelFactor<F>> {
    let j = width;
    if n_max < j + 2 {
        return Err(Error::InvalidParameter(format!(
            "need n_max >= {} to overdetermine a width-{j} factor",
            j + 2
        )));
    }
    let gv = g.prefix(n_max + j + 2)?;
    let gtv = gt.prefix(n_max + 1)?;
    let rows: Vec<Vec<F>> = (0..=n_max)
        .map(|m| (0..=j + 1).map(|col| gv[m + j + 1 - col].clone()).collect())
        .collect();
    let solved = linalg::solve_consistent(rows, gtv, tol)?;
    let Some(eps) = solved.solution else {
        return Err(Error::FactorInconsistent { width: j });
    };
    let pi = Polynomial::from_coeffs((0..=j + 1).map(|k| eps[j + 1 - k].clone()).collect());
    Ok(ChristoffelFactor { epsilon: eps, pi, condition: solved.condition })
}

/// Residuals of the diagonal recurrences of a raising operator: for every
/// diagonal `i`, the sequence `m -> K_m^{(i)}` must satisfy the reverse of
/// the eigenvalue recurrence, `sum_k alpha_k K_{m+k}^{(i)} = 0`, whose
/// characteristic roots are the reciprocals of the eigenvalue ones.
#[derive(Clone, Debug)]
pub struct DiagonalRecurrenceReport {
    pub pass: bool,
    pub max_residual: f64,
    /// Diagonal index and window start of the first failing cell.
    pub failing: Option<(isize, usize)>,
}

pub fn k_coefficient_check<F: Field>(
    r_op: &RaisingOperator<F>,
    alpha: &[F],
    tol: &Tolerance,
) -> Result<DiagonalRecurrenceReport> {
    let order = alpha.len() - 1;
    let max_col = r_op.max_col();
    if max_col < order {
        return Err(Error::InsufficientData {
            what: "raising operator columns",
            needed: order + 1,
            available: max_col + 1,
        });
    }
    let mut pass = true;
    let mut max_residual = 0.0f64;
    let mut failing = None;
    for i in -1..=max_col as isize {
        for start in 0..=max_col - order {
            let mut acc = F::zero();
            let mut scale = 0.0f64;
            for (k, a) in alpha.iter().enumerate() {
                // alpha_0 pairs with the lowest index; this reverses the
                // coefficient order relative to the eigenvalue recurrence.
                let term = a.mul(&r_op.k_coeff(start + k, i));
                scale = scale.max(term.magnitude());
                acc = acc.add(&term);
            }
            let ok = if F::EXACT {
                acc.is_zero()
            } else {
                acc.magnitude() <= tol.abs_eps + tol.rel_eps * scale
            };
            max_residual = max_residual.max(acc.magnitude());
            if !ok {
                pass = false;
                if failing.is_none() {
                    failing = Some((i, start));
                }
            }
        }
    }
    Ok(DiagonalRecurrenceReport { pass, max_residual, failing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::umbral::is_umbral_classical;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn profile_of(
        mu: &[BigRational],
        max_order: usize,
    ) -> Option<RecurrenceProfile<BigRational>> {
        min_linear_recurrence(mu, max_order, &Tolerance::default()).unwrap()
    }

    #[test]
    fn ordinary_derivative_profile() {
        let tol = Tolerance::default();
        let mu = families::classical_derivative::<BigRational>().prefix(12).unwrap();
        let profile = profile_of(&mu, 4).expect("order 2");
        assert_eq!(profile.alpha, vec![r(1, 1), r(-2, 1), r(1, 1)]);

        let norm = normalize_profile(&mu, &profile, &tol).unwrap();
        assert_eq!(norm.rescale_q, r(1, 1));
        assert_eq!(norm.beta, vec![r(1, 1), r(-1, 1)]);
        assert_eq!(norm.gamma, r(1, 1));
    }

    #[test]
    fn q_derivative_profile() {
        let tol = Tolerance::default();
        let mu = families::q_derivative(&r(1, 2)).prefix(12).unwrap();
        let profile = profile_of(&mu, 4).expect("order 2");
        assert_eq!(profile.alpha, vec![r(1, 1), r(-3, 2), r(1, 2)]);

        let norm = normalize_profile(&mu, &profile, &tol).unwrap();
        assert_eq!(norm.rescale_q, r(1, 1));
        assert_eq!(norm.beta, vec![r(1, 1), r(-1, 2)]);
        assert_eq!(norm.gamma, r(1, 1));
    }

    #[test]
    fn dunkl_profile() {
        let tol = Tolerance::default();
        let mu = families::dunkl_derivative(&r(1, 4)).prefix(14).unwrap();
        let profile = profile_of(&mu, 5).expect("order 3");
        assert_eq!(profile.alpha, vec![r(1, 1), r(-1, 1), r(-1, 1), r(1, 1)]);

        let norm = normalize_profile(&mu, &profile, &tol).unwrap();
        assert_eq!(norm.rescale_q, r(1, 1));
        assert_eq!(norm.beta, vec![r(1, 2), r(0, 1), r(-1, 2)]);
        assert_eq!(norm.gamma, r(1, 2));
    }

    #[test]
    fn geometric_difference_needs_rescale() {
        // mu_n = 2^n - 3^n: alpha = (1, -5, 6), coefficient sum 2, and the
        // characteristic roots are 2 and 3.
        let tol = Tolerance::default();
        let mu: Vec<BigRational> = (0..12i64)
            .map(|n| r(2i64.pow(n as u32), 1).sub(&r(3i64.pow(n as u32), 1)))
            .collect();
        let profile = profile_of(&mu, 4).expect("order 2");
        assert_eq!(profile.alpha, vec![r(1, 1), r(-5, 1), r(6, 1)]);

        let norm = normalize_profile(&mu, &profile, &tol).unwrap();
        assert_eq!(norm.rescale_q, r(2, 1));
        assert_eq!(norm.alpha_prime, vec![r(1, 1), r(-5, 2), r(3, 2)]);
        assert_eq!(norm.gamma, r(-2, 1));
        assert_eq!(norm.beta, vec![r(-2, 1), r(3, 1)]);
    }

    #[test]
    fn fibonacci_eigenvalues_have_no_rational_base() {
        let tol = Tolerance::default();
        let mut mu = vec![r(0, 1), r(1, 1)];
        for n in 2..12 {
            let next = mu[n - 1].add(&mu[n - 2]);
            mu.push(next);
        }
        let profile = profile_of(&mu, 4).expect("order 2");
        assert_eq!(profile.alpha, vec![r(1, 1), r(-1, 1), r(-1, 1)]);
        assert!(matches!(
            normalize_profile(&mu, &profile, &tol),
            Err(Error::NoRationalRoot)
        ));
    }

    #[test]
    fn rational_eigenvalues_have_no_finite_recurrence() {
        let mu = families::krall_derivative(&r(2, 1)).prefix(14).unwrap();
        assert!(profile_of(&mu, 4).is_none());
    }

    #[test]
    fn uniform_weight_factor_is_quadratic() {
        let tol = Tolerance::default();
        let g = MomentSequence::from_fn(|n| Ok(r(1, n as i64 + 1))).unwrap();
        let gt = MomentSequence::from_fn(|k| Ok(r(6, (k as i64 + 2) * (k as i64 + 3)))).unwrap();
        let factor = christoffel_factor(&g, &gt, 1, 8, &tol).unwrap();
        assert_eq!(
            factor.pi,
            Polynomial::from_coeffs(vec![r(0, 1), r(6, 1), r(-6, 1)])
        );
        assert_eq!(factor.epsilon, vec![r(-6, 1), r(6, 1), r(0, 1)]);
    }

    #[test]
    fn unrelated_functionals_are_inconsistent() {
        let tol = Tolerance::default();
        let g = MomentSequence::from_fn(|n| Ok(r(1, n as i64 + 1))).unwrap();
        let gt = families::generalized_hermite_moments(&r(1, 4));
        assert!(matches!(
            christoffel_factor(&g, &gt, 1, 8, &tol),
            Err(Error::FactorInconsistent { width: 1 })
        ));
    }

    #[test]
    fn diagonal_recurrence_on_uniform_raising() {
        let tol = Tolerance::default();
        let g = MomentSequence::from_fn(|n| Ok(r(1, n as i64 + 1))).unwrap();
        let d = families::classical_derivative();
        let report = is_umbral_classical(&g, &d, 4, &tol).unwrap();
        let raising = report.raising.as_ref().unwrap();

        let alpha = [r(1, 1), r(-2, 1), r(1, 1)];
        let diag = k_coefficient_check(raising, &alpha, &tol).unwrap();
        assert!(diag.pass);
        assert_eq!(diag.max_residual, 0.0);

        let wrong = [r(1, 1), r(-1, 1)];
        let diag = k_coefficient_check(raising, &wrong, &tol).unwrap();
        assert!(!diag.pass);
        assert!(diag.failing.is_some());
    }

    /// The q = 1/2 diagonals go like q^{-m}, so only the orientation with
    /// reciprocal characteristic roots annihilates them; the eigenvalue
    /// orientation itself must fail.
    #[test]
    fn diagonal_recurrence_is_reversed_for_q() {
        let tol = Tolerance::default();
        let inst = families::q_classical_instance(&families::QClassicalParams {
            q: r(1, 2),
            xi: [r(1, 1), r(-1, 1), r(0, 1)],
            eta: [r(0, 1), r(1, 2)],
        });
        let report = is_umbral_classical(&inst.moments, &inst.derivative, 4, &tol).unwrap();
        let raising = report.raising.as_ref().unwrap();

        let alpha = [r(1, 1), r(-3, 2), r(1, 2)];
        let diag = k_coefficient_check(raising, &alpha, &tol).unwrap();
        assert!(diag.pass, "worst residual {:e}", diag.max_residual);

        let reversed = [r(1, 2), r(-3, 2), r(1, 1)];
        let diag = k_coefficient_check(raising, &reversed, &tol).unwrap();
        assert!(!diag.pass);
    }
}
