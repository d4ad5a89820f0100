//! The fully degenerate classical case and its sigma-function solution.
//!
//! When every eigenvalue of `L~ = D R` past the zeroth equals the same
//! constant, the moment identities collapse to
//!
//! ```text
//! mu_n mu_{m+1} gt_{n+m-1} = g_{n+m+1} - g_{m+1} g_n,
//! ```
//!
//! and the general solution is built from the Weierstrass sigma function:
//! with `y(x) = sigma(w x)`,
//!
//! ```text
//! mu_n = y(n) / y(n+alpha),
//! g_n  = [y(alpha) / y(beta)] y(n+beta) / y(n+alpha).
//! ```
//!
//! The rational limit `y(x) = x` recovers the family with
//! `mu_n = n / (n+alpha)`. Everything here is written against a kernel
//! trait covering both, so the exact-rational limit exercises the same
//! code paths as the floating sigma case. The orthogonal polynomials have
//! an elliptic hypergeometric series and an explicit three-term recurrence,
//! giving three independent construction routes to cross-check.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::orthopoly::MonicPolySystem;
use crate::poly::Polynomial;
use crate::report::{summarize, CheckReport};
use crate::scalar::{Field, Tolerance};
use crate::umbral::{is_umbral_classical, UmbralDerivative};

/// Highest `4m + 6k` retained in the sigma Taylor table. The table
/// coefficients grow roughly like the square root of the factorial that
/// divides them, so the last retained terms behave like `z^w / sqrt(w!)`;
/// weight 96 keeps them below 1e-15 for `|z|` up to about four, which
/// covers the hypergeometric-series arguments (they grow like the squared
/// degree times the lattice scale). The tail is monitored at evaluation
/// time regardless, so an argument outside the trusted region fails loudly
/// instead of returning a wrong value.
const SIGMA_MAX_WEIGHT: usize = 96;

/// Entire odd function `sigma(z; g2, g3)` via its double Taylor expansion
///
/// ```text
/// sigma(z) = sum_{m,k} a_{m,k} (g2/2)^m (2 g3)^k z^{4m+6k+1} / (4m+6k+1)!
/// ```
///
/// with integer coefficients `a_{m,k}` generated exactly and folded into
/// float term coefficients once at construction.
#[derive(Clone, Debug)]
pub struct WeierstrassSigma {
    /// `(power, coefficient)` with the factorial folded in, ascending power.
    terms: Vec<(u32, f64)>,
    /// Subset of `terms` at the weight cap, used for tail monitoring.
    tail: Vec<(u32, f64)>,
}

impl WeierstrassSigma {
    pub fn new(g2: f64, g3: f64) -> Self {
        let m_max = SIGMA_MAX_WEIGHT / 4;
        let k_max = SIGMA_MAX_WEIGHT / 6;
        let table = sigma_coefficient_table(m_max, k_max);

        let mut terms = Vec::new();
        let mut tail = Vec::new();
        for m in 0..=m_max {
            for k in 0..=k_max {
                let weight = 4 * m + 6 * k;
                if weight > SIGMA_MAX_WEIGHT {
                    continue;
                }
                let a = table[m][k].to_f64().expect("sigma coefficient overflow");
                if a == 0.0 {
                    continue;
                }
                let power = (weight + 1) as u32;
                let coeff = a * (g2 / 2.0).powi(m as i32) * (2.0 * g3).powi(k as i32)
                    / factorial(weight + 1);
                if coeff == 0.0 {
                    continue;
                }
                terms.push((power, coeff));
                // Both invariants enter at this weight only through the
                // deepest diagonal, so the largest-weight terms present
                // bound the first omitted ones.
                if weight + 4 > SIGMA_MAX_WEIGHT {
                    tail.push((power, coeff));
                }
            }
        }
        terms.sort_by_key(|&(p, _)| p);
        WeierstrassSigma { terms, tail }
    }

    /// Value together with the magnitude of the largest retained term at
    /// the weight cap, an estimate of the first truncated term.
    pub fn eval_with_tail(&self, z: Complex64) -> (Complex64, f64) {
        let z2 = z * z;
        let max_half = self.terms.last().map_or(0, |&(p, _)| (p - 1) / 2);
        let mut even = Vec::with_capacity(max_half as usize + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..=max_half {
            even.push(acc);
            acc *= z2;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for &(p, c) in &self.terms {
            sum += even[((p - 1) / 2) as usize] * c;
        }
        let mut tail = 0.0f64;
        for &(p, c) in &self.tail {
            tail = tail.max((even[((p - 1) / 2) as usize] * c).norm());
        }
        (z * sum, tail * z.norm())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_tail(z).0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0f64, |acc, i| acc * i as f64)
}

/// `a_{m,k}` for `m <= m_max + 2, k <= k_max + 1` (the recurrence reads two
/// rows ahead), filled in increasing total weight. The recurrence is
///
/// ```text
/// a_{m,k} = 3(m+1) a_{m+1,k-1} + (16/3)(k+1) a_{m-2,k+1}
///           - (1/3)(2m+3k-1)(4m+6k-1) a_{m-1,k},    a_{0,0} = 1,
/// ```
///
/// exact in rationals; all values come out integral.
fn sigma_coefficient_table(m_max: usize, k_max: usize) -> Vec<Vec<BigRational>> {
    let rows = m_max + 3;
    let cols = k_max + 2;
    let big = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a = vec![vec![big(0); cols]; rows];
    a[0][0] = big(1);
    let mut weights: Vec<(usize, usize)> = Vec::new();
    for m in 0..rows {
        for k in 0..cols {
            if m + k > 0 {
                weights.push((m, k));
            }
        }
    }
    weights.sort_by_key(|&(m, k)| 4 * m + 6 * k);
    for (m, k) in weights {
        let mut v = big(0);
        if k >= 1 && m + 1 < rows {
            v += big(3 * (m as i64 + 1)) * &a[m + 1][k - 1];
        }
        if m >= 2 && k + 1 < cols {
            v += big(16 * (k as i64 + 1)) / big(3) * &a[m - 2][k + 1];
        }
        if m >= 1 {
            let t = 2 * m as i64 + 3 * k as i64 - 1;
            let s = 4 * m as i64 + 6 * k as i64 - 1;
            v -= big(t * s) / big(3) * &a[m - 1][k];
        }
        a[m][k] = v;
    }
    a
}

/// Lattice function `y` with `y(0) = 0`, the only structure the degenerate
/// pipeline needs. Implementations must be odd up to their working
/// precision for the hypergeometric route to terminate correctly.
pub trait EllipticKernel<F: Field>: Send + Sync {
    fn y(&self, x: &F) -> Result<F>;
}

/// Rational limit `y(x) = x`, exact in any field.
#[derive(Clone, Copy, Debug)]
pub struct IdentityKernel;

impl<F: Field> EllipticKernel<F> for IdentityKernel {
    fn y(&self, x: &F) -> Result<F> {
        Ok(x.clone())
    }
}

/// `y(x) = sigma(w x)` over complex floats. Arguments landing on a lattice
/// zero are rejected as collisions (the pipeline divides by these values);
/// arguments outside the trusted truncation radius are rejected as
/// convergence failures.
#[derive(Clone, Debug)]
pub struct SigmaKernel {
    sigma: WeierstrassSigma,
    w: f64,
}

/// `|sigma|` below this at a nonzero argument counts as a lattice hit.
const COLLISION_EPS: f64 = 1e-12;
/// Largest tolerated truncation-term magnitude relative to the value.
const TAIL_REL: f64 = 1e-12;

impl SigmaKernel {
    pub fn new(g2: f64, g3: f64, w: f64) -> Result<Self> {
        if w == 0.0 || !w.is_finite() || !g2.is_finite() || !g3.is_finite() {
            return Err(Error::InvalidParameter(
                "sigma kernel needs finite invariants and nonzero w".into(),
            ));
        }
        Ok(SigmaKernel { sigma: WeierstrassSigma::new(g2, g3), w })
    }
}

impl EllipticKernel<Complex64> for SigmaKernel {
    fn y(&self, x: &Complex64) -> Result<Complex64> {
        let z = x * self.w;
        let (v, tail) = self.sigma.eval_with_tail(z);
        if v.norm() <= COLLISION_EPS {
            return Err(Error::LatticeCollision { arg: format!("{z}") });
        }
        if tail > TAIL_REL * v.norm() {
            return Err(Error::Convergence(format!(
                "sigma truncation error at |z| = {:.3} exceeds the trusted bound",
                z.norm()
            )));
        }
        Ok(v)
    }
}

/// The derivative and both moment sequences of a degenerate family.
/// `moments` and `derived` are normalized to lead with one; the raw leading
/// derived moment survives as `derived.scale()` and is what the product
/// identity below uses.
pub struct EllipticSequences<F: Field> {
    pub derivative: UmbralDerivative<F>,
    pub moments: MomentSequence<F>,
    pub derived: MomentSequence<F>,
}

/// Build `mu`, `g`, and the closed-form derived moments for the parameter
/// pair. Fails when `alpha`, `beta`, or `beta - alpha` sits on the kernel
/// lattice, since every formula divides by those values.
pub fn elliptic_sequences<F, K>(kernel: K, alpha: &F, beta: &F) -> Result<EllipticSequences<F>>
where
    F: Field,
    K: EllipticKernel<F> + Clone + 'static,
{
    let y_alpha = kernel.y(alpha)?;
    let y_beta = kernel.y(beta)?;
    let y_diff = kernel.y(&beta.sub(alpha))?;
    if y_alpha.is_zero() || y_beta.is_zero() || y_diff.is_zero() {
        return Err(Error::InvalidParameter(
            "alpha, beta, and beta - alpha must avoid the kernel lattice".into(),
        ));
    }

    let derivative = {
        let kernel = kernel.clone();
        let alpha = alpha.clone();
        UmbralDerivative::from_fn(move |n| {
            if n == 0 {
                return Ok(F::zero());
            }
            let nf = F::from_i64(n as i64);
            kernel.y(&nf)?.div(&kernel.y(&nf.add(&alpha))?)
        })?
    };

    let moments = {
        let kernel = kernel.clone();
        let alpha = alpha.clone();
        let beta = beta.clone();
        let ratio = y_alpha.div(&y_beta)?;
        MomentSequence::from_fn(move |n| {
            let nf = F::from_i64(n as i64);
            ratio
                .mul(&kernel.y(&nf.add(&beta))?)
                .div(&kernel.y(&nf.add(&alpha))?)
        })?
    };

    let derived = {
        let alpha = alpha.clone();
        let beta = beta.clone();
        let two = F::from_i64(2);
        let front = y_alpha.mul(&y_diff).div(&y_beta.mul(&y_beta))?;
        MomentSequence::from_fn(move |n| {
            let nf = F::from_i64(n as i64);
            front
                .mul(&kernel.y(&nf.add(&alpha).add(&beta).add(&two))?)
                .div(&kernel.y(&nf.add(&alpha).add(&two))?)
        })?
    };

    Ok(EllipticSequences { derivative, moments, derived })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateIdentityReport {
    pub pass: bool,
    /// Worst residual of `mu_n mu_{m+1} gt_{n+m-1} = g_{n+m+1} - g_{m+1} g_n`.
    pub max_product_residual: f64,
    /// Worst residual of the gt-free cross-multiplied form
    /// `mu_n mu_m (g_{n+m} - g_1 g_{n+m-1}) = mu_1 mu_{n+m-1} (g_{n+m} - g_m g_n)`.
    pub max_ratio_residual: f64,
    pub failing: Option<(usize, usize)>,
}

/// Verify both degenerate identities on the grid `1 <= m, n <= n_max`.
/// The product form uses the raw derived scale, the ratio form eliminates
/// the derived moments entirely, so the two failures are independent.
pub fn check_degenerate_identities<F: Field>(
    seqs: &EllipticSequences<F>,
    n_max: usize,
    tol: &Tolerance,
) -> Result<DegenerateIdentityReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("identity grid needs n_max >= 1".into()));
    }
    let mu = seqs.derivative.prefix((2 * n_max).max(n_max + 2))?;
    let g = seqs.moments.prefix(2 * n_max + 2)?;
    let gt = seqs.derived.prefix(2 * n_max)?;
    let scale = seqs.derived.scale();

    let mut pass = true;
    let mut max_product = 0.0f64;
    let mut max_ratio = 0.0f64;
    let mut failing = None;
    for m in 1..=n_max {
        for n in 1..=n_max {
            let lhs = mu[n].mul(&mu[m + 1]).mul(&gt[n + m - 1]).mul(scale);
            let cross = g[m + 1].mul(&g[n]);
            let rhs = g[n + m + 1].sub(&cross);
            let residual = lhs.sub(&rhs);
            let ok_product = if F::EXACT {
                residual.is_zero()
            } else {
                tol.admits(
                    lhs.magnitude().max(cross.magnitude()),
                    g[n + m + 1].magnitude(),
                    residual.magnitude(),
                )
            };
            max_product = max_product.max(residual.magnitude());

            let l2 = mu[n].mul(&mu[m]).mul(&g[n + m].sub(&g[1].mul(&g[n + m - 1])));
            let r2 = mu[1].mul(&mu[n + m - 1]).mul(&g[n + m].sub(&g[m].mul(&g[n])));
            let residual2 = l2.sub(&r2);
            let ok_ratio = if F::EXACT {
                residual2.is_zero()
            } else {
                tol.admits(l2.magnitude(), r2.magnitude(), residual2.magnitude())
            };
            max_ratio = max_ratio.max(residual2.magnitude());

            if !(ok_product && ok_ratio) {
                pass = false;
                if failing.is_none() {
                    failing = Some((m, n));
                }
            }
        }
    }
    Ok(DegenerateIdentityReport {
        pass,
        max_product_residual: max_product,
        max_ratio_residual: max_ratio,
        failing,
    })
}

/// `[a]_k = y(a) y(a+1) ... y(a+k-1)`.
pub fn elliptic_pochhammer<F, K>(kernel: &K, a: &F, k: usize) -> Result<F>
where
    F: Field,
    K: EllipticKernel<F>,
{
    let mut acc = F::one();
    let mut arg = a.clone();
    for _ in 0..k {
        acc = acc.mul(&kernel.y(&arg)?);
        arg = arg.add(&F::one());
    }
    Ok(acc)
}

/// Monic orthogonal polynomial of the family by its terminating elliptic
/// hypergeometric series,
///
/// ```text
/// P_n = B_n sum_{k=0}^{n} ([-n]_k [alpha+n]_k [1+alpha-beta-n(alpha+n)]_k)
///           / ([1]_k [alpha]_k [alpha-beta-n(alpha+n)]_k) x^k,
/// ```
///
/// with `B_n` fixed by monicity. The `[-n]_k` factors stay off the lattice
/// for `k <= n`, so termination never evaluates `y(0)`.
pub fn elliptic_poly<F, K>(kernel: &K, alpha: &F, beta: &F, n: usize) -> Result<Polynomial<F>>
where
    F: Field,
    K: EllipticKernel<F>,
{
    let nf = F::from_i64(n as i64);
    let one = F::one();
    let shift = nf.mul(&alpha.add(&nf));
    let neg_n = nf.neg();
    let a1 = alpha.add(&nf);
    let a2 = one.add(alpha).sub(beta).sub(&shift);
    let b1 = alpha.clone();
    let b2 = alpha.sub(beta).sub(&shift);

    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(F::one());
    let mut num = F::one();
    let mut den = F::one();
    for k in 0..n {
        let kf = F::from_i64(k as i64);
        num = num
            .mul(&kernel.y(&neg_n.add(&kf))?)
            .mul(&kernel.y(&a1.add(&kf))?)
            .mul(&kernel.y(&a2.add(&kf))?);
        den = den
            .mul(&kernel.y(&one.add(&kf))?)
            .mul(&kernel.y(&b1.add(&kf))?)
            .mul(&kernel.y(&b2.add(&kf))?);
        coeffs.push(num.div(&den)?);
    }
    let lead = coeffs[n].clone();
    if lead.is_zero() {
        return Err(Error::InvalidParameter(
            "hypergeometric leading coefficient vanishes at these parameters".into(),
        ));
    }
    Polynomial::from_coeffs(coeffs).div_scalar(&lead)
}

/// Three-term coefficients of the monic family,
/// `P_{n+1} = (x - b_n) P_n - u_n P_{n-1}` with `b_n = A_n + C_n` and
/// `u_n = A_{n-1} C_n`; `C_0 = 0` since its formula carries `y(0)^2`.
/// Returns `b_0 .. b_{max_degree-1}` and `u_1 .. u_{max_degree-1}`.
pub fn elliptic_recurrence<F, K>(
    kernel: &K,
    alpha: &F,
    beta: &F,
    max_degree: usize,
) -> Result<(Vec<F>, Vec<F>)>
where
    F: Field,
    K: EllipticKernel<F>,
{
    if max_degree == 0 {
        return Err(Error::InvalidParameter("recurrence needs max_degree >= 1".into()));
    }
    let mut a_coeffs = Vec::with_capacity(max_degree);
    for n in 0..max_degree {
        a_coeffs.push(coefficient_a(kernel, alpha, beta, n)?);
    }
    let mut b = Vec::with_capacity(max_degree);
    let mut u = Vec::with_capacity(max_degree - 1);
    b.push(a_coeffs[0].clone());
    for n in 1..max_degree {
        let c = coefficient_c(kernel, alpha, beta, n)?;
        b.push(a_coeffs[n].add(&c));
        u.push(a_coeffs[n - 1].mul(&c));
    }
    Ok((b, u))
}

fn coefficient_a<F, K>(kernel: &K, alpha: &F, beta: &F, n: usize) -> Result<F>
where
    F: Field,
    K: EllipticKernel<F>,
{
    let nf = F::from_i64(n as i64);
    let i = |v: i64| F::from_i64(v);
    let y = |arg: &F| kernel.y(arg);
    let n_alpha = y(&nf.add(alpha))?;
    let num = n_alpha
        .mul(&n_alpha)
        .mul(&y(&beta
            .add(&alpha.mul(&nf))
            .add(&nf.add(&i(1)).mul(&nf.add(&i(1)))))?)
        .mul(&y(&beta
            .add(&alpha.mul(&nf.sub(&i(1))))
            .add(&nf.mul(&nf.sub(&i(1)))))?);
    let den = y(&nf.add(&nf).add(alpha))?
        .mul(&y(&nf.add(&nf).add(alpha).add(&i(1)))?)
        .mul(&y(&beta.add(&alpha.mul(&nf.sub(&i(1)))).add(&nf.mul(&nf)))?)
        .mul(&y(&beta
            .add(&alpha.mul(&nf))
            .add(&nf.mul(&nf.add(&i(1)))))?);
    num.div(&den)
}

fn coefficient_c<F, K>(kernel: &K, alpha: &F, beta: &F, n: usize) -> Result<F>
where
    F: Field,
    K: EllipticKernel<F>,
{
    let nf = F::from_i64(n as i64);
    let i = |v: i64| F::from_i64(v);
    let y = |arg: &F| kernel.y(arg);
    let y_n = y(&nf)?;
    let num = y_n
        .mul(&y_n)
        .mul(&y(&beta
            .add(&alpha.mul(&nf.sub(&i(2))))
            .add(&nf.sub(&i(1)).mul(&nf.sub(&i(1)))))?)
        .mul(&y(&beta
            .add(&alpha.mul(&nf))
            .add(&nf.mul(&nf.add(&i(1)))))?);
    let den = y(&nf.add(&nf).add(alpha))?
        .mul(&y(&nf.add(&nf).add(alpha).sub(&i(1)))?)
        .mul(&y(&beta.add(&alpha.mul(&nf.sub(&i(1)))).add(&nf.mul(&nf)))?)
        .mul(&y(&beta
            .add(&alpha.mul(&nf.sub(&i(1))))
            .add(&nf.mul(&nf.sub(&i(1)))))?);
    num.div(&den)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftReport {
    pub pass: bool,
    pub max_residual: f64,
}

/// The derived functional of the pair `(alpha, beta)` is the source
/// functional of `(alpha + 2, alpha + beta + 2)`; compare the normalized
/// moments of both sides through `n_max`.
pub fn shift_property_check<F, K>(
    kernel: &K,
    alpha: &F,
    beta: &F,
    n_max: usize,
    tol: &Tolerance,
) -> Result<ShiftReport>
where
    F: Field,
    K: EllipticKernel<F> + Clone + 'static,
{
    let base = elliptic_sequences(kernel.clone(), alpha, beta)?;
    let two = F::from_i64(2);
    let shifted =
        elliptic_sequences(kernel.clone(), &alpha.add(&two), &alpha.add(beta).add(&two))?;
    let lhs = base.derived.prefix(n_max + 1)?;
    let rhs = shifted.moments.prefix(n_max + 1)?;
    let mut pass = true;
    let mut max_residual = 0.0f64;
    for (a, b) in lhs.iter().zip(&rhs) {
        let diff = a.sub(b).magnitude();
        max_residual = max_residual.max(diff);
        if !(if F::EXACT {
            a == b
        } else {
            tol.admits(a.magnitude(), b.magnitude(), diff)
        }) {
            pass = false;
        }
    }
    Ok(ShiftReport { pass, max_residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticVerifyReport {
    pub mode: &'static str,
    pub depth: usize,
    pub verdict: bool,
    /// Full classicality run on the kernel-generated pair.
    pub classicality: CheckReport,
    /// Pipeline-recovered derived moments against the closed form.
    pub derived_match: bool,
    pub derived_max_residual: f64,
    pub identities: DegenerateIdentityReport,
    /// Agreement of the moment, hypergeometric, and recurrence routes to
    /// the monic polynomials.
    pub routes_pass: bool,
    pub routes_max_distance: f64,
    pub shift: ShiftReport,
}

/// Run every degenerate-family check at one depth: classicality of the
/// generated pair, closed-form derived moments against the recovered ones,
/// both product identities, the three construction routes for the
/// polynomials, and the parameter shift of the derived functional.
pub fn elliptic_verify<F, K>(
    kernel: &K,
    alpha: &F,
    beta: &F,
    depth: usize,
    tol: &Tolerance,
) -> Result<EllipticVerifyReport>
where
    F: Field,
    K: EllipticKernel<F> + Clone + 'static,
{
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let seqs = elliptic_sequences(kernel.clone(), alpha, beta)?;
    let rep = is_umbral_classical(&seqs.moments, &seqs.derivative, depth, tol)?;
    let classicality = summarize(&rep)?;

    let recovered = rep.tau.prefix(depth + 1)?;
    let closed = seqs.derived.prefix(depth + 1)?;
    let mut derived_match = true;
    let mut derived_max_residual = 0.0f64;
    for (a, b) in recovered.iter().zip(&closed) {
        let diff = a.sub(b).magnitude();
        derived_max_residual = derived_max_residual.max(diff);
        if !(if F::EXACT {
            a == b
        } else {
            tol.admits(a.magnitude(), b.magnitude(), diff)
        }) {
            derived_match = false;
        }
    }

    let identities = check_degenerate_identities(&seqs, depth, tol)?;

    let hankel_polys = rep.p_sys.polys();
    let (b, u) = elliptic_recurrence(kernel, alpha, beta, depth)?;
    let rec_sys = MonicPolySystem::from_recurrence(&b, &u)?;
    let mut routes_pass = true;
    let mut routes_max_distance = 0.0f64;
    for n in 0..=depth {
        let hyper = elliptic_poly(kernel, alpha, beta, n)?;
        let rec = rec_sys.poly(n);
        for other in [&hyper, rec] {
            routes_max_distance =
                routes_max_distance.max(hankel_polys[n].max_coeff_distance(other));
            if !hankel_polys[n].approx_eq(other, tol) {
                routes_pass = false;
            }
        }
    }

    let shift = shift_property_check(kernel, alpha, beta, depth, tol)?;

    let verdict = rep.verdict
        && derived_match
        && identities.pass
        && routes_pass
        && shift.pass;
    Ok(EllipticVerifyReport {
        mode: F::MODE,
        depth,
        verdict,
        classicality,
        derived_match,
        derived_max_residual,
        identities,
        routes_pass,
        routes_max_distance,
        shift,
    })
}
