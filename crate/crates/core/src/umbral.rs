//! Generalized derivative and raising operators, and the classicality check
//! built on them.
//!
//! A generalized (umbral) derivative acts on monomials by
//! `D x^n = mu_n x^{n-1}` with `mu_0 = 0` and `mu_n != 0` for `n >= 1`.
//! Given a monic orthogonal system `P_n` for a functional `sigma`, the
//! derived polynomials are `Q_n = D P_{n+1} / mu_{n+1}`, monic of degree `n`.
//! The pair `(sigma, D)` is classical when the `Q_n` are again orthogonal
//! with respect to some functional `tau`.
//!
//! [`is_umbral_classical`] decides this. The candidate `tau` is unique up to
//! scale: its normalized moments follow from `<tau, Q_n> = 0`. The `Q_n` are
//! Gram-checked against it, and the equivalent system of moment identities
//!
//! ```text
//! mu_n gt_{n+m-1} = sum_{s=0}^{m+1} R_{m,s} g_{n+s},    m, n >= 0,
//! ```
//!
//! is verified, where `R x^m = sum_s R_{m,s} x^s` is the raising operator
//! fixed by `R Q_n = nu_{n+1} P_{n+1}` with `nu_n = mu_n ht_{n-1} / h_n`.
//! Both sides scale linearly with the normalization of `tau` (through the
//! `ht` factors inside `nu`), so working with the normalized `tau` is
//! consistent.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::orthopoly::{gram_check, GramReport, MonicPolySystem};
use crate::par;
use crate::poly::Polynomial;
use crate::scalar::{Field, Tolerance};

type MuRule<F> = Box<dyn Fn(usize) -> Result<F> + Send + Sync>;

struct DerivInner<F: Field> {
    rule: MuRule<F>,
    /// Seeded with `mu_0 = 0`; extended entries are validated nonzero.
    cache: Mutex<Vec<F>>,
}

/// The generalized derivative `D x^n = mu_n x^{n-1}`.
///
/// Cheap to clone and share; eigenvalues are cached as they are produced.
pub struct UmbralDerivative<F: Field> {
    inner: Arc<DerivInner<F>>,
}

impl<F: Field> Clone for UmbralDerivative<F> {
    fn clone(&self) -> Self {
        UmbralDerivative { inner: Arc::clone(&self.inner) }
    }
}

impl<F: Field> fmt::Debug for UmbralDerivative<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached = self.inner.cache.lock().expect("mu cache poisoned").len();
        write!(f, "UmbralDerivative({cached} cached)")
    }
}

impl<F: Field> UmbralDerivative<F> {
    /// Derivative from an eigenvalue rule. `rule(0)` must return zero; this
    /// is checked immediately. `rule(n)` for `n >= 1` must be nonzero, which
    /// is checked lazily as eigenvalues are first used.
    pub fn from_fn<G>(rule: G) -> Result<Self>
    where
        G: Fn(usize) -> Result<F> + Send + Sync + 'static,
    {
        if !rule(0)?.is_zero() {
            return Err(Error::InvalidMu { n: 0, reason: "mu_0 must vanish" });
        }
        Ok(UmbralDerivative {
            inner: Arc::new(DerivInner {
                rule: Box::new(rule),
                cache: Mutex::new(vec![F::zero()]),
            }),
        })
    }

    /// Derivative from an explicit finite eigenvalue list (file input).
    /// `values[0]` must be zero and every later entry nonzero; requests past
    /// the end fail with an insufficient-data error.
    pub fn from_values(values: Vec<F>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                what: "derivative eigenvalues",
                needed: 1,
                available: 0,
            });
        }
        if !values[0].is_zero() {
            return Err(Error::InvalidMu { n: 0, reason: "mu_0 must vanish" });
        }
        for (n, v) in values.iter().enumerate().skip(1) {
            if v.is_zero() {
                return Err(Error::InvalidMu { n, reason: "must be nonzero for n >= 1" });
            }
        }
        let available = values.len();
        let rule: MuRule<F> = Box::new(move |n| {
            Err(Error::InsufficientData {
                what: "derivative eigenvalues",
                needed: n + 1,
                available,
            })
        });
        Ok(UmbralDerivative {
            inner: Arc::new(DerivInner { rule, cache: Mutex::new(values) }),
        })
    }

    /// Derivative whose eigenvalues are an exponential sum
    /// `mu_n = sum_j w_j(n) r_j^n` with polynomial weights `w_j` evaluated at
    /// the field image of `n`. Every family with constant-coefficient
    /// recurrence structure (classical, q, Dunkl-type) fits this form.
    pub fn from_exponential_sum(terms: Vec<(F, Polynomial<F>)>) -> Result<Self> {
        for (root, _) in &terms {
            if root.is_zero() {
                return Err(Error::InvalidParameter(
                    "exponential-sum roots must be nonzero".into(),
                ));
            }
        }
        Self::from_fn(move |n| {
            let x = F::from_i64(n as i64);
            let mut acc = F::zero();
            for (root, weight) in &terms {
                acc = acc.add(&weight.eval(&x).mul(&root.powi(n as i64)?));
            }
            Ok(acc)
        })
    }

    /// `mu_n`.
    pub fn mu(&self, n: usize) -> Result<F> {
        let mut cache = self.inner.cache.lock().expect("mu cache poisoned");
        while cache.len() <= n {
            let k = cache.len();
            // A finite source reports how far this request reached.
            let v = (self.inner.rule)(k).map_err(|e| match e {
                Error::InsufficientData { what, available, .. } => {
                    Error::InsufficientData { what, needed: n + 1, available }
                }
                other => other,
            })?;
            if v.is_zero() {
                return Err(Error::InvalidMu { n: k, reason: "must be nonzero for n >= 1" });
            }
            cache.push(v);
        }
        Ok(cache[n].clone())
    }

    /// `mu_0 .. mu_{len-1}`.
    pub fn prefix(&self, len: usize) -> Result<Vec<F>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        self.mu(len - 1)?;
        let cache = self.inner.cache.lock().expect("mu cache poisoned");
        Ok(cache[..len].to_vec())
    }

    /// `D p`.
    pub fn apply(&self, p: &Polynomial<F>) -> Result<Polynomial<F>> {
        let Some(deg) = p.degree() else {
            return Ok(Polynomial::zero());
        };
        if deg == 0 {
            return Ok(Polynomial::zero());
        }
        let mu = self.prefix(deg + 1)?;
        let coeffs: Vec<F> = (1..=deg).map(|k| p.coeff(k).mul(&mu[k])).collect();
        Ok(Polynomial::from_coeffs(coeffs))
    }

    /// The monic derived polynomials `Q_n = D p[n+1] / mu_{n+1}` for
    /// `n = 0 ..= max_degree`. `p` must reach degree `max_degree + 1`.
    pub fn derived_polys(
        &self,
        p: &[Polynomial<F>],
        max_degree: usize,
    ) -> Result<Vec<Polynomial<F>>> {
        if p.len() < max_degree + 2 {
            return Err(Error::InsufficientData {
                what: "system polynomials",
                needed: max_degree + 2,
                available: p.len(),
            });
        }
        par::try_map_indexed(max_degree + 1, |n| {
            self.apply(&p[n + 1])?.div_scalar(&self.mu(n + 1)?)
        })
    }

    /// The derivative with eigenvalues `alpha q^n mu_n`. Composing this with
    /// a geometric moment rescaling maps classical pairs to classical pairs.
    pub fn equivalence_transform(&self, alpha: &F, q: &F) -> Result<Self> {
        if alpha.is_zero() || q.is_zero() {
            return Err(Error::InvalidParameter(
                "equivalence transform parameters must be nonzero".into(),
            ));
        }
        let base = self.clone();
        let alpha = alpha.clone();
        let q = q.clone();
        Self::from_fn(move |n| Ok(base.mu(n)?.mul(&alpha).mul(&q.powi(n as i64)?)))
    }
}

/// Coefficients of `p` in a monic basis with `basis[k]` of degree `k`.
/// Elimination is degree by degree, so the remainder vanishes identically
/// in both modes.
pub(crate) fn expand_in_monic_basis<F: Field>(
    p: &Polynomial<F>,
    basis: &[Polynomial<F>],
) -> Result<Vec<F>> {
    let Some(deg) = p.degree() else {
        return Ok(Vec::new());
    };
    if deg >= basis.len() {
        return Err(Error::InsufficientData {
            what: "basis polynomials",
            needed: deg + 1,
            available: basis.len(),
        });
    }
    let mut coeffs = vec![F::zero(); deg + 1];
    let mut rest = p.clone();
    for k in (0..=deg).rev() {
        let c = rest.coeff(k);
        if !c.is_zero() {
            rest = rest.sub(&basis[k].scale(&c));
            coeffs[k] = c;
        }
    }
    debug_assert!(rest.is_zero());
    Ok(coeffs)
}

/// Band structure of an operator given by monomial columns: `Local(j)` when
/// the columns `R x^n` involve only the powers `x^{n+1} .. x^{n+1-j-?}`,
/// precisely, when every column keeps `n - s_min(n) <= j - 1` where
/// `s_min(n)` is the lowest power present. `Nonlocal` marks saturation: the
/// deepest computed column reaches down to `x^0`, so no band is visible at
/// this depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandWidth {
    Local(usize),
    Nonlocal,
}

impl Serialize for BandWidth {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BandWidth::Local(j) => serializer.serialize_u64(*j as u64),
            BandWidth::Nonlocal => serializer.serialize_str("nonlocal"),
        }
    }
}

impl fmt::Display for BandWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandWidth::Local(j) => write!(f, "{j}"),
            BandWidth::Nonlocal => f.write_str("nonlocal"),
        }
    }
}

/// The raising operator, stored through its monomial columns
/// `R x^m = sum_s R_{m,s} x^s` for `m = 0 ..= max_col`.
#[derive(Clone, Debug)]
pub struct RaisingOperator<F: Field> {
    cols: Vec<Polynomial<F>>,
    /// `nu[k] = nu_{k+1}`; empty when built from raw columns.
    nu: Vec<F>,
}

impl<F: Field> RaisingOperator<F> {
    /// Build `R` from the source system, the derived system (carrying the
    /// norms of `tau`), and the derivative: `R Q_k = nu_{k+1} P_{k+1}`, and
    /// each `x^m` is expanded in the `Q` basis. Requires `p_sys` up to
    /// degree `max_col + 1` with norms, and `q_sys` up to `max_col`.
    pub fn from_systems(
        p_sys: &MonicPolySystem<F>,
        q_sys: &MonicPolySystem<F>,
        d: &UmbralDerivative<F>,
        max_col: usize,
    ) -> Result<Self> {
        if p_sys.max_degree() < max_col + 1 || p_sys.norms().len() < max_col + 2 {
            return Err(Error::InsufficientData {
                what: "source system norms",
                needed: max_col + 2,
                available: p_sys.norms().len(),
            });
        }
        if q_sys.max_degree() < max_col {
            return Err(Error::InsufficientData {
                what: "derived system polynomials",
                needed: max_col + 1,
                available: q_sys.max_degree() + 1,
            });
        }
        let mut nu = Vec::with_capacity(max_col + 1);
        for k in 0..=max_col {
            nu.push(d.mu(k + 1)?.mul(q_sys.h(k)).div(p_sys.h(k + 1))?);
        }
        let cols = par::try_map_indexed(max_col + 1, |m| -> Result<Polynomial<F>> {
            let expansion = expand_in_monic_basis(&Polynomial::monomial(m), q_sys.polys())?;
            let mut col = Polynomial::zero();
            for (k, c) in expansion.iter().enumerate() {
                if !c.is_zero() {
                    col = col.add(&p_sys.poly(k + 1).scale(&c.mul(&nu[k])));
                }
            }
            Ok(col)
        })?;
        Ok(RaisingOperator { cols, nu })
    }

    /// Wrap explicit columns; `cols[m]` must have degree at most `m + 1`.
    pub fn from_columns(cols: Vec<Polynomial<F>>) -> Result<Self> {
        for (m, col) in cols.iter().enumerate() {
            if col.degree().is_some_and(|d| d > m + 1) {
                return Err(Error::InvalidParameter(format!(
                    "column {m} exceeds degree {}",
                    m + 1
                )));
            }
        }
        Ok(RaisingOperator { cols, nu: Vec::new() })
    }

    pub fn max_col(&self) -> usize {
        self.cols.len() - 1
    }

    /// `R x^m`.
    pub fn column(&self, m: usize) -> &Polynomial<F> {
        &self.cols[m]
    }

    /// `R_{m,s}`, the coefficient of `x^s` in `R x^m`.
    pub fn entry(&self, m: usize, s: usize) -> F {
        self.cols[m].coeff(s)
    }

    /// Diagonal coefficient `K_n^{(i)}`, the coefficient of `x^{n-i}` in
    /// `R x^n`; zero outside the stored range (in particular for `i > n`).
    pub fn k_coeff(&self, n: usize, i: isize) -> F {
        let s = n as isize - i;
        if s < 0 || s > n as isize + 1 {
            return F::zero();
        }
        self.cols[n].coeff(s as usize)
    }

    /// `rho_n = K_n^{(0)}`, the diagonal of the operator.
    pub fn rho(&self, n: usize) -> F {
        self.k_coeff(n, 0)
    }

    /// `nu_n` from the construction data; panics when the operator was built
    /// from raw columns.
    pub fn nu(&self, n: usize) -> &F {
        assert!(n >= 1, "nu is indexed from 1");
        assert!(!self.nu.is_empty(), "raising operator built without norm data");
        &self.nu[n - 1]
    }

    /// `R p`.
    pub fn apply(&self, p: &Polynomial<F>) -> Result<Polynomial<F>> {
        let Some(deg) = p.degree() else {
            return Ok(Polynomial::zero());
        };
        if deg >= self.cols.len() {
            return Err(Error::InsufficientData {
                what: "raising operator columns",
                needed: deg + 1,
                available: self.cols.len(),
            });
        }
        let mut acc = Polynomial::zero();
        for (m, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.cols[m].scale(c));
            }
        }
        Ok(acc)
    }

    /// Detect the band structure of the stored columns. A coefficient counts
    /// as present when it is exactly nonzero (exact mode) or above the
    /// tolerance relative to the column's largest coefficient (float mode).
    /// The verdict is a finite-depth diagnosis: `Nonlocal` means the deepest
    /// column already reaches `x^0`.
    pub fn band(&self, tol: &Tolerance) -> BandWidth {
        let max_col = self.max_col();
        let mut d_max: isize = -1;
        for (m, col) in self.cols.iter().enumerate() {
            let col_scale =
                col.coeffs().iter().map(|c| c.magnitude()).fold(0.0f64, f64::max);
            let s_min = col.coeffs().iter().position(|c| {
                if F::EXACT {
                    !c.is_zero()
                } else {
                    c.magnitude() > tol.abs_eps + tol.rel_eps * col_scale
                }
            });
            if let Some(s) = s_min {
                d_max = d_max.max(m as isize - s as isize);
            }
        }
        if d_max < 0 {
            BandWidth::Local(0)
        } else if d_max as usize >= max_col {
            BandWidth::Nonlocal
        } else {
            BandWidth::Local(d_max as usize + 1)
        }
    }

    /// Copy with `delta` added to the single entry `R_{m,s}`. Used for
    /// sensitivity probes and negative controls; the stored `nu` data is
    /// left untouched and no longer consistent with the columns.
    pub fn perturb_entry(&self, m: usize, s: usize, delta: &F) -> Self {
        let mut cols = self.cols.clone();
        cols[m] = cols[m].add(&Polynomial::monomial(s).scale(delta));
        RaisingOperator { cols, nu: self.nu.clone() }
    }
}

/// A linear operator on polynomials stored column-wise, `op x^n = cols[n]`.
/// Used for the compositions `R D` and `D R`.
#[derive(Clone, Debug)]
pub struct MonomialOperator<F: Field> {
    cols: Vec<Polynomial<F>>,
}

impl<F: Field> MonomialOperator<F> {
    /// `L = R D`, with columns `L x^n = mu_n (R x^{n-1})` for
    /// `n = 0 ..= max_col + 1`.
    pub fn compose_raising_derivative(
        r: &RaisingOperator<F>,
        d: &UmbralDerivative<F>,
    ) -> Result<Self> {
        let mu = d.prefix(r.max_col() + 2)?;
        let mut cols = vec![Polynomial::zero()];
        for n in 1..=r.max_col() + 1 {
            cols.push(r.column(n - 1).scale(&mu[n]));
        }
        Ok(MonomialOperator { cols })
    }

    /// `Lt = D R`, with columns `Lt x^n = D (R x^n)` for `n = 0 ..= max_col`.
    pub fn compose_derivative_raising(
        d: &UmbralDerivative<F>,
        r: &RaisingOperator<F>,
    ) -> Result<Self> {
        let cols = (0..=r.max_col())
            .map(|n| d.apply(r.column(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MonomialOperator { cols })
    }

    pub fn max_col(&self) -> usize {
        self.cols.len() - 1
    }

    pub fn column(&self, n: usize) -> &Polynomial<F> {
        &self.cols[n]
    }

    pub fn apply(&self, p: &Polynomial<F>) -> Result<Polynomial<F>> {
        let Some(deg) = p.degree() else {
            return Ok(Polynomial::zero());
        };
        if deg >= self.cols.len() {
            return Err(Error::InsufficientData {
                what: "operator columns",
                needed: deg + 1,
                available: self.cols.len(),
            });
        }
        let mut acc = Polynomial::zero();
        for (m, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.cols[m].scale(c));
            }
        }
        Ok(acc)
    }
}

/// `<sigma, f (op h)> = <sigma, h (op f)>`: the symmetry that characterizes
/// the composition `R D` on classical pairs.
pub fn symmetry_check<F: Field>(
    g: &MomentSequence<F>,
    op: &MonomialOperator<F>,
    f: &Polynomial<F>,
    h: &Polynomial<F>,
    tol: &Tolerance,
) -> Result<bool> {
    let left = g.bilinear(f, &op.apply(h)?)?;
    let right = g.bilinear(h, &op.apply(f)?)?;
    Ok(left.approx_eq(&right, tol))
}

/// Eigen data for the two-diagonal case: when every column of `R` involves
/// only `x^{m+1}` and `x^m`, the composition `L = R D` acts as
/// `L x^n = lambda_n x^n + tau_n x^{n-1}` with `lambda_n = mu_n nu_n` and
/// `tau_n = mu_n rho_{n-1}`.
#[derive(Clone, Debug)]
pub struct TwoDiagonalData<F: Field> {
    /// `lambda_0 ..= lambda_{max_col + 1}`.
    pub lambda: Vec<F>,
    /// `tau_0 = 0`, `tau_n = mu_n rho_{n-1}`.
    pub tau: Vec<F>,
}

/// Returns the two-diagonal eigen data when `R` is two-diagonal, `None`
/// otherwise. Presence of a coefficient is judged as in
/// [`RaisingOperator::band`].
pub fn two_diagonal_data<F: Field>(
    d: &UmbralDerivative<F>,
    r: &RaisingOperator<F>,
    tol: &Tolerance,
) -> Result<Option<TwoDiagonalData<F>>> {
    for m in 0..=r.max_col() {
        let col = r.column(m);
        let col_scale = col.coeffs().iter().map(|c| c.magnitude()).fold(0.0f64, f64::max);
        for (s, c) in col.coeffs().iter().enumerate() {
            let present = if F::EXACT {
                !c.is_zero()
            } else {
                c.magnitude() > tol.abs_eps + tol.rel_eps * col_scale
            };
            if present && s + 1 < m + 1 {
                return Ok(None);
            }
        }
    }
    let mu = d.prefix(r.max_col() + 2)?;
    let mut lambda = vec![F::zero()];
    let mut tau = vec![F::zero()];
    for n in 1..=r.max_col() + 1 {
        lambda.push(mu[n].mul(&r.column(n - 1).coeff(n)));
        tau.push(mu[n].mul(&r.rho(n - 1)));
    }
    Ok(Some(TwoDiagonalData { lambda, tau }))
}

/// Residual report for the defining moment identities.
#[derive(Clone, Debug, Serialize)]
pub struct MainSystemReport {
    pub pass: bool,
    /// Largest residual magnitude over the grid.
    pub max_residual: f64,
    /// Cell `(m, n)` of the worst failing residual, when any cell fails.
    pub failing_cell: Option<(usize, usize)>,
}

/// Check `mu_n gt_{n+m-1} = sum_s R_{m,s} g_{n+s}` on the full grid
/// `0 <= m, n <= n_max`. The `n = 0` row holds trivially since `mu_0 = 0`
/// and the right side telescopes to zero exactly when `tau` was recovered
/// from the derived polynomials.
pub fn verify_main_system<F: Field>(
    g: &MomentSequence<F>,
    tau: &MomentSequence<F>,
    d: &UmbralDerivative<F>,
    r: &RaisingOperator<F>,
    n_max: usize,
    tol: &Tolerance,
) -> Result<MainSystemReport> {
    if r.max_col() < n_max {
        return Err(Error::InsufficientData {
            what: "raising operator columns",
            needed: n_max + 1,
            available: r.max_col() + 1,
        });
    }
    let mu = d.prefix(n_max + 1)?;
    let gv = g.prefix(2 * n_max + 2)?;
    let gt = tau.prefix(2 * n_max)?;

    let side = n_max + 1;
    let cells = par::map_indexed(side * side, |idx| {
        let m = idx / side;
        let n = idx % side;
        let lhs = if n == 0 { F::zero() } else { mu[n].mul(&gt[n + m - 1]) };
        let col = r.column(m);
        let mut rhs = F::zero();
        for (s, c) in col.coeffs().iter().enumerate() {
            if !c.is_zero() {
                rhs = rhs.add(&c.mul(&gv[n + s]));
            }
        }
        let residual = lhs.sub(&rhs);
        let ok = if F::EXACT {
            residual.is_zero()
        } else {
            tol.admits(lhs.magnitude(), rhs.magnitude(), residual.magnitude())
        };
        (m, n, ok, residual.magnitude())
    });

    let mut pass = true;
    let mut max_residual = 0.0f64;
    let mut failing: Option<(usize, usize, f64)> = None;
    for (m, n, ok, res) in cells {
        max_residual = max_residual.max(res);
        if !ok {
            pass = false;
            if failing.is_none_or(|w| res > w.2) {
                failing = Some((m, n, res));
            }
        }
    }
    Ok(MainSystemReport {
        pass,
        max_residual,
        failing_cell: failing.map(|(m, n, _)| (m, n)),
    })
}

/// Eigen verification: `L P_n = lambda_n P_n` and `Lt Q_n = lambda_{n+1} Q_n`
/// for `L = R D`, `Lt = D R`, `lambda_n = mu_n nu_n`.
#[derive(Clone, Debug)]
pub struct EigenReport<F: Field> {
    /// `lambda_0 ..= lambda_{max_col + 1}`.
    pub lambda: Vec<F>,
    pub p_pass: bool,
    pub q_pass: bool,
    /// Largest coefficient distance seen across both families.
    pub max_residual: f64,
}

pub fn eigen_check<F: Field>(
    p_sys: &MonicPolySystem<F>,
    q_polys: &[Polynomial<F>],
    d: &UmbralDerivative<F>,
    r: &RaisingOperator<F>,
    tol: &Tolerance,
) -> Result<EigenReport<F>> {
    let max_col = r.max_col();
    let mu = d.prefix(max_col + 2)?;
    let mut lambda = vec![F::zero()];
    for n in 1..=max_col + 1 {
        lambda.push(mu[n].mul(r.nu(n)));
    }

    let l = MonomialOperator::compose_raising_derivative(r, d)?;
    let lt = MonomialOperator::compose_derivative_raising(d, r)?;

    let mut max_residual = 0.0f64;
    let mut p_pass = true;
    for n in 0..=p_sys.max_degree().min(max_col + 1) {
        let got = l.apply(p_sys.poly(n))?;
        let want = p_sys.poly(n).scale(&lambda[n]);
        max_residual = max_residual.max(got.max_coeff_distance(&want));
        if !got.approx_eq(&want, tol) {
            p_pass = false;
        }
    }
    let mut q_pass = true;
    for (n, q) in q_polys.iter().enumerate().take(max_col + 1) {
        let got = lt.apply(q)?;
        let want = q.scale(&lambda[n + 1]);
        max_residual = max_residual.max(got.max_coeff_distance(&want));
        if !got.approx_eq(&want, tol) {
            q_pass = false;
        }
    }
    Ok(EigenReport { lambda, p_pass, q_pass, max_residual })
}

/// Why a classicality check came out negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureKind {
    /// The derived polynomials are not orthogonal for the recovered
    /// functional.
    DerivedGram,
    /// The recovered functional is degenerate: a derived squared norm
    /// vanished at this index (1-based Hankel size).
    DerivedDegenerate { index: usize },
    /// Orthogonality held but a defining moment identity failed; carries the
    /// worst grid cell `(m, n)`.
    MainSystem { cell: (usize, usize) },
}

/// Everything produced while deciding classicality at a given depth.
#[derive(Debug)]
pub struct ClassicalityReport<F: Field> {
    pub verdict: bool,
    pub depth: usize,
    pub failure: Option<FailureKind>,
    /// Source system, built to degree `2 * depth + 1`.
    pub p_sys: MonicPolySystem<F>,
    /// Derived polynomials `Q_0 ..= Q_{2 depth}`.
    pub q_polys: Vec<Polynomial<F>>,
    /// Normalized moments of the recovered functional.
    pub tau: MomentSequence<F>,
    /// Derived system with norms, present once orthogonality holds.
    pub q_sys: Option<MonicPolySystem<F>>,
    pub raising: Option<RaisingOperator<F>>,
    pub gram: GramReport<F>,
    pub main: Option<MainSystemReport>,
    pub eigen: Option<EigenReport<F>>,
    pub band: Option<BandWidth>,
}

/// Decide whether `(g, D)` is classical, checking every condition up to the
/// given depth: derived orthogonality for `n, m <= depth` and the moment
/// identities on the `(depth + 1)^2` grid.
///
/// Requires moments `g_0 .. g_{4 depth + 2}`. Degeneracy of `g` itself is an
/// error (the source system does not exist); degeneracy or plain failure of
/// the derived side is a negative verdict with the reason recorded.
pub fn is_umbral_classical<F: Field>(
    g: &MomentSequence<F>,
    d: &UmbralDerivative<F>,
    depth: usize,
    tol: &Tolerance,
) -> Result<ClassicalityReport<F>> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let n = depth;
    let p_sys = MonicPolySystem::from_moments(g, 2 * n + 1, tol)?;
    let q_polys = d.derived_polys(p_sys.polys(), 2 * n)?;
    let tau = MomentSequence::from_annihilated_polys(&q_polys[1..])?;

    let gram = gram_check(&q_polys, &tau, n, tol)?;
    if !gram.pass {
        let failure = match gram.zero_diag {
            Some(idx) => FailureKind::DerivedDegenerate { index: idx + 1 },
            None => FailureKind::DerivedGram,
        };
        return Ok(ClassicalityReport {
            verdict: false,
            depth: n,
            failure: Some(failure),
            p_sys,
            q_polys,
            tau,
            q_sys: None,
            raising: None,
            gram,
            main: None,
            eigen: None,
            band: None,
        });
    }

    let gt = tau.prefix(2 * n + 1)?;
    let q_sys = MonicPolySystem::from_polys_and_moments(q_polys[..=n].to_vec(), &gt)?;
    let raising = RaisingOperator::from_systems(&p_sys, &q_sys, d, n)?;
    let main = verify_main_system(g, &tau, d, &raising, n, tol)?;
    let eigen = eigen_check(&p_sys, &q_polys, d, &raising, tol)?;
    let band = raising.band(tol);

    let verdict = main.pass;
    let failure = (!main.pass)
        .then(|| FailureKind::MainSystem { cell: main.failing_cell.unwrap_or((0, 0)) });
    Ok(ClassicalityReport {
        verdict,
        depth: n,
        failure,
        p_sys,
        q_polys,
        tau,
        q_sys: Some(q_sys),
        raising: Some(raising),
        gram,
        main: Some(main),
        eigen: Some(eigen),
        band: Some(band),
    })
}
