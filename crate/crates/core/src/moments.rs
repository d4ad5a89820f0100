//! Moment sequences of linear functionals and their Hankel data.
//!
//! A [`MomentSequence`] represents the moments `g_n = <sigma, x^n>` of a
//! functional. Sequences are stored normalized to `g_0 = 1` (the original
//! leading moment is kept as a separate scale factor) and extend lazily: a
//! generation rule fills the cache on demand, so recurrence-driven families
//! can be consumed to any depth. Computed prefixes are immutable; the cache
//! is internally synchronized and sequences are cheap to clone and share.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::par;
use crate::poly::Polynomial;
use crate::scalar::{Field, Tolerance};

type Rule<F> = Box<dyn Fn(usize, &[F]) -> Result<F> + Send + Sync>;

struct Inner<F: Field> {
    /// Produces the normalized moment with the given index from the
    /// normalized prefix computed so far (called only with index >= 1).
    rule: Rule<F>,
    cache: Mutex<Vec<F>>,
    scale: F,
}

/// Lazily extended, normalized moment sequence. `get(0)` is always one.
pub struct MomentSequence<F: Field> {
    inner: Arc<Inner<F>>,
}

impl<F: Field> Clone for MomentSequence<F> {
    fn clone(&self) -> Self {
        MomentSequence { inner: Arc::clone(&self.inner) }
    }
}

impl<F: Field> fmt::Debug for MomentSequence<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cached = self.inner.cache.lock().expect("moment cache poisoned").len();
        write!(f, "MomentSequence(scale {}, {} cached)", self.inner.scale, cached)
    }
}

impl<F: Field> MomentSequence<F> {
    fn from_parts(scale: F, initial: Vec<F>, rule: Rule<F>) -> Self {
        debug_assert!(!initial.is_empty() && initial[0] == F::one());
        MomentSequence {
            inner: Arc::new(Inner { rule, cache: Mutex::new(initial), scale }),
        }
    }

    /// Sequence from a closed-form moment function. `f(0)` must be nonzero;
    /// it becomes the scale and every stored moment is divided by it.
    pub fn from_fn<G>(f: G) -> Result<Self>
    where
        G: Fn(usize) -> Result<F> + Send + Sync + 'static,
    {
        let scale = f(0)?;
        if scale.is_zero() {
            return Err(Error::DegenerateFunctional { index: 1 });
        }
        let s = scale.clone();
        let rule: Rule<F> = Box::new(move |n, _| f(n)?.div(&s));
        Ok(MomentSequence::from_parts(scale, vec![F::one()], rule))
    }

    /// Finite sequence from explicit values (file input). Requests past the
    /// end fail with an insufficient-moments error.
    pub fn from_values(values: Vec<F>) -> Result<Self> {
        let Some(first) = values.first().cloned() else {
            return Err(Error::InsufficientData { what: "moments", needed: 1, available: 0 });
        };
        if first.is_zero() {
            return Err(Error::DegenerateFunctional { index: 1 });
        }
        let available = values.len();
        let normalized: Vec<F> =
            values.iter().map(|v| v.div(&first)).collect::<Result<_>>()?;
        let rule: Rule<F> = Box::new(move |n, _| {
            Err(Error::InsufficientData { what: "moments", needed: n + 1, available })
        });
        Ok(MomentSequence::from_parts(first, normalized, rule))
    }

    /// Sequence driven by a three-term moment recurrence
    ///
    /// ```text
    /// c_plus(n) g_{n+1} + c_zero(n) g_n + c_minus(n) g_{n-1} = 0,   n >= 0
    /// ```
    ///
    /// with `g_{-1} = 0`. The recurrence is linear homogeneous, so it holds
    /// unchanged for the normalized sequence; `g0` only sets the scale.
    /// Extension fails at the first `n` with `c_plus(n) = 0`.
    pub fn from_recurrence<G>(coeffs: G, g0: F) -> Result<Self>
    where
        G: Fn(usize) -> [F; 3] + Send + Sync + 'static,
    {
        if g0.is_zero() {
            return Err(Error::DegenerateFunctional { index: 1 });
        }
        let rule: Rule<F> = Box::new(move |k, prefix| {
            let n = k - 1;
            let [c_plus, c_zero, c_minus] = coeffs(n);
            if c_plus.is_zero() {
                return Err(Error::RecurrenceBreakdown { n });
            }
            let mut acc = c_zero.mul(&prefix[n]);
            if n >= 1 {
                acc = acc.add(&c_minus.mul(&prefix[n - 1]));
            }
            acc.neg().div(&c_plus)
        });
        Ok(MomentSequence::from_parts(g0, vec![F::one()], rule))
    }

    /// Recover the moments of a functional from monic polynomials it
    /// annihilates: given `q[k]` monic of degree `k+1` with
    /// `<tau, q[k]> = 0`, back-substitution yields `gt_0 = 1, gt_1, ...`
    /// up to index `q.len()`.
    pub fn from_annihilated_polys(q: &[Polynomial<F>]) -> Result<Self> {
        let mut moments = vec![F::one()];
        for (i, poly) in q.iter().enumerate() {
            let deg = i + 1;
            if poly.degree() != Some(deg) || !poly.is_monic() {
                return Err(Error::InvalidParameter(format!(
                    "expected monic polynomial of degree {deg} at position {i}"
                )));
            }
            let mut acc = F::zero();
            for (s, m) in moments.iter().enumerate() {
                acc = acc.add(&poly.coeff(s).mul(m));
            }
            moments.push(acc.neg());
        }
        let len = moments.len();
        let rule: Rule<F> = Box::new(move |n, _| {
            Err(Error::InsufficientData { what: "moments", needed: n + 1, available: len })
        });
        Ok(MomentSequence::from_parts(F::one(), moments, rule))
    }

    /// The original `g_0` factored out by normalization.
    pub fn scale(&self) -> &F {
        &self.inner.scale
    }

    /// Normalized moment `g_n / g_0`.
    pub fn get(&self, n: usize) -> Result<F> {
        let mut cache = self.inner.cache.lock().expect("moment cache poisoned");
        while cache.len() <= n {
            // A finite source reports how far this request reached, not how
            // far the cache had gotten.
            let next = (self.inner.rule)(cache.len(), &cache).map_err(|e| match e {
                Error::InsufficientData { what, available, .. } => {
                    Error::InsufficientData { what, needed: n + 1, available }
                }
                other => other,
            })?;
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    /// Normalized moments `g_0 .. g_{len-1}`.
    pub fn prefix(&self, len: usize) -> Result<Vec<F>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        self.get(len - 1)?;
        let cache = self.inner.cache.lock().expect("moment cache poisoned");
        Ok(cache[..len].to_vec())
    }

    /// `<sigma, f h> = sum f_i h_j g_{i+j}` over the normalized moments.
    pub fn bilinear(&self, f: &Polynomial<F>, h: &Polynomial<F>) -> Result<F> {
        let product = f.mul(h);
        let Some(deg) = product.degree() else {
            return Ok(F::zero());
        };
        let g = self.prefix(deg + 1)?;
        let mut acc = F::zero();
        for (k, c) in product.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul(&g[k]));
            }
        }
        Ok(acc)
    }

    /// Hankel determinants `delta_n = det [g_{i+k}]_{i,k < n}` for
    /// `n = 1 ..= n_max`, plus the first vanishing index.
    ///
    /// Float-mode vanishing is judged against `abs_eps` scaled by the
    /// Hadamard bound of the matrix (product of row norms), so the decision
    /// is invariant under rescaling the moments.
    pub fn hankel_determinants(&self, n_max: usize, tol: &Tolerance) -> Result<HankelReport<F>> {
        let g = self.prefix((2 * n_max).saturating_sub(1).max(1))?;
        let dets = par::map_indexed(n_max, |idx| {
            let n = idx + 1;
            let rows: Vec<Vec<F>> =
                (0..n).map(|i| (0..n).map(|k| g[i + k].clone()).collect()).collect();
            let scale = hadamard_bound(&rows);
            (F::det(rows), scale)
        });
        let mut first_zero = None;
        let mut out = Vec::with_capacity(n_max);
        for (idx, (det, scale)) in dets.into_iter().enumerate() {
            let zero = if F::EXACT {
                det.is_zero()
            } else {
                det.magnitude() <= tol.abs_eps * scale.max(1.0)
            };
            if zero && first_zero.is_none() {
                first_zero = Some(idx + 1);
            }
            out.push(det);
        }
        Ok(HankelReport { dets: out, first_zero })
    }
}

fn hadamard_bound<F: Field>(rows: &[Vec<F>]) -> f64 {
    rows.iter()
        .map(|row| row.iter().map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt())
        .product()
}

/// Hankel determinants `delta_1 .. delta_{n_max}` and the first index at
/// which one vanishes (meaning the functional is degenerate at that size).
#[derive(Clone, Debug)]
pub struct HankelReport<F: Field> {
    dets: Vec<F>,
    first_zero: Option<usize>,
}

impl<F: Field> HankelReport<F> {
    /// `delta_n`, `n` counted from 1.
    pub fn det(&self, n: usize) -> &F {
        &self.dets[n - 1]
    }

    pub fn dets(&self) -> &[F] {
        &self.dets
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.first_zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn reciprocal_moments() -> MomentSequence<BigRational> {
        // g_n = 1/(n+1), the moments of the uniform weight on [0, 1].
        MomentSequence::from_fn(|n| Ok(r(1, n as i64 + 1))).unwrap()
    }

    #[test]
    fn hankel_determinants_of_reciprocals() {
        let g = reciprocal_moments();
        let tol = Tolerance::default();
        let report = g.hankel_determinants(3, &tol).unwrap();
        assert_eq!(report.det(1), &r(1, 1));
        assert_eq!(report.det(2), &r(1, 12));
        assert_eq!(report.det(3), &r(1, 2160));
        assert_eq!(report.first_zero(), None);
    }

    #[test]
    fn bilinear_centered_linear() {
        let g = reciprocal_moments();
        let f = Polynomial::from_coeffs(vec![r(-1, 2), r(1, 1)]);
        assert_eq!(g.bilinear(&f, &f).unwrap(), r(1, 12));
    }

    #[test]
    fn recurrence_reproduces_reciprocals() {
        // (n + 2) g_{n+1} + (-n - 1) g_n = 0 drives g_n = 1/(n+1).
        let g = MomentSequence::from_recurrence(
            |n| {
                let n = n as i64;
                [r(n + 2, 1), r(-n - 1, 1), r(0, 1)]
            },
            r(1, 1),
        )
        .unwrap();
        assert_eq!(g.get(1).unwrap(), r(1, 2));
        assert_eq!(g.get(2).unwrap(), r(1, 3));
        let want = reciprocal_moments().prefix(25).unwrap();
        assert_eq!(g.prefix(25).unwrap(), want);
    }

    #[test]
    fn geometric_q_recurrence_values() {
        // g_{n+1} + (q^n/2 - 1) g_n = 0 at q = 1/2.
        let g = MomentSequence::from_recurrence(
            |n| {
                let qn = r(1, 2).powi(n as i64).unwrap();
                [r(1, 1), qn.mul(&r(1, 2)).sub(&r(1, 1)), r(0, 1)]
            },
            r(1, 1),
        )
        .unwrap();
        assert_eq!(g.get(1).unwrap(), r(1, 2));
        assert_eq!(g.get(2).unwrap(), r(3, 8));
    }

    #[test]
    fn recurrence_breakdown_is_reported() {
        // Leading coefficient (2 - n) dies at n = 2.
        let g = MomentSequence::from_recurrence(
            |n| [r(2 - n as i64, 1), r(1, 1), r(0, 1)],
            r(1, 1),
        )
        .unwrap();
        assert!(g.get(2).is_ok());
        assert!(matches!(g.get(3), Err(Error::RecurrenceBreakdown { n: 2 })));
    }

    #[test]
    fn moments_recovered_from_annihilated_polys() {
        let q1 = Polynomial::from_coeffs(vec![r(-1, 2), r(1, 1)]);
        let q2 = Polynomial::from_coeffs(vec![r(3, 20), r(-1, 1), r(1, 1)]);
        let tau = MomentSequence::from_annihilated_polys(&[q1, q2]).unwrap();
        assert_eq!(tau.get(1).unwrap(), r(1, 2));
        assert_eq!(tau.get(2).unwrap(), r(7, 20));
    }

    #[test]
    fn values_are_normalized_and_bounded() {
        let g = MomentSequence::from_values(vec![r(2, 1), r(1, 1)]).unwrap();
        assert_eq!(g.scale(), &r(2, 1));
        assert_eq!(g.get(1).unwrap(), r(1, 2));
        assert!(matches!(
            g.get(5),
            Err(Error::InsufficientData { what: "moments", needed: 6, available: 2 })
        ));
    }

    #[test]
    fn zero_leading_moment_rejected() {
        assert!(matches!(
            MomentSequence::from_values(vec![r(0, 1), r(1, 1)]),
            Err(Error::DegenerateFunctional { index: 1 })
        ));
    }

    proptest! {
        /// Geometric rescaling g_n -> p^n g_n multiplies delta_n by
        /// p^{n(n-1)}.
        #[test]
        fn hankel_rescaling_law(
            num in 1i64..6, den in 1i64..6,
            parts in proptest::collection::vec((-12i64..12, 1i64..9), 5..=5),
        ) {
            let tol = Tolerance::default();
            let base: Vec<BigRational> =
                std::iter::once(r(1, 1)).chain(parts.iter().map(|&(n, d)| r(n, d))).collect();
            let p = r(num, den);
            let scaled: Vec<BigRational> = base
                .iter()
                .enumerate()
                .map(|(n, v)| v.mul(&p.powi(n as i64).unwrap()))
                .collect();
            let g = MomentSequence::from_values(base).unwrap();
            let gp = MomentSequence::from_values(scaled).unwrap();
            let d = g.hankel_determinants(3, &tol).unwrap();
            let dp = gp.hankel_determinants(3, &tol).unwrap();
            for n in 1..=3usize {
                let factor = p.powi((n * (n - 1)) as i64).unwrap();
                prop_assert_eq!(dp.det(n), &d.det(n).mul(&factor));
            }
        }
    }
}
