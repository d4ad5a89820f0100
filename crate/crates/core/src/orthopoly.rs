//! Monic orthogonal polynomial systems.
//!
//! A system holds the monic polynomials `P_0 .. P_N`, their squared norms
//! `h_n = <sigma, P_n^2>`, and the three-term recurrence data
//!
//! ```text
//! P_{n+1} = (x - b_n) P_n - u_n P_{n-1},    u_n = h_n / h_{n-1} != 0.
//! ```
//!
//! Construction is either from moments (one Hankel solve per degree; a
//! singular solve names the first vanishing Hankel determinant) or directly
//! from recurrence coefficients. All norms here assume the underlying moments
//! are normalized to `g_0 = 1`, which [`MomentSequence`] guarantees.

use crate::error::{Error, Result};
use crate::linalg;
use crate::moments::MomentSequence;
use crate::par;
use crate::poly::Polynomial;
use crate::scalar::{Field, Tolerance};

#[derive(Clone, Debug)]
pub struct MonicPolySystem<F: Field> {
    polys: Vec<Polynomial<F>>,
    /// Squared norms `h_0 .. h_K` for some `K <= max_degree` (recurrence
    /// input of length `N` determines `h` only up to `N - 1`).
    h: Vec<F>,
    /// `b_0 .. b_{N-1}`.
    b: Vec<F>,
    /// `u_1 .. u_{N-1}`, stored at offset one.
    u: Vec<F>,
}

impl<F: Field> MonicPolySystem<F> {
    /// Build `P_0 .. P_max_degree` for the functional behind `g`.
    ///
    /// Requires moments up to index `2 * max_degree` and every leading
    /// Hankel determinant up to size `max_degree + 1` nonzero. Degeneracy
    /// surfaces as a singular solve at the size of the first vanishing
    /// determinant. Raw determinant magnitudes are not a usable float
    /// criterion: families with slowly varying moments have `Delta_k`
    /// falling geometrically in `k` while every solve stays well
    /// conditioned, so only pivot collapse counts.
    pub fn from_moments(
        g: &MomentSequence<F>,
        max_degree: usize,
        tol: &Tolerance,
    ) -> Result<Self> {
        let n = max_degree;
        let gv = g.prefix(2 * n + 1)?;

        let solved: Vec<Result<Polynomial<F>>> = par::map_indexed(n + 1, |deg| {
            if deg == 0 {
                return Ok(Polynomial::one());
            }
            let rows: Vec<Vec<F>> =
                (0..deg).map(|k| (0..deg).map(|s| gv[s + k].clone()).collect()).collect();
            let rhs: Vec<F> = (0..deg).map(|k| gv[deg + k].neg()).collect();
            let mut coeffs = linalg::solve(rows, rhs, tol)?;
            coeffs.push(F::one());
            Ok(Polynomial::from_coeffs(coeffs))
        });
        let mut polys = Vec::with_capacity(n + 1);
        for (deg, item) in solved.into_iter().enumerate() {
            match item {
                Ok(p) => polys.push(p),
                Err(Error::SingularSystem { .. }) => {
                    return Err(Error::DegenerateFunctional { index: deg });
                }
                Err(e) => return Err(e),
            }
        }

        Self::from_polys_and_moments(polys, &gv)
    }

    /// Wrap externally built monic polynomials (ascending degrees `0..=N`)
    /// and compute `h`, `b`, `u` against the given normalized moment prefix.
    /// Orthogonality itself is not verified here; see [`gram_check`].
    pub(crate) fn from_polys_and_moments(polys: Vec<Polynomial<F>>, gv: &[F]) -> Result<Self> {
        for (deg, p) in polys.iter().enumerate() {
            if p.degree() != Some(deg) || !p.is_monic() {
                return Err(Error::InvalidParameter(format!(
                    "system polynomial at degree {deg} is not monic of that degree"
                )));
            }
        }
        let n = polys.len() - 1;
        let h: Vec<F> = par::try_map_indexed(n + 1, |k| {
            bilinear_in(gv, &polys[k], &polys[k])
        })?;
        for (k, hk) in h.iter().enumerate() {
            if hk.is_zero() {
                return Err(Error::DegenerateFunctional { index: k + 1 });
            }
        }
        let x = Polynomial::monomial(1);
        let b: Vec<F> = (0..n)
            .map(|k| bilinear_in(gv, &x.mul(&polys[k]), &polys[k])?.div(&h[k]))
            .collect::<Result<_>>()?;
        let u: Vec<F> =
            (1..n).map(|k| h[k].div(&h[k - 1])).collect::<Result<_>>()?;
        Ok(MonicPolySystem { polys, h, b, u })
    }

    /// Build `P_0 .. P_N` from recurrence coefficients, `N = b.len()`.
    /// `u` supplies `u_1 .. u_{N-1}` and must have length `N - 1`; every
    /// `u_n` must be nonzero for the system to come from a nondegenerate
    /// functional.
    pub fn from_recurrence(b: &[F], u: &[F]) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::InvalidParameter("need at least b_0".into()));
        }
        if u.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "recurrence lengths mismatch: {} b's need {} u's, got {}",
                n,
                n - 1,
                u.len()
            )));
        }
        for (k, uk) in u.iter().enumerate() {
            if uk.is_zero() {
                return Err(Error::DegenerateFunctional { index: k + 2 });
            }
        }

        let mut polys = Vec::with_capacity(n + 1);
        polys.push(Polynomial::one());
        let x = Polynomial::monomial(1);
        for k in 0..n {
            let shifted = x.sub(&Polynomial::from_coeffs(vec![b[k].clone()]));
            let mut next = shifted.mul(&polys[k]);
            if k >= 1 {
                next = next.sub(&polys[k - 1].scale(&u[k - 1]));
            }
            polys.push(next);
        }

        // h_0 = g_0 = 1 under the normalization convention.
        let mut h = vec![F::one()];
        for uk in u {
            let prev = h.last().expect("nonempty").clone();
            h.push(prev.mul(uk));
        }
        Ok(MonicPolySystem { polys, h, b: b.to_vec(), u: u.to_vec() })
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &Polynomial<F> {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[Polynomial<F>] {
        &self.polys
    }

    /// `h_n`; available at least up to `max_degree - 1`, see the field note.
    pub fn h(&self, n: usize) -> &F {
        &self.h[n]
    }

    pub fn norms(&self) -> &[F] {
        &self.h
    }

    pub fn b(&self, n: usize) -> &F {
        &self.b[n]
    }

    pub fn recurrence_b(&self) -> &[F] {
        &self.b
    }

    /// `u_n` for `n >= 1`.
    pub fn u(&self, n: usize) -> &F {
        assert!(n >= 1, "u is indexed from 1");
        &self.u[n - 1]
    }

    pub fn recurrence_u(&self) -> &[F] {
        &self.u
    }
}

/// `sum f_i h_j g[i + j]` against an explicit normalized moment prefix.
pub(crate) fn bilinear_in<F: Field>(
    gv: &[F],
    f: &Polynomial<F>,
    h: &Polynomial<F>,
) -> Result<F> {
    let product = f.mul(h);
    let Some(deg) = product.degree() else {
        return Ok(F::zero());
    };
    if deg >= gv.len() {
        return Err(Error::InsufficientData {
            what: "moments",
            needed: deg + 1,
            available: gv.len(),
        });
    }
    let mut acc = F::zero();
    for (k, c) in product.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&c.mul(&gv[k]));
        }
    }
    Ok(acc)
}

/// Result of checking a polynomial family against a functional's Gram matrix
/// `G_{nm} = <sigma, P_n P_m>`.
#[derive(Clone, Debug)]
pub struct GramReport<F: Field> {
    /// True when every off-diagonal entry vanishes (mode-appropriately) and
    /// every diagonal entry is acceptably far from zero.
    pub pass: bool,
    /// Off-diagonal cell with the largest magnitude relative to its
    /// diagonal scale, when any entry is nonzero.
    pub worst_off_diag: Option<(usize, usize, F)>,
    /// First diagonal index whose entry collapsed to zero, if any.
    pub zero_diag: Option<usize>,
    /// The diagonal `<sigma, P_n^2>`, i.e. the squared norms.
    pub diag: Vec<F>,
}

/// Full Gram check of `polys[0..=n_max]` against the moments `g`.
///
/// Exact mode demands literal zeros off the diagonal. Float mode compares
/// each off-diagonal entry against the tolerance scaled by the larger of the
/// two adjacent diagonal entries, and flags a diagonal entry as collapsed
/// when it is negligible relative to its predecessor.
pub fn gram_check<F: Field>(
    polys: &[Polynomial<F>],
    g: &MomentSequence<F>,
    n_max: usize,
    tol: &Tolerance,
) -> Result<GramReport<F>> {
    assert!(n_max < polys.len());
    let gv = g.prefix(2 * n_max + 1)?;

    let pairs: Vec<(usize, usize)> =
        (0..=n_max).flat_map(|n| (n..=n_max).map(move |m| (n, m))).collect();
    let entries = par::try_map_indexed(pairs.len(), |idx| {
        let (n, m) = pairs[idx];
        bilinear_in(&gv, &polys[n], &polys[m])
    })?;

    let mut diag = vec![F::zero(); n_max + 1];
    for (&(n, m), value) in pairs.iter().zip(&entries) {
        if n == m {
            diag[n] = value.clone();
        }
    }

    let mut zero_diag = None;
    for n in 0..=n_max {
        let reference = if n == 0 { F::one() } else { diag[n - 1].clone() };
        let collapsed = if F::EXACT {
            diag[n].is_zero()
        } else {
            diag[n].magnitude() <= tol.abs_eps * reference.magnitude().max(1e-300)
        };
        if collapsed {
            zero_diag = Some(n);
            break;
        }
    }

    let mut worst: Option<(usize, usize, F, f64)> = None;
    let mut off_diag_ok = true;
    for (&(n, m), value) in pairs.iter().zip(&entries) {
        if n == m {
            continue;
        }
        let scale = diag[n].magnitude().max(diag[m].magnitude());
        let ok = if F::EXACT {
            value.is_zero()
        } else {
            value.magnitude() <= tol.abs_eps + tol.rel_eps * scale
        };
        if !ok {
            off_diag_ok = false;
        }
        let ratio = value.magnitude() / scale.max(1e-300);
        if !value.is_zero() && worst.as_ref().is_none_or(|w| ratio > w.3) {
            worst = Some((n, m, value.clone(), ratio));
        }
    }

    Ok(GramReport {
        pass: off_diag_ok && zero_diag.is_none(),
        worst_off_diag: worst.map(|(n, m, v, _)| (n, m, v)),
        zero_diag,
        diag,
    })
}
