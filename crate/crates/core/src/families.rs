//! Ready-made moment functionals and derivatives known to form classical
//! pairs (or to be good counterexamples), parameterized over the field.
//!
//! Each generator returns a [`FamilyInstance`] bundling the normalized
//! moments, the matching derivative, and, where the family provides one, a
//! closed form for the derived functional's moments. These are the standard
//! entry points for the CLI and for the verification test batteries.

use crate::error::{Error, Result};
use crate::moments::MomentSequence;
use crate::scalar::Field;
use crate::umbral::UmbralDerivative;

/// A moment functional paired with a generalized derivative.
#[derive(Debug)]
pub struct FamilyInstance<F: Field> {
    pub label: &'static str,
    pub moments: MomentSequence<F>,
    pub derivative: UmbralDerivative<F>,
    /// Normalized moments of the derived functional, for families with a
    /// closed form.
    pub derived_moments: Option<MomentSequence<F>>,
}

/// Moment recurrence data for the ordinary-derivative families:
///
/// ```text
/// (xi[0] n + eta[0]) g_{n+1} + (xi[1] n + eta[1]) g_n + xi[2] n g_{n-1} = 0.
/// ```
#[derive(Clone, Debug)]
pub struct ClassicalParams<F: Field> {
    /// Slope coefficients in `n`, attached to `g_{n+1}`, `g_n`, `g_{n-1}`.
    pub xi: [F; 3],
    /// Constant parts attached to `g_{n+1}` and `g_n`.
    pub eta: [F; 2],
}

/// Moment recurrence data for the q-derivative families:
///
/// ```text
/// (xi[0] + eta[0] q^n) g_{n+1} + (xi[1] + eta[1] q^n) g_n
///     + xi[2] (1 - q^n) g_{n-1} = 0.
/// ```
#[derive(Clone, Debug)]
pub struct QClassicalParams<F: Field> {
    pub q: F,
    pub xi: [F; 3],
    pub eta: [F; 2],
}

/// Parameters of the rational pair `g_n = (alpha/beta) (n+beta)/(n+alpha)`
/// with `mu_n = n/(n+alpha)`, the algebraic limit of the sigma-quotient
/// family.
#[derive(Clone, Debug)]
pub struct KrallParams<F: Field> {
    pub alpha: F,
    pub beta: F,
}

/// `mu_n = n`, the ordinary derivative.
pub fn classical_derivative<F: Field>() -> UmbralDerivative<F> {
    UmbralDerivative::from_fn(|n| Ok(F::from_i64(n as i64)))
        .expect("mu_0 = 0 by construction")
}

/// `mu_n = 1 + q + ... + q^{n-1}`; at `q = 1` this is the ordinary
/// derivative.
pub fn q_derivative<F: Field>(q: &F) -> UmbralDerivative<F> {
    let q = q.clone();
    UmbralDerivative::from_fn(move |n| {
        let mut acc = F::zero();
        let mut power = F::one();
        for _ in 0..n {
            acc = acc.add(&power);
            power = power.mul(&q);
        }
        Ok(acc)
    })
    .expect("mu_0 = 0 by construction")
}

/// `mu_n = n / (n + alpha)`. Hits a pole when `alpha` is a nonpositive
/// integer; the failure surfaces as a division error at that index.
pub fn krall_derivative<F: Field>(alpha: &F) -> UmbralDerivative<F> {
    let alpha = alpha.clone();
    UmbralDerivative::from_fn(move |n| {
        let nn = F::from_i64(n as i64);
        nn.div(&nn.add(&alpha))
    })
    .expect("mu_0 = 0 by construction")
}

/// `mu_n = n + eta (1 - (-1)^n)`, the Dunkl eigenvalues: `n` for even `n`,
/// `n + 2 eta` for odd.
pub fn dunkl_derivative<F: Field>(eta: &F) -> UmbralDerivative<F> {
    let eta = eta.clone();
    UmbralDerivative::from_fn(move |n| {
        let nn = F::from_i64(n as i64);
        if n % 2 == 0 {
            Ok(nn)
        } else {
            Ok(nn.add(&eta).add(&eta))
        }
    })
    .expect("mu_0 = 0 by construction")
}

pub fn classical_instance<F: Field>(params: &ClassicalParams<F>) -> FamilyInstance<F> {
    let p = params.clone();
    let moments = MomentSequence::from_recurrence(
        move |n| {
            let nn = F::from_i64(n as i64);
            [
                p.xi[0].mul(&nn).add(&p.eta[0]),
                p.xi[1].mul(&nn).add(&p.eta[1]),
                p.xi[2].mul(&nn),
            ]
        },
        F::one(),
    )
    .expect("unit leading moment");
    FamilyInstance {
        label: "classical",
        moments,
        derivative: classical_derivative(),
        derived_moments: None,
    }
}

pub fn q_classical_instance<F: Field>(params: &QClassicalParams<F>) -> FamilyInstance<F> {
    let p = params.clone();
    let moments = MomentSequence::from_recurrence(
        move |n| {
            let qn = p.q.powi(n as i64).expect("nonnegative power cannot fail");
            [
                p.xi[0].add(&p.eta[0].mul(&qn)),
                p.xi[1].add(&p.eta[1].mul(&qn)),
                p.xi[2].mul(&F::one().sub(&qn)),
            ]
        },
        F::one(),
    )
    .expect("unit leading moment");
    FamilyInstance {
        label: "q-classical",
        moments,
        derivative: q_derivative(&params.q),
        derived_moments: None,
    }
}

fn krall_moment_rule<F: Field>(alpha: F, beta: F) -> impl Fn(usize) -> Result<F> {
    move |n| {
        let nn = F::from_i64(n as i64);
        alpha.div(&beta)?.mul(&nn.add(&beta)).div(&nn.add(&alpha))
    }
}

/// The rational nonlocal pair. The derived functional is the same family at
/// `(alpha + 2, beta + alpha + 2)`, which is returned in closed form.
pub fn krall_instance<F: Field>(params: &KrallParams<F>) -> Result<FamilyInstance<F>> {
    if params.alpha.is_zero() || params.beta.is_zero() {
        return Err(Error::InvalidParameter(
            "rational family needs nonzero alpha and beta".into(),
        ));
    }
    if params.alpha == params.beta {
        return Err(Error::InvalidParameter(
            "alpha = beta makes every moment one (a point mass)".into(),
        ));
    }
    let moments =
        MomentSequence::from_fn(krall_moment_rule(params.alpha.clone(), params.beta.clone()))?;
    let shifted_alpha = params.alpha.add(&F::from_i64(2));
    let shifted_beta = params.beta.add(&params.alpha).add(&F::from_i64(2));
    let derived = MomentSequence::from_fn(krall_moment_rule(shifted_alpha, shifted_beta))?;
    Ok(FamilyInstance {
        label: "krall",
        moments,
        derivative: krall_derivative(&params.alpha),
        derived_moments: Some(derived),
    })
}

/// Even moments of the generalized Hermite weight `|x|^{2 eta} e^{-x^2}`,
/// normalized: `g_{2k} = prod_{i=1}^{k} (eta + i - 1/2)`, odd moments zero.
pub fn generalized_hermite_moments<F: Field>(eta: &F) -> MomentSequence<F> {
    let eta = eta.clone();
    MomentSequence::from_fn(move |n| {
        if n % 2 == 1 {
            return Ok(F::zero());
        }
        let mut acc = F::one();
        for i in 1..=(n / 2) as i64 {
            acc = acc.mul(&eta.add(&F::from_ratio(2 * i - 1, 2)));
        }
        Ok(acc)
    })
    .expect("unit leading moment")
}

/// The Dunkl pair: generalized Hermite moments with the Dunkl derivative.
/// The system is Appell for this derivative (`Q_n = P_n`), so the derived
/// moments coincide with the source moments.
pub fn dunkl_instance<F: Field>(eta: &F) -> FamilyInstance<F> {
    let moments = generalized_hermite_moments(eta);
    FamilyInstance {
        label: "dunkl",
        moments: moments.clone(),
        derivative: dunkl_derivative(eta),
        derived_moments: Some(moments),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hahn_type_instance_gives_reciprocal_moments() {
        let inst = classical_instance(&ClassicalParams {
            xi: [r(1, 1), r(-1, 1), r(0, 1)],
            eta: [r(2, 1), r(-1, 1)],
        });
        for n in 0..=24i64 {
            assert_eq!(inst.moments.get(n as usize).unwrap(), r(1, n + 1));
        }
    }

    #[test]
    fn q_derivative_at_one_is_ordinary() {
        let d = q_derivative(&r(1, 1));
        let c = classical_derivative::<BigRational>();
        assert_eq!(d.prefix(8).unwrap(), c.prefix(8).unwrap());
    }

    #[test]
    fn q_instance_half_moments() {
        let inst = q_classical_instance(&QClassicalParams {
            q: r(1, 2),
            xi: [r(1, 1), r(-1, 1), r(0, 1)],
            eta: [r(0, 1), r(1, 2)],
        });
        assert_eq!(inst.moments.get(1).unwrap(), r(1, 2));
        assert_eq!(inst.moments.get(2).unwrap(), r(3, 8));
        let mu = inst.derivative.prefix(4).unwrap();
        assert_eq!(mu, [r(0, 1), r(1, 1), r(3, 2), r(7, 4)]);
    }

    #[test]
    fn krall_two_three_values() {
        let inst =
            krall_instance(&KrallParams { alpha: r(2, 1), beta: r(3, 1) }).unwrap();
        assert_eq!(inst.moments.get(1).unwrap(), r(8, 9));
        assert_eq!(inst.moments.get(2).unwrap(), r(5, 6));
        let mu = inst.derivative.prefix(3).unwrap();
        assert_eq!(mu, [r(0, 1), r(1, 3), r(1, 2)]);
        // Derived side sits at (4, 7).
        let derived = inst.derived_moments.unwrap();
        assert_eq!(derived.get(1).unwrap(), r(32, 35));
    }

    #[test]
    fn krall_rejects_coincident_parameters() {
        assert!(krall_instance(&KrallParams { alpha: r(2, 1), beta: r(2, 1) }).is_err());
    }

    #[test]
    fn dunkl_instance_values() {
        let eta = r(1, 4);
        let inst = dunkl_instance(&eta);
        let mu = inst.derivative.prefix(5).unwrap();
        assert_eq!(mu, [r(0, 1), r(3, 2), r(2, 1), r(7, 2), r(4, 1)]);
        assert_eq!(inst.moments.get(1).unwrap(), r(0, 1));
        assert_eq!(inst.moments.get(2).unwrap(), r(3, 4));
        assert_eq!(inst.moments.get(4).unwrap(), r(21, 16));
    }
}
