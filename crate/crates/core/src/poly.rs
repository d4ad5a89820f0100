//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Tolerance};

/// Coefficients in ascending powers; if non-empty, the last entry is nonzero.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![F::one()] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = F::one();
        Polynomial { coeffs }
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == F::one())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).sub(&rhs.coeff(k))).collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &F) -> Self {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn neg(&self) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(Field::neg).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Polynomial::from_coeffs(coeffs)
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Divide every coefficient by `c`.
    pub fn div_scalar(&self, c: &F) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Polynomial::from_coeffs(
            self.coeffs.iter().map(|a| a.div(c)).collect::<Result<Vec<_>>>()?,
        ))
    }

    /// Coefficientwise comparison under the mode's equality.
    pub fn approx_eq(&self, rhs: &Self, tol: &Tolerance) -> bool {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n).all(|k| self.coeff(k).approx_eq(&rhs.coeff(k), tol))
    }

    /// Largest coefficient magnitude of `self - rhs`; the residual used by
    /// coefficientwise float checks.
    pub fn max_coeff_distance(&self, rhs: &Self) -> f64 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n)
            .map(|k| self.coeff(k).sub(&rhs.coeff(k)).magnitude())
            .fold(0.0, f64::max)
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn p(coeffs: &[i64]) -> Polynomial<BigRational> {
        Polynomial::from_coeffs(coeffs.iter().map(|&c| r(c)).collect())
    }

    #[test]
    fn trailing_zeros_trim() {
        let q = Polynomial::from_coeffs(vec![r(1), r(0), r(0)]);
        assert_eq!(q.degree(), Some(0));
        assert!(Polynomial::<BigRational>::from_coeffs(vec![r(0)]).is_zero());
    }

    #[test]
    fn ring_operations() {
        let a = p(&[1, 2]); // 1 + 2x
        let b = p(&[-1, 1]); // -1 + x
        assert_eq!(a.mul(&b), p(&[-1, -1, 2]));
        assert_eq!(a.add(&b), p(&[0, 3]));
        assert_eq!(a.sub(&a), Polynomial::zero());
        assert_eq!(a.shift_up(2), p(&[0, 0, 1, 2]));
    }

    #[test]
    fn eval_horner() {
        let q = p(&[3, 0, 1]); // 3 + x^2
        assert_eq!(q.eval(&r(2)), r(7));
        assert_eq!(Polynomial::<BigRational>::zero().eval(&r(5)), r(0));
    }

    #[test]
    fn monic_detection() {
        assert!(p(&[-1, 0, 1]).is_monic());
        assert!(!p(&[1, 2]).is_monic());
    }
}
