//! Scalar arithmetic in the two supported modes.
//!
//! Everything downstream is generic over [`Field`], which has exactly two
//! implementations:
//!
//! * [`BigRational`]: exact arbitrary-precision rationals. Comparisons are
//!   exact and tolerances are ignored.
//! * [`Complex64`]: complex double floats. Comparisons go through a
//!   [`Tolerance`] with the usual mixed absolute/relative test.
//!
//! [`Scalar`] is the dynamically-tagged boundary type used for files and
//! reports: exact values serialize as `"p/q"` strings, complex values as
//! `[re, im]` pairs. Mixing the two modes in one operation is an error, never
//! a silent coercion.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;

/// Comparison tolerance for float mode.
///
/// Two complex values compare equal when
/// `|a - b| <= abs_eps + rel_eps * max(|a|, |b|)`. A value is negligible when
/// `|a| <= abs_eps`. Exact mode ignores tolerances entirely.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Result<Self> {
        let ok = |e: f64| e.is_finite() && e >= 0.0;
        if !ok(abs_eps) || !ok(rel_eps) {
            return Err(Error::InvalidParameter(format!(
                "tolerance components must be finite and nonnegative, got abs {abs_eps}, rel {rel_eps}"
            )));
        }
        Ok(Tolerance { abs_eps, rel_eps })
    }

    /// Same epsilon for the absolute and relative parts.
    pub fn from_eps(eps: f64) -> Result<Self> {
        Tolerance::new(eps, eps)
    }

    pub fn admits(&self, a_mag: f64, b_mag: f64, diff_mag: f64) -> bool {
        diff_mag <= self.abs_eps + self.rel_eps * a_mag.max(b_mag)
    }
}

impl Default for Tolerance {
    /// 1e-10 both ways; the CLI overrides this from `--tol` or the
    /// `UMBRAL_OPS_TOL` environment variable.
    fn default() -> Self {
        Tolerance { abs_eps: 1e-10, rel_eps: 1e-10 }
    }
}

/// Field operations required by the polynomial and moment machinery.
///
/// The trait is deliberately method-based (no operator overloading) so that
/// division can return a proper error and so both implementations stay
/// symmetric. `EXACT` lets algorithms pick exact or pivoted elimination.
pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const EXACT: bool;
    /// Mode name used in mismatch errors and reports.
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num/den` as a field element; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;

    fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// Integer power; negative exponents invert (zero base errors).
    fn powi(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Literal zero test (no tolerance): used for structural decisions such
    /// as trimming polynomial coefficients.
    fn is_zero(&self) -> bool;

    /// |self| as an f64, used for pivot selection and residual reporting.
    /// May overflow to infinity for huge exact values; only relative order
    /// matters to the callers.
    fn magnitude(&self) -> f64;

    /// Mode-appropriate equality: exact `==` or the tolerance test.
    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool;

    /// Mode-appropriate "is zero": exact zero, or `|self| <= abs_eps`.
    fn is_negligible(&self, tol: &Tolerance) -> bool;

    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self>;

    /// Determinant of a square matrix over this field. Exact mode uses
    /// fraction-free elimination, float mode partial-pivot LU.
    fn det(rows: Vec<Vec<Self>>) -> Self;

    /// Roots of `sum_k coeffs[k] x^k` representable in this field, in a
    /// deterministic order: every rational root in exact mode (possibly
    /// none), all complex roots in float mode. Constant and zero
    /// polynomials have no roots here.
    fn poly_roots(coeffs: &[Self]) -> Result<Vec<Self>>;
}

impl Field for BigRational {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as One>::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio with zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn approx_eq(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }

    fn is_negligible(&self, _tol: &Tolerance) -> bool {
        Zero::is_zero(self)
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(r) => Ok(r.clone()),
            Scalar::Complex(_) => {
                Err(Error::ModeMismatch { left: "exact", right: "complex" })
            }
        }
    }

    fn det(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_bareiss(rows)
    }

    /// Rational-root enumeration on the cleared-integer coefficients.
    fn poly_roots(coeffs: &[Self]) -> Result<Vec<Self>> {
        let mut c: Vec<BigRational> = coeffs.to_vec();
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        let mut roots = Vec::new();
        let zeros = c.iter().take_while(|v| Zero::is_zero(*v)).count();
        if zeros > 0 && zeros < c.len() {
            roots.push(<BigRational as Field>::zero());
            c.drain(..zeros);
        }
        if c.len() <= 1 {
            roots.sort();
            return Ok(roots);
        }

        let lcm_den = c.iter().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm_den.clone())).to_integer())
            .collect();
        let p_divs = small_divisors(&ints[0])?;
        let q_divs = small_divisors(ints.last().expect("nonempty"))?;
        for &p in &p_divs {
            for &q in &q_divs {
                for sign in [1i128, -1] {
                    let candidate = BigRational::new(BigInt::from(sign * p), BigInt::from(q));
                    let mut value = <BigRational as Field>::zero();
                    for coeff in ints.iter().rev() {
                        value = value * &candidate + BigRational::from_integer(coeff.clone());
                    }
                    if Zero::is_zero(&value) {
                        roots.push(candidate);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }
}

/// Positive divisors, for the rational-root search. Trial division only
/// pays off for moderate integers; larger inputs report a convergence
/// failure rather than stalling.
fn small_divisors(n: &BigInt) -> Result<Vec<i128>> {
    let mag = n.abs().to_i128().filter(|&m| m <= 1_000_000_000_000).ok_or_else(|| {
        Error::Convergence("rational root search: coefficient exceeds enumeration range".into())
    })?;
    debug_assert!(mag > 0);
    let mut divs = Vec::new();
    let mut d = 1i128;
    while d * d <= mag {
        if mag % d == 0 {
            divs.push(d);
            if d != mag / d {
                divs.push(mag / d);
            }
        }
        d += 1;
    }
    Ok(divs)
}

impl Field for Complex64 {
    const EXACT: bool = false;
    const MODE: &'static str = "complex";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "from_ratio with zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.norm() == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        tol.admits(self.norm(), other.norm(), (self - other).norm())
    }

    fn is_negligible(&self, tol: &Tolerance) -> bool {
        self.norm() <= tol.abs_eps
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Complex(*self)
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Complex(z) => Ok(*z),
            Scalar::Exact(_) => {
                Err(Error::ModeMismatch { left: "complex", right: "exact" })
            }
        }
    }

    fn det(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_lu(rows)
    }

    /// Simultaneous (Durand-Kerner) iteration for all complex roots.
    fn poly_roots(coeffs: &[Self]) -> Result<Vec<Self>> {
        let mut c = coeffs.to_vec();
        while c.last().is_some_and(|z| z.norm() == 0.0) {
            c.pop();
        }
        if c.len() <= 1 {
            return Ok(Vec::new());
        }
        let lead = *c.last().expect("nonempty");
        let a: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
        let deg = a.len() - 1;

        let seed = Complex64::new(0.4, 0.9);
        let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
        for _ in 0..500 {
            let mut max_step = 0.0f64;
            for k in 0..deg {
                let mut value = Complex64::new(0.0, 0.0);
                for coeff in a.iter().rev() {
                    value = value * z[k] + coeff;
                }
                let mut den = Complex64::new(1.0, 0.0);
                for j in 0..deg {
                    if j != k {
                        den *= z[k] - z[j];
                    }
                }
                if den.norm() < 1e-300 {
                    z[k] += Complex64::new(1e-6, 1e-6);
                    max_step = f64::INFINITY;
                    continue;
                }
                let step = value / den;
                z[k] -= step;
                max_step = max_step.max(step.norm());
            }
            let scale = z.iter().map(|w| w.norm()).fold(1.0f64, f64::max);
            if max_step <= 1e-13 * scale {
                z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                return Ok(z);
            }
        }
        Err(Error::Convergence("root iteration did not settle".into()))
    }
}

/// Dynamically-tagged scalar, the interchange type for files and reports.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Complex(Complex64),
}

impl Scalar {
    pub fn mode(&self) -> &'static str {
        match self {
            Scalar::Exact(_) => "exact",
            Scalar::Complex(_) => "complex",
        }
    }

    pub fn exact_i64(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    fn binary<FE, FC>(&self, rhs: &Scalar, fe: FE, fc: FC) -> Result<Scalar>
    where
        FE: FnOnce(&BigRational, &BigRational) -> Result<BigRational>,
        FC: FnOnce(&Complex64, &Complex64) -> Result<Complex64>,
    {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(fe(a, b)?)),
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(fc(a, b)?)),
            (a, b) => Err(Error::ModeMismatch { left: a.mode_static(), right: b.mode_static() }),
        }
    }

    fn mode_static(&self) -> &'static str {
        self.mode()
    }

    pub fn add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| Ok(a + b), |a, b| Ok(a + b))
    }

    pub fn sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| Ok(a - b), |a, b| Ok(a - b))
    }

    pub fn mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, |a, b| Ok(a * b), |a, b| Ok(a * b))
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, Field::div, Field::div)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Complex(a) => Scalar::Complex(-a),
        }
    }

    pub fn powi(&self, exp: i64) -> Result<Scalar> {
        match self {
            Scalar::Exact(a) => Ok(Scalar::Exact(a.powi(exp)?)),
            Scalar::Complex(a) => Ok(Scalar::Complex(Field::powi(a, exp)?)),
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Exact(a) => Field::magnitude(a),
            Scalar::Complex(a) => a.norm(),
        }
    }

    /// Parse from the CSV/CLI textual forms: `"p/q"` or `"p"` exact,
    /// `"re,im"` or a decimal/scientific literal complex.
    pub fn parse(text: &str) -> Result<Scalar> {
        let t = text.trim();
        if let Ok(r) = BigRational::from_str(t) {
            return Ok(Scalar::Exact(r));
        }
        if let Some((re, im)) = t.split_once(',') {
            let re: f64 = re.trim().parse().map_err(|_| Error::ScalarParse(text.into()))?;
            let im: f64 = im.trim().parse().map_err(|_| Error::ScalarParse(text.into()))?;
            return Ok(Scalar::Complex(Complex64::new(re, im)));
        }
        if let Ok(re) = t.parse::<f64>() {
            return Ok(Scalar::Complex(Complex64::new(re, 0.0)));
        }
        Err(Error::ScalarParse(text.into()))
    }

    /// CSV cell form; inverse of [`Scalar::parse`].
    pub fn to_csv_cell(&self) -> String {
        match self {
            Scalar::Exact(r) => r.to_string(),
            Scalar::Complex(z) => format!("{},{}", z.re, z.im),
        }
    }
}

/// Mode-checked equality between two boundary scalars.
pub fn scalar_eq(a: &Scalar, b: &Scalar, tol: &Tolerance) -> Result<bool> {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Ok(x == y),
        (Scalar::Complex(x), Scalar::Complex(y)) => Ok(x.approx_eq(y, tol)),
        (a, b) => Err(Error::ModeMismatch { left: a.mode_static(), right: b.mode_static() }),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Complex(z) => write!(f, "{z}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Complex(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a \"p/q\" string or an [re, im] pair")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                BigRational::from_str(v.trim())
                    .map(Scalar::Exact)
                    .map_err(|_| E::custom(format!("not a rational: {v:?}")))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Scalar, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("expected [re, im]"))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::custom("expected [re, im]"))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::custom("expected exactly two components"));
                }
                Ok(Scalar::Complex(Complex64::new(re, im)))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Convert a uniform slice of boundary scalars into typed field elements,
/// rejecting mixed-mode input.
pub fn scalars_to_field<F: Field>(values: &[Scalar]) -> Result<Vec<F>> {
    values.iter().map(F::from_scalar).collect()
}
