//! Dense exact/float linear algebra on tiny matrices.
//!
//! Matrices here are at most a few dozen rows (Hankel systems, recurrence
//! fits), so everything is plain `Vec<Vec<F>>` Gaussian elimination. Exact
//! determinants go through fraction-free Bareiss elimination over integers;
//! float determinants through partial-pivot LU.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Tolerance};

/// Exact determinant by Bareiss elimination.
///
/// Rows are first scaled to integers (tracking the accumulated denominator),
/// then eliminated fraction-free: every interior division is exact over
/// `BigInt`, which keeps intermediate entry growth linear in the matrix size
/// instead of exponential.
pub(crate) fn det_bareiss(rows: Vec<Vec<BigRational>>) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return One::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));

    let mut denom = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in rows {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        denom *= &lcm;
        a.push(
            row.into_iter()
                .map(|x| {
                    let scaled = x * BigRational::from_integer(lcm.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect(),
        );
    }

    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Zero::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }

    let det_int = if sign < 0 { -a[n - 1][n - 1].clone() } else { a[n - 1][n - 1].clone() };
    BigRational::new(det_int, denom)
}

/// Float determinant by partial-pivot LU; product of pivots with the swap
/// sign.
pub(crate) fn det_lu(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (imax, pmax) = (k..n)
            .map(|i| (i, a[i][k].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pmax == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if imax != k {
            a.swap(imax, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let factor = a[i][k] / a[k][k];
            for j in k + 1..n {
                let sub = factor * a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    det
}

fn max_magnitude<F: Field>(rows: &[Vec<F>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(Field::magnitude)
        .fold(0.0f64, f64::max)
}

/// Pivot acceptability: exact mode wants a literally nonzero pivot, float
/// mode one that clears `abs_eps` scaled by the largest initial entry.
fn pivot_ok<F: Field>(p: &F, scale: f64, tol: &Tolerance) -> bool {
    if F::EXACT {
        !p.is_zero()
    } else {
        p.magnitude() > tol.abs_eps * scale.max(1.0)
    }
}

/// Solve a square system by Gaussian elimination with partial pivoting.
pub fn solve<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<F>, tol: &Tolerance) -> Result<Vec<F>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let scale = max_magnitude(&a);

    for k in 0..n {
        let imax = (k..n)
            .max_by(|&i, &j| a[i][k].magnitude().total_cmp(&a[j][k].magnitude()))
            .unwrap();
        if !pivot_ok(&a[imax][k], scale, tol) {
            return Err(Error::SingularSystem { size: n });
        }
        a.swap(k, imax);
        b.swap(k, imax);
        for i in k + 1..n {
            let factor = a[i][k].div(&a[k][k])?;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                a[i][j] = a[i][j].sub(&factor.mul(&a[k][j]));
            }
            b[i] = b[i].sub(&factor.mul(&b[k]));
        }
    }

    let mut x = vec![F::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in k + 1..n {
            acc = acc.sub(&a[k][j].mul(&x[j]));
        }
        x[k] = acc.div(&a[k][k])?;
    }
    Ok(x)
}

/// Outcome of eliminating a possibly over- or under-determined system.
pub struct ConsistentSolve<F: Field> {
    /// Particular solution with free variables set to zero, or `None` when
    /// the system is inconsistent.
    pub solution: Option<Vec<F>>,
    /// max/min pivot magnitude ratio; a crude conditioning signal for the
    /// float mode (1.0 when fewer than two pivots).
    pub condition: f64,
}

/// Reduce `a x = rhs` (any shape) and extract a particular solution.
///
/// Inconsistency means some eliminated row leaves a non-negligible right-hand
/// side over an all-negligible coefficient row.
pub fn solve_consistent<F: Field>(
    a: Vec<Vec<F>>,
    rhs: Vec<F>,
    tol: &Tolerance,
) -> Result<ConsistentSolve<F>> {
    let m = a.len();
    debug_assert_eq!(m, rhs.len());
    let cols = a.first().map_or(0, Vec::len);
    let scale = max_magnitude(&a);
    let rhs_scale = rhs.iter().map(Field::magnitude).fold(scale, f64::max);

    let mut aug: Vec<(Vec<F>, F)> = a.into_iter().zip(rhs).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pivot_mags: Vec<f64> = Vec::new();
    let mut row = 0usize;

    for col in 0..cols {
        let Some(imax) = (row..m)
            .max_by(|&i, &j| aug[i].0[col].magnitude().total_cmp(&aug[j].0[col].magnitude()))
        else {
            break;
        };
        if !pivot_ok(&aug[imax].0[col], scale, tol) {
            continue;
        }
        aug.swap(row, imax);
        pivot_mags.push(aug[row].0[col].magnitude());
        for i in row + 1..m {
            let factor = aug[i].0[col].div(&aug[row].0[col])?;
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                aug[i].0[j] = aug[i].0[j].sub(&factor.mul(&aug[row].0[j]));
            }
            aug[i].1 = aug[i].1.sub(&factor.mul(&aug[row].1));
        }
        pivots.push((row, col));
        row += 1;
        if row == m {
            break;
        }
    }

    let residual_thr = Tolerance {
        abs_eps: tol.abs_eps * rhs_scale.max(1.0),
        rel_eps: tol.rel_eps,
    };
    for (vec, b) in &aug[row..] {
        debug_assert!(vec.iter().all(|v| if F::EXACT { v.is_zero() } else { true }));
        let _ = vec;
        if !b.is_negligible(&residual_thr) {
            return Ok(ConsistentSolve { solution: None, condition: condition_of(&pivot_mags) });
        }
    }

    let mut x = vec![F::zero(); cols];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = aug[r].1.clone();
        for j in c + 1..cols {
            acc = acc.sub(&aug[r].0[j].mul(&x[j]));
        }
        x[c] = acc.div(&aug[r].0[c])?;
    }
    Ok(ConsistentSolve { solution: Some(x), condition: condition_of(&pivot_mags) })
}

fn condition_of(pivot_mags: &[f64]) -> f64 {
    let max = pivot_mags.iter().copied().fold(0.0f64, f64::max);
    let min = pivot_mags.iter().copied().fold(f64::INFINITY, f64::min);
    if pivot_mags.len() < 2 || min == 0.0 {
        1.0
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Cofactor expansion; the independent oracle for both determinant
    /// routines on small random matrices.
    fn det_cofactor(rows: &[Vec<BigRational>]) -> BigRational {
        let n = rows.len();
        if n == 0 {
            return One::one();
        }
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = r(0, 1);
        for j in 0..n {
            let minor: Vec<Vec<BigRational>> = rows[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &rows[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<BigRational>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| r(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                        .collect()
                })
                .collect();
            assert_eq!(det_bareiss(rows.clone()), det_cofactor(&rows));
        }
    }

    #[test]
    fn bareiss_detects_singularity_and_swaps() {
        // First pivot is zero; a row swap is required.
        let rows = vec![
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1)],
        ];
        assert_eq!(det_bareiss(rows), r(-1, 1));

        let singular = vec![
            vec![r(1, 2), r(1, 1)],
            vec![r(1, 4), r(1, 2)],
        ];
        assert_eq!(det_bareiss(singular), r(0, 1));
    }

    #[test]
    fn lu_det_matches_exact_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = 1e-9;
        for _ in 0..40 {
            let n = rng.gen_range(1..=5);
            let exact: Vec<Vec<BigRational>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| r(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                        .collect()
                })
                .collect();
            let float: Vec<Vec<Complex64>> = exact
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| Complex64::new(Field::magnitude(x), 0.0) * if x < &r(0, 1) { -1.0 } else { 1.0 })
                        .collect()
                })
                .collect();
            let want = Field::magnitude(&det_cofactor(&exact));
            let got = det_lu(float).norm();
            assert!((want - got).abs() <= tol * (1.0 + want), "want {want}, got {got}");
        }
    }

    #[test]
    fn solve_exact_round_trip() {
        let tol = Tolerance::default();
        let a = vec![
            vec![r(2, 1), r(1, 1)],
            vec![r(1, 1), r(3, 1)],
        ];
        let x = vec![r(1, 3), r(-2, 5)];
        let b: Vec<BigRational> = a
            .iter()
            .map(|row| row.iter().zip(&x).map(|(c, v)| c * v).sum())
            .collect();
        assert_eq!(solve(a, b, &tol).unwrap(), x);
    }

    #[test]
    fn solve_singular_errors() {
        let tol = Tolerance::default();
        let a = vec![
            vec![r(1, 1), r(2, 1)],
            vec![r(2, 1), r(4, 1)],
        ];
        assert!(matches!(
            solve(a, vec![r(1, 1), r(1, 1)], &tol),
            Err(Error::SingularSystem { size: 2 })
        ));
    }

    #[test]
    fn consistent_solve_detects_inconsistency() {
        let tol = Tolerance::default();
        // x + y = 1 twice, then x + y = 2: inconsistent.
        let a = vec![
            vec![r(1, 1), r(1, 1)],
            vec![r(1, 1), r(1, 1)],
            vec![r(1, 1), r(1, 1)],
        ];
        let out = solve_consistent(a.clone(), vec![r(1, 1), r(1, 1), r(2, 1)], &tol).unwrap();
        assert!(out.solution.is_none());

        let out = solve_consistent(a, vec![r(1, 1), r(1, 1), r(1, 1)], &tol).unwrap();
        let sol = out.solution.unwrap();
        assert_eq!(&sol[0] + &sol[1], r(1, 1));
    }
}
