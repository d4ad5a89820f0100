//! Grid-shaped workloads under both execution modes. Bench IDs carry the
//! active mode so `cargo bench` and `cargo bench --no-default-features`
//! land in comparable groups.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use umbral_ops::elliptic::{SigmaKernel, WeierstrassSigma};
use umbral_ops::families;
use umbral_ops::{MomentSequence, Tolerance};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn uniform_moments() -> MomentSequence<BigRational> {
    MomentSequence::from_fn(|n| Ok(rational(1, n as i64 + 1))).unwrap()
}

fn bench_hankel(c: &mut Criterion) {
    let tol = Tolerance::default();
    c.bench_function(&format!("hankel_determinants/{MODE}/exact_depth_12"), |b| {
        b.iter_batched(
            uniform_moments,
            |g| g.hankel_determinants(12, &tol).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_classicality(c: &mut Criterion) {
    let tol = Tolerance::default();
    c.bench_function(&format!("is_umbral_classical/{MODE}/exact_depth_8"), |b| {
        b.iter_batched(
            || (uniform_moments(), families::classical_derivative::<BigRational>()),
            |(g, d)| umbral_ops::umbral::is_umbral_classical(&g, &d, 8, &tol).unwrap(),
            BatchSize::SmallInput,
        )
    });
    c.bench_function(&format!("is_umbral_classical/{MODE}/exact_q_depth_8"), |b| {
        b.iter_batched(
            || {
                families::q_classical_instance(&families::QClassicalParams {
                    q: rational(1, 2),
                    xi: [rational(1, 1), rational(-1, 1), rational(0, 1)],
                    eta: [rational(0, 1), rational(1, 2)],
                })
            },
            |inst| {
                umbral_ops::umbral::is_umbral_classical(&inst.moments, &inst.derivative, 8, &tol)
                    .unwrap()
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_sigma(c: &mut Criterion) {
    let sigma = WeierstrassSigma::new(4.0, 1.0);
    c.bench_function(&format!("sigma_eval/{MODE}/batch_200"), |b| {
        b.iter(|| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..200 {
                let z = Complex64::new(-1.2 + 0.012 * i as f64, 0.0);
                acc += sigma.eval(z);
            }
            acc
        })
    });
    let tol = Tolerance { abs_eps: 1e-9, rel_eps: 1e-9 };
    c.bench_function(&format!("elliptic_verify/{MODE}/float_depth_5"), |b| {
        let kernel = SigmaKernel::new(4.0, 1.0, 0.1).unwrap();
        let alpha = Complex64::new(0.3, 0.0);
        let beta = Complex64::new(0.7, 0.0);
        b.iter(|| {
            umbral_ops::elliptic::elliptic_verify(&kernel, &alpha, &beta, 5, &tol).unwrap()
        })
    });
}

criterion_group!(benches, bench_hankel, bench_classicality, bench_sigma);
criterion_main!(benches);
