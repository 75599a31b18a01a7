//! Numerical kernels on the hot paths of every sweep.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use shrinker_core::numerics::{eig_sym, fd_hessian, integrate_ode, OdeOptions};
use shrinker_core::quadratics::build_quadratic;
use shrinker_core::sampling::{
    admissible_eigenvalue, random_admissible_matrix, random_params, random_point_in_ball, rng_for,
};
use shrinker_core::tau::{f_scalar, f_scalar_inv};
use shrinker_core::{Branch, ScalarField, TauParams};

fn bench_eig_sym(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_sym");
    for n in [2, 4, 8] {
        let mut rng = rng_for(0, n as u64);
        let tp = random_params(Branch::Log, &mut rng);
        let (_, m) = random_admissible_matrix(&tp, n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| eig_sym(black_box(m)))
        });
    }
    group.finish();
}

fn bench_f_scalar_inv(c: &mut Criterion) {
    let mut group = c.benchmark_group("f_scalar_inv");
    let mut rng = rng_for(2, 0);
    for branch in Branch::ALL {
        let tp = TauParams::representative(branch);
        let y = f_scalar(&tp, admissible_eigenvalue(&tp, &mut rng)).unwrap();
        group.bench_function(branch.tag(), |b| b.iter(|| f_scalar_inv(&tp, black_box(y))));
    }
    group.finish();
}

fn bench_fd_hessian(c: &mut Criterion) {
    let mut rng = rng_for(1, 0);
    let tp = random_params(Branch::Arctan, &mut rng);
    let (tp, a) = random_admissible_matrix(&tp, 3, &mut rng);
    let sol = build_quadratic(&tp, a).unwrap();
    let x = random_point_in_ball(3, 2.0, &mut rng);
    c.bench_function("fd_hessian/n=3", |b| {
        b.iter(|| fd_hessian(|y| sol.value(y), black_box(&x), 1e-3))
    });
}

fn bench_ode(c: &mut Criterion) {
    let mut group = c.benchmark_group("integrate_ode/harmonic_oscillator");
    for tol in [1e-8, 1e-10, 1e-12] {
        let opts = OdeOptions::with_tolerances(tol, tol);
        group.bench_with_input(BenchmarkId::from_parameter(tol), &opts, |b, opts| {
            b.iter(|| {
                integrate_ode(
                    |_, y, dy| {
                        dy[0] = y[1];
                        dy[1] = -y[0];
                    },
                    0.0,
                    &[0.0, 1.0],
                    10.0,
                    opts,
                )
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_eig_sym, bench_f_scalar_inv, bench_fd_hessian, bench_ode);
criterion_main!(benches);
