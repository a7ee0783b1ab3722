use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use alphaflow_bench::{perturbed_disk, spectral_state};
use alphaflow_core::contour::{marker_velocity, Kernel};
use alphaflow_core::euler::{step, Model, StepOptions};
use alphaflow_core::special::bessel_k;
use alphaflow_core::spectral::{besov_norm, biot_savart, BesovSum};

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_k0_sweep_100", |b| {
        b.iter(|| {
            (1..=100)
                .map(|i| bessel_k(0, black_box(0.05 * i as f64)).unwrap())
                .sum::<f64>()
        })
    });
}

fn spectral(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectral");
    for n in [64, 128, 256] {
        let s = spectral_state(n, Model::EulerAlpha(0.1));
        g.bench_with_input(BenchmarkId::new("biot_savart", n), &s, |b, s| {
            b.iter(|| biot_savart(black_box(&s.q), 0.1).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("rk4_step", n), &s, |b, s| {
            b.iter(|| step(black_box(s), 1e-3, &StepOptions::default()).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("besov_half_inf", n), &s, |b, s| {
            b.iter(|| besov_norm(black_box(&s.q), 0.5, BesovSum::Sup))
        });
    }
    g.finish();
}

fn contour(c: &mut Criterion) {
    let mut g = c.benchmark_group("contour");
    g.sample_size(20);
    for m in [128, 256] {
        let p = perturbed_disk(m);
        g.bench_with_input(BenchmarkId::new("velocity_log", m), &p, |b, p| {
            b.iter(|| marker_velocity(black_box(p), Kernel::Log))
        });
        g.bench_with_input(BenchmarkId::new("velocity_alpha_0.1", m), &p, |b, p| {
            b.iter(|| marker_velocity(black_box(p), Kernel::Alpha(0.1)))
        });
    }
    g.finish();
}

criterion_group!(benches, bessel, spectral, contour);
criterion_main!(benches);
