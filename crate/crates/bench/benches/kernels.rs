use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use pk_core::backbone3d::{build_backbone, end_to_end_grad, GeometryParams, END_TO_END_GRAD_STEP};
use pk_core::distributions::special::log_bessel_i0;
use pk_core::distributions::{vm_sample, ScaledBetaParams, StephensParams, VonMisesParams};
use pk_core::pk::{PkModel, ResultantLength, VonMisesProduct};
use pk_core::sampler::{nuts_sample, SamplerConfig, TargetDensity};
use pk_core::stats::ks_one_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vrw_model() -> PkModel {
    let vm = VonMisesParams::new(0.0, 10.0).unwrap();
    PkModel::new(
        Box::new(VonMisesProduct::iid(vm, 5).unwrap()),
        Box::new(ResultantLength::new(5).unwrap()),
        Box::new(ScaledBetaParams::new(10.0, 10.0, 5.0).unwrap()),
        Box::new(StephensParams::new(10.0, 5).unwrap()),
        false,
    )
    .unwrap()
}

fn densities(c: &mut Criterion) {
    let vm = VonMisesParams::new(0.0, 10.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    c.bench_function("vm_sample kappa=10", |b| {
        b.iter(|| vm_sample(&mut rng, black_box(&vm)))
    });
    c.bench_function("log_bessel_i0", |b| {
        b.iter(|| log_bessel_i0(black_box(12.5)).unwrap())
    });
}

fn backbone(c: &mut Criterion) {
    let geom = GeometryParams::default();
    let phi = vec![(-60.0f64).to_radians(); 8];
    let psi = vec![(-40.0f64).to_radians(); 8];
    c.bench_function("build_backbone L=8", |b| {
        b.iter(|| build_backbone(black_box(&phi), black_box(&psi), &geom).unwrap())
    });
    let mut angles = phi.clone();
    angles.extend(&psi);
    let mut grad = vec![0.0; 16];
    c.bench_function("end_to_end_grad L=8", |b| {
        b.iter(|| {
            end_to_end_grad(black_box(&angles), &geom, END_TO_END_GRAD_STEP, &mut grad).unwrap()
        })
    });
}

fn posterior(c: &mut Criterion) {
    let model = vrw_model();
    let x = [0.3, -0.2, 0.5, 0.1, -0.4];
    let mut grad = [0.0; 5];
    c.bench_function("vrw posterior logpdf_and_grad", |b| {
        b.iter(|| model.logpdf_and_grad(black_box(&x), &mut grad))
    });
    let config = SamplerConfig {
        warmup_steps: 200,
        sample_steps: 200,
        ..SamplerConfig::default()
    };
    let mut group = c.benchmark_group("nuts");
    group.sample_size(10);
    group.bench_function("vrw 200+200", |b| {
        b.iter(|| nuts_sample(&model, &x, &config).unwrap())
    });
    group.finish();
}

fn ks(c: &mut Criterion) {
    let xs: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
    c.bench_function("ks_one_sample n=1e4", |b| {
        b.iter(|| ks_one_sample(black_box(&xs), |x| x).unwrap())
    });
}

criterion_group!(benches, densities, backbone, posterior, ks);
criterion_main!(benches);
