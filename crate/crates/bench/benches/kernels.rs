use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use pisom::freegroup::{mu1_of_representation, random_lp_isometry, GeneratorFamily};
use pisom::littlewood::{build_instance, t1_norm, GroupIndexSet, SupportedFunction};
use pisom::pnorm::{a_alpha, opnorm_boyd_default};
use pisom::spectra::{eigenvalues, spectral_radius_sparse};
use pisom::{CayleyBall, PExponent};

fn norms(c: &mut Criterion) {
    let p = PExponent::new(1.5).unwrap();
    let a = a_alpha(0.25);
    c.bench_function("boyd A(alpha) 2x2", |b| b.iter(|| opnorm_boyd_default(black_box(&a), p).unwrap()));
    let fam = GeneratorFamily::new(vec![random_lp_isometry(20, 1), random_lp_isometry(20, 2)]).unwrap();
    let mu = mu1_of_representation(&fam);
    c.bench_function("boyd mu1 20x20", |b| b.iter(|| opnorm_boyd_default(black_box(&mu), p).unwrap()));
}

fn spectra(c: &mut Criterion) {
    let fam = GeneratorFamily::new(vec![random_lp_isometry(20, 3), random_lp_isometry(20, 4)]).unwrap();
    let mu = mu1_of_representation(&fam);
    c.bench_function("eigenvalues 20x20", |b| b.iter(|| eigenvalues(black_box(&mu), 1e-9).unwrap()));
    let ball = CayleyBall::new(2, 8).unwrap();
    c.bench_function("ball(2, 8) enumeration", |b| b.iter(|| CayleyBall::new(2, black_box(8)).unwrap()));
    let mut g = c.benchmark_group("sparse");
    g.sample_size(10);
    g.bench_function("sparse radius ball(2, 8)", |b| b.iter(|| spectral_radius_sparse(black_box(&ball), 1e-12).unwrap()));
    g.finish();
}

fn simplex(c: &mut Criterion) {
    let f = SupportedFunction::free_generators(2);
    let inst = build_instance(&f, GroupIndexSet::FreeBall(CayleyBall::new(2, 3).unwrap())).unwrap();
    let mut g = c.benchmark_group("lp");
    g.sample_size(10);
    g.bench_function("littlewood ball(2, 3)", |b| b.iter(|| t1_norm(black_box(&inst), 1e-10).unwrap()));
    g.finish();
}

criterion_group!(benches, norms, spectra, simplex);
criterion_main!(benches);
