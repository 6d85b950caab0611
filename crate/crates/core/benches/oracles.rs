use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use toric_core::complex::{in_polyhedral_product, underlying_complex, Arrangement, PointInProduct};
use toric_core::fan::BuiltinFan;
use toric_core::hermite::{random_points, verify_rank_claim};
use toric_core::oracle::trial_rng;
use toric_core::par::{map_collect, map_collect_seq};
use num_complex::Complex64;

fn rank_trial(i: usize) -> bool {
    let mut rng = trial_rng(1, i);
    let points = random_points(&mut rng, 4, 50);
    verify_rank_claim(&points, 3, 24).unwrap().holds
}

fn vandermonde(c: &mut Criterion) {
    let mut g = c.benchmark_group("vandermonde_rank");
    g.sample_size(10);
    for trials in [16usize, 64] {
        g.bench_with_input(BenchmarkId::new("parallel", trials), &trials, |b, &t| b.iter(|| map_collect(0..t, rank_trial)));
        g.bench_with_input(BenchmarkId::new("sequential", trials), &trials, |b, &t| b.iter(|| map_collect_seq(0..t, rank_trial)));
    }
    g.finish();
}

fn complement(c: &mut Criterion) {
    let fan = BuiltinFan::ProjectiveSpace(11).build().unwrap();
    let k = underlying_complex(&fan).unwrap();
    let arr = Arrangement::of_fan(&fan).unwrap();
    let check = |mask: u64| {
        let blocks = (0..12).map(|i| vec![if mask >> i & 1 == 1 { Complex64::new(0.0, 0.0) } else { Complex64::new(1.0, 0.5) }; 2]).collect();
        let x = PointInProduct::new(blocks).unwrap();
        in_polyhedral_product(&x, &k, 0.0).unwrap() != arr.contains(&x, 0.0).unwrap()
    };
    let mut g = c.benchmark_group("complement_exhaustive_r12");
    g.bench_function("parallel", |b| b.iter(|| black_box(map_collect(0..1u64 << 12, check))));
    g.bench_function("sequential", |b| b.iter(|| black_box(map_collect_seq(0..1u64 << 12, check))));
    g.finish();
}

criterion_group!(benches, vandermonde, complement);
criterion_main!(benches);
