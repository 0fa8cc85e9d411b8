use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hypercert_bench::{genus_three, genus_two, spread_divisor};
use hypercert_core::certificate::{check_certificate, verify};
use hypercert_core::{build, h1_dim_via_corank, is_zero_class, nonzero_class, rr_basis};

fn riemann_roch(c: &mut Criterion) {
    let mut group = c.benchmark_group("rr_basis");
    for (name, curve) in [("g2_q", genus_two()), ("g3_f1009", genus_three())] {
        for deg in [2, 6, 10] {
            let d = spread_divisor(&curve, deg - 2, 2);
            group.bench_with_input(BenchmarkId::new(name, deg), &d, |b, d| b.iter(|| rr_basis(&curve, black_box(d)).unwrap()));
        }
    }
    group.finish();
}

fn cohomology(c: &mut Criterion) {
    let curve = genus_three();
    let ambient = spread_divisor(&curve, 1, 2);
    let class = nonzero_class(&curve, &ambient, 0).unwrap();
    c.bench_function("is_zero_class/g3_f1009", |b| b.iter(|| is_zero_class(&curve, black_box(&class)).unwrap()));
    c.bench_function("h1_corank/g3_f1009", |b| b.iter(|| h1_dim_via_corank(&curve, black_box(&ambient)).unwrap()));
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    group.sample_size(10);
    for (name, curve) in [("g2_q", genus_two()), ("g3_f1009", genus_three())] {
        group.bench_function(BenchmarkId::new("build_verify", name), |b| b.iter(|| verify(&build(&curve, 0).unwrap())));
        let cert = verify(&build(&curve, 0).unwrap());
        group.bench_function(BenchmarkId::new("check", name), |b| b.iter(|| check_certificate(black_box(&cert)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, riemann_roch, cohomology, construction);
criterion_main!(benches);
