use std::hint::black_box;

use cext_core::cohomology::cocycle_equations;
use cext_core::orbits::{enumerate_automorphisms_with, orbits_on_t1, OrbitOptions, DEFAULT_BUDGET};
use cext_core::{builtin_variety, Algebra, Exec, FieldSpec};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn t1_orbits(c: &mut Criterion) {
    let mut g = c.benchmark_group("t1_orbits");
    g.sample_size(10);
    let lc = builtin_variety("lc").unwrap();
    for (n, p) in [(3usize, 5u64), (4, 3), (4, 5)] {
        let f = FieldSpec::prime(p).unwrap();
        for (name, exec) in STRATEGIES {
            let opts = OrbitOptions {
                exec,
                ..OrbitOptions::default()
            };
            g.bench_with_input(BenchmarkId::new(name, format!("n{n}_F{p}")), &opts, |b, o| {
                b.iter(|| orbits_on_t1(black_box(n), &lc, f, o).unwrap())
            });
        }
    }
    g.finish();
}

fn automorphisms(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_automorphisms");
    let f = FieldSpec::prime(5).unwrap();
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, "n5_F5"), |b| {
            b.iter(|| enumerate_automorphisms_with(black_box(5), f, DEFAULT_BUDGET, exec).unwrap())
        });
    }
    g.finish();
}

fn equations(c: &mut Criterion) {
    let mut g = c.benchmark_group("cocycle_equations");
    g.sample_size(10);
    let jordan = builtin_variety("jordan").unwrap();
    let a = Algebra::null_filiform(6, FieldSpec::rationals()).unwrap();
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, "jordan_n6_Q"), |b| {
            b.iter(|| cocycle_equations(black_box(&a), &jordan, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, t1_orbits, automorphisms, equations);
criterion_main!(benches);
