use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use knotforge::knots::{crossings_with, CrossingOptions};
use knotforge::mesh::sample_surface_with;
use knotforge::{arc_from_curve, catalog_get, injectivity_check, spin, CheckOptions, Exec, Form};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sampling(c: &mut Criterion) {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let surf = spin::spun_surface(&arc);
    let mut group = c.benchmark_group("sample_spun_trefoil_400x400");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sample_surface_with(black_box(&surf), Form::Exact, 400, 400, exec).unwrap())
        });
    }
    group.finish();
}

fn injectivity(c: &mut Criterion) {
    let arc = arc_from_curve(&catalog_get("trefoil-arc").unwrap()).unwrap();
    let mesh = sample_surface_with(&spin::spun_surface(&arc), Form::Exact, 200, 200, Exec::Sequential).unwrap();
    let mut group = c.benchmark_group("injectivity_200x200");
    group.sample_size(20);
    for (name, exec) in MODES {
        let opts = CheckOptions { exec, ..CheckOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| injectivity_check(black_box(&mesh), &opts).unwrap())
        });
    }
    group.finish();
}

fn crossing_scan(c: &mut Criterion) {
    let torus = catalog_get("torus-2-7").unwrap();
    let mut group = c.benchmark_group("crossings_torus_2_7");
    group.sample_size(20);
    for (name, exec) in MODES {
        let opts = CrossingOptions { exec, ..CrossingOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| crossings_with(black_box(&torus), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sampling, injectivity, crossing_scan);
criterion_main!(benches);
