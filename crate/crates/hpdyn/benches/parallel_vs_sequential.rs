//! Compares the data-parallel batch paths (rayon under the `parallel`
//! feature) against hand-rolled sequential loops over the same public API.
//! The workloads are the crate's natural fan-outs: residual grids and
//! whole-catalog consolidation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hpdyn::catalog::{catalog, StepLabel};
use hpdyn::criteria;
use hpdyn::koenigs;
use hpdyn::{Config, HerglotzTriplet, UpperHalfPoint};

fn bench_config() -> Config {
    Config {
        hyperbolic_budget: 200,
        ..Config::default()
    }
}

fn residual_grid() -> Vec<UpperHalfPoint> {
    let mut g = Vec::new();
    for i in 0..6 {
        for j in 0..4 {
            g.push(UpperHalfPoint::new(-2.0 + i as f64, 0.5 + j as f64).unwrap());
        }
    }
    g
}

fn abel_residual_grid(c: &mut Criterion) {
    let cfg = bench_config();
    let f = HerglotzTriplet::new(
        2.0,
        0.0,
        hpdyn::FiniteMeasure::new(
            vec![],
            vec![hpdyn::DensityComponent::new(hpdyn::DensityFamily::Gaussian, 1.0).unwrap()],
        )
        .unwrap(),
    )
    .unwrap();
    let h = koenigs::valiron_koenigs(&f, 60, &cfg).unwrap();
    let grid = residual_grid();

    let mut group = c.benchmark_group("abel_residual_grid");
    group.sample_size(10);
    // Library path: fans the grid out via the parallel helper.
    group.bench_function("batch", |b| {
        b.iter(|| h.abel_residual(black_box(&grid), &cfg).unwrap())
    });
    // Sequential reference: same work, one point at a time.
    group.bench_function("seq", |b| {
        b.iter(|| {
            let mut max = 0.0_f64;
            for z in &grid {
                let r = h
                    .abel_residual(std::slice::from_ref(black_box(z)), &cfg)
                    .unwrap();
                max = max.max(r);
            }
            max
        })
    });
    group.finish();
}

fn catalog_consolidation(c: &mut Criterion) {
    let cfg = bench_config();
    let maps: Vec<HerglotzTriplet> = catalog()
        .into_iter()
        .filter(|e| e.step == StepLabel::Hyperbolic)
        .map(|e| e.triplet)
        .collect();

    let mut group = c.benchmark_group("catalog_consolidation");
    group.sample_size(10);
    group.bench_function("batch", |b| {
        b.iter(|| {
            hpdyn::par::map_collect(maps.clone(), |f| {
                criteria::consolidate(black_box(&f), &cfg).map(|r| r.extremal)
            })
        })
    });
    group.bench_function("seq", |b| {
        b.iter(|| {
            maps.iter()
                .map(|f| criteria::consolidate(black_box(f), &cfg).map(|r| r.extremal))
                .collect::<Vec<_>>()
        })
    });
    group.finish();
}

criterion_group!(benches, abel_residual_grid, catalog_consolidation);
criterion_main!(benches);
