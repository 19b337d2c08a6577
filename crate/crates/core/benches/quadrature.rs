//! Parallel versus sequential evaluation of the main workloads. Both paths
//! return bit-identical values, so the comparison is purely about time.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ptasep_core::bethe::RingGeometry;
use ptasep_core::finite::{default_finite_scheme, joint_cdf_step, FiniteOptions, FiniteQuery, InitialCondition, ProbePoint};
use ptasep_core::limit::{default_limit_scheme, eval_f, LimitOptions, ScaledPoint, ScaledQuery};
use ptasep_core::numerics::{ContourScheme, Execution};
use ptasep_core::sim::{mc_joint_cdf, SimConfig};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn finite_step(c: &mut Criterion) {
    let geom = RingGeometry::new(24, 12).unwrap();
    let q = FiniteQuery::new(vec![ProbePoint { k: 6, a: 0, t: 4.0 }, ProbePoint { k: 8, a: 4, t: 8.0 }]).unwrap();
    let scheme = ContourScheme::fixed(default_finite_scheme(geom, 2).radii, 32);
    let mut group = c.benchmark_group("finite_step_m2_L24");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = FiniteOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| black_box(joint_cdf_step(geom, &q, &scheme, opts).unwrap().value))
        });
    }
    group.finish();
}

fn limit_f(c: &mut Criterion) {
    let q = ScaledQuery::new(vec![ScaledPoint { gamma: 0.0, tau: 1.0, x: -1.0 }, ScaledPoint { gamma: 0.3, tau: 2.0, x: 0.0 }]).unwrap();
    let scheme = ContourScheme::fixed(default_limit_scheme(2).radii, 32);
    let mut group = c.benchmark_group("limit_f_m2");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = LimitOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| black_box(eval_f(&q, &scheme, opts).unwrap().value()))
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let geom = RingGeometry::new(8, 4).unwrap();
    let cfg = SimConfig { geom, initial: InitialCondition::step(geom), horizon: 1.6, seed: 7, samples: 100_000 };
    let q = FiniteQuery::new(vec![ProbePoint { k: 3, a: 0, t: 0.8 }, ProbePoint { k: 2, a: 0, t: 1.6 }]).unwrap();
    let mut group = c.benchmark_group("monte_carlo_1e5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| black_box(mc_joint_cdf(&cfg, &q, None, exec).unwrap().hits))
        });
    }
    group.finish();
}

criterion_group!(benches, finite_step, limit_f, monte_carlo);
criterion_main!(benches);
