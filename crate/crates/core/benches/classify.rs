use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use conic_partition::cone::ConeKind;
use conic_partition::io::{generate, BlockSpec, GenOptions, Planted};
use conic_partition::partition::{classify_with, ClassifyOptions, ConicSystem, Method};
use conic_partition::solver::SolverConfig;

fn corpus() -> Vec<ConicSystem> {
    (0..8)
        .map(|k| {
            let blocks = vec![
                BlockSpec { kind: ConeKind::Orthant, dim: 4 },
                BlockSpec { kind: ConeKind::SecondOrder, dim: 3 },
                BlockSpec { kind: ConeKind::Orthant, dim: 1 },
                BlockSpec { kind: ConeKind::SecondOrder, dim: 4 },
                BlockSpec { kind: ConeKind::Orthant, dim: 2 },
                BlockSpec { kind: ConeKind::SecondOrder, dim: 2 },
            ];
            generate(&GenOptions {
                seed: 100 + k,
                m: 4,
                blocks,
                density: 0.7,
                planted: Planted::None,
            })
            .unwrap()
            .to_system()
            .unwrap()
        })
        .collect()
}

fn bench(c: &mut Criterion) {
    let systems = corpus();
    let config = SolverConfig::default();
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    for method in [Method::FacialReduction, Method::AuxiliaryTests] {
        for parallel in [false, true] {
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(format!("{method:?}"), label), &parallel, |b, &parallel| {
                b.iter(|| {
                    for s in &systems {
                        classify_with(s, &config, ClassifyOptions { method, parallel }).unwrap();
                    }
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
