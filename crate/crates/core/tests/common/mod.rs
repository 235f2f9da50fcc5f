#![allow(dead_code)]

use conic_partition::io::{generate, BlockSpec, GenOptions, Planted, ProblemFile};
use conic_partition::cone::ConeKind;
use conic_partition::partition::ConicSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All-orthant instances over one-dimensional blocks, `m <= 6`, `n <= 12`,
/// entries in `[-2, 2]`.
pub fn polyhedral_corpus(count: usize, seed: u64) -> Vec<ProblemFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let m = rng.gen_range(1..=6);
            let n = rng.gen_range(1..=12);
            generate(&GenOptions {
                seed: seed.wrapping_mul(1_000_003).wrapping_add(k as u64),
                m,
                blocks: vec![BlockSpec { kind: ConeKind::Orthant, dim: 1 }; n],
                density: rng.gen_range(0.4..=1.0),
                planted: Planted::None,
            })
            .unwrap()
        })
        .collect()
}

/// Mixed orthant and Lorentz blocks, at least one Lorentz block each.
pub fn mixed_corpus(count: usize, seed: u64) -> Vec<ProblemFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let r = rng.gen_range(1..=5);
            let mut blocks: Vec<BlockSpec> = (0..r)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        BlockSpec { kind: ConeKind::SecondOrder, dim: rng.gen_range(2..=4) }
                    } else {
                        BlockSpec { kind: ConeKind::Orthant, dim: rng.gen_range(1..=2) }
                    }
                })
                .collect();
            if blocks.iter().all(|b| b.kind == ConeKind::Orthant) {
                blocks.push(BlockSpec { kind: ConeKind::SecondOrder, dim: 3 });
            }
            generate(&GenOptions {
                seed: seed.wrapping_mul(1_000_003).wrapping_add(k as u64),
                m: rng.gen_range(1..=4),
                blocks,
                density: rng.gen_range(0.4..=1.0),
                planted: Planted::None,
            })
            .unwrap()
        })
        .collect()
}

pub fn systems(problems: &[ProblemFile]) -> Vec<ConicSystem> {
    problems.iter().map(|p| p.to_system().unwrap()).collect()
}
