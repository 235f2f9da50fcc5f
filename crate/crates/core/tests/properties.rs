mod common;

use proptest::prelude::*;

use conic_partition::cone::ConeKind;
use conic_partition::exact::{gt_partition_exact, Rational, RationalMatrix};
use conic_partition::geometry::{
    geometric_classify_polyhedral, inclusion_subtests, lineality_space_polyhedral, remark1_inclusion_check,
    BaseSetImage, ImageKind,
};
use conic_partition::io::{generate, BlockSpec, Entry, GenOptions, Planted, ProblemFile};
use conic_partition::partition::{classify, ConicSystem, IndexClass, IndexSet, PartitionReport};
use conic_partition::solver::SolverConfig;

fn entry() -> impl Strategy<Value = Entry> {
    prop_oneof![
        (-20i64..=20).prop_map(Entry::from),
        (-20i64..=20, 1i64..=9).prop_map(|(p, q)| Entry::Exact(Rational::new(p.into(), q.into()))),
        (-1e3f64..1e3).prop_map(Entry::Float),
    ]
}

fn block() -> impl Strategy<Value = BlockSpec> {
    prop_oneof![
        (1usize..=3).prop_map(|dim| BlockSpec { kind: ConeKind::Orthant, dim }),
        (2usize..=4).prop_map(|dim| BlockSpec { kind: ConeKind::SecondOrder, dim }),
    ]
}

fn problem() -> impl Strategy<Value = ProblemFile> {
    (prop::collection::vec(block(), 1..=4), 1usize..=4).prop_flat_map(|(blocks, m)| {
        let n: usize = blocks.iter().map(|b| b.dim).sum();
        prop::collection::vec(prop::collection::vec(entry(), n), m).prop_map(move |a| ProblemFile {
            name: "prop".into(),
            blocks: blocks.clone(),
            a,
            expected: None,
        })
    })
}

fn int_matrix(m: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), m)
}

fn orthant_system(rows: &[Vec<i64>]) -> ConicSystem {
    let n = rows[0].len();
    ProblemFile {
        name: "rows".into(),
        blocks: vec![BlockSpec { kind: ConeKind::Orthant, dim: 1 }; n],
        a: rows.iter().map(|r| r.iter().map(|&v| Entry::from(v)).collect()).collect(),
        expected: None,
    }
    .to_system()
    .unwrap()
}

fn classes(report: &PartitionReport) -> Vec<Option<IndexClass>> {
    report.classes.clone()
}

fn partitions_blocks(report: &PartitionReport, r: usize) -> bool {
    let mut all = IndexSet::new();
    let mut total = 0;
    for c in IndexClass::ORDER {
        let m = report.members(c);
        total += m.len();
        all.extend(m);
    }
    total == r && all == (0..r).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn problem_files_round_trip(p in problem()) {
        let text = p.to_json();
        let back = ProblemFile::parse(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn classify_matches_exact_partition(rows in (1usize..=4, 1usize..=7).prop_flat_map(|(m, n)| int_matrix(m, n))) {
        let sys = orthant_system(&rows);
        let report = classify(&sys, &SolverConfig::default()).unwrap();
        prop_assert!(report.is_full());
        let (b, n) = gt_partition_exact(&sys.rational_matrix()).unwrap();
        prop_assert_eq!(&report.base_sets.b, &b);
        prop_assert_eq!(&report.base_sets.n, &n);
        prop_assert!(partitions_blocks(&report, sys.num_blocks()));
    }

    #[test]
    fn row_operations_and_scaling_preserve_classes(
        rows in (2usize..=4, 2usize..=7).prop_flat_map(|(m, n)| int_matrix(m, n)),
        factor in prop_oneof![Just(-3i64), Just(2), Just(5)],
    ) {
        let base = classify(&orthant_system(&rows), &SolverConfig::default()).unwrap();
        let mut mixed = rows.clone();
        for j in 0..mixed[0].len() {
            mixed[0][j] *= factor;
            mixed[1][j] += rows[0][j];
        }
        let other = classify(&orthant_system(&mixed), &SolverConfig::default()).unwrap();
        prop_assert_eq!(classes(&base), classes(&other));
    }

    #[test]
    fn column_permutation_permutes_classes(rows in (1usize..=4, 2usize..=7).prop_flat_map(|(m, n)| int_matrix(m, n))) {
        let reversed: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let a = classes(&classify(&orthant_system(&rows), &SolverConfig::default()).unwrap());
        let mut b = classes(&classify(&orthant_system(&reversed), &SolverConfig::default()).unwrap());
        b.reverse();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn inclusion_subtests_agree_on_column_pairs(
        rows in int_matrix(3, 6),
        i in 0usize..6,
        j in 0usize..6,
    ) {
        let a = RationalMatrix::from_int_rows(&rows).unwrap();
        let lin = lineality_space_polyhedral(&a).unwrap();
        let image = BaseSetImage { kind: ImageKind::Polytope(vec![a.column(i), a.column(j)]), block: 0 };
        let check = inclusion_subtests(&image, &lin).unwrap();
        prop_assert!(check.agree(), "{:?}", check);
        prop_assert_eq!(remark1_inclusion_check(&image, &lin).unwrap(), check.vertices_inside);
    }

    #[test]
    fn geometric_partition_is_the_exact_one(rows in (1usize..=5, 1usize..=8).prop_flat_map(|(m, n)| int_matrix(m, n))) {
        let a = RationalMatrix::from_int_rows(&rows).unwrap();
        prop_assert_eq!(geometric_classify_polyhedral(&a).unwrap(), gt_partition_exact(&a).unwrap());
    }
}

#[test]
fn mixed_corpus_partitions_and_inclusions() {
    for sys in common::systems(&common::mixed_corpus(40, 5)) {
        let report = classify(&sys, &SolverConfig::default()).unwrap();
        assert!(report.is_full(), "{report}");
        assert!(partitions_blocks(&report, sys.num_blocks()));
        assert!(report.base_sets.inclusions_hold(), "{:?}", report.base_sets);
    }
}

#[test]
fn polyhedral_classes_avoid_the_primed_sets() {
    for sys in common::systems(&common::polyhedral_corpus(40, 9)) {
        let report = classify(&sys, &SolverConfig::default()).unwrap();
        for c in [IndexClass::InO, IndexClass::InBPrime, IndexClass::InNPrime, IndexClass::InC] {
            assert!(report.members(c).is_empty(), "{report}");
        }
    }
}

#[test]
fn generator_respects_density_and_range() {
    let opts = GenOptions {
        seed: 1,
        m: 6,
        blocks: vec![BlockSpec { kind: ConeKind::Orthant, dim: 1 }; 40],
        density: 0.0,
        planted: Planted::None,
    };
    assert!(generate(&opts).unwrap().a.iter().flatten().all(Entry::is_zero));
    let dense = generate(&GenOptions { density: 1.0, ..opts }).unwrap();
    assert!(dense.is_exact());
    assert!(dense.a.iter().flatten().all(|e| (-2.0..=2.0).contains(&e.to_f64())));
}
