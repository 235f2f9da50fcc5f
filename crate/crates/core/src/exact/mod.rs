//! Exact rational linear programming and the polyhedral strict
//! complementarity partition computed on top of it.

mod goldman_tucker;
mod matrix;
mod simplex;

pub use goldman_tucker::{
    gt_partition_exact, lineality_membership, strict_pair_exact, three_way_check,
    three_way_descriptions, StrictPair, ThreeWay,
};
pub use matrix::{parse_rational, Rational, RationalMatrix};
pub use simplex::{solve_lp_exact, Bound, LpResult, LpStatus};
