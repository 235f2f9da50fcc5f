//! Strict complementarity partition of `Ax = 0, x >= 0` versus `A'y >= 0`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::matrix::{is_nonneg, Rational, RationalMatrix};
use super::simplex::{solve_lp_exact, Bound, LpStatus};
use crate::error::{check_dim, Result};

pub type IndexSet = BTreeSet<usize>;

/// `max x_i  s.t.  Ax = 0, x >= 0, x_i <= 1`. The value is 0 or 1.
fn primal_probe(a: &RationalMatrix, i: usize) -> Result<(bool, Vec<Rational>)> {
    let n = a.cols();
    let mut c = vec![Rational::zero(); n];
    c[i] = Rational::one();
    let mut bounds = vec![Bound::nonneg(); n];
    bounds[i] = Bound::between(Rational::zero(), Rational::one());
    let res = solve_lp_exact(&c, a, &vec![Rational::zero(); a.rows()], &bounds)?;
    debug_assert_eq!(res.status, LpStatus::Optimal);
    let positive = res.optimal_value.as_ref().is_some_and(Signed::is_positive);
    Ok((positive, res.primal))
}

/// `max a_i'y  s.t.  A'y >= 0, a_i'y <= 1`, written over `(y, w)` with
/// `A'y - w = 0`, `w >= 0` and `w_i <= 1`. Returns the `y` part.
fn dual_probe(a: &RationalMatrix, i: usize) -> Result<(bool, Vec<Rational>)> {
    let (m, n) = (a.rows(), a.cols());
    let at = a.transpose();
    let mut lhs = RationalMatrix::zeros(n, m + n);
    for j in 0..n {
        for k in 0..m {
            lhs.set(j, k, at.get(j, k).clone());
        }
        lhs.set(j, m + j, -Rational::one());
    }
    let mut c = vec![Rational::zero(); m + n];
    c[m + i] = Rational::one();
    let mut bounds = vec![Bound::free(); m];
    bounds.extend((0..n).map(|_| Bound::nonneg()));
    bounds[m + i] = Bound::between(Rational::zero(), Rational::one());
    let res = solve_lp_exact(&c, &lhs, &vec![Rational::zero(); n], &bounds)?;
    debug_assert_eq!(res.status, LpStatus::Optimal);
    let positive = res.optimal_value.as_ref().is_some_and(Signed::is_positive);
    Ok((positive, res.primal[..m].to_vec()))
}

fn nonempty(a: &RationalMatrix) -> IndexSet {
    (0..a.cols()).collect()
}

/// Column partition `(B, N)` (zero-based) of the Goldman–Tucker theorem.
///
/// `i` is in `B` exactly when some `x >= 0` with `Ax = 0` has `x_i > 0`.
pub fn gt_partition_exact(a: &RationalMatrix) -> Result<(IndexSet, IndexSet)> {
    let mut b = IndexSet::new();
    for i in 0..a.cols() {
        if primal_probe(a, i)?.0 {
            b.insert(i);
        }
    }
    let n = nonempty(a).difference(&b).copied().collect();
    Ok((b, n))
}

/// A strictly complementary pair built by summing per-index maximizers.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictPair {
    pub b: IndexSet,
    pub n: IndexSet,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl StrictPair {
    /// Substitutes into both systems: `Ax = 0, x >= 0, x_B > 0` and
    /// `A'y >= 0, (A'y)_N > 0`, and `x + A'y > 0`.
    pub fn verify(&self, a: &RationalMatrix) -> bool {
        let (Ok(ax), Ok(aty)) = (a.mul_vec(&self.x), a.tr_mul_vec(&self.y)) else {
            return false;
        };
        ax.iter().all(Zero::is_zero)
            && self.x.iter().all(is_nonneg)
            && aty.iter().all(is_nonneg)
            && self.b.iter().all(|&i| self.x[i].is_positive())
            && self.n.iter().all(|&i| aty[i].is_positive())
            && self
                .x
                .iter()
                .zip(&aty)
                .all(|(x, s)| (x + s).is_positive())
    }
}

pub fn strict_pair_exact(a: &RationalMatrix) -> Result<StrictPair> {
    let (m, n) = (a.rows(), a.cols());
    let mut x = vec![Rational::zero(); n];
    let mut y = vec![Rational::zero(); m];
    let mut b_set = IndexSet::new();
    let mut n_set = IndexSet::new();
    for i in 0..n {
        let (pos, xi) = primal_probe(a, i)?;
        if pos {
            b_set.insert(i);
            x.iter_mut().zip(&xi).for_each(|(acc, v)| *acc += v);
        } else {
            let (dpos, yi) = dual_probe(a, i)?;
            debug_assert!(dpos, "index {i} in neither B nor N");
            n_set.insert(i);
            y.iter_mut().zip(&yi).for_each(|(acc, v)| *acc += v);
        }
    }
    Ok(StrictPair {
        b: b_set,
        n: n_set,
        x,
        y,
    })
}

/// Whether `v` lies in the lineality space of the cone `A R^n_+`.
///
/// `v` is in the lineality space iff both `v` and `-v` are nonnegative
/// combinations of the columns. The check on `v` itself is skipped when `v`
/// is a column.
pub fn lineality_membership(a: &RationalMatrix, v: &[Rational]) -> Result<bool> {
    check_dim("lineality_membership", a.rows(), v.len())?;
    let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
    if !in_cone(a, &neg)? {
        return Ok(false);
    }
    let is_column = (0..a.cols()).any(|j| (0..a.rows()).all(|i| a.get(i, j) == &v[i]));
    Ok(is_column || in_cone(a, v)?)
}

fn in_cone(a: &RationalMatrix, v: &[Rational]) -> Result<bool> {
    let n = a.cols();
    let res = solve_lp_exact(
        &vec![Rational::zero(); n],
        a,
        v,
        &vec![Bound::nonneg(); n],
    )?;
    Ok(res.status == LpStatus::Optimal)
}

/// `(B, N)` computed three independent ways.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeWay {
    pub columns: usize,
    /// Existence of a solution with a positive entry (resp. positive slack).
    pub feasibility: (IndexSet, IndexSet),
    /// Implications forcing a zero slack (resp. a zero entry).
    pub implication: (IndexSet, IndexSet),
    /// Membership of the column in `Lin(A R^n_+)`.
    pub lineality: (IndexSet, IndexSet),
}

impl ThreeWay {
    pub fn agree(&self) -> bool {
        let (b, n) = &self.feasibility;
        b.is_disjoint(n)
            && b.len() + n.len() == self.columns
            && self.feasibility == self.implication
            && self.implication == self.lineality
    }
}

pub fn three_way_descriptions(a: &RationalMatrix) -> Result<ThreeWay> {
    let cols = a.cols();
    let mut primal_pos = vec![false; cols];
    let mut dual_pos = vec![false; cols];
    for i in 0..cols {
        primal_pos[i] = primal_probe(a, i)?.0;
        dual_pos[i] = dual_probe(a, i)?.0;
    }
    let pick = |f: &dyn Fn(usize) -> bool| -> IndexSet { (0..cols).filter(|&i| f(i)).collect() };

    let feasibility = (pick(&|i| primal_pos[i]), pick(&|i| dual_pos[i]));
    let implication = (pick(&|i| !dual_pos[i]), pick(&|i| !primal_pos[i]));
    let mut lin = vec![false; cols];
    for (i, l) in lin.iter_mut().enumerate() {
        *l = lineality_membership(a, &a.column(i))?;
    }
    let lineality = (pick(&|i| lin[i]), pick(&|i| !lin[i]));
    Ok(ThreeWay {
        columns: cols,
        feasibility,
        implication,
        lineality,
    })
}

/// True when the three descriptions of `(B, N)` coincide and partition the
/// columns.
pub fn three_way_check(a: &RationalMatrix) -> Result<bool> {
    Ok(three_way_descriptions(a)?.agree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSet {
        v.iter().copied().collect()
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn fixture() -> RationalMatrix {
        RationalMatrix::from_int_rows(&[vec![1, -1, 0], vec![0, 0, 1]]).unwrap()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(gt_partition_exact(&fixture()).unwrap(), (set(&[0, 1]), set(&[2])));
        let ones = RationalMatrix::from_int_rows(&[vec![1, 1]]).unwrap();
        assert_eq!(gt_partition_exact(&ones).unwrap(), (set(&[]), set(&[0, 1])));
        let zero = RationalMatrix::zeros(1, 3);
        assert_eq!(gt_partition_exact(&zero).unwrap(), (set(&[0, 1, 2]), set(&[])));
    }

    #[test]
    fn lineality_examples() {
        let a = fixture();
        assert!(lineality_membership(&a, &a.column(0)).unwrap());
        assert!(!lineality_membership(&a, &a.column(2)).unwrap());
        let zero = RationalMatrix::zeros(2, 2);
        assert!(lineality_membership(&zero, &[q(0), q(0)]).unwrap());
        assert!(!lineality_membership(&zero, &[q(1), q(0)]).unwrap());
        assert!(lineality_membership(&a, &[q(0)]).is_err());
    }

    #[test]
    fn three_way_examples() {
        assert!(three_way_check(&fixture()).unwrap());
        assert!(three_way_check(&RationalMatrix::identity(2)).unwrap());
        let tw = three_way_descriptions(&RationalMatrix::identity(2)).unwrap();
        assert_eq!(tw.lineality, (set(&[]), set(&[0, 1])));
    }

    #[test]
    fn strict_pair_for_fixture() {
        let pair = strict_pair_exact(&fixture()).unwrap();
        assert!(pair.verify(&fixture()));
        assert_eq!(pair.b, set(&[0, 1]));
    }

    #[test]
    fn tampered_pair_fails_verification() {
        let mut pair = strict_pair_exact(&fixture()).unwrap();
        pair.x[0] = q(0);
        assert!(!pair.verify(&fixture()));
    }
}
