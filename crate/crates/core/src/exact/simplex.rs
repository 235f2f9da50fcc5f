//! Dense bounded-variable primal simplex over the rationals.
//!
//! Solves `max c'x  s.t.  Ax = b,  l <= x <= u` with a two-phase method.
//! Phase one adds one signed artificial per row; phase two fixes the
//! artificials at zero. Pivoting follows Bland's smallest-index rule for
//! both the entering and the leaving variable, so the method terminates.

use num_traits::{One, Signed, Zero};

use super::matrix::{Rational, RationalMatrix};
use crate::error::{check_dim, Result};

/// Per-variable box. `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn free() -> Self {
        Bound::default()
    }

    pub fn nonneg() -> Self {
        Bound {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Bound {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    #[cfg(test)]
    fn admits(&self, v: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| l <= v) && self.upper.as_ref().is_none_or(|u| v <= u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Present only when `status == Optimal`.
    pub optimal_value: Option<Rational>,
    pub primal: Vec<Rational>,
    /// Row multipliers `y` with `c - A'y` the reduced costs.
    pub dual: Vec<Rational>,
}

impl LpResult {
    fn without_solution(status: LpStatus, n: usize, m: usize) -> Self {
        LpResult {
            status,
            optimal_value: None,
            primal: vec![Rational::zero(); n],
            dual: vec![Rational::zero(); m],
        }
    }
}

/// Maximizes `c'x` subject to `Ax = b` and the per-variable `bounds`.
pub fn solve_lp_exact(
    c: &[Rational],
    a: &RationalMatrix,
    b: &[Rational],
    bounds: &[Bound],
) -> Result<LpResult> {
    let (m, n) = (a.rows(), a.cols());
    check_dim("solve_lp_exact objective", n, c.len())?;
    check_dim("solve_lp_exact rhs", m, b.len())?;
    check_dim("solve_lp_exact bounds", n, bounds.len())?;

    for bd in bounds {
        if let (Some(l), Some(u)) = (&bd.lower, &bd.upper) {
            if l > u {
                return Ok(LpResult::without_solution(LpStatus::Infeasible, n, m));
            }
        }
    }

    let mut tab = Tableau::new(a, b, bounds);
    let phase_one: Vec<Rational> = (0..n + m)
        .map(|j| if j < n { Rational::zero() } else { -Rational::one() })
        .collect();
    match tab.optimize(&phase_one) {
        Outcome::Optimal => {}
        Outcome::Unbounded => unreachable!("phase one objective is bounded by zero"),
    }
    if tab.objective(&phase_one).is_negative() {
        return Ok(LpResult::without_solution(LpStatus::Infeasible, n, m));
    }
    tab.fix_artificials();

    let mut cost: Vec<Rational> = c.to_vec();
    cost.resize(n + m, Rational::zero());
    let outcome = tab.optimize(&cost);
    let primal = tab.values[..n].to_vec();
    match outcome {
        Outcome::Unbounded => Ok(LpResult {
            status: LpStatus::Unbounded,
            optimal_value: None,
            primal,
            dual: vec![Rational::zero(); m],
        }),
        Outcome::Optimal => {
            let dual = tab.duals(&cost);
            let value = c.iter().zip(&primal).map(|(ci, xi)| ci * xi).sum();
            Ok(LpResult {
                status: LpStatus::Optimal,
                optimal_value: Some(value),
                primal,
                dual,
            })
        }
    }
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    n: usize,
    /// `B^{-1} [A | S]`, one row per constraint.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    values: Vec<Rational>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
    /// Sign of each artificial column `S = diag(sign)`.
    sign: Vec<Rational>,
    iteration_cap: u128,
}

impl Tableau {
    fn new(a: &RationalMatrix, b: &[Rational], bounds: &[Bound]) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut lower: Vec<Option<Rational>> = bounds.iter().map(|bd| bd.lower.clone()).collect();
        let mut upper: Vec<Option<Rational>> = bounds.iter().map(|bd| bd.upper.clone()).collect();
        let mut values: Vec<Rational> = bounds
            .iter()
            .map(|bd| {
                bd.lower
                    .clone()
                    .or_else(|| bd.upper.clone())
                    .unwrap_or_else(Rational::zero)
            })
            .collect();

        let mut rows = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        for i in 0..m {
            let mut residual = b[i].clone();
            for j in 0..n {
                if !values[j].is_zero() {
                    residual -= a.get(i, j) * &values[j];
                }
            }
            let s = if residual.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            // S^{-1} = S, so row i of S^{-1}[A | S] is s_i * a_i followed by e_i.
            let mut row: Vec<Rational> = (0..n).map(|j| a.get(i, j) * &s).collect();
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            rows.push(row);
            values.push(residual.abs());
            sign.push(s);
        }
        lower.extend((0..m).map(|_| Some(Rational::zero())));
        upper.extend((0..m).map(|_| None));

        let mut is_basic = vec![false; n + m];
        is_basic[n..].iter_mut().for_each(|v| *v = true);
        Tableau {
            m,
            n,
            rows,
            basis: (n..n + m).collect(),
            is_basic,
            values,
            lower,
            upper,
            sign,
            iteration_cap: binomial(n + m, m).saturating_mul(2).max(64),
        }
    }

    fn fix_artificials(&mut self) {
        for k in self.n..self.n + self.m {
            self.upper[k] = Some(Rational::zero());
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        cost.iter()
            .zip(&self.values)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * v)
            .sum()
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if !cb.is_zero() && !row[j].is_zero() {
                d -= cb * &row[j];
            }
        }
        d
    }

    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        // Column n+i of the tableau is B^{-1} S e_i.
        (0..self.m)
            .map(|i| {
                let mut y = Rational::zero();
                for (k, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[k]];
                    if !cb.is_zero() && !row[self.n + i].is_zero() {
                        y += cb * &row[self.n + i];
                    }
                }
                y * &self.sign[i]
            })
            .collect()
    }

    /// Bland entering choice: lowest index whose reduced cost improves the
    /// objective in a direction its bounds allow.
    fn entering(&self, cost: &[Rational]) -> Option<(usize, bool)> {
        (0..self.n + self.m).find_map(|j| {
            if self.is_basic[j] {
                return None;
            }
            let d = self.reduced_cost(cost, j);
            let can_inc = self.upper[j].as_ref().is_none_or(|u| &self.values[j] < u);
            let can_dec = self.lower[j].as_ref().is_none_or(|l| &self.values[j] > l);
            if d.is_positive() && can_inc {
                Some((j, true))
            } else if d.is_negative() && can_dec {
                Some((j, false))
            } else {
                None
            }
        })
    }

    fn optimize(&mut self, cost: &[Rational]) -> Outcome {
        let mut iterations: u128 = 0;
        loop {
            let Some((enter, increase)) = self.entering(cost) else {
                return Outcome::Optimal;
            };
            iterations += 1;
            assert!(
                iterations <= self.iteration_cap,
                "simplex exceeded its anti-cycling iteration cap ({})",
                self.iteration_cap
            );

            let dir = if increase { Rational::one() } else { -Rational::one() };
            // Step limit and the variable that blocks it (Bland: lowest index on ties).
            let mut best: Option<(Rational, usize, Option<usize>)> = None;
            let mut consider = |theta: Rational, var: usize, row: Option<usize>| match &best {
                Some((t, v, _)) if theta > *t || (theta == *t && var >= *v) => {}
                _ => best = Some((theta, var, row)),
            };
            if let (Some(l), Some(u)) = (&self.lower[enter], &self.upper[enter]) {
                consider(u - l, enter, None);
            }
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_zero() {
                    continue;
                }
                let var = self.basis[i];
                let rate = -(&row[enter] * &dir);
                let limit = if rate.is_positive() {
                    self.upper[var].as_ref().map(|u| (u - &self.values[var]) / &rate)
                } else {
                    self.lower[var].as_ref().map(|l| (l - &self.values[var]) / &rate)
                };
                if let Some(theta) = limit {
                    consider(theta, var, Some(i));
                }
            }
            let Some((theta, _, pivot_row)) = best else {
                return Outcome::Unbounded;
            };

            if !theta.is_zero() {
                let step = &theta * &dir;
                self.values[enter] += &step;
                for i in 0..self.m {
                    let a = &self.rows[i][enter];
                    if !a.is_zero() {
                        let delta = a * &step;
                        self.values[self.basis[i]] -= delta;
                    }
                }
            }
            if let Some(r) = pivot_row {
                let leaving = self.basis[r];
                self.snap_to_bound(leaving);
                self.pivot(r, enter);
                self.is_basic[leaving] = false;
                self.is_basic[enter] = true;
                self.basis[r] = enter;
            } else {
                self.snap_to_bound(enter);
            }
        }
    }

    fn snap_to_bound(&mut self, var: usize) {
        let v = &self.values[var];
        if let Some(l) = &self.lower[var] {
            if v <= l {
                self.values[var] = l.clone();
                return;
            }
        }
        if let Some(u) = &self.upper[var] {
            if v >= u {
                self.values[var] = u.clone();
            }
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, pr) in row.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *x -= &f * pr;
                }
            }
        }
        self.rows[r] = pivot_row;
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Checks primal feasibility and complementary slackness of an optimal
/// result by direct substitution.
#[cfg(test)]
pub(crate) fn certifies_optimality(
    c: &[Rational],
    a: &RationalMatrix,
    b: &[Rational],
    bounds: &[Bound],
    res: &LpResult,
) -> bool {
    if res.status != LpStatus::Optimal {
        return false;
    }
    let Ok(ax) = a.mul_vec(&res.primal) else {
        return false;
    };
    if ax != b || !res.primal.iter().zip(bounds).all(|(x, bd)| bd.admits(x)) {
        return false;
    }
    let Ok(aty) = a.tr_mul_vec(&res.dual) else {
        return false;
    };
    // Reduced cost d_j = c_j - a_j'y must push against an active bound.
    c.iter().zip(&aty).zip(&res.primal).zip(bounds).all(|(((cj, ay), x), bd)| {
        let d = cj - ay;
        let at_lower = bd.lower.as_ref() == Some(x);
        let at_upper = bd.upper.as_ref() == Some(x);
        d.is_zero() || (d.is_negative() && at_lower) || (d.is_positive() && at_upper)
    })
}
