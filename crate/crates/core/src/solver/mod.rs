//! Primal-dual interior-point solver for
//!
//! ```text
//!   min  c'x   s.t.  Ax = b,  x in K x R^f
//! ```
//!
//! where `K` is a product of orthant and Lorentz blocks and the last `f`
//! coordinates are free. The dual is `max b'y  s.t.  c - A'y = s,
//! s in K* x {0}`.

mod hsde;
mod kkt;
mod scaling;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cone::{margin_unchecked, MultifoldCone};
use crate::error::{check_dim, Error, Result};

pub use hsde::solve;

/// Indices of a maximal set of numerically independent rows of `a`,
/// chosen greedily in order.
pub(crate) fn independent_rows(a: &DMatrix<f64>) -> Vec<usize> {
    hsde::reduce_rows(a, &vec![0.0; a.nrows()])
        .map(|r| r.kept)
        .unwrap_or_default()
}

#[derive(Debug, Clone)]
pub struct ConicProgram {
    pub objective: Vec<f64>,
    pub matrix: DMatrix<f64>,
    pub rhs: Vec<f64>,
    pub cone: MultifoldCone,
    /// Count of unconstrained variables stored after the cone coordinates.
    pub free_dims: usize,
}

impl ConicProgram {
    pub fn new(
        objective: Vec<f64>,
        matrix: DMatrix<f64>,
        rhs: Vec<f64>,
        cone: MultifoldCone,
        free_dims: usize,
    ) -> Result<Self> {
        let n = cone.dim() + free_dims;
        check_dim("ConicProgram objective", n, objective.len())?;
        check_dim("ConicProgram matrix columns", n, matrix.ncols())?;
        check_dim("ConicProgram rhs", matrix.nrows(), rhs.len())?;
        Ok(ConicProgram {
            objective,
            matrix,
            rhs,
            cone,
            free_dims,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.cone.dim() + self.free_dims
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub max_iter: usize,
    /// Threshold `eps` separating zero from positive auxiliary optima.
    pub classification_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            max_iter: 200,
            classification_eps: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.feas_tol > 0.0
            && self.gap_tol > 0.0
            && self.feas_tol < self.classification_eps
            && self.gap_tol < self.classification_eps
            && self.classification_eps < 1.0
            && self.max_iter > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "need 0 < feas_tol, gap_tol < classification_eps < 1 and max_iter > 0, got {self:?}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    IterLimit,
    Numerical,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Dual slack, zero on the free coordinates.
    pub s: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `|c'x - b'y| / (1 + |c'x|)`.
    pub duality_gap: f64,
    pub iterations: usize,
    /// Complementarity measure `mu` of the embedding at each iterate.
    pub mu_history: Vec<f64>,
}

impl Solution {
    pub fn primal_objective(&self, program: &ConicProgram) -> f64 {
        crate::cone::dot(&program.objective, &self.x)
    }

    pub fn dual_objective(&self, program: &ConicProgram) -> f64 {
        crate::cone::dot(&program.rhs, &self.y)
    }
}

/// Residuals of a candidate recomputed from the program data alone:
/// `||Ax - b||`, `||c - A'y - s||` plus the cone violation of `s`, and
/// `|c'x - b'y|`.
pub fn residuals(program: &ConicProgram, candidate: &Solution) -> Result<(f64, f64, f64)> {
    let n = program.num_vars();
    let m = program.num_rows();
    check_dim("residuals x", n, candidate.x.len())?;
    check_dim("residuals y", m, candidate.y.len())?;
    check_dim("residuals s", n, candidate.s.len())?;

    let a = &program.matrix;
    let primal = (0..m)
        .map(|i| {
            let ax: f64 = (0..n).map(|j| a[(i, j)] * candidate.x[j]).sum();
            (ax - program.rhs[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt();

    let mut dual_sq = 0.0;
    for j in 0..n {
        let aty: f64 = (0..m).map(|i| a[(i, j)] * candidate.y[i]).sum();
        dual_sq += (program.objective[j] - aty - candidate.s[j]).powi(2);
    }
    let cone = &program.cone;
    let violation: f64 = (0..cone.num_blocks())
        .map(|i| (-margin_unchecked(&cone.blocks()[i], &candidate.s[cone.range(i)])).max(0.0))
        .sum();
    let free_slack = crate::cone::norm2(&candidate.s[cone.dim()..]);
    let dual = dual_sq.sqrt() + violation + free_slack;

    let gap = (candidate.primal_objective(program) - candidate.dual_objective(program)).abs();
    Ok((primal, dual, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeBlock;

    fn cone(blocks: Vec<ConeBlock>) -> MultifoldCone {
        MultifoldCone::new(blocks).unwrap()
    }

    #[test]
    fn single_orthant_variable() {
        let p = ConicProgram::new(
            vec![1.0],
            DMatrix::from_row_slice(1, 1, &[1.0]),
            vec![1.0],
            cone(vec![ConeBlock::orthant(1).unwrap()]),
            0,
        )
        .unwrap();
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective(&p) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn lorentz_norm_of_three_four() {
        let p = ConicProgram::new(
            vec![1.0, 0.0, 0.0],
            DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
            vec![3.0, 4.0],
            cone(vec![ConeBlock::second_order(3).unwrap()]),
            0,
        )
        .unwrap();
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective(&p) - 5.0).abs() < 1e-7, "{:?}", sol.x);
    }

    #[test]
    fn free_variable_max_min() {
        // Variables (z1, z2, t) with z = x - t e in R^2_+, x1 + x2 = 1:
        // z1 + z2 + 2t = 1, minimize -t.
        let p = ConicProgram::new(
            vec![0.0, 0.0, -1.0],
            DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 2.0]),
            vec![1.0],
            cone(vec![ConeBlock::orthant(2).unwrap()]),
            1,
        )
        .unwrap();
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.x[2] - 0.5).abs() < 1e-7, "{:?}", sol.x);
        assert_eq!(sol.s[2], 0.0);
    }

    #[test]
    fn residuals_of_exact_optimum_vanish() {
        let p = ConicProgram::new(
            vec![1.0],
            DMatrix::from_row_slice(1, 1, &[1.0]),
            vec![1.0],
            cone(vec![ConeBlock::orthant(1).unwrap()]),
            0,
        )
        .unwrap();
        let exact = Solution {
            status: SolveStatus::Optimal,
            x: vec![1.0],
            y: vec![1.0],
            s: vec![0.0],
            primal_residual: 0.0,
            dual_residual: 0.0,
            duality_gap: 0.0,
            iterations: 0,
            mu_history: vec![],
        };
        let (pr, dr, gap) = residuals(&p, &exact).unwrap();
        assert!(pr <= f64::EPSILON && dr <= f64::EPSILON && gap <= f64::EPSILON);
    }

    #[test]
    fn residuals_scale_with_perturbation() {
        let p = ConicProgram::new(
            vec![0.0, 0.0],
            DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 4.0, 1.0]),
            vec![3.0, 4.0],
            cone(vec![ConeBlock::orthant(2).unwrap()]),
            0,
        )
        .unwrap();
        let cand = Solution {
            status: SolveStatus::Optimal,
            x: vec![1.0 + 1e-3, 0.0],
            y: vec![0.0, 0.0],
            s: vec![0.0, 0.0],
            primal_residual: 0.0,
            dual_residual: 0.0,
            duality_gap: 0.0,
            iterations: 0,
            mu_history: vec![],
        };
        let (pr, _, _) = residuals(&p, &cand).unwrap();
        assert!((pr - 5e-3).abs() < 1e-12);
        let short = Solution { x: vec![1.0], ..cand };
        assert!(residuals(&p, &short).is_err());
    }

    #[test]
    fn infeasible_and_unbounded_programs() {
        // x >= 0, x = -1
        let p = ConicProgram::new(
            vec![0.0],
            DMatrix::from_row_slice(1, 1, &[1.0]),
            vec![-1.0],
            cone(vec![ConeBlock::orthant(1).unwrap()]),
            0,
        )
        .unwrap();
        assert_eq!(solve(&p, &SolverConfig::default()).unwrap().status, SolveStatus::PrimalInfeasible);
        // min -x1 s.t. x1 - x2 = 0, x >= 0
        let p = ConicProgram::new(
            vec![-1.0, 0.0],
            DMatrix::from_row_slice(1, 2, &[1.0, -1.0]),
            vec![0.0],
            cone(vec![ConeBlock::orthant(2).unwrap()]),
            0,
        )
        .unwrap();
        assert_eq!(solve(&p, &SolverConfig::default()).unwrap().status, SolveStatus::DualInfeasible);
    }

    #[test]
    fn dependent_rows_are_tolerated() {
        let p = ConicProgram::new(
            vec![1.0, 2.0],
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 2.0, 2.0]),
            vec![1.0, 2.0],
            cone(vec![ConeBlock::orthant(2).unwrap()]),
            0,
        )
        .unwrap();
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective(&p) - 1.0).abs() < 1e-7);
        let bad = ConicProgram { rhs: vec![1.0, 3.0], ..p };
        assert_eq!(solve(&bad, &SolverConfig::default()).unwrap().status, SolveStatus::PrimalInfeasible);
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            classification_eps: 1e-9,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }
}
