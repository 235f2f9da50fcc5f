//! The four auxiliary programs deciding membership of one block index in
//! `B`, `N`, the complement of `N0` and the complement of `B0`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::system::ConicSystem;
use crate::cone::{ConeBlock, MultifoldCone};
use crate::error::Result;
use crate::solver::{self, ConicProgram, SolveStatus, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AuxTest {
    InB,
    InN,
    NotInN0,
    NotInB0,
}

impl AuxTest {
    pub const ALL: [AuxTest; 4] = [AuxTest::InB, AuxTest::InN, AuxTest::NotInN0, AuxTest::NotInB0];

    /// Whether the witness is a primal `x` (otherwise a dual `y`).
    pub fn is_primal(self) -> bool {
        matches!(self, AuxTest::InB | AuxTest::NotInN0)
    }
}

/// Optimal value and maximizer of one auxiliary program.
#[derive(Debug, Clone)]
pub struct AuxOutcome {
    pub test: AuxTest,
    pub block: usize,
    pub value: f64,
    pub status: SolveStatus,
    /// `x` in the ambient space for primal tests, `y` in `R^m` for dual ones.
    pub witness: Vec<f64>,
    pub iterations: usize,
}

/// Row-reduced data shared by the auxiliary programs of one system.
pub(crate) struct AuxContext<'a> {
    system: &'a ConicSystem,
    kept: Vec<usize>,
    reduced: DMatrix<f64>,
    config: SolverConfig,
}

impl<'a> AuxContext<'a> {
    pub(crate) fn new(system: &'a ConicSystem, config: SolverConfig) -> Self {
        let a = system.matrix();
        let kept = solver::independent_rows(a);
        let reduced = DMatrix::from_fn(kept.len(), a.ncols(), |r, c| a[(kept[r], c)]);
        AuxContext {
            system,
            kept,
            reduced,
            config,
        }
    }

    fn cone(&self) -> &MultifoldCone {
        self.system.cone()
    }

    /// The interior point `e_i` of block `i` padded with zeros.
    fn lifted_interior(&self, i: usize) -> Vec<f64> {
        let cone = self.cone();
        let mut e = vec![0.0; cone.dim()];
        let r = cone.range(i);
        let block = &cone.blocks()[i];
        e[r].copy_from_slice(&crate::cone::canonical_interior_point(block));
        e
    }

    fn extended_cone(&self, extra: usize) -> MultifoldCone {
        let mut blocks = self.cone().blocks().to_vec();
        if extra > 0 {
            blocks.push(ConeBlock::orthant(extra).expect("positive dimension"));
        }
        MultifoldCone::new(blocks).expect("nonempty cone")
    }

    fn expand_y(&self, y_reduced: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.system.rows()];
        for (k, &r) in self.kept.iter().enumerate() {
            y[r] = y_reduced[k];
        }
        y
    }

    pub(crate) fn run(&self, test: AuxTest, i: usize) -> Result<AuxOutcome> {
        match test {
            AuxTest::InB => self.in_b(i),
            AuxTest::InN => self.in_n(i),
            AuxTest::NotInN0 => self.not_in_n0(i),
            AuxTest::NotInB0 => self.not_in_b0(i),
        }
    }

    /// `max t  s.t.  Ax = 0,  x - t e_i in K,  <u, x> <= 1`, written in
    /// `z = x - t e_i` so that every variable is conic.
    fn in_b(&self, i: usize) -> Result<AuxOutcome> {
        let n = self.cone().dim();
        let k = self.kept.len();
        let e = self.lifted_interior(i);
        let u = self.cone().identity();
        let ae = &self.reduced * nalgebra::DVector::from_column_slice(&e);
        let ue: f64 = crate::cone::dot(&u, &e);
        let mut m = DMatrix::zeros(k + 1, n + 2);
        m.view_mut((0, 0), (k, n)).copy_from(&self.reduced);
        for r in 0..k {
            m[(r, n)] = ae[r];
        }
        for c in 0..n {
            m[(k, c)] = u[c];
        }
        m[(k, n)] = ue;
        m[(k, n + 1)] = 1.0;
        let mut rhs = vec![0.0; k + 1];
        rhs[k] = 1.0;
        let mut obj = vec![0.0; n + 2];
        obj[n] = -1.0;
        let program = ConicProgram::new(obj, m, rhs, self.extended_cone(2), 0)?;
        let sol = solver::solve(&program, &self.config)?;
        let t = sol.x[n];
        let witness = (0..n).map(|c| sol.x[c] + t * e[c]).collect();
        Ok(AuxOutcome {
            test: AuxTest::InB,
            block: i,
            value: t,
            status: sol.status,
            witness,
            iterations: sol.iterations,
        })
    }

    /// `max t  s.t.  A'y - t c_i in K*,  -1 <= y <= 1`.
    fn in_n(&self, i: usize) -> Result<AuxOutcome> {
        let n = self.cone().dim();
        let k = self.kept.len();
        let c = self.lifted_interior(i);
        // Columns: w (n, in K*), t, s1 (k), s2 (k), y (k, free).
        let cols = n + 1 + 3 * k;
        let ycol = n + 1 + 2 * k;
        let mut m = DMatrix::zeros(n + 2 * k, cols);
        for r in 0..n {
            m[(r, r)] = -1.0;
            m[(r, n)] = -c[r];
            for j in 0..k {
                m[(r, ycol + j)] = self.reduced[(j, r)];
            }
        }
        let mut rhs = vec![0.0; n + 2 * k];
        for j in 0..k {
            m[(n + j, ycol + j)] = 1.0;
            m[(n + j, n + 1 + j)] = -1.0;
            rhs[n + j] = -1.0;
            m[(n + k + j, ycol + j)] = 1.0;
            m[(n + k + j, n + 1 + k + j)] = 1.0;
            rhs[n + k + j] = 1.0;
        }
        let mut obj = vec![0.0; cols];
        obj[n] = -1.0;
        let program = ConicProgram::new(obj, m, rhs, self.extended_cone(1 + 2 * k), k)?;
        let sol = solver::solve(&program, &self.config)?;
        Ok(AuxOutcome {
            test: AuxTest::InN,
            block: i,
            value: sol.x[n],
            status: sol.status,
            witness: self.expand_y(&sol.x[ycol..]),
            iterations: sol.iterations,
        })
    }

    /// `max <e_i, x>  s.t.  Ax = 0,  x in K,  <e_i, x> <= 1`.
    fn not_in_n0(&self, i: usize) -> Result<AuxOutcome> {
        let n = self.cone().dim();
        let k = self.kept.len();
        let e = self.lifted_interior(i);
        let mut m = DMatrix::zeros(k + 1, n + 1);
        m.view_mut((0, 0), (k, n)).copy_from(&self.reduced);
        for c in 0..n {
            m[(k, c)] = e[c];
        }
        m[(k, n)] = 1.0;
        let mut rhs = vec![0.0; k + 1];
        rhs[k] = 1.0;
        let mut obj: Vec<f64> = e.iter().map(|v| -v).collect();
        obj.push(0.0);
        let program = ConicProgram::new(obj, m, rhs, self.extended_cone(1), 0)?;
        let sol = solver::solve(&program, &self.config)?;
        let x = sol.x[..n].to_vec();
        Ok(AuxOutcome {
            test: AuxTest::NotInN0,
            block: i,
            value: crate::cone::dot(&e, &x),
            status: sol.status,
            witness: x,
            iterations: sol.iterations,
        })
    }

    /// `max <A_i e_i, y>  s.t.  A'y in K*,  <A_i e_i, y> <= 1`.
    fn not_in_b0(&self, i: usize) -> Result<AuxOutcome> {
        let n = self.cone().dim();
        let k = self.kept.len();
        let e = self.lifted_interior(i);
        let ae = &self.reduced * nalgebra::DVector::from_column_slice(&e);
        // Columns: w (n, in K*), s, y (k, free).
        let ycol = n + 1;
        let mut m = DMatrix::zeros(n + 1, n + 1 + k);
        for r in 0..n {
            m[(r, r)] = -1.0;
            for j in 0..k {
                m[(r, ycol + j)] = self.reduced[(j, r)];
            }
        }
        for j in 0..k {
            m[(n, ycol + j)] = ae[j];
        }
        m[(n, n)] = 1.0;
        let mut rhs = vec![0.0; n + 1];
        rhs[n] = 1.0;
        let mut obj = vec![0.0; n + 1 + k];
        for j in 0..k {
            obj[ycol + j] = -ae[j];
        }
        let program = ConicProgram::new(obj, m, rhs, self.extended_cone(1), k)?;
        let sol = solver::solve(&program, &self.config)?;
        let yr = &sol.x[ycol..];
        Ok(AuxOutcome {
            test: AuxTest::NotInB0,
            block: i,
            value: crate::cone::dot(ae.as_slice(), yr),
            status: sol.status,
            witness: self.expand_y(yr),
            iterations: sol.iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decisive_blocks_of_six_class_system() {
        let sys = ConicSystem::six_class_example();
        let ctx = AuxContext::new(&sys, SolverConfig::default());
        // Blocks 2, 3 and 6 lie in B, N and C; all their programs attain.
        let expected = [
            (1, [1, 0, 1, 0]),
            (2, [0, 1, 0, 1]),
            (5, [0, 0, 1, 1]),
        ];
        for (i, signs) in expected {
            for (t, positive) in AuxTest::ALL.into_iter().zip(signs) {
                let o = ctx.run(t, i).unwrap();
                assert_eq!(o.status, SolveStatus::Optimal, "block {i} {t:?}");
                assert_eq!(o.value > 1e-5, positive == 1, "block {i} {t:?} value {}", o.value);
                assert!(o.value > -1e-7 && o.value < 1.0 + 1e-7);
            }
        }
    }

    #[test]
    fn witnesses_solve_their_systems() {
        let sys = ConicSystem::six_class_example();
        let ctx = AuxContext::new(&sys, SolverConfig::default());
        let x = ctx.run(AuxTest::InB, 1).unwrap().witness;
        assert!(crate::cone::norm2(&sys.apply(&x)) < 1e-7);
        assert!(sys.cone().min_margin(&x).unwrap() > -1e-7);
        let y = ctx.run(AuxTest::InN, 2).unwrap().witness;
        let z = sys.apply_transpose(&y);
        assert!(sys.cone().min_margin(&z).unwrap() > -1e-7);
        assert!(y.iter().all(|v| v.abs() <= 1.0 + 1e-7));
    }
}
