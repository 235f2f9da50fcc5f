//! Homogeneous self-dual embedding driven by Mehrotra predictor-corrector
//! steps. The embedding
//!
//! ```text
//!   A x - b tau            = 0
//!   A'y + s - c tau        = 0
//!   c'x - b'y + kappa      = 0,   (x, s) in K x K*,  tau, kappa >= 0
//! ```
//!
//! is solved from the canonical interior start; optimality or an
//! infeasibility certificate is read off once `tau` or `kappa` dominates.

use nalgebra::{DMatrix, DVector};

use super::kkt::KktSystem;
use super::scaling::{jordan_divide, jordan_product, max_step, BlockScaling};
use super::{residuals, ConicProgram, Solution, SolveStatus, SolverConfig};
use crate::cone::{canonical_interior_point, MultifoldCone};
use crate::error::Result;

const STEP_FRACTION: f64 = 0.99;
/// Relative tolerance for discarding linearly dependent equality rows.
const RANK_TOL: f64 = 1e-10;

pub(super) struct ReducedRows {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    pub(super) kept: Vec<usize>,
}

/// Drops rows of `[A | b]` that are combinations of earlier rows. Returns
/// `None` when a dropped row is inconsistent with the kept ones.
pub(super) fn reduce_rows(a: &DMatrix<f64>, b: &[f64]) -> Option<ReducedRows> {
    let (m, n) = a.shape();
    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let bscale = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let mut basis: Vec<(DVector<f64>, f64)> = Vec::new();
    let mut kept = Vec::new();
    for i in 0..m {
        let mut r: DVector<f64> = a.row(i).transpose();
        let mut beta = b[i];
        // Two Gram-Schmidt sweeps keep the orthogonalization accurate.
        for _ in 0..2 {
            for (q, bq) in &basis {
                let coef = q.dot(&r);
                r.axpy(-coef, q, 1.0);
                beta -= coef * bq;
            }
        }
        let norm = r.norm();
        if norm <= RANK_TOL * scale * (n as f64).sqrt() {
            if beta.abs() > 1e-8 * bscale {
                return None;
            }
            continue;
        }
        basis.push((r / norm, beta / norm));
        kept.push(i);
    }
    let matrix = DMatrix::from_fn(kept.len(), n, |r, c| a[(kept[r], c)]);
    let rhs = DVector::from_iterator(kept.len(), kept.iter().map(|&i| b[i]));
    Some(ReducedRows { matrix, rhs, kept })
}

struct Direction {
    dx: DVector<f64>,
    dy: DVector<f64>,
    ds: DVector<f64>,
    dtau: f64,
    dkappa: f64,
}

struct Workspace<'a> {
    cone: &'a MultifoldCone,
    a: &'a DMatrix<f64>,
    b: &'a DVector<f64>,
    c: &'a DVector<f64>,
    nc: usize,
}

impl Workspace<'_> {
    fn scalings(&self, x: &DVector<f64>, s: &DVector<f64>) -> Vec<BlockScaling> {
        (0..self.cone.num_blocks())
            .map(|i| {
                let r = self.cone.range(i);
                BlockScaling::new(
                    &self.cone.blocks()[i],
                    &x.as_slice()[r.clone()],
                    &s.as_slice()[r],
                )
            })
            .collect()
    }

    fn apply_each(
        &self,
        w: &[BlockScaling],
        v: &[f64],
        inverse: bool,
    ) -> Vec<f64> {
        let mut out = vec![0.0; self.nc];
        for (i, wi) in w.iter().enumerate() {
            let r = self.cone.range(i);
            if inverse {
                wi.apply_inv(&v[r.clone()], &mut out[r]);
            } else {
                wi.apply(&v[r.clone()], &mut out[r]);
            }
        }
        out
    }

    fn product(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nc];
        for (i, block) in self.cone.blocks().iter().enumerate() {
            let r = self.cone.range(i);
            jordan_product(block, &u[r.clone()], &v[r.clone()], &mut out[r]);
        }
        out
    }

    fn divide(&self, lambda: &[f64], r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nc];
        for (i, block) in self.cone.blocks().iter().enumerate() {
            let rg = self.cone.range(i);
            jordan_divide(block, &lambda[rg.clone()], &r[rg.clone()], &mut out[rg]);
        }
        out
    }

    fn step_to_boundary(&self, v: &[f64], dv: &[f64]) -> f64 {
        (0..self.cone.num_blocks())
            .map(|i| {
                let r = self.cone.range(i);
                max_step(&self.cone.blocks()[i], &v[r.clone()], &dv[r])
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves the Newton system for a given complementarity target `rc`
    /// (scaled space) and `r_tk` (the `tau * kappa` pair).
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        kkt: &KktSystem,
        base: &(DVector<f64>, DVector<f64>),
        w: &[BlockScaling],
        lambda: &[f64],
        res: &Residuals,
        eta: f64,
        rc: &[f64],
        r_tk: f64,
        tau: f64,
        kappa: f64,
    ) -> Option<Direction> {
        let n = self.a.ncols();
        let m = self.a.nrows();
        let xi = self.divide(lambda, rc);
        let w_xi = self.apply_each(w, &xi, false);

        let mut rhs = DVector::zeros(n + m);
        for j in 0..n {
            rhs[j] = -eta * res.rd[j];
        }
        for j in 0..self.nc {
            rhs[j] -= w_xi[j];
        }
        for i in 0..m {
            rhs[n + i] = -eta * res.rp[i];
        }
        let sol = kkt.solve(&rhs)?;
        let p2 = sol.rows(0, n);
        let q2 = sol.rows(n, m);
        let (p1, q1) = base;

        let denom = self.c.dot(p1) - self.b.dot(q1) - kappa / tau;
        let numer = -eta * res.rg - self.c.dot(&p2) + self.b.dot(&q2) - r_tk / tau;
        let dtau = numer / denom;
        let dx = p2 + p1 * dtau;
        let dy = q2 + q1 * dtau;
        let w_dx = self.apply_each(w, &dx.as_slice()[..self.nc], false);
        let diff: Vec<f64> = xi.iter().zip(&w_dx).map(|(a, b)| a - b).collect();
        let ds = DVector::from_vec(self.apply_each(w, &diff, false));
        let dkappa = (r_tk - kappa * dtau) / tau;
        let all_finite = dtau.is_finite()
            && dkappa.is_finite()
            && dx.iter().chain(dy.iter()).chain(ds.iter()).all(|v| v.is_finite());
        all_finite.then_some(Direction {
            dx,
            dy,
            ds,
            dtau,
            dkappa,
        })
    }

    fn step_length(
        &self,
        x: &DVector<f64>,
        s: &DVector<f64>,
        tau: f64,
        kappa: f64,
        d: &Direction,
    ) -> f64 {
        let mut alpha = self
            .step_to_boundary(&x.as_slice()[..self.nc], &d.dx.as_slice()[..self.nc])
            .min(self.step_to_boundary(s.as_slice(), d.ds.as_slice()));
        if d.dtau < 0.0 {
            alpha = alpha.min(-tau / d.dtau);
        }
        if d.dkappa < 0.0 {
            alpha = alpha.min(-kappa / d.dkappa);
        }
        alpha
    }
}

struct Residuals {
    rp: DVector<f64>,
    rd: DVector<f64>,
    rg: f64,
}

/// Runs the interior-point method. Deterministic for fixed inputs.
pub fn solve(program: &ConicProgram, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let n = program.num_vars();
    let m = program.num_rows();
    let nc = program.cone.dim();

    let Some(reduced) = reduce_rows(&program.matrix, &program.rhs) else {
        return Ok(finish(
            program,
            SolveStatus::PrimalInfeasible,
            vec![0.0; n],
            vec![0.0; m],
            vec![0.0; n],
            0,
            Vec::new(),
        ));
    };
    let a = &reduced.matrix;
    let b = &reduced.rhs;
    let c = DVector::from_column_slice(&program.objective);
    let ws = Workspace {
        cone: &program.cone,
        a,
        b,
        c: &c,
        nc,
    };
    let mr = a.nrows();

    let mut x = DVector::zeros(n);
    let e: Vec<f64> = program
        .cone
        .blocks()
        .iter()
        .flat_map(canonical_interior_point)
        .collect();
    x.rows_mut(0, nc).copy_from_slice(&e);
    let mut s = DVector::from_vec(e.clone());
    let mut y = DVector::zeros(mr);
    let mut tau = 1.0;
    let mut kappa = 1.0;
    let nu = program.cone.degree() as f64;
    let bnorm = b.norm();
    let cnorm = c.norm();
    let mut history = Vec::new();
    let mut stalled = 0usize;

    let pack = |status, x: &DVector<f64>, y: &DVector<f64>, s: &DVector<f64>, scale: f64, iters, hist: Vec<f64>| {
        let mut y_full = vec![0.0; m];
        for (k, &row) in reduced.kept.iter().enumerate() {
            y_full[row] = y[k] / scale;
        }
        let mut s_full = vec![0.0; n];
        for j in 0..nc {
            s_full[j] = s[j] / scale;
        }
        finish(
            program,
            status,
            x.iter().map(|v| v / scale).collect(),
            y_full,
            s_full,
            iters,
            hist,
        )
    };

    for iter in 0..=config.max_iter {
        let ax = a * &x;
        let mut aty = a.transpose() * &y;
        for j in 0..nc {
            aty[j] += s[j];
        }
        let res = Residuals {
            rp: &ax - b * tau,
            rd: &aty - &c * tau,
            rg: c.dot(&x) - b.dot(&y) + kappa,
        };
        let xs = x.rows(0, nc).dot(&s);
        let mu = (xs + tau * kappa) / (nu + 1.0);
        history.push(mu);

        let pobj = c.dot(&x) / tau;
        let dobj = b.dot(&y) / tau;
        let pres = res.rp.norm() / tau;
        let dres = res.rd.norm() / tau;
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        if pres <= config.feas_tol * (1.0 + bnorm)
            && dres <= config.feas_tol * (1.0 + cnorm)
            && gap <= config.gap_tol
        {
            return Ok(pack(SolveStatus::Optimal, &x, &y, &s, tau, iter, history));
        }
        let by = b.dot(&y);
        if by > 0.0 && (&aty).norm() <= config.feas_tol * by {
            return Ok(pack(SolveStatus::PrimalInfeasible, &(x.clone() * 0.0), &y, &s, by, iter, history));
        }
        let cx = c.dot(&x);
        if cx < 0.0 && ax.norm() <= config.feas_tol * (-cx) {
            let zero_y = DVector::zeros(mr);
            let zero_s = DVector::zeros(nc);
            return Ok(pack(SolveStatus::DualInfeasible, &x, &zero_y, &zero_s, -cx, iter, history));
        }
        if iter == config.max_iter {
            return Ok(pack(SolveStatus::IterLimit, &x, &y, &s, tau, iter, history));
        }

        let w = ws.scalings(&x, &s);
        let lambda = ws.apply_each(&w, &x.as_slice()[..nc], false);
        let mut h = DMatrix::zeros(n, n);
        for (i, wi) in w.iter().enumerate() {
            let r = program.cone.range(i);
            h.view_mut((r.start, r.start), (r.len(), r.len()))
                .copy_from(&wi.squared());
        }
        let Some(kkt) = KktSystem::factor(&h, a) else {
            return Ok(pack(SolveStatus::Numerical, &x, &y, &s, tau, iter, history));
        };
        let mut cb = DVector::zeros(n + mr);
        cb.rows_mut(0, n).copy_from(&c);
        cb.rows_mut(n, mr).copy_from(b);
        let Some(base) = kkt.solve(&cb) else {
            return Ok(pack(SolveStatus::Numerical, &x, &y, &s, tau, iter, history));
        };
        let base = (base.rows(0, n).into_owned(), base.rows(n, mr).into_owned());

        // Predictor.
        let ll = ws.product(&lambda, &lambda);
        let rc_aff: Vec<f64> = ll.iter().map(|v| -v).collect();
        let Some(aff) = ws.direction(
            &kkt, &base, &w, &lambda, &res, 1.0, &rc_aff, -tau * kappa, tau, kappa,
        ) else {
            return Ok(pack(SolveStatus::Numerical, &x, &y, &s, tau, iter, history));
        };
        let alpha_aff = ws.step_length(&x, &s, tau, kappa, &aff).min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

        // Corrector.
        let winv_ds = ws.apply_each(&w, aff.ds.as_slice(), true);
        let w_dx = ws.apply_each(&w, &aff.dx.as_slice()[..nc], false);
        let second = ws.product(&winv_ds, &w_dx);
        let ident = program.cone.identity();
        let rc: Vec<f64> = (0..nc)
            .map(|j| -ll[j] - second[j] + sigma * mu * ident[j])
            .collect();
        let r_tk = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
        let Some(dir) = ws.direction(
            &kkt, &base, &w, &lambda, &res, 1.0 - sigma, &rc, r_tk, tau, kappa,
        ) else {
            return Ok(pack(SolveStatus::Numerical, &x, &y, &s, tau, iter, history));
        };
        let alpha = (STEP_FRACTION * ws.step_length(&x, &s, tau, kappa, &dir)).min(1.0);
        if !(alpha > 1e-12) {
            stalled += 1;
            if stalled >= 3 {
                return Ok(pack(SolveStatus::Numerical, &x, &y, &s, tau, iter, history));
            }
            continue;
        }
        stalled = 0;

        x.axpy(alpha, &dir.dx, 1.0);
        y.axpy(alpha, &dir.dy, 1.0);
        s.axpy(alpha, &dir.ds, 1.0);
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
    }
    unreachable!("loop returns at max_iter")
}

fn finish(
    program: &ConicProgram,
    status: SolveStatus,
    x: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    iterations: usize,
    mu_history: Vec<f64>,
) -> Solution {
    let mut sol = Solution {
        status,
        x,
        y,
        s,
        primal_residual: 0.0,
        dual_residual: 0.0,
        duality_gap: 0.0,
        iterations,
        mu_history,
    };
    if let Ok((p, d, g)) = residuals(program, &sol) {
        sol.primal_residual = p;
        sol.dual_residual = d;
        sol.duality_gap = g / (1.0 + sol.primal_objective(program).abs());
    }
    sol
}
