//! Augmented-system solves `[[-H, A'], [A, 0]]` for the interior-point
//! directions.

use nalgebra::{DMatrix, DVector};

/// Static regularization added to the diagonal before factoring; iterative
/// refinement against the unregularized matrix removes its bias.
const STATIC_REG: f64 = 1e-10;
const REFINE_STEPS: usize = 3;

pub(crate) struct KktSystem {
    exact: DMatrix<f64>,
    factor: nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl KktSystem {
    /// `h` is the dense `n x n` scaling block (zero rows/columns for free
    /// variables); `a` is `m x n`.
    pub(crate) fn factor(h: &DMatrix<f64>, a: &DMatrix<f64>) -> Option<Self> {
        let (m, n) = a.shape();
        let mut k = DMatrix::zeros(n + m, n + m);
        k.view_mut((0, 0), (n, n)).copy_from(&(-h));
        k.view_mut((0, n), (n, m)).copy_from(&a.transpose());
        k.view_mut((n, 0), (m, n)).copy_from(a);
        let mut reg = k.clone();
        for i in 0..n {
            reg[(i, i)] -= STATIC_REG;
        }
        for i in n..n + m {
            reg[(i, i)] += STATIC_REG;
        }
        let factor = reg.lu();
        if !factor.is_invertible() {
            return None;
        }
        Some(KktSystem { exact: k, factor })
    }

    pub(crate) fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let mut sol = self.factor.solve(rhs)?;
        for _ in 0..REFINE_STEPS {
            let r = rhs - &self.exact * &sol;
            let corr = self.factor.solve(&r)?;
            sol += corr;
        }
        sol.iter().all(|v| v.is_finite()).then_some(sol)
    }
}
