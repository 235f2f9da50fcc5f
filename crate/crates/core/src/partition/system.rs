use nalgebra::DMatrix;

use crate::cone::MultifoldCone;
use crate::error::{check_dim, Error, Result};
use crate::exact::RationalMatrix;

/// The homogeneous pair `Ax = 0, x in K` and `A'y in K*`.
#[derive(Debug, Clone)]
pub struct ConicSystem {
    matrix: DMatrix<f64>,
    exact: Option<RationalMatrix>,
    cone: MultifoldCone,
}

impl ConicSystem {
    pub fn new(matrix: DMatrix<f64>, cone: MultifoldCone) -> Result<Self> {
        check_dim("ConicSystem columns", cone.dim(), matrix.ncols())?;
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ConicSystem {
            matrix,
            exact: None,
            cone,
        })
    }

    /// Keeps the rational entries alongside their rounded `f64` values.
    pub fn from_exact(matrix: RationalMatrix, cone: MultifoldCone) -> Result<Self> {
        check_dim("ConicSystem columns", cone.dim(), matrix.cols())?;
        let dense = DMatrix::from_row_slice(matrix.rows(), matrix.cols(), &matrix.to_f64());
        Ok(ConicSystem {
            matrix: dense,
            exact: Some(matrix),
            cone,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>], cone: MultifoldCone) -> Result<Self> {
        let cols = rows.first().map_or(cone.dim(), Vec::len);
        for r in rows {
            check_dim("ConicSystem row", cols, r.len())?;
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(rows.len(), cols, &flat), cone)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn exact(&self) -> Option<&RationalMatrix> {
        self.exact.as_ref()
    }

    /// Rational entries: the exact input when present, otherwise the
    /// binary values of the `f64` entries.
    pub fn rational_matrix(&self) -> RationalMatrix {
        self.exact.clone().unwrap_or_else(|| {
            let a = &self.matrix;
            let rows: Vec<f64> = (0..a.nrows())
                .flat_map(|r| (0..a.ncols()).map(move |c| a[(r, c)]))
                .collect();
            RationalMatrix::from_f64(a.nrows(), a.ncols(), &rows).expect("finite entries")
        })
    }

    pub fn cone(&self) -> &MultifoldCone {
        &self.cone
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_blocks(&self) -> usize {
        self.cone.num_blocks()
    }

    /// Column block `A_i`.
    pub fn block_matrix(&self, i: usize) -> DMatrix<f64> {
        let r = self.cone.range(i);
        self.matrix.columns(r.start, r.len()).into_owned()
    }

    pub fn block_is_zero(&self, i: usize) -> bool {
        self.block_matrix(i).iter().all(|v| *v == 0.0)
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows())
            .map(|r| (0..x.len()).map(|c| self.matrix[(r, c)] * x[c]).sum())
            .collect()
    }

    /// `A' y`.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        (0..self.matrix.ncols())
            .map(|c| (0..y.len()).map(|r| self.matrix[(r, c)] * y[r]).sum())
            .collect()
    }

    /// The published 3 x 11 instance over `R_+^3 x L_1 x L_1 x L_3` whose
    /// six classes are all nonempty.
    pub fn six_class_example() -> Self {
        use crate::cone::ConeBlock;
        let rows = [
            vec![1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0],
            vec![0, 1, 0, 0, 0, -1, 0, 0, 0, 1, 0],
            vec![0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1],
        ];
        let cone = MultifoldCone::new(vec![
            ConeBlock::orthant(1).unwrap(),
            ConeBlock::orthant(1).unwrap(),
            ConeBlock::orthant(1).unwrap(),
            ConeBlock::second_order(2).unwrap(),
            ConeBlock::second_order(2).unwrap(),
            ConeBlock::second_order(4).unwrap(),
        ])
        .expect("nonempty cone");
        ConicSystem::from_exact(
            RationalMatrix::from_int_rows(&rows).expect("rectangular"),
            cone,
        )
        .expect("consistent dimensions")
    }
}
