//! Block-structured cones built from nonnegative orthants and Lorentz
//! (second-order) cones.
//!
//! Membership is scalarized by [`cone_margin`]: positive inside the
//! interior, zero on the boundary, negative outside. Both block kinds are
//! self-dual, so the same margin also decides dual-cone membership.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeKind {
    Orthant,
    #[serde(rename = "soc")]
    SecondOrder,
}

/// One factor `K_i` of a multifold cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConeBlock {
    kind: ConeKind,
    dim: usize,
}

impl ConeBlock {
    /// A one-dimensional Lorentz cone is the half-line, so it is stored as an
    /// orthant block.
    pub fn new(kind: ConeKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimBlock);
        }
        let kind = match (kind, dim) {
            (ConeKind::SecondOrder, 1) => ConeKind::Orthant,
            (k, _) => k,
        };
        Ok(ConeBlock { kind, dim })
    }

    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(ConeKind::Orthant, dim)
    }

    pub fn second_order(dim: usize) -> Result<Self> {
        Self::new(ConeKind::SecondOrder, dim)
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_orthant(&self) -> bool {
        self.kind == ConeKind::Orthant
    }

    /// Barrier degree of the block: `dim` for an orthant, 1 for a Lorentz cone.
    pub fn degree(&self) -> usize {
        match self.kind {
            ConeKind::Orthant => self.dim,
            ConeKind::SecondOrder => 1,
        }
    }
}

/// Signed distance-like membership measure of `v` in `block`.
///
/// `min_j v_j` for an orthant, `v_0 - ||v_1..||` for a Lorentz cone.
pub fn cone_margin(block: &ConeBlock, v: &[f64]) -> Result<f64> {
    check_dim("cone_margin", block.dim, v.len())?;
    Ok(margin_unchecked(block, v))
}

pub(crate) fn margin_unchecked(block: &ConeBlock, v: &[f64]) -> f64 {
    match block.kind {
        ConeKind::Orthant => v.iter().copied().fold(f64::INFINITY, f64::min),
        ConeKind::SecondOrder => v[0] - norm2(&v[1..]),
    }
}

/// The interior point `e_i` used to normalize every auxiliary program.
pub fn canonical_interior_point(block: &ConeBlock) -> Vec<f64> {
    match block.kind {
        ConeKind::Orthant => vec![1.0; block.dim],
        ConeKind::SecondOrder => {
            let mut e = vec![0.0; block.dim];
            e[0] = 1.0;
            e
        }
    }
}

/// Dual cone of a block. Orthants and Lorentz cones are self-dual.
pub fn dual_block(block: &ConeBlock) -> ConeBlock {
    *block
}

/// Ordered product `K_1 x ... x K_r` with cached block offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultifoldCone {
    blocks: Vec<ConeBlock>,
    offsets: Vec<usize>,
    dim: usize,
}

impl MultifoldCone {
    pub fn new(blocks: Vec<ConeBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyCone);
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for b in &blocks {
            offsets.push(dim);
            dim += b.dim;
        }
        Ok(MultifoldCone {
            blocks,
            offsets,
            dim,
        })
    }

    /// `n` copies of the half-line: the polyhedral cone `R^n_+` with one
    /// block per coordinate.
    pub fn nonnegative_orthant(n: usize) -> Result<Self> {
        Self::new((0..n).map(|_| ConeBlock::orthant(1)).collect::<Result<_>>()?)
    }

    pub fn blocks(&self) -> &[ConeBlock] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> Result<&ConeBlock> {
        self.blocks.get(i).ok_or(Error::BlockIndex {
            index: i,
            blocks: self.blocks.len(),
        })
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// Number of blocks `r`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Total dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(ConeBlock::degree).sum()
    }

    /// Coordinate range of block `i` inside `R^n`.
    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.offsets[i];
        start..start + self.blocks[i].dim
    }

    pub fn is_polyhedral(&self) -> bool {
        self.blocks.iter().all(ConeBlock::is_orthant)
    }

    /// Concatenated canonical interior points.
    pub fn identity(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(canonical_interior_point)
            .collect()
    }

    /// Per-block margins of `v`.
    pub fn margins(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim("MultifoldCone::margins", self.dim, v.len())?;
        Ok((0..self.blocks.len())
            .map(|i| margin_unchecked(&self.blocks[i], &v[self.range(i)]))
            .collect())
    }

    /// Smallest block margin of `v`; nonnegative iff `v` lies in the cone.
    pub fn min_margin(&self, v: &[f64]) -> Result<f64> {
        Ok(self
            .margins(v)?
            .into_iter()
            .fold(f64::INFINITY, f64::min))
    }
}

/// A vector of `R^n` read through the block structure of a cone.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector<'a> {
    data: Vec<f64>,
    cone: &'a MultifoldCone,
}

impl<'a> BlockVector<'a> {
    pub fn new(data: Vec<f64>, cone: &'a MultifoldCone) -> Result<Self> {
        check_dim("BlockVector", cone.dim(), data.len())?;
        Ok(BlockVector { data, cone })
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn cone(&self) -> &MultifoldCone {
        self.cone
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.data
    }
}

/// Block `i` (zero-based) of `v`.
pub fn block_slice<'v>(v: &'v BlockVector<'_>, i: usize) -> Result<&'v [f64]> {
    v.cone.block(i)?;
    Ok(&v.data[v.cone.range(i)])
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn soc(d: usize) -> ConeBlock {
        ConeBlock::second_order(d).unwrap()
    }

    fn orth(d: usize) -> ConeBlock {
        ConeBlock::orthant(d).unwrap()
    }

    #[test]
    fn margin_examples() {
        assert_eq!(cone_margin(&soc(3), &[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cone_margin(&soc(2), &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(cone_margin(&orth(3), &[0.0, 1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(cone_margin(&soc(3), &[3.0, 3.0, 4.0]).unwrap(), -2.0);
    }

    #[test]
    fn margin_rejects_wrong_length() {
        assert!(matches!(
            cone_margin(&soc(3), &[1.0, 0.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn interior_points() {
        assert_eq!(canonical_interior_point(&orth(2)), vec![1.0, 1.0]);
        assert_eq!(canonical_interior_point(&soc(4)), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(canonical_interior_point(&soc(1)), vec![1.0]);
        for b in [orth(1), orth(5), soc(2), soc(7)] {
            assert_eq!(cone_margin(&b, &canonical_interior_point(&b)).unwrap(), 1.0);
        }
    }

    #[test]
    fn lorentz_dim_one_is_orthant() {
        let b = soc(1);
        assert_eq!(b.kind(), ConeKind::Orthant);
        assert_eq!(dual_block(&b), orth(1));
        assert_eq!(dual_block(&orth(3)), orth(3));
        assert_eq!(dual_block(&soc(3)), soc(3));
        assert_eq!(ConeBlock::new(ConeKind::Orthant, 0), Err(Error::ZeroDimBlock));
    }

    #[test]
    fn offsets_and_slices() {
        let cone = MultifoldCone::new(vec![
            orth(1),
            orth(1),
            orth(1),
            soc(2),
            soc(2),
            soc(4),
        ])
        .unwrap();
        assert_eq!(cone.offsets(), &[0, 1, 2, 3, 5, 7]);
        assert_eq!(cone.dim(), 11);
        let x = BlockVector::new(
            vec![0., 1., 0., 0., 0., 1., -1., 1., 0., 0., -1.],
            &cone,
        )
        .unwrap();
        assert_eq!(block_slice(&x, 4).unwrap(), &[1.0, -1.0]);
        assert_eq!(block_slice(&x, 5).unwrap(), &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(block_slice(&x, 0).unwrap(), &[0.0]);
        assert!(matches!(block_slice(&x, 6), Err(Error::BlockIndex { .. })));
        let joined: Vec<f64> = (0..6)
            .flat_map(|i| block_slice(&x, i).unwrap().to_vec())
            .collect();
        assert_eq!(joined, x.data());
    }

    #[test]
    fn empty_cone_rejected() {
        assert_eq!(MultifoldCone::new(vec![]), Err(Error::EmptyCone));
    }

    fn block_strategy() -> impl Strategy<Value = ConeBlock> {
        (prop_oneof![Just(ConeKind::Orthant), Just(ConeKind::SecondOrder)], 1usize..6)
            .prop_map(|(k, d)| ConeBlock::new(k, d).unwrap())
    }

    /// Pushes an arbitrary vector onto the boundary-or-inside of the block.
    fn into_cone(block: &ConeBlock, v: &[f64], lift: f64) -> Vec<f64> {
        match block.kind() {
            ConeKind::Orthant => v.iter().map(|x| x.abs() + lift).collect(),
            ConeKind::SecondOrder => {
                let mut w = v.to_vec();
                w[0] = norm2(&v[1..]) + lift;
                w
            }
        }
    }

    proptest! {
        #[test]
        fn dual_pairing_nonnegative(
            block in block_strategy(),
            raw in prop::collection::vec(-5.0f64..5.0, 6),
            raw2 in prop::collection::vec(-5.0f64..5.0, 6),
            lift in 0.0f64..1.0,
        ) {
            let v = into_cone(&block, &raw[..block.dim()], lift);
            let w = into_cone(&dual_block(&block), &raw2[..block.dim()], 0.0);
            prop_assert!(cone_margin(&block, &v).unwrap() >= -1e-12);
            prop_assert!(dot(&v, &w) >= -1e-9);
        }

        #[test]
        fn positive_homogeneity(
            block in block_strategy(),
            raw in prop::collection::vec(-5.0f64..5.0, 6),
            t in 0.0f64..10.0,
        ) {
            let v = &raw[..block.dim()];
            let scaled: Vec<f64> = v.iter().map(|x| t * x).collect();
            let lhs = cone_margin(&block, &scaled).unwrap();
            let rhs = t * cone_margin(&block, v).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }

        #[test]
        fn margin_is_lipschitz(
            block in block_strategy(),
            a in prop::collection::vec(-5.0f64..5.0, 6),
            b in prop::collection::vec(-5.0f64..5.0, 6),
        ) {
            let (a, b) = (&a[..block.dim()], &b[..block.dim()]);
            let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let gap = (cone_margin(&block, a).unwrap() - cone_margin(&block, b).unwrap()).abs();
            // sqrt(2) for the Lorentz cone's two-term split; orthant is exactly 1.
            let bound = match block.kind() {
                ConeKind::Orthant => 1.0,
                ConeKind::SecondOrder => std::f64::consts::SQRT_2,
            };
            prop_assert!(gap <= bound * norm2(&diff) + 1e-12);
        }

        #[test]
        fn pointed_on_boundary(
            block in block_strategy(),
            raw in prop::collection::vec(-5.0f64..5.0, 6),
        ) {
            let v = into_cone(&block, &raw[..block.dim()], 0.0);
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            let both = cone_margin(&block, &v).unwrap() >= 0.0
                && cone_margin(&block, &neg).unwrap() >= 0.0;
            if both {
                prop_assert!(v.iter().all(|x| *x == 0.0));
            }
        }
    }
}
