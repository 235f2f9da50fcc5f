//! Images of the base sets under `A` and exact lineality spaces of
//! polyhedral image cones.
//!
//! An orthant block of dimension `d` is generated by the unit simplex, so
//! its image is the convex hull of the block's columns. A Lorentz block
//! `(x0, xbar)` is generated by `{1} x B`, whose image is the ellipsoid
//! `A_i0 + Abar_i B`.

use num_traits::{One, Signed, Zero};

use crate::cone::ConeKind;
use crate::error::{check_dim, Error, Result};
use crate::exact::{gt_partition_exact, lineality_membership, solve_lp_exact, Bound, LpStatus, Rational, RationalMatrix};
use crate::partition::{BaseSets, ConicSystem, IndexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageKind {
    Point(Vec<Rational>),
    /// Convex hull of the listed vertices.
    Polytope(Vec<Vec<Rational>>),
    /// `center + [g_1 ... g_k] B_k`.
    Ellipsoid {
        center: Vec<Rational>,
        generators: Vec<Vec<Rational>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSetImage {
    pub kind: ImageKind,
    pub block: usize,
}

impl BaseSetImage {
    /// Points whose cone is the block's image cone.
    pub fn vertices(&self) -> Option<&[Vec<Rational>]> {
        match &self.kind {
            ImageKind::Point(p) => Some(std::slice::from_ref(p)),
            ImageKind::Polytope(v) => Some(v),
            ImageKind::Ellipsoid { .. } => None,
        }
    }

    fn ambient_dim(&self) -> usize {
        match &self.kind {
            ImageKind::Point(p) => p.len(),
            ImageKind::Polytope(v) => v[0].len(),
            ImageKind::Ellipsoid { center, .. } => center.len(),
        }
    }
}

/// Image of block `i`'s base set. Zero-based `i`.
pub fn ellipsoid_image(system: &ConicSystem, i: usize) -> Result<BaseSetImage> {
    let block = system.cone().block(i)?;
    let a = system.rational_matrix();
    let r = system.cone().range(i);
    let cols: Vec<Vec<Rational>> = r.map(|j| a.column(j)).collect();
    let kind = if block.dim() == 1 {
        ImageKind::Point(cols[0].clone())
    } else {
        match block.kind() {
            ConeKind::Orthant => ImageKind::Polytope(cols),
            ConeKind::SecondOrder if block.dim() == 2 => {
                let (c, g) = (&cols[0], &cols[1]);
                ImageKind::Polytope(vec![
                    c.iter().zip(g).map(|(c, g)| c - g).collect(),
                    c.iter().zip(g).map(|(c, g)| c + g).collect(),
                ])
            }
            ConeKind::SecondOrder => ImageKind::Ellipsoid {
                center: cols[0].clone(),
                generators: cols[1..].to_vec(),
            },
        }
    };
    Ok(BaseSetImage { kind, block: i })
}

pub fn all_images(system: &ConicSystem) -> Result<Vec<BaseSetImage>> {
    (0..system.num_blocks()).map(|i| ellipsoid_image(system, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    OfAK,
    OfClosureAK,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinealityBasis {
    pub basis: Vec<Vec<Rational>>,
    pub which: Which,
    pub ambient: usize,
}

impl LinealityBasis {
    /// Spans of vectors are reduced to an independent subset.
    pub fn new(vectors: Vec<Vec<Rational>>, which: Which, ambient: usize) -> Result<Self> {
        for v in &vectors {
            check_dim("lineality basis vector", ambient, v.len())?;
        }
        let keep = RationalMatrix::independent_subset(&vectors);
        let basis = keep.into_iter().map(|k| vectors[k].clone()).collect();
        Ok(LinealityBasis { basis, which, ambient })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        check_dim("subspace membership", self.ambient, v.len())?;
        let c = self.complement();
        Ok(c.mul_vec(v)?.iter().all(Zero::is_zero))
    }

    /// Rows spanning the orthogonal complement.
    fn complement(&self) -> RationalMatrix {
        if self.basis.is_empty() {
            return RationalMatrix::identity(self.ambient);
        }
        let rows = RationalMatrix::new(self.basis.len(), self.ambient, self.basis.concat())
            .expect("checked dimensions");
        let perp = rows.null_space();
        if perp.is_empty() {
            return RationalMatrix::zeros(0, self.ambient);
        }
        RationalMatrix::new(perp.len(), self.ambient, perp.concat()).expect("null space dimensions")
    }
}

/// `Lin(A R^n_+)`: the span of the columns `a_j` with `-a_j` in the cone.
pub fn lineality_space_polyhedral(a: &RationalMatrix) -> Result<LinealityBasis> {
    let mut inside = Vec::new();
    for j in 0..a.cols() {
        let col = a.column(j);
        if lineality_membership(a, &col)? {
            inside.push(col);
        }
    }
    LinealityBasis::new(inside, Which::OfAK, a.rows())
}

/// [`lineality_space_polyhedral`] for a system, rejecting Lorentz blocks
/// of dimension above one.
pub fn system_lineality_space(system: &ConicSystem) -> Result<LinealityBasis> {
    if !system.cone().is_polyhedral() {
        return Err(Error::NotPolyhedral);
    }
    lineality_space_polyhedral(&system.rational_matrix())
}

/// `(B, N)` of `Ax = 0, x >= 0` from lineality membership of the columns.
pub fn geometric_classify_polyhedral(a: &RationalMatrix) -> Result<(IndexSet, IndexSet)> {
    let mut b = IndexSet::new();
    let mut n = IndexSet::new();
    for j in 0..a.cols() {
        if lineality_membership(a, &a.column(j))? {
            b.insert(j);
        } else {
            n.insert(j);
        }
    }
    Ok((b, n))
}

/// Cross-check of [`geometric_classify_polyhedral`] against the strict
/// complementarity partition.
pub fn geometric_matches_exact(a: &RationalMatrix) -> Result<bool> {
    Ok(geometric_classify_polyhedral(a)? == gt_partition_exact(a)?)
}

/// Both sides of the inclusion test on a polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionCheck {
    /// Every vertex lies in the subspace, so the whole polytope does.
    pub vertices_inside: bool,
    /// The vertex average, a relative interior point, lies in the subspace.
    pub average_inside: bool,
}

impl InclusionCheck {
    pub fn agree(&self) -> bool {
        self.vertices_inside == self.average_inside
    }
}

pub fn inclusion_subtests(e: &BaseSetImage, l: &LinealityBasis) -> Result<InclusionCheck> {
    let v = e.vertices().ok_or(Error::NotPolyhedral)?;
    check_dim("inclusion check", l.ambient, e.ambient_dim())?;
    let mut vertices_inside = true;
    for p in v {
        vertices_inside &= l.contains(p)?;
    }
    let k = Rational::from_integer(v.len().into());
    let avg: Vec<Rational> = (0..l.ambient)
        .map(|r| v.iter().map(|p| &p[r]).sum::<Rational>() / &k)
        .collect();
    Ok(InclusionCheck {
        vertices_inside,
        average_inside: l.contains(&avg)?,
    })
}

/// Whether the relative interior of a polytopal image lies in `l`. For a
/// lineality space of a cone containing `e`, meeting the relative interior
/// already forces inclusion; the result is the vertex test.
pub fn remark1_inclusion_check(e: &BaseSetImage, l: &LinealityBasis) -> Result<bool> {
    Ok(inclusion_subtests(e, l)?.vertices_inside)
}

/// `E ∩ L ≠ ∅`.
pub fn intersects(e: &BaseSetImage, l: &LinealityBasis) -> Result<bool> {
    check_dim("intersection", l.ambient, e.ambient_dim())?;
    match &e.kind {
        ImageKind::Point(p) => l.contains(p),
        ImageKind::Polytope(v) => Ok(polytope_depth(v, l)?.is_some()),
        ImageKind::Ellipsoid { center, generators } => {
            Ok(min_norm_sq(center, generators, l)?.is_some_and(|n| n <= Rational::one()))
        }
    }
}

/// `ri E ∩ L ≠ ∅`.
pub fn ri_intersects(e: &BaseSetImage, l: &LinealityBasis) -> Result<bool> {
    check_dim("intersection", l.ambient, e.ambient_dim())?;
    match &e.kind {
        ImageKind::Point(p) => l.contains(p),
        ImageKind::Polytope(v) => Ok(polytope_depth(v, l)?.is_some_and(|t| t.is_positive())),
        ImageKind::Ellipsoid { center, generators } => {
            Ok(min_norm_sq(center, generators, l)?.is_some_and(|n| n < Rational::one()))
        }
    }
}

/// Largest `t` such that some convex combination with all weights at
/// least `t` lies in `l`, or `None` when the polytope misses `l`.
fn polytope_depth(v: &[Vec<Rational>], l: &LinealityBasis) -> Result<Option<Rational>> {
    let c = l.complement();
    let k = v.len();
    let rows = c.rows();
    // Columns: weights (k), the depth t, surplus s_j with w_j - t - s_j = 0.
    let n = 2 * k + 1;
    let mut data = vec![Rational::zero(); (rows + 1 + k) * n];
    for r in 0..rows {
        for (j, p) in v.iter().enumerate() {
            data[r * n + j] = (0..l.ambient).map(|q| c.get(r, q) * &p[q]).sum();
        }
    }
    for j in 0..k {
        data[rows * n + j] = Rational::one();
        let row = (rows + 1 + j) * n;
        data[row + j] = Rational::one();
        data[row + k] = -Rational::one();
        data[row + k + 1 + j] = -Rational::one();
    }
    let a = RationalMatrix::new(rows + 1 + k, n, data)?;
    let mut b = vec![Rational::zero(); rows + 1 + k];
    b[rows] = Rational::one();
    let mut obj = vec![Rational::zero(); n];
    obj[k] = Rational::one();
    let mut bounds = vec![Bound::nonneg(); n];
    bounds[k] = Bound::between(Rational::zero(), Rational::one());
    let res = solve_lp_exact(&obj, &a, &b, &bounds)?;
    Ok(match res.status {
        LpStatus::Optimal => res.optimal_value,
        _ => None,
    })
}

/// Smallest `|u|^2` over `center + G u ∈ L`, or `None` when no `u` exists.
fn min_norm_sq(center: &[Rational], generators: &[Vec<Rational>], l: &LinealityBasis) -> Result<Option<Rational>> {
    let c = l.complement();
    let rows = c.rows();
    let k = generators.len();
    let project = |v: &[Rational]| -> Vec<Rational> {
        (0..rows)
            .map(|r| (0..l.ambient).map(|q| c.get(r, q) * &v[q]).sum())
            .collect()
    };
    // M = C G, solve M M' w = -C c; u = M' w is the minimum norm solution.
    let cols: Vec<Vec<Rational>> = generators.iter().map(|g| project(g)).collect();
    let rhs: Vec<Rational> = project(center).into_iter().map(|x| -x).collect();
    let mut gram = RationalMatrix::zeros(rows, rows);
    for r in 0..rows {
        for s in 0..rows {
            gram.set(r, s, cols.iter().map(|g| &g[r] * &g[s]).sum());
        }
    }
    let Some(w) = gram.solve_particular(&rhs)? else {
        return Ok(None);
    };
    let u: Vec<Rational> = cols
        .iter()
        .map(|g| g.iter().zip(&w).map(|(a, b)| a * b).sum())
        .collect();
    // The normal equations are consistent whenever M u = -C c is, but a
    // solution of them solves the original system only in that case.
    for r in 0..rows {
        let lhs: Rational = (0..k).map(|j| &cols[j][r] * &u[j]).sum();
        if lhs != rhs[r] {
            return Ok(None);
        }
    }
    Ok(Some(u.iter().map(|x| x * x).sum()))
}

/// Base sets read off the images given the two lineality spaces.
pub fn classify_by_images(
    images: &[BaseSetImage],
    lin_ak: &LinealityBasis,
    lin_closure: &LinealityBasis,
) -> Result<BaseSets> {
    let mut sets = BaseSets::default();
    for e in images {
        let i = e.block;
        if ri_intersects(e, lin_ak)? {
            sets.b.insert(i);
        }
        if !intersects(e, lin_closure)? {
            sets.n.insert(i);
        }
        if ri_intersects(e, lin_closure)? {
            sets.b0.insert(i);
        }
        if !intersects(e, lin_ak)? {
            sets.n0.insert(i);
        }
    }
    Ok(sets)
}
