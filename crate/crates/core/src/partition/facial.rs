//! Minimal face of `K` containing `{x in K : Mx = 0}`, found by repeatedly
//! solving a well-posed alternative on the current face.
//!
//! On a face `F` with interior point `e` the program
//!
//! ```text
//!   max t  s.t.  Mx = 0,  x - t e in F,  <e, x> <= 1,  t free
//! ```
//!
//! and its dual both have Slater points, so optimal values are attained.
//! Either `t* > 0` and the optimal `x` is relatively interior, or `t* = 0`
//! and the dual yields `w = M'y in F*` with `<e, w> = 1`, which exposes a
//! strictly smaller face.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::{dot, margin_unchecked, norm2, ConeBlock, MultifoldCone};
use crate::error::Result;
use crate::exact::{Rational, RationalMatrix};
use crate::solver::{self, ConicProgram, SolveStatus, SolverConfig};

/// Face of one block of the cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BlockFace {
    Full,
    /// Orthant block restricted to a proper nonempty subset of coordinates.
    Coordinates(Vec<usize>),
    /// Lorentz block restricted to the ray through `direction`.
    Ray(Vec<f64>),
    Zero,
}

impl BlockFace {
    pub fn is_full(&self) -> bool {
        matches!(self, BlockFace::Full)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BlockFace::Zero)
    }
}

/// One solve of the alternative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FaceStep {
    pub value: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    /// Blocks whose face shrank at this step (zero-based).
    pub reduced: Vec<usize>,
    /// Whether the reducing certificate was verified in exact arithmetic.
    pub exact: bool,
}

#[derive(Debug, Clone)]
pub struct FaceChain {
    pub faces: Vec<BlockFace>,
    /// A point of the relative interior of the final face with `Mx ~ 0`.
    pub witness: Vec<f64>,
    pub steps: Vec<FaceStep>,
    /// Set when a decision fell inside the indeterminate band or a solve
    /// failed. `faces` then only over-approximates the minimal face.
    pub stuck: Option<String>,
}

/// Per-block state of the reduction: the face and, for rays, an exact
/// direction when one is known.
#[derive(Clone)]
struct State {
    faces: Vec<BlockFace>,
    exact_rays: Vec<Option<Vec<Rational>>>,
}

/// Reduced coordinates `x = Phi x'` of a product of block faces, with the
/// reduced constraint matrix `M Phi` in floating and (when available)
/// exact form.
struct Reduced {
    cone: Option<MultifoldCone>,
    phi: DMatrix<f64>,
    m: DMatrix<f64>,
    exact_cols: Option<Vec<Vec<Rational>>>,
    /// Original block behind each reduced block.
    owner: Vec<usize>,
}

fn reduce(m: &RationalMatrix, mf: &DMatrix<f64>, cone: &MultifoldCone, st: &State) -> Reduced {
    let n = cone.dim();
    let k = m.rows();
    let mut blocks = Vec::new();
    let mut owner = Vec::new();
    let mut columns: Vec<DVector<f64>> = Vec::new();
    let mut exact: Option<Vec<Vec<Rational>>> = Some(Vec::new());
    let unit = |j: usize, columns: &mut Vec<DVector<f64>>, exact: &mut Option<Vec<Vec<Rational>>>| {
        let mut col = DVector::zeros(n);
        col[j] = 1.0;
        columns.push(col);
        if let Some(e) = exact.as_mut() {
            e.push(m.column(j));
        }
    };
    for (i, face) in st.faces.iter().enumerate() {
        let r = cone.range(i);
        let block = &cone.blocks()[i];
        match face {
            BlockFace::Zero => continue,
            BlockFace::Full => {
                r.clone().for_each(|j| unit(j, &mut columns, &mut exact));
                blocks.push(*block);
            }
            BlockFace::Coordinates(keep) => {
                keep.iter().for_each(|&j| unit(r.start + j, &mut columns, &mut exact));
                blocks.push(ConeBlock::orthant(keep.len()).expect("nonempty"));
            }
            BlockFace::Ray(d) => {
                let mut col = DVector::zeros(n);
                col.rows_mut(r.start, r.len()).copy_from_slice(d);
                columns.push(col);
                match (&st.exact_rays[i], exact.as_mut()) {
                    (Some(dq), Some(e)) => {
                        let mut acc = vec![Rational::zero(); k];
                        for (off, dj) in dq.iter().enumerate() {
                            if dj.is_zero() {
                                continue;
                            }
                            for (row, a) in acc.iter_mut().enumerate() {
                                *a += dj * m.get(row, r.start + off);
                            }
                        }
                        e.push(acc);
                    }
                    _ => exact = None,
                }
                blocks.push(ConeBlock::orthant(1).expect("nonempty"));
            }
        }
        owner.push(i);
    }
    let phi = if columns.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&columns)
    };
    let cone = (!blocks.is_empty()).then(|| MultifoldCone::new(blocks).expect("nonempty"));
    Reduced {
        cone,
        m: mf * &phi,
        phi,
        exact_cols: exact,
        owner,
    }
}

enum Alternative {
    Interior(Vec<f64>),
    /// Dual multipliers `y` with `w = -M'y in F*`.
    Certificate(Vec<f64>),
}

struct Band {
    lo: f64,
    hi: f64,
}

impl Band {
    fn new(eps: f64) -> Self {
        Band {
            lo: eps / 10.0,
            hi: eps * 10.0,
        }
    }

    /// `Some(true)` above the band, `Some(false)` below, `None` inside.
    fn positive(&self, v: f64) -> Option<bool> {
        if v >= self.hi {
            Some(true)
        } else if v <= self.lo {
            Some(false)
        } else {
            None
        }
    }
}

/// Solves the alternative on a regular cone. `m` has one column per
/// coordinate of `cone`.
fn alternative(
    m: &DMatrix<f64>,
    cone: &MultifoldCone,
    config: &SolverConfig,
    band: &Band,
) -> Result<(FaceStep, Option<Alternative>)> {
    let n = cone.dim();
    let k = m.nrows();
    let e = cone.identity();
    let me = m * DVector::from_column_slice(&e);
    let ee = dot(&e, &e);
    // Columns: z = x - t e (n, in F), slack (1, orthant), t (free).
    let mut a = DMatrix::zeros(k + 1, n + 2);
    a.view_mut((0, 0), (k, n)).copy_from(m);
    for r in 0..k {
        a[(r, n + 1)] = me[r];
    }
    for c in 0..n {
        a[(k, c)] = e[c];
    }
    a[(k, n)] = 1.0;
    a[(k, n + 1)] = ee;
    let mut rhs = vec![0.0; k + 1];
    rhs[k] = 1.0;
    let mut obj = vec![0.0; n + 2];
    obj[n + 1] = -1.0;
    let mut blocks = cone.blocks().to_vec();
    blocks.push(ConeBlock::orthant(1).expect("nonempty"));
    let program = ConicProgram::new(obj, a, rhs, MultifoldCone::new(blocks)?, 1)?;
    let sol = solver::solve(&program, config)?;
    let t = sol.x[n + 1];
    let step = FaceStep {
        value: t,
        status: sol.status,
        iterations: sol.iterations,
        reduced: Vec::new(),
        exact: false,
    };
    if sol.status != SolveStatus::Optimal {
        return Ok((step, None));
    }
    let outcome = band.positive(t).map(|interior| {
        if interior {
            Alternative::Interior((0..n).map(|j| sol.x[j] + t * e[j]).collect())
        } else {
            Alternative::Certificate(sol.y[..k].to_vec())
        }
    });
    Ok((step, outcome))
}

/// Best rational approximation with denominator at most `max_den`, if one
/// lies within `tol`.
fn rationalize(x: f64, tol: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn in_dual_block(block: &ConeBlock, w: &[Rational]) -> bool {
    if block.is_orthant() {
        w.iter().all(|v| !v.is_negative())
    } else {
        let tail = w[1..].iter().fold(Rational::zero(), |acc, v| acc + v * v);
        !w[0].is_negative() && w[0].clone() * &w[0] >= tail
    }
}

/// `w = -M'y` in exact arithmetic.
fn exact_w(y: &[Rational], cols: &[Vec<Rational>]) -> Vec<Rational> {
    cols.iter()
        .map(|c| {
            -c.iter()
                .zip(y)
                .filter(|(a, _)| !a.is_zero())
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

fn is_certificate(w: &[Rational], cone: &MultifoldCone) -> bool {
    !w.iter().all(Zero::is_zero)
        && (0..cone.num_blocks()).all(|b| in_dual_block(&cone.blocks()[b], &w[cone.range(b)]))
}

/// Rounds each entry of `v / max|v|` to a rational within `tol`.
fn rationalize_all(v: &[f64], tol: f64) -> Option<Vec<Rational>> {
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if !(scale > 0.0) {
        return None;
    }
    v.iter().map(|x| rationalize(x / scale, tol, 1_000_000_000)).collect()
}

/// Linear conditions on `y` forcing the pattern seen in the floating `w`:
/// entries that vanish stay zero and Lorentz blocks on the boundary keep a
/// rational boundary direction. Blocks whose direction is not rational are
/// left free.
fn pattern_rows(w: &[f64], cols: &[Vec<Rational>], cone: &MultifoldCone, thr: f64) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    let neg = |j: usize| -> Vec<Rational> { cols[j].iter().map(|v| -v).collect() };
    for (b, block) in cone.blocks().iter().enumerate() {
        let r = cone.range(b);
        let wb = &w[r.clone()];
        if block.is_orthant() {
            for (off, v) in wb.iter().enumerate() {
                if v.abs() <= thr {
                    rows.push(neg(r.start + off));
                }
            }
            continue;
        }
        let tail = norm2(&wb[1..]);
        if norm2(wb) <= thr {
            rows.extend(r.clone().map(neg));
            continue;
        }
        if wb[0] - tail > thr || tail <= thr {
            continue;
        }
        let unit = |tol: f64, den: i64| -> Option<Vec<Rational>> {
            let u = wb[1..]
                .iter()
                .map(|v| rationalize(v / tail, tol, den))
                .collect::<Option<Vec<_>>>()?;
            (u.iter().fold(Rational::zero(), |acc, v| acc + v * v) == Rational::one()).then_some(u)
        };
        let Some(u) = unit(1e-8, 1_000_000)
            .or_else(|| unit(thr.max(1e-6), 10_000))
            .or_else(|| unit(thr.max(1e-4), 1_000))
        else {
            continue;
        };
        // w_k - u_k w_0 = 0 for every tail coordinate k.
        let head = neg(r.start);
        for (k, uk) in u.iter().enumerate() {
            let row = neg(r.start + 1 + k)
                .iter()
                .zip(&head)
                .map(|(a, h)| a - uk * h)
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Rounds `y` to nearby rationals until `w = -M'y` is a nonzero element of
/// `F*` in exact arithmetic. Plain rounding is tried first; failing that,
/// `y` is projected onto the linear conditions of the pattern of `w` and
/// the projection coefficients are rounded instead.
fn certify(y: &[f64], cols: &[Vec<Rational>], cone: &MultifoldCone) -> Option<Vec<Rational>> {
    for tol in [1e-3, 1e-5, 1e-7, 1e-9] {
        let Some(yq) = rationalize_all(y, tol) else {
            continue;
        };
        let w = exact_w(&yq, cols);
        if is_certificate(&w, cone) {
            return Some(w);
        }
    }
    let k = y.len();
    let wf: Vec<f64> = cols
        .iter()
        .map(|c| -c.iter().zip(y).map(|(a, b)| a.to_f64().unwrap_or(0.0) * b).sum::<f64>())
        .collect();
    let scale = wf.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if !(scale > 0.0) {
        return None;
    }
    let wn: Vec<f64> = wf.iter().map(|v| v / scale).collect();
    let yn: Vec<f64> = y.iter().map(|v| v / scale).collect();
    for thr in [1e-9, 1e-7, 1e-5, 1e-4] {
        let rows = pattern_rows(&wn, cols, cone, thr);
        let basis = if rows.is_empty() {
            (0..k)
                .map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect()
        } else {
            let c = RationalMatrix::new(rows.len(), k, rows.concat()).ok()?;
            c.null_space()
        };
        if basis.is_empty() {
            continue;
        }
        let z = DMatrix::from_fn(k, basis.len(), |i, j| basis[j][i].to_f64().unwrap_or(0.0));
        let Ok(coef) = z.clone().svd(true, true).solve(&DVector::from_column_slice(&yn), 1e-12) else {
            continue;
        };
        for tol in [1e-3, 1e-5, 1e-7, 1e-9] {
            let Some(cq) = rationalize_all(coef.as_slice(), tol) else {
                continue;
            };
            let yq: Vec<Rational> = (0..k)
                .map(|i| {
                    basis
                        .iter()
                        .zip(&cq)
                        .fold(Rational::zero(), |acc, (b, c)| acc + &b[i] * c)
                })
                .collect();
            let w = exact_w(&yq, cols);
            if is_certificate(&w, cone) {
                return Some(w);
            }
        }
    }
    None
}

/// Face of one block after intersecting with `w^perp` for an exactly
/// certified `w`.
fn expose_exact(face: &BlockFace, block: &ConeBlock, w: &[Rational]) -> (BlockFace, Option<Vec<Rational>>) {
    match face {
        BlockFace::Zero => (BlockFace::Zero, None),
        BlockFace::Ray(_) => {
            if w[0].is_positive() {
                (BlockFace::Zero, None)
            } else {
                (face.clone(), None)
            }
        }
        BlockFace::Coordinates(_) | BlockFace::Full if block.is_orthant() => {
            let current = kept_coordinates(face, block);
            let keep: Vec<usize> = current
                .iter()
                .zip(w)
                .filter(|(_, v)| v.is_zero())
                .map(|(&j, _)| j)
                .collect();
            (coordinates_face(keep, block), None)
        }
        _ => {
            if w.iter().all(Zero::is_zero) {
                return (BlockFace::Full, None);
            }
            let tail = w[1..].iter().fold(Rational::zero(), |acc, v| acc + v * v);
            if w[0].clone() * &w[0] > tail {
                return (BlockFace::Zero, None);
            }
            let mut d = vec![Rational::one()];
            d.extend(w[1..].iter().map(|v| -(v / &w[0])));
            let df = d.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
            (BlockFace::Ray(df), Some(d))
        }
    }
}

fn kept_coordinates(face: &BlockFace, block: &ConeBlock) -> Vec<usize> {
    match face {
        BlockFace::Coordinates(c) => c.clone(),
        _ => (0..block.dim()).collect(),
    }
}

fn coordinates_face(keep: Vec<usize>, block: &ConeBlock) -> BlockFace {
    if keep.is_empty() {
        BlockFace::Zero
    } else if keep.len() == block.dim() {
        BlockFace::Full
    } else {
        BlockFace::Coordinates(keep)
    }
}

/// Floating counterpart of `expose_exact`; `None` when a decision falls
/// inside the band.
fn expose_float(face: &BlockFace, block: &ConeBlock, w: &[f64], band: &Band) -> Option<BlockFace> {
    match face {
        BlockFace::Zero => Some(BlockFace::Zero),
        BlockFace::Ray(_) => match band.positive(w[0])? {
            true => Some(BlockFace::Zero),
            false => Some(face.clone()),
        },
        BlockFace::Coordinates(_) | BlockFace::Full if block.is_orthant() => {
            let current = kept_coordinates(face, block);
            let mut keep = Vec::new();
            for (slot, &j) in current.iter().enumerate() {
                if !band.positive(w[slot])? {
                    keep.push(j);
                }
            }
            Some(coordinates_face(keep, block))
        }
        _ => {
            if !band.positive(norm2(w))? {
                return Some(BlockFace::Full);
            }
            if band.positive(margin_unchecked(block, w))? {
                return Some(BlockFace::Zero);
            }
            let tail = norm2(&w[1..]);
            let mut d = vec![1.0];
            d.extend(w[1..].iter().map(|v| -v / tail));
            Some(BlockFace::Ray(d))
        }
    }
}

/// Moves `x` onto the null space of `m` when the correction is tiny and
/// keeps `x` interior.
fn polish(m: &DMatrix<f64>, cone: &MultifoldCone, x: Vec<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return x;
    }
    let xv = DVector::from_column_slice(&x);
    let r = m * &xv;
    let Ok(pinv) = m.clone().pseudo_inverse(1e-12 * m.norm().max(1.0)) else {
        return x;
    };
    let dx = pinv * r;
    if dx.norm() > 1e-6 * xv.norm() {
        return x;
    }
    let candidate: Vec<f64> = (xv - dx).iter().copied().collect();
    let before = cone.min_margin(&x).unwrap_or(0.0);
    let after = cone.min_margin(&candidate).unwrap_or(-1.0);
    if after > 0.5 * before {
        candidate
    } else {
        x
    }
}

/// Computes the minimal face of `cone` containing `{x in cone : m x = 0}`.
pub fn minimal_face(
    m: &RationalMatrix,
    cone: &MultifoldCone,
    config: &SolverConfig,
) -> Result<FaceChain> {
    crate::error::check_dim("minimal_face columns", cone.dim(), m.cols())?;
    let band = Band::new(config.classification_eps);
    let mf = DMatrix::from_row_slice(m.rows(), m.cols(), &m.to_f64());
    let r = cone.num_blocks();
    let mut st = State {
        faces: vec![BlockFace::Full; r],
        exact_rays: vec![None; r],
    };
    let mut steps = Vec::new();
    let done = |st: State, witness, steps, stuck: Option<&str>| FaceChain {
        faces: st.faces,
        witness,
        steps,
        stuck: stuck.map(str::to_string),
    };
    // Each productive step removes at least one coordinate.
    for _ in 0..=cone.dim() {
        let red = reduce(m, &mf, cone, &st);
        let Some(rcone) = red.cone.as_ref() else {
            return Ok(done(st, vec![0.0; cone.dim()], steps, None));
        };
        let lift = |x: Vec<f64>| -> Vec<f64> {
            let x = polish(&red.m, rcone, x);
            (&red.phi * DVector::from_vec(x)).iter().copied().collect()
        };
        if red.m.iter().all(|v| *v == 0.0) {
            return Ok(done(st.clone(), lift(rcone.identity()), steps, None));
        }
        let (mut step, outcome) = alternative(&red.m, rcone, config, &band)?;
        let y = match outcome {
            None => {
                let why = if step.status == SolveStatus::Optimal {
                    "optimal value inside the indeterminate band"
                } else {
                    "solver did not reach optimality"
                };
                steps.push(step);
                return Ok(done(st, vec![0.0; cone.dim()], steps, Some(why)));
            }
            Some(Alternative::Interior(x)) => {
                steps.push(step);
                return Ok(done(st.clone(), lift(x), steps, None));
            }
            Some(Alternative::Certificate(y)) => y,
        };
        let mut next = st.clone();
        let certified = red.exact_cols.as_ref().and_then(|cols| certify(&y, cols, rcone));
        if let Some(w) = certified {
            step.exact = true;
            for (rb, &i) in red.owner.iter().enumerate() {
                let (f, ray) = expose_exact(&st.faces[i], &cone.blocks()[i], &w[rcone.range(rb)]);
                if ray.is_some() {
                    next.exact_rays[i] = ray;
                }
                next.faces[i] = f;
            }
        } else {
            let yv = DVector::from_vec(y);
            let mut w: Vec<f64> = (red.m.transpose() * yv).iter().map(|v| -v).collect();
            let scale = dot(&rcone.identity(), &w);
            if !(scale > 0.5) {
                step.status = SolveStatus::Numerical;
                steps.push(step);
                return Ok(done(st, vec![0.0; cone.dim()], steps, Some("certificate lost normalization")));
            }
            w.iter_mut().for_each(|v| *v /= scale);
            for (rb, &i) in red.owner.iter().enumerate() {
                let Some(f) = expose_float(&st.faces[i], &cone.blocks()[i], &w[rcone.range(rb)], &band) else {
                    steps.push(step);
                    return Ok(done(st, vec![0.0; cone.dim()], steps, Some("certificate entry inside the indeterminate band")));
                };
                if matches!(f, BlockFace::Ray(_)) && f != st.faces[i] {
                    next.exact_rays[i] = None;
                }
                next.faces[i] = f;
            }
        }
        step.reduced = (0..r).filter(|&i| next.faces[i] != st.faces[i]).collect();
        if step.reduced.is_empty() {
            steps.push(step);
            return Ok(done(st, vec![0.0; cone.dim()], steps, Some("certificate exposed no smaller face")));
        }
        steps.push(step);
        st = next;
    }
    unreachable!("every productive step shrinks the face")
}
