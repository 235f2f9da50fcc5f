//! Nesterov–Todd scaling and Jordan-algebra helpers for orthant and
//! Lorentz blocks.

use nalgebra::DMatrix;

use crate::cone::{dot, norm2, ConeBlock, ConeKind};

/// Scaling `W` of one block with `W x = W^{-1} s = lambda`.
#[derive(Debug, Clone)]
pub(crate) enum BlockScaling {
    /// `W = diag(w)`.
    Orthant { w: Vec<f64> },
    /// `W = eta * [[w0, w1'], [w1, I + w1 w1' / (1 + w0)]]`.
    Lorentz { eta: f64, w0: f64, w1: Vec<f64> },
}

/// `sqrt(v0^2 - ||v1||^2)` computed without cancellation.
fn lorentz_det_sqrt(v: &[f64]) -> f64 {
    let r = norm2(&v[1..]);
    ((v[0] - r) * (v[0] + r)).max(0.0).sqrt()
}

impl BlockScaling {
    /// Requires `x` and `s` strictly inside the block.
    pub(crate) fn new(block: &ConeBlock, x: &[f64], s: &[f64]) -> Self {
        match block.kind() {
            ConeKind::Orthant => BlockScaling::Orthant {
                w: x.iter().zip(s).map(|(xi, si)| (si / xi).sqrt()).collect(),
            },
            ConeKind::SecondOrder => {
                let xn = lorentz_det_sqrt(x);
                let sn = lorentz_det_sqrt(s);
                let xb: Vec<f64> = x.iter().map(|v| v / xn).collect();
                let sb: Vec<f64> = s.iter().map(|v| v / sn).collect();
                let gamma = ((1.0 + dot(&xb, &sb)) / 2.0).sqrt();
                let w0 = (sb[0] + xb[0]) / (2.0 * gamma);
                let w1 = sb[1..]
                    .iter()
                    .zip(&xb[1..])
                    .map(|(s, x)| (s - x) / (2.0 * gamma))
                    .collect();
                BlockScaling::Lorentz {
                    eta: (sn / xn).sqrt(),
                    w0,
                    w1,
                }
            }
        }
    }

    pub(crate) fn apply(&self, v: &[f64], out: &mut [f64]) {
        self.apply_signed(v, out, false);
    }

    pub(crate) fn apply_inv(&self, v: &[f64], out: &mut [f64]) {
        self.apply_signed(v, out, true);
    }

    fn apply_signed(&self, v: &[f64], out: &mut [f64], inverse: bool) {
        match self {
            BlockScaling::Orthant { w } => {
                for ((o, vi), wi) in out.iter_mut().zip(v).zip(w) {
                    *o = if inverse { vi / wi } else { vi * wi };
                }
            }
            BlockScaling::Lorentz { eta, w0, w1 } => {
                let (sign, scale) = if inverse { (-1.0, 1.0 / eta) } else { (1.0, *eta) };
                let w1v = dot(w1, &v[1..]);
                out[0] = scale * (w0 * v[0] + sign * w1v);
                let k = w1v / (1.0 + w0) + sign * v[0];
                for ((o, vi), wi) in out[1..].iter_mut().zip(&v[1..]).zip(w1) {
                    *o = scale * (vi + k * wi);
                }
            }
        }
    }

    /// Dense `W^2`.
    pub(crate) fn squared(&self) -> DMatrix<f64> {
        match self {
            BlockScaling::Orthant { w } => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    w.len(),
                    w.iter().map(|v| v * v),
                ))
            }
            BlockScaling::Lorentz { eta, w0, w1 } => {
                let d = w1.len() + 1;
                let mut m = DMatrix::zeros(d, d);
                m[(0, 0)] = *w0;
                for (k, wk) in w1.iter().enumerate() {
                    m[(0, k + 1)] = *wk;
                    m[(k + 1, 0)] = *wk;
                    for (l, wl) in w1.iter().enumerate() {
                        m[(k + 1, l + 1)] = wk * wl / (1.0 + w0) + if k == l { 1.0 } else { 0.0 };
                    }
                }
                m *= *eta;
                &m * &m
            }
        }
    }
}

/// Jordan product `u o v`.
pub(crate) fn jordan_product(block: &ConeBlock, u: &[f64], v: &[f64], out: &mut [f64]) {
    match block.kind() {
        ConeKind::Orthant => {
            for ((o, a), b) in out.iter_mut().zip(u).zip(v) {
                *o = a * b;
            }
        }
        ConeKind::SecondOrder => {
            out[0] = dot(u, v);
            for k in 1..u.len() {
                out[k] = u[0] * v[k] + v[0] * u[k];
            }
        }
    }
}

/// Solves `lambda o z = r` for `z`.
pub(crate) fn jordan_divide(block: &ConeBlock, lambda: &[f64], r: &[f64], out: &mut [f64]) {
    match block.kind() {
        ConeKind::Orthant => {
            for ((o, l), ri) in out.iter_mut().zip(lambda).zip(r) {
                *o = ri / l;
            }
        }
        ConeKind::SecondOrder => {
            let det = lambda[0] * lambda[0] - dot(&lambda[1..], &lambda[1..]);
            let z0 = (lambda[0] * r[0] - dot(&lambda[1..], &r[1..])) / det;
            out[0] = z0;
            for k in 1..lambda.len() {
                out[k] = (r[k] - z0 * lambda[k]) / lambda[0];
            }
        }
    }
}

/// Largest `alpha >= 0` keeping `v + alpha * dv` in the block, or infinity.
pub(crate) fn max_step(block: &ConeBlock, v: &[f64], dv: &[f64]) -> f64 {
    match block.kind() {
        ConeKind::Orthant => v
            .iter()
            .zip(dv)
            .filter(|(_, d)| **d < 0.0)
            .map(|(x, d)| -x / d)
            .fold(f64::INFINITY, f64::min),
        ConeKind::SecondOrder => {
            let d1 = norm2(&dv[1..]);
            if dv[0] >= d1 {
                return f64::INFINITY;
            }
            let a = dv[0] * dv[0] - d1 * d1;
            let b = v[0] * dv[0] - dot(&v[1..], &dv[1..]);
            let c = {
                let r = norm2(&v[1..]);
                (v[0] - r) * (v[0] + r)
            };
            if c <= 0.0 {
                return 0.0;
            }
            // Reaching here means dv leaves the cone eventually, so a
            // slightly negative discriminant is rounding.
            let disc = (b * b - a * c).max(0.0);
            let t = -(b + b.signum() * disc.sqrt());
            let mut best = if dv[0] < 0.0 { -v[0] / dv[0] } else { f64::INFINITY };
            if a != 0.0 {
                let r = t / a;
                if r > 0.0 {
                    best = best.min(r);
                }
            }
            if t != 0.0 {
                let r = c / t;
                if r > 0.0 {
                    best = best.min(r);
                }
            }
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lorentz_interior(raw: &[f64], lift: f64) -> Vec<f64> {
        let mut v = raw.to_vec();
        v[0] = norm2(&raw[1..]) + lift;
        v
    }

    proptest! {
        #[test]
        fn nt_scaling_maps_x_to_s(
            rx in prop::collection::vec(-3.0f64..3.0, 4),
            rs in prop::collection::vec(-3.0f64..3.0, 4),
            lx in 0.05f64..2.0,
            ls in 0.05f64..2.0,
        ) {
            let block = ConeBlock::second_order(4).unwrap();
            let x = lorentz_interior(&rx, lx);
            let s = lorentz_interior(&rs, ls);
            let w = BlockScaling::new(&block, &x, &s);
            let mut wx = vec![0.0; 4];
            let mut winv_s = vec![0.0; 4];
            w.apply(&x, &mut wx);
            w.apply_inv(&s, &mut winv_s);
            for k in 0..4 {
                prop_assert!((wx[k] - winv_s[k]).abs() <= 1e-8 * (1.0 + wx[k].abs()));
            }
            let h = w.squared();
            let hx = &h * nalgebra::DVector::from_vec(x.clone());
            for k in 0..4 {
                prop_assert!((hx[k] - s[k]).abs() <= 1e-7 * (1.0 + s[k].abs()));
            }
            let mut back = vec![0.0; 4];
            w.apply_inv(&wx, &mut back);
            for k in 0..4 {
                prop_assert!((back[k] - x[k]).abs() <= 1e-8 * (1.0 + x[k].abs()));
            }
        }

        #[test]
        fn jordan_divide_inverts_product(
            rl in prop::collection::vec(-3.0f64..3.0, 3),
            z in prop::collection::vec(-3.0f64..3.0, 3),
            lift in 0.1f64..2.0,
        ) {
            let block = ConeBlock::second_order(3).unwrap();
            let lambda = lorentz_interior(&rl, lift);
            let mut r = vec![0.0; 3];
            jordan_product(&block, &lambda, &z, &mut r);
            let mut back = vec![0.0; 3];
            jordan_divide(&block, &lambda, &r, &mut back);
            for k in 0..3 {
                prop_assert!((back[k] - z[k]).abs() <= 1e-6 * (1.0 + z[k].abs()));
            }
        }

        #[test]
        fn max_step_lands_on_boundary(
            rv in prop::collection::vec(-3.0f64..3.0, 3),
            dv in prop::collection::vec(-3.0f64..3.0, 3),
            lift in 0.1f64..2.0,
        ) {
            let block = ConeBlock::second_order(3).unwrap();
            let v = lorentz_interior(&rv, lift);
            let alpha = max_step(&block, &v, &dv);
            if alpha.is_finite() {
                let p: Vec<f64> = v.iter().zip(&dv).map(|(a, b)| a + alpha * b).collect();
                let m = crate::cone::cone_margin(&block, &p).unwrap();
                prop_assert!(m.abs() <= 1e-7 * (1.0 + norm2(&p)));
                let inside: Vec<f64> = v.iter().zip(&dv).map(|(a, b)| a + 0.99 * alpha * b).collect();
                prop_assert!(crate::cone::cone_margin(&block, &inside).unwrap() > 0.0);
            } else {
                let far: Vec<f64> = v.iter().zip(&dv).map(|(a, b)| a + 1e6 * b).collect();
                prop_assert!(crate::cone::cone_margin(&block, &far).unwrap() >= -1e-6);
            }
        }
    }

    #[test]
    fn axis_parallel_lorentz_step() {
        let block = ConeBlock::second_order(2).unwrap();
        let v = [0.6880137514467977, 0.0];
        let dv = [-0.7155696923736428, 0.0];
        let alpha = max_step(&block, &v, &dv);
        assert!((alpha - v[0] / -dv[0]).abs() < 1e-12, "{alpha}");
    }

    #[test]
    fn orthant_step() {
        let block = ConeBlock::orthant(3).unwrap();
        assert_eq!(max_step(&block, &[1.0, 2.0, 3.0], &[-2.0, 1.0, -1.0]), 0.5);
        assert_eq!(max_step(&block, &[1.0, 2.0, 3.0], &[0.0, 1.0, 1.0]), f64::INFINITY);
    }
}
