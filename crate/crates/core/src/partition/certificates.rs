use serde::{Deserialize, Serialize};

use super::report::{IndexClass, PartitionReport};
use super::system::ConicSystem;
use crate::cone::{canonical_interior_point, dot, margin_unchecked, norm2, BlockVector};
use crate::error::{check_dim, Error, Result};

/// Per-block measures of a certificate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexMargins {
    /// `cone_margin(xbar_i)`.
    pub primal_interior: f64,
    /// `<e_i, xbar_i>`.
    pub primal_pairing: f64,
    /// `cone_margin(A_i' ybar)`.
    pub dual_interior: f64,
    /// `<e_i, A_i' ybar>`.
    pub dual_pairing: f64,
    /// `<xbar_i, A_i' ybar>`.
    pub complementarity: f64,
}

/// A solution of each system that is as interior as the partition allows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificatePair {
    pub xbar: Vec<f64>,
    pub ybar: Vec<f64>,
    pub margins: Vec<IndexMargins>,
}

impl CertificatePair {
    pub fn new(system: &ConicSystem, xbar: Vec<f64>, ybar: Vec<f64>) -> Result<Self> {
        check_dim("certificate x", system.cone().dim(), xbar.len())?;
        check_dim("certificate y", system.rows(), ybar.len())?;
        let margins = margins(system, &xbar, &ybar);
        Ok(CertificatePair {
            xbar,
            ybar,
            margins,
        })
    }

    pub fn xbar_blocks<'a>(&self, system: &'a ConicSystem) -> Result<BlockVector<'a>> {
        BlockVector::new(self.xbar.clone(), system.cone())
    }
}

fn margins(system: &ConicSystem, x: &[f64], y: &[f64]) -> Vec<IndexMargins> {
    let z = system.apply_transpose(y);
    let cone = system.cone();
    (0..cone.num_blocks())
        .map(|i| {
            let r = cone.range(i);
            let block = &cone.blocks()[i];
            let e = canonical_interior_point(block);
            let (xi, zi) = (&x[r.clone()], &z[r]);
            IndexMargins {
                primal_interior: margin_unchecked(block, xi),
                primal_pairing: dot(&e, xi),
                dual_interior: margin_unchecked(block, zi),
                dual_pairing: dot(&e, zi),
                complementarity: dot(xi, zi),
            }
        })
        .collect()
}

/// Primal requirement of a class: interior, nonzero, or zero block.
#[derive(Clone, Copy, PartialEq)]
enum Need {
    Interior,
    Nonzero,
    Zero,
}

fn needs(class: IndexClass) -> (Need, Need) {
    use IndexClass::*;
    let primal = match class {
        InB => Need::Interior,
        InBPrime | InC => Need::Nonzero,
        InN | InNPrime | InO => Need::Zero,
    };
    let dual = match class {
        InN => Need::Interior,
        InNPrime | InC => Need::Nonzero,
        InB | InBPrime | InO => Need::Zero,
    };
    (primal, dual)
}

fn required_margin(need: Need, interior: f64, pairing: f64) -> Option<f64> {
    match need {
        Need::Interior => Some(interior),
        Need::Nonzero => Some(pairing),
        Need::Zero => None,
    }
}

/// Sums the retained maximizers of a fully classified report into one
/// candidate pair, then rescales each side so that its smallest required
/// margin is `max(delta, achieved / 2)`.
pub fn build_certificates(system: &ConicSystem, report: &PartitionReport) -> Result<CertificatePair> {
    if let super::ReportStatus::PartialClassification { indices } = &report.status {
        return Err(Error::Partial(indices.clone()));
    }
    let cone = system.cone();
    let u = cone.identity();
    let mut x = vec![0.0; cone.dim()];
    for w in &report.witnesses.primal {
        let s = dot(&u, w);
        if s > 0.0 {
            x.iter_mut().zip(w).for_each(|(a, b)| *a += b / s);
        }
    }
    let mut y = vec![0.0; system.rows()];
    for v in &report.witnesses.dual {
        let s = dot(&u, &system.apply_transpose(v));
        if s > 0.0 {
            y.iter_mut().zip(v).for_each(|(a, b)| *a += b / s);
        }
    }
    // Blocks known to vanish on every solution are set to zero exactly.
    for i in 0..cone.num_blocks() {
        if report.base_sets.n0.contains(&i) {
            x[cone.range(i)].iter_mut().for_each(|v| *v = 0.0);
        }
    }

    let delta = report.tolerances.classification_eps;
    let m = margins(system, &x, &y);
    let classes: Vec<IndexClass> = report.classes.iter().map(|c| c.expect("full report")).collect();
    let primal_min = classes
        .iter()
        .zip(&m)
        .filter_map(|(c, mi)| required_margin(needs(*c).0, mi.primal_interior, mi.primal_pairing))
        .fold(f64::INFINITY, f64::min);
    let dual_min = classes
        .iter()
        .zip(&m)
        .filter_map(|(c, mi)| required_margin(needs(*c).1, mi.dual_interior, mi.dual_pairing))
        .fold(f64::INFINITY, f64::min);
    let rescale = |v: &mut Vec<f64>, achieved: f64| {
        if achieved.is_finite() && achieved > 0.0 {
            let s = delta.max(achieved / 2.0) / achieved;
            v.iter_mut().for_each(|a| *a *= s);
        }
    };
    rescale(&mut x, primal_min);
    rescale(&mut y, dual_min);

    let pair = CertificatePair::new(system, x, y)?;
    let check = verify_certificates(system, report, &pair, report.tolerances.feas_tol);
    if check.ok {
        Ok(pair)
    } else {
        Err(Error::Certificate(check.violations.join("; ")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Recomputes feasibility, the margins demanded by each class label and
/// blockwise complementarity. Indices in messages are one-based.
pub fn verify_certificates(
    system: &ConicSystem,
    report: &PartitionReport,
    certs: &CertificatePair,
    tol: f64,
) -> Verification {
    let cone = system.cone();
    let mut violations = Vec::new();
    if certs.xbar.len() != cone.dim() || certs.ybar.len() != system.rows() {
        violations.push(format!(
            "certificate dimensions ({}, {}) do not match system ({}, {})",
            certs.xbar.len(),
            certs.ybar.len(),
            cone.dim(),
            system.rows()
        ));
        return Verification {
            ok: false,
            violations,
        };
    }
    let delta = report.tolerances.classification_eps;
    let residual = norm2(&system.apply(&certs.xbar));
    if !(residual <= tol) {
        violations.push(format!("primal residual {residual:.3e} exceeds {tol:.1e}"));
    }
    let z = system.apply_transpose(&certs.ybar);
    let m = margins(system, &certs.xbar, &certs.ybar);
    for i in 0..cone.num_blocks() {
        let k = i + 1;
        let r = cone.range(i);
        let mi = &m[i];
        if !(mi.primal_interior >= -tol) {
            violations.push(format!("i={k} primal block outside the cone"));
        }
        if !(mi.dual_interior >= -tol) {
            violations.push(format!("i={k} dual block outside the cone"));
        }
        if !(mi.complementarity.abs() <= tol) {
            violations.push(format!("i={k} blocks not complementary ({:.3e})", mi.complementarity));
        }
        let Some(class) = report.classes.get(i).copied().flatten() else {
            violations.push(format!("i={k} has no class"));
            continue;
        };
        let (pn, dn) = needs(class);
        match pn {
            Need::Interior if !(mi.primal_interior >= delta - tol) => {
                violations.push(format!("i={k} expected interior margin"));
            }
            Need::Nonzero if !(mi.primal_pairing >= delta - tol) => {
                violations.push(format!("i={k} expected nonzero primal block"));
            }
            Need::Zero if !(norm2(&certs.xbar[r.clone()]) <= tol) => {
                violations.push(format!("i={k} expected zero primal block"));
            }
            _ => {}
        }
        match dn {
            Need::Interior if !(mi.dual_interior >= delta - tol) => {
                violations.push(format!("i={k} expected interior dual margin"));
            }
            Need::Nonzero if !(mi.dual_pairing >= delta - tol) => {
                violations.push(format!("i={k} expected nonzero dual block"));
            }
            Need::Zero if !(norm2(&z[r]) <= tol) => {
                violations.push(format!("i={k} expected zero dual block"));
            }
            _ => {}
        }
    }
    Verification {
        ok: violations.is_empty(),
        violations,
    }
}
