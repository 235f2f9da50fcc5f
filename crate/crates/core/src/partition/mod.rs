//! Classification of block indices into the six-set partition.
//!
//! Three methods decide the base sets `B, N, B0, N0`:
//!
//! * facial reduction (default) computes the minimal face of `K` holding
//!   every solution of `Ax = 0, x in K` and the minimal face of `K*`
//!   holding every `A'y` with `A'y in K*`. A block is in `B` when its
//!   primal face is all of `K_i` and in `N0` when it is `{0}`; `N` and
//!   `B0` come from the dual face the same way.
//! * auxiliary tests solve four bounded programs per block. These programs
//!   need not attain their dual optimum when `AK` is not closed; blocks
//!   whose programs are not decisive fall back to the minimal faces.
//! * exact LP uses the rational simplex and is limited to all-orthant
//!   systems with exact data.

mod auxiliary;
mod certificates;
mod facial;
mod report;
mod system;

use nalgebra::DVector;

pub use auxiliary::{AuxOutcome, AuxTest};
pub use certificates::{build_certificates, verify_certificates, CertificatePair, IndexMargins, Verification};
pub use facial::{minimal_face, BlockFace, FaceChain, FaceStep};
pub use report::{
    BaseSets, Diagnostic, IndexClass, IndexSet, Method, Mode, PartitionReport, ReportStatus,
    Witnesses,
};
pub use system::ConicSystem;

use crate::error::{Error, Result};
use crate::exact::{strict_pair_exact, RationalMatrix};
use crate::par;
use crate::solver::{SolveStatus, SolverConfig};
use auxiliary::AuxContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub method: Method,
    /// Run independent solves on the rayon pool. Ignored without the
    /// `parallel` feature.
    pub parallel: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            method: Method::FacialReduction,
            parallel: true,
        }
    }
}

/// An auxiliary optimum and the decision drawn from it. When the program
/// is not decisive (value inside the band `(eps/10, 10 eps)` or no optimal
/// solve) the decision falls back to the minimal faces and
/// `from_faces` is set.
#[derive(Debug, Clone)]
pub struct AuxDecision {
    pub outcome: AuxOutcome,
    /// For `InB`/`InN`: membership. For `NotInN0`/`NotInB0`: membership
    /// of the complement. `None` when neither source decides.
    pub member: Option<bool>,
    pub from_faces: bool,
}

fn decide(outcome: &AuxOutcome, eps: f64) -> Option<bool> {
    if outcome.status != SolveStatus::Optimal {
        return None;
    }
    if outcome.value >= 10.0 * eps {
        Some(true)
    } else if outcome.value <= eps / 10.0 {
        Some(false)
    } else {
        None
    }
}

/// Minimal primal and dual faces of a system.
struct Faces {
    primal: FaceChain,
    dual: FaceChain,
}

impl Faces {
    fn compute(system: &ConicSystem, config: &SolverConfig, parallel: bool) -> Result<Self> {
        let a = system.rational_matrix();
        let basis = a.null_space();
        let nt = RationalMatrix::new(basis.len(), a.cols(), basis.concat())?;
        let cone = system.cone();
        let (primal, dual) = par::join(
            parallel,
            || minimal_face(&a, cone, config),
            || minimal_face(&nt, cone, config),
        );
        Ok(Faces {
            primal: primal?,
            dual: dual?,
        })
    }

    /// Decision of `test` for block `i`; `None` when the chain it needs
    /// stopped early without settling block `i`.
    fn decide(&self, test: AuxTest, i: usize) -> Option<bool> {
        let chain = if test.is_primal() { &self.primal } else { &self.dual };
        let face = &chain.faces[i];
        match test {
            AuxTest::InB | AuxTest::InN => {
                if chain.stuck.is_none() {
                    Some(face.is_full())
                } else {
                    (!face.is_full()).then_some(false)
                }
            }
            AuxTest::NotInN0 | AuxTest::NotInB0 => {
                if chain.stuck.is_none() {
                    Some(!face.is_zero())
                } else {
                    face.is_zero().then_some(false)
                }
            }
        }
    }
}

fn run_test(system: &ConicSystem, i: usize, config: &SolverConfig, test: AuxTest) -> Result<AuxDecision> {
    config.validate()?;
    if i >= system.num_blocks() {
        return Err(Error::BlockIndex {
            index: i,
            blocks: system.num_blocks(),
        });
    }
    let outcome = AuxContext::new(system, *config).run(test, i)?;
    if let Some(member) = decide(&outcome, config.classification_eps) {
        return Ok(AuxDecision {
            outcome,
            member: Some(member),
            from_faces: false,
        });
    }
    let faces = Faces::compute(system, config, false)?;
    Ok(AuxDecision {
        member: faces.decide(test, i),
        outcome,
        from_faces: true,
    })
}

/// Whether block `i` (zero-based) is in `B`.
pub fn test_in_b(system: &ConicSystem, i: usize, config: &SolverConfig) -> Result<AuxDecision> {
    run_test(system, i, config, AuxTest::InB)
}

/// Whether block `i` is in `N`.
pub fn test_in_n(system: &ConicSystem, i: usize, config: &SolverConfig) -> Result<AuxDecision> {
    run_test(system, i, config, AuxTest::InN)
}

/// Whether block `i` is outside `N0`.
pub fn test_not_in_n0(system: &ConicSystem, i: usize, config: &SolverConfig) -> Result<AuxDecision> {
    run_test(system, i, config, AuxTest::NotInN0)
}

/// Whether block `i` is outside `B0`.
pub fn test_not_in_b0(system: &ConicSystem, i: usize, config: &SolverConfig) -> Result<AuxDecision> {
    run_test(system, i, config, AuxTest::NotInB0)
}

/// Classifies with the default options.
pub fn classify(system: &ConicSystem, config: &SolverConfig) -> Result<PartitionReport> {
    classify_with(system, config, ClassifyOptions::default())
}

pub fn classify_with(
    system: &ConicSystem,
    config: &SolverConfig,
    options: ClassifyOptions,
) -> Result<PartitionReport> {
    config.validate()?;
    match options.method {
        Method::FacialReduction => classify_facial(system, config, options.parallel),
        Method::AuxiliaryTests => classify_auxiliary(system, config, options.parallel),
        Method::ExactLp => classify_exact(system, config),
    }
}

fn face_diagnostics(label: &str, chain: &FaceChain) -> Vec<Diagnostic> {
    chain
        .steps
        .iter()
        .map(|s| Diagnostic {
            label: label.to_string(),
            block: None,
            value: s.value,
            status: s.status,
            iterations: s.iterations,
            decision: Some(s.reduced.is_empty()),
        })
        .collect()
}

fn classify_facial(system: &ConicSystem, config: &SolverConfig, parallel: bool) -> Result<PartitionReport> {
    let r = system.num_blocks();
    let faces = Faces::compute(system, config, parallel)?;
    let mut base = BaseSets::default();
    let mut undecided = IndexSet::new();
    for i in 0..r {
        let d = AuxTest::ALL.map(|t| faces.decide(t, i));
        let [Some(in_b), Some(in_n), Some(out_n0), Some(out_b0)] = d else {
            undecided.insert(i);
            continue;
        };
        insert_decisions(&mut base, i, [in_b, in_n, out_n0, out_b0]);
    }
    if !base.inclusions_hold() {
        undecided.extend(inclusion_offenders(&base, r));
    }
    let mut witnesses = Witnesses::default();
    faces.add_witnesses(system, &mut witnesses);
    let mut diagnostics = face_diagnostics("primal_face", &faces.primal);
    diagnostics.extend(face_diagnostics("dual_face", &faces.dual));
    Ok(PartitionReport::assemble(
        r,
        base,
        undecided,
        Mode::Floating,
        Method::FacialReduction,
        diagnostics,
        *config,
        witnesses,
    ))
}

fn insert_decisions(base: &mut BaseSets, i: usize, [in_b, in_n, out_n0, out_b0]: [bool; 4]) {
    if in_b {
        base.b.insert(i);
    }
    if in_n {
        base.n.insert(i);
    }
    if !out_n0 {
        base.n0.insert(i);
    }
    if !out_b0 {
        base.b0.insert(i);
    }
}

impl Faces {
    /// Adds the relative-interior points of both faces; the dual one is
    /// mapped back to `y` by least squares.
    fn add_witnesses(&self, system: &ConicSystem, witnesses: &mut Witnesses) {
        if self.primal.stuck.is_none() && self.primal.witness.iter().any(|v| *v != 0.0) {
            witnesses.primal.push(self.primal.witness.clone());
        }
        if self.dual.stuck.is_none() && self.dual.witness.iter().any(|v| *v != 0.0) {
            let at = system.matrix().transpose();
            let tol = 1e-12 * at.norm().max(1.0);
            if let Ok(pinv) = at.pseudo_inverse(tol) {
                let y = pinv * DVector::from_column_slice(&self.dual.witness);
                witnesses.dual.push(y.iter().copied().collect());
            }
        }
    }
}

fn inclusion_offenders(base: &BaseSets, r: usize) -> IndexSet {
    (0..r)
        .filter(|i| {
            (base.b.contains(i) && (!base.b0.contains(i) || base.n0.contains(i)))
                || (base.n.contains(i) && (!base.n0.contains(i) || base.b0.contains(i)))
        })
        .collect()
}

fn classify_auxiliary(system: &ConicSystem, config: &SolverConfig, parallel: bool) -> Result<PartitionReport> {
    let r = system.num_blocks();
    let ctx = AuxContext::new(system, *config);
    let zero: Vec<bool> = (0..r).map(|i| system.block_is_zero(i)).collect();
    let jobs: Vec<(usize, AuxTest)> = (0..r)
        .filter(|&i| !zero[i])
        .flat_map(|i| AuxTest::ALL.into_iter().map(move |t| (i, t)))
        .collect();
    let outcomes = par::map(parallel, &jobs, |&(i, t)| ctx.run(t, i));
    let outcomes: Vec<AuxOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let eps = config.classification_eps;
    let mut base = BaseSets::default();
    let mut undecided = IndexSet::new();
    let mut witnesses = Witnesses::default();
    let mut diagnostics = Vec::new();
    let mut faces: Option<Faces> = None;
    let cone = system.cone();
    for i in 0..r {
        if zero[i] {
            base.b.insert(i);
            base.b0.insert(i);
            let mut x = vec![0.0; cone.dim()];
            x[cone.range(i)].copy_from_slice(&crate::cone::canonical_interior_point(&cone.blocks()[i]));
            witnesses.primal.push(x);
            diagnostics.push(Diagnostic {
                label: "zero_block".into(),
                block: Some(i),
                value: 0.0,
                status: SolveStatus::Optimal,
                iterations: 0,
                decision: Some(true),
            });
            continue;
        }
        let mine: Vec<&AuxOutcome> = outcomes.iter().filter(|o| o.block == i).collect();
        let mut decisions = [None; 4];
        for (k, o) in mine.iter().enumerate() {
            decisions[k] = decide(o, eps);
            diagnostics.push(Diagnostic {
                label: label(o.test).into(),
                block: Some(i),
                value: o.value,
                status: o.status,
                iterations: o.iterations,
                decision: decisions[k],
            });
        }
        if decisions.iter().any(Option::is_none) {
            let faces = match &faces {
                Some(f) => f,
                None => faces.insert(Faces::compute(system, config, parallel)?),
            };
            for (k, t) in AuxTest::ALL.into_iter().enumerate() {
                if decisions[k].is_none() {
                    decisions[k] = faces.decide(t, i);
                    diagnostics.push(Diagnostic {
                        label: format!("{}_from_faces", label(t)),
                        block: Some(i),
                        value: f64::NAN,
                        status: SolveStatus::Optimal,
                        iterations: 0,
                        decision: decisions[k],
                    });
                }
            }
        }
        let [Some(in_b), Some(in_n), Some(out_n0), Some(out_b0)] = decisions else {
            undecided.insert(i);
            continue;
        };
        insert_decisions(&mut base, i, [in_b, in_n, out_n0, out_b0]);
        if in_b && decide(mine[0], eps).is_some() {
            witnesses.primal.push(mine[0].witness.clone());
        }
        if in_n && decide(mine[1], eps).is_some() {
            witnesses.dual.push(mine[1].witness.clone());
        }
        if out_n0 && decide(mine[2], eps).is_some() {
            witnesses.primal.push(mine[2].witness.clone());
        }
        if out_b0 && decide(mine[3], eps).is_some() {
            witnesses.dual.push(mine[3].witness.clone());
        }
    }
    if let Some(f) = &faces {
        f.add_witnesses(system, &mut witnesses);
    }
    if !base.inclusions_hold() {
        undecided.extend(inclusion_offenders(&base, r));
    }
    Ok(PartitionReport::assemble(
        r,
        base,
        undecided,
        Mode::Floating,
        Method::AuxiliaryTests,
        diagnostics,
        *config,
        witnesses,
    ))
}

fn label(t: AuxTest) -> &'static str {
    match t {
        AuxTest::InB => "in_B",
        AuxTest::InN => "in_N",
        AuxTest::NotInN0 => "not_in_N0",
        AuxTest::NotInB0 => "not_in_B0",
    }
}

fn classify_exact(system: &ConicSystem, config: &SolverConfig) -> Result<PartitionReport> {
    if !system.cone().is_polyhedral() {
        return Err(Error::NotPolyhedral);
    }
    let a = system
        .exact()
        .ok_or_else(|| Error::NotExact("system was built from floating entries".into()))?;
    let pair = strict_pair_exact(a)?;
    let cone = system.cone();
    let r = cone.num_blocks();
    let mut base = BaseSets::default();
    for i in 0..r {
        let range = cone.range(i);
        if range.clone().all(|j| pair.b.contains(&j)) {
            base.b.insert(i);
            base.b0.insert(i);
        }
        if range.clone().all(|j| pair.n.contains(&j)) {
            base.n.insert(i);
            base.n0.insert(i);
        }
    }
    let to_f64 = |v: &[crate::exact::Rational]| -> Vec<f64> {
        use num_traits::ToPrimitive;
        v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    };
    let witnesses = Witnesses {
        primal: vec![to_f64(&pair.x)],
        dual: vec![to_f64(&pair.y)],
    };
    let diagnostics = vec![Diagnostic {
        label: "exact_lp".into(),
        block: None,
        value: 0.0,
        status: SolveStatus::Optimal,
        iterations: 0,
        decision: Some(pair.verify(a)),
    }];
    Ok(PartitionReport::assemble(
        r,
        base,
        IndexSet::new(),
        Mode::Exact,
        Method::ExactLp,
        diagnostics,
        *config,
        witnesses,
    ))
}
