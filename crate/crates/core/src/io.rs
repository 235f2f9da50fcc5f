//! Problem and report files, the random instance generator and the oracle
//! harness comparing the floating classifier with the exact one.
//!
//! Problem files are JSON. Integer entries and `"p/q"` strings are kept
//! exact, decimal numbers are read as `f64`:
//!
//! ```text
//! {
//!   "name": "small",
//!   "blocks": [{"type": "orthant", "dim": 2}, {"type": "soc", "dim": 3}],
//!   "A": [
//!     [1, 0, "1/2", 0, 0],
//!     [0, 1, 0, 0.25, 1]
//!   ]
//! }
//! ```

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::{ConeBlock, ConeKind, MultifoldCone};
use crate::error::{Error, Result};
use crate::exact::{gt_partition_exact, parse_rational, three_way_check, Rational, RationalMatrix};
use crate::geometry::geometric_classify_polyhedral;
use crate::partition::{
    build_certificates, classify_with, verify_certificates, BaseSets, CertificatePair, ClassifyOptions, ConicSystem,
    IndexSet, Method, Mode, PartitionReport, Verification,
};
use crate::solver::SolverConfig;

/// One matrix entry as written in the file.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Exact(Rational),
    Float(f64),
}

impl Entry {
    pub fn to_f64(&self) -> f64 {
        match self {
            Entry::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Entry::Float(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Entry::Exact(q) => q.is_zero(),
            Entry::Float(v) => *v == 0.0,
        }
    }
}

impl From<i64> for Entry {
    fn from(v: i64) -> Self {
        Entry::Exact(Rational::from_integer(v.into()))
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Exact(q) if q.is_integer() => match q.to_integer().to_i64() {
                Some(v) => s.serialize_i64(v),
                None => s.serialize_str(&q.to_string()),
            },
            Entry::Exact(q) => s.serialize_str(&q.to_string()),
            Entry::Float(v) => s.serialize_f64(*v),
        }
    }
}

struct EntryVisitor;

impl Visitor<'_> for EntryVisitor {
    type Value = Entry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Entry, E> {
        Ok(Entry::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Entry, E> {
        Ok(Entry::Exact(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Entry, E> {
        if v.is_finite() {
            Ok(Entry::Float(v))
        } else {
            Err(E::custom("matrix entries must be finite"))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Entry, E> {
        parse_rational(v)
            .map(Entry::Exact)
            .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(EntryVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    #[serde(rename = "type")]
    pub kind: ConeKind,
    pub dim: usize,
}

/// Base sets recorded by the generator, one-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub blocks: Vec<BlockSpec>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl ProblemFile {
    /// Parses and checks the shape. Syntax errors carry line and column,
    /// shape errors the offending row.
    pub fn parse(text: &str) -> Result<Self> {
        let p: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Parse("\"blocks\" must list at least one block".into()));
        }
        if let Some(k) = self.blocks.iter().position(|b| b.dim == 0) {
            return Err(Error::Parse(format!("blocks[{k}] has dimension 0")));
        }
        let n = self.num_cols();
        for (r, row) in self.a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "A[{r}] has {} entries but the blocks have total dimension {n}",
                    row.len()
                )));
            }
        }
        Ok(())
    }

    pub fn num_cols(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn is_exact(&self) -> bool {
        self.a.iter().flatten().all(|e| matches!(e, Entry::Exact(_)))
    }

    pub fn cone(&self) -> Result<MultifoldCone> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| ConeBlock::new(b.kind, b.dim))
            .collect::<Result<Vec<_>>>()?;
        MultifoldCone::new(blocks)
    }

    /// Exact when every entry is, floating otherwise.
    pub fn to_system(&self) -> Result<ConicSystem> {
        self.check()?;
        let cone = self.cone()?;
        let (m, n) = (self.a.len(), self.num_cols());
        if self.is_exact() {
            let data = self
                .a
                .iter()
                .flatten()
                .map(|e| match e {
                    Entry::Exact(q) => q.clone(),
                    Entry::Float(_) => unreachable!("checked exact"),
                })
                .collect();
            ConicSystem::from_exact(RationalMatrix::new(m, n, data)?, cone)
        } else {
            let rows: Vec<Vec<f64>> = self.a.iter().map(|r| r.iter().map(Entry::to_f64).collect()).collect();
            if m == 0 {
                return ConicSystem::new(nalgebra::DMatrix::zeros(0, n), cone);
            }
            ConicSystem::from_rows(&rows, cone)
        }
    }

    /// JSON with one matrix row per line.
    pub fn to_json(&self) -> String {
        let blocks: Vec<String> = self.blocks.iter().map(enc).collect();
        let rows: Vec<String> = self.a.iter().map(|r| format!("    {}", enc(r))).collect();
        let matrix = if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        let mut out = format!(
            "{{\n  \"name\": {},\n  \"blocks\": [{}],\n  \"A\": {matrix}",
            enc(&self.name),
            blocks.join(", ")
        );
        if let Some(e) = &self.expected {
            out.push_str(&format!(",\n  \"expected\": {}", enc(e)));
        }
        out.push_str("\n}\n");
        out
    }
}

fn enc<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

/// Parses `soc:3,orthant:2`. `kind:dxk` repeats a block `k` times, so
/// `orthant:1x6` is six one-dimensional blocks.
pub fn parse_block_spec(spec: &str) -> Result<Vec<BlockSpec>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let bad = || Error::Parse(format!("invalid block {part:?}, expected orthant:<dim> or soc:<dim>"));
        let (kind, dim) = part.split_once(':').ok_or_else(bad)?;
        let kind = match kind.trim() {
            "orthant" => ConeKind::Orthant,
            "soc" => ConeKind::SecondOrder,
            _ => return Err(bad()),
        };
        let (dim, reps) = match dim.split_once('x') {
            Some((d, k)) => (d, k),
            None => (dim, "1"),
        };
        let dim = usize::from_str(dim.trim()).map_err(|_| bad())?;
        let reps = usize::from_str(reps.trim()).map_err(|_| bad())?;
        if dim == 0 || reps == 0 {
            return Err(bad());
        }
        out.extend(std::iter::repeat_n(BlockSpec { kind, dim }, reps));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Planted {
    #[default]
    None,
    /// Record the exact `(B, N)` of an all-orthant instance in the file.
    LpOracle,
}

impl FromStr for Planted {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Planted::None),
            "lp-oracle" => Ok(Planted::LpOracle),
            _ => Err(Error::Parse(format!("unknown --planted value {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenOptions {
    pub seed: u64,
    pub m: usize,
    pub blocks: Vec<BlockSpec>,
    /// Probability that an entry is drawn rather than set to zero.
    pub density: f64,
    pub planted: Planted,
}

/// Integer entries uniform in `[-2, 2]`, each kept with probability
/// `density`.
pub fn generate(opts: &GenOptions) -> Result<ProblemFile> {
    if !(0.0..=1.0).contains(&opts.density) {
        return Err(Error::Config(format!("density {} outside [0, 1]", opts.density)));
    }
    if opts.blocks.is_empty() {
        return Err(Error::EmptyCone);
    }
    let n: usize = opts.blocks.iter().map(|b| b.dim).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let a: Vec<Vec<Entry>> = (0..opts.m)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let v = if rng.gen_bool(opts.density) { rng.gen_range(-2..=2) } else { 0 };
                    Entry::from(v)
                })
                .collect()
        })
        .collect();
    let mut problem = ProblemFile {
        name: format!("seed{}-m{}-n{}", opts.seed, opts.m, n),
        blocks: opts.blocks.clone(),
        a,
        expected: None,
    };
    if opts.planted == Planted::LpOracle {
        let exact = exact_base_sets(&problem.to_system()?)?;
        let one = |s: &IndexSet| s.iter().map(|i| i + 1).collect();
        problem.expected = Some(Expected {
            b: one(&exact.b),
            n: one(&exact.n),
        });
    }
    Ok(problem)
}

/// Base sets of an all-orthant exact system from the rational simplex.
pub fn exact_base_sets(system: &ConicSystem) -> Result<BaseSets> {
    let opts = ClassifyOptions {
        method: Method::ExactLp,
        parallel: false,
    };
    Ok(classify_with(system, &SolverConfig::default(), opts)?.base_sets)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub solves: usize,
    pub iterations: usize,
    pub not_optimal: usize,
}

impl SolverStats {
    pub fn of(report: &PartitionReport) -> Self {
        let counted = report.diagnostics.iter().filter(|d| d.iterations > 0);
        SolverStats {
            solves: counted.clone().count(),
            iterations: counted.clone().map(|d| d.iterations).sum(),
            not_optimal: counted
                .filter(|d| d.status != crate::solver::SolveStatus::Optimal)
                .count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub problem: ProblemFile,
    pub report: PartitionReport,
    pub certificates: Option<CertificatePair>,
    /// Why certificates are missing, when they are.
    pub certificate_error: Option<String>,
    pub tolerances: SolverConfig,
    pub solver: SolverStats,
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rebuilds the system from the embedded problem and rechecks the
    /// certificates at the recorded feasibility tolerance.
    pub fn verify(&self) -> Result<Verification> {
        let system = self.problem.to_system()?;
        let certs = self
            .certificates
            .as_ref()
            .ok_or_else(|| Error::Certificate("report carries no certificates".into()))?;
        Ok(verify_certificates(&system, &self.report, certs, self.tolerances.feas_tol))
    }

    pub fn text(&self) -> String {
        let r = &self.report;
        let one = |s: &IndexSet| {
            let v: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", v.join(","))
        };
        let mut out = format!("{}\n", r);
        out.push_str(&format!(
            "B0={} N0={}\n",
            one(&r.base_sets.b0),
            one(&r.base_sets.n0)
        ));
        out.push_str(&format!("problem: {}\nmode: {:?}  method: {:?}\n", self.problem.name, self.mode, r.method));
        out.push_str(&format!(
            "solves: {}  iterations: {}  not optimal: {}\n",
            self.solver.solves, self.solver.iterations, self.solver.not_optimal
        ));
        match (&self.certificates, &self.certificate_error) {
            (Some(c), _) => {
                let worst = c.margins.iter().map(|m| m.complementarity.abs()).fold(0.0, f64::max);
                out.push_str(&format!("certificates: verified, max |<x_i, A_i'y>| = {worst:.3e}\n"));
            }
            (None, Some(e)) => out.push_str(&format!("certificates: none ({e})\n")),
            (None, None) => out.push_str("certificates: none\n"),
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub config: SolverConfig,
    pub method: Method,
    pub parallel: bool,
    pub seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            config: SolverConfig::default(),
            method: Method::FacialReduction,
            parallel: false,
            seed: None,
        }
    }
}

/// Solver tolerances for a classification threshold `eps`.
pub fn config_for_tolerance(eps: f64) -> SolverConfig {
    let base = SolverConfig::default();
    let inner = base.feas_tol.min(eps / 100.0);
    SolverConfig {
        feas_tol: inner,
        gap_tol: inner,
        classification_eps: eps,
        ..base
    }
}

/// Classifies, builds and verifies certificates when the classification
/// is full.
pub fn run_classification(problem: &ProblemFile, opts: &RunOptions) -> Result<ReportFile> {
    let system = problem.to_system()?;
    if opts.method == Method::ExactLp && !problem.is_exact() {
        return Err(Error::NotExact("decimal entries cannot be used with the exact method".into()));
    }
    let report = classify_with(
        &system,
        &opts.config,
        ClassifyOptions {
            method: opts.method,
            parallel: opts.parallel,
        },
    )?;
    let (certificates, certificate_error) = match build_certificates(&system, &report) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(ReportFile {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        mode: report.mode,
        seed: opts.seed,
        problem: problem.clone(),
        solver: SolverStats::of(&report),
        tolerances: report.tolerances,
        report,
        certificates,
        certificate_error,
    })
}

/// Outcome of comparing the floating classifier against the exact paths.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub instances: usize,
    pub mismatches: usize,
    pub indeterminates: usize,
    pub details: Vec<String>,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.indeterminates == 0
    }
}

impl fmt::Display for OracleSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instances: {}  mismatches: {}  indeterminates: {}",
            self.instances, self.mismatches, self.indeterminates
        )?;
        for d in &self.details {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Blocks whose columns all lie in `cols`.
fn blocks_within(cone: &MultifoldCone, cols: &IndexSet) -> IndexSet {
    (0..cone.num_blocks())
        .filter(|&i| cone.range(i).all(|j| cols.contains(&j)))
        .collect()
}

/// Runs the exact partition, the geometric partition, the three-way check
/// and the floating classifier on one all-orthant exact problem.
pub fn oracle_check_problem(problem: &ProblemFile, config: &SolverConfig, summary: &mut OracleSummary) -> Result<()> {
    let system = problem.to_system()?;
    if !system.cone().is_polyhedral() {
        return Err(Error::NotPolyhedral);
    }
    let a = system
        .exact()
        .ok_or_else(|| Error::NotExact("oracle check needs exact entries".into()))?;
    summary.instances += 1;
    let name = &problem.name;
    let gt = gt_partition_exact(a)?;
    if geometric_classify_polyhedral(a)? != gt {
        summary.mismatches += 1;
        summary.details.push(format!("{name}: geometric partition differs from the exact one"));
    }
    if !three_way_check(a)? {
        summary.mismatches += 1;
        summary.details.push(format!("{name}: three descriptions disagree"));
    }
    let cone = system.cone();
    let expected = BaseSets {
        b: blocks_within(cone, &gt.0),
        n: blocks_within(cone, &gt.1),
        b0: blocks_within(cone, &gt.0),
        n0: blocks_within(cone, &gt.1),
    };
    let report = classify_with(
        &system,
        config,
        ClassifyOptions {
            method: Method::FacialReduction,
            parallel: false,
        },
    )?;
    if !report.is_full() {
        summary.indeterminates += 1;
        summary.details.push(format!("{name}: floating classification partial: {report}"));
    } else if report.base_sets != expected {
        summary.mismatches += 1;
        summary
            .details
            .push(format!("{name}: floating {:?} vs exact {:?}", report.base_sets, expected));
    }
    Ok(())
}

/// `count` generated `m x n` instances over one-dimensional orthant blocks,
/// instance `k` drawn from seed `seed + k`.
pub fn oracle_check(count: usize, seed: u64, m: usize, n: usize, config: &SolverConfig) -> Result<OracleSummary> {
    let mut summary = OracleSummary::default();
    for k in 0..count {
        let problem = generate(&GenOptions {
            seed: seed.wrapping_add(k as u64),
            m,
            blocks: vec![BlockSpec { kind: ConeKind::Orthant, dim: 1 }; n],
            density: 1.0,
            planted: Planted::None,
        })?;
        oracle_check_problem(&problem, config, &mut summary)?;
    }
    Ok(summary)
}

/// Whether a rational entry is an integer within `bound` in absolute value.
pub fn is_small_integer(e: &Entry, bound: i64) -> bool {
    match e {
        Entry::Exact(q) => q.is_integer() && q.to_integer().to_i64().is_some_and(|v| v.abs() <= bound),
        Entry::Float(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
  "name": "t",
  "blocks": [{"type": "orthant", "dim": 2}, {"type": "soc", "dim": 2}],
  "A": [
    [1, "1/2", 0.25, -3],
    [0, 0, 1, "-7/3"]
  ]
}"#;

    #[test]
    fn parses_exact_and_decimal_entries() {
        let p = ProblemFile::parse(EXAMPLE).unwrap();
        assert_eq!(p.a[0][1], Entry::Exact(parse_rational("1/2").unwrap()));
        assert_eq!(p.a[0][2], Entry::Float(0.25));
        assert!(!p.is_exact());
        let again = ProblemFile::parse(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn errors_carry_positions() {
        let bad = EXAMPLE.replace("\"1/2\"", "\"1/x\"");
        let msg = ProblemFile::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("invalid rational") && msg.contains("line 5"), "{msg}");
        let short = EXAMPLE.replace(", \"-7/3\"", "");
        let msg = ProblemFile::parse(&short).unwrap_err().to_string();
        assert!(msg.contains("A[1] has 3 entries") && msg.contains("4"), "{msg}");
        let msg = ProblemFile::parse("{\"name\": \"x\", \"blocks\": [], \"A\": []}").unwrap_err().to_string();
        assert!(msg.contains("at least one block"), "{msg}");
    }

    #[test]
    fn block_specs() {
        let b = parse_block_spec("soc:3,orthant:2").unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0], BlockSpec { kind: ConeKind::SecondOrder, dim: 3 });
        assert_eq!(parse_block_spec("orthant:1x6").unwrap().len(), 6);
        for bad in ["soc", "cube:2", "soc:0", "orthant:2x0", ""] {
            assert!(parse_block_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let opts = GenOptions {
            seed: 1,
            m: 3,
            blocks: parse_block_spec("orthant:6").unwrap(),
            density: 1.0,
            planted: Planted::None,
        };
        let a = generate(&opts).unwrap();
        assert_eq!(a.to_json(), generate(&opts).unwrap().to_json());
        assert_eq!((a.a.len(), a.num_cols()), (3, 6));
        assert!(a.a.iter().flatten().all(|e| is_small_integer(e, 2)));
        let other = generate(&GenOptions { seed: 2, ..opts.clone() }).unwrap();
        assert_ne!(a.a, other.a);
        let sparse = generate(&GenOptions { density: 0.0, ..opts }).unwrap();
        assert!(sparse.a.iter().flatten().all(Entry::is_zero));
    }

    #[test]
    fn planted_oracle_matches_exact_classification() {
        let p = generate(&GenOptions {
            seed: 5,
            m: 2,
            blocks: parse_block_spec("orthant:1x5").unwrap(),
            density: 1.0,
            planted: Planted::LpOracle,
        })
        .unwrap();
        let e = p.expected.clone().unwrap();
        let (b, n) = gt_partition_exact(p.to_system().unwrap().exact().unwrap()).unwrap();
        assert_eq!(e.b, b.iter().map(|i| i + 1).collect::<Vec<_>>());
        assert_eq!(e.n, n.iter().map(|i| i + 1).collect::<Vec<_>>());
        let soc = GenOptions {
            seed: 5,
            m: 2,
            blocks: parse_block_spec("soc:3").unwrap(),
            density: 1.0,
            planted: Planted::LpOracle,
        };
        assert!(generate(&soc).is_err());
    }

    #[test]
    fn report_round_trip_reverifies() {
        let p = ProblemFile::parse(
            r#"{"name": "six", "blocks": [
                {"type": "orthant", "dim": 1}, {"type": "orthant", "dim": 1}, {"type": "orthant", "dim": 1},
                {"type": "soc", "dim": 2}, {"type": "soc", "dim": 2}, {"type": "soc", "dim": 4}],
               "A": [[1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0],
                     [0, 1, 0, 0, 0, -1, 0, 0, 0, 1, 0],
                     [0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1]]}"#,
        )
        .unwrap();
        let rep = run_classification(&p, &RunOptions::default()).unwrap();
        assert_eq!(rep.report.to_string(), "O={1} B={2} N={3} N′={4} B′={5} C={6}");
        let back = ReportFile::parse(&rep.to_json()).unwrap();
        assert!(back.verify().unwrap().ok);
        assert!(rep.text().contains("certificates: verified"));
    }

    #[test]
    fn oracle_on_small_corpus() {
        let s = oracle_check(10, 3, 3, 5, &SolverConfig::default()).unwrap();
        assert_eq!(s.instances, 10);
        assert!(s.passed(), "{s}");
        assert_eq!(oracle_check(0, 3, 3, 5, &SolverConfig::default()).unwrap().instances, 0);
    }
}
