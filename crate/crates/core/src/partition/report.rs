use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::solver::{SolveStatus, SolverConfig};

pub type IndexSet = BTreeSet<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IndexClass {
    InB,
    InBPrime,
    InN,
    InNPrime,
    InC,
    InO,
}

impl IndexClass {
    /// Printing order of the text report.
    pub const ORDER: [IndexClass; 6] = [
        IndexClass::InO,
        IndexClass::InB,
        IndexClass::InN,
        IndexClass::InNPrime,
        IndexClass::InBPrime,
        IndexClass::InC,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            IndexClass::InB => "B",
            IndexClass::InBPrime => "B′",
            IndexClass::InN => "N",
            IndexClass::InNPrime => "N′",
            IndexClass::InC => "C",
            IndexClass::InO => "O",
        }
    }
}

/// `B, N, B0, N0` as zero-based index sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSets {
    pub b: IndexSet,
    pub n: IndexSet,
    pub b0: IndexSet,
    pub n0: IndexSet,
}

impl BaseSets {
    /// `B ⊆ B0`, `N ⊆ N0`, `B ∩ N0 = ∅` and `N ∩ B0 = ∅`.
    pub fn inclusions_hold(&self) -> bool {
        self.b.is_subset(&self.b0)
            && self.n.is_subset(&self.n0)
            && self.b.is_disjoint(&self.n0)
            && self.n.is_disjoint(&self.b0)
    }

    /// Class of index `i`, assuming the inclusions hold.
    pub fn class_of(&self, i: usize) -> IndexClass {
        match (self.b0.contains(&i), self.n0.contains(&i)) {
            (true, true) => IndexClass::InO,
            (true, false) if self.b.contains(&i) => IndexClass::InB,
            (true, false) => IndexClass::InBPrime,
            (false, true) if self.n.contains(&i) => IndexClass::InN,
            (false, true) => IndexClass::InNPrime,
            (false, false) => IndexClass::InC,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Floating,
}

/// How the base sets were decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Method {
    /// Minimal faces of the primal and dual solution sets.
    #[default]
    FacialReduction,
    /// Four bounded auxiliary programs per block.
    AuxiliaryTests,
    /// Rational simplex; all-orthant systems with exact data only.
    ExactLp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportStatus {
    Full,
    PartialClassification { indices: Vec<usize> },
}

/// One solve behind the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub label: String,
    pub block: Option<usize>,
    pub value: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub decision: Option<bool>,
}

/// Solutions retained for building certificates: primal `x` vectors and
/// dual `y` vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub primal: Vec<Vec<f64>>,
    pub dual: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub mode: Mode,
    pub method: Method,
    pub status: ReportStatus,
    /// `None` for undecided indices of a partial classification.
    pub classes: Vec<Option<IndexClass>>,
    pub base_sets: BaseSets,
    pub diagnostics: Vec<Diagnostic>,
    pub tolerances: SolverConfig,
    #[serde(skip)]
    pub witnesses: Witnesses,
}

impl PartitionReport {
    pub(crate) fn assemble(
        r: usize,
        base_sets: BaseSets,
        undecided: IndexSet,
        mode: Mode,
        method: Method,
        diagnostics: Vec<Diagnostic>,
        tolerances: SolverConfig,
        witnesses: Witnesses,
    ) -> Self {
        let classes = (0..r)
            .map(|i| (!undecided.contains(&i)).then(|| base_sets.class_of(i)))
            .collect();
        let status = if undecided.is_empty() {
            ReportStatus::Full
        } else {
            ReportStatus::PartialClassification {
                indices: undecided.into_iter().collect(),
            }
        };
        PartitionReport {
            mode,
            method,
            status,
            classes,
            base_sets,
            diagnostics,
            tolerances,
            witnesses,
        }
    }

    pub fn is_full(&self) -> bool {
        self.status == ReportStatus::Full
    }

    /// Zero-based members of one class.
    pub fn members(&self, class: IndexClass) -> IndexSet {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Some(class))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn class(&self, i: usize) -> Option<IndexClass> {
        self.classes.get(i).copied().flatten()
    }
}

fn one_based(set: &IndexSet) -> String {
    let items: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `O={1} B={2} N={3} N′={4} B′={5} C={6}`, one-based.
impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = IndexClass::ORDER
            .iter()
            .map(|&c| format!("{}={}", c.symbol(), one_based(&self.members(c))))
            .collect();
        write!(f, "{}", parts.join(" "))?;
        if let ReportStatus::PartialClassification { indices } = &self.status {
            let set: IndexSet = indices.iter().copied().collect();
            write!(f, " ?={}", one_based(&set))?;
        }
        Ok(())
    }
}
