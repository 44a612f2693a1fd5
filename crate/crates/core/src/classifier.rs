//! Polar hyperplanes of multiple Lerch and Hurwitz zeta functions.
//!
//! For twisted functions only a superset of the poles is known: H_{1,0} when
//! λ_1 = 0, and H_{i_j,k} for the indices i_j where μ_{i_j} is an integer. For
//! multiple Hurwitz functions the polar set is exact; the only removable
//! hyperplanes are H_{2,k} with B_k(α_2 - α_1) = 0.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bernoulli::{zero_index_set_real, ZeroIndexSet, DEFAULT_ZERO_THRESHOLD};
use crate::domain::{EvalPoint, Hyperplane, Real, TwistParams};
use crate::error::Result;

/// Degrees checked when α_2 - α_1 is only known as a float.
pub const NUMERIC_ZERO_DEGREE: usize = 40;
/// Number of k values listed by [`KSet::enumerate`] in reports.
pub const DISPLAY_BOUND: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Entire,
    PossiblePoles,
    ExactPoles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    ProvenPole,
    Possible,
    Removable,
    /// Not decided: floating α-difference with |B_k| below threshold or k
    /// beyond the checked degree.
    Indeterminate,
}

/// A set of nonnegative integers k, described finitely.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KSet {
    /// k >= from.
    AllFrom { from: u32 },
    /// k >= from and k outside the zero-index set.
    AllFromExcept { from: u32, except: ZeroIndexSet },
    /// k in the zero-index set.
    Matching { set: ZeroIndexSet },
    /// Listed values, plus every k >= from when `from` is set.
    Listed { values: Vec<u32>, from: Option<u32> },
}

impl KSet {
    pub fn contains(&self, k: u32) -> bool {
        match self {
            KSet::AllFrom { from } => k >= *from,
            KSet::AllFromExcept { from, except } => {
                k >= *from && except.contains(k as usize) != Some(true)
            }
            KSet::Matching { set } => set.contains(k as usize) == Some(true),
            KSet::Listed { values, from } => values.contains(&k) || from.is_some_and(|f| k >= f),
        }
    }

    /// Members not exceeding `bound`.
    pub fn enumerate(&self, bound: u32) -> Vec<u32> {
        (0..=bound).filter(|&k| self.contains(k)).collect()
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSet::AllFrom { from } => write!(f, "k >= {from}"),
            KSet::AllFromExcept { from, except } => match except {
                ZeroIndexSet::OddFrom3 => write!(f, "k >= {from}, k even or k = 1"),
                ZeroIndexSet::OddFrom1 => write!(f, "k >= {from}, k even"),
                ZeroIndexSet::Empty => write!(f, "k >= {from}"),
                other => write!(f, "k >= {from}, k not in {other}"),
            },
            KSet::Matching { set } => match set {
                ZeroIndexSet::OddFrom3 => write!(f, "k odd, k >= 3"),
                ZeroIndexSet::OddFrom1 => write!(f, "k odd"),
                other => write!(f, "k in {other}"),
            },
            KSet::Listed { values, from } => {
                write!(f, "k in {values:?}")?;
                if let Some(from) = from {
                    write!(f, " or k >= {from}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleFamily {
    pub i: usize,
    pub k_set: KSet,
    pub certainty: Certainty,
}

impl PoleFamily {
    fn new(i: usize, k_set: KSet, certainty: Certainty) -> Self {
        PoleFamily { i, k_set, certainty }
    }

    pub fn contains(&self, h: Hyperplane) -> bool {
        h.i == self.i && self.k_set.contains(h.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub status: Status,
    pub families: Vec<PoleFamily>,
    /// 1-based indices i with μ_i an integer.
    pub integer_indices: Vec<usize>,
}

impl SingularityReport {
    /// Certainty attached to a hyperplane, `None` if no family names it.
    /// Removable entries take precedence over the families that contain them.
    pub fn certainty_of(&self, h: Hyperplane) -> Option<Certainty> {
        let mut found = None;
        for fam in self.families.iter().filter(|f| f.contains(h)) {
            if fam.certainty == Certainty::Removable {
                return Some(Certainty::Removable);
            }
            found.get_or_insert(fam.certainty);
        }
        found
    }

    pub fn is_polar_candidate(&self, h: Hyperplane) -> bool {
        matches!(
            self.certainty_of(h),
            Some(Certainty::ProvenPole | Certainty::Possible | Certainty::Indeterminate)
        )
    }
}

fn integer_indices(params: &TwistParams, eps: f64) -> Vec<usize> {
    params
        .mus()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_integer(eps))
        .map(|(i, _)| i + 1)
        .collect()
}

/// Hyperplanes that may carry poles of a multiple Lerch function.
pub fn classify_lerch(params: &TwistParams, integer_test_eps: f64) -> SingularityReport {
    let idx = integer_indices(params, integer_test_eps);
    if idx.is_empty() {
        return SingularityReport { status: Status::Entire, families: Vec::new(), integer_indices: idx };
    }
    let mut families = Vec::new();
    let first_certainty = if params.is_hurwitz() { Certainty::ProvenPole } else { Certainty::Possible };
    let start = if idx[0] == 1 {
        families.push(PoleFamily::new(1, KSet::Listed { values: vec![0], from: None }, first_certainty));
        1
    } else {
        0
    };
    for (jm1, &i) in idx.iter().enumerate().skip(start) {
        let j = jm1 + 1;
        let from = (i as i64 - j as i64).max(0) as u32;
        families.push(PoleFamily::new(i, KSet::AllFrom { from }, Certainty::Possible));
    }
    SingularityReport { status: Status::PossiblePoles, families, integer_indices: idx }
}

/// Exact polar set of a multiple Hurwitz function.
pub fn classify_hurwitz(alphas: &[Real]) -> Result<SingularityReport> {
    let r = alphas.len();
    let mut families = vec![PoleFamily::new(
        1,
        KSet::Listed { values: vec![0], from: None },
        Certainty::ProvenPole,
    )];
    if r >= 2 {
        let d = alphas[1].sub(&alphas[0]);
        let zeros = zero_index_set_real(&d, NUMERIC_ZERO_DEGREE, DEFAULT_ZERO_THRESHOLD)?;
        match &zeros {
            ZeroIndexSet::Empty => {
                families.push(PoleFamily::new(2, KSet::AllFrom { from: 0 }, Certainty::ProvenPole));
            }
            ZeroIndexSet::OddFrom1 | ZeroIndexSet::OddFrom3 => {
                families.push(PoleFamily::new(
                    2,
                    KSet::AllFromExcept { from: 0, except: zeros.clone() },
                    Certainty::ProvenPole,
                ));
                families.push(PoleFamily::new(2, KSet::Matching { set: zeros.clone() }, Certainty::Removable));
            }
            ZeroIndexSet::Numeric { nmax, indeterminate } => {
                let nmax = *nmax as u32;
                let undecided: Vec<u32> = indeterminate.iter().map(|&n| n as u32).collect();
                let proven = (0..=nmax).filter(|k| !undecided.contains(k)).collect();
                families.push(PoleFamily::new(
                    2,
                    KSet::Listed { values: proven, from: None },
                    Certainty::ProvenPole,
                ));
                families.push(PoleFamily::new(
                    2,
                    KSet::Listed { values: undecided, from: Some(nmax + 1) },
                    Certainty::Indeterminate,
                ));
            }
        }
    }
    for i in 3..=r {
        families.push(PoleFamily::new(i, KSet::AllFrom { from: 0 }, Certainty::ProvenPole));
    }
    Ok(SingularityReport {
        status: Status::ExactPoles,
        families,
        integer_indices: (1..=r).collect(),
    })
}

/// Exact classification for Hurwitz parameters, the Lerch superset otherwise.
pub fn classify(params: &TwistParams, integer_test_eps: f64) -> Result<SingularityReport> {
    if params.is_hurwitz() {
        classify_hurwitz(params.alphas())
    } else {
        Ok(classify_lerch(params, integer_test_eps))
    }
}

/// The closest polar (or possibly polar) hyperplane within `tol` of `s`.
pub fn nearest_polar(
    params: &TwistParams,
    s: &EvalPoint,
    tol: f64,
    integer_test_eps: f64,
) -> Option<(Hyperplane, f64)> {
    let report = classify(params, integer_test_eps).ok()?;
    let mut best: Option<(Hyperplane, f64)> = None;
    for i in 1..=s.depth().min(params.depth()) {
        let sum = s.partial_sum(i);
        let k = (i as f64 - sum.re).round();
        if k < 0.0 {
            continue;
        }
        let h = Hyperplane::new(i, k as u32);
        if !report.is_polar_candidate(h) {
            continue;
        }
        let dist = (sum - h.level()).norm();
        if dist < tol && best.is_none_or(|(_, d)| dist < d) {
            best = Some((h, dist));
        }
    }
    best
}
