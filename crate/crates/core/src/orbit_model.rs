//! Orbit records, action-truncated spectra and graded rank modules.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{serde_rational, BigRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionUnit {
    /// The stored value is the coefficient of π.
    PiMultiple,
    /// The stored value is the action itself.
    Plain,
}

/// An exact action or period.
///
/// Ellipsoid and Brieskorn actions are rational multiples of π and are stored
/// by their coefficient; circle-bundle actions are plain rationals. Actions with
/// different units never compare.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    #[serde(with = "serde_rational")]
    pub value: BigRational,
    pub unit: ActionUnit,
}

impl Action {
    pub fn pi(coefficient: BigRational) -> Self {
        Action {
            value: coefficient,
            unit: ActionUnit::PiMultiple,
        }
    }

    pub fn plain(value: BigRational) -> Self {
        Action {
            value,
            unit: ActionUnit::Plain,
        }
    }

    pub fn try_cmp(&self, other: &Action) -> Result<Ordering> {
        if self.unit != other.unit {
            return Err(Error::UnitMismatch(self.to_string(), other.to_string()));
        }
        Ok(self.value.cmp(&other.value))
    }

    pub fn times(&self, n: u64) -> Action {
        Action {
            value: &self.value * BigRational::from_integer(n.into()),
            unit: self.unit,
        }
    }

    /// Number of positive multiples `N` with `N * self < cutoff`.
    pub(crate) fn iterates_below(&self, cutoff: &BigRational) -> u64 {
        if !self.value.is_positive() || cutoff <= &BigRational::zero() {
            return 0;
        }
        // largest N with N * value < cutoff is ceil(cutoff / value) - 1
        let ratio = cutoff / &self.value;
        let n = ratio.ceil().to_integer() - 1;
        u64::try_from(n).unwrap_or(0)
    }
}


impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unit {
            ActionUnit::PiMultiple => write!(f, "{}π", self.value),
            ActionUnit::Plain => write!(f, "{}", self.value),
        }
    }
}

/// Spec-level alias: an action expressed as coefficient × π.
pub type PiRational = Action;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitClass {
    Good,
    Bad,
}

/// An orbit is good iff its index has the parity of the underlying simple orbit's index.
pub fn classify_orbit(cz_simple: i64, cz_iterate: i64) -> OrbitClass {
    if (cz_simple - cz_iterate).rem_euclid(2) == 0 {
        OrbitClass::Good
    } else {
        OrbitClass::Bad
    }
}

/// First consecutive pair `(k, k+1)` in the set, if any.
pub fn lacunarity_witness<I: IntoIterator<Item = i64>>(indices: I) -> Option<(i64, i64)> {
    let set: BTreeSet<i64> = indices.into_iter().collect();
    set.iter()
        .zip(set.iter().skip(1))
        .find(|(a, b)| **b == **a + 1)
        .map(|(a, b)| (*a, *b))
}

/// A set of integers is lacunary when it contains no two consecutive numbers.
pub fn is_lacunary<I: IntoIterator<Item = i64>>(indices: I) -> bool {
    lacunarity_witness(indices).is_none()
}

/// One periodic Reeb orbit `γ^N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebOrbitRecord {
    /// Identifies the simple orbit this record iterates.
    pub base_id: String,
    pub iterate: u64,
    pub action: Action,
    /// `None` for families where the index is not modelled (circle bundles).
    pub cz_index: Option<i64>,
    /// Morse index of the critical point underlying a circle-bundle orbit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morse_index: Option<i64>,
    pub is_good: bool,
    /// Covering number `k_γ`; always equal to `iterate`.
    pub multiplicity: u64,
}

impl ReebOrbitRecord {
    pub fn new(
        base_id: impl Into<String>,
        iterate: u64,
        action: Action,
        cz_index: Option<i64>,
        is_good: bool,
    ) -> Self {
        ReebOrbitRecord {
            base_id: base_id.into(),
            iterate,
            action,
            cz_index,
            morse_index: None,
            is_good,
            multiplicity: iterate,
        }
    }
}

/// A finite, action-truncated list of orbits of one contact form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct OrbitSpectrum {
    manifold_label: String,
    parameters: BTreeMap<String, String>,
    records: Vec<ReebOrbitRecord>,
    action_cutoff: Action,
    genericity_checked: bool,
    /// Every orbit NOT listed (action at or above the cutoff) has index at least this.
    index_floor_beyond_cutoff: Option<i64>,
}

#[derive(Deserialize)]
struct RawSpectrum {
    manifold_label: String,
    #[serde(default)]
    parameters: BTreeMap<String, String>,
    records: Vec<ReebOrbitRecord>,
    action_cutoff: Action,
    genericity_checked: bool,
    #[serde(default)]
    index_floor_beyond_cutoff: Option<i64>,
}

impl TryFrom<RawSpectrum> for OrbitSpectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        let mut s = OrbitSpectrum::new(
            raw.manifold_label,
            raw.records,
            raw.action_cutoff,
            raw.genericity_checked,
        )?;
        s.parameters = raw.parameters;
        s.index_floor_beyond_cutoff = raw.index_floor_beyond_cutoff;
        Ok(s)
    }
}

impl OrbitSpectrum {
    /// Validates and sorts the records.
    ///
    /// Checks: every action is below the cutoff and in the cutoff's unit; no
    /// duplicate `(base_id, iterate)`; every base orbit is present with all of
    /// its iterates `1..=N`; actions are additive in the iterate; `multiplicity`
    /// equals `iterate`; the good flag agrees with the index parities.
    pub fn new(
        manifold_label: impl Into<String>,
        mut records: Vec<ReebOrbitRecord>,
        action_cutoff: Action,
        genericity_checked: bool,
    ) -> Result<Self> {
        for r in &records {
            if r.action.try_cmp(&action_cutoff)? != Ordering::Less {
                return Err(Error::InvalidSpectrum(format!(
                    "{}^{} has action {} not below the cutoff {}",
                    r.base_id, r.iterate, r.action, action_cutoff
                )));
            }
            if r.iterate == 0 || r.multiplicity != r.iterate {
                return Err(Error::InvalidSpectrum(format!(
                    "{}^{} has multiplicity {}",
                    r.base_id, r.iterate, r.multiplicity
                )));
            }
        }
        let mut families: BTreeMap<&str, BTreeMap<u64, &ReebOrbitRecord>> = BTreeMap::new();
        for r in &records {
            if families
                .entry(r.base_id.as_str())
                .or_default()
                .insert(r.iterate, r)
                .is_some()
            {
                return Err(Error::InvalidSpectrum(format!(
                    "duplicate record {}^{}",
                    r.base_id, r.iterate
                )));
            }
        }
        for (base, iterates) in &families {
            let top = *iterates.keys().next_back().expect("nonempty family");
            if iterates.len() as u64 != top {
                return Err(Error::InvalidSpectrum(format!(
                    "{base} is missing iterates below {top}"
                )));
            }
            let simple = iterates[&1];
            for (n, r) in iterates {
                if r.action != simple.action.times(*n) {
                    return Err(Error::InvalidSpectrum(format!(
                        "{base}^{n} action {} is not {n} times {}",
                        r.action, simple.action
                    )));
                }
                if let (Some(mu1), Some(mu)) = (simple.cz_index, r.cz_index) {
                    if (classify_orbit(mu1, mu) == OrbitClass::Good) != r.is_good {
                        return Err(Error::InvalidSpectrum(format!(
                            "{base}^{n} good flag disagrees with indices {mu1}, {mu}"
                        )));
                    }
                }
            }
        }
        records.sort_by(|a, b| {
            a.action
                .value
                .cmp(&b.action.value)
                .then_with(|| a.base_id.cmp(&b.base_id))
                .then_with(|| a.iterate.cmp(&b.iterate))
        });
        Ok(OrbitSpectrum {
            manifold_label: manifold_label.into(),
            parameters: BTreeMap::new(),
            records,
            action_cutoff,
            genericity_checked,
            index_floor_beyond_cutoff: None,
        })
    }

    pub fn with_parameters(mut self, parameters: BTreeMap<String, String>) -> Self {
        self.parameters = parameters;
        self
    }

    pub fn with_index_floor(mut self, floor: Option<i64>) -> Self {
        self.index_floor_beyond_cutoff = floor;
        self
    }

    pub fn manifold_label(&self) -> &str {
        &self.manifold_label
    }

    pub fn parameters(&self) -> &BTreeMap<String, String> {
        &self.parameters
    }

    pub fn records(&self) -> &[ReebOrbitRecord] {
        &self.records
    }

    pub fn action_cutoff(&self) -> &Action {
        &self.action_cutoff
    }

    pub fn genericity_checked(&self) -> bool {
        self.genericity_checked
    }

    pub fn index_floor_beyond_cutoff(&self) -> Option<i64> {
        self.index_floor_beyond_cutoff
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn good_records(&self) -> impl Iterator<Item = &ReebOrbitRecord> {
        self.records.iter().filter(|r| r.is_good)
    }
}

/// Keeps the records with action strictly below `cutoff`.
pub fn truncate_spectrum(s: &OrbitSpectrum, cutoff: &Action) -> Result<OrbitSpectrum> {
    if cutoff.try_cmp(&s.action_cutoff)? == Ordering::Greater {
        return Err(Error::CutoffExceedsValidity {
            requested: cutoff.to_string(),
            validity: s.action_cutoff.to_string(),
        });
    }
    let (kept, dropped): (Vec<_>, Vec<_>) = s
        .records
        .iter()
        .cloned()
        .partition(|r| r.action.value < cutoff.value);
    // orbits dropped here lower the floor on indices beyond the new cutoff
    let floor = s.index_floor_beyond_cutoff.map(|f| {
        dropped
            .iter()
            .filter_map(|r| r.cz_index)
            .fold(f, i64::min)
    });
    Ok(OrbitSpectrum {
        manifold_label: s.manifold_label.clone(),
        parameters: s.parameters.clone(),
        records: kept,
        action_cutoff: cutoff.clone(),
        genericity_checked: s.genericity_checked,
        index_floor_beyond_cutoff: floor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Degree of the generator of `γ` is `−μ_CZ(γ)`.
    MinusCz,
    /// Degree is `+μ_CZ(γ)`.
    PlusCz,
}

impl Convention {
    pub fn degree_of(self, cz_index: i64) -> i64 {
        match self {
            Convention::MinusCz => -cz_index,
            Convention::PlusCz => cz_index,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Convention::MinusCz => Convention::PlusCz,
            Convention::PlusCz => Convention::MinusCz,
        }
    }
}

/// Closed integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    pub lo: i64,
    pub hi: i64,
}

impl DegreeWindow {
    pub fn new(lo: i64, hi: i64) -> Self {
        DegreeWindow { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    pub fn intersect(&self, other: &DegreeWindow) -> DegreeWindow {
        DegreeWindow::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn shifted(&self, by: i64) -> DegreeWindow {
        DegreeWindow::new(self.lo + by, self.hi + by)
    }

    pub fn negated(&self) -> DegreeWindow {
        DegreeWindow::new(-self.hi, -self.lo)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for DegreeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Finite graded ℚ-module given by its ranks, complete on `degree_window`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModule", into = "RawModule")]
pub struct GradedRankModule {
    ranks: BTreeMap<i64, u64>,
    degree_window: DegreeWindow,
    action_cutoff: Action,
    convention: Convention,
}

#[derive(Serialize, Deserialize)]
struct RankEntry {
    degree: i64,
    rank: u64,
}

#[derive(Serialize, Deserialize)]
struct RawModule {
    ranks: Vec<RankEntry>,
    degree_window: DegreeWindow,
    action_cutoff: Action,
    convention: Convention,
    total_rank: u64,
}

impl From<GradedRankModule> for RawModule {
    fn from(m: GradedRankModule) -> Self {
        RawModule {
            total_rank: m.total_rank(),
            ranks: m
                .ranks
                .into_iter()
                .map(|(degree, rank)| RankEntry { degree, rank })
                .collect(),
            degree_window: m.degree_window,
            action_cutoff: m.action_cutoff,
            convention: m.convention,
        }
    }
}

impl TryFrom<RawModule> for GradedRankModule {
    type Error = Error;

    fn try_from(raw: RawModule) -> Result<Self> {
        let module = GradedRankModule::new(
            raw.ranks.into_iter().map(|e| (e.degree, e.rank)).collect(),
            raw.degree_window,
            raw.action_cutoff,
            raw.convention,
        )?;
        if module.total_rank() != raw.total_rank {
            return Err(Error::InvalidParams("total_rank disagrees with ranks".into()));
        }
        Ok(module)
    }
}

impl GradedRankModule {
    /// Zero ranks are dropped; a nonzero rank outside the window is an error.
    pub fn new(
        ranks: BTreeMap<i64, u64>,
        degree_window: DegreeWindow,
        action_cutoff: Action,
        convention: Convention,
    ) -> Result<Self> {
        let ranks: BTreeMap<i64, u64> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        if let Some(&d) = ranks.keys().find(|&&d| !degree_window.contains(d)) {
            return Err(Error::InvalidParams(format!(
                "rank in degree {d} lies outside the window {degree_window}"
            )));
        }
        Ok(GradedRankModule {
            ranks,
            degree_window,
            action_cutoff,
            convention,
        })
    }

    pub fn ranks(&self) -> &BTreeMap<i64, u64> {
        &self.ranks
    }

    pub fn rank(&self, degree: i64) -> u64 {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn degree_window(&self) -> DegreeWindow {
        self.degree_window
    }

    pub fn action_cutoff(&self) -> &Action {
        &self.action_cutoff
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// The same module read in the opposite grading convention.
    pub fn flip_convention(&self) -> GradedRankModule {
        GradedRankModule {
            ranks: self.ranks.iter().map(|(&d, &r)| (-d, r)).collect(),
            degree_window: self.degree_window.negated(),
            action_cutoff: self.action_cutoff.clone(),
            convention: self.convention.flipped(),
        }
    }
}

/// Total rank; a lower bound for the number of good orbits of action below the module's cutoff.
pub fn rank_lower_bound(m: &GradedRankModule) -> u64 {
    m.total_rank()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    AllEven,
    AllOdd,
    Mixed,
}

/// Parity of the indexed records. An empty spectrum counts as `AllEven`.
pub fn parity_report(s: &OrbitSpectrum) -> Parity {
    let mut parities = s.records.iter().filter_map(|r| r.cz_index).map(|mu| mu.rem_euclid(2));
    let Some(first) = parities.next() else {
        return Parity::AllEven;
    };
    if parities.any(|p| p != first) {
        Parity::Mixed
    } else if first == 0 {
        Parity::AllEven
    } else {
        Parity::AllOdd
    }
}
