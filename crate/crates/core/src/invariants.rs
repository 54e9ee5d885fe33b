//! Invariant assembly for lacunary spectra and comparison up to even degree shift.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::brieskorn::{self, BrieskornParams};
use crate::error::{Error, Result};
use crate::exact_algebra::BigRational;
use crate::orbit_model::{
    lacunarity_witness, parity_report, Action, Convention, DegreeWindow, GradedRankModule,
    OrbitSpectrum, Parity,
};
use crate::tower_complex::limit_module;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub module: GradedRankModule,
    pub manifold_label: String,
    pub parameters: BTreeMap<String, String>,
    pub lacunarity_ok: bool,
    pub parity: Parity,
    pub action_cutoff: Action,
    pub degree_window: DegreeWindow,
    pub good_orbits: usize,
    pub bad_orbits: usize,
    /// Hypotheses taken on trust rather than computed.
    pub notes: Vec<String>,
}

fn family_notes(s: &OrbitSpectrum) -> Vec<String> {
    let params = s.parameters();
    let mut notes = vec![format!(
        "orbits below {} certified nondegenerate by the finite genericity check",
        s.action_cutoff()
    )];
    match params.get("family").map(String::as_str) {
        Some("brieskorn") => {
            notes.push("exact fillability by the Milnor fiber is assumed".into());
            if let Some(sphere) = params.get("p_is_pm1_mod_8") {
                notes.push(format!("p = ±1 mod 8 (manifold is a standard sphere): {sphere}"));
            }
        }
        Some("ellipsoid") => {
            notes.push("index values use the linear-flow rotation formula".into());
        }
        _ => {}
    }
    notes
}

/// The windowed invariant `⊕_{γ good} ℚ⟨γ⟩` of a lacunary spectrum.
pub fn assemble_invariant(s: &OrbitSpectrum, convention: Convention) -> Result<InvariantReport> {
    if !s.genericity_checked() {
        return Err(Error::GenericityUnchecked);
    }
    let missing: Vec<String> = s
        .records()
        .iter()
        .filter(|r| r.cz_index.is_none())
        .map(|r| format!("{}^{}", r.base_id, r.iterate))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingIndices(missing.join(", ")));
    }
    let good: Vec<i64> = s.good_records().filter_map(|r| r.cz_index).collect();
    if let Some((first, second)) = lacunarity_witness(good.iter().copied()) {
        return Err(Error::LacunarityFailed { first, second });
    }
    let module = limit_module(s, convention)?;
    Ok(InvariantReport {
        degree_window: module.degree_window(),
        module,
        manifold_label: s.manifold_label().to_string(),
        parameters: s.parameters().clone(),
        lacunarity_ok: true,
        parity: parity_report(s),
        action_cutoff: s.action_cutoff().clone(),
        good_orbits: good.len(),
        bad_orbits: s.len() - good.len(),
        notes: family_notes(s),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    EqualUpToShift {
        shift: i64,
    },
    /// Ranks differ for every tested shift; the witness is for the first shift tried.
    Distinct {
        witness_degree: i64,
        witness_shift: i64,
        ranks: (u64, u64),
    },
    Inconclusive {
        reason: String,
    },
}

/// Result of testing one shift `s`: compare `a(d)` with `b(d + s)` for `d` in `overlap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTrial {
    pub shift: i64,
    pub overlap: Option<DegreeWindow>,
    /// First mismatch `(d, a(d), b(d + s))`.
    pub mismatch: Option<(i64, u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftComparison {
    pub verdict: Verdict,
    /// Overlap of the validity windows (in the first module's degrees) for the reported shift.
    pub window: Option<DegreeWindow>,
    pub max_shift: i64,
    pub trials: Vec<ShiftTrial>,
}

/// Even shifts ordered by absolute value, positive first.
fn shift_order(max_shift: i64) -> impl Iterator<Item = i64> {
    (0..=max_shift / 2).flat_map(|h| {
        let s = 2 * h;
        if s == 0 {
            vec![0]
        } else {
            vec![s, -s]
        }
    })
}

fn trial(a: &GradedRankModule, b: &GradedRankModule, shift: i64) -> ShiftTrial {
    let overlap = a.degree_window().intersect(&b.degree_window().shifted(-shift));
    if overlap.is_empty() {
        return ShiftTrial {
            shift,
            overlap: None,
            mismatch: None,
        };
    }
    let candidates: BTreeSet<i64> = a
        .ranks()
        .keys()
        .copied()
        .chain(b.ranks().keys().map(|d| d - shift))
        .filter(|d| overlap.contains(*d))
        .collect();
    let mismatch = candidates
        .into_iter()
        .map(|d| (d, a.rank(d), b.rank(d + shift)))
        .find(|(_, ra, rb)| ra != rb);
    ShiftTrial {
        shift,
        overlap: Some(overlap),
        mismatch,
    }
}

/// Looks for an even `s` with `|s| ≤ max_shift` such that `a(d) = b(d + s)` on
/// the overlap of the validity windows.
pub fn compare_up_to_even_shift(
    a: &GradedRankModule,
    b: &GradedRankModule,
    max_shift: i64,
) -> Result<ShiftComparison> {
    if a.convention() != b.convention() {
        return Err(Error::ConventionMismatch);
    }
    if max_shift < 0 || max_shift % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "max_shift = {max_shift} must be a nonnegative even integer"
        )));
    }
    let trials: Vec<ShiftTrial> = shift_order(max_shift).map(|s| trial(a, b, s)).collect();
    let matched = trials
        .iter()
        .find(|t| t.overlap.is_some() && t.mismatch.is_none());
    let (verdict, window) = if let Some(t) = matched {
        (Verdict::EqualUpToShift { shift: t.shift }, t.overlap)
    } else if let Some(t) = trials.iter().find(|t| t.overlap.is_some()) {
        let (d, ra, rb) = t.mismatch.expect("unmatched trial with overlap has a mismatch");
        (
            Verdict::Distinct {
                witness_degree: d,
                witness_shift: t.shift,
                ranks: (ra, rb),
            },
            t.overlap,
        )
    } else {
        (
            Verdict::Inconclusive {
                reason: format!(
                    "windows {} and {} do not overlap for any shift up to {max_shift}",
                    a.degree_window(),
                    b.degree_window()
                ),
            },
            None,
        )
    };
    Ok(ShiftComparison {
        verdict,
        window,
        max_shift,
        trials,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UstilovskyReport {
    pub comparison: ShiftComparison,
    pub first: InvariantReport,
    pub second: InvariantReport,
    pub caveat: String,
}

const WINDOW_CAVEAT: &str = "verdict concerns the invariants truncated at the stated action cutoff \
and restricted to the stated degree windows; it is evidence at that scale, not a statement about all degrees";

fn brieskorn_invariant(p: u32, m: usize, eps: &[BigRational], cutoff: &Action) -> Result<InvariantReport> {
    let params = BrieskornParams::new(p, m, eps.to_vec())?;
    let spectrum = brieskorn::enumerate_orbits(&params, cutoff)?;
    assemble_invariant(&spectrum, Convention::MinusCz)
}

/// Computes the invariants of `Σ(p1, 2, …, 2)` and `Σ(p2, 2, …, 2)` with the
/// same perturbation and compares them up to even shift.
pub fn ustilovsky_report(
    p1: u32,
    p2: u32,
    m: usize,
    eps: &[BigRational],
    action_cutoff: &Action,
    max_shift: i64,
) -> Result<UstilovskyReport> {
    let (first, second) = std::thread::scope(|scope| {
        let handle = scope.spawn(|| brieskorn_invariant(p2, m, eps, action_cutoff));
        let first = brieskorn_invariant(p1, m, eps, action_cutoff);
        (first, handle.join().expect("pipeline thread panicked"))
    });
    let (first, second) = (first?, second?);
    let comparison = compare_up_to_even_shift(&first.module, &second.module, max_shift)?;
    Ok(UstilovskyReport {
        comparison,
        first,
        second,
        caveat: WINDOW_CAVEAT.to_string(),
    })
}
