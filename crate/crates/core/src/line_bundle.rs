//! Orbit counts for hypersurfaces in negative line bundles `L → B`.
//!
//! On the constant-radius circle bundle perturbed by a Morse function `f` on
//! the base, periodic Reeb orbits sit over the critical points of `f`. The
//! bundle's curvature constant and connection fix the geometry but never enter
//! the arithmetic below.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{serde_rational, BigRational};
use crate::orbit_model::{is_lacunary, lacunarity_witness, Action, ActionUnit, OrbitSpectrum, ReebOrbitRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseManifoldData {
    pub label: String,
    /// `β_0, …, β_{2n}`.
    pub betti: Vec<u64>,
    /// Indices of the critical points of the chosen Morse function, sorted.
    pub morse_indices: Vec<i64>,
}

impl BaseManifoldData {
    pub fn new(label: impl Into<String>, betti: Vec<u64>, mut morse_indices: Vec<i64>) -> Self {
        morse_indices.sort_unstable();
        BaseManifoldData {
            label: label.into(),
            betti,
            morse_indices,
        }
    }

    /// Betti numbers read off a perfect Morse function.
    fn perfect(label: String, morse_indices: Vec<i64>) -> Self {
        let top = morse_indices.iter().copied().max().unwrap_or(0).max(0) as usize;
        let mut betti = vec![0; top + 1];
        for &i in &morse_indices {
            betti[i as usize] += 1;
        }
        Self::new(label, betti, morse_indices)
    }

    pub fn critical_point_count(&self) -> usize {
        self.morse_indices.len()
    }

    /// True iff the index counts equal the Betti numbers.
    pub fn is_perfect(&self) -> bool {
        let mut counts = vec![0u64; self.betti.len()];
        for &i in &self.morse_indices {
            match usize::try_from(i).ok().and_then(|i| counts.get_mut(i)) {
                Some(c) => *c += 1,
                None => return false,
            }
        }
        counts == self.betti
    }
}

/// Σ β_i: the number of geometrically distinct orbits guaranteed on the base's circle bundles.
pub fn orbit_lower_bound(base: &BaseManifoldData) -> u64 {
    base.betti.iter().sum()
}

/// Perfect Morse data for `ℂP^{n−1}` (`"cp"`) or the oriented Grassmannian
/// `G⁺(2, 2n)` (`"grassmannian"`).
pub fn catalog(name: &str, n: usize) -> Result<BaseManifoldData> {
    match name {
        "cp" => {
            if n == 0 {
                return Err(Error::BadDimension("cp needs n >= 1".into()));
            }
            // critical points [0:…:1:…:0] of Σ (j+1)|w_j|² / Σ |w_j|² have index 2j
            let indices = (0..n as i64).map(|j| 2 * j).collect();
            Ok(BaseManifoldData::perfect(format!("CP^{}", n - 1), indices))
        }
        "grassmannian" => {
            if n < 2 {
                return Err(Error::BadDimension("grassmannian needs n >= 2".into()));
            }
            let n = n as i64;
            let lower = (0..n).map(|i| 2 * i);
            let upper = (0..n).map(|i| 2 * n - 2 + 2 * i);
            let indices = lower.chain(upper).collect();
            Ok(BaseManifoldData::perfect(format!("G+(2,{})", 2 * n), indices))
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

/// Orbits of the circle bundle of radius `R` (fiber period `R²`) below `action_cutoff`.
///
/// One base orbit per critical point; indices are not modelled, so records
/// carry the Morse index instead and cannot feed invariant assembly.
pub fn circle_bundle_spectrum(
    base: &BaseManifoldData,
    r_squared: &BigRational,
    action_cutoff: &Action,
) -> Result<OrbitSpectrum> {
    if !r_squared.is_positive() {
        return Err(Error::InvalidParams(format!("R^2 = {r_squared} must be positive")));
    }
    if action_cutoff.unit != ActionUnit::Plain {
        return Err(Error::UnitMismatch(
            action_cutoff.to_string(),
            "plain bundle action".into(),
        ));
    }
    let fiber = Action::plain(r_squared.clone());
    let count = fiber.iterates_below(&action_cutoff.value);
    let mut records = Vec::new();
    for (i, &index) in base.morse_indices.iter().enumerate() {
        for iterate in 1..=count {
            let mut r = ReebOrbitRecord::new(format!("crit{i}"), iterate, fiber.times(iterate), None, true);
            r.morse_index = Some(index);
            records.push(r);
        }
    }
    let parameters = BTreeMap::from([
        ("family".to_string(), "circle_bundle".to_string()),
        ("base".to_string(), base.label.clone()),
        ("r_squared".to_string(), r_squared.to_string()),
    ]);
    Ok(OrbitSpectrum::new(
        format!("circle bundle over {}", base.label),
        records,
        action_cutoff.clone(),
        false,
    )?
    .with_parameters(parameters))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleHypothesisReport {
    pub base: String,
    #[serde(with = "serde_rational")]
    pub r1_squared: BigRational,
    #[serde(with = "serde_rational")]
    pub r2_squared: BigRational,
    /// `R₂/R₁ < √2`, tested exactly as `R₂² < 2R₁²`.
    pub pinching_ok: bool,
    pub lacunary_ok: bool,
    /// Caller-asserted: every periodic orbit on Σ has action at least `R₁²`.
    pub min_period_ok: bool,
    /// Caller-asserted: `S_{R₁}` bounds a Liouville domain `W′`.
    pub filling_asserted: bool,
    pub lower_bound: u64,
    pub failures: Vec<String>,
}

impl BundleHypothesisReport {
    pub fn all_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_bundle_hypotheses(
    base: &BaseManifoldData,
    r1_squared: &BigRational,
    r2_squared: &BigRational,
    min_period_ok: bool,
    filling_asserted: bool,
) -> BundleHypothesisReport {
    let mut failures = Vec::new();
    if !r1_squared.is_positive() || r2_squared < r1_squared {
        failures.push(format!(
            "radii must satisfy 0 < R1^2 <= R2^2, got {r1_squared} and {r2_squared}"
        ));
    }
    let twice = r1_squared * BigRational::from_integer(2.into());
    let pinching_ok = r2_squared.cmp(&twice) == Ordering::Less;
    if !pinching_ok {
        failures.push(format!("pinching: R2^2 = {r2_squared} is not below 2 R1^2 = {twice}"));
    }
    let lacunary_ok = is_lacunary(base.morse_indices.iter().copied());
    if let Some((a, b)) = lacunarity_witness(base.morse_indices.iter().copied()) {
        failures.push(format!("Morse indices {a} and {b} are consecutive"));
    }
    if !min_period_ok {
        failures.push("minimal period bound R1^2 not asserted".into());
    }
    if !filling_asserted {
        failures.push("Liouville filling of S_R1 not asserted".into());
    }
    let lower_bound = if failures.is_empty() {
        orbit_lower_bound(base)
    } else {
        0
    };
    BundleHypothesisReport {
        base: base.label.clone(),
        r1_squared: r1_squared.clone(),
        r2_squared: r2_squared.clone(),
        pinching_ok,
        lacunary_ok,
        min_period_ok,
        filling_asserted,
        lower_bound,
        failures,
    }
}
