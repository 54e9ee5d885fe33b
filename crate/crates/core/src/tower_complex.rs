//! Twin-tower complexes `ℚ[u]/u^{N+1} ⊗ ⟨γ_min, γ_Max⟩` of a single orbit.
//!
//! The generator `u^l ⊗ γ_Max` sits in degree `−μ + 2l` and `u^l ⊗ γ_min` in
//! degree `−μ + 1 + 2l` (minus-index grading, `μ_CZ(γ_min) = μ − 1`). The
//! differential only has the two components
//!
//! * `∂(u^l ⊗ γ_min) = φ₀ · u^l ⊗ γ_Max`, with `φ₀ = ±2` for bad orbits and `0` otherwise,
//! * `∂(u^l ⊗ γ_Max) = φ₁ · u^{l−1} ⊗ γ_min`, with `φ₁ = k_γ` for good orbits and `0` otherwise.
//!
//! Cross-tower terms are zero; this is only sound when the good indices are
//! lacunary, which [`crate::invariants::assemble_invariant`] enforces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_algebra::{homology_ranks, int, GradedComplex, RationalMatrix};
use crate::orbit_model::{Convention, DegreeWindow, GradedRankModule, OrbitSpectrum, ReebOrbitRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerGenerator {
    pub u_power: u32,
    pub leg: Leg,
    pub degree: i64,
}

#[derive(Debug, Clone)]
pub struct TowerComplex {
    pub cz_index: i64,
    pub multiplicity: u64,
    pub good: bool,
    pub truncation: u32,
    pub generators: Vec<TowerGenerator>,
    pub complex: GradedComplex,
}

/// Builds the tower of an orbit with index `mu` and multiplicity `k`, truncated at `u^N`.
pub fn build_tower(mu: i64, k: u64, good: bool, truncation: u32) -> Result<TowerComplex> {
    build_tower_with_sign(mu, k, good, truncation, 1)
}

/// Same as [`build_tower`] with `φ₀ = 2 * bad_sign` on bad orbits.
pub fn build_tower_with_sign(
    mu: i64,
    k: u64,
    good: bool,
    truncation: u32,
    bad_sign: i64,
) -> Result<TowerComplex> {
    if k == 0 {
        return Err(Error::InvalidParams("multiplicity must be positive".into()));
    }
    if bad_sign.abs() != 1 {
        return Err(Error::InvalidParams("sign must be +1 or -1".into()));
    }
    let levels = truncation as usize + 1;
    let bottom = -mu;
    let mut generators = Vec::with_capacity(2 * levels);
    for l in 0..=truncation {
        let max_degree = bottom + 2 * l as i64;
        generators.push(TowerGenerator {
            u_power: l,
            leg: Leg::Max,
            degree: max_degree,
        });
        generators.push(TowerGenerator {
            u_power: l,
            leg: Leg::Min,
            degree: max_degree + 1,
        });
    }

    let phi0 = if good { 0 } else { 2 * bad_sign };
    let phi1 = if good { k as i64 } else { 0 };
    let one_by_one = |x: i64| RationalMatrix::from_rows(vec![vec![int(x)]], 1).expect("1x1");

    let mut complex = GradedComplex::new(bottom, vec![1; 2 * levels]);
    for l in 0..=truncation as i64 {
        let max_degree = bottom + 2 * l;
        complex.set_boundary(max_degree + 1, one_by_one(phi0))?;
        if l > 0 {
            complex.set_boundary(max_degree, one_by_one(phi1))?;
        }
    }

    Ok(TowerComplex {
        cz_index: mu,
        multiplicity: k,
        good,
        truncation,
        generators,
        complex,
    })
}

impl TowerComplex {
    pub fn from_record(record: &ReebOrbitRecord, truncation: u32) -> Result<TowerComplex> {
        let mu = record
            .cz_index
            .ok_or_else(|| Error::MissingIndices(format!("{}^{}", record.base_id, record.iterate)))?;
        build_tower(mu, record.multiplicity, record.is_good, truncation)
    }
}

/// Exact ℚ-homology of a tower, nonzero degrees only.
pub fn tower_homology(t: &TowerComplex) -> Result<BTreeMap<i64, usize>> {
    homology_ranks(&t.complex)
}

/// Classes of one orbit's tower that survive the direct limit over `N`.
///
/// Computed from the towers at `N = 1` and `N = 2`: a class persists when the
/// inclusion carries it to a class in the same degree; the class at the top of
/// the tower moves up by two and does not.
pub fn limit_contribution(mu: i64, k: u64, good: bool) -> Result<BTreeMap<i64, usize>> {
    let small = tower_homology(&build_tower(mu, k, good, 1)?)?;
    let large = tower_homology(&build_tower(mu, k, good, 2)?)?;
    Ok(small
        .into_iter()
        .filter(|(d, r)| large.get(d) == Some(r))
        .collect())
}

/// The limit module `⊕ ℚ⟨γ⟩` over the good orbits of `spectrum`, restricted to
/// its completeness window.
pub fn limit_module(spectrum: &OrbitSpectrum, convention: Convention) -> Result<GradedRankModule> {
    if !spectrum.genericity_checked() {
        return Err(Error::GenericityUnchecked);
    }
    let mut ranks: BTreeMap<i64, u64> = BTreeMap::new();
    for record in spectrum.records() {
        let mu = record.cz_index.ok_or_else(|| {
            Error::MissingIndices(format!("{}^{}", record.base_id, record.iterate))
        })?;
        for (d, r) in limit_contribution(mu, record.multiplicity, record.is_good)? {
            // towers are built in minus-index grading
            let degree = convention.degree_of(-d);
            *ranks.entry(degree).or_default() += r as u64;
        }
    }
    // classes below the floor may be joined by orbits beyond the cutoff
    let window = completeness_window(spectrum, convention);
    ranks.retain(|d, _| window.contains(*d));
    GradedRankModule::new(ranks, window, spectrum.action_cutoff().clone(), convention)
}

/// Degrees on which the truncated module equals the full one.
///
/// When the spectrum knows a lower bound `f` for the index of every orbit
/// beyond its cutoff, every degree `d ≥ 1 − f` (minus-index grading) is
/// complete. Otherwise only the realized range is reported.
pub fn completeness_window(spectrum: &OrbitSpectrum, convention: Convention) -> DegreeWindow {
    let degrees: Vec<i64> = spectrum
        .records()
        .iter()
        .filter_map(|r| r.cz_index)
        .map(|mu| -mu)
        .collect();
    let realized_lo = degrees.iter().copied().min();
    let realized_hi = degrees.iter().copied().max();
    let minus = match spectrum.index_floor_beyond_cutoff() {
        Some(floor) => {
            let lo = 1 - floor;
            let hi = [Some(0), Some(lo), realized_hi].into_iter().flatten().max().unwrap();
            DegreeWindow::new(lo, hi)
        }
        None => match (realized_lo, realized_hi) {
            (Some(lo), Some(hi)) => DegreeWindow::new(lo, hi),
            _ => DegreeWindow::new(0, 0),
        },
    };
    match convention {
        Convention::MinusCz => minus,
        Convention::PlusCz => minus.negated(),
    }
}

/// Checks that the towers at two truncations and the limit agree on `window`.
pub fn stabilization_check(
    mu: i64,
    k: u64,
    good: bool,
    n_small: u32,
    n_large: u32,
    window: DegreeWindow,
) -> Result<bool> {
    let escaping_degree = -mu + 1 + 2 * n_small as i64;
    if window.hi >= escaping_degree {
        return Err(Error::WindowTooWide { escaping_degree });
    }
    if n_small > n_large {
        return Err(Error::InvalidParams(format!(
            "N_small = {n_small} exceeds N_large = {n_large}"
        )));
    }
    let restrict = |h: BTreeMap<i64, usize>| -> BTreeMap<i64, usize> {
        h.into_iter().filter(|(d, _)| window.contains(*d)).collect()
    };
    let small = restrict(tower_homology(&build_tower(mu, k, good, n_small)?)?);
    let large = restrict(tower_homology(&build_tower(mu, k, good, n_large)?)?);
    let limit = restrict(limit_contribution(mu, k, good)?);
    Ok(small == large && large == limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::verify_complex;

    fn boundary_entry(t: &TowerComplex, degree: i64) -> i64 {
        let m = t.complex.boundary(degree);
        if m.rows() == 0 || m.cols() == 0 {
            return 0;
        }
        let q = m.get(0, 0);
        assert!(q.is_integer());
        i64::try_from(q.to_integer()).unwrap()
    }

    #[test]
    fn good_tower_without_u_has_zero_differential() {
        let t = build_tower(18, 2, true, 0).unwrap();
        assert_eq!(t.generators.len(), 2);
        assert_eq!(boundary_entry(&t, -17), 0);
        assert_eq!(tower_homology(&t).unwrap(), BTreeMap::from([(-18, 1), (-17, 1)]));
    }

    #[test]
    fn bad_tower_min_maps_twice_to_max() {
        let t = build_tower(3, 1, false, 1).unwrap();
        // degrees -3 (Max_0), -2 (Min_0), -1 (Max_1), 0 (Min_1)
        assert_eq!(boundary_entry(&t, -2), 2);
        assert_eq!(boundary_entry(&t, 0), 2);
        assert_eq!(boundary_entry(&t, -1), 0);
        assert!(tower_homology(&t).unwrap().is_empty());
    }

    #[test]
    fn good_tower_matches_zigzag() {
        // top to bottom: Min_3 -0-> Max_3 -k-> Min_2 -0-> Max_2 -k-> ... -0-> Max_0
        let t = build_tower(18, 2, true, 3).unwrap();
        assert!(verify_complex(&t.complex));
        let top = -18 + 1 + 2 * 3;
        let expected: Vec<i64> = (-17..=top)
            .rev()
            .map(|d| if (d + 18) % 2 == 1 { 0 } else { 2 })
            .collect();
        let actual: Vec<i64> = (-17..=top).rev().map(|d| boundary_entry(&t, d)).collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn good_tower_homology_places_top_class_at_min_leg() {
        let t = build_tower(18, 2, true, 2).unwrap();
        assert_eq!(tower_homology(&t).unwrap(), BTreeMap::from([(-18, 1), (-13, 1)]));
        let bad = build_tower(3, 5, false, 4).unwrap();
        assert!(tower_homology(&bad).unwrap().is_empty());
    }

    #[test]
    fn zero_multiplicity_is_rejected() {
        assert!(build_tower(1, 0, true, 1).is_err());
    }

    #[test]
    fn limit_keeps_only_the_bottom_class() {
        assert_eq!(limit_contribution(18, 2, true).unwrap(), BTreeMap::from([(-18, 1)]));
        assert!(limit_contribution(3, 2, false).unwrap().is_empty());
    }

    #[test]
    fn stabilization_examples() {
        let w = DegreeWindow::new(-30, -14);
        assert!(stabilization_check(18, 2, true, 3, 7, w).unwrap());
        assert!(stabilization_check(3, 2, false, 2, 9, DegreeWindow::new(-10, 0)).unwrap());
        assert_eq!(
            stabilization_check(18, 2, true, 3, 7, DegreeWindow::new(-30, -11)),
            Err(Error::WindowTooWide { escaping_degree: -11 })
        );
    }
}
