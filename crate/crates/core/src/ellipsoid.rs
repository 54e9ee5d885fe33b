//! Irrational-ellipsoid-like spectra in ℝ^{2n} and the pinching certificate
//! for hypersurfaces squeezed between two ellipsoids.
//!
//! The ellipsoid `Σ_i a_i^{-1}(x_i² + y_i²) = R²` has one simple orbit in each
//! coordinate plane, of action `π a_k R²`. Its index is the standard
//! linear-flow value `n − 1 + 2 Σ_j ⌊N a_k / a_j⌋`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::brieskorn::common_period;
use crate::error::{Error, Result};
use crate::exact_algebra::{serde_rational, BigRational};
use crate::orbit_model::{Action, ActionUnit, OrbitSpectrum, ReebOrbitRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipsoidParams {
    a: Vec<BigRational>,
    r_squared: BigRational,
}

fn check_axes(a: &[BigRational]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::InvalidParams("at least one axis is required".into()));
    }
    if !a[0].is_positive() {
        return Err(Error::InvalidParams(format!("a_1 = {} must be positive", a[0])));
    }
    if let Some(w) = a.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(format!(
            "axes must be strictly increasing, got {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl EllipsoidParams {
    pub fn new(a: Vec<BigRational>, r_squared: BigRational) -> Result<Self> {
        check_axes(&a)?;
        if !r_squared.is_positive() {
            return Err(Error::InvalidParams(format!("R^2 = {r_squared} must be positive")));
        }
        Ok(EllipsoidParams { a, r_squared })
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn r_squared(&self) -> &BigRational {
        &self.r_squared
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Action of the simple orbit in plane `k` (1-based).
    pub fn simple_action(&self, k: usize) -> Action {
        Action::pi(&self.a[k - 1] * &self.r_squared)
    }
}

fn ratios(params: &EllipsoidParams, k: usize, iterate: u64) -> impl Iterator<Item = (usize, BigRational)> + '_ {
    let scaled = &params.a[k - 1] * BigRational::from_integer(iterate.into());
    params
        .a
        .iter()
        .enumerate()
        .map(move |(j, aj)| (j + 1, &scaled / aj))
}

/// `n − 1 + 2 Σ_j ⌊N a_k / a_j⌋` for the `N`-th iterate of the orbit in plane `k`.
pub fn cz_ellipsoid(params: &EllipsoidParams, k: usize, iterate: u64) -> Result<i64> {
    if k == 0 || k > params.n() {
        return Err(Error::InvalidParams(format!("k = {k} outside 1..={}", params.n())));
    }
    if iterate == 0 {
        return Err(Error::InvalidParams("iterate must be positive".into()));
    }
    let mut floors = BigInt::from(0);
    for (j, ratio) in ratios(params, k, iterate) {
        if j != k && ratio.is_integer() {
            return Err(Error::ResonantParameter(format!(
                "N a_{k} / a_{j} = {ratio} is an integer at N = {iterate}"
            )));
        }
        floors += ratio.floor().to_integer();
    }
    let floors = i64::try_from(floors).expect("index fits in i64");
    Ok(params.n() as i64 - 1 + 2 * floors)
}

fn cz_lower_bound(params: &EllipsoidParams, k: usize, iterate: u64) -> i64 {
    let floors: BigInt = ratios(params, k, iterate)
        .map(|(j, r)| {
            if j == k {
                r.to_integer()
            } else {
                r.ceil().to_integer() - BigInt::one()
            }
        })
        .sum();
    params.n() as i64 - 1 + 2 * i64::try_from(floors).expect("index fits in i64")
}

/// First reason the ellipsoid spectrum below `cutoff` might be degenerate or incomplete.
pub fn genericity_obstruction(params: &EllipsoidParams, action_cutoff: &Action) -> Option<String> {
    if action_cutoff.unit != ActionUnit::PiMultiple {
        return Some(format!("cutoff {action_cutoff} is not a multiple of π"));
    }
    let cutoff = &action_cutoff.value;
    for (i, ai) in params.a.iter().enumerate() {
        for (j, aj) in params.a.iter().enumerate().skip(i + 1) {
            let t = common_period(ai, aj) * &params.r_squared;
            if &t < cutoff {
                return Some(format!(
                    "planes {} and {} share the period {t}π below the cutoff {action_cutoff}",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    for k in 1..=params.n() {
        for iterate in 1..=params.simple_action(k).iterates_below(cutoff) {
            if let Err(e) = cz_ellipsoid(params, k, iterate) {
                return Some(e.to_string());
            }
        }
    }
    None
}

pub fn check_genericity(params: &EllipsoidParams, action_cutoff: &Action) -> bool {
    genericity_obstruction(params, action_cutoff).is_none()
}

/// Records `(k, N)` with `N π a_k R² < cutoff`. All ellipsoid orbits are good.
pub fn enumerate_orbits(params: &EllipsoidParams, action_cutoff: &Action) -> Result<OrbitSpectrum> {
    if let Some(reason) = genericity_obstruction(params, action_cutoff) {
        return Err(Error::GenericityFailed(reason));
    }
    let mut records = Vec::new();
    let mut floor: Option<i64> = None;
    for k in 1..=params.n() {
        let simple = params.simple_action(k);
        let count = simple.iterates_below(&action_cutoff.value);
        for iterate in 1..=count {
            let mu = cz_ellipsoid(params, k, iterate)?;
            records.push(ReebOrbitRecord::new(
                format!("e{k}"),
                iterate,
                simple.times(iterate),
                Some(mu),
                true,
            ));
        }
        let next = cz_lower_bound(params, k, count + 1);
        floor = Some(floor.map_or(next, |f| f.min(next)));
    }
    let a_text: Vec<String> = params.a.iter().map(|x| x.to_string()).collect();
    let parameters = BTreeMap::from([
        ("family".to_string(), "ellipsoid".to_string()),
        ("a".to_string(), a_text.join(",")),
        ("r_squared".to_string(), params.r_squared.to_string()),
    ]);
    Ok(
        OrbitSpectrum::new(format!("ellipsoid in R^{}", 2 * params.n()), records, action_cutoff.clone(), true)?
            .with_parameters(parameters)
            .with_index_floor(floor),
    )
}

/// One exact inequality `lhs < rhs` (or `≤`) with both sides in units of π.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedInequality {
    pub label: String,
    #[serde(with = "serde_rational")]
    pub lhs: BigRational,
    pub relation: String,
    #[serde(with = "serde_rational")]
    pub rhs: BigRational,
    pub holds: bool,
}

impl CheckedInequality {
    fn strict(label: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs < rhs;
        CheckedInequality {
            label: label.into(),
            lhs,
            relation: "<".into(),
            rhs,
            holds,
        }
    }

    fn weak(label: impl Into<String>, lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs.cmp(&rhs) != Ordering::Greater;
        CheckedInequality {
            label: label.into(),
            lhs,
            relation: "<=".into(),
            rhs,
            holds,
        }
    }
}

/// Arithmetic content of the pinching argument for a hypersurface between
/// the ellipsoids of radii `R₁ ≤ R₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EkelandLasryCertificate {
    pub n: usize,
    pub pinching_ok: bool,
    /// Open window `(π a_n R₂², 2π a₁ R₁²)` for the truncation level.
    pub window_lo: Action,
    pub window_hi: Action,
    pub chosen_t: Action,
    pub generator_actions: Vec<Action>,
    pub min_period_bound: Action,
    pub distinct_count: usize,
    pub checks: Vec<CheckedInequality>,
    /// Caller-asserted: no tangent hyperplane of Σ meets the open ball of radius R₁.
    pub tangency_asserted: bool,
    /// Caller-asserted: every periodic Reeb orbit of Σ is nondegenerate.
    pub nondegeneracy_asserted: bool,
}

impl EkelandLasryCertificate {
    pub fn with_assertions(mut self, tangency: bool, nondegeneracy: bool) -> Self {
        self.tangency_asserted = tangency;
        self.nondegeneracy_asserted = nondegeneracy;
        self
    }

    /// All arithmetic checks hold and both geometric hypotheses are asserted.
    pub fn hypotheses_complete(&self) -> bool {
        self.checks.iter().all(|c| c.holds) && self.tangency_asserted && self.nondegeneracy_asserted
    }
}

/// Builds the certificate, failing on the first violated hypothesis.
pub fn ekeland_lasry_certificate(
    a: &[BigRational],
    r1_squared: &BigRational,
    r2_squared: &BigRational,
) -> Result<EkelandLasryCertificate> {
    check_axes(a)?;
    if !r1_squared.is_positive() || r2_squared < r1_squared {
        return Err(Error::InvalidParams(format!(
            "need 0 < R1^2 <= R2^2, got {r1_squared} and {r2_squared}"
        )));
    }
    let two = BigRational::from_integer(2.into());
    let n = a.len();
    let a1 = &a[0];
    let an = &a[n - 1];

    let pinching = CheckedInequality::strict("R2^2 < 2 R1^2", r2_squared.clone(), &two * r1_squared);
    if !pinching.holds {
        return Err(Error::PinchingViolated {
            r1_squared: r1_squared.to_string(),
            r2_squared: r2_squared.to_string(),
        });
    }
    let lo = an * r2_squared;
    let hi = &two * a1 * r1_squared;
    let window = CheckedInequality::strict("a_n R2^2 < 2 a_1 R1^2", lo.clone(), hi.clone());
    if !window.holds {
        return Err(Error::WindowEmpty {
            lower: lo.to_string(),
            upper: hi.to_string(),
        });
    }
    let t = (&lo + &hi) / &two;
    let generators: Vec<BigRational> = a.iter().map(|ak| ak * r2_squared).collect();

    let mut checks = vec![pinching, window];
    for (k, g) in generators.iter().enumerate() {
        checks.push(CheckedInequality::strict(
            format!("action(gamma_{}) < T", k + 1),
            g.clone(),
            t.clone(),
        ));
        checks.push(CheckedInequality::strict(
            format!("T < 2 action(gamma_{})", k + 1),
            t.clone(),
            &two * g,
        ));
        checks.push(CheckedInequality::weak(
            format!("R1^2 <= action(gamma_{})", k + 1),
            r1_squared.clone(),
            g.clone(),
        ));
        checks.push(CheckedInequality::strict(
            format!("action(gamma_{}) < 2 R1^2", k + 1),
            g.clone(),
            &two * r1_squared,
        ));
    }
    if let Some(c) = checks.iter().find(|c| !c.holds) {
        return Err(Error::DistinctnessUnproven {
            failed: format!("{}: {} {} {}", c.label, c.lhs, c.relation, c.rhs),
        });
    }

    Ok(EkelandLasryCertificate {
        n,
        pinching_ok: true,
        window_lo: Action::pi(lo),
        window_hi: Action::pi(hi),
        chosen_t: Action::pi(t),
        generator_actions: generators.into_iter().map(Action::pi).collect(),
        min_period_bound: Action::pi(r1_squared.clone()),
        distinct_count: n,
        checks,
        tangency_asserted: false,
        nondegeneracy_asserted: false,
    })
}

impl EkelandLasryCertificate {
    pub fn window_is_nonempty(&self) -> bool {
        self.window_lo.value < self.window_hi.value
    }

    /// Lower bound on the number of geometrically distinct orbits.
    pub fn orbit_lower_bound(&self) -> usize {
        self.distinct_count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{int, rat};

    fn ell(a: &[(i64, i64)], r2: BigRational) -> EllipsoidParams {
        EllipsoidParams::new(a.iter().map(|&(p, q)| rat(p, q)).collect(), r2).unwrap()
    }

    #[test]
    fn index_spot_values() {
        let e = ell(&[(1, 1), (101, 100)], int(1));
        assert_eq!(cz_ellipsoid(&e, 1, 1).unwrap(), 3);
        assert_eq!(cz_ellipsoid(&e, 2, 1).unwrap(), 5);
        let resonant = ell(&[(1, 1), (2, 1)], int(1));
        assert!(matches!(
            cz_ellipsoid(&resonant, 2, 1),
            Err(Error::ResonantParameter(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let e = ell(&[(1, 1), (101, 100)], int(1));
        let s = enumerate_orbits(&e, &Action::pi(int(2))).unwrap();
        let actions: Vec<_> = s.records().iter().map(|r| (r.base_id.clone(), r.action.value.clone())).collect();
        assert_eq!(actions, [("e1".to_string(), int(1)), ("e2".to_string(), rat(101, 100))]);
        assert_eq!(enumerate_orbits(&e, &Action::pi(rat(101, 100))).unwrap().len(), 1);
        assert!(enumerate_orbits(&e, &Action::pi(int(1))).unwrap().is_empty());
        assert!(enumerate_orbits(&e, &Action::pi(rat(1, 2))).unwrap().is_empty());
    }

    #[test]
    fn axes_must_increase() {
        assert!(EllipsoidParams::new(vec![int(2), int(1)], int(1)).is_err());
        assert!(EllipsoidParams::new(vec![int(0), int(1)], int(1)).is_err());
        assert!(EllipsoidParams::new(vec![int(1)], int(0)).is_err());
    }

    #[test]
    fn certificate_desk_instance() {
        let a = [int(1), rat(101, 100), rat(102, 100)];
        let c = ekeland_lasry_certificate(&a, &int(1), &rat(169, 100)).unwrap();
        assert_eq!(c.window_lo, Action::pi(rat(17238, 10000)));
        assert_eq!(c.window_hi, Action::pi(int(2)));
        assert_eq!(
            c.generator_actions,
            [rat(169, 100), rat(17069, 10000), rat(17238, 10000)].map(Action::pi)
        );
        assert_eq!(c.distinct_count, 3);
        assert_eq!(c.min_period_bound, Action::pi(int(1)));
        assert!(c.checks.iter().all(|k| k.holds));
        assert!(!c.hypotheses_complete());
        assert!(c.with_assertions(true, true).hypotheses_complete());
    }

    #[test]
    fn certificate_failures() {
        let a = [int(1), rat(101, 100)];
        assert!(matches!(
            ekeland_lasry_certificate(&a, &int(1), &int(2)),
            Err(Error::PinchingViolated { .. })
        ));
        let wide = [int(1), rat(3, 2)];
        assert!(matches!(
            ekeland_lasry_certificate(&wide, &int(1), &rat(3, 2)),
            Err(Error::WindowEmpty { .. })
        ));
        assert!(ekeland_lasry_certificate(&a, &int(2), &int(1)).is_err());
    }

    #[test]
    fn sphere_like_pinch() {
        let a = [int(1), rat(5, 4), rat(3, 2)];
        let c = ekeland_lasry_certificate(&a, &int(1), &int(1)).unwrap();
        assert_eq!(c.window_lo, Action::pi(rat(3, 2)));
        assert_eq!(c.window_hi, Action::pi(int(2)));
        assert_eq!(c.distinct_count, 3);
    }
}
