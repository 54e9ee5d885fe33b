//! Reeb orbits of the perturbed contact form on `Σ(p, 2, …, 2) ⊂ ℂ^{n+1}`, `n = 2m + 1`.
//!
//! With `f(w) = |w|² + Σ_j ε_j (|w_{2j}|² − |w_{2j+1}|²)` the Reeb flow of `fα`
//! rotates the coordinates with frequencies
//! `(4/p, 2, 2(1+ε_1), 2(1−ε_1), …, 2(1+ε_m), 2(1−ε_m))`. For generic `ε` the
//! only periodic orbits are
//!
//! * `γ₀` in the `(w_0, w_1)` plane, period `pπ`;
//! * `γ_j^±` in the `w_{2j}` (resp. `w_{2j+1}`) axis, period `π/(1 ± ε_j)`;
//!
//! and their iterates. Parameters here are rational, so genericity only holds
//! below a finite action; [`check_genericity`] certifies it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exact_algebra::BigRational;
use crate::orbit_model::{
    classify_orbit, Action, ActionUnit, OrbitClass, OrbitSpectrum, ReebOrbitRecord,
};

pub use crate::orbit_model::{parity_report, Parity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrieskornParams {
    p: u32,
    m: usize,
    eps: Vec<BigRational>,
}

impl BrieskornParams {
    /// `p` must be odd and at least 3; `eps` must hold `m ≥ 1` values in `(0, 1)`.
    ///
    /// Repeated `eps` values are accepted here and rejected by [`check_genericity`].
    pub fn new(p: u32, m: usize, eps: Vec<BigRational>) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("p = {p} must be at least 2")));
        }
        if p.is_multiple_of(2) {
            // for even p the (w0, w1) circle has period pπ/2 and splits in two
            return Err(Error::InvalidParams(format!("p = {p} must be odd")));
        }
        if m == 0 {
            return Err(Error::InvalidParams("m must be positive".into()));
        }
        if eps.len() != m {
            return Err(Error::InvalidParams(format!(
                "expected {m} values of eps, got {}",
                eps.len()
            )));
        }
        if let Some(e) = eps.iter().find(|e| !e.is_positive() || **e >= BigRational::one()) {
            return Err(Error::InvalidParams(format!("eps = {e} is not in (0, 1)")));
        }
        Ok(BrieskornParams { p, m, eps })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Complex dimension parameter; the sphere is `S^{2n-1} = S^{4m+1}`.
    pub fn n(&self) -> usize {
        2 * self.m + 1
    }

    pub fn eps(&self) -> &[BigRational] {
        &self.eps
    }

    /// Whether `p ≡ ±1 (mod 8)`, the condition for `Σ(p, 2, …, 2)` to be a sphere.
    pub fn is_sphere(&self) -> bool {
        matches!(self.p % 8, 1 | 7)
    }

    fn shifted(&self, j: usize, sign: Sign) -> BigRational {
        match sign {
            Sign::Plus => BigRational::one() + &self.eps[j - 1],
            Sign::Minus => BigRational::one() - &self.eps[j - 1],
        }
    }

    /// Period of `γ_j^±` as a multiple of π.
    pub fn period_pm(&self, j: usize, sign: Sign) -> BigRational {
        self.shifted(j, sign).recip()
    }

    pub fn period_gamma0(&self) -> BigRational {
        BigRational::from_integer(self.p.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `μ_CZ(γ₀^N) = 2Np(n−2) + 4N`.
pub fn cz_gamma0(p: i64, n: i64, iterate: u64) -> i64 {
    let big_n = iterate as i64;
    2 * big_n * p * (n - 2) + 4 * big_n
}

fn floor_arguments(params: &BrieskornParams, j: usize, sign: Sign, iterate: u64) -> Vec<BigRational> {
    let d = params.shifted(j, sign);
    let big_n = BigRational::from_integer(iterate.into());
    let p = BigRational::from_integer(params.p.into());
    let two = BigRational::from_integer(2.into());
    let mut args = vec![&two * &big_n / (&p * &d), &big_n / &d];
    for (k, e) in params.eps.iter().enumerate() {
        if k + 1 == j {
            continue;
        }
        args.push(&big_n * (BigRational::one() + e) / &d);
        args.push(&big_n * (BigRational::one() - e) / &d);
    }
    args
}

fn assemble_index(floors: impl Iterator<Item = BigInt>, n: usize) -> i64 {
    let total: BigInt = floors.map(|f| f * 2).sum();
    i64::try_from(total).expect("index fits in i64") + n as i64 - 1
}

/// `μ_CZ((γ_j^±)^N)` from the floor-sum formula, evaluated exactly.
///
/// Fails with `ResonantParameter` when a floor argument is an integer: the
/// orbit is then degenerate and the formula does not determine an index.
pub fn cz_gamma_pm(params: &BrieskornParams, j: usize, sign: Sign, iterate: u64) -> Result<i64> {
    if j == 0 || j > params.m {
        return Err(Error::InvalidParams(format!("j = {j} outside 1..={}", params.m)));
    }
    if iterate == 0 {
        return Err(Error::InvalidParams("iterate must be positive".into()));
    }
    let args = floor_arguments(params, j, sign, iterate);
    if let Some(a) = args.iter().find(|a| a.is_integer()) {
        return Err(Error::ResonantParameter(format!(
            "floor argument {a} is an integer for gamma_{j}^{} at N = {iterate}",
            sign.symbol()
        )));
    }
    Ok(assemble_index(args.iter().map(|a| a.floor().to_integer()), params.n()))
}

/// Lower bound for the index of a possibly degenerate iterate: integral floor
/// arguments are rounded down as if perturbed to the left.
fn cz_gamma_pm_lower_bound(params: &BrieskornParams, j: usize, sign: Sign, iterate: u64) -> i64 {
    let args = floor_arguments(params, j, sign, iterate);
    assemble_index(
        args.iter().map(|a| a.ceil().to_integer() - BigInt::one()),
        params.n(),
    )
}

/// Smallest `t > 0` that is an integer multiple of both `a` and `b` (positive rationals).
pub fn common_period(a: &BigRational, b: &BigRational) -> BigRational {
    BigRational::new(
        a.numer().lcm(b.numer()),
        a.denom().gcd(b.denom()),
    )
}

/// Coordinate rotation periods (multiples of π) labelled for diagnostics.
fn coordinate_periods(params: &BrieskornParams) -> Vec<(String, BigRational)> {
    let mut out = vec![
        ("w0".to_string(), BigRational::new(params.p.into(), 2.into())),
        ("w1".to_string(), BigRational::one()),
    ];
    for j in 1..=params.m {
        out.push((format!("w{}", 2 * j), params.period_pm(j, Sign::Plus)));
        out.push((format!("w{}", 2 * j + 1), params.period_pm(j, Sign::Minus)));
    }
    out
}

/// Like [`check_genericity`] but returns the first obstruction found.
pub fn genericity_obstruction(params: &BrieskornParams, action_cutoff: &Action) -> Option<String> {
    if action_cutoff.unit != ActionUnit::PiMultiple {
        return Some(format!("cutoff {action_cutoff} is not a multiple of π"));
    }
    let cutoff = &action_cutoff.value;
    for (i, a) in params.eps.iter().enumerate() {
        if let Some(k) = params.eps[i + 1..].iter().position(|b| b == a) {
            return Some(format!("eps_{} = eps_{} = {a}", i + 1, i + k + 2));
        }
    }
    let periods = coordinate_periods(params);
    for (i, (name_a, a)) in periods.iter().enumerate() {
        for (name_b, b) in &periods[i + 1..] {
            // w0 and w1 rotate together along gamma_0 itself
            if name_a == "w0" && name_b == "w1" {
                continue;
            }
            let t = common_period(a, b);
            if &t < cutoff {
                return Some(format!(
                    "{name_a} and {name_b} share the period {t}π below the cutoff {action_cutoff}"
                ));
            }
        }
    }
    for j in 1..=params.m {
        for sign in [Sign::Plus, Sign::Minus] {
            let simple = Action::pi(params.period_pm(j, sign));
            for iterate in 1..=simple.iterates_below(cutoff) {
                if let Err(e) = cz_gamma_pm(params, j, sign, iterate) {
                    return Some(e.to_string());
                }
            }
        }
    }
    None
}

/// Finite non-resonance certificate below `action_cutoff`.
///
/// True iff the `eps` are pairwise distinct, no two coordinate circles (other
/// than the `(w_0, w_1)` pair that carries `γ₀`) share a period below the
/// cutoff, and every index needed below the cutoff is non-resonant.
pub fn check_genericity(params: &BrieskornParams, action_cutoff: &Action) -> bool {
    genericity_obstruction(params, action_cutoff).is_none()
}

/// All orbits of action below the cutoff, with indices and good/bad flags.
pub fn enumerate_orbits(params: &BrieskornParams, action_cutoff: &Action) -> Result<OrbitSpectrum> {
    if let Some(reason) = genericity_obstruction(params, action_cutoff) {
        return Err(Error::GenericityFailed(reason));
    }
    let cutoff = &action_cutoff.value;
    let n = params.n();
    let mut records = Vec::new();
    let mut floors = Vec::new();

    let gamma0 = Action::pi(params.period_gamma0());
    let count0 = gamma0.iterates_below(cutoff);
    let cz0 = |iterate| cz_gamma0(params.p.into(), n as i64, iterate);
    for iterate in 1..=count0 {
        let mu = cz0(iterate);
        let good = classify_orbit(cz0(1), mu) == OrbitClass::Good;
        records.push(ReebOrbitRecord::new("gamma0", iterate, gamma0.times(iterate), Some(mu), good));
    }
    floors.push(cz0(count0 + 1));

    for j in 1..=params.m {
        for sign in [Sign::Plus, Sign::Minus] {
            let simple = Action::pi(params.period_pm(j, sign));
            let count = simple.iterates_below(cutoff);
            let base = format!("gamma{j}{}", sign.symbol());
            let mut first = None;
            for iterate in 1..=count {
                let mu = cz_gamma_pm(params, j, sign, iterate)?;
                let mu1 = *first.get_or_insert(mu);
                let good = classify_orbit(mu1, mu) == OrbitClass::Good;
                records.push(ReebOrbitRecord::new(
                    base.clone(),
                    iterate,
                    simple.times(iterate),
                    Some(mu),
                    good,
                ));
            }
            // each floor term is nondecreasing in N, so the first excluded iterate bounds the rest
            floors.push(cz_gamma_pm_lower_bound(params, j, sign, count + 1));
        }
    }

    let eps_text: Vec<String> = params.eps.iter().map(|e| e.to_string()).collect();
    let parameters = BTreeMap::from([
        ("family".to_string(), "brieskorn".to_string()),
        ("p".to_string(), params.p.to_string()),
        ("m".to_string(), params.m.to_string()),
        ("n".to_string(), n.to_string()),
        ("eps".to_string(), eps_text.join(",")),
        ("p_is_pm1_mod_8".to_string(), params.is_sphere().to_string()),
    ]);
    let label = format!("Sigma({},2,...,2) in C^{}", params.p, n + 1);
    Ok(OrbitSpectrum::new(label, records, action_cutoff.clone(), true)?
        .with_parameters(parameters)
        .with_index_floor(floors.into_iter().min()))
}
