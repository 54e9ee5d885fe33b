//! Python bindings. Rationals cross the boundary as strings (`"101/100"`,
//! `"1.01"`, `"3"`); structured reports cross as JSON text.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use shplus_core::brieskorn::{self, Sign};
use shplus_core::cli::{canonical_json, parse_rational, parse_rational_list};
use shplus_core::ellipsoid;
use shplus_core::exact_algebra::{self as algebra, BigRational, RationalMatrix};
use shplus_core::invariants::{self, InvariantReport as CoreReport};
use shplus_core::orbit_model::{self, Action, Convention};
use shplus_core::tower_complex;
use shplus_core::{line_bundle, Error};

create_exception!(shplus, ShplusError, PyValueError, "Computation refused or failed.");
create_exception!(shplus, HypothesisError, ShplusError, "A theorem hypothesis does not hold.");

fn to_py(e: Error) -> PyErr {
    let message = format!("{}: {e}", e.kind());
    if e.is_hypothesis_failure() {
        HypothesisError::new_err(message)
    } else {
        ShplusError::new_err(message)
    }
}

fn q(text: &str) -> PyResult<BigRational> {
    parse_rational(text).map_err(to_py)
}

fn q_list(items: &[String]) -> PyResult<Vec<BigRational>> {
    items.iter().map(|s| q(s)).collect()
}

fn convention(name: &str) -> PyResult<Convention> {
    match name {
        "minus_cz" => Ok(Convention::MinusCz),
        "plus_cz" => Ok(Convention::PlusCz),
        other => Err(ShplusError::new_err(format!("unknown convention {other:?}"))),
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    canonical_json(&serde_json::to_value(x).expect("report types serialize"))
}

/// Exact rational as `"num/den"` (or `"num"` for integers).
#[pyfunction]
fn normalize_rational(text: &str) -> PyResult<String> {
    Ok(q(text)?.to_string())
}

/// Parses a comma-separated list of rationals.
#[pyfunction]
fn parse_rationals(text: &str) -> PyResult<Vec<String>> {
    Ok(parse_rational_list(text).map_err(to_py)?.iter().map(|x| x.to_string()).collect())
}

#[pyfunction]
fn matrix_rank(rows: Vec<Vec<String>>) -> PyResult<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let entries = rows.iter().map(|r| q_list(r)).collect::<PyResult<Vec<_>>>()?;
    let m = RationalMatrix::from_rows(entries, cols).map_err(to_py)?;
    Ok(algebra::matrix_rank(&m))
}

#[pyfunction]
fn is_lacunary(indices: Vec<i64>) -> bool {
    orbit_model::is_lacunary(indices)
}

/// `"good"` or `"bad"`.
#[pyfunction]
fn classify_orbit(cz_simple: i64, cz_iterate: i64) -> &'static str {
    match orbit_model::classify_orbit(cz_simple, cz_iterate) {
        orbit_model::OrbitClass::Good => "good",
        orbit_model::OrbitClass::Bad => "bad",
    }
}

#[pyfunction]
#[pyo3(signature = (mu, k, good, truncation))]
fn tower_homology(mu: i64, k: u64, good: bool, truncation: u32) -> PyResult<BTreeMap<i64, usize>> {
    let t = tower_complex::build_tower(mu, k, good, truncation).map_err(to_py)?;
    tower_complex::tower_homology(&t).map_err(to_py)
}

#[pyfunction]
fn limit_contribution(mu: i64, k: u64, good: bool) -> PyResult<BTreeMap<i64, usize>> {
    tower_complex::limit_contribution(mu, k, good).map_err(to_py)
}

#[pyfunction]
fn cz_gamma0(p: i64, n: i64, iterate: u64) -> i64 {
    brieskorn::cz_gamma0(p, n, iterate)
}

#[pyfunction]
#[pyo3(signature = (p, eps, j, sign, iterate))]
fn cz_gamma_pm(p: u32, eps: Vec<String>, j: usize, sign: &str, iterate: u64) -> PyResult<i64> {
    let params = brieskorn::BrieskornParams::new(p, eps.len(), q_list(&eps)?).map_err(to_py)?;
    let sign = match sign {
        "+" => Sign::Plus,
        "-" => Sign::Minus,
        other => return Err(ShplusError::new_err(format!("sign must be '+' or '-', got {other:?}"))),
    };
    brieskorn::cz_gamma_pm(&params, j, sign, iterate).map_err(to_py)
}

#[pyfunction]
fn cz_ellipsoid(a: Vec<String>, k: usize, iterate: u64) -> PyResult<i64> {
    let params = ellipsoid::EllipsoidParams::new(q_list(&a)?, BigRational::from_integer(1.into())).map_err(to_py)?;
    ellipsoid::cz_ellipsoid(&params, k, iterate).map_err(to_py)
}

/// Windowed invariant of a lacunary spectrum.
#[pyclass(frozen, module = "shplus")]
struct InvariantReport {
    inner: CoreReport,
}

#[pymethods]
impl InvariantReport {
    #[getter]
    fn manifold_label(&self) -> String {
        self.inner.manifold_label.clone()
    }

    #[getter]
    fn ranks(&self) -> BTreeMap<i64, u64> {
        self.inner.module.ranks().clone()
    }

    #[getter]
    fn degree_window(&self) -> (i64, i64) {
        let w = self.inner.degree_window;
        (w.lo, w.hi)
    }

    #[getter]
    fn parity(&self) -> String {
        format!("{:?}", self.inner.parity)
    }

    #[getter]
    fn total_rank(&self) -> u64 {
        self.inner.module.total_rank()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    fn rank(&self, degree: i64) -> u64 {
        self.inner.module.rank(degree)
    }

    fn to_json(&self) -> String {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "InvariantReport({:?}, window={}, total_rank={})",
            self.inner.manifold_label,
            self.inner.degree_window,
            self.inner.module.total_rank()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (p, eps, cutoff, convention = "minus_cz"))]
fn brieskorn_invariant(p: u32, eps: Vec<String>, cutoff: &str, convention: &str) -> PyResult<InvariantReport> {
    let conv = self::convention(convention)?;
    let params = brieskorn::BrieskornParams::new(p, eps.len(), q_list(&eps)?).map_err(to_py)?;
    let spectrum = brieskorn::enumerate_orbits(&params, &Action::pi(q(cutoff)?)).map_err(to_py)?;
    let inner = invariants::assemble_invariant(&spectrum, conv).map_err(to_py)?;
    Ok(InvariantReport { inner })
}

#[pyfunction]
#[pyo3(signature = (a, cutoff, r_squared = "1", convention = "minus_cz"))]
fn ellipsoid_invariant(a: Vec<String>, cutoff: &str, r_squared: &str, convention: &str) -> PyResult<InvariantReport> {
    let conv = self::convention(convention)?;
    let params = ellipsoid::EllipsoidParams::new(q_list(&a)?, q(r_squared)?).map_err(to_py)?;
    let spectrum = ellipsoid::enumerate_orbits(&params, &Action::pi(q(cutoff)?)).map_err(to_py)?;
    let inner = invariants::assemble_invariant(&spectrum, conv).map_err(to_py)?;
    Ok(InvariantReport { inner })
}

/// Orbit list of a Brieskorn spectrum as JSON.
#[pyfunction]
fn brieskorn_spectrum(p: u32, eps: Vec<String>, cutoff: &str) -> PyResult<String> {
    let params = brieskorn::BrieskornParams::new(p, eps.len(), q_list(&eps)?).map_err(to_py)?;
    let spectrum = brieskorn::enumerate_orbits(&params, &Action::pi(q(cutoff)?)).map_err(to_py)?;
    Ok(json(&spectrum))
}

/// Even-shift comparison of two Brieskorn invariants, as JSON.
#[pyfunction]
#[pyo3(signature = (p1, p2, eps, cutoff, max_shift = 40))]
fn distinguish(p1: u32, p2: u32, eps: Vec<String>, cutoff: &str, max_shift: i64) -> PyResult<String> {
    let report = invariants::ustilovsky_report(p1, p2, eps.len(), &q_list(&eps)?, &Action::pi(q(cutoff)?), max_shift)
        .map_err(to_py)?;
    Ok(json(&report))
}

/// Pinching certificate as JSON.
#[pyfunction]
fn ekeland_lasry(a: Vec<String>, r1_squared: &str, r2_squared: &str) -> PyResult<String> {
    let cert = ellipsoid::ekeland_lasry_certificate(&q_list(&a)?, &q(r1_squared)?, &q(r2_squared)?).map_err(to_py)?;
    Ok(json(&cert))
}

/// `(label, betti, morse_indices, orbit_lower_bound)` for a catalog base.
#[pyfunction]
fn catalog(name: &str, n: usize) -> PyResult<(String, Vec<u64>, Vec<i64>, u64)> {
    let base = line_bundle::catalog(name, n).map_err(to_py)?;
    let bound = line_bundle::orbit_lower_bound(&base);
    Ok((base.label, base.betti, base.morse_indices, bound))
}

/// Bundle hypothesis report as JSON.
#[pyfunction]
#[pyo3(signature = (name, n, r1_squared, r2_squared, min_period_ok = true, filling = true))]
fn bundle_hypotheses(
    name: &str,
    n: usize,
    r1_squared: &str,
    r2_squared: &str,
    min_period_ok: bool,
    filling: bool,
) -> PyResult<String> {
    let base = line_bundle::catalog(name, n).map_err(to_py)?;
    let report = line_bundle::check_bundle_hypotheses(&base, &q(r1_squared)?, &q(r2_squared)?, min_period_ok, filling);
    Ok(json(&report))
}

#[pymodule]
fn shplus(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ShplusError", m.py().get_type::<ShplusError>())?;
    m.add("HypothesisError", m.py().get_type::<HypothesisError>())?;
    m.add_class::<InvariantReport>()?;
    m.add_function(wrap_pyfunction!(normalize_rational, m)?)?;
    m.add_function(wrap_pyfunction!(parse_rationals, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_rank, m)?)?;
    m.add_function(wrap_pyfunction!(is_lacunary, m)?)?;
    m.add_function(wrap_pyfunction!(classify_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(tower_homology, m)?)?;
    m.add_function(wrap_pyfunction!(limit_contribution, m)?)?;
    m.add_function(wrap_pyfunction!(cz_gamma0, m)?)?;
    m.add_function(wrap_pyfunction!(cz_gamma_pm, m)?)?;
    m.add_function(wrap_pyfunction!(cz_ellipsoid, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(ellipsoid_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(distinguish, m)?)?;
    m.add_function(wrap_pyfunction!(ekeland_lasry, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(bundle_hypotheses, m)?)?;
    Ok(())
}
