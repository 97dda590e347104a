//! Python bindings for `stirling-core`. Exact rationals are returned as
//! `fractions.Fraction`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use stirling::bijection::{decode_ary, encode_ary, verify_codecs, verify_stat_transfer};
use stirling::dist::{
    block_binomial_moment, block_count_pmf, mean_profile, tnormal_covariance, verify_exact_laws, zeta_density,
    zeta_moment, DEFAULT_TERM_CAP,
};
use stirling::harness::{run_and_compare, ExperimentSpec};
use stirling::perm::{block_decomposition, count_flavor, enumerate_flavor, sample_uniform, stat_profile, Flavor};
use stirling::rational::Rational;
use stirling::tree::AryTree;
use stirling::urn::{simulate, urn_a_covariance, UrnSpec};
use stirling::StirlingPerm;

fn err(e: stirling::Error) -> PyErr {
    match e {
        stirling::Error::ResourceLimit { .. } | stirling::Error::NonConvergence { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn flavor(name: &str) -> PyResult<Flavor> {
    match name {
        "kStirling" | "k_stirling" => Ok(Flavor::KStirling),
        "bundled" => Ok(Flavor::Bundled),
        other => Err(PyValueError::new_err(format!("unknown flavor `{other}`"))),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    let (n, d): (&BigInt, &BigInt) = (r.numer(), r.denom());
    cls.call1((n.clone(), d.clone()))
}

fn fractions<'py>(py: Python<'py>, v: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = v.iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn perm(word: Vec<u32>) -> PyResult<StirlingPerm> {
    StirlingPerm::from_word(word).map_err(err)
}

/// Number of permutations of order `n`.
#[pyfunction]
#[pyo3(signature = (n, k, flavor_name = "kStirling"))]
fn count(n: u64, k: u64, flavor_name: &str) -> PyResult<num_bigint::BigUint> {
    Ok(count_flavor(n, k, flavor(flavor_name)?))
}

#[pyfunction]
#[pyo3(signature = (n, k, flavor_name = "kStirling", cap = stirling::perm::DEFAULT_ENUMERATION_CAP))]
fn enumerate(n: usize, k: u32, flavor_name: &str, cap: u64) -> PyResult<Vec<Vec<u32>>> {
    Ok(enumerate_flavor(n, k, flavor(flavor_name)?, cap)
        .map_err(err)?
        .map(StirlingPerm::into_word)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (n, k, seed, flavor_name = "kStirling"))]
fn sample(n: usize, k: u32, seed: u64, flavor_name: &str) -> PyResult<Vec<u32>> {
    Ok(sample_uniform(n, k, flavor(flavor_name)?, seed).map_err(err)?.into_word())
}

#[pyfunction]
fn is_valid(word: Vec<u32>) -> bool {
    StirlingPerm::from_word(word).is_ok()
}

/// Ascent, descent and plateau counts, totals and refined by occurrence.
#[pyfunction]
fn stats<'py>(py: Python<'py>, word: Vec<u32>) -> PyResult<Bound<'py, PyDict>> {
    let s = stat_profile(&perm(word)?);
    let d = PyDict::new(py);
    d.set_item("ascents", s.ascents)?;
    d.set_item("descents", s.descents)?;
    d.set_item("plateaux", s.plateaux)?;
    d.set_item("j_ascents", s.j_ascents)?;
    d.set_item("j_descents", s.j_descents)?;
    d.set_item("j_plateaux", s.j_plateaux)?;
    Ok(d)
}

/// Blocks as `(label, start, end)` with 0-based inclusive positions.
#[pyfunction]
fn blocks(word: Vec<u32>) -> PyResult<Vec<(u32, usize, usize)>> {
    let d = block_decomposition(&perm(word)?);
    Ok(d.blocks.iter().map(|b| (b.label, b.start, b.end)).collect())
}

/// Code of a `(k+1)`-ary increasing tree given by 1-based parent and slot
/// lists (entry 0 is the root and is ignored).
#[pyfunction]
fn encode_ary_tree(arity: usize, parent: Vec<u32>, slot: Vec<u32>) -> PyResult<Vec<u32>> {
    let t = AryTree::new(arity, parent, slot).map_err(err)?;
    Ok(encode_ary(&t).map_err(err)?.into_word())
}

/// Inverse of `encode_ary_tree`: returns `(parent, slot)`.
#[pyfunction]
fn decode_ary_tree(word: Vec<u32>, k: u32) -> PyResult<(Vec<u32>, Vec<u32>)> {
    let t = decode_ary(&perm(word)?, k).map_err(err)?;
    Ok((t.parents().to_vec(), t.slots().to_vec()))
}

#[pyfunction]
fn block_pmf<'py>(py: Python<'py>, n: u64, k: u64) -> PyResult<Bound<'py, PyList>> {
    fractions(py, &block_count_pmf(n, k).map_err(err)?.probabilities)
}

#[pyfunction]
fn binomial_moment<'py>(py: Python<'py>, n: u64, k: u64, r: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &block_binomial_moment(n, k, r).map_err(err)?)
}

#[pyfunction]
fn means<'py>(py: Python<'py>, n: u64, k: u64) -> PyResult<Bound<'py, PyDict>> {
    let m = mean_profile(n, k).map_err(err)?;
    let d = PyDict::new(py);
    for (name, r) in [
        ("exterior", &m.exterior),
        ("interior", &m.interior),
        ("j_ascents", &m.j_ascents),
        ("j_descents", &m.j_descents),
        ("j_plateaux", &m.j_plateaux),
        ("ascents", &m.ascents),
        ("descents", &m.descents),
        ("plateaux", &m.plateaux),
    ] {
        d.set_item(name, fraction(py, r)?)?;
    }
    Ok(d)
}

/// `"tnormal"` (needs `k`) or `"urnA"` (needs `q`).
#[pyfunction]
#[pyo3(signature = (which, k = 2, q = 3))]
fn covariance<'py>(py: Python<'py>, which: &str, k: u64, q: usize) -> PyResult<Bound<'py, PyList>> {
    let m = match which {
        "tnormal" => tnormal_covariance(k).map_err(err)?,
        "urnA" => urn_a_covariance(q).map_err(err)?.matrix,
        other => return Err(PyValueError::new_err(format!("unknown covariance `{other}`"))),
    };
    let rows = m.iter().map(|r| fractions(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

#[pyfunction]
fn limit_moment(k: u32, r: f64) -> PyResult<f64> {
    zeta_moment(k, r).map_err(err)
}

/// `(value, error_estimate)` of the limit density.
#[pyfunction]
#[pyo3(signature = (k, x, term_cap = DEFAULT_TERM_CAP))]
fn limit_density(k: u32, x: f64, term_cap: usize) -> PyResult<(f64, f64)> {
    let d = zeta_density(k, x, term_cap).map_err(err)?;
    Ok((d.value, d.error_estimate))
}

/// Final counts of the symmetric urn with `q` colours after `steps` draws.
#[pyfunction]
fn urn_a(q: usize, steps: u64, seed: u64) -> PyResult<Vec<u64>> {
    let spec = UrnSpec::symmetric_a(q).map_err(err)?;
    Ok(simulate(&spec, steps, seed).map_err(err)?.counts)
}

/// Runs every exhaustive suite up to `max_n`; returns whether all passed.
#[pyfunction]
fn verify(max_n: usize, k: u32) -> PyResult<bool> {
    let cap = stirling::perm::DEFAULT_ENUMERATION_CAP;
    let mut rep = verify_codecs(max_n, k, cap).map_err(err)?;
    rep.merge(verify_stat_transfer(max_n, k, cap).map_err(err)?);
    rep.merge(verify_exact_laws(max_n, k, cap).map_err(err)?);
    Ok(rep.passed())
}

/// Runs a JSON experiment spec and returns the comparison report as JSON.
#[pyfunction]
#[pyo3(signature = (spec_json, threads = None))]
fn experiment(py: Python<'_>, spec_json: &str, threads: Option<usize>) -> PyResult<String> {
    let spec: ExperimentSpec = serde_json::from_str(spec_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (_, report) = py.detach(|| run_and_compare(&spec, threads)).map_err(err)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn stirling_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(is_valid, m)?)?;
    m.add_function(wrap_pyfunction!(stats, m)?)?;
    m.add_function(wrap_pyfunction!(blocks, m)?)?;
    m.add_function(wrap_pyfunction!(encode_ary_tree, m)?)?;
    m.add_function(wrap_pyfunction!(decode_ary_tree, m)?)?;
    m.add_function(wrap_pyfunction!(block_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_moment, m)?)?;
    m.add_function(wrap_pyfunction!(means, m)?)?;
    m.add_function(wrap_pyfunction!(covariance, m)?)?;
    m.add_function(wrap_pyfunction!(limit_moment, m)?)?;
    m.add_function(wrap_pyfunction!(limit_density, m)?)?;
    m.add_function(wrap_pyfunction!(urn_a, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    Ok(())
}
