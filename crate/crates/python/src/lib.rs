//! Python module `pydistinctq`. Structured results are returned as JSON
//! strings with the same schema as the command-line reports.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use distinctq::bounds::bound_report as core_bound_report;
use distinctq::conjecture::{filter_order8, survey_order7, verdict as core_verdict, VERDICT_MAX_ORDER};
use distinctq::constructions::certificate_bank;
use distinctq::families::{certify_tree_complement as core_certify, classify_tree as core_classify, q_tree_complement as core_qtc};
use distinctq::graph::Graph;
use distinctq::spectra::{spectrum as core_spectrum, SymmetricMatrix, ToleranceConfig};
use distinctq::strong::{strong_property_check, StrongMode};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn graph(graph6: &str) -> PyResult<Graph> {
    Graph::from_graph6(graph6.trim()).map_err(err)
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<SymmetricMatrix> {
    SymmetricMatrix::from_rows(&rows).map_err(err)
}

fn to_json<T: serde::Serialize>(x: &T) -> PyResult<String> {
    serde_json::to_string(x).map_err(err)
}

/// Lower and upper bounds on q(G) as JSON.
#[pyfunction]
fn bound_report(graph6: &str) -> PyResult<String> {
    to_json(&core_bound_report(&graph(graph6)?))
}

/// Verdict on q(G) + q(G^c) <= |G| + 2 as JSON.
#[pyfunction]
fn verdict(graph6: &str) -> PyResult<String> {
    let g = graph(graph6)?;
    if g.order() > VERDICT_MAX_ORDER {
        return Err(err(format!("verdict supports at most {VERDICT_MAX_ORDER} vertices")));
    }
    to_json(&core_verdict(&g))
}

#[pyfunction]
fn classify_tree(graph6: &str) -> PyResult<String> {
    to_json(&core_classify(&graph(graph6)?).map_err(err)?)
}

#[pyfunction]
fn q_tree_complement(graph6: &str) -> PyResult<usize> {
    Ok(core_qtc(&graph(graph6)?).map_err(err)?.value)
}

#[pyfunction]
fn certify_tree_complement(graph6: &str) -> PyResult<String> {
    to_json(&core_certify(&graph(graph6)?, &ToleranceConfig::default()).map_err(err)?)
}

/// Number of distinct eigenvalues and the sorted eigenvalues.
#[pyfunction]
fn spectrum(rows: Vec<Vec<f64>>) -> PyResult<(usize, Vec<f64>)> {
    let s = core_spectrum(&matrix(rows)?, &ToleranceConfig::default()).map_err(err)?;
    Ok((s.q, s.eigenvalues))
}

/// Whether the SSP (or the SMP with `mode="smp"`) holds, and the nullity.
#[pyfunction]
#[pyo3(signature = (rows, mode = "ssp"))]
fn strong_property(rows: Vec<Vec<f64>>, mode: &str) -> PyResult<(bool, usize)> {
    let mode = match mode {
        "ssp" => StrongMode::Ssp,
        "smp" => StrongMode::Smp,
        other => return Err(err(format!("unknown mode {other:?}"))),
    };
    let r = strong_property_check(&matrix(rows)?, mode, &ToleranceConfig::default()).map_err(err)?;
    Ok((r.holds, r.nullity))
}

#[pyfunction]
fn bank_names() -> Vec<String> {
    certificate_bank().into_iter().map(|c| c.name).collect()
}

/// Verifies every bank entry; returns the names that fail.
#[pyfunction]
fn bank_failures() -> PyResult<Vec<String>> {
    let cfg = ToleranceConfig::default();
    let mut failed = Vec::new();
    for mut c in certificate_bank() {
        if !c.verify(&cfg).map_err(err)?.passed {
            failed.push(c.name);
        }
    }
    Ok(failed)
}

/// The order-7 survey or the order-8 filter as JSON.
#[pyfunction]
fn survey(py: Python<'_>, order: usize) -> PyResult<String> {
    let report = py.detach(|| match order {
        7 => survey_order7().map_err(|e| e.to_string()),
        8 => filter_order8().map_err(|e| e.to_string()),
        _ => Err(format!("order must be 7 or 8, got {order}")),
    });
    to_json(&report.map_err(err)?)
}

#[pymodule]
pub fn pydistinctq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(classify_tree, m)?)?;
    m.add_function(wrap_pyfunction!(q_tree_complement, m)?)?;
    m.add_function(wrap_pyfunction!(certify_tree_complement, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(strong_property, m)?)?;
    m.add_function(wrap_pyfunction!(bank_names, m)?)?;
    m.add_function(wrap_pyfunction!(bank_failures, m)?)?;
    m.add_function(wrap_pyfunction!(survey, m)?)?;
    Ok(())
}
