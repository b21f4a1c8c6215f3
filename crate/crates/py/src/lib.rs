use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use trackcoh::cohomology::Fault;
use trackcoh::jobs::{self, Kind, Outcome};

/// `(exit_code, report_json, summary)`, the same triple the command-line tool produces.
type Triple = (i32, String, String);

fn triple(o: Outcome) -> Triple {
    (o.exit_code, jobs::render(&o.report), o.summary)
}

#[pyfunction]
fn validate(path: PathBuf) -> Triple {
    triple(jobs::validate(&path))
}

#[pyfunction]
#[pyo3(signature = (path, depth = 2, bound = 2))]
fn resolve(path: PathBuf, depth: usize, bound: usize) -> Triple {
    triple(jobs::resolve(&path, depth, bound))
}

#[pyfunction]
#[pyo3(signature = (path, coeffs, kind = "alg", degree = 1, depth = 2, bound = 2))]
fn cohomology(path: PathBuf, coeffs: &str, kind: &str, degree: usize, depth: usize, bound: usize) -> PyResult<Triple> {
    let kind = match kind {
        "alg" => Kind::Alg,
        "aq" => Kind::Aq,
        other => return Err(PyValueError::new_err(format!("kind must be 'alg' or 'aq', got {other:?}"))),
    };
    Ok(triple(jobs::cohomology(&path, coeffs, kind, degree, depth, bound)))
}

#[pyfunction]
#[pyo3(signature = (path, coeffs, depth = 3, bound = 2, fault = None))]
fn les(path: PathBuf, coeffs: &str, depth: usize, bound: usize, fault: Option<&str>) -> PyResult<Triple> {
    let fault = match fault {
        None => Fault::None,
        Some("zero") => Fault::ZeroConnecting,
        Some("double") => Fault::DoubleConnecting,
        Some(other) => return Err(PyValueError::new_err(format!("unknown fault {other:?}"))),
    };
    Ok(triple(jobs::les_report(&path, coeffs, depth, bound, fault)))
}

#[pymodule]
fn trackcoh_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(resolve, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(les, m)?)?;
    Ok(())
}
