//! Python bindings. Reports come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use ramsey_monoid::certificate::{self, Certificate, Suite, SuiteParams};
use ramsey_monoid::cli::analyze;
use ramsey_monoid::coloring::reduced_string as rs;
use ramsey_monoid::order::decide_ramsey;
use ramsey_monoid::source::load_monoid;
use ramsey_monoid::Monoid as CoreMonoid;

fn err(e: ramsey_monoid::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A finite monoid given by its multiplication table.
#[pyclass(name = "Monoid", module = "ramsey_monoid", frozen)]
struct PyMonoid {
    inner: Arc<CoreMonoid>,
}

#[pymethods]
impl PyMonoid {
    /// `g:<n>`, `i:<n>`, `j:<A>:<B>`, `tower:<k>` or a JSON file path.
    #[staticmethod]
    fn from_spec(spec: &str) -> PyResult<Self> {
        Ok(PyMonoid {
            inner: Arc::new(load_monoid(spec).map_err(err)?),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMonoid {
            inner: Arc::new(CoreMonoid::from_json_str(text).map_err(err)?),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.inner.identity()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.elements().map(|a| self.inner.label(a)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!("Monoid({:?}, size={})", self.inner.name(), self.inner.size())
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        self.inner.multiply(a, b).map_err(err)
    }

    /// Element index of a label.
    fn find(&self, label: &str) -> Option<usize> {
        self.inner.find(label)
    }

    fn r_classes(&self) -> Vec<Vec<usize>> {
        self.inner.r_classes()
    }

    fn is_r_trivial(&self) -> bool {
        self.inner.is_r_trivial()
    }

    fn is_almost_r_trivial(&self) -> bool {
        self.inner.is_almost_r_trivial()
    }

    /// `{"verdict": ...}` with the witness pair when not Ramsey.
    fn ramsey_verdict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &decide_ramsey(&self.inner))
    }

    /// The full analysis report as a dict.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &analyze(&self.inner, false))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }
}

fn suite_of(name: &str) -> PyResult<Suite> {
    <Suite as clap::ValueEnum>::from_str(name, false).map_err(|_| PyValueError::new_err(format!("unknown suite {name:?}")))
}

/// Runs a verifier suite; keyword arguments are the CLI flags with
/// underscores (`max_slot=5`, `close_f=True`). Returns the certificate.
#[pyfunction]
#[pyo3(signature = (suite, **params))]
fn verify<'py>(py: Python<'py>, suite: &str, params: Option<&Bound<'py, pyo3::types::PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let suite = suite_of(suite)?;
    let params: SuiteParams = match params {
        Some(d) => {
            let text: String = py.import("json")?.call_method1("dumps", (d,))?.extract()?;
            serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("bad parameters: {e}")))?
        }
        None => SuiteParams::default(),
    };
    let cert = py.detach(|| certificate::run_suite(suite, &params)).map_err(err)?;
    to_py(py, &cert)
}

/// Re-validates a certificate given as a dict or a JSON string.
#[pyfunction]
fn replay<'py>(py: Python<'py>, cert: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let text: String = match cert.extract::<String>() {
        Ok(s) => s,
        Err(_) => py.import("json")?.call_method1("dumps", (cert,))?.extract()?,
    };
    let cert: Certificate = serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("not a certificate: {e}")))?;
    let outcome = py.detach(|| certificate::replay(&cert)).map_err(err)?;
    to_py(py, &outcome)
}

#[pyfunction]
fn reduced_string(cs: Vec<usize>, alphabet: Vec<usize>) -> Vec<usize> {
    rs(&cs, &alphabet)
}

#[pymodule]
#[pyo3(name = "ramsey_monoid")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMonoid>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_string, m)?)?;
    Ok(())
}
