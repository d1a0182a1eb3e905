//! Python bindings: chirotopes, oriented matroids, programs, coline
//! fixations, classification and the non-HK* construction.
//!
//! Reports come back as plain dicts (built from the same serde payloads the
//! CLI prints).

use holtklee::classify::{classify_om, is_shannon, simplicial_tope_count, Mode};
use holtklee::coshell::{hkstar_certificate, is_generic_coline, is_hkstar_matroid, is_proper_fixation, ColineFixation};
use holtklee::exact::rat_vec;
use holtklee::geom::build_non_hkstar as build;
use holtklee::omp::{is_hk_matroid, program_report as report, Program};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(pyholtklee, HoltKleeError, PyValueError);

fn err(e: holtklee::Error) -> PyErr {
    HoltKleeError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).expect("plain data");
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Chirotope", module = "pyholtklee", frozen)]
pub struct PyChirotope {
    inner: holtklee::Chirotope,
}

#[pymethods]
impl PyChirotope {
    /// Parse `"n r signs"` (one line) or the block format.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = holtklee::Chirotope::parse(text).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn alternating(n: usize, r: usize) -> PyResult<Self> {
        Ok(Self { inner: holtklee::Chirotope::alternating(n, r).map_err(err)? })
    }

    /// Chirotope of integer vectors, one per element.
    #[staticmethod]
    fn from_vectors(vectors: Vec<Vec<i64>>) -> PyResult<Self> {
        let vs: Vec<_> = vectors.iter().map(|v| rat_vec(v)).collect();
        Ok(Self { inner: holtklee::Chirotope::from_vectors(&vs).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.ground_size()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn signs(&self) -> String {
        self.inner.sign_string()
    }

    fn is_uniform(&self) -> bool {
        self.inner.is_uniform()
    }

    /// Sign of an ordered tuple of 1-based labels, as -1, 0 or 1.
    fn sign_of(&self, tuple: Vec<usize>) -> PyResult<i8> {
        Ok(self.inner.sign_of(&tuple).map_err(err)?.as_i8())
    }

    fn mutate(&self, basis: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.mutate(&basis).map_err(err)? })
    }

    fn reorient(&self, set: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.reorient(&set).map_err(err)? })
    }

    fn to_line(&self) -> String {
        self.inner.to_line()
    }

    fn oriented_matroid(&self) -> PyResult<PyOrientedMatroid> {
        PyOrientedMatroid::new(self)
    }

    fn __str__(&self) -> String {
        self.inner.to_line()
    }

    fn __repr__(&self) -> String {
        format!("Chirotope({:?})", self.inner.to_line())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyclass(name = "OrientedMatroid", module = "pyholtklee", frozen)]
pub struct PyOrientedMatroid {
    inner: holtklee::OrientedMatroid,
    chirotope: Option<holtklee::Chirotope>,
}

#[pymethods]
impl PyOrientedMatroid {
    #[new]
    fn new(chirotope: &PyChirotope) -> PyResult<Self> {
        let inner = holtklee::OrientedMatroid::from_chirotope(&chirotope.inner).map_err(err)?;
        Ok(Self { inner, chirotope: Some(chirotope.inner.clone()) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.ground_size()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn is_uniform(&self) -> bool {
        self.inner.is_uniform()
    }

    /// Sign vectors as strings over `+`, `-`, `0`.
    fn cocircuits(&self) -> Vec<String> {
        self.inner.cocircuits().iter().map(ToString::to_string).collect()
    }

    fn topes(&self) -> Vec<String> {
        self.inner.topes().iter().map(ToString::to_string).collect()
    }

    fn covector_count(&self) -> usize {
        self.inner.covectors().len()
    }

    fn reorient(&self, set: Vec<usize>) -> PyResult<Self> {
        let chirotope = match &self.chirotope {
            Some(c) => Some(c.reorient(&set).map_err(err)?),
            None => None,
        };
        Ok(Self { inner: self.inner.reorient(&set).map_err(err)?, chirotope })
    }

    fn delete(&self, set: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.delete(&set).map_err(err)?, chirotope: None })
    }

    fn contract(&self, set: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.contract(&set).map_err(err)?, chirotope: None })
    }

    fn simplicial_tope_count(&self) -> usize {
        simplicial_tope_count(&self.inner)
    }

    fn is_shannon(&self) -> bool {
        is_shannon(&self.inner)
    }

    /// Report for the program `(self, g, f)`.
    fn program_report<'py>(&self, py: Python<'py>, g: usize, f: usize) -> PyResult<Bound<'py, PyAny>> {
        let pi = Program::new(self.inner.clone(), g, f).map_err(err)?;
        to_py(py, &report(&pi).map_err(err)?)
    }

    /// Shelling certificate for the fixation at `coline`. Raises when the
    /// coline is not generic or the fixation is not proper.
    fn shelling<'py>(&self, py: Python<'py>, coline: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let omega = ColineFixation::new(self.inner.clone(), &coline).map_err(err)?;
        if !is_generic_coline(&omega) {
            return Err(HoltKleeError::new_err("coline is not generic"));
        }
        if !is_proper_fixation(&omega) {
            return Err(HoltKleeError::new_err("fixation is not proper"));
        }
        let cert = hkstar_certificate(&omega, self.chirotope.as_ref()).map_err(err)?;
        to_py(py, &cert)
    }

    fn is_hk<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let verdict = py.detach(|| is_hk_matroid(&self.inner)).map_err(err)?;
        to_py(py, &verdict)
    }

    fn is_hkstar<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let verdict = py.detach(|| is_hkstar_matroid(&self.inner)).map_err(err)?;
        to_py(py, &verdict)
    }

    /// Classification row; `mode` is `"quick"` or `"full"`.
    #[pyo3(signature = (mode = "full", id = "om"))]
    fn classify<'py>(&self, py: Python<'py>, mode: &str, id: &str) -> PyResult<Bound<'py, PyAny>> {
        let mode: Mode = mode.parse().map_err(err)?;
        let row = py.detach(|| classify_om(id, &self.inner, mode)).map_err(err)?;
        to_py(py, &row)
    }

    fn __repr__(&self) -> String {
        format!("OrientedMatroid(n={}, rank={})", self.inner.ground_size(), self.inner.rank())
    }
}

/// A uniform rank-`r` matroid on `n` elements with a non-HK* fixation.
/// Returns the chirotope and the certificate dict.
#[pyfunction]
fn build_non_hkstar<'py>(py: Python<'py>, r: usize, n: usize) -> PyResult<(PyChirotope, Bound<'py, PyAny>)> {
    let (chi, cert) = py.detach(|| build(r, n)).map_err(err)?;
    Ok((PyChirotope { inner: chi }, to_py(py, &cert)?))
}

#[pymodule]
fn pyholtklee(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChirotope>()?;
    m.add_class::<PyOrientedMatroid>()?;
    m.add_function(wrap_pyfunction!(build_non_hkstar, m)?)?;
    m.add("HoltKleeError", m.py().get_type::<HoltKleeError>())?;
    Ok(())
}
