//! Python bindings. Vertices are 0-based here, as in the Rust library; `.hg`
//! text stays 1-based.

use hgspectra_core::bounds::{audit_ids, BoundId, EvalOptions};
use hgspectra_core::curvature;
use hgspectra_core::families;
use hgspectra_core::oracles::{self, Measure};
use hgspectra_core::report::to_json;
use hgspectra_core::spectra::spectrum_of;
use hgspectra_core::{hgfile, walks, MatrixKind};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Hypergraph", frozen, module = "hgspectra")]
struct PyHypergraph {
    inner: hgspectra_core::Hypergraph,
}

fn wrap(g: Result<hgspectra_core::Hypergraph, impl std::fmt::Display>) -> PyResult<PyHypergraph> {
    g.map(|inner| PyHypergraph { inner }).map_err(value_error)
}

#[pymethods]
impl PyHypergraph {
    #[new]
    fn new(n: usize, edges: Vec<Vec<usize>>) -> PyResult<Self> {
        wrap(hgspectra_core::Hypergraph::new(n, edges))
    }

    #[staticmethod]
    fn from_hg(text: &str) -> PyResult<Self> {
        wrap(hgfile::parse_hg(text))
    }

    fn to_hg(&self) -> String {
        hgfile::write_hg(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees().to_vec()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Ascending eigenvalues of `adjacency`, `laplacian`, `normalized` or `transition`.
    #[pyo3(signature = (matrix = "laplacian"))]
    fn spectrum(&self, matrix: &str) -> PyResult<Vec<f64>> {
        let kind: MatrixKind = matrix.parse().map_err(value_error)?;
        Ok(spectrum_of(&self.inner, kind).map_err(value_error)?.eigenvalues)
    }

    /// Bound reports as dictionaries; `bounds` is a list of ids, default all.
    #[pyo3(signature = (bounds = None, seed = None))]
    fn audit<'py>(&self, py: Python<'py>, bounds: Option<Vec<String>>, seed: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let ids: Vec<BoundId> = match bounds {
            Some(list) => list.iter().map(|s| s.parse()).collect::<Result<_, _>>().map_err(value_error)?,
            None => BoundId::ALL.to_vec(),
        };
        let mut opts = EvalOptions::default();
        if let Some(s) = seed {
            opts.seed = s;
        }
        let g = &self.inner;
        let reports = py.detach(|| audit_ids(g, &ids, &opts)).map_err(value_error)?;
        json_to_py(py, &to_json(&reports))
    }

    /// `(h, witness)` for `counting` or `volume`.
    #[pyo3(signature = (measure = "counting"))]
    fn cheeger(&self, py: Python<'_>, measure: &str) -> PyResult<(f64, Vec<usize>)> {
        let measure: Measure = measure.parse().map_err(value_error)?;
        let g = &self.inner;
        let c = py.detach(|| oracles::cheeger(g, measure)).map_err(value_error)?;
        Ok((c.value, c.witness.as_slice().to_vec()))
    }

    fn strong_chromatic_number(&self) -> PyResult<usize> {
        Ok(oracles::strong_chromatic_number(&self.inner).map_err(value_error)?.chi)
    }

    fn ollivier_kappa(&self, x: usize, y: usize) -> PyResult<f64> {
        Ok(curvature::ollivier_kappa(&self.inner, x, y).map_err(value_error)?.kappa)
    }

    fn stationary(&self) -> Vec<f64> {
        walks::stationary(&self.inner)
    }

    fn simulate(&self, start: usize, steps: usize, seed: u64) -> PyResult<Vec<usize>> {
        walks::simulate(&self.inner, start, steps, seed).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn complete_uniform(n: usize, m: usize) -> PyResult<PyHypergraph> {
    wrap(families::complete_uniform(n, m))
}

#[pyfunction]
fn complete_bipartite_uniform(n1: usize, n2: usize, m: usize) -> PyResult<PyHypergraph> {
    wrap(families::complete_bipartite_uniform(n1, n2, m))
}

#[pyfunction]
fn cube_hypergraph(n: usize, m: usize) -> PyResult<PyHypergraph> {
    wrap(families::cube_hypergraph(n, m))
}

#[pyfunction]
fn fano_plane() -> PyHypergraph {
    PyHypergraph { inner: families::fano_plane() }
}

#[pyfunction]
fn bowtie() -> PyHypergraph {
    PyHypergraph { inner: families::bowtie() }
}

#[pyfunction]
fn read_hg(path: &str) -> PyResult<PyHypergraph> {
    wrap(hgfile::read_hg(path))
}

#[pymodule]
fn hgspectra(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_function(wrap_pyfunction!(complete_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(complete_bipartite_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(cube_hypergraph, m)?)?;
    m.add_function(wrap_pyfunction!(fano_plane, m)?)?;
    m.add_function(wrap_pyfunction!(bowtie, m)?)?;
    m.add_function(wrap_pyfunction!(read_hg, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
