//! Python bindings for `digraph_gft`.
//!
//! Matrices cross the boundary as row-major lists of lists, signals as
//! lists of floats and spectra as lists of Python `complex`.

use digraph_gft::{self as core, BasisKind, Complex64, DMatrix, Error, GraphSignal, MBlockSpec};
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } | Error::Parse { .. } => PyOSError::new_err(e.to_string()),
        Error::Value(_) | Error::Dimension(_) => PyValueError::new_err(e.to_string()),
        Error::Validation(_) | Error::Numerical { .. } => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Generator parameter checks report `Validation`; from Python they are bad arguments.
fn bad_args(e: Error) -> PyErr {
    match e {
        Error::Validation(m) => PyValueError::new_err(m),
        e => to_py(e),
    }
}

fn rows<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>) -> Vec<Vec<T>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn signal(values: Vec<f64>) -> PyResult<GraphSignal> {
    GraphSignal::new(values).map_err(to_py)
}

fn basis_kind(name: &str) -> PyResult<BasisKind> {
    match name {
        "p" | "common_in_link" => Ok(BasisKind::CommonInLink),
        "f" | "common_out_link" => Ok(BasisKind::CommonOutLink),
        "q" | "in_flow" => Ok(BasisKind::InFlow),
        "schur" => Ok(BasisKind::Schur),
        other => Err(PyValueError::new_err(format!("unknown basis {other:?}"))),
    }
}

/// Weighted digraph; entry `(i, j)` of the adjacency is the weight of `j -> i`.
#[pyclass(name = "Digraph", module = "digraph_fourier")]
struct PyDigraph {
    inner: core::Digraph,
}

#[pymethods]
impl PyDigraph {
    #[new]
    fn new(adjacency: Vec<Vec<f64>>) -> PyResult<Self> {
        let n = adjacency.len();
        if adjacency.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("adjacency must be square"));
        }
        let flat: Vec<f64> = adjacency.into_iter().flatten().collect();
        let inner = core::Digraph::new(DMatrix::from_row_slice(n, n, &flat)).map_err(to_py)?;
        Ok(PyDigraph { inner })
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::gen_directed_cycle(n).map_err(bad_args)? })
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::gen_directed_path(n).map_err(bad_args)? })
    }

    #[staticmethod]
    fn torus(rows: usize, cols: usize) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::gen_directed_torus(rows, cols).map_err(bad_args)? })
    }

    #[staticmethod]
    #[pyo3(signature = (n, edge_prob, seed=0))]
    fn random(n: usize, edge_prob: f64, seed: u64) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::gen_random(n, edge_prob, seed).map_err(bad_args)? })
    }

    /// Balanced M-block cyclic graph.
    #[staticmethod]
    #[pyo3(signature = (blocks=4, per_block=25, weight_seed=7, normalize=true))]
    fn mblock_cyclic(blocks: usize, per_block: usize, weight_seed: u64, normalize: bool) -> PyResult<Self> {
        let spec = MBlockSpec { blocks, nodes_per_block: per_block, weight_seed, normalize };
        Ok(PyDigraph { inner: core::gen_mblock_cyclic(&spec).map_err(bad_args)? })
    }

    /// Reads a `coordinate real general` Matrix Market file.
    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyDigraph { inner: core::io::read_matrix_market(path).map_err(to_py)? })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        core::io::write_matrix_market(&self.inner, path).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    fn adjacency(&self) -> Vec<Vec<f64>> {
        rows(self.inner.adjacency())
    }

    fn is_normal(&self) -> bool {
        self.inner.is_normal()
    }

    fn normality_residual(&self) -> f64 {
        self.inner.normality_residual()
    }

    fn row_normalized(&self) -> PyResult<Self> {
        Ok(PyDigraph { inner: self.inner.row_normalized().map_err(to_py)? })
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Digraph(n={}, nnz={})", self.inner.n(), self.inner.nnz())
    }
}

/// Ordered graph Fourier basis, smoothest column first.
#[pyclass(name = "Basis", module = "digraph_fourier")]
struct PyBasis {
    inner: core::GftBasis,
}

#[pymethods]
impl PyBasis {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.label()
    }

    #[getter]
    fn frequencies(&self) -> Vec<f64> {
        self.inner.frequencies.clone()
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<Complex64> {
        self.inner.eigenvalues.clone()
    }

    /// Basis vectors as rows of a matrix whose column `k` is vector `k`.
    fn vectors(&self) -> Vec<Vec<Complex64>> {
        rows(&self.inner.vectors)
    }

    fn forward(&self, x: Vec<f64>) -> PyResult<Vec<Complex64>> {
        self.inner.forward(&signal(x)?).map_err(to_py)
    }

    fn inverse(&self, spectrum: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.inner.inverse(&spectrum).map_err(to_py)
    }

    /// Writes the basis CSV and the vectors Matrix Market file.
    fn write(&self, csv_path: &str, mtx_path: &str) -> PyResult<()> {
        core::io::write_basis(&self.inner, csv_path, mtx_path).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Basis(kind={}, n={})", self.inner.kind, self.inner.len())
    }
}

/// `A = PQ = QF` with `P`, `F` symmetric PSD and `Q` orthogonal.
#[pyclass(name = "PolarFactors", module = "digraph_fourier")]
struct PyPolar {
    inner: core::PolarFactors,
}

#[pymethods]
impl PyPolar {
    fn p(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.p)
    }

    fn q(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.q)
    }

    fn f(&self) -> Vec<Vec<f64>> {
        rows(&self.inner.f)
    }

    #[getter]
    fn singular_values(&self) -> Vec<f64> {
        self.inner.svd.singular_values.clone()
    }

    fn common_inlink_basis(&self) -> PyBasis {
        PyBasis { inner: core::common_inlink_basis(&self.inner) }
    }

    fn common_outlink_basis(&self) -> PyBasis {
        PyBasis { inner: core::common_outlink_basis(&self.inner) }
    }

    fn inflow_basis(&self) -> PyResult<PyBasis> {
        Ok(PyBasis { inner: core::inflow_basis(&self.inner).map_err(to_py)? })
    }
}

/// Frequency-ordered graph Schur transform.
#[pyclass(name = "SchurTransform", module = "digraph_fourier")]
struct PyGst {
    inner: core::GstTransform,
}

#[pymethods]
impl PyGst {
    #[getter]
    fn basis(&self) -> PyBasis {
        PyBasis { inner: self.inner.basis.clone() }
    }

    #[getter]
    fn spectral_radius(&self) -> f64 {
        self.inner.spectral_radius
    }

    /// Upper-triangular Schur factor.
    fn triangular(&self) -> Vec<Vec<Complex64>> {
        rows(&self.inner.factors.triangular)
    }

    fn forward(&self, x: Vec<f64>) -> PyResult<Vec<Complex64>> {
        self.inner.forward(&signal(x)?).map_err(to_py)
    }

    /// Returns the real signal and `max |Im|` dropped from it.
    fn inverse(&self, spectrum: Vec<Complex64>) -> PyResult<(Vec<f64>, f64)> {
        let r = self.inner.inverse(&spectrum).map_err(to_py)?;
        Ok((r.signal.into(), r.imag_residual))
    }

    /// Applies the shift in the transform domain.
    fn shift_spectrum(&self, spectrum: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        self.inner.shift_spectrum(&spectrum).map_err(to_py)
    }
}

#[pyfunction]
fn polar_decompose(g: &PyDigraph) -> PyResult<PyPolar> {
    Ok(PyPolar { inner: core::polar_decompose(&g.inner).map_err(to_py)? })
}

#[pyfunction]
fn gst(g: &PyDigraph) -> PyResult<PyGst> {
    Ok(PyGst { inner: core::gst_build(&g.inner).map_err(to_py)? })
}

/// Builds one of the bases by name: `p`, `f`, `q` or `schur`.
#[pyfunction]
fn basis(g: &PyDigraph, kind: &str) -> PyResult<PyBasis> {
    let inner = match basis_kind(kind)? {
        BasisKind::Schur => core::gst_build(&g.inner).map_err(to_py)?.basis,
        k => {
            let pf = core::polar_decompose(&g.inner).map_err(to_py)?;
            match k {
                BasisKind::CommonInLink => core::common_inlink_basis(&pf),
                BasisKind::CommonOutLink => core::common_outlink_basis(&pf),
                _ => core::inflow_basis(&pf).map_err(to_py)?,
            }
        }
    };
    Ok(PyBasis { inner })
}

/// `AAᵀ`, `AᵀA` or their sum, selected by `p`, `f` or `both`.
#[pyfunction]
#[pyo3(signature = (g, kind="both"))]
fn symmetrize(g: &PyDigraph, kind: &str) -> PyResult<Vec<Vec<f64>>> {
    let s = match kind {
        "p" | "bibliographic_coupling" => core::bibliographic_coupling(&g.inner),
        "f" | "co_citation" => core::co_citation(&g.inner),
        "both" | "bibliometric" => core::bibliometric(&g.inner),
        other => return Err(PyValueError::new_err(format!("unknown symmetrization {other:?}"))),
    };
    Ok(rows(&s.matrix))
}

/// Seeded iid standard normal signal.
#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_signal(n: usize, seed: u64) -> Vec<f64> {
    core::random_signal(n, seed, core::SignalDistribution::StandardNormal).into()
}

/// Snapshots `Aᵏ x` for each `k` in `ks`, with `A` row-normalized unless
/// `normalize` is false.
#[pyfunction]
#[pyo3(signature = (g, x, ks, normalize=true))]
fn diffuse(g: &PyDigraph, x: Vec<f64>, ks: Vec<usize>, normalize: bool) -> PyResult<Vec<Vec<f64>>> {
    let kind = if normalize { core::OperatorKind::RowNormalized } else { core::OperatorKind::Raw };
    let trace = core::diffuse(&g.inner, &signal(x)?, &ks, kind).map_err(to_py)?;
    Ok(trace.snapshots.into_iter().map(Vec::from).collect())
}

/// Entropy, top-decile energy and peak frequency rank of a spectrum.
#[pyfunction]
fn spectrum_stats<'py>(py: Python<'py>, spectrum: Vec<Complex64>, frequencies: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    if spectrum.len() != frequencies.len() {
        return Err(PyValueError::new_err("spectrum and frequencies differ in length"));
    }
    let stats = core::spectrum_stats(&spectrum, &core::frequency_ranks(&frequencies));
    let d = PyDict::new(py);
    d.set_item("entropy", stats.entropy)?;
    d.set_item("top_decile", stats.top_decile)?;
    d.set_item("peak_rank", stats.peak_rank)?;
    d.set_item("zero_energy", stats.zero_energy)?;
    Ok(d)
}

/// One seeded M-block cyclic diffusion run. Returns the localization rows
/// as `(basis, step, entropy, top_decile, peak_rank)` and the structure
/// residuals.
#[pyfunction]
#[pyo3(signature = (blocks=4, per_block=25, weight_seed=7, normalize=true, seed=0, ks=vec![0, 1, 5, 20, 100], out_dir=None))]
#[allow(clippy::too_many_arguments)]
fn run_experiment<'py>(
    py: Python<'py>,
    blocks: usize,
    per_block: usize,
    weight_seed: u64,
    normalize: bool,
    seed: u64,
    ks: Vec<usize>,
    out_dir: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = MBlockSpec { blocks, nodes_per_block: per_block, weight_seed, normalize };
    let report = core::run_mbcg_experiment(&spec, seed, &ks).map_err(bad_args)?;
    if let Some(dir) = out_dir {
        report.write_to(dir).map_err(to_py)?;
    }
    let localization: Vec<(&str, usize, f64, f64, usize)> = report
        .localization
        .entries
        .iter()
        .map(|e| (e.basis.label(), e.step, e.stats.entropy, e.stats.top_decile, e.stats.peak_rank))
        .collect();
    let s = &report.structure;
    let d = PyDict::new(py);
    d.set_item("localization", localization)?;
    d.set_item("structure_passes", s.passes())?;
    d.set_item("structure_csv", s.to_csv())?;
    Ok(d)
}

#[pymodule]
fn digraph_fourier(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDigraph>()?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyPolar>()?;
    m.add_class::<PyGst>()?;
    m.add_function(wrap_pyfunction!(polar_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(gst, m)?)?;
    m.add_function(wrap_pyfunction!(basis, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(random_signal, m)?)?;
    m.add_function(wrap_pyfunction!(diffuse, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_stats, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
