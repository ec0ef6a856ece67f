//! Python bindings for the `lowgirth_qaoa` crate.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use lowgirth_qaoa::classical::{
    classical_cut_fraction, optimal_thresholds, threshold_analytic, Algorithm, BmConfig, BmScheme, ThresholdConfig,
};
use lowgirth_qaoa::eval::{self, EngineKind};
use lowgirth_qaoa::graphs::{enumerate_edge_orbits, GraphSource};
use lowgirth_qaoa::optimizer::{self, OptimizerConfig};
use lowgirth_qaoa::params::{Mode, ParamSet};
use lowgirth_qaoa::qmc::{qmc_edge_expectation, QmcParams};

fn err(e: lowgirth_qaoa::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A built-in graph or a JSON additive product spec.
#[pyclass(name = "Graph", module = "lowgirth")]
struct PyGraph {
    inner: GraphSource,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: GraphSource::named(name).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_spec(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: GraphSource::from_spec_path(&path).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn num_categories(&self) -> usize {
        self.inner.num_categories()
    }

    #[getter]
    fn num_classes(&self) -> usize {
        self.inner.num_classes()
    }

    #[getter]
    fn sharing(&self) -> Vec<usize> {
        self.inner.sharing()
    }

    /// `(category, (a, b), weight)` per edge orbit; product graphs only.
    fn edge_orbits(&self) -> PyResult<Vec<(usize, (usize, usize), f64)>> {
        let spec = self.inner.require_spec().map_err(err)?;
        Ok(enumerate_edge_orbits(spec)
            .into_iter()
            .map(|o| (o.category, o.edge, o.weight_f64()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Graph({:?})", self.inner.name())
    }
}

/// Angles for one circuit: `gammas[layer][class]`, `betas[layer]`, `sharing[category]`.
#[pyclass(name = "Params", module = "lowgirth", skip_from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ParamSet,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(gammas: Vec<Vec<f64>>, betas: Vec<f64>, sharing: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: ParamSet::new(gammas, betas, sharing).map_err(err)?,
        })
    }

    /// One gamma per layer shared by every category of `graph`.
    #[staticmethod]
    fn qaoa(graph: &PyGraph, gammas: Vec<f64>, betas: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: ParamSet::qaoa(&gammas, &betas, graph.inner.num_categories()).map_err(err)?,
        })
    }

    /// Layer-major gammas, one per sharing class of `graph`.
    #[staticmethod]
    fn ma(graph: &PyGraph, gammas: Vec<f64>, betas: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: ParamSet::ma(&gammas, &betas, &graph.inner.sharing()).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn gammas(&self) -> Vec<Vec<f64>> {
        self.inner.gammas.clone()
    }

    #[getter]
    fn betas(&self) -> Vec<f64> {
        self.inner.betas.clone()
    }

    fn to_flat(&self) -> Vec<f64> {
        self.inner.to_flat()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(gammas={:?}, betas={:?}, sharing={:?})",
            self.inner.gammas, self.inner.betas, self.inner.sharing
        )
    }
}

fn engine_for(graph: &GraphSource, engine: Option<&str>) -> PyResult<EngineKind> {
    match engine {
        Some(name) => name.parse().map_err(err),
        None if graph.spec().is_some() => Ok(EngineKind::Iterative),
        None => Ok(EngineKind::Oracle),
    }
}

/// Expected cut fraction.
#[pyfunction]
#[pyo3(signature = (graph, params, engine=None))]
fn cut_fraction(py: Python<'_>, graph: &PyGraph, params: &PyParams, engine: Option<&str>) -> PyResult<f64> {
    let kind = engine_for(&graph.inner, engine)?;
    py.detach(|| eval::cut_fraction(&graph.inner, &params.inner, kind))
        .map_err(err)
}

/// Multi-start optimization; returns `(value, params)`.
#[pyfunction]
#[pyo3(signature = (graph, p, mode="qaoa", starts=50, seed=0, engine=None))]
fn optimize(
    py: Python<'_>,
    graph: &PyGraph,
    p: usize,
    mode: &str,
    starts: usize,
    seed: u64,
    engine: Option<&str>,
) -> PyResult<(f64, PyParams)> {
    let mode: Mode = mode.parse().map_err(err)?;
    let kind = engine_for(&graph.inner, engine)?;
    let config = OptimizerConfig {
        starts,
        seed,
        ..Default::default()
    };
    let r = py
        .detach(|| optimizer::optimize(&graph.inner, p, mode, kind, &config))
        .map_err(err)?;
    Ok((r.value, PyParams { inner: r.best }))
}

/// Threshold algorithm estimate `(value, stderr)` for fixed per-step thresholds.
#[pyfunction]
#[pyo3(signature = (graph, thresholds, samples=1_000_000, seed=1))]
fn threshold(py: Python<'_>, graph: &PyGraph, thresholds: Vec<usize>, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let alg = Algorithm::Threshold(ThresholdConfig {
        thresholds,
        samples,
        seed,
    });
    let e = py.detach(|| classical_cut_fraction(&graph.inner, &alg)).map_err(err)?;
    Ok((e.value, e.stderr))
}

/// Best threshold vector over `steps` rounds: `(thresholds, value, stderr)`.
#[pyfunction]
#[pyo3(signature = (graph, steps, samples=1_000_000, seed=1))]
fn best_thresholds(
    py: Python<'_>,
    graph: &PyGraph,
    steps: usize,
    samples: u64,
    seed: u64,
) -> PyResult<(Vec<usize>, f64, f64)> {
    let s = py
        .detach(|| optimal_thresholds(&graph.inner, steps, samples, seed))
        .map_err(err)?;
    Ok((s.best, s.value.value, s.value.stderr))
}

/// Barak-Marwaha estimate `(value, stderr)`.
#[pyfunction]
#[pyo3(signature = (graph, k, scheme="para1", neighbor_class=0, samples=10_000_000, seed=1))]
fn bm(
    py: Python<'_>,
    graph: &PyGraph,
    k: usize,
    scheme: &str,
    neighbor_class: usize,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let scheme: BmScheme = scheme.parse().map_err(err)?;
    let mut cfg = BmConfig::new(k, scheme, samples, seed);
    cfg.neighbor_class = neighbor_class;
    let e = py
        .detach(|| classical_cut_fraction(&graph.inner, &Algorithm::Bm(cfg)))
        .map_err(err)?;
    Ok((e.value, e.stderr))
}

/// One-round threshold closed form on the `d`-regular tree.
#[pyfunction]
fn threshold_closed_form(d: u64, tau: u64) -> PyResult<f64> {
    let r = threshold_analytic(d, tau).map_err(err)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// Quantum MaxCut estimates `(value, stderr)` for every edge orbit.
#[pyfunction]
#[pyo3(signature = (graph, alpha, beta, gamma, delta, samples=10_000, seed=1))]
#[allow(clippy::too_many_arguments)]
fn qmc_edges(
    py: Python<'_>,
    graph: &PyGraph,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    delta: Vec<f64>,
    samples: u64,
    seed: u64,
) -> PyResult<Vec<(f64, f64)>> {
    let spec = graph.inner.require_spec().map_err(err)?;
    let theta = QmcParams::new(alpha, beta, gamma, delta).map_err(err)?;
    py.detach(|| {
        enumerate_edge_orbits(spec)
            .iter()
            .map(|o| qmc_edge_expectation(spec, o, &theta, samples, seed).map(|e| (e.value, e.stderr)))
            .collect::<lowgirth_qaoa::Result<Vec<_>>>()
    })
    .map_err(err)
}

#[pymodule]
fn lowgirth(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(cut_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(best_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(bm, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(qmc_edges, m)?)?;
    Ok(())
}
