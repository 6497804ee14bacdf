//! Python bindings for the flooding-time library.
//!
//! The module exposes the main operations as plain functions taking
//! scalars (`nodes`, `lam`, `p`, ...) and returns the Monte Carlo and
//! oracle results as small classes. Parameter-domain problems raise
//! `ValueError`; runtime failures (event-budget exhaustion, a singular
//! chain system) raise `RuntimeError`.
//!
//! Build with `cargo build -p floodtime-py`, then import the produced
//! `libfloodtime_py.so` as `floodtime_py` (see `python/smoke_test.py`).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use floodtime::{monte_carlo, ModelParams, OnDurationLaw, OracleError, SimError, SimulatorKind};

fn params(nodes: usize, lam: f64, p: f64) -> PyResult<ModelParams> {
    ModelParams::from_edge_probability(nodes, lam, p)
        .map_err(|err| PyValueError::new_err(err.to_string()))
}

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Exact expected flooding time F(1, N-1).
#[pyfunction]
fn exact_flooding_time(nodes: usize, lam: f64, p: f64) -> PyResult<f64> {
    Ok(floodtime::exact_flooding_time(&params(nodes, lam, p)?).0)
}

/// Point-like closed form F0(1, N-1) = (2/(lam*N)) * H_{N-1}.
#[pyfunction]
fn sparse_flooding_time(nodes: usize, lam: f64) -> PyResult<f64> {
    let params = ModelParams::point_like(nodes, lam).map_err(value_err)?;
    Ok(floodtime::sparse_flooding_time(&params))
}

/// Logarithmic envelope (lower, upper) bracketing the point-like value.
#[pyfunction]
fn sparse_envelope(nodes: usize, lam: f64) -> PyResult<(f64, f64)> {
    let params = ModelParams::point_like(nodes, lam).map_err(value_err)?;
    floodtime::sparse_envelope(&params).map_err(value_err)
}

/// Lower bound on the exact flooding time.
#[pyfunction]
fn lower_bound(nodes: usize, lam: f64, p: f64) -> PyResult<f64> {
    Ok(floodtime::lower_bound_flooding_time(&params(nodes, lam, p)?))
}

/// Upper bound on the exact flooding time.
#[pyfunction]
fn upper_bound(nodes: usize, lam: f64, p: f64) -> PyResult<f64> {
    Ok(floodtime::upper_bound_flooding_time(&params(nodes, lam, p)?).0)
}

/// Operations needed by the exact solve: (N^3 - 6N^2 + 17N - 18)/6.
#[pyfunction]
fn complexity_exact(nodes: usize) -> PyResult<u64> {
    floodtime::complexity_exact(nodes).map_err(value_err)
}

/// Operations needed by the lower-bound solve: C(N-1, 2).
#[pyfunction]
fn complexity_lower(nodes: usize) -> PyResult<u64> {
    floodtime::complexity_lower(nodes).map_err(value_err)
}

/// Extra operations to extend an upper-bound table from N-1 to N nodes.
#[pyfunction]
fn incremental_upper(nodes: usize) -> PyResult<u64> {
    floodtime::incremental_upper(nodes).map_err(value_err)
}

/// Smallest population at which the upper bound undercuts the point-like
/// value for all sizes up to `n_max`, or None if it never does.
#[pyfunction]
fn crossover_n(lam: f64, p: f64, n_max: usize) -> PyResult<Option<usize>> {
    floodtime::crossover_n(lam, p, n_max).map_err(value_err)
}

/// Expected absorption time from the exact edge-state chain (N <= 4).
#[pyfunction]
fn ctmc_exact_flooding(nodes: usize, lam: f64, mu: f64) -> PyResult<f64> {
    floodtime::ctmc_exact_flooding(nodes, lam, mu).map_err(|err| match err {
        OracleError::Singular => PyRuntimeError::new_err(err.to_string()),
        _ => value_err(err),
    })
}

/// Monte Carlo estimate of the flooding time with a 95% interval.
#[pyclass(frozen, get_all)]
struct FloodingEstimate {
    mean: f64,
    stderr: f64,
    ci_low: f64,
    ci_high: f64,
    replications: usize,
    seed: u64,
}

#[pymethods]
impl FloodingEstimate {
    fn __repr__(&self) -> String {
        format!(
            "FloodingEstimate(mean={}, stderr={}, ci_low={}, ci_high={}, \
             replications={}, seed={})",
            self.mean, self.stderr, self.ci_low, self.ci_high, self.replications, self.seed
        )
    }
}

/// Chain value next to every analytic quantity at the same (N, lam, p).
#[pyclass(frozen, get_all)]
struct OracleReport {
    n_nodes: usize,
    lam: f64,
    mu: f64,
    p: f64,
    ctmc: f64,
    exact: f64,
    lower: f64,
    upper: f64,
    sparse: f64,
    rel_dev_exact: f64,
    rel_dev_lower: f64,
    rel_dev_upper: f64,
    rel_dev_sparse: f64,
    ctmc_within_bounds: bool,
}

#[pymethods]
impl OracleReport {
    fn __repr__(&self) -> String {
        format!(
            "OracleReport(n_nodes={}, lam={}, mu={}, p={}, ctmc={}, exact={}, \
             lower={}, upper={}, sparse={}, ctmc_within_bounds={})",
            self.n_nodes,
            self.lam,
            self.mu,
            self.p,
            self.ctmc,
            self.exact,
            self.lower,
            self.upper,
            self.sparse,
            self.ctmc_within_bounds
        )
    }
}

/// Run replicated simulations (`kind` is "generative" or "physical";
/// `on_dist` is "exp" or "det") and summarize them. Replication r draws
/// from RNG stream (seed, r), so results are reproducible and
/// thread-count independent.
#[pyfunction]
#[pyo3(signature = (kind, nodes, lam, p, reps, seed, on_dist = "exp"))]
fn run_monte_carlo(
    kind: &str,
    nodes: usize,
    lam: f64,
    p: f64,
    reps: usize,
    seed: u64,
    on_dist: &str,
) -> PyResult<FloodingEstimate> {
    let kind = match kind {
        "generative" => SimulatorKind::Generative,
        "physical" => SimulatorKind::Physical,
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be \"generative\" or \"physical\", got {other:?}"
            )))
        }
    };
    let params = params(nodes, lam, p)?;
    if params.p() >= 1.0 {
        return Err(PyValueError::new_err(
            "p = 1 means every link is permanently ON and flooding is instantaneous",
        ));
    }
    let law = if params.p() == 0.0 {
        OnDurationLaw::PointLike
    } else {
        let mean = params.mean_contact_duration();
        match on_dist {
            "exp" => OnDurationLaw::exponential(mean).map_err(value_err)?,
            "det" => OnDurationLaw::deterministic(mean).map_err(value_err)?,
            other => {
                return Err(PyValueError::new_err(format!(
                    "on_dist must be \"exp\" or \"det\", got {other:?}"
                )))
            }
        }
    };
    let estimate = monte_carlo(kind, &params, law, reps, seed).map_err(|err| match err {
        SimError::Guard { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => value_err(err),
    })?;
    Ok(FloodingEstimate {
        mean: estimate.mean,
        stderr: estimate.stderr,
        ci_low: estimate.ci_low,
        ci_high: estimate.ci_high,
        replications: estimate.replications,
        seed: estimate.seed,
    })
}

/// Full chain-versus-analytic comparison report (N <= 4).
#[pyfunction]
fn oracle_report(nodes: usize, lam: f64, mu: f64) -> PyResult<OracleReport> {
    let report = floodtime::oracle_report(nodes, lam, mu).map_err(|err| match err {
        OracleError::Singular => PyRuntimeError::new_err(err.to_string()),
        _ => value_err(err),
    })?;
    Ok(OracleReport {
        n_nodes: report.n_nodes,
        lam: report.lambda,
        mu: report.mu,
        p: report.p,
        ctmc: report.ctmc,
        exact: report.exact,
        lower: report.lower,
        upper: report.upper,
        sparse: report.sparse,
        rel_dev_exact: report.rel_dev_exact,
        rel_dev_lower: report.rel_dev_lower,
        rel_dev_upper: report.rel_dev_upper,
        rel_dev_sparse: report.rel_dev_sparse,
        ctmc_within_bounds: report.ctmc_within_bounds,
    })
}

#[pymodule]
fn floodtime_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(exact_flooding_time, m)?)?;
    m.add_function(wrap_pyfunction!(sparse_flooding_time, m)?)?;
    m.add_function(wrap_pyfunction!(sparse_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_exact, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_lower, m)?)?;
    m.add_function(wrap_pyfunction!(incremental_upper, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_n, m)?)?;
    m.add_function(wrap_pyfunction!(ctmc_exact_flooding, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_report, m)?)?;
    m.add_class::<FloodingEstimate>()?;
    m.add_class::<OracleReport>()?;
    Ok(())
}
