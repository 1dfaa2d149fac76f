//! Python bindings: datasets, the three rationality tests, confidence sets,
//! the bandwidth rule and a few numerical helpers.

use centrality::io::{
    grid_csv, grid_json, load_csv as load_csv_core, random_walk_forecasts as rw, render_svg,
};
use centrality::numerics::{chi_square_quantile as chi2_q, chi_square_sf as chi2_sf};
use centrality::simulation::{run_experiment, Dgp, DgpConfig, ExperimentSpec, InstrumentSet};
use centrality::{
    ConfidenceSetGrid, ConfidenceSetOptions, Error, ForecastDataset, Functional, Kernel,
    SimplexWeights, TestResult,
};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(msg) => PyOSError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn weights(theta: (f64, f64, f64)) -> PyResult<SimplexWeights> {
    SimplexWeights::new(theta.0, theta.1, theta.2).map_err(to_py)
}

/// Realizations, forecasts and instruments.
#[pyclass(name = "ForecastDataset", module = "centrality_py", frozen)]
pub struct PyForecastDataset {
    inner: ForecastDataset,
}

#[pymethods]
impl PyForecastDataset {
    /// `instruments` is a list of columns; the default is `(1, x)`.
    #[new]
    #[pyo3(signature = (y, x, instruments=None, names=None, clusters=None))]
    fn new(
        y: Vec<f64>,
        x: Vec<f64>,
        instruments: Option<Vec<Vec<f64>>>,
        names: Option<Vec<String>>,
        clusters: Option<Vec<i64>>,
    ) -> PyResult<Self> {
        let mut d = match instruments {
            Some(cols) => ForecastDataset::from_columns(y, x, &cols),
            None => ForecastDataset::with_constant_and_forecast(y, x),
        }
        .map_err(to_py)?;
        if let Some(n) = names {
            d = d.with_instrument_names(n).map_err(to_py)?;
        }
        if let Some(c) = clusters {
            d = d.with_clusters(c).map_err(to_py)?;
        }
        Ok(Self { inner: d })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn instrument_names(&self) -> Vec<String> {
        self.inner.instrument_names().to_vec()
    }

    fn forecast_errors(&self) -> Vec<f64> {
        self.inner.forecast_errors()
    }

    fn __repr__(&self) -> String {
        format!(
            "ForecastDataset(T={}, k={})",
            self.inner.len(),
            self.inner.k()
        )
    }
}

/// Outcome of a single-functional rationality test.
#[pyclass(name = "TestResult", module = "centrality_py", frozen)]
pub struct PyTestResult {
    inner: TestResult,
}

#[pymethods]
impl PyTestResult {
    #[getter]
    fn functional(&self) -> &'static str {
        self.inner.functional.name()
    }
    #[getter]
    fn statistic(&self) -> f64 {
        self.inner.statistic
    }
    #[getter]
    fn df(&self) -> u32 {
        self.inner.df
    }
    #[getter]
    fn p_value(&self) -> f64 {
        self.inner.p_value
    }
    #[getter]
    fn bandwidth(&self) -> Option<f64> {
        self.inner.bandwidth
    }
    #[getter]
    fn sample_size(&self) -> usize {
        self.inner.sample_size
    }
    #[getter]
    fn covariance(&self) -> Vec<Vec<f64>> {
        self.inner.covariance.clone()
    }

    fn rejects_at(&self, alpha: f64) -> PyResult<bool> {
        self.inner.rejects_at(alpha).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "TestResult({}, statistic={}, df={}, p_value={})",
            self.inner.functional.name(),
            self.inner.statistic,
            self.inner.df,
            self.inner.p_value
        )
    }
}

/// Confidence sets evaluated on a simplex grid.
#[pyclass(name = "ConfidenceSetGrid", module = "centrality_py", frozen)]
pub struct PyConfidenceSetGrid {
    inner: ConfidenceSetGrid,
}

#[pymethods]
impl PyConfidenceSetGrid {
    #[getter]
    fn resolution(&self) -> usize {
        self.inner.resolution
    }
    #[getter]
    fn bandwidth(&self) -> f64 {
        self.inner.bandwidth
    }
    #[getter]
    fn alpha_levels(&self) -> Vec<f64> {
        self.inner.alpha_levels.clone()
    }
    #[getter]
    fn thresholds(&self) -> Vec<f64> {
        self.inner.thresholds.clone()
    }

    /// `(theta, objective, p_value, members)` per grid point.
    #[allow(clippy::type_complexity)]
    fn points(&self) -> Vec<((f64, f64, f64), Option<f64>, Option<f64>, Vec<bool>)> {
        self.inner
            .points
            .iter()
            .map(|p| {
                let [a, b, c] = p.theta.theta;
                ((a, b, c), p.objective, p.p_value, p.members.clone())
            })
            .collect()
    }

    fn member_count(&self, level: usize) -> PyResult<usize> {
        if level >= self.inner.alpha_levels.len() {
            return Err(PyValueError::new_err("level index out of range"));
        }
        Ok(self.inner.member_count(level))
    }

    fn to_json(&self) -> PyResult<String> {
        grid_json(&self.inner).map_err(to_py)
    }

    fn to_csv(&self) -> String {
        grid_csv(&self.inner)
    }

    fn to_svg(&self) -> String {
        render_svg(&self.inner)
    }
}

#[pyfunction]
#[pyo3(signature = (functional, dataset, bandwidth=None, kernel="gaussian"))]
fn rationality_test(
    functional: &str,
    dataset: &PyForecastDataset,
    bandwidth: Option<f64>,
    kernel: &str,
) -> PyResult<PyTestResult> {
    let f: Functional = parse(functional)?;
    let r = centrality::rationality_test(f, &dataset.inner, bandwidth, parse(kernel)?)
        .map_err(to_py)?;
    Ok(PyTestResult { inner: r })
}

#[pyfunction]
#[pyo3(signature = (dataset, grid_m=50, alpha=vec![0.10, 0.05], bandwidth=None, kernel="gaussian", clustered=false))]
fn confidence_set(
    dataset: &PyForecastDataset,
    grid_m: usize,
    alpha: Vec<f64>,
    bandwidth: Option<f64>,
    kernel: &str,
    clustered: bool,
) -> PyResult<PyConfidenceSetGrid> {
    let opts = ConfidenceSetOptions {
        resolution: grid_m,
        alpha_levels: alpha,
        bandwidth,
        kernel: parse(kernel)?,
        clustered,
    };
    let g = centrality::confidence_set(&dataset.inner, &opts).map_err(to_py)?;
    Ok(PyConfidenceSetGrid { inner: g })
}

#[pyfunction]
#[pyo3(signature = (theta, dataset, bandwidth, kernel="gaussian", clustered=false))]
fn gmm_objective(
    theta: (f64, f64, f64),
    dataset: &PyForecastDataset,
    bandwidth: f64,
    kernel: &str,
    clustered: bool,
) -> PyResult<f64> {
    let clusters = if clustered {
        Some(
            dataset
                .inner
                .cluster_labels()
                .ok_or_else(|| PyValueError::new_err("dataset has no cluster labels"))?,
        )
    } else {
        None
    };
    centrality::gmm_objective(
        &weights(theta)?,
        &dataset.inner,
        bandwidth,
        parse::<Kernel>(kernel)?,
        clusters,
    )
    .map_err(to_py)
}

/// Rule-of-thumb bandwidth for the mode test.
#[pyfunction]
#[pyo3(signature = (errors, sample_size=None))]
fn bandwidth_rule_of_thumb(errors: Vec<f64>, sample_size: Option<usize>) -> PyResult<f64> {
    let t = sample_size.unwrap_or(errors.len());
    Ok(centrality::bandwidth_rule_of_thumb(&errors, t)
        .map_err(to_py)?
        .delta)
}

#[pyfunction]
fn simplex_grid(m: usize) -> PyResult<Vec<(f64, f64, f64)>> {
    Ok(centrality::simplex_grid(m)
        .map_err(to_py)?
        .into_iter()
        .map(|w| (w.theta[0], w.theta[1], w.theta[2]))
        .collect())
}

#[pyfunction]
fn chi_square_sf(df: u32, x: f64) -> PyResult<f64> {
    chi2_sf(df, x).map_err(to_py)
}

#[pyfunction]
fn chi_square_quantile(df: u32, p: f64) -> PyResult<f64> {
    chi2_q(df, p).map_err(to_py)
}

/// Shape and centrality measures of the standardised skew-normal law.
#[pyfunction]
fn skew_normal_params(py: Python<'_>, skewness: f64) -> PyResult<Bound<'_, PyDict>> {
    let s = centrality::simulation::skew_normal_params(skewness).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("skewness", s.skewness)?;
    d.set_item("shape", s.shape)?;
    d.set_item("mean", s.mean_xi)?;
    d.set_item("median", s.median_xi)?;
    d.set_item("mode", s.mode_xi)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (path, instruments, with_const=true, cluster=None))]
fn load_csv(
    path: &str,
    instruments: Vec<String>,
    with_const: bool,
    cluster: Option<&str>,
) -> PyResult<PyForecastDataset> {
    Ok(PyForecastDataset {
        inner: load_csv_core(path, &instruments, with_const, cluster).map_err(to_py)?,
    })
}

#[pyfunction]
fn random_walk_forecasts(prices: Vec<f64>) -> PyResult<PyForecastDataset> {
    Ok(PyForecastDataset {
        inner: rw(&prices).map_err(to_py)?,
    })
}

/// Mode-test rejection rate for optimal mode forecasts; returns
/// `(rate, mc_standard_error)`.
#[pyfunction]
#[pyo3(signature = (dgp, skewness, sample_size, replications, alpha=0.05, instrument_set="2", seed=0))]
fn size_experiment(
    dgp: &str,
    skewness: f64,
    sample_size: usize,
    replications: usize,
    alpha: f64,
    instrument_set: &str,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let config = DgpConfig::new(parse::<Dgp>(dgp)?, skewness, sample_size, seed);
    let spec = ExperimentSpec::size(
        config,
        parse::<InstrumentSet>(instrument_set)?,
        replications,
        alpha,
    );
    let r = run_experiment(&spec).map_err(to_py)?;
    Ok((r.rate, r.mc_standard_error))
}

#[pymodule]
fn centrality_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForecastDataset>()?;
    m.add_class::<PyTestResult>()?;
    m.add_class::<PyConfidenceSetGrid>()?;
    m.add_function(wrap_pyfunction!(rationality_test, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_set, m)?)?;
    m.add_function(wrap_pyfunction!(gmm_objective, m)?)?;
    m.add_function(wrap_pyfunction!(bandwidth_rule_of_thumb, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_grid, m)?)?;
    m.add_function(wrap_pyfunction!(chi_square_sf, m)?)?;
    m.add_function(wrap_pyfunction!(chi_square_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(skew_normal_params, m)?)?;
    m.add_function(wrap_pyfunction!(load_csv, m)?)?;
    m.add_function(wrap_pyfunction!(random_walk_forecasts, m)?)?;
    m.add_function(wrap_pyfunction!(size_experiment, m)?)?;
    Ok(())
}
