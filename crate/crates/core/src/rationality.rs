//! Single-functional rationality tests: instrument-moment Wald tests for the
//! mean and median, and the kernel-based test for the mode.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bandwidth::bandwidth_rule_of_thumb;
use crate::error::{Error, Result};
use crate::identification::{
    check_bandwidth, identification_values, moment_second_moment, ForecastDataset, Functional,
};
use crate::numerics::{chi_square_critical, chi_square_sf, spd_quadratic_form, Kernel};

/// Outcome of a rationality test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub functional: Functional,
    /// Wald statistic `J_T`.
    pub statistic: f64,
    /// Degrees of freedom (number of instruments).
    pub df: u32,
    pub p_value: f64,
    /// Bandwidth used (mode test only).
    pub bandwidth: Option<f64>,
    /// Covariance estimate `Ω̂`, row-major.
    pub covariance: Vec<Vec<f64>>,
    pub sample_size: usize,
}

impl TestResult {
    fn new(
        functional: Functional,
        statistic: f64,
        df: usize,
        bandwidth: Option<f64>,
        cov: &DMatrix<f64>,
        t: usize,
    ) -> Result<Self> {
        let df = df as u32;
        let statistic = statistic.max(0.0);
        Ok(Self {
            functional,
            statistic,
            df,
            p_value: chi_square_sf(df, statistic)?,
            bandwidth,
            covariance: cov
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            sample_size: t,
        })
    }

    /// Whether the test rejects at level `alpha` (`J_T > Q_k(1 - α)`).
    pub fn rejects_at(&self, alpha: f64) -> Result<bool> {
        Ok(self.statistic > chi_square_critical(self.df, alpha)?)
    }
}

fn instrument_sum(values: &[f64], h: &DMatrix<f64>) -> DVector<f64> {
    h.transpose() * DVector::from_column_slice(values)
}

/// Wald test of `E[V(X_t, Y_{t+1}) h_t] = 0` for the mean or the median:
/// `J_T = (1/T) (Σ v_t h_t)ᵀ Ω̂⁻¹ (Σ v_t h_t)` with `Ω̂ = (1/T) Σ v_t² h_t h_tᵀ`.
pub fn instrument_moment_test(kind: Functional, dataset: &ForecastDataset) -> Result<TestResult> {
    if kind == Functional::Mode {
        return Err(Error::domain("use mode_test for the mode functional"));
    }
    let t = dataset.len();
    let v = identification_values(kind, &dataset.forecast_errors(), 1.0, Kernel::Gaussian)?;
    let h = dataset.instruments();
    let sum = instrument_sum(&v, h);
    let omega = moment_second_moment(&v, h);
    let q = spd_quadratic_form(&omega, &sum)
        .map_err(|e| e.with_context(&format!("{} covariance", kind.name())))?;
    TestResult::new(kind, q / t as f64, dataset.k(), None, &omega, t)
}

/// Kernel test of mode rationality.
///
/// With `ψ_t = -δ⁻² K'((X_t - Y_{t+1})/δ) h_t`, the scaled moment is
/// `m = δ^{3/2} T^{-1/2} Σ ψ_t`, its covariance estimate
/// `Ω̂ = (1/T) Σ δ⁻¹ K'(ε_t/δ)² h_t h_tᵀ`, and `J_T = mᵀ Ω̂⁻¹ m`.
/// When `delta` is `None` the rule-of-thumb bandwidth is used.
pub fn mode_test(
    dataset: &ForecastDataset,
    delta: Option<f64>,
    kernel: Kernel,
) -> Result<TestResult> {
    let errors = dataset.forecast_errors();
    let t = dataset.len();
    let delta = match delta {
        Some(d) => {
            check_bandwidth(d)?;
            d
        }
        None => bandwidth_rule_of_thumb(&errors, t)?.delta,
    };
    let h = dataset.instruments();

    let psi_scalar: Vec<f64> = errors
        .iter()
        .map(|&e| -kernel.deriv(e / delta) / (delta * delta))
        .collect();
    let scale = delta.powf(1.5) / (t as f64).sqrt();
    let m = instrument_sum(&psi_scalar, h) * scale;

    let cov_scalar: Vec<f64> = errors
        .iter()
        .map(|&e| kernel.deriv(e / delta) / delta.sqrt())
        .collect();
    let omega = moment_second_moment(&cov_scalar, h);

    let j = spd_quadratic_form(&omega, &m).map_err(|e| e.with_context("mode covariance"))?;
    TestResult::new(Functional::Mode, j, dataset.k(), Some(delta), &omega, t)
}

/// Dispatch to the test matching `functional`.
pub fn rationality_test(
    functional: Functional,
    dataset: &ForecastDataset,
    delta: Option<f64>,
    kernel: Kernel,
) -> Result<TestResult> {
    match functional {
        Functional::Mode => mode_test(dataset, delta, kernel),
        other => instrument_moment_test(other, dataset),
    }
}
