//! Per-observation identification values for the mean, median and mode,
//! their instrument interactions, and the normalised 3×k stacked moments.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{inverse_sqrt_spd, Kernel};

/// A measure of central tendency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Mean,
    Median,
    Mode,
}

impl Functional {
    pub const ALL: [Functional; 3] = [Functional::Mean, Functional::Median, Functional::Mode];

    pub fn index(self) -> usize {
        match self {
            Functional::Mean => 0,
            Functional::Median => 1,
            Functional::Mode => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Functional::Mean => "mean",
            Functional::Median => "median",
            Functional::Mode => "mode",
        }
    }
}

impl std::str::FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Functional::Mean),
            "median" | "med" => Ok(Functional::Median),
            "mode" => Ok(Functional::Mode),
            other => Err(Error::domain(format!("unknown functional {other:?}"))),
        }
    }
}

/// Aligned forecasts `X_t`, realisations `Y_{t+1}`, instruments `h_t` (one
/// row per observation) and optional cluster labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastDataset {
    realizations: Vec<f64>,
    forecasts: Vec<f64>,
    instruments: DMatrix<f64>,
    instrument_names: Vec<String>,
    cluster_labels: Option<Vec<i64>>,
}

impl ForecastDataset {
    /// Build a dataset; `instruments` is `T×k`.
    pub fn new(
        realizations: Vec<f64>,
        forecasts: Vec<f64>,
        instruments: DMatrix<f64>,
    ) -> Result<Self> {
        let t = realizations.len();
        if t < 2 {
            return Err(Error::domain(format!(
                "need at least 2 observations, got {t}"
            )));
        }
        if forecasts.len() != t || instruments.nrows() != t {
            return Err(Error::domain(format!(
                "length mismatch: {} realizations, {} forecasts, {} instrument rows",
                t,
                forecasts.len(),
                instruments.nrows()
            )));
        }
        if instruments.ncols() == 0 {
            return Err(Error::domain("at least one instrument is required"));
        }
        if realizations
            .iter()
            .chain(&forecasts)
            .chain(instruments.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::domain("dataset contains non-finite values"));
        }
        let instrument_names = (0..instruments.ncols()).map(|j| format!("h{j}")).collect();
        Ok(Self {
            realizations,
            forecasts,
            instruments,
            instrument_names,
            cluster_labels: None,
        })
    }

    /// Build from instrument columns (each of length `T`).
    pub fn from_columns(
        realizations: Vec<f64>,
        forecasts: Vec<f64>,
        columns: &[Vec<f64>],
    ) -> Result<Self> {
        let t = realizations.len();
        if columns.iter().any(|c| c.len() != t) {
            return Err(Error::domain("instrument column length mismatch"));
        }
        let h = DMatrix::from_fn(t, columns.len(), |i, j| columns[j][i]);
        Self::new(realizations, forecasts, h)
    }

    /// Instruments `(1, X_t)`.
    pub fn with_constant_and_forecast(realizations: Vec<f64>, forecasts: Vec<f64>) -> Result<Self> {
        let ones = vec![1.0; forecasts.len()];
        let x = forecasts.clone();
        Self::from_columns(realizations, forecasts, &[ones, x])?
            .with_instrument_names(vec!["const".into(), "x".into()])
    }

    pub fn with_instrument_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.instruments.ncols() {
            return Err(Error::domain(
                "instrument name count does not match instrument columns",
            ));
        }
        self.instrument_names = names;
        Ok(self)
    }

    pub fn with_clusters(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::domain(format!(
                "{} cluster labels for {} observations",
                labels.len(),
                self.len()
            )));
        }
        self.cluster_labels = Some(labels);
        Ok(self)
    }

    /// Same data with every instrument row mapped `h ↦ A h`.
    pub fn transform_instruments(&self, a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != self.k() || a.ncols() != self.k() {
            return Err(Error::domain("instrument transform must be k×k"));
        }
        let mut out = self.clone();
        out.instruments = &self.instruments * a.transpose();
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    /// Number of instruments.
    pub fn k(&self) -> usize {
        self.instruments.ncols()
    }

    pub fn realizations(&self) -> &[f64] {
        &self.realizations
    }

    pub fn forecasts(&self) -> &[f64] {
        &self.forecasts
    }

    pub fn instruments(&self) -> &DMatrix<f64> {
        &self.instruments
    }

    pub fn instrument_names(&self) -> &[String] {
        &self.instrument_names
    }

    pub fn cluster_labels(&self) -> Option<&[i64]> {
        self.cluster_labels.as_deref()
    }

    /// `ε_t = X_t - Y_{t+1}`.
    pub fn forecast_errors(&self) -> Vec<f64> {
        forecast_errors(&self.forecasts, &self.realizations)
    }
}

/// `ε_t = X_t - Y_{t+1}` elementwise.
pub fn forecast_errors(forecasts: &[f64], realizations: &[f64]) -> Vec<f64> {
    forecasts
        .iter()
        .zip(realizations)
        .map(|(x, y)| x - y)
        .collect()
}

fn sign(e: f64) -> f64 {
    if e > 0.0 {
        1.0
    } else if e < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Mode identification value `δ^{-1/2} K'(-ε/δ)`.
#[inline]
pub(crate) fn mode_value(e: f64, delta: f64, kernel: Kernel) -> f64 {
    kernel.deriv(-e / delta) / delta.sqrt()
}

/// Identification values of `kind` at each forecast error. `delta` is only
/// used for the mode.
pub fn identification_values(
    kind: Functional,
    errors: &[f64],
    delta: f64,
    kernel: Kernel,
) -> Result<Vec<f64>> {
    Ok(match kind {
        Functional::Mean => errors.to_vec(),
        Functional::Median => errors.iter().map(|&e| sign(e)).collect(),
        Functional::Mode => {
            check_bandwidth(delta)?;
            errors
                .iter()
                .map(|&e| mode_value(e, delta, kernel))
                .collect()
        }
    })
}

pub(crate) fn check_bandwidth(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "bandwidth must be positive and finite, got {delta}"
        )))
    }
}

/// `(1/T) Σ_t v_t² h_t h_tᵀ`
pub fn moment_second_moment(values: &[f64], instruments: &DMatrix<f64>) -> DMatrix<f64> {
    let t = values.len();
    let k = instruments.ncols();
    let mut m = DMatrix::zeros(k, k);
    for (i, &v) in values.iter().enumerate() {
        let w = v * v;
        if w == 0.0 {
            continue;
        }
        for a in 0..k {
            let ha = instruments[(i, a)] * w;
            for b in a..k {
                m[(a, b)] += ha * instruments[(i, b)];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            m[(a, b)] = m[(b, a)];
        }
    }
    m / t as f64
}

/// Weighting matrices with `Ŵ_r M_r Ŵ_rᵀ = I`, where
/// `M_r = (1/T) Σ_t (v_{r,t} h_t)(v_{r,t} h_t)ᵀ`, in the order mean, median, mode.
///
/// The root is taken relative to `S = (1/T) Σ_t h_t h_tᵀ`:
/// `Ŵ_r = (S^{-1/2} M_r S^{-1/2})^{-1/2} S^{-1/2}`. Replacing `h_t` by `A h_t`
/// then changes every `Ŵ_r A` by one shared rotation, so `S_T(θ)` is
/// invariant at every `θ` and not only at the vertices. When `M_r` and `S`
/// commute (always for `k = 1`) this is the symmetric `M_r^{-1/2}`.
pub fn weighting_matrices(
    dataset: &ForecastDataset,
    delta: f64,
    kernel: Kernel,
) -> Result<[DMatrix<f64>; 3]> {
    check_bandwidth(delta)?;
    let errors = dataset.forecast_errors();
    let h = dataset.instruments();
    let s = moment_second_moment(&vec![1.0; dataset.len()], h);
    let p = inverse_sqrt_spd(&s).map_err(|e| e.with_context("instrument second moment"))?;
    let mut out = Vec::with_capacity(3);
    for f in Functional::ALL {
        let v = identification_values(f, &errors, delta, kernel)?;
        let m = moment_second_moment(&v, h);
        let rel = &p * m * &p;
        let root = inverse_sqrt_spd(&rel)
            .map_err(|e| e.with_context(&format!("{} weighting matrix", f.name())))?;
        out.push(root * &p);
    }
    Ok(out.try_into().expect("three functionals"))
}

/// Normalised identification functions interacted with the instruments.
///
/// `rows[r]` is `T×k`: its row `t` is `v_{r,t} · (Ŵ_r h_t)ᵀ`.
#[derive(Debug, Clone)]
pub struct StackedMoments {
    pub rows: [DMatrix<f64>; 3],
    pub bandwidth: f64,
    pub kernel: Kernel,
    pub weights: [DMatrix<f64>; 3],
}

impl StackedMoments {
    pub fn len(&self) -> usize {
        self.rows[0].nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn k(&self) -> usize {
        self.rows[0].ncols()
    }

    /// The 3×k matrix `ψ_t` for a single observation.
    pub fn observation(&self, t: usize) -> DMatrix<f64> {
        DMatrix::from_fn(3, self.k(), |r, j| self.rows[r][(t, j)])
    }
}

/// Stacked moments with the sample weighting matrices.
pub fn stacked_moments(
    dataset: &ForecastDataset,
    delta: f64,
    kernel: Kernel,
) -> Result<StackedMoments> {
    let weights = weighting_matrices(dataset, delta, kernel)?;
    stacked_moments_with_weights(dataset, delta, kernel, weights)
}

/// Stacked moments with caller-supplied weighting matrices.
pub fn stacked_moments_with_weights(
    dataset: &ForecastDataset,
    delta: f64,
    kernel: Kernel,
    weights: [DMatrix<f64>; 3],
) -> Result<StackedMoments> {
    check_bandwidth(delta)?;
    let k = dataset.k();
    if weights.iter().any(|w| w.nrows() != k || w.ncols() != k) {
        return Err(Error::domain("weighting matrices must be k×k"));
    }
    let errors = dataset.forecast_errors();
    let h = dataset.instruments();
    let mut rows = Vec::with_capacity(3);
    for f in Functional::ALL {
        let v = identification_values(f, &errors, delta, kernel)?;
        let mut hw = h * weights[f.index()].transpose();
        for (t, vt) in v.iter().enumerate() {
            hw.row_mut(t).scale_mut(*vt);
        }
        rows.push(hw);
    }
    Ok(StackedMoments {
        rows: rows.try_into().expect("three functionals"),
        bandwidth: delta,
        kernel,
        weights,
    })
}
