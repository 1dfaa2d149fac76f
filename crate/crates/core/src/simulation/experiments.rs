//! Monte Carlo drivers for size, power and coverage studies.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dgp::{
    build_dataset, distort_forecasts, optimal_forecasts, simulate_path, DgpConfig, Distortion,
    InstrumentSet,
};
use super::implied::{implied_theta_with, ImpliedTheta};
use crate::bandwidth::bandwidth_rule_of_thumb;
use crate::central_tendency::{objective_from_stacked, SimplexWeights};
use crate::error::{Error, Result};
use crate::identification::stacked_moments;
use crate::numerics::{chi_square_critical, Kernel, RandomStream};
use crate::rationality::mode_test;

/// Salt for the noise-distortion substreams.
const NOISE_SALT: u64 = 0x6e_6f69_7365;
/// Draws used to resolve implied weights for coverage studies.
pub const DEFAULT_IMPLIED_DRAWS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    /// Rejection rate of the mode test for optimal mode forecasts.
    Size,
    /// Rejection rate of the mode test for distorted mode forecasts.
    Power,
    /// Coverage of the implied `θ` by the confidence set.
    Coverage,
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "size" => Ok(ExperimentKind::Size),
            "power" => Ok(ExperimentKind::Power),
            "coverage" => Ok(ExperimentKind::Coverage),
            other => Err(Error::domain(format!("unknown experiment {other:?}"))),
        }
    }
}

/// A complete Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub dgp: DgpConfig,
    pub instrument_set: InstrumentSet,
    pub replications: usize,
    /// Test level (size/power) or `1 -` confidence level (coverage).
    pub alpha: f64,
    #[serde(default)]
    pub kernel: Kernel,
    /// Forecast combination weights (coverage); mode forecasts otherwise.
    #[serde(default = "mode_beta")]
    pub beta: [f64; 3],
    #[serde(default)]
    pub distortion: Option<Distortion>,
    /// Evaluate coverage at this `θ` instead of the implied one.
    #[serde(default)]
    pub theta: Option<[f64; 3]>,
    #[serde(default = "default_implied_draws")]
    pub implied_draws: usize,
}

fn mode_beta() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_implied_draws() -> usize {
    DEFAULT_IMPLIED_DRAWS
}

impl ExperimentSpec {
    pub fn size(
        dgp: DgpConfig,
        instrument_set: InstrumentSet,
        replications: usize,
        alpha: f64,
    ) -> Self {
        Self {
            kind: ExperimentKind::Size,
            dgp,
            instrument_set,
            replications,
            alpha,
            kernel: Kernel::Gaussian,
            beta: mode_beta(),
            distortion: None,
            theta: None,
            implied_draws: DEFAULT_IMPLIED_DRAWS,
        }
    }

    pub fn power(
        dgp: DgpConfig,
        instrument_set: InstrumentSet,
        replications: usize,
        alpha: f64,
        distortion: Distortion,
    ) -> Self {
        Self {
            kind: ExperimentKind::Power,
            distortion: Some(distortion),
            ..Self::size(dgp, instrument_set, replications, alpha)
        }
    }

    /// Coverage at the 90% level.
    pub fn coverage(
        dgp: DgpConfig,
        beta: [f64; 3],
        instrument_set: InstrumentSet,
        replications: usize,
    ) -> Self {
        Self {
            kind: ExperimentKind::Coverage,
            beta,
            alpha: 0.10,
            ..Self::size(dgp, instrument_set, replications, 0.10)
        }
    }
}

/// Aggregate outcome of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec: ExperimentSpec,
    pub replications: usize,
    /// Replications that produced a statistic.
    pub completed: usize,
    /// Rejection rate (size/power) or coverage rate, over completed replications.
    pub rate: f64,
    /// `√(p̂(1 - p̂)/R)`
    pub mc_standard_error: f64,
    /// Failure messages and their counts.
    pub failures: BTreeMap<String, usize>,
    /// Implied `θ` set and evaluation point (coverage only).
    pub implied: Option<ImpliedTheta>,
    pub evaluated_theta: Option<SimplexWeights>,
    /// Statistic per replication (`None` for failures), in replication order.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub statistics: Vec<Option<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub p_values: Vec<Option<f64>>,
}

fn validate(spec: &ExperimentSpec) -> Result<()> {
    if spec.replications < 100 {
        return Err(Error::domain("experiments need at least 100 replications"));
    }
    if !(0.0..=1.0).contains(&spec.alpha) {
        return Err(Error::domain(format!(
            "alpha {} outside [0, 1]",
            spec.alpha
        )));
    }
    if spec.kind == ExperimentKind::Power && spec.distortion.is_none() {
        return Err(Error::domain("power experiments need a distortion"));
    }
    spec.dgp.validate()?;
    Ok(())
}

struct Outcome {
    hit: bool,
    statistic: f64,
    p_value: f64,
}

fn mode_replication(spec: &ExperimentSpec, rep: u64) -> Result<Outcome> {
    let stream = RandomStream::new(spec.dgp.seed, rep);
    let path = simulate_path(&spec.dgp, stream)?;
    let mut x = optimal_forecasts(&path, &spec.beta)?;
    if let Some(d) = spec.distortion {
        x = distort_forecasts(&x, d.kind, d.kappa, stream.salted(NOISE_SALT))?;
    }
    let data = build_dataset(&path, x, spec.instrument_set)?;
    let r = mode_test(&data, None, spec.kernel)?;
    Ok(Outcome {
        hit: r.rejects_at(spec.alpha)?,
        statistic: r.statistic,
        p_value: r.p_value,
    })
}

fn coverage_replication(
    spec: &ExperimentSpec,
    theta: &SimplexWeights,
    rep: u64,
) -> Result<Outcome> {
    let stream = RandomStream::new(spec.dgp.seed, rep);
    let path = simulate_path(&spec.dgp, stream)?;
    let x = optimal_forecasts(&path, &spec.beta)?;
    let data = build_dataset(&path, x, spec.instrument_set)?;
    let delta = bandwidth_rule_of_thumb(&data.forecast_errors(), data.len())?.delta;
    let stacked = stacked_moments(&data, delta, spec.kernel)?;
    let s = objective_from_stacked(theta, &stacked, None)?;
    let df = data.k() as u32;
    Ok(Outcome {
        hit: s <= chi_square_critical(df, spec.alpha)?,
        statistic: s,
        p_value: crate::numerics::chi_square_sf(df, s)?,
    })
}

/// Run any experiment. Replications are keyed by `(seed, replication)` and
/// may run on any number of threads; the report does not depend on it.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<SimulationReport> {
    validate(spec)?;
    let (implied, theta) = match spec.kind {
        ExperimentKind::Coverage => {
            let implied = implied_theta_with(
                &spec.dgp,
                &spec.beta,
                spec.implied_draws,
                spec.instrument_set,
                spec.kernel,
            )?;
            let theta = match spec.theta {
                Some([a, b, c]) => SimplexWeights::new(a, b, c)?,
                None => implied.evaluation_point(&spec.beta),
            };
            (Some(implied), Some(theta))
        }
        _ => (None, None),
    };

    let outcomes: Vec<Result<Outcome>> = (0..spec.replications as u64)
        .into_par_iter()
        .map(|rep| match &theta {
            Some(t) => coverage_replication(spec, t, rep),
            None => mode_replication(spec, rep),
        })
        .collect();

    let mut failures = BTreeMap::new();
    let mut hits = 0usize;
    let mut completed = 0usize;
    let mut statistics = Vec::with_capacity(outcomes.len());
    let mut p_values = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Ok(o) => {
                completed += 1;
                hits += o.hit as usize;
                statistics.push(Some(o.statistic));
                p_values.push(Some(o.p_value));
            }
            Err(e) => {
                *failures.entry(e.to_string()).or_insert(0) += 1;
                statistics.push(None);
                p_values.push(None);
            }
        }
    }
    let rate = if completed > 0 {
        hits as f64 / completed as f64
    } else {
        f64::NAN
    };
    let mc_standard_error = (rate * (1.0 - rate) / completed.max(1) as f64).sqrt();
    Ok(SimulationReport {
        spec: spec.clone(),
        replications: spec.replications,
        completed,
        rate,
        mc_standard_error,
        failures,
        implied,
        evaluated_theta: theta,
        statistics,
        p_values,
    })
}

/// Rejection rate of the mode test for optimal mode forecasts.
pub fn run_size_experiment(
    config: &DgpConfig,
    instrument_set: InstrumentSet,
    replications: usize,
    nominal_alpha: f64,
) -> Result<SimulationReport> {
    run_experiment(&ExperimentSpec::size(
        *config,
        instrument_set,
        replications,
        nominal_alpha,
    ))
}

/// Rejection rate of the mode test for distorted mode forecasts.
pub fn run_power_experiment(
    config: &DgpConfig,
    instrument_set: InstrumentSet,
    replications: usize,
    nominal_alpha: f64,
    distortion: Distortion,
) -> Result<SimulationReport> {
    run_experiment(&ExperimentSpec::power(
        *config,
        instrument_set,
        replications,
        nominal_alpha,
        distortion,
    ))
}

/// Coverage of the implied `θ` by the 90% confidence set.
pub fn run_coverage_experiment(
    config: &DgpConfig,
    beta: [f64; 3],
    instrument_set: InstrumentSet,
    replications: usize,
) -> Result<SimulationReport> {
    run_experiment(&ExperimentSpec::coverage(
        *config,
        beta,
        instrument_set,
        replications,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::dgp::Dgp;

    #[test]
    fn alpha_zero_never_rejects() {
        let c = DgpConfig::new(Dgp::HomoskedasticIid, 0.25, 100, 3);
        let r = run_size_experiment(&c, InstrumentSet::Set2, 100, 0.0).unwrap();
        assert_eq!(r.rate, 0.0);
        assert_eq!(r.completed, 100);
    }

    #[test]
    fn too_few_replications() {
        let c = DgpConfig::new(Dgp::HomoskedasticIid, 0.0, 100, 3);
        assert!(run_size_experiment(&c, InstrumentSet::Set1, 99, 0.05).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let c = DgpConfig::new(Dgp::ArGarch, 0.1, 100, 9);
        let a = run_size_experiment(&c, InstrumentSet::Set3, 120, 0.05).unwrap();
        let b = run_size_experiment(&c, InstrumentSet::Set3, 120, 0.05).unwrap();
        assert_eq!(a, b);
        assert!((a.mc_standard_error - (a.rate * (1.0 - a.rate) / 120.0).sqrt()).abs() < 1e-15);
    }
}
