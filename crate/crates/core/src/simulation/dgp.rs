//! The four simulation designs: homoskedastic and heteroskedastic
//! cross-sections, AR(1), and AR(1)-GARCH(1,1), all driven by standardised
//! skew-normal innovations; plus optimal and deliberately distorted forecasts.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::skew_normal::{skew_normal_params, SkewNormalSpec};
use crate::error::{Error, Result};
use crate::identification::ForecastDataset;
use crate::numerics::{mean_sd, RandomStream};

/// Covariate means for the cross-sectional designs.
pub const COVARIATE_MEAN: [f64; 4] = [1.0, 1.0, -1.0, 2.0];
/// Covariate variances (the first covariate is the constant 1).
pub const COVARIATE_VAR: [f64; 4] = [0.0, 1.0, 1.0, 0.1];
pub const CROSS_SECTION_COEF: [f64; 4] = [1.0, 1.0, 1.0, 1.0];
pub const AR_COEF: f64 = 0.5;
pub const GARCH_OMEGA: f64 = 0.1;
pub const GARCH_BETA: f64 = 0.8;
pub const GARCH_ALPHA: f64 = 0.1;
pub const DEFAULT_BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dgp {
    /// Panel A.
    HomoskedasticIid,
    /// Panel B.
    Heteroskedastic,
    /// Panel C.
    Ar1,
    /// Panel D.
    ArGarch,
}

impl Dgp {
    pub fn is_time_series(self) -> bool {
        matches!(self, Dgp::Ar1 | Dgp::ArGarch)
    }
}

impl std::str::FromStr for Dgp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "homoskedastic" | "homoskedastic-iid" | "iid" => Ok(Dgp::HomoskedasticIid),
            "b" | "heteroskedastic" => Ok(Dgp::Heteroskedastic),
            "c" | "ar1" | "ar" => Ok(Dgp::Ar1),
            "d" | "ar-garch" | "argarch" | "garch" => Ok(Dgp::ArGarch),
            other => Err(Error::domain(format!("unknown DGP {other:?}"))),
        }
    }
}

/// A simulation design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpConfig {
    pub dgp: Dgp,
    /// Moment skewness of the innovations.
    pub skewness: f64,
    pub sample_size: usize,
    pub seed: u64,
    /// Discarded initial observations (time-series designs).
    pub burn_in: usize,
}

impl DgpConfig {
    pub fn new(dgp: Dgp, skewness: f64, sample_size: usize, seed: u64) -> Self {
        Self {
            dgp,
            skewness,
            sample_size,
            seed,
            burn_in: DEFAULT_BURN_IN,
        }
    }

    pub fn validate(&self) -> Result<SkewNormalSpec> {
        if self.sample_size < 2 {
            return Err(Error::domain("sample size must be >= 2"));
        }
        if self.dgp.is_time_series() && self.burn_in < 1 {
            return Err(Error::domain("time-series designs need burn_in >= 1"));
        }
        skew_normal_params(self.skewness)
    }
}

/// One simulated sample, aligned so that index `t` holds what is known at
/// time `t` together with the realisation `Y_{t+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPath {
    /// `ζᵀ Z_t`
    pub location: Vec<f64>,
    /// `σ_{t+1}`
    pub scale: Vec<f64>,
    /// `ξ_{t+1}`
    pub innovations: Vec<f64>,
    /// `Y_{t+1}`
    pub realizations: Vec<f64>,
    /// `Z_t` (cross-sectional designs).
    pub covariates: Option<Vec<[f64; 4]>>,
    /// `Y_{t-1}` (time-series designs).
    pub lagged: Option<Vec<f64>>,
    pub innovation_law: SkewNormalSpec,
}

impl SimulatedPath {
    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }
}

/// Simulate with the primary stream `(config.seed, 0)`.
pub fn simulate_dgp(config: &DgpConfig) -> Result<SimulatedPath> {
    simulate_path(config, RandomStream::new(config.seed, 0))
}

/// Simulate one sample from `stream`.
pub fn simulate_path(config: &DgpConfig, stream: RandomStream) -> Result<SimulatedPath> {
    let law = config.validate()?;
    let sampler = law.sampler();
    let mut rng = stream.rng();
    let n = config.sample_size;
    match config.dgp {
        Dgp::HomoskedasticIid | Dgp::Heteroskedastic => {
            let mut location = Vec::with_capacity(n);
            let mut scale = Vec::with_capacity(n);
            let mut innovations = Vec::with_capacity(n);
            let mut realizations = Vec::with_capacity(n);
            let mut covariates = Vec::with_capacity(n);
            for t in 1..=n {
                let mut z = [0.0; 4];
                for (j, zj) in z.iter_mut().enumerate() {
                    *zj = if COVARIATE_VAR[j] > 0.0 {
                        let e: f64 = StandardNormal.sample(&mut rng);
                        COVARIATE_MEAN[j] + COVARIATE_VAR[j].sqrt() * e
                    } else {
                        COVARIATE_MEAN[j]
                    };
                }
                let loc: f64 = z.iter().zip(CROSS_SECTION_COEF).map(|(a, b)| a * b).sum();
                let sigma = match config.dgp {
                    Dgp::Heteroskedastic => 0.5 + 1.5 * (t + 1) as f64 / n as f64,
                    _ => 1.0,
                };
                let xi = sampler.sample(&mut rng);
                location.push(loc);
                scale.push(sigma);
                innovations.push(xi);
                realizations.push(loc + sigma * xi);
                covariates.push(z);
            }
            Ok(SimulatedPath {
                location,
                scale,
                innovations,
                realizations,
                covariates: Some(covariates),
                lagged: None,
                innovation_law: law,
            })
        }
        Dgp::Ar1 | Dgp::ArGarch => {
            let total = config.burn_in + n + 1;
            // y[s], sigma2[s], xi[s] for s = 0..=total
            let mut y = vec![0.0; total + 1];
            let mut sigma2 = vec![1.0; total + 1];
            let mut xi = vec![0.0; total + 1];
            xi[0] = sampler.sample(&mut rng);
            for s in 1..=total {
                if config.dgp == Dgp::ArGarch {
                    sigma2[s] = GARCH_OMEGA
                        + GARCH_BETA * sigma2[s - 1]
                        + GARCH_ALPHA * sigma2[s - 1] * xi[s - 1].powi(2);
                }
                xi[s] = sampler.sample(&mut rng);
                y[s] = AR_COEF * y[s - 1] + sigma2[s].sqrt() * xi[s];
            }
            let first = config.burn_in + 1;
            let idx = first..first + n;
            Ok(SimulatedPath {
                location: idx.clone().map(|t| AR_COEF * y[t]).collect(),
                scale: idx.clone().map(|t| sigma2[t + 1].sqrt()).collect(),
                innovations: idx.clone().map(|t| xi[t + 1]).collect(),
                realizations: idx.clone().map(|t| y[t + 1]).collect(),
                covariates: None,
                lagged: Some(idx.map(|t| y[t - 1]).collect()),
                innovation_law: law,
            })
        }
    }
}

fn check_simplex(beta: &[f64; 3]) -> Result<()> {
    if beta.iter().any(|b| !(*b >= 0.0)) || (beta.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "forecast weights {beta:?} are not on the unit simplex"
        )));
    }
    Ok(())
}

/// `X_t = ζᵀZ_t + σ_{t+1} · βᵀ(Mean ξ, Median ξ, Mode ξ)`.
pub fn optimal_forecasts(path: &SimulatedPath, beta: &[f64; 3]) -> Result<Vec<f64>> {
    check_simplex(beta)?;
    let c = path.innovation_law.centrality();
    let offset: f64 = beta.iter().zip(c).map(|(b, v)| b * v).sum();
    Ok(path
        .location
        .iter()
        .zip(&path.scale)
        .map(|(l, s)| l + s * offset)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistortionKind {
    /// `X̃ = X + κ σ_X`
    Bias,
    /// `X̃ = X + N(0, κ σ_X²)`
    Noise,
}

impl std::str::FromStr for DistortionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bias" => Ok(DistortionKind::Bias),
            "noise" => Ok(DistortionKind::Noise),
            other => Err(Error::domain(format!("unknown distortion {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distortion {
    pub kind: DistortionKind,
    pub kappa: f64,
}

/// Sub-optimal forecasts: deterministic bias or independent noise, scaled by
/// the sample standard deviation of `x`.
pub fn distort_forecasts(
    x: &[f64],
    kind: DistortionKind,
    kappa: f64,
    stream: RandomStream,
) -> Result<Vec<f64>> {
    match kind {
        DistortionKind::Bias if !(kappa > -1.0 && kappa < 1.0) => {
            return Err(Error::domain(format!(
                "bias kappa must lie in (-1, 1), got {kappa}"
            )))
        }
        DistortionKind::Noise if !(0.0..1.0).contains(&kappa) => {
            return Err(Error::domain(format!(
                "noise kappa must lie in [0, 1), got {kappa}"
            )))
        }
        _ => {}
    }
    if kappa == 0.0 {
        return Ok(x.to_vec());
    }
    let (_, sd) = mean_sd(x);
    Ok(match kind {
        DistortionKind::Bias => x.iter().map(|v| v + kappa * sd).collect(),
        DistortionKind::Noise => {
            let mut rng = stream.rng();
            let noise_sd = kappa.sqrt() * sd;
            x.iter()
                .map(|v| {
                    let e: f64 = rng.sample(StandardNormal);
                    v + noise_sd * e
                })
                .collect()
        }
    })
}

/// Instrument choices for the simulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstrumentSet {
    /// `(1)`
    Set1,
    /// `(1, X_t)`
    Set2,
    /// `(1, X_t, Z_{t,2})` cross-sectionally, `(1, X_t, Y_{t-1})` for time series.
    Set3,
}

impl std::str::FromStr for InstrumentSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().trim_start_matches("set") {
            "1" => Ok(InstrumentSet::Set1),
            "2" => Ok(InstrumentSet::Set2),
            "3" => Ok(InstrumentSet::Set3),
            _ => Err(Error::domain(format!("unknown instrument set {s:?}"))),
        }
    }
}

/// Pair forecasts with the path's realisations under an instrument set.
pub fn build_dataset(
    path: &SimulatedPath,
    forecasts: Vec<f64>,
    set: InstrumentSet,
) -> Result<ForecastDataset> {
    let n = path.len();
    let ones = vec![1.0; n];
    let (cols, names): (Vec<Vec<f64>>, Vec<&str>) = match set {
        InstrumentSet::Set1 => (vec![ones], vec!["const"]),
        InstrumentSet::Set2 => (vec![ones, forecasts.clone()], vec!["const", "x"]),
        InstrumentSet::Set3 => {
            let extra = match (&path.covariates, &path.lagged) {
                (Some(z), _) => (z.iter().map(|z| z[1]).collect(), "z2"),
                (None, Some(lag)) => (lag.clone(), "y_lag"),
                _ => return Err(Error::domain("path has no third instrument")),
            };
            (
                vec![ones, forecasts.clone(), extra.0],
                vec!["const", "x", extra.1],
            )
        }
    };
    ForecastDataset::from_columns(path.realizations.clone(), forecasts, &cols)?
        .with_instrument_names(names.into_iter().map(String::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dgp: Dgp, gamma: f64, n: usize) -> DgpConfig {
        DgpConfig::new(dgp, gamma, n, 11)
    }

    #[test]
    fn reproducible_paths() {
        for dgp in [
            Dgp::HomoskedasticIid,
            Dgp::Heteroskedastic,
            Dgp::Ar1,
            Dgp::ArGarch,
        ] {
            let c = cfg(dgp, 0.25, 300);
            assert_eq!(simulate_dgp(&c).unwrap(), simulate_dgp(&c).unwrap());
            let other = simulate_path(&c, RandomStream::new(11, 1)).unwrap();
            assert_ne!(simulate_dgp(&c).unwrap().realizations, other.realizations);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(Dgp::Ar1, 0.0, 100);
        c.burn_in = 0;
        assert!(simulate_dgp(&c).is_err());
        assert!(simulate_dgp(&cfg(Dgp::Ar1, 0.999, 100)).is_err());
        assert!(simulate_dgp(&cfg(Dgp::HomoskedasticIid, 0.0, 1)).is_err());
    }

    #[test]
    fn ar1_long_run_mean_is_zero() {
        let p = simulate_dgp(&cfg(Dgp::Ar1, 0.0, 200_000)).unwrap();
        let (mean, _) = mean_sd(&p.realizations);
        // Var(Y) = 1/(1 - 0.25); long-run variance of the mean = 1/(1-0.5)^2
        let se = (1.0 / (1.0f64 - 0.5).powi(2) / p.len() as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn garch_unconditional_variance() {
        let p = simulate_dgp(&cfg(Dgp::ArGarch, 0.0, 1_000_000)).unwrap();
        let shocks: Vec<f64> = p
            .scale
            .iter()
            .zip(&p.innovations)
            .map(|(s, x)| s * x)
            .collect();
        let (_, sd) = mean_sd(&shocks);
        assert!((sd * sd - 1.0).abs() < 0.05, "variance {}", sd * sd);
    }

    #[test]
    fn heteroskedastic_ramp() {
        let p = simulate_dgp(&cfg(Dgp::Heteroskedastic, 0.0, 100)).unwrap();
        assert!((p.scale[0] - (0.5 + 1.5 * 2.0 / 100.0)).abs() < 1e-15);
        assert!((p.scale[99] - (0.5 + 1.5 * 101.0 / 100.0)).abs() < 1e-15);
    }

    #[test]
    fn ar1_symmetric_forecasts_are_half_lagged_value() {
        let c = cfg(Dgp::Ar1, 0.0, 50);
        let p = simulate_dgp(&c).unwrap();
        let x = optimal_forecasts(&p, &[0.2, 0.3, 0.5]).unwrap();
        for t in 1..p.len() {
            // Y_t is the previous observation's realisation
            assert_eq!(x[t], 0.5 * p.realizations[t - 1]);
        }
    }

    #[test]
    fn skewed_forecast_ordering_and_vertices() {
        let p = simulate_dgp(&cfg(Dgp::Heteroskedastic, 0.5, 200)).unwrap();
        let mean = optimal_forecasts(&p, &[1.0, 0.0, 0.0]).unwrap();
        let med = optimal_forecasts(&p, &[0.0, 1.0, 0.0]).unwrap();
        let mode = optimal_forecasts(&p, &[0.0, 0.0, 1.0]).unwrap();
        for t in 0..p.len() {
            assert!(mode[t] < med[t] && med[t] < mean[t]);
            let expected = p.location[t] + p.scale[t] * p.innovation_law.median_xi;
            assert_eq!(med[t], expected);
        }
        assert!(optimal_forecasts(&p, &[0.5, 0.6, 0.0]).is_err());
    }

    #[test]
    fn distortions() {
        let x: Vec<f64> = (0..10_000).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let s = RandomStream::new(5, 0);
        assert_eq!(
            distort_forecasts(&x, DistortionKind::Bias, 0.0, s).unwrap(),
            x
        );
        assert_eq!(
            distort_forecasts(&x, DistortionKind::Noise, 0.0, s).unwrap(),
            x
        );
        let (_, sd) = mean_sd(&x);
        let b = distort_forecasts(&x, DistortionKind::Bias, 0.5, s).unwrap();
        for (a, c) in x.iter().zip(&b) {
            assert!((c - a - 0.5 * sd).abs() < 1e-12);
        }
        let n = distort_forecasts(&x, DistortionKind::Noise, 0.25, s).unwrap();
        let diff: Vec<f64> = n.iter().zip(&x).map(|(a, b)| a - b).collect();
        let (_, dsd) = mean_sd(&diff);
        assert!((dsd * dsd / (0.25 * sd * sd) - 1.0).abs() < 0.1);
        assert!(distort_forecasts(&x, DistortionKind::Bias, 1.0, s).is_err());
        assert!(distort_forecasts(&x, DistortionKind::Noise, -0.1, s).is_err());
    }

    #[test]
    fn instrument_sets() {
        let p = simulate_dgp(&cfg(Dgp::HomoskedasticIid, 0.1, 40)).unwrap();
        let x = optimal_forecasts(&p, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            build_dataset(&p, x.clone(), InstrumentSet::Set1)
                .unwrap()
                .k(),
            1
        );
        assert_eq!(
            build_dataset(&p, x.clone(), InstrumentSet::Set2)
                .unwrap()
                .k(),
            2
        );
        let d3 = build_dataset(&p, x, InstrumentSet::Set3).unwrap();
        assert_eq!(d3.instrument_names(), ["const", "x", "z2"]);
        let p = simulate_dgp(&cfg(Dgp::ArGarch, 0.0, 40)).unwrap();
        let x = optimal_forecasts(&p, &[0.0, 0.0, 1.0]).unwrap();
        let d3 = build_dataset(&p, x, InstrumentSet::Set3).unwrap();
        assert_eq!(d3.instrument_names()[2], "y_lag");
    }
}
