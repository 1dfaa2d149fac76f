//! Identification-function weights `θ` implied by a forecast combination `β`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::dgp::{build_dataset, optimal_forecasts, simulate_path, DgpConfig, InstrumentSet};
use crate::bandwidth::bandwidth_rule_of_thumb;
use crate::central_tendency::{combined_moment, SimplexWeights};
use crate::error::{Error, Result};
use crate::identification::{stacked_moments, Functional, StackedMoments};
use crate::numerics::{Kernel, RandomStream};

/// Stream id reserved for the draws that resolve `θ`, distinct from any
/// replication index.
pub const IMPLIED_STREAM_ID: u64 = u64::MAX;

/// The set of `θ` whose combined moment has zero expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ImpliedTheta {
    Point {
        theta: SimplexWeights,
    },
    Segment {
        from: SimplexWeights,
        to: SimplexWeights,
    },
    /// Every `θ` (symmetric innovations: all measures coincide).
    Simplex,
}

impl ImpliedTheta {
    /// Point at which coverage is evaluated: the point itself, the midpoint
    /// of a segment, or `β` when the whole simplex is implied.
    pub fn evaluation_point(&self, beta: &[f64; 3]) -> SimplexWeights {
        match self {
            ImpliedTheta::Point { theta } => *theta,
            ImpliedTheta::Segment { from, to } => from.midpoint(to),
            ImpliedTheta::Simplex => SimplexWeights { theta: *beta },
        }
    }
}

/// The line through the median vertex on which `θ_Mean / θ_Mode` equals
/// `(Median ξ - Mode ξ) / (Mean ξ - Median ξ)`, for location-scale designs
/// with median forecasts. This treats each normalised identification
/// function as having the same slope in the forecast; the simulated route in
/// [`implied_theta`] does not rely on that approximation.
pub fn median_line_closed_form(centrality: [f64; 3]) -> Result<ImpliedTheta> {
    let [mean, median, mode] = centrality;
    if !(mean > median && median > mode) && !(mean < median && median < mode) {
        return Err(Error::domain(
            "median must lie strictly between mean and mode",
        ));
    }
    let ratio = (median - mode) / (mean - median);
    let edge = SimplexWeights {
        theta: [ratio / (1.0 + ratio), 0.0, 1.0 / (1.0 + ratio)],
    };
    Ok(ImpliedTheta::Segment {
        from: SimplexWeights::vertex(Functional::Median),
        to: edge,
    })
}

/// Stacked moments for `draws` simulated observations of `β`-forecasts, with
/// the bandwidth set by the rule of thumb at the design's sample size.
pub fn simulate_stacked(
    config: &DgpConfig,
    beta: &[f64; 3],
    draws: usize,
    set: InstrumentSet,
    kernel: Kernel,
    stream: RandomStream,
) -> Result<StackedMoments> {
    let mut big = *config;
    big.sample_size = draws;
    let path = simulate_path(&big, stream)?;
    let x = optimal_forecasts(&path, beta)?;
    let data = build_dataset(&path, x, set)?;
    let delta = bandwidth_rule_of_thumb(&data.forecast_errors(), config.sample_size)?.delta;
    stacked_moments(&data, delta, kernel)
}

/// Sample mean of `φ_t(θ)` and its Monte Carlo standard error, per component.
pub fn combined_moment_mean(
    theta: &SimplexWeights,
    stacked: &StackedMoments,
) -> (DVector<f64>, DVector<f64>) {
    let phi = combined_moment(theta, stacked);
    let n = phi.nrows() as f64;
    let mean: DVector<f64> = phi.row_sum().transpose() / n;
    let se = DVector::from_iterator(
        phi.ncols(),
        phi.column_iter().zip(mean.iter()).map(|(c, m)| {
            let var = c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        }),
    );
    (mean, se)
}

/// Zero set on the simplex of `θ ↦ Σ_r θ_r a_r`.
fn zero_set(a: [f64; 3]) -> ImpliedTheta {
    let mut pts: Vec<SimplexWeights> = Vec::new();
    for (r, &ar) in a.iter().enumerate() {
        if ar == 0.0 {
            let mut theta = [0.0; 3];
            theta[r] = 1.0;
            pts.push(SimplexWeights { theta });
        }
    }
    for r in 0..3 {
        for s in (r + 1)..3 {
            if a[r] * a[s] < 0.0 {
                let mut theta = [0.0; 3];
                theta[r] = a[s] / (a[s] - a[r]);
                theta[s] = 1.0 - theta[r];
                pts.push(SimplexWeights { theta });
            }
        }
    }
    match pts.len() {
        0 => {
            let best = (0..3)
                .min_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()))
                .expect("three");
            let mut theta = [0.0; 3];
            theta[best] = 1.0;
            ImpliedTheta::Point {
                theta: SimplexWeights { theta },
            }
        }
        1 => ImpliedTheta::Point { theta: pts[0] },
        3 => ImpliedTheta::Simplex,
        _ => ImpliedTheta::Segment {
            from: pts[0],
            to: pts[1],
        },
    }
}

/// Resolve the implied `θ` set for forecast weights `β` with instruments `(1, X_t)`.
pub fn implied_theta(config: &DgpConfig, beta: &[f64; 3], draws: usize) -> Result<ImpliedTheta> {
    implied_theta_with(config, beta, draws, InstrumentSet::Set2, Kernel::Gaussian)
}

/// Resolve the implied `θ` set.
///
/// Mean and mode forecasts map to their vertices, and symmetric innovations
/// to the whole simplex. Otherwise the expected normalised moments `E[ψ_r]`
/// are estimated from `draws` simulated observations, projected onto their
/// dominant direction, and the zero set of the resulting linear function on
/// the simplex is returned.
pub fn implied_theta_with(
    config: &DgpConfig,
    beta: &[f64; 3],
    draws: usize,
    set: InstrumentSet,
    kernel: Kernel,
) -> Result<ImpliedTheta> {
    if draws < 1000 {
        return Err(Error::domain("implied theta needs at least 1000 draws"));
    }
    let law = config.validate()?;
    if beta.iter().any(|b| !(*b >= 0.0)) || (beta.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "forecast weights {beta:?} are not on the unit simplex"
        )));
    }
    if law.skewness == 0.0 {
        return Ok(ImpliedTheta::Simplex);
    }
    for f in [Functional::Mean, Functional::Mode] {
        if beta[f.index()] == 1.0 {
            return Ok(ImpliedTheta::Point {
                theta: SimplexWeights::vertex(f),
            });
        }
    }
    let stacked = simulate_stacked(
        config,
        beta,
        draws,
        set,
        kernel,
        RandomStream::new(config.seed, IMPLIED_STREAM_ID),
    )?;
    let n = stacked.len() as f64;
    let g: Vec<DVector<f64>> = stacked
        .rows
        .iter()
        .map(|r| r.row_sum().transpose() / n)
        .collect();
    let k = stacked.k();
    let gmat = DMatrix::from_fn(k, 3, |i, r| g[r][i]);
    let eig = SymmetricEigen::new(&gmat * gmat.transpose());
    let lead = eig.eigenvalues.imax();
    let u = eig.eigenvectors.column(lead);
    let mut a = [u.dot(&g[0]), u.dot(&g[1]), u.dot(&g[2])];
    // a vertex forecast zeroes its own moment exactly; drop the sampling noise
    if beta[Functional::Median.index()] == 1.0 {
        a[Functional::Median.index()] = 0.0;
    }
    Ok(zero_set(a))
}
