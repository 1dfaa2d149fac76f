//! Inference on the whole class of central-tendency measures: convex
//! combinations `θ` of the normalised mean, median and mode moments, the
//! GMM objective `S_T(θ)`, and Stock–Wright confidence sets over a simplex grid.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandwidth::bandwidth_rule_of_thumb;
use crate::error::{Error, Result};
use crate::identification::{
    check_bandwidth, stacked_moments, ForecastDataset, Functional, StackedMoments,
};
use crate::numerics::{chi_square_critical, chi_square_sf, spd_quadratic_form, Kernel};

/// Default grid resolution: 1326 points.
pub const DEFAULT_GRID_RESOLUTION: usize = 50;

/// A point `(θ_Mean, θ_Med, θ_Mode)` on the unit simplex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexWeights {
    pub theta: [f64; 3],
}

impl SimplexWeights {
    pub fn new(mean: f64, median: f64, mode: f64) -> Result<Self> {
        let theta = [mean, median, mode];
        if theta.iter().any(|v| !(*v >= 0.0)) || (theta.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "weights {theta:?} are not on the unit simplex"
            )));
        }
        Ok(Self { theta })
    }

    pub fn vertex(f: Functional) -> Self {
        let mut theta = [0.0; 3];
        theta[f.index()] = 1.0;
        Self { theta }
    }

    pub fn mean(&self) -> f64 {
        self.theta[0]
    }

    pub fn median(&self) -> f64 {
        self.theta[1]
    }

    pub fn mode(&self) -> f64 {
        self.theta[2]
    }

    /// Midpoint of two simplex points.
    pub fn midpoint(&self, other: &Self) -> Self {
        Self {
            theta: [
                0.5 * (self.theta[0] + other.theta[0]),
                0.5 * (self.theta[1] + other.theta[1]),
                0.5 * (self.theta[2] + other.theta[2]),
            ],
        }
    }
}

/// All `θ = (i/m, j/m, (m-i-j)/m)`, `i, j ≥ 0`, `i + j ≤ m`, ordered by `i` then `j`.
pub fn simplex_grid(m: usize) -> Result<Vec<SimplexWeights>> {
    Ok(simplex_lattice(m)?.into_iter().map(|(_, _, w)| w).collect())
}

fn simplex_lattice(m: usize) -> Result<Vec<(usize, usize, SimplexWeights)>> {
    if m == 0 {
        return Err(Error::domain("grid resolution must be >= 1"));
    }
    let mf = m as f64;
    let mut out = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for i in 0..=m {
        for j in 0..=(m - i) {
            let theta = [i as f64 / mf, j as f64 / mf, (m - i - j) as f64 / mf];
            out.push((i, j, SimplexWeights { theta }));
        }
    }
    Ok(out)
}

/// `φ_t(θ) = θᵀ ψ_t` for every observation, as a `T×k` matrix.
pub fn combined_moment(theta: &SimplexWeights, stacked: &StackedMoments) -> DMatrix<f64> {
    let mut phi = &stacked.rows[0] * theta.theta[0];
    phi += &stacked.rows[1] * theta.theta[1];
    phi += &stacked.rows[2] * theta.theta[2];
    phi
}

/// Outer-product covariance of the combined moments.
///
/// Without clusters: `(1/T) Σ_t φ_t φ_tᵀ`. With clusters: `(1/T) Σ_c s_c s_cᵀ`
/// where `s_c` sums `φ_t` within cluster `c`.
pub fn sigma_hat(phi: &DMatrix<f64>, clusters: Option<&[i64]>) -> Result<DMatrix<f64>> {
    let t = phi.nrows();
    if t < 2 {
        return Err(Error::domain("covariance needs at least 2 observations"));
    }
    match clusters {
        None => Ok(phi.transpose() * phi / t as f64),
        Some(labels) => {
            if labels.len() != t {
                return Err(Error::domain("cluster labels must cover every observation"));
            }
            let k = phi.ncols();
            let mut sums: BTreeMap<i64, DVector<f64>> = BTreeMap::new();
            for (row, label) in labels.iter().enumerate() {
                let acc = sums.entry(*label).or_insert_with(|| DVector::zeros(k));
                *acc += phi.row(row).transpose();
            }
            let mut s = DMatrix::zeros(k, k);
            for v in sums.values() {
                s += v * v.transpose();
            }
            Ok(s / t as f64)
        }
    }
}

/// `S_T(θ)` from precomputed stacked moments.
pub fn objective_from_stacked(
    theta: &SimplexWeights,
    stacked: &StackedMoments,
    clusters: Option<&[i64]>,
) -> Result<f64> {
    let phi = combined_moment(theta, stacked);
    let t = phi.nrows() as f64;
    let sum: DVector<f64> = phi.row_sum().transpose();
    let sigma = sigma_hat(&phi, clusters)?;
    let q = spd_quadratic_form(&sigma, &sum)
        .map_err(|e| e.with_context(&format!("Sigma_T at theta {:?}", theta.theta)))?;
    Ok(q / t)
}

/// GMM objective `S_T(θ) = [T^{-1/2} Σ φ̂_t(θ)]ᵀ Σ̂_T(θ)⁻¹ [T^{-1/2} Σ φ̂_t(θ)]`.
pub fn gmm_objective(
    theta: &SimplexWeights,
    dataset: &ForecastDataset,
    delta: f64,
    kernel: Kernel,
    clusters: Option<&[i64]>,
) -> Result<f64> {
    let stacked = stacked_moments(dataset, delta, kernel)?;
    objective_from_stacked(theta, &stacked, clusters)
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    /// Lattice indices: `θ = (i/m, j/m, (m-i-j)/m)`.
    pub i: usize,
    pub j: usize,
    pub theta: SimplexWeights,
    /// `S_T(θ)`; `None` when `Σ̂_T(θ)` is singular.
    pub objective: Option<f64>,
    pub p_value: Option<f64>,
    /// Membership per entry of `alpha_levels`.
    pub members: Vec<bool>,
    pub diagnostic: Option<String>,
}

/// Confidence sets `{θ : S_T(θ) ≤ Q_k(1 - α)}` evaluated on a simplex grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceSetGrid {
    pub resolution: usize,
    pub k: usize,
    pub sample_size: usize,
    pub bandwidth: f64,
    pub kernel: Kernel,
    pub clustered: bool,
    pub alpha_levels: Vec<f64>,
    /// `Q_k(1 - α)` per level.
    pub thresholds: Vec<f64>,
    pub points: Vec<GridPoint>,
}

impl ConfidenceSetGrid {
    /// Whether the set at `alpha_levels[level]` is empty (rationality rejected
    /// for every measure of central tendency).
    pub fn is_empty_at(&self, level: usize) -> bool {
        !self.points.iter().any(|p| p.members[level])
    }

    pub fn member_count(&self, level: usize) -> usize {
        self.points.iter().filter(|p| p.members[level]).count()
    }

    /// The grid point at a vertex, if present.
    pub fn vertex(&self, f: Functional) -> Option<&GridPoint> {
        self.points.iter().find(|p| p.theta.theta[f.index()] == 1.0)
    }
}

/// Options for [`confidence_set`].
#[derive(Debug, Clone)]
pub struct ConfidenceSetOptions {
    pub resolution: usize,
    pub alpha_levels: Vec<f64>,
    /// Bandwidth override; rule of thumb otherwise.
    pub bandwidth: Option<f64>,
    pub kernel: Kernel,
    /// Use the dataset's cluster labels for `Σ̂_T`.
    pub clustered: bool,
}

impl Default for ConfidenceSetOptions {
    fn default() -> Self {
        Self {
            resolution: DEFAULT_GRID_RESOLUTION,
            alpha_levels: vec![0.10, 0.05],
            bandwidth: None,
            kernel: Kernel::Gaussian,
            clustered: false,
        }
    }
}

/// Evaluate `S_T` over the simplex grid and flag confidence-set membership.
///
/// Singular `Σ̂_T(θ)` at a point marks it as a non-member with a diagnostic;
/// the scan always completes.
pub fn confidence_set(
    dataset: &ForecastDataset,
    opts: &ConfidenceSetOptions,
) -> Result<ConfidenceSetGrid> {
    for &a in &opts.alpha_levels {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::domain(format!("alpha level {a} outside [0, 1]")));
        }
    }
    let delta = match opts.bandwidth {
        Some(d) => {
            check_bandwidth(d)?;
            d
        }
        None => bandwidth_rule_of_thumb(&dataset.forecast_errors(), dataset.len())?.delta,
    };
    let clusters = if opts.clustered {
        Some(dataset.cluster_labels().ok_or_else(|| {
            Error::domain("clustered covariance requested but dataset has no cluster labels")
        })?)
    } else {
        None
    };
    let k = dataset.k();
    let df = k as u32;
    let thresholds = opts
        .alpha_levels
        .iter()
        .map(|&a| chi_square_critical(df, a))
        .collect::<Result<Vec<_>>>()?;
    let stacked = stacked_moments(dataset, delta, opts.kernel)?;
    let lattice = simplex_lattice(opts.resolution)?;

    let points = lattice
        .into_par_iter()
        .map(
            |(i, j, theta)| match objective_from_stacked(&theta, &stacked, clusters) {
                Ok(s) => GridPoint {
                    i,
                    j,
                    theta,
                    objective: Some(s),
                    p_value: Some(chi_square_sf(df, s).unwrap_or(f64::NAN)),
                    members: thresholds.iter().map(|&q| s <= q).collect(),
                    diagnostic: None,
                },
                Err(e) => GridPoint {
                    i,
                    j,
                    theta,
                    objective: None,
                    p_value: None,
                    members: vec![false; thresholds.len()],
                    diagnostic: Some(e.to_string()),
                },
            },
        )
        .collect();

    Ok(ConfidenceSetGrid {
        resolution: opts.resolution,
        k,
        sample_size: dataset.len(),
        bandwidth: delta,
        kernel: opts.kernel,
        clustered: opts.clustered,
        alpha_levels: opts.alpha_levels.clone(),
        thresholds,
        points,
    })
}
