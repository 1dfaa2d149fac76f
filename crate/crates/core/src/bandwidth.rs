//! Rule-of-thumb bandwidth `δ_T = k₁ · k₂ · T^{-0.143}` for the mode
//! identification function, with `k₁` a scaled median absolute deviation of
//! the forecast errors and `k₂` shrinking the bandwidth under skewness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mean_sd, median};

/// Rate exponent (close to the optimal 1/7).
pub const RATE_EXPONENT: f64 = 0.143;
/// Multiplier on the median absolute deviation.
pub const MAD_SCALE: f64 = 2.4;
/// Skewness penalty in `k₂ = exp(-3 |γ̂|)`.
pub const SKEW_PENALTY: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthReport {
    pub delta: f64,
    pub k1: f64,
    pub k2: f64,
    pub skewness_hat: f64,
    pub mad: f64,
    pub sample_size: usize,
}

/// `Med_t |ε_t - Med_s ε_s|`.
pub fn median_abs_deviation(errors: &[f64]) -> Result<f64> {
    let center = median(errors)
        .ok_or_else(|| Error::domain("median absolute deviation of an empty vector"))?;
    let dev: Vec<f64> = errors.iter().map(|e| (e - center).abs()).collect();
    Ok(median(&dev).expect("non-empty"))
}

/// Pearson's second skewness coefficient `3 (mean - median) / σ̂`, `σ̂` with the `1/T` divisor.
pub fn pearson_second_skewness(errors: &[f64]) -> Result<f64> {
    let med = median(errors).ok_or_else(|| Error::domain("skewness of an empty vector"))?;
    let (mean, sd) = mean_sd(errors);
    if !(sd > 0.0) {
        return Err(Error::DegenerateErrors(
            "forecast errors have zero standard deviation".into(),
        ));
    }
    Ok(3.0 * (mean - med) / sd)
}

/// Rule-of-thumb bandwidth for forecast errors `errors` at sample size `sample_size`.
pub fn bandwidth_rule_of_thumb(errors: &[f64], sample_size: usize) -> Result<BandwidthReport> {
    if sample_size < 2 || errors.len() < 2 {
        return Err(Error::domain(
            "bandwidth rule needs at least 2 observations",
        ));
    }
    let mad = median_abs_deviation(errors)?;
    if !(mad > 0.0) {
        return Err(Error::DegenerateErrors(
            "median absolute deviation of forecast errors is zero".into(),
        ));
    }
    let skewness_hat = pearson_second_skewness(errors)?;
    let k1 = MAD_SCALE * mad;
    let k2 = (-SKEW_PENALTY * skewness_hat.abs()).exp();
    let delta = k1 * k2 * (sample_size as f64).powf(-RATE_EXPONENT);
    Ok(BandwidthReport {
        delta,
        k1,
        k2,
        skewness_hat,
        mad,
        sample_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mad_examples() {
        assert_eq!(median_abs_deviation(&[-1.0, 0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(median_abs_deviation(&[2.5; 4]).unwrap(), 0.0);
        assert_eq!(median_abs_deviation(&[0.0, 0.0, 3.0]).unwrap(), 0.0);
        // even length: median of (1,2,3,10) is 2.5; deviations (1.5,0.5,0.5,7.5) -> 1.0
        assert_eq!(median_abs_deviation(&[1.0, 2.0, 3.0, 10.0]).unwrap(), 1.0);
        assert!(median_abs_deviation(&[]).is_err());
    }

    #[test]
    fn skewness_examples() {
        assert_eq!(pearson_second_skewness(&[-1.0, 0.0, 1.0]).unwrap(), 0.0);
        let g = pearson_second_skewness(&[0.0, 0.0, 3.0]).unwrap();
        assert!((g - 2.121_320_3).abs() < 1e-7);
        assert!(matches!(
            pearson_second_skewness(&[1.0, 1.0]),
            Err(Error::DegenerateErrors(_))
        ));
    }

    #[test]
    fn rule_of_thumb_example() {
        let r = bandwidth_rule_of_thumb(&[-1.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(r.k1, 2.4);
        assert_eq!(r.k2, 1.0);
        // 2.4 · 3^(-0.143) evaluated at 30 digits
        assert!((r.delta - 2.051_081_428_334_805).abs() < 1e-12);
    }

    #[test]
    fn constant_errors_are_degenerate() {
        assert!(matches!(
            bandwidth_rule_of_thumb(&[0.5; 10], 10),
            Err(Error::DegenerateErrors(_))
        ));
        // MAD zero despite positive variance
        assert!(matches!(
            bandwidth_rule_of_thumb(&[0.0, 0.0, 3.0], 3),
            Err(Error::DegenerateErrors(_))
        ));
    }

    proptest! {
        #[test]
        fn positively_homogeneous(errs in prop::collection::vec(-10.0f64..10.0, 5..80), c in 0.01f64..100.0) {
            if let Ok(a) = bandwidth_rule_of_thumb(&errs, errs.len()) {
                let scaled: Vec<f64> = errs.iter().map(|e| c * e).collect();
                let b = bandwidth_rule_of_thumb(&scaled, errs.len()).unwrap();
                prop_assert!((b.delta - c * a.delta).abs() <= 1e-12 * b.delta.abs().max(1e-300));
                prop_assert!((b.skewness_hat - a.skewness_hat).abs() < 1e-10);
            }
        }

        #[test]
        fn monotone_in_sample_size(errs in prop::collection::vec(-10.0f64..10.0, 5..40), t in 2usize..10_000) {
            if let Ok(a) = bandwidth_rule_of_thumb(&errs, t) {
                let b = bandwidth_rule_of_thumb(&errs, t + 1).unwrap();
                prop_assert!(b.delta < a.delta);
                prop_assert!(a.k2 <= 1.0 && a.k2 > 0.0);
                prop_assert_eq!(a.k2 == 1.0, a.skewness_hat == 0.0);
            }
        }
    }
}
