//! Numerical building blocks shared by every other module.

pub mod kernel;
pub mod linalg;
pub mod modal;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use kernel::Kernel;
pub use linalg::{inverse_sqrt_spd, spd_inverse, spd_quadratic_form, EIGEN_RELATIVE_THRESHOLD};
pub use modal::generalized_modal_midpoint;
pub use quadrature::integrate;
pub use rng::RandomStream;
pub use special::{
    chi_square_critical, chi_square_quantile, chi_square_sf, normal_cdf, normal_pdf,
};

/// Median with the even-length convention (average of the middle pair).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Mean and standard deviation with the `1/n` divisor.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
