//! Differentiable smoothing kernels used by the mode identification function.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `1 / sqrt(2π)`
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A symmetric, first-order kernel with a continuous derivative.
///
/// The Gaussian kernel is the default: it has unbounded support, which the
/// mode identification function needs to be strict. The biweight kernel is
/// provided for comparison studies only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    #[default]
    Gaussian,
    Biweight,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::Gaussian => "gaussian",
            Kernel::Biweight => "biweight",
        }
    }

    /// `K(u)`
    #[inline]
    pub fn value(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => INV_SQRT_2PI * (-0.5 * u * u).exp(),
            Kernel::Biweight => {
                if u.abs() <= 1.0 {
                    let s = 1.0 - u * u;
                    15.0 / 16.0 * s * s
                } else {
                    0.0
                }
            }
        }
    }

    /// `K'(u)`
    #[inline]
    pub fn deriv(self, u: f64) -> f64 {
        match self {
            Kernel::Gaussian => -u * self.value(u),
            Kernel::Biweight => {
                if u.abs() <= 1.0 {
                    -15.0 / 4.0 * u * (1.0 - u * u)
                } else {
                    0.0
                }
            }
        }
    }

    /// `(K(u), K'(u))`, rejecting non-finite arguments.
    pub fn eval(self, u: f64) -> Result<(f64, f64)> {
        if !u.is_finite() {
            return Err(Error::domain(format!(
                "kernel argument must be finite, got {u}"
            )));
        }
        Ok((self.value(u), self.deriv(u)))
    }

    /// `∫ K'(u)² du`, the kernel constant in the mode-moment covariance.
    ///
    /// Gaussian: `1 / (4 √π)`. Biweight: `15 / 7`.
    pub fn deriv_sq_integral(self) -> f64 {
        match self {
            Kernel::Gaussian => 1.0 / (4.0 * PI.sqrt()),
            Kernel::Biweight => 15.0 / 7.0,
        }
    }

    /// Integration range outside of which the kernel is negligible (< 1e-22).
    pub fn effective_support(self) -> (f64, f64) {
        match self {
            Kernel::Gaussian => (-10.0, 10.0),
            Kernel::Biweight => (-1.0, 1.0),
        }
    }

    /// `sup |K'(u)|`
    pub fn deriv_sup(self) -> f64 {
        match self {
            // attained at u = ±1
            Kernel::Gaussian => INV_SQRT_2PI * (-0.5f64).exp(),
            // attained at u = ±1/√3
            Kernel::Biweight => 15.0 / 4.0 * (1.0 / 3.0f64.sqrt()) * (2.0 / 3.0),
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Kernel::Gaussian),
            "biweight" | "quartic" => Ok(Kernel::Biweight),
            other => Err(Error::domain(format!("unknown kernel {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate;

    fn central_diff(k: Kernel, u: f64) -> f64 {
        let h = 1e-6;
        (k.value(u + h) - k.value(u - h)) / (2.0 * h)
    }

    #[test]
    fn gaussian_values() {
        let (v, d) = Kernel::Gaussian.eval(0.0).unwrap();
        assert!((v - 0.398_942_3).abs() < 1e-7);
        assert_eq!(d, 0.0);
        let (v, d) = Kernel::Gaussian.eval(1.0).unwrap();
        assert!((v - 0.241_970_7).abs() < 1e-7);
        assert!((d + 0.241_970_7).abs() < 1e-7);
        assert!((d - central_diff(Kernel::Gaussian, 1.0)).abs() < 1e-8);
    }

    #[test]
    fn biweight_values() {
        let (v, d) = Kernel::Biweight.eval(0.0).unwrap();
        assert_eq!(v, 0.9375);
        assert_eq!(d, 0.0);
        assert_eq!(Kernel::Biweight.eval(1.5).unwrap(), (0.0, 0.0));
        for &u in &[-0.7, -0.2, 0.3, 0.9] {
            assert!((Kernel::Biweight.deriv(u) - central_diff(Kernel::Biweight, u)).abs() < 1e-7);
        }
    }

    #[test]
    fn non_finite_argument_rejected() {
        assert!(Kernel::Gaussian.eval(f64::NAN).is_err());
        assert!(Kernel::Biweight.eval(f64::INFINITY).is_err());
    }

    #[test]
    fn gaussian_derivative_is_odd() {
        for i in 0..200 {
            let u = -5.0 + 0.05 * i as f64;
            assert_eq!(Kernel::Gaussian.deriv(-u), -Kernel::Gaussian.deriv(u));
        }
    }

    #[test]
    fn first_order_kernel_conditions() {
        for k in [Kernel::Gaussian, Kernel::Biweight] {
            let (a, b) = k.effective_support();
            let mass = integrate(|u| k.value(u), a, b, 1e-12);
            let first = integrate(|u| u * k.value(u), a, b, 1e-12);
            assert!((mass - 1.0).abs() < 1e-8, "{k:?} mass {mass}");
            assert!(first.abs() < 1e-8, "{k:?} first moment {first}");
        }
    }

    #[test]
    fn deriv_sq_integral_matches_quadrature() {
        for (k, expected) in [
            (Kernel::Gaussian, 0.141_047_4),
            (Kernel::Biweight, 2.142_857_1),
        ] {
            let (a, b) = k.effective_support();
            let quad = integrate(|u| k.deriv(u).powi(2), a, b, 1e-12);
            assert!((k.deriv_sq_integral() - quad).abs() < 1e-8);
            assert!((k.deriv_sq_integral() - expected).abs() < 1e-7);
            assert!(k.deriv_sq_integral() > 0.0);
        }
    }

    #[test]
    fn deriv_sup_matches_grid_scan() {
        for k in [Kernel::Gaussian, Kernel::Biweight] {
            let scan = (0..=200_000)
                .map(|i| k.deriv(-2.0 + 4.0 * i as f64 / 200_000.0).abs())
                .fold(0.0, f64::max);
            assert!((scan - k.deriv_sup()).abs() < 1e-8);
        }
    }
}
