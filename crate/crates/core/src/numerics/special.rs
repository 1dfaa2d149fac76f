//! Special functions: log-gamma, regularized incomplete gamma, the χ²
//! survival function and quantile, and the normal CDF.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

fn lower_series(a: f64, x: f64) -> f64 {
    // P(a, x) by its power series; converges fast for x < a + 1
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..MAX_ITER {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn upper_fraction(a: f64, x: f64) -> f64 {
    // Q(a, x) by the modified Lentz continued fraction; valid for x >= a + 1
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_fraction(a, x)
    }
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_fraction(a, x)
    }
}

/// Complementary error function, via `erfc(x) = Q(1/2, x²)` for `x ≥ 0`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        gamma_q(0.5, x * x)
    } else {
        2.0 - gamma_q(0.5, x * x)
    }
}

/// Standard normal CDF `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Standard normal density `φ(x)`.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `P(χ²_df > x)`.
pub fn chi_square_sf(df: u32, x: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::domain("chi-square degrees of freedom must be >= 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "chi-square argument must be >= 0, got {x}"
        )));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(gamma_q(0.5 * df as f64, 0.5 * x).clamp(0.0, 1.0))
}

/// The `p`-quantile of `χ²_df`, i.e. `x` with `P(χ²_df ≤ x) = p`.
pub fn chi_square_quantile(df: u32, p: f64) -> Result<f64> {
    if df == 0 {
        return Err(Error::domain("chi-square degrees of freedom must be >= 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "quantile level must lie in (0, 1), got {p}"
        )));
    }
    let a = 0.5 * df as f64;
    let target = 1.0 - p;
    // Work on whichever tail is better conditioned.
    let residual = |x: f64| {
        if p < 0.5 {
            gamma_p(a, 0.5 * x) - p
        } else {
            target - gamma_q(a, 0.5 * x)
        }
    };
    let mut hi = df as f64 + 10.0;
    while residual(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Threshold `Q_k(1 - α)` used for level-α decisions; `+∞` at `α = 0` and
/// `0` at `α = 1`.
pub fn chi_square_critical(df: u32, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "alpha must lie in [0, 1], got {alpha}"
        )));
    }
    if alpha == 0.0 {
        Ok(f64::INFINITY)
    } else if alpha == 1.0 {
        Ok(0.0)
    } else {
        chi_square_quantile(df, 1.0 - alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
        assert!((ln_gamma(10.0) - 362_880f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sf_edges_and_errors() {
        assert_eq!(chi_square_sf(2, 0.0).unwrap(), 1.0);
        assert!(chi_square_sf(0, 1.0).is_err());
        assert!(chi_square_sf(1, -0.1).is_err());
        assert_eq!(chi_square_sf(3, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn df_two_is_exponential() {
        for &x in &[0.1, 1.0, 5.991_465, 20.0, 80.0] {
            assert!((chi_square_sf(2, x).unwrap() - (-x / 2.0).exp()).abs() < 1e-14);
        }
    }

    #[test]
    fn quantile_errors() {
        assert!(chi_square_quantile(1, 0.0).is_err());
        assert!(chi_square_quantile(1, 1.0).is_err());
        assert!(chi_square_quantile(0, 0.5).is_err());
    }

    #[test]
    fn critical_value_limits() {
        assert_eq!(chi_square_critical(2, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(chi_square_critical(2, 1.0).unwrap(), 0.0);
        assert!((chi_square_critical(2, 0.05).unwrap() - 5.991_464_547).abs() < 1e-8);
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959_963_984_540_054) - 0.975).abs() < 1e-13);
        assert!((normal_cdf(-3.0) - 0.001_349_898_031_630_094_6).abs() < 1e-15);
    }
}
