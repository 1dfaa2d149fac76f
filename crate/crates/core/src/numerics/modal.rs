//! Generalized modal midpoint: the minimiser of the expected kernel loss
//! `-(1/δ) K((x - Y)/δ)` for a known density. Used to check numerically that
//! it converges to the mode as the bandwidth shrinks.

use super::kernel::Kernel;
use super::quadrature::integrate;
use crate::error::{Error, Result};

const GRID_POINTS: usize = 800;
const QUAD_TOL: f64 = 1e-12;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Expected kernel loss `E[-(1/δ) K((x - Y)/δ)]` for `Y` with density `f` on `support`.
pub fn smoothed_loss<F: Fn(f64) -> f64>(
    f: &F,
    support: (f64, f64),
    delta: f64,
    kernel: Kernel,
    x: f64,
) -> f64 {
    let (ka, kb) = kernel.effective_support();
    // y = x - δu  ⇒  u ∈ [ka, kb]  ⇔  y ∈ [x - δ kb, x - δ ka]
    let lo = support.0.max(x - delta * kb);
    let hi = support.1.min(x - delta * ka);
    if lo >= hi {
        return 0.0;
    }
    -integrate(|y| kernel.value((x - y) / delta) * f(y), lo, hi, QUAD_TOL) / delta
}

/// Derivative in `x` of [`smoothed_loss`], i.e. the expected identification
/// function `E[-(1/δ²) K'((x - Y)/δ)]`.
pub fn smoothed_identification<F: Fn(f64) -> f64>(
    f: &F,
    support: (f64, f64),
    delta: f64,
    kernel: Kernel,
    x: f64,
) -> f64 {
    let (ka, kb) = kernel.effective_support();
    let lo = support.0.max(x - delta * kb);
    let hi = support.1.min(x - delta * ka);
    if lo >= hi {
        return 0.0;
    }
    -integrate(|y| kernel.deriv((x - y) / delta) * f(y), lo, hi, QUAD_TOL) / (delta * delta)
}

/// Minimiser of the smoothed loss over `support`.
///
/// A coarse grid locates the basin, golden-section search narrows it, and a
/// final bisection on the sign of the derivative pins the root.
pub fn generalized_modal_midpoint<F: Fn(f64) -> f64>(
    density: F,
    support: (f64, f64),
    delta: f64,
    kernel: Kernel,
) -> Result<f64> {
    let (a, b) = support;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::domain(format!("invalid support [{a}, {b}]")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!(
            "bandwidth must be positive, got {delta}"
        )));
    }
    let mass = integrate(&density, a, b, 1e-12);
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::domain(format!(
            "density integrates to {mass}, not 1"
        )));
    }

    let loss = |x: f64| smoothed_loss(&density, support, delta, kernel, x);
    let step = (b - a) / GRID_POINTS as f64;
    let (best, _) = (0..=GRID_POINTS)
        .map(|i| {
            let x = a + step * i as f64;
            (i, loss(x))
        })
        .fold(
            (0, f64::INFINITY),
            |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
        );

    let mut lo = a + step * best.saturating_sub(1) as f64;
    let mut hi = (a + step * (best + 1) as f64).min(b);

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (loss(x1), loss(x2));
    while hi - lo > 1e-6 * step.max(1e-3) {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = loss(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = loss(x2);
        }
    }

    // The derivative is increasing through the minimiser; widen until it brackets.
    let ident = |x: f64| smoothed_identification(&density, support, delta, kernel, x);
    let width = (hi - lo).max(1e-9);
    let (mut lo, mut hi) = (lo - width, hi + width);
    let mut tries = 0;
    while !(ident(lo) <= 0.0 && ident(hi) >= 0.0) && tries < 40 {
        lo -= step;
        hi += step;
        tries += 1;
    }
    if tries == 40 {
        return Ok(0.5 * (lo + hi));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ident(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::normal_pdf;

    #[test]
    fn symmetric_density_gives_center() {
        for &delta in &[0.5, 0.2, 0.1, 0.05] {
            let g = generalized_modal_midpoint(normal_pdf, (-12.0, 12.0), delta, Kernel::Gaussian)
                .unwrap();
            assert!(g.abs() < 1e-6, "delta {delta}: {g}");
        }
    }

    #[test]
    fn translation_equivariant() {
        let g = generalized_modal_midpoint(
            |y| normal_pdf(y - 3.0),
            (-9.0, 15.0),
            0.5,
            Kernel::Gaussian,
        )
        .unwrap();
        assert!((g - 3.0).abs() < 1e-6);
    }

    #[test]
    fn symmetric_logistic_with_biweight() {
        let logistic = |y: f64| {
            let e = (-y.abs()).exp();
            e / (1.0 + e).powi(2)
        };
        let g = generalized_modal_midpoint(logistic, (-40.0, 40.0), 0.3, Kernel::Biweight).unwrap();
        assert!(g.abs() < 1e-6);
    }

    #[test]
    fn rejects_unnormalised_density() {
        let r = generalized_modal_midpoint(
            |y| 2.0 * normal_pdf(y),
            (-12.0, 12.0),
            0.5,
            Kernel::Gaussian,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
        assert!(
            generalized_modal_midpoint(normal_pdf, (-12.0, 12.0), 0.0, Kernel::Gaussian).is_err()
        );
    }
}
