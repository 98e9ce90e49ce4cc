//! Small numeric helpers shared across the crate.

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// log N(x; mean, sd^2).
#[inline]
pub fn normal_logpdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
}

/// log N(x; mean, var), parameterized by variance.
#[inline]
pub fn normal_logpdf_var(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * d * d / var - 0.5 * var.ln() - LN_SQRT_2PI
}

/// Log-normal density of `x > 0` where `ln x ~ N(location, scale^2)`.
#[inline]
pub fn lognormal_logpdf(x: f64, location: f64, scale: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let lx = x.ln();
    normal_logpdf(lx, location, scale) - lx
}

/// log Laplace(x; 0, b).
#[inline]
pub fn laplace_logpdf(x: f64, scale: f64) -> f64 {
    -x.abs() / scale - (2.0 * scale).ln()
}

/// P(B = 1) from log-odds, computed without overflow.
#[inline]
pub fn logistic(log_odds: f64) -> f64 {
    if log_odds >= 0.0 {
        1.0 / (1.0 + (-log_odds).exp())
    } else {
        let e = log_odds.exp();
        e / (1.0 + e)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with divisor `len - 1`.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Type-7 (linear interpolation) quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_density_at_mean() {
        let v = normal_logpdf(0.3, 0.3, 2.0);
        assert!((v - (1.0 / (2.0 * (2.0 * core::f64::consts::PI).sqrt())).ln()).abs() < 1e-14);
        assert!((normal_logpdf_var(1.0, 0.0, 4.0) - normal_logpdf(1.0, 0.0, 2.0)).abs() < 1e-14);
    }

    #[test]
    fn logistic_is_stable() {
        assert_eq!(logistic(1000.0), 1.0);
        assert_eq!(logistic(-1000.0), 0.0);
        assert!((logistic(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_eq!(quantile_sorted(&xs, 1.0), 4.0);
        assert!((quantile_sorted(&xs, 0.5) - 2.5).abs() < 1e-15);
    }
}
