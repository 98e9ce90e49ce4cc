//! Univariate slice sampling with stepping out and shrinkage.

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::Rng;

/// Why a slice update could not produce a draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceFailure {
    /// The log density at the current point is not finite.
    NonFinite,
    /// Shrinkage did not find an acceptable point within the step budget.
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceTuning {
    /// Initial bracket width.
    pub width: f64,
    /// Bound on stepping-out expansions and on shrinkage iterations.
    pub max_steps: usize,
}

impl Default for SliceTuning {
    fn default() -> Self {
        SliceTuning {
            width: 1.0,
            max_steps: 100,
        }
    }
}

/// One slice-sampling transition from `x0` for the unnormalized log density
/// `log_f`. Leaves the target invariant.
pub fn slice_sample<R, F>(x0: f64, log_f: F, tuning: SliceTuning, rng: &mut R) -> Result<f64, SliceFailure>
where
    R: Rng + ?Sized,
    F: Fn(f64) -> f64,
{
    let f0 = log_f(x0);
    if !f0.is_finite() {
        return Err(SliceFailure::NonFinite);
    }
    let w = tuning.width;
    let m = tuning.max_steps.max(1);
    // log of a uniform draw on (0, 1]
    let level = f0 + (1.0 - rng.random::<f64>()).ln();

    let mut left = x0 - w * rng.random::<f64>();
    let mut right = left + w;
    let mut j = (m as f64 * rng.random::<f64>()).floor() as usize;
    let mut k = (m - 1).saturating_sub(j);
    while j > 0 && log_f(left) > level {
        left -= w;
        j -= 1;
    }
    while k > 0 && log_f(right) > level {
        right += w;
        k -= 1;
    }

    for _ in 0..m {
        let x1 = left + rng.random::<f64>() * (right - left);
        if log_f(x1) > level {
            return Ok(x1);
        }
        if x1 < x0 {
            left = x1;
        } else {
            right = x1;
        }
    }
    Err(SliceFailure::Exhausted)
}
