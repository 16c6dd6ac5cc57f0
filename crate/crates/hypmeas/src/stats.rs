//! Statistical helpers: goodness-of-fit statistics, Monte-Carlo error
//! bars, quantiles, and reference CDFs.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut worst = 0.0_f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let hi = (i as f64 + 1.0) / n - f;
        let lo = f - i as f64 / n;
        worst = worst.max(hi).max(lo);
    }
    worst
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(vals: &[f64]) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    if vals.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Standard error of a binomial fraction estimate.
pub fn binomial_stderr(p_hat: f64, n: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Empirical quantile (linear interpolation between order statistics).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[i]
    }
}

pub fn sorted_copy(vals: &[f64]) -> Vec<f64> {
    let mut v = vals.to_vec();
    v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Median with an order-statistic confidence interval at roughly the
/// three-sigma level.
pub fn median_with_ci(vals: &[f64]) -> (f64, (f64, f64)) {
    let sorted = sorted_copy(vals);
    let n = sorted.len();
    let med = quantile(&sorted, 0.5);
    let half_width = 1.5 * (n as f64).sqrt(); // 3 * sqrt(n)/2
    let lo_idx = ((n as f64 / 2.0 - half_width).floor().max(0.0)) as usize;
    let hi_idx = ((n as f64 / 2.0 + half_width).ceil() as usize).min(n - 1);
    (med, (sorted[lo_idx], sorted[hi_idx]))
}

/// Upper tail probability of the chi-squared distribution.
pub fn chi_squared_sf(stat: f64, dof: f64) -> Result<f64> {
    let dist = ChiSquared::new(dof)
        .map_err(|e| Error::domain(format!("chi-squared dof {dof}: {e}")))?;
    Ok(1.0 - dist.cdf(stat))
}

/// Standard Cauchy CDF.
pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / std::f64::consts::PI
}

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ks_of_exact_uniform_grid_is_small() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.0006, "ks {d}");
    }

    #[test]
    fn ks_detects_wrong_law() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i as f64 + 0.5) / 1000.0).powi(2)).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d > 0.2);
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_relative_eq!(quantile(&v, 0.5), 3.0);
        assert_relative_eq!(quantile(&v, 0.25), 2.0);
        assert_relative_eq!(quantile(&v, 1.0), 5.0);
    }

    #[test]
    fn chi_squared_tail() {
        // For dof = 1, P(X > 3.841) is about 0.05.
        let p = chi_squared_sf(3.841, 1.0).unwrap();
        assert!((p - 0.05).abs() < 0.001, "p {p}");
    }

    #[test]
    fn reference_cdfs() {
        assert_relative_eq!(cauchy_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_relative_eq!(cauchy_cdf(1.0), 0.75, epsilon = 1e-12);
        assert_relative_eq!(std_normal_cdf(0.0), 0.5, epsilon = 1e-12);
        assert_relative_eq!(std_normal_cdf(1.959964), 0.975, epsilon = 1e-6);
    }

    #[test]
    fn median_ci_brackets_median() {
        let vals: Vec<f64> = (0..10001).map(|i| i as f64).collect();
        let (med, (lo, hi)) = median_with_ci(&vals);
        assert_relative_eq!(med, 5000.0);
        assert!(lo < med && med < hi);
        assert!(hi - lo < 400.0);
    }
}
