//! Closed-form concentration machinery for alpha-concave measures.
//!
//! The rate function bounds the measure of a dilated set from below in
//! terms of the original measure; solving the same algebra in the other
//! direction gives the dilation lower bound. The modulus of regularity of
//! a function converts these set-level inequalities into large/small
//! deviation bounds with explicit constants; for seminorms the modulus is
//! `2 eps / (1 + eps)` exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alpha::AlphaParam;
use crate::error::{Error, Result};
use crate::linalg::lerp_point;

/// Validated parameter triple for the rate-function algebra.
#[derive(Debug, Clone, Copy)]
pub struct RateParams {
    pub alpha: f64,
    pub delta: f64,
    pub p: f64,
}

impl RateParams {
    pub fn new(alpha: AlphaParam, delta: f64, p: f64) -> Result<Self> {
        let alpha = finite_alpha(alpha)?;
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!("delta must lie in [0, 1], got {delta}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(RateParams { alpha, delta, p })
    }
}

/// The rate function: sharp lower bound on the measure of the
/// delta-dilation of a set of measure `p` under an alpha-concave law.
///
/// For `alpha < 0` and `alpha in (0, 1]` this is
/// `1 - [((1-p)^alpha - (1-delta))/delta]^(1/alpha)` (clamped to 1 where
/// the bracket leaves its domain for positive alpha); the `alpha = 0`
/// limit is `1 - (1-p)^(1/delta)`. The boundary conventions: at
/// `delta = 0` the value jumps to 1 for any `p > 0`; at `delta = 1` the
/// continuity value is `p`.
pub fn rate_function(alpha: AlphaParam, delta: f64, p: f64) -> Result<f64> {
    let params = RateParams::new(alpha, delta, p)?;
    let (a, delta, p) = (params.alpha, params.delta, params.p);
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    if delta == 0.0 {
        return Ok(1.0);
    }
    if delta == 1.0 {
        return Ok(p);
    }
    if a == 0.0 {
        return Ok(1.0 - (1.0 - p).powf(1.0 / delta));
    }
    if a > 0.0 {
        let cap = 1.0 - (1.0 - delta).powf(1.0 / a);
        if p >= cap {
            return Ok(1.0);
        }
    }
    let bracket = ((1.0 - p).powf(a) - (1.0 - delta)) / delta;
    Ok(1.0 - bracket.powf(1.0 / a))
}

/// Lower bound on the measure of a set in terms of the outer measure `q`
/// of its delta-contraction: `[delta q^alpha + (1 - delta)]^(1/alpha)`
/// (limit `q^delta` at `alpha = 0`); algebraically inverse to
/// [`rate_function`] under complementation.
pub fn dilation_lower_bound(alpha: AlphaParam, delta: f64, q: f64) -> Result<f64> {
    let a = finite_alpha(alpha)?;
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!("delta must lie in [0, 1], got {delta}")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("q must lie in (0, 1], got {q}")));
    }
    if delta == 1.0 {
        return Ok(q);
    }
    if a == 0.0 {
        return Ok(q.powf(delta));
    }
    Ok((delta * q.powf(a) + (1.0 - delta)).powf(1.0 / a))
}

/// Named entry point for the function-level deviation inequality: the
/// same algebra as [`dilation_lower_bound`] with `delta` a modulus value.
pub fn deviation_inequality_rhs(alpha: AlphaParam, modulus: f64, q: f64) -> Result<f64> {
    if q == 1.0 {
        return Ok(1.0);
    }
    dilation_lower_bound(alpha, modulus, q)
}

/// Modulus of regularity of a seminorm: `2 eps / (1 + eps)`.
pub fn modulus_seminorm(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(2.0 * eps / (1.0 + eps))
}

/// Upper bound on the median-scaled tail `mu{|u| >= m r}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LargeDeviationBound {
    /// The tight form `[1 + (2^-alpha - 1)/modulus]^(1/alpha)`
    /// (`2^(-1/modulus)` at alpha = 0).
    pub bound: f64,
    /// The simplified product form `C_alpha modulus^(-1/alpha)` available
    /// for negative alpha, with `C_alpha = (2^-alpha - 1)^(1/alpha)`.
    pub simplified: Option<f64>,
}

pub fn large_deviation_bound(
    alpha: AlphaParam,
    modulus_at_inv_r: f64,
    r: f64,
) -> Result<LargeDeviationBound> {
    let a = finite_alpha(alpha)?;
    if !(r > 1.0) {
        return Err(Error::domain(format!("r must exceed 1, got {r}")));
    }
    if !(modulus_at_inv_r > 0.0 && modulus_at_inv_r <= 1.0) {
        return Err(Error::domain(format!(
            "modulus must lie in (0, 1], got {modulus_at_inv_r}"
        )));
    }
    let d = modulus_at_inv_r;
    if a == 0.0 {
        return Ok(LargeDeviationBound { bound: (2.0_f64).powf(-1.0 / d), simplified: None });
    }
    let inner = 1.0 + ((2.0_f64).powf(-a) - 1.0) / d;
    let bound = if a > 0.0 {
        // For positive alpha a negative bracket means no tail mass is
        // admissible at all.
        inner.max(0.0).powf(1.0 / a)
    } else {
        inner.powf(1.0 / a)
    };
    let simplified = if a < 0.0 {
        let c = ((2.0_f64).powf(-a) - 1.0).powf(1.0 / a);
        Some(c * d.powf(-1.0 / a))
    } else {
        None
    };
    Ok(LargeDeviationBound { bound, simplified })
}

/// Constant of the small-deviation bound: `(2^-alpha - 1)/(-alpha)`,
/// with the limit `ln 2` at `alpha = 0`.
pub fn small_deviation_constant(alpha: AlphaParam) -> Result<f64> {
    let a = finite_alpha(alpha)?;
    if a == 0.0 {
        return Ok(std::f64::consts::LN_2);
    }
    Ok(((2.0_f64).powf(-a) - 1.0) / (-a))
}

/// Upper bound on `mu{|u| <= m eps}`: the constant times the modulus.
pub fn small_deviation_bound(alpha: AlphaParam, modulus_at_eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&modulus_at_eps) {
        return Err(Error::domain(format!(
            "modulus must lie in [0, 1], got {modulus_at_eps}"
        )));
    }
    Ok(small_deviation_constant(alpha)? * modulus_at_eps)
}

/// Solved upper bound on `1 - mu(rB)` for a symmetric convex `B`:
/// `(1-p)^((r+1)/2)` at alpha = 0 with `p = mu(B)`; for positive alpha
/// `max{(r+1)/2 (1-p)^alpha - (r-1)/2, 0}^(1/alpha)`; for negative alpha
/// the same bracket without clamping.
pub fn norm_tail_bound(alpha: AlphaParam, mu_b: f64, r: f64) -> Result<f64> {
    let a = finite_alpha(alpha)?;
    if !(0.0..=1.0).contains(&mu_b) {
        return Err(Error::domain(format!("mu(B) must lie in [0, 1], got {mu_b}")));
    }
    if !(r > 1.0) {
        return Err(Error::domain(format!("r must exceed 1, got {r}")));
    }
    let q = 1.0 - mu_b;
    if a == 0.0 {
        return Ok(q.powf(0.5 * (r + 1.0)));
    }
    let bracket = 0.5 * (r + 1.0) * q.powf(a) - 0.5 * (r - 1.0);
    if a > 0.0 {
        return Ok(bracket.max(0.0).powf(1.0 / a));
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok(bracket.powf(1.0 / a))
}

/// Both sides of the raw norm-tail relation
/// `1 - mu(B) >= [2/(r+1) (1 - mu(rB))^alpha + (r-1)/(r+1)]^(1/alpha)`,
/// for property tests against the solved form.
pub fn norm_tail_raw_relation(
    alpha: AlphaParam,
    mu_b: f64,
    mu_rb: f64,
    r: f64,
) -> Result<(f64, f64)> {
    let a = finite_alpha(alpha)?;
    if !(r > 1.0) {
        return Err(Error::domain(format!("r must exceed 1, got {r}")));
    }
    let lhs = 1.0 - mu_b;
    let q = 1.0 - mu_rb;
    let rhs = if a == 0.0 {
        q.powf(2.0 / (r + 1.0))
    } else if q == 0.0 && a < 0.0 {
        ((r - 1.0) / (r + 1.0)).powf(1.0 / a)
    } else {
        (2.0 / (r + 1.0) * q.powf(a) + (r - 1.0) / (r + 1.0)).powf(1.0 / a)
    };
    Ok((lhs, rhs))
}

/// Small-ball bound `mu(eps B) <= C_alpha eps` for symmetric convex `B`
/// with `mu(B) <= 1/2`, `C_alpha = 2 (2^-alpha - 1)/(-alpha)` (limit
/// `2 ln 2` at alpha = 0). The measure hypothesis on `B` is the caller's
/// responsibility.
pub fn small_ball_bound(alpha: AlphaParam, eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::domain(format!("eps must lie in [0, 1], got {eps}")));
    }
    Ok(2.0 * small_deviation_constant(alpha)? * eps)
}

fn finite_alpha(alpha: AlphaParam) -> Result<f64> {
    alpha
        .as_finite()
        .ok_or_else(|| Error::domain("this bound requires a finite alpha (alpha > -inf)"))
}

// ---------------------------------------------------------------------------
// Modulus of regularity, estimated
// ---------------------------------------------------------------------------

/// How a modulus value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModulusMethod {
    ClosedFormSeminorm,
    BruteForce,
}

/// Estimated (or exact) modulus of regularity at one `eps`.
#[derive(Debug, Clone, Serialize)]
pub struct ModulusEstimate {
    pub epsilon: f64,
    pub value: f64,
    pub method: ModulusMethod,
    /// Pair attaining the supremum, when tracked.
    pub witnesses: Option<(Vec<f64>, Vec<f64>)>,
}

/// Search budget for [`estimate_modulus`].
#[derive(Debug, Clone, Copy)]
pub struct ModulusBudget {
    pub pairs: usize,
}

const MODULUS_GRID: usize = 512;

/// Measure of `{t in (0,1) : f(t) <= threshold}` by grid classification
/// with bisection-refined boundaries. The function is not assumed
/// monotone; the sublevel set is assembled as a union of intervals whose
/// endpoints are resolved to 1e-12.
fn sublevel_measure<F: Fn(f64) -> f64>(f: F, threshold: f64) -> f64 {
    let n = MODULUS_GRID;
    let g = |t: f64| f(t) - threshold;
    let h = 1.0 / n as f64;
    let mut total = 0.0;
    let mut prev_t = 0.0;
    let mut prev_in = g(0.0) <= 0.0;
    for i in 1..=n {
        let t = i as f64 * h;
        let now_in = g(t) <= 0.0;
        if now_in && prev_in {
            total += t - prev_t;
        } else if now_in != prev_in {
            // Refine the boundary of the sublevel region.
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..45 {
                let mid = 0.5 * (lo + hi);
                if (g(mid) <= 0.0) == prev_in {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let crossing = 0.5 * (lo + hi);
            if prev_in {
                total += crossing - prev_t;
            } else {
                total += t - crossing;
            }
        }
        prev_t = t;
        prev_in = now_in;
    }
    total.clamp(0.0, 1.0)
}

/// Brute-force modulus of regularity
/// `sup mes{t : |u((1-t)x + ty)| <= eps |u(x)|}` over sampled pairs plus
/// the structured opposite-ray pairs `y = -x` and `y = -eps x` (the
/// latter attains the seminorm value exactly).
pub fn estimate_modulus<U, S>(
    u: U,
    mut sample_point: S,
    eps: f64,
    budget: ModulusBudget,
    seed: u64,
) -> Result<ModulusEstimate>
where
    U: Fn(&[f64]) -> f64,
    S: FnMut(&mut ChaCha8Rng) -> Vec<f64>,
{
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("eps must lie in (0, 1], got {eps}")));
    }
    if budget.pairs == 0 {
        return Err(Error::budget("modulus estimation needs at least one pair"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    let mut witnesses = None;
    let mut skipped = 0usize;
    let mut attempts = 0usize;
    for _ in 0..budget.pairs {
        let x = sample_point(&mut rng);
        let ux = u(&x).abs();
        if !ux.is_finite() {
            skipped += 3;
            attempts += 3;
            continue;
        }
        let ys = [
            sample_point(&mut rng),
            crate::linalg::scale(&x, -1.0),
            crate::linalg::scale(&x, -eps),
        ];
        for y in ys {
            attempts += 1;
            if y == x {
                skipped += 1;
                continue;
            }
            let m = sublevel_measure(|t| u(&lerp_point(&x, &y, t)).abs(), eps * ux);
            if m > best {
                best = m;
                witnesses = Some((x.clone(), y));
            }
        }
    }
    if best == f64::NEG_INFINITY || skipped == attempts {
        return Err(Error::budget("all modulus pairs were skipped"));
    }
    Ok(ModulusEstimate {
        epsilon: eps,
        value: best.clamp(0.0, 1.0),
        method: ModulusMethod::BruteForce,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;
    use approx::assert_relative_eq;
    use rand_distr::StandardNormal;

    fn alpha(v: f64) -> AlphaParam {
        AlphaParam::new(v).unwrap()
    }

    #[test]
    fn rate_log_concave_case() {
        assert_relative_eq!(
            rate_function(alpha(0.0), 0.5, 0.5).unwrap(),
            0.75,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rate_endpoints_exact() {
        for a in [-3.0, -1.0, -0.1, 0.0, 0.3, 1.0] {
            for d in [0.0, 0.2, 0.7, 1.0] {
                assert_eq!(rate_function(alpha(a), d, 0.0).unwrap(), 0.0);
                assert_eq!(rate_function(alpha(a), d, 1.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn rate_cauchy_closed_form_grid() {
        for i in 1..30 {
            for j in 1..30 {
                let d = i as f64 / 30.0;
                let p = j as f64 / 30.0;
                let got = rate_function(alpha(-1.0), d, p).unwrap();
                let expect = p / (1.0 - (1.0 - d) * (1.0 - p));
                assert!(
                    (got - expect).abs() <= 1e-12 * expect.max(1.0),
                    "delta {d}, p {p}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn rate_example_minus_one() {
        assert_relative_eq!(
            rate_function(alpha(-1.0), 0.5, 0.5).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn rate_lebesgue_case_is_clamped_ratio() {
        // alpha = 1 gives min(p/delta, 1).
        for (d, p, expect) in [(0.2, 0.1, 0.5), (0.2, 0.3, 1.0), (0.5, 0.25, 0.5)] {
            assert_relative_eq!(
                rate_function(alpha(1.0), d, p).unwrap(),
                expect,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rate_delta_conventions() {
        assert_eq!(rate_function(alpha(-1.0), 0.0, 0.5).unwrap(), 1.0);
        assert_eq!(rate_function(alpha(-1.0), 0.0, 0.0).unwrap(), 0.0);
        assert_relative_eq!(rate_function(alpha(-1.0), 1.0, 0.37).unwrap(), 0.37);
    }

    #[test]
    fn rate_monotone_and_concave_in_p() {
        for &a in &[-5.0, -1.0, -0.3, 0.0, 0.25, 1.0] {
            for i in 1..20 {
                let d = i as f64 / 20.0;
                let grid: Vec<f64> =
                    (0..=40).map(|k| rate_function(alpha(a), d, k as f64 / 40.0).unwrap()).collect();
                for w in grid.windows(2) {
                    assert!(w[1] >= w[0] - 1e-12, "alpha {a} delta {d}: not nondecreasing");
                }
                for k in 1..40 {
                    let mid = grid[k];
                    let chord = 0.5 * (grid[k - 1] + grid[k + 1]);
                    assert!(
                        mid >= chord - 1e-10,
                        "alpha {a} delta {d}: concavity fails at k {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn rate_monotone_in_alpha() {
        let alphas = [-8.0, -2.0, -1.0, -0.5, 0.0, 0.3, 0.7, 1.0];
        for i in 1..10 {
            for j in 1..10 {
                let d = i as f64 / 10.0;
                let p = j as f64 / 10.0;
                let mut prev = -1.0;
                for &a in &alphas {
                    let v = rate_function(alpha(a), d, p).unwrap();
                    assert!(v >= prev - 1e-12, "alpha {a}, delta {d}, p {p}");
                    prev = prev.max(v);
                }
            }
        }
    }

    #[test]
    fn inversion_identity_negative_alpha() {
        for &a in &[-4.0, -1.0, -0.2] {
            for i in 1..20 {
                for j in 1..20 {
                    let d = i as f64 / 20.0;
                    let q = j as f64 / 20.0;
                    let r = rate_function(alpha(a), d, 1.0 - q).unwrap();
                    let back = dilation_lower_bound(alpha(a), d, 1.0 - r).unwrap();
                    assert!(
                        (back - q).abs() <= 1e-12 * q.max(1.0),
                        "alpha {a} delta {d} q {q}: {back}"
                    );
                }
            }
        }
    }

    #[test]
    fn dilation_lower_bound_examples() {
        assert_relative_eq!(
            dilation_lower_bound(alpha(0.0), 0.5, 0.25).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            dilation_lower_bound(alpha(-1.0), 1.0, 0.123).unwrap(),
            0.123,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            dilation_lower_bound(alpha(-1.0), 0.5, 1.0 / 3.0).unwrap(),
            0.5,
            epsilon = 1e-14
        );
        assert!(dilation_lower_bound(alpha(0.0), 0.5, 0.0).is_err());
    }

    #[test]
    fn seminorm_modulus_values() {
        assert_relative_eq!(modulus_seminorm(1.0).unwrap(), 1.0);
        assert_relative_eq!(modulus_seminorm(1.0 / 3.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(modulus_seminorm(1e-9).unwrap() < 1e-8);
        assert!(modulus_seminorm(0.0).is_err());
        assert!(modulus_seminorm(1.1).is_err());
    }

    #[test]
    fn deviation_rhs_examples() {
        assert_eq!(deviation_inequality_rhs(alpha(0.0), 0.5, 1.0).unwrap(), 1.0);
        assert_relative_eq!(
            deviation_inequality_rhs(alpha(0.0), 0.5, 0.04).unwrap(),
            0.2,
            epsilon = 1e-15
        );
        // r = 3 seminorm modulus, alpha = -1, q = 0.1.
        assert_relative_eq!(
            deviation_inequality_rhs(alpha(-1.0), 0.5, 0.1).unwrap(),
            2.0 / 11.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn large_deviation_examples() {
        // Log-concave seminorm at r = 3: modulus 1/2, bound 2^-2.
        let b = large_deviation_bound(alpha(0.0), 0.5, 3.0).unwrap();
        assert_relative_eq!(b.bound, 0.25, epsilon = 1e-15);
        assert!(b.simplified.is_none());

        // alpha = -1, modulus 1/2, r = 3: tight form 1/3, product form 1/2.
        let b = large_deviation_bound(alpha(-1.0), 0.5, 3.0).unwrap();
        assert_relative_eq!(b.bound, 1.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(b.simplified.unwrap(), 0.5, epsilon = 1e-14);
        assert!(b.bound <= b.simplified.unwrap());
    }

    #[test]
    fn large_deviation_constant_limit() {
        // (2^-alpha - 1)^(1/alpha) approaches 1/2 as alpha goes to -inf.
        let c = |a: f64| ((2.0_f64).powf(-a) - 1.0).powf(1.0 / a);
        assert!((c(-40.0) - 0.5).abs() < 1e-10);
        assert!((c(-200.0) - 0.5).abs() < 1e-12);
        // And C_alpha <= 1 for alpha <= -1.
        for a in [-1.0, -2.0, -7.5] {
            assert!(c(a) <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn small_deviation_values() {
        assert_relative_eq!(
            small_deviation_constant(alpha(0.0)).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        assert_relative_eq!(small_deviation_constant(alpha(-1.0)).unwrap(), 1.0, epsilon = 1e-15);
        // Log-concave seminorm at eps = 0.5: ln 2 * 2/3.
        let v = small_deviation_bound(alpha(0.0), modulus_seminorm(0.5).unwrap()).unwrap();
        assert_relative_eq!(v, std::f64::consts::LN_2 * 2.0 / 3.0, epsilon = 1e-14);
        assert!((v - 0.4621).abs() < 1e-4);
        assert_eq!(small_deviation_bound(alpha(-2.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn norm_tail_values() {
        // Gaussian one-sigma ball at r = 3.
        let v = norm_tail_bound(alpha(0.0), 0.6827, 3.0).unwrap();
        assert_relative_eq!(v, (1.0_f64 - 0.6827).powi(2), epsilon = 1e-12);
        assert!((v - 0.1007).abs() < 1e-3);
        // Full measure kills the tail for every sign of alpha.
        for a in [-2.0, -1.0, 0.0, 0.5, 1.0] {
            assert_eq!(norm_tail_bound(alpha(a), 1.0, 2.0).unwrap(), 0.0);
        }
        // Positive alpha clamps to zero when the bracket goes negative.
        let v = norm_tail_bound(alpha(1.0), 0.9, 3.0).unwrap();
        assert_eq!(v, 0.0);
        // Raw relation agrees with the solved form at equality.
        let mu_b = 0.4_f64;
        let a = alpha(-1.0);
        let solved = norm_tail_bound(a, mu_b, 3.0).unwrap();
        let (lhs, rhs) = norm_tail_raw_relation(a, mu_b, 1.0 - solved, 3.0).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn small_ball_values() {
        assert_relative_eq!(small_ball_bound(alpha(-1.0), 0.3).unwrap(), 0.6, epsilon = 1e-15);
        assert_eq!(small_ball_bound(alpha(-1.0), 0.0).unwrap(), 0.0);
        let v = small_ball_bound(alpha(0.0), 1.0).unwrap();
        assert_relative_eq!(v, 2.0 * std::f64::consts::LN_2, epsilon = 1e-15);
        // The alpha = 0 constant is the numeric limit of the formula.
        let near = |a: f64| 2.0 * ((2.0_f64).powf(-a) - 1.0) / (-a);
        assert!((near(1e-6) - v).abs() < 1e-5);
        assert!((near(-1e-6) - v).abs() < 1e-5);
    }

    #[test]
    fn rejects_minus_infinity() {
        assert!(rate_function(AlphaParam::MinusInf, 0.5, 0.5).is_err());
        assert!(RateParams::new(AlphaParam::MinusInf, 0.5, 0.5).is_err());
        assert!(small_ball_bound(AlphaParam::MinusInf, 0.5).is_err());
    }

    fn gaussian_sampler(dim: usize) -> impl FnMut(&mut ChaCha8Rng) -> Vec<f64> {
        move |rng: &mut ChaCha8Rng| {
            (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal) * 2.0).collect()
        }
    }

    #[test]
    fn modulus_of_euclidean_norm_matches_seminorm_formula() {
        let est = estimate_modulus(
            |x: &[f64]| norm(x),
            gaussian_sampler(3),
            0.5,
            ModulusBudget { pairs: 120 },
            5,
        )
        .unwrap();
        let exact = modulus_seminorm(0.5).unwrap();
        assert!(est.value >= exact - 0.02, "estimate {} vs exact {exact}", est.value);
        assert!(est.value <= exact + 1e-9, "estimate {} overshoots {exact}", est.value);
        // The structured opposite-ray witness attains the closed form.
        let (wx, wy) = est.witnesses.unwrap();
        let ratio = -wy[0] / wx[0];
        assert!(
            (ratio - 0.5).abs() < 1e-9,
            "witness should be y = -eps x, got scale {ratio}"
        );
    }

    #[test]
    fn modulus_of_constant_is_zero() {
        let est = estimate_modulus(
            |_: &[f64]| 3.5,
            gaussian_sampler(2),
            0.5,
            ModulusBudget { pairs: 40 },
            7,
        )
        .unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn modulus_of_affine_functional_matches_seminorm() {
        // |w . x| is a seminorm; the brute-force estimate must approach
        // 2 eps/(1 + eps) from below.
        let w = [0.8, -0.6];
        let est = estimate_modulus(
            move |x: &[f64]| w[0] * x[0] + w[1] * x[1],
            gaussian_sampler(2),
            0.3,
            ModulusBudget { pairs: 150 },
            11,
        )
        .unwrap();
        let exact = modulus_seminorm(0.3).unwrap();
        assert!((est.value - exact).abs() < 0.02, "estimate {} vs {exact}", est.value);
    }

    #[test]
    fn sublevel_measure_handles_plateaus() {
        // f = 0 on [0.3, 0.6]: threshold zero counts the flat region.
        let f = |t: f64| {
            if t < 0.3 {
                0.3 - t
            } else if t > 0.6 {
                t - 0.6
            } else {
                0.0
            }
        };
        let m = sublevel_measure(f, 0.0);
        assert!((m - 0.3).abs() < 1e-9, "plateau measure {m}");
    }
}
