//! One-dimensional alpha-concave probability measures on segments.
//!
//! A needle lives on a segment `[a, b]` in R^n, parameterized by
//! `t in [0, 1]`, with density relative to the uniform measure on the
//! segment. The density is either an affine power `(c0 + c1 t)^gamma`
//! with `gamma = (1 - alpha)/alpha`, the log-affine limit
//! `exp(c0 + c1 t)` for `alpha = 0`, or a point mass. These are exactly
//! the extreme needles produced by localization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alpha::{generalized_mean, AlphaParam};
use crate::error::{Error, Result};
use crate::linalg::{lerp_point, PointCloud};
use crate::quad;

/// Absolute tolerance used by needle quadrature.
pub const QUAD_TOL: f64 = 1e-9;

/// Minimum of the affine factor required when the exponent is negative.
const NEG_EXPONENT_FLOOR: f64 = 1e-12;

/// Density profile on the parameter interval `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    PowerAffine { c0: f64, c1: f64, gamma: f64 },
    LogAffine { c0: f64, c1: f64 },
    PointMass { t0: f64 },
}

/// A normalized one-dimensional measure on the segment `[a, b]`.
#[derive(Debug, Clone)]
pub struct Needle {
    endpoint_a: Vec<f64>,
    endpoint_b: Vec<f64>,
    alpha: AlphaParam,
    profile: Profile,
    norm_const: f64,
}

#[derive(Serialize, Deserialize)]
struct NeedleJson {
    a: Vec<f64>,
    b: Vec<f64>,
    alpha: AlphaParam,
    profile: Profile,
}

/// Outcome of a randomized measure-concavity check.
#[derive(Debug, Clone, Serialize)]
pub struct ConcavityReport {
    pub max_violation: f64,
    pub pass: bool,
    pub trials: usize,
    /// Triple `(A, B, t)` attaining the worst violation.
    pub worst_triple: Option<((f64, f64), (f64, f64), f64)>,
}

fn check_endpoints(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::construction(format!(
            "segment endpoints must be nonempty and of equal dimension, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::construction("segment endpoints must be finite"));
    }
    Ok(())
}

impl Needle {
    /// Needle with affine-power density `(c0 + c1 t)^gamma`, where the
    /// exponent is derived from `alpha` as `(1 - alpha)/alpha`.
    pub fn power_affine(
        a: Vec<f64>,
        b: Vec<f64>,
        alpha: AlphaParam,
        c0: f64,
        c1: f64,
    ) -> Result<Self> {
        check_endpoints(&a, &b)?;
        let gamma = alpha.needle_exponent().ok_or_else(|| {
            Error::construction("alpha = 0 has no affine-power profile; use log_affine")
        })?;
        let lo = c0.min(c0 + c1);
        if lo < 0.0 {
            return Err(Error::construction(format!(
                "affine factor must be nonnegative on [0,1]: min value {lo}"
            )));
        }
        if gamma < 0.0 && lo <= NEG_EXPONENT_FLOOR {
            return Err(Error::construction(format!(
                "negative exponent {gamma} requires the affine factor to stay above {NEG_EXPONENT_FLOOR}, min value {lo}"
            )));
        }
        let profile = Profile::PowerAffine { c0, c1, gamma };
        let norm_const = profile_mass(&profile)?;
        Ok(Needle { endpoint_a: a, endpoint_b: b, alpha, profile, norm_const })
    }

    /// Log-affine needle `exp(c0 + c1 t)`, the alpha = 0 limit profile.
    pub fn log_affine(a: Vec<f64>, b: Vec<f64>, c0: f64, c1: f64) -> Result<Self> {
        check_endpoints(&a, &b)?;
        if !c0.is_finite() || !c1.is_finite() {
            return Err(Error::construction("log-affine coefficients must be finite"));
        }
        let profile = Profile::LogAffine { c0, c1 };
        let norm_const = profile_mass(&profile)?;
        Ok(Needle {
            endpoint_a: a,
            endpoint_b: b,
            alpha: AlphaParam::zero(),
            profile,
            norm_const,
        })
    }

    /// Dirac mass at parameter `t0`.
    pub fn point_mass(a: Vec<f64>, b: Vec<f64>, alpha: AlphaParam, t0: f64) -> Result<Self> {
        check_endpoints(&a, &b)?;
        if !(0.0..=1.0).contains(&t0) {
            return Err(Error::construction(format!("atom parameter must lie in [0,1], got {t0}")));
        }
        Ok(Needle {
            endpoint_a: a,
            endpoint_b: b,
            alpha,
            profile: Profile::PointMass { t0 },
            norm_const: 1.0,
        })
    }

    /// Uniform needle (alpha = 1, constant profile).
    pub fn uniform(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Needle::power_affine(a, b, AlphaParam::one(), 1.0, 0.0)
    }

    pub fn endpoint_a(&self) -> &[f64] {
        &self.endpoint_a
    }

    pub fn endpoint_b(&self) -> &[f64] {
        &self.endpoint_b
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    pub fn dim(&self) -> usize {
        self.endpoint_a.len()
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self.profile, Profile::PointMass { .. })
    }

    /// Point on the segment at parameter `t`.
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        lerp_point(&self.endpoint_a, &self.endpoint_b, t)
    }

    /// Normalized density with respect to the uniform measure on the
    /// segment. For a point mass this is the flag value `+inf` at the atom
    /// and `0` elsewhere; `integrate` and `sample` treat the atom exactly.
    pub fn density(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("needle parameter must lie in [0,1], got {t}")));
        }
        Ok(match &self.profile {
            Profile::PowerAffine { c0, c1, gamma } => {
                let l = c0 + c1 * t;
                if l <= 0.0 && *gamma < 0.0 {
                    // Unreachable for constructed needles; the constructor
                    // keeps negative exponents away from the zero set.
                    f64::INFINITY
                } else {
                    l.powf(*gamma) / self.norm_const
                }
            }
            Profile::LogAffine { c0, c1 } => (c0 + c1 * t).exp() / self.norm_const,
            Profile::PointMass { t0 } => {
                if t == *t0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        })
    }

    /// Integral of `u` over the needle, `u` evaluated at segment points.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, u: F) -> Result<f64> {
        match &self.profile {
            Profile::PointMass { t0 } => Ok(u(&self.point_at(*t0))),
            _ => self.integrate_t(|t| u(&self.point_at(t))),
        }
    }

    /// Integral of a function of the parameter `t` against the needle.
    pub fn integrate_t<F: Fn(f64) -> f64>(&self, u: F) -> Result<f64> {
        match &self.profile {
            Profile::PointMass { t0 } => Ok(u(*t0)),
            _ => quad::integrate(|t| u(t) * self.density(t).unwrap_or(0.0), 0.0, 1.0, QUAD_TOL),
        }
    }

    /// Mass of the parameter interval `[lo, hi]` computed by quadrature,
    /// independent of the closed-form CDF.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::domain(format!("bad parameter interval [{lo}, {hi}]")));
        }
        match &self.profile {
            Profile::PointMass { t0 } => Ok(if (lo..=hi).contains(t0) { 1.0 } else { 0.0 }),
            _ => quad::integrate(|t| self.density(t).unwrap_or(0.0), lo, hi, QUAD_TOL),
        }
    }

    /// Distribution function of the parameter, from closed-form primitives.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("needle parameter must lie in [0,1], got {t}")));
        }
        Ok(match &self.profile {
            Profile::PowerAffine { c0, c1, gamma } => {
                if *c1 == 0.0 {
                    t
                } else if *gamma == -1.0 {
                    ((c0 + c1 * t) / c0).ln() / ((c0 + c1) / c0).ln()
                } else {
                    let g1 = gamma + 1.0;
                    let span = (c0 + c1).powf(g1) - c0.powf(g1);
                    ((c0 + c1 * t).powf(g1) - c0.powf(g1)) / span
                }
            }
            Profile::LogAffine { c1, .. } => {
                if *c1 == 0.0 {
                    t
                } else {
                    (c1 * t).exp_m1() / c1.exp_m1()
                }
            }
            Profile::PointMass { t0 } => {
                if t >= *t0 {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    /// Quantile function; closed form except for the logarithmic-primitive
    /// exponent `gamma = -1`, which inverts the CDF by bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability must lie in [0,1], got {p}")));
        }
        Ok(match &self.profile {
            Profile::PowerAffine { c0, c1, gamma } => {
                if *c1 == 0.0 {
                    p
                } else if *gamma == -1.0 {
                    self.invert_cdf_bisect(p)
                } else {
                    let g1 = gamma + 1.0;
                    let lo_pow = c0.powf(g1);
                    let span = (c0 + c1).powf(g1) - lo_pow;
                    let t = ((lo_pow + p * span).powf(1.0 / g1) - c0) / c1;
                    t.clamp(0.0, 1.0)
                }
            }
            Profile::LogAffine { c1, .. } => {
                if *c1 == 0.0 {
                    p
                } else {
                    ((p * c1.exp_m1()).ln_1p() / c1).clamp(0.0, 1.0)
                }
            }
            Profile::PointMass { t0 } => *t0,
        })
    }

    fn invert_cdf_bisect(&self, p: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid).unwrap() < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Parameter draws via inverse CDF; deterministic for a fixed seed.
    pub fn sample_t(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::domain("sample count must be >= 1"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.quantile(rng.gen::<f64>())).collect()
    }

    /// I.i.d. segment points; deterministic for a fixed seed.
    pub fn sample(&self, count: usize, seed: u64) -> Result<PointCloud> {
        let ts = self.sample_t(count, seed)?;
        let mut cloud = PointCloud::with_capacity(self.dim(), count);
        for t in ts {
            cloud.push(&self.point_at(t));
        }
        Ok(cloud)
    }

    /// Randomized check of the measure-level concavity inequality on
    /// subinterval pairs, with interval masses computed by quadrature.
    pub fn verify_concavity(&self, trials: usize, seed: u64) -> Result<ConcavityReport> {
        if self.is_point_mass() {
            return Err(Error::domain("concavity verification is undefined for a point mass"));
        }
        let needle = self.clone();
        verify_interval_concavity(
            move |lo, hi| needle.interval_mass(lo, hi),
            self.alpha,
            trials,
            seed,
        )
    }
}

impl Serialize for Needle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NeedleJson {
            a: self.endpoint_a.clone(),
            b: self.endpoint_b.clone(),
            alpha: self.alpha,
            profile: self.profile.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Needle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NeedleJson::deserialize(d)?;
        let needle = match raw.profile {
            Profile::PowerAffine { c0, c1, .. } => {
                Needle::power_affine(raw.a, raw.b, raw.alpha, c0, c1)
            }
            Profile::LogAffine { c0, c1 } => Needle::log_affine(raw.a, raw.b, c0, c1),
            Profile::PointMass { t0 } => Needle::point_mass(raw.a, raw.b, raw.alpha, t0),
        };
        needle.map_err(serde::de::Error::custom)
    }
}

/// Total mass of an unnormalized profile over `[0, 1]`, in closed form.
fn profile_mass(profile: &Profile) -> Result<f64> {
    let z = match profile {
        Profile::PowerAffine { c0, c1, gamma } => {
            if *c1 == 0.0 {
                c0.powf(*gamma)
            } else if *gamma == -1.0 {
                ((c0 + c1) / c0).ln() / c1
            } else {
                let g1 = gamma + 1.0;
                ((c0 + c1).powf(g1) - c0.powf(g1)) / (c1 * g1)
            }
        }
        Profile::LogAffine { c0, c1 } => {
            if *c1 == 0.0 {
                c0.exp()
            } else {
                c0.exp() * c1.exp_m1() / c1
            }
        }
        Profile::PointMass { .. } => 1.0,
    };
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::construction(format!(
            "profile mass must be positive and finite, got {z}"
        )));
    }
    Ok(z)
}

/// Check the inequality `m((1-t)A + tB) >= M_alpha(m(A), m(B); t)` for a
/// one-dimensional measure given through its subinterval-mass oracle.
///
/// Draws `trials` random triples of subintervals of `[0, 1]` and weights;
/// the worst signed violation `mean - m(combination)` is reported, and the
/// check passes when it stays below `1e-8`.
pub fn verify_interval_concavity<M>(
    mass: M,
    alpha: AlphaParam,
    trials: usize,
    seed: u64,
) -> Result<ConcavityReport>
where
    M: Fn(f64, f64) -> Result<f64>,
{
    const TOL: f64 = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_triple = None;
    for _ in 0..trials {
        let (a1, a2) = sorted_pair(&mut rng);
        let (b1, b2) = sorted_pair(&mut rng);
        let t: f64 = rng.gen();
        let ma = mass(a1, a2)?;
        let mb = mass(b1, b2)?;
        let combo_lo = (1.0 - t) * a1 + t * b1;
        let combo_hi = (1.0 - t) * a2 + t * b2;
        let mc = mass(combo_lo, combo_hi)?;
        let mean = generalized_mean(ma, mb, t, alpha)?;
        let violation = mean - mc;
        if violation > worst {
            worst = violation;
            worst_triple = Some(((a1, a2), (b1, b2), t));
        }
    }
    Ok(ConcavityReport { max_violation: worst, pass: worst <= TOL, trials, worst_triple })
}

fn sorted_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let x: f64 = rng.gen();
    let y: f64 = rng.gen();
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}
