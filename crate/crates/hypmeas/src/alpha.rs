//! Concavity-parameter arithmetic and generalized power means.
//!
//! The concavity parameter `alpha` lives in the extended interval
//! `[-inf, 1]`. Infinite values are tagged variants rather than IEEE
//! infinities so that limit cases branch exactly. The weighted power mean
//!
//! ```text
//! M_alpha(a, b; t) = [(1-t) a^alpha + t b^alpha]^(1/alpha)
//! ```
//!
//! interpolates between `min(a, b)` (alpha = -inf), the geometric mean
//! (alpha = 0), linear interpolation (alpha = 1), and `max(a, b)`
//! (alpha = +inf).

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Extended real line with tagged infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn as_finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    /// Total order consistent with the real line.
    pub fn le(self, other: ExtReal) -> bool {
        use ExtReal::*;
        match (self, other) {
            (NegInf, _) | (_, PosInf) => true,
            (PosInf, _) | (_, NegInf) => false,
            (Finite(a), Finite(b)) => a <= b,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}

/// Concavity parameter: an extended real in `[-inf, 1]`.
///
/// The variants distinguish the branch-exact cases `-inf`, `0`, finite
/// nonzero, and values in `(0, 1]` (via [`AlphaParam::class`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaParam {
    MinusInf,
    Finite(f64),
}

/// Sign classification of an [`AlphaParam`], used to pick formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaClass {
    MinusInf,
    Negative,
    Zero,
    Positive,
}

impl AlphaParam {
    /// A finite parameter; must satisfy `value <= 1`.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!(
                "alpha must be finite or the tagged -inf, got {value}"
            )));
        }
        if value > 1.0 {
            return Err(Error::domain(format!("alpha must satisfy alpha <= 1, got {value}")));
        }
        Ok(AlphaParam::Finite(value))
    }

    pub fn minus_inf() -> Self {
        AlphaParam::MinusInf
    }

    pub fn zero() -> Self {
        AlphaParam::Finite(0.0)
    }

    pub fn one() -> Self {
        AlphaParam::Finite(1.0)
    }

    pub fn class(self) -> AlphaClass {
        match self {
            AlphaParam::MinusInf => AlphaClass::MinusInf,
            AlphaParam::Finite(a) if a == 0.0 => AlphaClass::Zero,
            AlphaParam::Finite(a) if a < 0.0 => AlphaClass::Negative,
            AlphaParam::Finite(_) => AlphaClass::Positive,
        }
    }

    pub fn is_zero(self) -> bool {
        self.class() == AlphaClass::Zero
    }

    /// Finite value, if any.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            AlphaParam::Finite(a) => Some(a),
            AlphaParam::MinusInf => None,
        }
    }

    pub fn to_ext(self) -> ExtReal {
        match self {
            AlphaParam::MinusInf => ExtReal::NegInf,
            AlphaParam::Finite(a) => ExtReal::Finite(a),
        }
    }

    /// Needle profile exponent `(1 - alpha)/alpha`; `None` for alpha = 0
    /// (the log-affine limit) and for alpha = -inf (exponent -1).
    pub fn needle_exponent(self) -> Option<f64> {
        match self {
            AlphaParam::MinusInf => Some(-1.0),
            AlphaParam::Finite(a) if a == 0.0 => None,
            AlphaParam::Finite(a) => Some((1.0 - a) / a),
        }
    }
}

impl std::fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaParam::MinusInf => write!(f, "-inf"),
            AlphaParam::Finite(a) => write!(f, "{a}"),
        }
    }
}

impl Serialize for AlphaParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaParam::MinusInf => s.serialize_str("-inf"),
            AlphaParam::Finite(a) => s.serialize_f64(*a),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => AlphaParam::new(x).map_err(de::Error::custom),
            Repr::Str(s) if s == "-inf" => Ok(AlphaParam::MinusInf),
            Repr::Str(s) => Err(de::Error::custom(format!("invalid alpha: {s:?}"))),
        }
    }
}

/// Parse an alpha from CLI text: a number or `-inf`.
pub fn parse_alpha(text: &str) -> Result<AlphaParam> {
    let t = text.trim();
    if t == "-inf" || t == "-infinity" {
        return Ok(AlphaParam::MinusInf);
    }
    let v: f64 = t
        .parse()
        .map_err(|_| Error::config(format!("cannot parse alpha from {text:?}")))?;
    AlphaParam::new(v)
}

const GEOMETRIC_SWITCH: f64 = 1e-6;

fn check_mean_args(a: f64, b: f64, t: f64) -> Result<()> {
    if !(a >= 0.0) || !(b >= 0.0) {
        return Err(Error::domain(format!("mean arguments must be >= 0, got a={a}, b={b}")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("weight t must lie in [0,1], got {t}")));
    }
    Ok(())
}

/// Geometric mean with a first-order correction in the exponent, used for
/// small nonzero exponents where `a^p` loses all precision.
fn near_zero_mean(a: f64, b: f64, t: f64, p: f64) -> f64 {
    let (u, v) = (a.ln(), b.ln());
    let m1 = (1.0 - t) * u + t * v;
    let m2 = (1.0 - t) * u * u + t * v * v;
    (m1 + 0.5 * p * (m2 - m1 * m1)).exp()
}

/// Weighted power mean of `a, b >= 0` with weight `t` and an arbitrary
/// extended-real exponent.
///
/// Conventions: `t = 0` and `t = 1` return the respective endpoint; for
/// exponent `<= 0` a zero argument forces a zero mean; exponent `-inf`
/// gives `min`, `+inf` gives `max`, `0` the geometric mean.
pub fn power_mean(a: f64, b: f64, t: f64, exponent: ExtReal) -> Result<f64> {
    check_mean_args(a, b, t)?;
    let nonpositive = matches!(exponent, ExtReal::NegInf)
        || matches!(exponent, ExtReal::Finite(p) if p <= 0.0);
    if nonpositive && a.min(b) == 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(a);
    }
    if t == 1.0 {
        return Ok(b);
    }
    let p = match exponent {
        ExtReal::NegInf => return Ok(a.min(b)),
        ExtReal::PosInf => return Ok(a.max(b)),
        ExtReal::Finite(p) => p,
    };
    if p == 0.0 {
        if a == b {
            return Ok(a);
        }
        return Ok(((1.0 - t) * a.ln() + t * b.ln()).exp());
    }
    if p.abs() < GEOMETRIC_SWITCH {
        return Ok(near_zero_mean(a, b, t, p));
    }
    // Scale-invariant form: factor out an endpoint so the powered ratios
    // stay in (0, 1] and cannot overflow.
    let s = if p > 0.0 { a.max(b) } else { a.min(b) };
    let ra = (a / s).powf(p);
    let rb = (b / s).powf(p);
    Ok(s * ((1.0 - t) * ra + t * rb).powf(1.0 / p))
}

/// The alpha-mean `M_alpha(a, b; t)` of nonnegative reals.
pub fn generalized_mean(a: f64, b: f64, t: f64, alpha: AlphaParam) -> Result<f64> {
    power_mean(a, b, t, alpha.to_ext())
}

/// Borell's exponent correspondence `beta = alpha/(1 - alpha k)` between
/// the concavity of a measure of dimension `k` and of its density.
///
/// Conventions: `alpha = 1/k` maps to `+inf`, `alpha = -inf` maps to
/// `-1/k`. Requires `alpha <= 1/k`.
pub fn beta_from_alpha(alpha: AlphaParam, k: u32) -> Result<ExtReal> {
    if k == 0 {
        return Err(Error::domain("dimension k must be >= 1"));
    }
    let kf = f64::from(k);
    match alpha {
        AlphaParam::MinusInf => Ok(ExtReal::Finite(-1.0 / kf)),
        AlphaParam::Finite(a) => {
            let cap = 1.0 / kf;
            if a > cap {
                return Err(Error::domain(format!(
                    "alpha = {a} exceeds 1/k = {cap} for k = {k}"
                )));
            }
            if a == cap {
                return Ok(ExtReal::PosInf);
            }
            Ok(ExtReal::Finite(a / (1.0 - a * kf)))
        }
    }
}

/// Inverse of [`beta_from_alpha`]: `alpha = beta/(1 + beta k)`.
///
/// Conventions: `beta = +inf` maps to `1/k`, `beta = -1/k` maps to `-inf`.
/// Requires `beta >= -1/k`.
pub fn alpha_from_beta(beta: ExtReal, k: u32) -> Result<AlphaParam> {
    if k == 0 {
        return Err(Error::domain("dimension k must be >= 1"));
    }
    let kf = f64::from(k);
    match beta {
        ExtReal::PosInf => Ok(AlphaParam::Finite(1.0 / kf)),
        ExtReal::NegInf => Err(Error::domain("beta must satisfy beta >= -1/k")),
        ExtReal::Finite(b) => {
            let floor = -1.0 / kf;
            if b < floor {
                return Err(Error::domain(format!(
                    "beta = {b} is below -1/k = {floor} for k = {k}"
                )));
            }
            if b == floor {
                return Ok(AlphaParam::MinusInf);
            }
            Ok(AlphaParam::Finite(b / (1.0 + b * kf)))
        }
    }
}

/// Affine functional `constant + gradient . x` on R^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineForm {
    pub constant: f64,
    pub gradient: Vec<f64>,
}

impl AffineForm {
    pub fn new(constant: f64, gradient: Vec<f64>) -> Self {
        AffineForm { constant, gradient }
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.gradient.len());
        self.constant + self.gradient.iter().zip(x).map(|(g, xi)| g * xi).sum::<f64>()
    }
}
