//! Borel set oracles and line-restricted uniform measure.
//!
//! `m_[x,y](S)` is the fraction of the segment from `x` to `y` lying in
//! `S` (the Dirac convention applies when the endpoints coincide). The
//! measure is exact for halfspace polytopes (segment clipping), interval
//! unions, symmetric convex gauge sets (the gauge is convex along any
//! line, so its sublevel set in the parameter is one interval), and
//! complements of these; generic membership oracles fall back to a grid
//! estimate with Richardson refinement.
//!
//! One-dimensional interval unions carry open/closed endpoint flags; the
//! dilation sweeps rely on that bookkeeping being exact.

use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{lerp_point, norm};
use crate::polytope::{Halfspace, Polytope};

// ---------------------------------------------------------------------------
// Flagged 1D interval unions
// ---------------------------------------------------------------------------

/// Interval with endpoint closure flags. A single point is represented as
/// `lo == hi` with both endpoints closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval1 {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval1 {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval1 { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval1 { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn point(x: f64) -> Self {
        Interval1::closed(x, x)
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    fn is_valid(&self) -> bool {
        self.lo.is_finite()
            && self.hi.is_finite()
            && (self.lo < self.hi || (self.lo == self.hi && self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: f64) -> bool {
        let left = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let right = if self.hi_closed { x <= self.hi } else { x < self.hi };
        left && right
    }
}

/// Sorted, disjoint union of flagged intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval1>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    /// Normalize an arbitrary list of intervals: drop invalid/empty ones,
    /// sort, and merge whenever two pieces overlap or touch with no gap.
    pub fn new(mut parts: Vec<Interval1>) -> Self {
        parts.retain(Interval1::is_valid);
        parts.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap().then(
            // At equal lo a closed left endpoint sorts first.
            b.lo_closed.cmp(&a.lo_closed),
        ));
        let mut out: Vec<Interval1> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(q) if p.lo < q.hi || (p.lo == q.hi && (p.lo_closed || q.hi_closed)) => {
                    // Overlapping or touching without a hole: merge.
                    if p.hi > q.hi {
                        q.hi = p.hi;
                        q.hi_closed = p.hi_closed;
                    } else if p.hi == q.hi {
                        q.hi_closed = q.hi_closed || p.hi_closed;
                    }
                    if p.lo == q.lo {
                        q.lo_closed = q.lo_closed || p.lo_closed;
                    }
                }
                _ => out.push(p),
            }
        }
        IntervalUnion { parts: out }
    }

    /// From closed `[lo, hi]` pairs.
    pub fn from_closed_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        let mut parts = Vec::with_capacity(pairs.len());
        for p in pairs {
            if !(p[0] <= p[1]) || !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::construction(format!(
                    "interval [{}, {}] must satisfy lo <= hi and be finite",
                    p[0], p[1]
                )));
            }
            parts.push(Interval1::closed(p[0], p[1]));
        }
        Ok(IntervalUnion::new(parts))
    }

    pub fn parts(&self) -> &[Interval1] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(Interval1::len).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        IntervalUnion::new(parts)
    }

    /// Complement within the closed window `F = [lo, hi]`, with exact flag
    /// flipping at the part boundaries.
    pub fn complement_within(&self, window: Interval1) -> IntervalUnion {
        let mut out: Vec<Interval1> = Vec::with_capacity(self.parts.len() + 1);
        let mut cursor = window.lo;
        let mut cursor_closed = window.lo_closed;
        for p in &self.parts {
            if p.hi < cursor || (p.hi == cursor && !(p.hi_closed && cursor_closed)) {
                // Entirely left of the window remainder; may still shave the
                // cursor when it touches.
                if p.hi == cursor && p.hi_closed && cursor_closed {
                    cursor_closed = false;
                }
                continue;
            }
            if p.lo > window.hi || (p.lo == window.hi && !(p.lo_closed && window.hi_closed)) {
                break;
            }
            let gap = Interval1 {
                lo: cursor,
                hi: p.lo,
                lo_closed: cursor_closed,
                hi_closed: !p.lo_closed,
            };
            if gap.is_valid() {
                out.push(gap);
            }
            if p.hi > cursor || (p.hi == cursor && p.hi_closed) {
                cursor = p.hi;
                cursor_closed = !p.hi_closed;
            }
        }
        let tail = Interval1 {
            lo: cursor,
            hi: window.hi,
            lo_closed: cursor_closed,
            hi_closed: window.hi_closed,
        };
        if tail.is_valid() {
            out.push(tail);
        }
        IntervalUnion { parts: out }
    }

    /// Intersection with a window, preserving flags.
    pub fn intersect_window(&self, window: Interval1) -> IntervalUnion {
        let mut out = Vec::new();
        for p in &self.parts {
            let lo;
            let lo_closed;
            if p.lo > window.lo {
                lo = p.lo;
                lo_closed = p.lo_closed;
            } else if p.lo == window.lo {
                lo = p.lo;
                lo_closed = p.lo_closed && window.lo_closed;
            } else {
                lo = window.lo;
                lo_closed = window.lo_closed;
            }
            let hi;
            let hi_closed;
            if p.hi < window.hi {
                hi = p.hi;
                hi_closed = p.hi_closed;
            } else if p.hi == window.hi {
                hi = p.hi;
                hi_closed = p.hi_closed && window.hi_closed;
            } else {
                hi = window.hi;
                hi_closed = window.hi_closed;
            }
            let cand = Interval1 { lo, hi, lo_closed, hi_closed };
            if cand.is_valid() {
                out.push(cand);
            }
        }
        IntervalUnion { parts: out }
    }

    /// Measure of the preimage of the union under `t -> x + t (y - x)`
    /// restricted to `t in [0, 1]`.
    pub fn segment_fraction(&self, x: f64, y: f64) -> f64 {
        debug_assert!(x != y);
        let d = y - x;
        let mut total = 0.0;
        for p in &self.parts {
            let (mut t0, mut t1) = ((p.lo - x) / d, (p.hi - x) / d);
            if t0 > t1 {
                std::mem::swap(&mut t0, &mut t1);
            }
            total += (t1.min(1.0) - t0.max(0.0)).max(0.0);
        }
        total
    }
}

// ---------------------------------------------------------------------------
// Set oracles
// ---------------------------------------------------------------------------

/// Named gauge (a positively homogeneous symmetric convex functional).
#[derive(Clone)]
pub enum GaugeFn {
    /// Euclidean norm.
    Euclidean,
    /// Sup norm.
    Sup,
    /// User-supplied gauge; must be positively homogeneous.
    Custom(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for GaugeFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GaugeFn::Euclidean => write!(f, "Euclidean"),
            GaugeFn::Sup => write!(f, "Sup"),
            GaugeFn::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Open symmetric convex body `{x : gauge(x) < radius}`.
#[derive(Debug, Clone)]
pub struct GaugeSet {
    dim: usize,
    gauge: GaugeFn,
    radius: f64,
}

impl GaugeSet {
    pub fn new(dim: usize, gauge: GaugeFn, radius: f64) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::construction(format!("gauge radius must be positive, got {radius}")));
        }
        let set = GaugeSet { dim, gauge, radius };
        set.check_homogeneity()?;
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn gauge_value(&self, x: &[f64]) -> f64 {
        match &self.gauge {
            GaugeFn::Euclidean => norm(x),
            GaugeFn::Sup => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            GaugeFn::Custom(f) => f(x),
        }
    }

    fn check_homogeneity(&self) -> Result<()> {
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..8 {
            let x: Vec<f64> = (0..self.dim).map(|_| next()).collect();
            let g = self.gauge_value(&x);
            if g <= 0.0 {
                continue;
            }
            for s in [0.5, 2.0, 7.25] {
                let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
                let gs = self.gauge_value(&sx);
                if (gs - s * g).abs() > 1e-10 * (s * g).abs().max(1.0) {
                    return Err(Error::construction(format!(
                        "gauge is not positively homogeneous: g(s x) = {gs}, s g(x) = {}",
                        s * g
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.gauge_value(x) < self.radius
    }
}

/// Arbitrary membership predicate.
#[derive(Clone)]
pub struct GenericSet {
    pub dim: usize,
    pub member: Arc<dyn Fn(&[f64]) -> bool + Send + Sync>,
}

impl std::fmt::Debug for GenericSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GenericSet(dim={})", self.dim)
    }
}

#[derive(Debug, Clone)]
pub enum SetVariant {
    Polytope(Polytope),
    Gauge(GaugeSet),
    /// One-dimensional interval union.
    Intervals(IntervalUnion),
    Complement(Box<SetVariant>),
    Generic(GenericSet),
}

impl SetVariant {
    pub fn dim(&self) -> usize {
        match self {
            SetVariant::Polytope(p) => p.dim(),
            SetVariant::Gauge(g) => g.dim(),
            SetVariant::Intervals(_) => 1,
            SetVariant::Complement(inner) => inner.dim(),
            SetVariant::Generic(g) => g.dim,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            SetVariant::Polytope(p) => p.contains(x),
            SetVariant::Gauge(g) => g.contains(x),
            SetVariant::Intervals(u) => u.contains(x[0]),
            SetVariant::Complement(inner) => !inner.contains(x),
            SetVariant::Generic(g) => (g.member)(x),
        }
    }

    fn segment_fraction(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            SetVariant::Polytope(p) => {
                p.clip_segment(x, y).map_or(0.0, |(t0, t1)| (t1 - t0).max(0.0))
            }
            SetVariant::Gauge(g) => gauge_segment_fraction(g, x, y),
            SetVariant::Intervals(u) => u.segment_fraction(x[0], y[0]),
            SetVariant::Complement(inner) => 1.0 - inner.segment_fraction(x, y),
            SetVariant::Generic(g) => generic_segment_fraction(g, x, y),
        }
    }
}

/// A Borel set together with an optional ambient reference convex set.
#[derive(Debug, Clone)]
pub struct SetOracle {
    pub variant: SetVariant,
    pub ambient: Option<Polytope>,
}

impl SetOracle {
    pub fn new(variant: SetVariant) -> Self {
        SetOracle { variant, ambient: None }
    }

    pub fn with_ambient(variant: SetVariant, ambient: Polytope) -> Result<Self> {
        if variant.dim() != ambient.dim() {
            return Err(Error::construction("set and ambient body dimensions differ"));
        }
        Ok(SetOracle { variant, ambient: Some(ambient) })
    }

    pub fn dim(&self) -> usize {
        self.variant.dim()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.variant.contains(x)
    }

    /// Uniform measure of the set along the segment `[x, y]`; the Dirac
    /// convention gives the indicator of `x` when the endpoints coincide.
    pub fn line_measure(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::domain("segment endpoint dimension mismatch"));
        }
        if let Some(fbody) = &self.ambient {
            if !fbody.contains(x) || !fbody.contains(y) {
                return Err(Error::domain("segment endpoints must lie in the ambient body"));
            }
        }
        if x == y {
            return Ok(if self.contains(x) { 1.0 } else { 0.0 });
        }
        Ok(self.variant.segment_fraction(x, y).clamp(0.0, 1.0))
    }

    /// Parse a JSON descriptor, e.g. `{"intervals":[[0,0.1]]}`,
    /// `{"polytope":[[1,0,0.5],[-1,0,0]]}` (rows `w..., c` meaning
    /// `w . x <= c`), `{"gauge":"euclidean","radius":1}`,
    /// `{"complement":{...}}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        Ok(SetOracle::new(variant_from_json(value)?))
    }
}

fn variant_from_json(value: &Value) -> Result<SetVariant> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::config("set descriptor must be a JSON object"))?;
    if let Some(v) = obj.get("intervals") {
        let pairs: Vec<[f64; 2]> = serde_json::from_value(v.clone())
            .map_err(|e| Error::config(format!("bad intervals descriptor: {e}")))?;
        return Ok(SetVariant::Intervals(IntervalUnion::from_closed_pairs(&pairs)?));
    }
    if let Some(v) = obj.get("polytope") {
        let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone())
            .map_err(|e| Error::config(format!("bad polytope descriptor: {e}")))?;
        if rows.is_empty() || rows[0].len() < 2 {
            return Err(Error::config("polytope rows need at least one coefficient and an offset"));
        }
        let dim = rows[0].len() - 1;
        let hs = rows
            .into_iter()
            .map(|mut r| {
                let c = r.pop().unwrap();
                if r.len() != dim {
                    return Err(Error::config("inconsistent polytope row lengths"));
                }
                Ok(Halfspace::new(r, c))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(SetVariant::Polytope(Polytope::from_halfspaces(dim, hs)?));
    }
    if let Some(v) = obj.get("gauge") {
        let name = v.as_str().ok_or_else(|| Error::config("gauge must be a string"))?;
        let radius = obj.get("radius").and_then(Value::as_f64).unwrap_or(1.0);
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::config("gauge descriptor requires a dim field"))?
            as usize;
        let gauge = match name {
            "euclidean" => GaugeFn::Euclidean,
            "sup" => GaugeFn::Sup,
            other => return Err(Error::config(format!("unknown gauge {other:?}"))),
        };
        return Ok(SetVariant::Gauge(GaugeSet::new(dim, gauge, radius)?));
    }
    if let Some(v) = obj.get("complement") {
        return Ok(SetVariant::Complement(Box::new(variant_from_json(v)?)));
    }
    Err(Error::config("unrecognized set descriptor"))
}

/// Sublevel fraction for a gauge along a segment. The gauge restricted to
/// the segment is convex, so `{t : g(t) < r}` is a single interval found
/// by ternary search for the minimum and bisection for the crossings.
fn gauge_segment_fraction(set: &GaugeSet, x: &[f64], y: &[f64]) -> f64 {
    let g = |t: f64| set.gauge_value(&lerp_point(x, y, t)) - set.radius;
    let g0 = g(0.0);
    let g1 = g(1.0);
    // Ternary search for the minimizer of the convex profile.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let tmin = 0.5 * (lo + hi);
    let gmin = g(tmin);
    if gmin >= 0.0 {
        return 0.0;
    }
    let left = if g0 < 0.0 { 0.0 } else { bisect_crossing(&g, 0.0, tmin) };
    let right = if g1 < 0.0 { 1.0 } else { 1.0 - bisect_crossing(&|t| g(1.0 - t), 0.0, 1.0 - tmin) };
    (right - left).max(0.0)
}

/// Crossing of `g` from `g(a) >= 0` to `g(b) < 0`, to 1e-12 in `t`.
fn bisect_crossing(g: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Midpoint-grid estimate with one Richardson extrapolation step.
fn generic_segment_fraction(set: &GenericSet, x: &[f64], y: &[f64]) -> f64 {
    let count = |n: usize| -> f64 {
        let mut hits = 0usize;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            if (set.member)(&lerp_point(x, y, t)) {
                hits += 1;
            }
        }
        hits as f64 / n as f64
    };
    let m1 = count(10_000);
    let m2 = count(20_000);
    (2.0 * m2 - m1).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interval_union_normalizes() {
        let u = IntervalUnion::from_closed_pairs(&[[0.4, 0.6], [0.0, 0.2], [0.55, 0.7]]).unwrap();
        assert_eq!(u.parts().len(), 2);
        assert_relative_eq!(u.measure(), 0.5, epsilon = 1e-15);
        assert!(u.contains(0.65));
        assert!(!u.contains(0.3));
    }

    #[test]
    fn touching_intervals_merge_only_without_hole() {
        // [0, 0.5] and (0.5, 1] merge into [0, 1].
        let a = Interval1::closed(0.0, 0.5);
        let b = Interval1 { lo: 0.5, hi: 1.0, lo_closed: false, hi_closed: true };
        let u = IntervalUnion::new(vec![a, b]);
        assert_eq!(u.parts().len(), 1);
        // [0, 0.5) and (0.5, 1] keep the hole at 0.5.
        let a = Interval1 { lo: 0.0, hi: 0.5, lo_closed: true, hi_closed: false };
        let u = IntervalUnion::new(vec![a, b]);
        assert_eq!(u.parts().len(), 2);
        assert!(!u.contains(0.5));
    }

    #[test]
    fn complement_flips_flags() {
        let u = IntervalUnion::new(vec![Interval1 {
            lo: 0.2,
            hi: 0.5,
            lo_closed: true,
            hi_closed: false,
        }]);
        let c = u.complement_within(Interval1::closed(0.0, 1.0));
        assert_eq!(c.parts().len(), 2);
        assert_eq!(
            c.parts()[0],
            Interval1 { lo: 0.0, hi: 0.2, lo_closed: true, hi_closed: false }
        );
        assert_eq!(
            c.parts()[1],
            Interval1 { lo: 0.5, hi: 1.0, lo_closed: true, hi_closed: true }
        );
        // Complementing twice returns the original.
        let back = c.complement_within(Interval1::closed(0.0, 1.0));
        assert_eq!(back, u);
    }

    #[test]
    fn line_measure_through_square() {
        let square = Polytope::unit_cube(2).unwrap();
        let set = SetOracle::new(SetVariant::Polytope(square));
        let m = set.line_measure(&[-0.5, 0.5], &[1.5, 0.5]).unwrap();
        assert_relative_eq!(m, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn line_measure_dirac_convention() {
        let u = IntervalUnion::from_closed_pairs(&[[0.0, 0.1]]).unwrap();
        let set = SetOracle::new(SetVariant::Intervals(u));
        assert_eq!(set.line_measure(&[0.05], &[0.05]).unwrap(), 1.0);
        assert_eq!(set.line_measure(&[0.5], &[0.5]).unwrap(), 0.0);
    }

    #[test]
    fn line_measure_intervals_example() {
        let u = IntervalUnion::from_closed_pairs(&[[0.0, 0.1]]).unwrap();
        let set = SetOracle::new(SetVariant::Intervals(u));
        let m = set.line_measure(&[0.4], &[0.0]).unwrap();
        assert_relative_eq!(m, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn gauge_segment_is_exact_for_balls() {
        let ball = GaugeSet::new(2, GaugeFn::Euclidean, 1.0).unwrap();
        let set = SetOracle::new(SetVariant::Gauge(ball));
        // Horizontal segment through the center: chord from -1 to 1 out of
        // a segment of length 4 gives fraction 1/2.
        let m = set.line_measure(&[-2.0, 0.0], &[2.0, 0.0]).unwrap();
        assert_relative_eq!(m, 0.5, epsilon = 1e-10);
        // Chord at height 0.6 has half-length 0.8.
        let m = set.line_measure(&[-2.0, 0.6], &[2.0, 0.6]).unwrap();
        assert_relative_eq!(m, 0.4, epsilon = 1e-10);
        // Missing segment.
        let m = set.line_measure(&[-2.0, 1.5], &[2.0, 1.5]).unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn complement_measure() {
        let ball = GaugeSet::new(2, GaugeFn::Euclidean, 1.0).unwrap();
        let set = SetOracle::new(SetVariant::Complement(Box::new(SetVariant::Gauge(ball))));
        let m = set.line_measure(&[-2.0, 0.0], &[2.0, 0.0]).unwrap();
        assert_relative_eq!(m, 0.5, epsilon = 1e-10);
        assert!(set.contains(&[3.0, 0.0]));
        assert!(!set.contains(&[0.5, 0.0]));
    }

    #[test]
    fn generic_fallback_close_to_exact() {
        let g = GenericSet {
            dim: 1,
            member: Arc::new(|x: &[f64]| (0.2..0.5).contains(&x[0])),
        };
        let set = SetOracle::new(SetVariant::Generic(g));
        let m = set.line_measure(&[0.0], &[1.0]).unwrap();
        assert!((m - 0.3).abs() < 1e-3, "generic estimate {m}");
    }

    #[test]
    fn ambient_domain_check() {
        let f = Polytope::unit_cube(1).unwrap();
        let u = IntervalUnion::from_closed_pairs(&[[0.0, 0.1]]).unwrap();
        let set = SetOracle::with_ambient(SetVariant::Intervals(u), f).unwrap();
        assert!(set.line_measure(&[0.4], &[0.9]).is_ok());
        assert!(set.line_measure(&[0.4], &[1.5]).is_err());
    }

    #[test]
    fn json_descriptors() {
        let v: Value = serde_json::from_str(r#"{"intervals":[[0,0.1],[0.5,0.6]]}"#).unwrap();
        let s = SetOracle::from_json(&v).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&[0.55]));

        let v: Value = serde_json::from_str(r#"{"polytope":[[1,0,1],[-1,0,0],[0,1,1],[0,-1,0]]}"#)
            .unwrap();
        let s = SetOracle::from_json(&v).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[0.5, 0.5]));

        let v: Value =
            serde_json::from_str(r#"{"complement":{"gauge":"euclidean","radius":1,"dim":2}}"#)
                .unwrap();
        let s = SetOracle::from_json(&v).unwrap();
        assert!(s.contains(&[2.0, 0.0]));
        assert!(!s.contains(&[0.0, 0.0]));
    }

    #[test]
    fn sup_gauge_homogeneity() {
        let g = GaugeSet::new(3, GaugeFn::Sup, 2.0).unwrap();
        assert!(g.contains(&[1.9, -1.0, 0.0]));
        assert!(!g.contains(&[2.1, 0.0, 0.0]));
        // A non-homogeneous custom gauge is rejected.
        let bad = GaugeSet::new(
            2,
            GaugeFn::Custom(Arc::new(|x: &[f64]| norm(x) + 1.0)),
            1.0,
        );
        assert!(bad.is_err());
    }
}
