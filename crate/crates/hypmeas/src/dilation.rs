//! Segment dilation `B -> B^delta` and its dual contraction.
//!
//! `B^delta` collects the points seeing more than a `delta` fraction of
//! `B` along some segment inside the reference convex set `F`. In one
//! dimension both operations are computed exactly: for fixed `x` the
//! supremum (resp. infimum) of the segment fraction over the far endpoint
//! is attained at finitely many candidate endpoints, so membership reduces
//! to sign conditions on piecewise-linear functions whose zero sets are
//! solved in closed form, with open/closed endpoint flags tracked
//! throughout. Complements of symmetric convex gauge bodies form a second
//! exact family via pure scaling. Everything else is handled by a
//! witness-search Monte Carlo estimator that under-counts by construction,
//! hence estimates a lower bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::lerp_point;
use crate::measures::MeasureModel;
use crate::sets::{GaugeSet, Interval1, IntervalUnion, SetOracle};

/// Exact scaled-gauge dilation complement: `A_delta = {gauge >= scale * r}`
/// for `A` the complement of the open gauge body of radius `r`.
#[derive(Debug, Clone)]
pub struct GaugeScaledResult {
    pub scale: f64,
    gauge: GaugeSet,
}

impl GaugeScaledResult {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.gauge.gauge_value(x) >= self.scale * self.gauge.radius()
    }
}

/// Monte-Carlo estimate of a dilated measure; a lower-bound estimator
/// because missing witnesses only under-count membership.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub sample_count: usize,
    pub lower_bound: bool,
    /// Witness box actually used as the reference set `F`.
    pub witness_box: (Vec<f64>, Vec<f64>),
}

/// Search budget for [`estimate_dilated_measure`].
#[derive(Debug, Clone, Copy)]
pub struct DilationBudget {
    pub samples: usize,
    pub directions: usize,
}

// ---------------------------------------------------------------------------
// Exact one-dimensional dilation
// ---------------------------------------------------------------------------

fn closed_parts(u: &IntervalUnion) -> Vec<(f64, f64)> {
    u.parts().iter().map(|p| (p.lo, p.hi)).collect()
}

/// Pieces `{x in (c, limit] : |B ∩ [c, x]| - delta (x - c) > 0}` for one
/// left-side candidate `c`, walking the piecewise-linear height exactly.
/// `parts` are the coordinate spans of `B`, sorted.
fn sweep_pieces(parts: &[(f64, f64)], c: f64, limit: f64, delta: f64) -> Vec<Interval1> {
    let mut breaks: Vec<f64> = vec![c];
    for &(lo, hi) in parts {
        for v in [lo, hi] {
            if v > c && v < limit {
                breaks.push(v);
            }
        }
    }
    breaks.push(limit);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let inside = |x: f64| parts.iter().any(|&(lo, hi)| x >= lo && x < hi);
    let mut pieces = Vec::new();
    let mut h = 0.0_f64; // value of |B ∩ [c, x]| - delta (x - c) at the cursor
    let mut open_start: Option<f64> = None;
    for w in breaks.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let slope = if inside(0.5 * (x0 + x1)) { 1.0 - delta } else { -delta };
        let h1 = h + slope * (x1 - x0);
        if h <= 0.0 && h1 > 0.0 {
            // Upward crossing inside the segment.
            let xc = x0 + (0.0 - h) / slope;
            open_start = Some(xc);
        } else if h > 0.0 && h1 <= 0.0 {
            let xc = x0 + (0.0 - h) / slope;
            if let Some(s) = open_start.take() {
                pieces.push(Interval1 { lo: s, hi: xc, lo_closed: false, hi_closed: false });
            }
        }
        h = h1;
    }
    if let Some(s) = open_start {
        // Still positive at the limit: the limit point itself qualifies.
        pieces.push(Interval1 { lo: s, hi: limit, lo_closed: false, hi_closed: true });
    }
    pieces
}

fn reflect_union(parts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = parts.iter().map(|&(lo, hi)| (-hi, -lo)).collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

fn reflect_pieces(pieces: Vec<Interval1>) -> Vec<Interval1> {
    pieces
        .into_iter()
        .map(|p| Interval1 {
            lo: -p.hi,
            hi: -p.lo,
            lo_closed: p.hi_closed,
            hi_closed: p.lo_closed,
        })
        .collect()
}

fn check_inside_window(b: &IntervalUnion, window: Interval1) -> Result<()> {
    for p in b.parts() {
        if p.lo < window.lo - 1e-12 || p.hi > window.hi + 1e-12 {
            return Err(Error::domain(format!(
                "set part [{}, {}] escapes the reference interval [{}, {}]",
                p.lo, p.hi, window.lo, window.hi
            )));
        }
    }
    Ok(())
}

/// Exact 1D dilation `B^delta` inside the window `F`.
///
/// For every `x` the supremum of `m_[x,y](B)` over `y in F` is attained at
/// a far endpoint taken from `{F boundary} ∪ {part endpoints of B}`
/// (the segment fraction increases toward `B` through gaps and decreases
/// inside `B`), so the strict-inequality region is a finite union of
/// intervals with exactly solvable endpoints. `B` itself is always
/// included via the Dirac convention.
pub fn dilate_intervals_1d(
    b: &IntervalUnion,
    window: Interval1,
    delta: f64,
) -> Result<IntervalUnion> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::domain(format!("delta must lie in [0, 1), got {delta}")));
    }
    check_inside_window(b, window)?;
    if b.is_empty() {
        return Ok(IntervalUnion::empty());
    }
    if delta == 0.0 {
        // Any positive-measure part is seen from everywhere in F.
        if b.measure() > 0.0 {
            return Ok(IntervalUnion::new(vec![window]));
        }
        return Ok(b.clone());
    }
    let parts = closed_parts(b);
    let mut pieces: Vec<Interval1> = b.parts().to_vec();

    // Left-side candidates: window start and part left endpoints.
    let mut left_candidates = vec![window.lo];
    left_candidates.extend(parts.iter().map(|&(lo, _)| lo));
    left_candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    left_candidates.dedup();
    for &c in &left_candidates {
        pieces.extend(sweep_pieces(&parts, c, window.hi, delta));
    }

    // Right-side candidates by reflection.
    let rparts = reflect_union(&parts);
    let mut right_candidates = vec![-window.hi];
    right_candidates.extend(rparts.iter().map(|&(lo, _)| lo));
    right_candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    right_candidates.dedup();
    for &c in &right_candidates {
        pieces.extend(reflect_pieces(sweep_pieces(&rparts, c, -window.lo, delta)));
    }

    Ok(IntervalUnion::new(pieces))
}

/// Closed pieces `{x : |A ∩ [c', x]| - (1 - delta) |x - c'| >= 0}` for one
/// candidate, used by the direct contraction sweep. Mirrors `sweep_pieces`
/// with a non-strict threshold.
fn sweep_pieces_ge(parts: &[(f64, f64)], c: f64, limit: f64, level: f64) -> Vec<Interval1> {
    let mut breaks: Vec<f64> = vec![c];
    for &(lo, hi) in parts {
        for v in [lo, hi] {
            if v > c && v < limit {
                breaks.push(v);
            }
        }
    }
    breaks.push(limit);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let inside = |x: f64| parts.iter().any(|&(lo, hi)| x >= lo && x < hi);
    let mut pieces = Vec::new();
    let mut h = 0.0_f64;
    let mut start: Option<f64> = if level <= 0.0 { Some(c) } else { None };
    // h(c) = 0 >= 0 always: the candidate point itself satisfies the
    // non-strict condition.
    if start.is_none() {
        start = Some(c);
    }
    for w in breaks.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let slope = if inside(0.5 * (x0 + x1)) { 1.0 - level } else { -level };
        let h1 = h + slope * (x1 - x0);
        if h >= 0.0 && h1 < 0.0 {
            let xc = x0 + (0.0 - h) / slope;
            if let Some(s) = start.take() {
                pieces.push(Interval1 { lo: s, hi: xc, lo_closed: true, hi_closed: true });
            }
        } else if h < 0.0 && h1 >= 0.0 {
            let xc = x0 + (0.0 - h) / slope;
            start = Some(xc);
        }
        h = h1;
    }
    if let Some(s) = start {
        pieces.push(Interval1 { lo: s, hi: limit, lo_closed: true, hi_closed: true });
    }
    pieces
}

fn intersect_unions(a: &IntervalUnion, b: &IntervalUnion) -> IntervalUnion {
    let mut out = IntervalUnion::empty();
    for p in b.parts() {
        out = out.union(&a.intersect_window(*p));
    }
    out
}

/// Direct computation of the contraction `A_delta` inside the window:
/// points of `A` whose every segment fraction of `A` stays at least
/// `1 - delta`. This is the independent dual route to
/// [`dilate_intervals_1d`] (complementation exchanges the two).
pub fn contract_intervals_1d(
    a: &IntervalUnion,
    window: Interval1,
    delta: f64,
) -> Result<IntervalUnion> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::domain(format!("delta must lie in [0, 1), got {delta}")));
    }
    check_inside_window(a, window)?;
    let level = 1.0 - delta;
    let parts = closed_parts(a);
    let mut result = a.clone();

    // Infimum over right-side far endpoints: binding candidates are gap
    // right ends (equivalently complement-part right edges) and the window
    // end.
    let gaps = a.complement_within(window);
    let mut right_candidates: Vec<f64> = gaps.parts().iter().map(|p| p.hi).collect();
    right_candidates.push(window.hi);
    right_candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    right_candidates.dedup();
    for &c in &right_candidates {
        // Condition in terms of x < c: |A ∩ [x, c]| - level (c - x) >= 0.
        // Reflect so the sweep runs rightward from the candidate. Points
        // right of the candidate are unconstrained by it.
        let rparts = reflect_union(&parts);
        let mut pieces = reflect_pieces(sweep_pieces_ge(&rparts, -c, -window.lo, level));
        if c < window.hi {
            pieces.push(Interval1 {
                lo: c,
                hi: window.hi,
                lo_closed: true,
                hi_closed: window.hi_closed,
            });
        }
        result = intersect_unions(&result, &IntervalUnion::new(pieces));
    }

    let mut left_candidates: Vec<f64> = gaps.parts().iter().map(|p| p.lo).collect();
    left_candidates.push(window.lo);
    left_candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    left_candidates.dedup();
    for &c in &left_candidates {
        let mut pieces = sweep_pieces_ge(&parts, c, window.hi, level);
        if c > window.lo {
            pieces.push(Interval1 {
                lo: window.lo,
                hi: c,
                lo_closed: window.lo_closed,
                hi_closed: true,
            });
        }
        result = intersect_unions(&result, &IntervalUnion::new(pieces));
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// Exact symmetric-convex-complement family
// ---------------------------------------------------------------------------

/// For `A` the complement of the open symmetric convex body
/// `B = {gauge < r}`, the contraction is the complement of the scaled
/// body: `A_delta = {x : gauge(x) >= (2/delta - 1) r}`.
pub fn dilate_symmetric_complement(gauge: &GaugeSet, delta: f64) -> Result<GaugeScaledResult> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!(
            "delta must lie in (0, 1] for the scaled-gauge family, got {delta}"
        )));
    }
    Ok(GaugeScaledResult { scale: 2.0 / delta - 1.0, gauge: gauge.clone() })
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimator
// ---------------------------------------------------------------------------

/// Estimate `mu(B^delta)` for a sampleable model by witness search.
///
/// Each sampled point `x` is declared inside `B^delta` when some candidate
/// far endpoint `y` achieves `m_[x,y](B) > delta`; candidates are random
/// model draws, the axis-aligned extreme points of the witness box, and a
/// geometric refinement along the best segment found.
pub fn estimate_dilated_measure(
    model: &MeasureModel,
    set: &SetOracle,
    delta: f64,
    budget: DilationBudget,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if model.dim() != set.dim() {
        return Err(Error::domain("model and set dimensions differ"));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::domain(format!("delta must lie in [0, 1), got {delta}")));
    }
    if budget.samples < 1_000 {
        return Err(Error::budget("dilation estimate needs at least 10^3 samples"));
    }
    if budget.directions < 4 {
        return Err(Error::budget("dilation estimate needs at least 4 witness directions"));
    }
    let dim = model.dim();
    let cloud = model.sample(budget.samples, seed)?;

    // Witness box: the ambient body's box when available, otherwise the
    // sample bounding box inflated so far witnesses exist.
    let (mut lo, mut hi) = cloud.bbox();
    if let Some((slo, shi)) = model.support_bbox() {
        for j in 0..dim {
            lo[j] = lo[j].min(slo[j]);
            hi[j] = hi[j].max(shi[j]);
        }
    } else {
        for j in 0..dim {
            let w = (hi[j] - lo[j]).max(1e-6);
            lo[j] -= 0.5 * w;
            hi[j] += 0.5 * w;
        }
    }
    let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let mut box_extremes: Vec<Vec<f64>> = Vec::with_capacity(2 * dim);
    for j in 0..dim {
        let mut p = center.clone();
        p[j] = lo[j];
        box_extremes.push(p);
        let mut p = center.clone();
        p[j] = hi[j];
        box_extremes.push(p);
    }
    let clamp_into_box = |p: &mut Vec<f64>| {
        for j in 0..dim {
            p[j] = p[j].clamp(lo[j], hi[j]);
        }
    };

    let hits: usize = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.point(i);
            if set.contains(x) {
                return 1usize;
            }
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let measure_of = |y: &[f64]| -> f64 {
                if y == x {
                    0.0
                } else {
                    set.line_measure(x, y).unwrap_or(0.0)
                }
            };
            let mut best = (0.0_f64, None::<Vec<f64>>);
            let mut candidates: Vec<Vec<f64>> = box_extremes.clone();
            let draws = model
                .sample(budget.directions, rng.gen())
                .expect("witness sampling failed");
            for y in draws.iter() {
                let mut y = y.to_vec();
                clamp_into_box(&mut y);
                candidates.push(y);
            }
            for y in &candidates {
                let m = measure_of(y);
                if m > delta {
                    return 1;
                }
                if m > best.0 {
                    best = (m, Some(y.clone()));
                }
            }
            // Refinement: rescale the best segment found.
            if let (m0, Some(ybest)) = best {
                if m0 > 0.0 {
                    for s in [0.25, 0.5, 0.75, 1.5, 2.5, 4.0, 8.0] {
                        let mut y = lerp_point(x, &ybest, s);
                        clamp_into_box(&mut y);
                        if measure_of(&y) > delta {
                            return 1;
                        }
                    }
                }
            }
            0
        })
        .sum();

    let value = hits as f64 / cloud.len() as f64;
    Ok(MonteCarloEstimate {
        value,
        std_error: crate::stats::binomial_stderr(value, cloud.len()),
        sample_count: cloud.len(),
        lower_bound: true,
        witness_box: (lo, hi),
    })
}
