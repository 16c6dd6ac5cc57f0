//! Exact convex-polygon arithmetic in the plane.
//!
//! Backs the tight-tolerance localization backend: Sutherland-Hodgman
//! halfplane clipping plus closed-form moment integrals (area, centroid,
//! second moments) from Green's theorem. All quantities are exact up to
//! floating rounding, no sampling involved.

use crate::error::{Error, Result};

/// Convex polygon, vertices in counterclockwise order.
#[derive(Debug, Clone)]
pub struct Polygon {
    verts: Vec<[f64; 2]>,
}

/// Area-normalized first and second moments of a polygon.
#[derive(Debug, Clone, Copy)]
pub struct PolygonMoments {
    pub area: f64,
    pub centroid: [f64; 2],
    /// Central second moments: covariance of the uniform measure.
    pub cov: [[f64; 2]; 2],
}

impl Polygon {
    pub fn new(verts: Vec<[f64; 2]>) -> Result<Self> {
        if verts.len() < 3 {
            return Err(Error::construction("polygon needs at least 3 vertices"));
        }
        let p = Polygon { verts };
        if p.signed_area() <= 0.0 {
            return Err(Error::construction("polygon vertices must be counterclockwise"));
        }
        Ok(p)
    }

    pub fn unit_square() -> Self {
        Polygon { verts: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] }
    }

    /// Regular n-gon inscribed in the circle of radius `r` at `center`.
    pub fn regular_ngon(center: [f64; 2], r: f64, n: usize) -> Result<Self> {
        if n < 3 || r <= 0.0 {
            return Err(Error::construction("regular polygon needs n >= 3 and r > 0"));
        }
        let verts = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [center[0] + r * a.cos(), center[1] + r * a.sin()]
            })
            .collect();
        Ok(Polygon { verts })
    }

    pub fn verts(&self) -> &[[f64; 2]] {
        &self.verts
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.verts.len();
        let mut s = 0.0;
        for i in 0..n {
            let [x0, y0] = self.verts[i];
            let [x1, y1] = self.verts[(i + 1) % n];
            s += x0 * y1 - x1 * y0;
        }
        0.5 * s
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Area, centroid and central covariance from edge-wise Green's
    /// theorem integrals.
    pub fn moments(&self) -> PolygonMoments {
        let n = self.verts.len();
        let (mut a, mut mx, mut my) = (0.0, 0.0, 0.0);
        let (mut ixx, mut ixy, mut iyy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let [x0, y0] = self.verts[i];
            let [x1, y1] = self.verts[(i + 1) % n];
            let cross = x0 * y1 - x1 * y0;
            a += cross;
            mx += (x0 + x1) * cross;
            my += (y0 + y1) * cross;
            ixx += (x0 * x0 + x0 * x1 + x1 * x1) * cross;
            iyy += (y0 * y0 + y0 * y1 + y1 * y1) * cross;
            ixy += (x0 * y1 + 2.0 * x0 * y0 + 2.0 * x1 * y1 + x1 * y0) * cross;
        }
        a *= 0.5;
        mx /= 6.0;
        my /= 6.0;
        ixx /= 12.0;
        iyy /= 12.0;
        ixy /= 24.0;
        let cx = mx / a;
        let cy = my / a;
        PolygonMoments {
            area: a,
            centroid: [cx, cy],
            cov: [
                [ixx / a - cx * cx, ixy / a - cx * cy],
                [ixy / a - cx * cy, iyy / a - cy * cy],
            ],
        }
    }

    pub fn centroid(&self) -> [f64; 2] {
        self.moments().centroid
    }

    /// Exact integral of the affine function `c + g . x` over the polygon.
    pub fn integrate_affine(&self, c: f64, g: [f64; 2]) -> f64 {
        let m = self.moments();
        m.area * (c + g[0] * m.centroid[0] + g[1] * m.centroid[1])
    }

    /// Clip by the halfplane `{x : n . x <= off}` (Sutherland-Hodgman).
    /// Returns `None` when the intersection is empty or degenerate.
    pub fn clip_halfplane(&self, n: [f64; 2], off: f64) -> Option<Polygon> {
        let val = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - off;
        let m = self.verts.len();
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(m + 2);
        for i in 0..m {
            let cur = self.verts[i];
            let nxt = self.verts[(i + 1) % m];
            let vc = val(&cur);
            let vn = val(&nxt);
            if vc <= 0.0 {
                out.push(cur);
            }
            if (vc < 0.0 && vn > 0.0) || (vc > 0.0 && vn < 0.0) {
                let t = vc / (vc - vn);
                out.push([cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])]);
            }
        }
        // Drop duplicate consecutive points produced by vertices on the line.
        let mut dedup: Vec<[f64; 2]> = Vec::with_capacity(out.len());
        for p in out {
            if dedup.last().map_or(true, |q| (q[0] - p[0]).abs() + (q[1] - p[1]).abs() > 1e-14) {
                dedup.push(p);
            }
        }
        if dedup.len() >= 2 {
            let first = dedup[0];
            let last = *dedup.last().unwrap();
            if (first[0] - last[0]).abs() + (first[1] - last[1]).abs() <= 1e-14 {
                dedup.pop();
            }
        }
        if dedup.len() < 3 {
            return None;
        }
        let poly = Polygon { verts: dedup };
        if poly.signed_area() <= 1e-300 {
            return None;
        }
        Some(poly)
    }

    /// Extents of the polygon along a unit direction: (min, max) of the
    /// projections of the vertices.
    pub fn extent_along(&self, dir: [f64; 2]) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in &self.verts {
            let s = v[0] * dir[0] + v[1] * dir[1];
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let n = self.verts.len();
        let mut best = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                let dx = self.verts[i][0] - self.verts[j][0];
                let dy = self.verts[i][1] - self.verts[j][1];
                best = best.max((dx * dx + dy * dy).sqrt());
            }
        }
        best
    }

    /// Chord length cut by the line `{p : p . dir = s}` with `dir` a unit
    /// vector: the 1D profile of the polygon along `dir`.
    pub fn chord_length(&self, dir: [f64; 2], s: f64) -> f64 {
        // Intersect each edge with the line, collect the transverse range.
        let perp = [-dir[1], dir[0]];
        let n = self.verts.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let a = self.verts[i];
            let b = self.verts[(i + 1) % n];
            let va = a[0] * dir[0] + a[1] * dir[1] - s;
            let vb = b[0] * dir[0] + b[1] * dir[1] - s;
            if (va <= 0.0 && vb >= 0.0) || (va >= 0.0 && vb <= 0.0) {
                if (va - vb).abs() < 1e-300 {
                    continue;
                }
                let t = va / (va - vb);
                let px = a[0] + t * (b[0] - a[0]);
                let py = a[1] + t * (b[1] - a[1]);
                let u = px * perp[0] + py * perp[1];
                lo = lo.min(u);
                hi = hi.max(u);
            }
        }
        if hi > lo {
            hi - lo
        } else {
            0.0
        }
    }
}
