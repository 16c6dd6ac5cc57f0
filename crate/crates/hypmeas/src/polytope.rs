//! Halfspace polytopes in R^n.
//!
//! A polytope is an intersection of halfspaces `normal . x <= offset`.
//! Segment and line clipping are exact interval arithmetic in the line
//! parameter. Vertex enumeration (dimensions 1-3) backs exact bounding
//! boxes and volumes for uniform-body sampling.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;

const FEAS_TOL: f64 = 1e-9;

/// Closed halfspace `{x : normal . x <= offset}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        Halfspace { normal, offset }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        dot(&self.normal, x) <= self.offset + FEAS_TOL * self.scale()
    }

    fn scale(&self) -> f64 {
        crate::linalg::norm(&self.normal).max(self.offset.abs()).max(1.0)
    }
}

/// Intersection of finitely many halfspaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    /// A strictly feasible point certifying nonemptiness.
    interior: Vec<f64>,
}

impl Polytope {
    /// Build from halfspace rows, certifying nonemptiness.
    ///
    /// An interior point is found by vertex enumeration in dimensions
    /// up to 3 and by subgradient descent on the worst constraint
    /// violation otherwise.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::construction("polytope dimension must be >= 1"));
        }
        for h in &halfspaces {
            if h.normal.len() != dim {
                return Err(Error::construction(format!(
                    "halfspace normal of length {} in dimension {dim}",
                    h.normal.len()
                )));
            }
            if crate::linalg::norm(&h.normal) < 1e-14 {
                return Err(Error::construction("halfspace normal must be nonzero"));
            }
        }
        let interior = find_interior(dim, &halfspaces)?;
        Ok(Polytope { dim, halfspaces, interior })
    }

    /// Build with a caller-supplied strictly interior point.
    pub fn with_interior(
        dim: usize,
        halfspaces: Vec<Halfspace>,
        interior: Vec<f64>,
    ) -> Result<Self> {
        let p = Polytope { dim, halfspaces, interior };
        if !p.strictly_contains(&p.interior) {
            return Err(Error::construction("supplied interior point is not strictly feasible"));
        }
        Ok(p)
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn bounding_box_body(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        if dim == 0 || hi.len() != dim || lo.iter().zip(hi).any(|(a, b)| a >= b) {
            return Err(Error::construction("box bounds must satisfy lo < hi componentwise"));
        }
        let mut hs = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let mut up = vec![0.0; dim];
            up[j] = 1.0;
            hs.push(Halfspace::new(up, hi[j]));
            let mut down = vec![0.0; dim];
            down[j] = -1.0;
            hs.push(Halfspace::new(down, -lo[j]));
        }
        let interior = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        Polytope::with_interior(dim, hs, interior)
    }

    /// Unit cube `[0, 1]^dim`.
    pub fn unit_cube(dim: usize) -> Result<Self> {
        Polytope::bounding_box_body(&vec![0.0; dim], &vec![1.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    fn strictly_contains(&self, x: &[f64]) -> bool {
        self.halfspaces.iter().all(|h| dot(&h.normal, x) < h.offset - 1e-12 * h.scale())
    }

    /// Add a halfspace; the supplied point must stay strictly inside.
    pub fn clipped(&self, h: Halfspace, new_interior: Vec<f64>) -> Result<Self> {
        let mut hs = self.halfspaces.clone();
        hs.push(h);
        Polytope::with_interior(self.dim, hs, new_interior)
    }

    /// Parameter range `{t in [0,1] : (1-t)x + ty inside}`; `None` when the
    /// segment misses the polytope.
    pub fn clip_segment(&self, x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for h in &self.halfspaces {
            let a = dot(&h.normal, x) - h.offset;
            let b = dot(&h.normal, y) - dot(&h.normal, x);
            // Constraint: a + t b <= 0.
            if b.abs() < 1e-14 * h.scale() {
                if a > FEAS_TOL * h.scale() {
                    return None;
                }
            } else if b > 0.0 {
                t1 = t1.min(-a / b);
            } else {
                t0 = t0.max(-a / b);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }

    /// Parameter range `{s : x + s d inside}` for a full line; `None` when
    /// the line misses, `Err` when the polytope is unbounded along `d`.
    pub fn clip_line(&self, x: &[f64], d: &[f64]) -> Result<Option<(f64, f64)>> {
        let mut s0 = f64::NEG_INFINITY;
        let mut s1 = f64::INFINITY;
        for h in &self.halfspaces {
            let a = dot(&h.normal, x) - h.offset;
            let b = dot(&h.normal, d);
            if b.abs() < 1e-14 * h.scale() {
                if a > FEAS_TOL * h.scale() {
                    return Ok(None);
                }
            } else if b > 0.0 {
                s1 = s1.min(-a / b);
            } else {
                s0 = s0.max(-a / b);
            }
            if s0 > s1 {
                return Ok(None);
            }
        }
        if !s0.is_finite() || !s1.is_finite() {
            return Err(Error::domain("polytope is unbounded along the requested line"));
        }
        Ok(Some((s0, s1)))
    }

    /// Vertex enumeration by solving all n-subsets of active constraints.
    /// Supported in dimensions 1-3.
    pub fn vertices(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.dim;
        if n > 3 {
            return Err(Error::domain(format!(
                "vertex enumeration supports dimensions 1-3, got {n}"
            )));
        }
        let m = self.halfspaces.len();
        let mut verts: Vec<Vec<f64>> = Vec::new();
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        match n {
            1 => (0..m).for_each(|i| subsets.push(vec![i])),
            2 => {
                for i in 0..m {
                    for j in i + 1..m {
                        subsets.push(vec![i, j]);
                    }
                }
            }
            _ => {
                for i in 0..m {
                    for j in i + 1..m {
                        for k in j + 1..m {
                            subsets.push(vec![i, j, k]);
                        }
                    }
                }
            }
        }
        for idx in subsets {
            let a = DMatrix::from_fn(n, n, |r, c| self.halfspaces[idx[r]].normal[c]);
            let b = DVector::from_fn(n, |r, _| self.halfspaces[idx[r]].offset);
            let Some(sol) = a.clone().lu().solve(&b) else { continue };
            let v: Vec<f64> = sol.iter().copied().collect();
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            // Reject ill-conditioned intersections.
            let residual = (&a * DVector::from_column_slice(&v) - &b).amax();
            if residual > 1e-7 {
                continue;
            }
            if self.halfspaces.iter().all(|h| dot(&h.normal, &v) <= h.offset + 1e-8 * h.scale())
                && !verts
                    .iter()
                    .any(|w| w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum::<f64>() < 1e-8)
            {
                verts.push(v);
            }
        }
        if verts.is_empty() {
            return Err(Error::domain("polytope has no vertices (unbounded or degenerate)"));
        }
        Ok(verts)
    }

    /// Exact axis-aligned bounding box from vertices (dimensions 1-3).
    pub fn bbox(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let verts = self.vertices()?;
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &verts {
            for j in 0..self.dim {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        Ok((lo, hi))
    }

    /// Exact volume (length/area/volume) in dimensions 1-3.
    pub fn volume(&self) -> Result<f64> {
        let verts = self.vertices()?;
        match self.dim {
            1 => {
                let lo = verts.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = verts.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                Ok(hi - lo)
            }
            2 => {
                let pts: Vec<[f64; 2]> = order_ccw(&verts);
                Ok(shoelace(&pts).abs())
            }
            3 => volume_3d(&verts, &self.halfspaces),
            _ => unreachable!(),
        }
    }
}

/// Order coplanar 2D points counterclockwise around their centroid.
fn order_ccw(verts: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let cx = verts.iter().map(|v| v[0]).sum::<f64>() / verts.len() as f64;
    let cy = verts.iter().map(|v| v[1]).sum::<f64>() / verts.len() as f64;
    let mut pts: Vec<[f64; 2]> = verts.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.partial_cmp(&tb).unwrap()
    });
    pts
}

fn shoelace(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        s += pts[i][0] * pts[j][1] - pts[j][0] * pts[i][1];
    }
    0.5 * s
}

/// Volume of a 3D polytope: fan of tetrahedra from the centroid over each
/// face, faces recovered as the vertices saturating a halfspace.
fn volume_3d(verts: &[Vec<f64>], halfspaces: &[Halfspace]) -> Result<f64> {
    let n = verts.len() as f64;
    let centroid: Vec<f64> = (0..3).map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / n).collect();
    let mut total = 0.0;
    for h in halfspaces {
        let scale = h.scale();
        let face: Vec<&Vec<f64>> = verts
            .iter()
            .filter(|v| (dot(&h.normal, v) - h.offset).abs() <= 1e-7 * scale)
            .collect();
        if face.len() < 3 {
            continue;
        }
        let fc: Vec<f64> =
            (0..3).map(|j| face.iter().map(|v| v[j]).sum::<f64>() / face.len() as f64).collect();
        let nrm = crate::linalg::norm(&h.normal);
        let unit: Vec<f64> = h.normal.iter().map(|x| x / nrm).collect();
        let seed = if unit[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let u = cross3(&unit, &seed);
        let un = crate::linalg::norm(&u);
        let u: Vec<f64> = u.iter().map(|x| x / un).collect();
        let w = cross3(&unit, &u);
        let mut angled: Vec<(f64, &Vec<f64>)> = face
            .iter()
            .map(|v| {
                let d = crate::linalg::sub(v, &fc);
                (dot(&d, &w).atan2(dot(&d, &u)), *v)
            })
            .collect();
        angled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for i in 0..angled.len() {
            let a = angled[i].1;
            let b = angled[(i + 1) % angled.len()].1;
            total += tetra_volume(&centroid, &fc, a, b);
        }
    }
    Ok(total)
}

fn cross3(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn tetra_volume(p: &[f64], a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u = crate::linalg::sub(a, p);
    let v = crate::linalg::sub(b, p);
    let w = crate::linalg::sub(c, p);
    (dot(&u, &cross3(&v, &w)) / 6.0).abs()
}

fn find_interior(dim: usize, halfspaces: &[Halfspace]) -> Result<Vec<f64>> {
    if halfspaces.is_empty() {
        return Ok(vec![0.0; dim]);
    }
    if dim <= 3 {
        let probe = Polytope { dim, halfspaces: halfspaces.to_vec(), interior: vec![0.0; dim] };
        if let Ok(verts) = probe.vertices() {
            let n = verts.len() as f64;
            let c: Vec<f64> =
                (0..dim).map(|j| verts.iter().map(|v| v[j]).sum::<f64>() / n).collect();
            if probe.strictly_contains(&c) {
                return Ok(c);
            }
        }
    }
    // Subgradient descent on the worst normalized violation.
    let mut x = vec![0.0; dim];
    let mut step = 1.0;
    for _ in 0..5000 {
        let (worst, idx) = halfspaces
            .iter()
            .enumerate()
            .map(|(i, h)| ((dot(&h.normal, &x) - h.offset) / crate::linalg::norm(&h.normal), i))
            .fold((f64::NEG_INFINITY, 0), |acc, (v, i)| if v > acc.0 { (v, i) } else { acc });
        if worst < -1e-9 {
            return Ok(x);
        }
        let h = &halfspaces[idx];
        let nn = crate::linalg::norm(&h.normal);
        for (xi, ni) in x.iter_mut().zip(&h.normal) {
            *xi -= ni / nn * (worst + step);
        }
        step *= 0.999;
    }
    Err(Error::construction("could not certify a feasible interior point for the halfspace system"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_cube_basics() {
        let p = Polytope::unit_cube(2).unwrap();
        assert!(p.contains(&[0.5, 0.5]));
        assert!(!p.contains(&[1.2, 0.5]));
        let (lo, hi) = p.bbox().unwrap();
        assert_eq!(lo, vec![0.0, 0.0]);
        assert_eq!(hi, vec![1.0, 1.0]);
        assert_relative_eq!(p.volume().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn segment_clip_through_square() {
        let p = Polytope::unit_cube(2).unwrap();
        let r = p.clip_segment(&[-0.5, 0.5], &[1.5, 0.5]).unwrap();
        assert_relative_eq!(r.0, 0.25, epsilon = 1e-12);
        assert_relative_eq!(r.1, 0.75, epsilon = 1e-12);
        assert!(p.clip_segment(&[-0.5, 2.0], &[1.5, 2.0]).is_none());
    }

    #[test]
    fn triangle_area() {
        // x >= 0, y >= 0, x + y <= 1.
        let hs = vec![
            Halfspace::new(vec![-1.0, 0.0], 0.0),
            Halfspace::new(vec![0.0, -1.0], 0.0),
            Halfspace::new(vec![1.0, 1.0], 1.0),
        ];
        let p = Polytope::from_halfspaces(2, hs).unwrap();
        assert_relative_eq!(p.volume().unwrap(), 0.5, epsilon = 1e-12);
        assert!(p.contains(p.interior_point()));
    }

    #[test]
    fn tetrahedron_volume() {
        let hs = vec![
            Halfspace::new(vec![-1.0, 0.0, 0.0], 0.0),
            Halfspace::new(vec![0.0, -1.0, 0.0], 0.0),
            Halfspace::new(vec![0.0, 0.0, -1.0], 0.0),
            Halfspace::new(vec![1.0, 1.0, 1.0], 1.0),
        ];
        let p = Polytope::from_halfspaces(3, hs).unwrap();
        assert_relative_eq!(p.volume().unwrap(), 1.0 / 6.0, epsilon = 1e-10);
    }

    #[test]
    fn cube_3d_volume() {
        let p = Polytope::bounding_box_body(&[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_relative_eq!(p.volume().unwrap(), 8.0, epsilon = 1e-9);
    }

    #[test]
    fn empty_polytope_rejected() {
        let hs = vec![
            Halfspace::new(vec![1.0], 0.0),
            Halfspace::new(vec![-1.0], -1.0), // x >= 1 and x <= 0
        ];
        assert!(Polytope::from_halfspaces(1, hs).is_err());
    }

    #[test]
    fn line_clip_and_unbounded() {
        let p = Polytope::unit_cube(2).unwrap();
        let (s0, s1) = p.clip_line(&[0.5, 0.5], &[1.0, 0.0]).unwrap().unwrap();
        assert_relative_eq!(s0, -0.5, epsilon = 1e-12);
        assert_relative_eq!(s1, 0.5, epsilon = 1e-12);

        let open =
            Polytope::with_interior(1, vec![Halfspace::new(vec![-1.0], 0.0)], vec![1.0]).unwrap();
        assert!(open.clip_line(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn interior_search_high_dim() {
        let p = Polytope::from_halfspaces(
            5,
            (0..5)
                .flat_map(|j| {
                    let mut up = vec![0.0; 5];
                    up[j] = 1.0;
                    let mut dn = vec![0.0; 5];
                    dn[j] = -1.0;
                    [Halfspace::new(up, 2.0), Halfspace::new(dn, 1.0)]
                })
                .collect(),
        )
        .unwrap();
        assert!(p.contains(p.interior_point()));
    }
}
