//! Adaptive one-dimensional quadrature.
//!
//! Gauss-Kronrod 7-15 panels with recursive bisection. The 15-point
//! Kronrod value is the estimate; the deviation from the embedded 7-point
//! Gauss value drives refinement. Intervals near the endpoints are split
//! off first so endpoint singularities localize instead of polluting the
//! whole error budget.

use crate::error::{Error, Result};

// Nodes on [0, 1] half-interval and weights for the GK 7-15 pair.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= h;
    gauss *= h;
    (kronrod, (kronrod - gauss).abs())
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol`.
///
/// Returns [`Error::NonConvergence`] when the panel budget is exhausted,
/// which happens for integrands that are singular inside the interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    integrate_with_breakpoints(f, a, b, &[], abs_tol)
}

/// Integrate with interior breakpoints known in advance (kinks, jumps).
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::domain(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    // Seed panels: endpoint slivers plus user breakpoints.
    let mut cuts: Vec<f64> = vec![a, a + 1e-3 * width, b - 1e-3 * width, b];
    for &p in breakpoints {
        if p > a && p < b {
            cuts.push(p);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    const MAX_PANELS: usize = 20_000;
    // Work stack of (lo, hi, estimate, error).
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (k, e) = gk15(&f, w[0], w[1]);
        stack.push((w[0], w[1], k, e));
    }
    let mut done_sum = 0.0;
    let mut done_err = 0.0;
    let mut panels = stack.len();
    while let Some((lo, hi, est, err)) = stack.pop() {
        let local_tol = abs_tol * (hi - lo) / width;
        if err <= local_tol.max(1e-300) || hi - lo < 1e-14 * width.max(1.0) {
            done_sum += est;
            done_err += err;
            continue;
        }
        if panels >= MAX_PANELS {
            return Err(Error::NonConvergence(format!(
                "quadrature exceeded {MAX_PANELS} panels on [{a}, {b}] (residual error {err:.3e})"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let (k1, e1) = gk15(&f, lo, mid);
        let (k2, e2) = gk15(&f, mid, hi);
        stack.push((lo, mid, k1, e1));
        stack.push((mid, hi, k2, e2));
        panels += 2;
    }
    // Panels at the minimum width are accepted above regardless of their
    // error estimate; a large residual here means a genuine singularity.
    if !done_err.is_finite() || done_err > 100.0 * abs_tol {
        return Err(Error::NonConvergence(format!(
            "quadrature error estimate {done_err:.3e} exceeds tolerance {abs_tol:.3e} on [{a}, {b}]"
        )));
    }
    Ok(done_sum)
}
