//! Critical-value scan: seeded Lagrange-condition refinement.
//!
//! A phase point is critical for `F` when some combination
//! `cos(t) dH - sin(t) dJ` vanishes on the tangent space, i.e. lies in the
//! span of the constraint differentials. Seeds from a chart grid are refined
//! by Gauss-Newton (minimum-norm steps) on the unknowns `(x, t, mu)`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::Serialize;

use super::{constraint_residual, gram_det, project, tangent_projector, IntegrableSystem, PhasePoint, Window};
use crate::format;
use crate::linalg::min_norm_solve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Grid points per chart dimension.
    pub grid: usize,
    /// Acceptance threshold on the Gram determinant at the witness.
    pub tol: f64,
    /// Witnesses closer than this in the `(J, H)` plane are merged.
    pub dedupe_radius: f64,
    pub max_iter: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            grid: 10,
            tol: 1e-10,
            dedupe_radius: 1e-4,
            max_iter: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValue {
    #[serde(serialize_with = "format::ser_real")]
    pub j: f64,
    #[serde(serialize_with = "format::ser_real")]
    pub h: f64,
    #[serde(serialize_with = "format::ser_reals")]
    pub witness: Vec<f64>,
    #[serde(serialize_with = "format::ser_real")]
    pub gram_det: f64,
    /// Rank of `dF` on the tangent space at the witness (0 or 1).
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub points: Vec<CriticalValue>,
    pub seeds: usize,
    pub converged: usize,
    pub nonconverged: usize,
    pub outside_window: usize,
    pub duplicates: usize,
}

/// Finite-difference Jacobian of a vector-valued function (Hessian when `f`
/// is a gradient).
fn fd_jacobian(f: impl Fn(&PhasePoint) -> PhasePoint, x: &PhasePoint) -> DMatrix<f64> {
    let n = x.len();
    let h = 1e-6 * (1.0 + x.amax());
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        out.set_column(j, &((f(&xp) - f(&xm)) / (2.0 * h)));
    }
    out
}

fn residual(sys: &dyn IntegrableSystem, x: &PhasePoint, t: f64, mu: &[f64]) -> DVector<f64> {
    let n = x.len();
    let mut top = sys.energy_gradient(x) * t.cos() - sys.momentum_gradient(x) * t.sin();
    for (g, m) in sys.constraint_gradients(x).iter().zip(mu) {
        top -= g * *m;
    }
    let c = sys.constraints(x);
    let mut r = DVector::zeros(n + c.len());
    r.rows_mut(0, n).copy_from(&top);
    for (i, v) in c.iter().enumerate() {
        r[n + i] = *v;
    }
    r
}

fn jacobian(sys: &dyn IntegrableSystem, x: &PhasePoint, t: f64, mu: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let grads = sys.constraint_gradients(x);
    let c = grads.len();
    let mut jac = DMatrix::zeros(n + c, n + 1 + c);
    let mut hx =
        fd_jacobian(|y| sys.energy_gradient(y), x) * t.cos() - fd_jacobian(|y| sys.momentum_gradient(y), x) * t.sin();
    for (a, m) in mu.iter().enumerate() {
        hx -= fd_jacobian(|y| sys.constraint_gradients(y).swap_remove(a), x) * *m;
    }
    jac.view_mut((0, 0), (n, n)).copy_from(&hx);
    let dt = -sys.energy_gradient(x) * t.sin() - sys.momentum_gradient(x) * t.cos();
    jac.view_mut((0, n), (n, 1)).copy_from(&dt);
    for (a, g) in grads.iter().enumerate() {
        jac.view_mut((0, n + 1 + a), (n, 1)).copy_from(&(-g));
        jac.view_mut((n + a, 0), (1, n)).copy_from(&g.transpose());
    }
    jac
}

/// Initial angle and multipliers at `x`: the combination of tangential
/// gradients with the smallest norm.
fn initial_multipliers(sys: &dyn IntegrableSystem, x: &PhasePoint) -> (f64, Vec<f64>) {
    let p = tangent_projector(sys, x);
    let gj = &p * sys.momentum_gradient(x);
    let gh = &p * sys.energy_gradient(x);
    let m = Matrix2::new(gh.dot(&gh), -gh.dot(&gj), -gh.dot(&gj), gj.dot(&gj));
    let eig = m.symmetric_eigen();
    let i = if eig.eigenvalues[0] <= eig.eigenvalues[1] { 0 } else { 1 };
    let v = eig.eigenvectors.column(i);
    let t = v[1].atan2(v[0]);
    let grads = sys.constraint_gradients(x);
    if grads.is_empty() {
        return (t, Vec::new());
    }
    let g = DMatrix::from_columns(&grads);
    let rhs = sys.energy_gradient(x) * t.cos() - sys.momentum_gradient(x) * t.sin();
    let mu = min_norm_solve(&g, &rhs);
    (t, mu.iter().copied().collect())
}

/// Refines one seed; `None` if Gauss-Newton does not reach a critical point.
pub(crate) fn refine(sys: &dyn IntegrableSystem, seed: PhasePoint, opts: &ScanOptions) -> Option<PhasePoint> {
    let mut x = project(sys, seed);
    let (mut t, mut mu) = initial_multipliers(sys, &x);
    let n = x.len();
    let scale = |x: &PhasePoint| 1.0 + sys.energy_gradient(x).norm() + sys.momentum_gradient(x).norm();
    for _ in 0..opts.max_iter {
        let r = residual(sys, &x, t, &mu);
        if r.norm() < 1e-14 * scale(&x) {
            break;
        }
        let jac = jacobian(sys, &x, t, &mu);
        let mut step = min_norm_solve(&jac, &(-r));
        let cap = 0.5 * (1.0 + x.norm());
        let sn = step.rows(0, n).norm();
        if sn > cap {
            step *= cap / sn;
        }
        x += step.rows(0, n);
        t += step[n];
        for (a, m) in mu.iter_mut().enumerate() {
            *m += step[n + 1 + a];
        }
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        if step.norm() < 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    let x = project(sys, x);
    if constraint_residual(sys, &x) > 1e-12 || gram_det(sys, &x) >= opts.tol {
        return None;
    }
    Some(x)
}

fn tangential_rank(sys: &dyn IntegrableSystem, x: &PhasePoint) -> usize {
    let p = tangent_projector(sys, x);
    let gj = (&p * sys.momentum_gradient(x)).norm();
    let gh = (&p * sys.energy_gradient(x)).norm();
    if gj < 1e-7 && gh < 1e-7 {
        0
    } else {
        1
    }
}

fn seeds(sys: &dyn IntegrableSystem, window: &Window, grid: usize) -> Vec<PhasePoint> {
    let b = sys.chart_box(window);
    let g = grid.max(2);
    let coord = |d: usize, k: usize| b[d].0 + (b[d].1 - b[d].0) * (k as f64 + 0.5) / g as f64;
    let mut out = Vec::with_capacity(g.pow(4));
    for i0 in 0..g {
        for i1 in 0..g {
            for i2 in 0..g {
                for i3 in 0..g {
                    out.push(sys.chart(&[coord(0, i0), coord(1, i1), coord(2, i2), coord(3, i3)]));
                }
            }
        }
    }
    out
}

/// Critical values of `F` inside `window`, sorted by `(J, H)` and
/// deduplicated. Catalog fixed points inside the window are always included.
pub fn critical_scan(sys: &dyn IntegrableSystem, window: &Window, opts: &ScanOptions) -> ScanReport {
    let seeds = seeds(sys, window, opts.grid);
    let n_seeds = seeds.len();

    #[cfg(feature = "parallel")]
    let refined: Vec<Option<PhasePoint>> = {
        use rayon::prelude::*;
        seeds.into_par_iter().map(|s| refine(sys, s, opts)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let refined: Vec<Option<PhasePoint>> = seeds.into_iter().map(|s| refine(sys, s, opts)).collect();

    let nonconverged = refined.iter().filter(|r| r.is_none()).count();
    let catalog = sys
        .fixed_point_catalog()
        .into_iter()
        .map(|p| PhasePoint::from_vec(p.location));
    let mut found: Vec<(bool, PhasePoint)> = catalog.map(|x| (true, x)).collect();
    found.extend(refined.into_iter().flatten().map(|x| (false, x)));

    let mut candidates = Vec::new();
    let mut outside = 0;
    for (exact, x) in found {
        let (j, h) = (sys.momentum(&x), sys.energy(&x));
        if !window.contains(j, h) {
            outside += 1;
            continue;
        }
        let cv = CriticalValue {
            j,
            h,
            gram_det: gram_det(sys, &x),
            rank: tangential_rank(sys, &x),
            witness: x.iter().copied().collect(),
        };
        candidates.push((!exact, cv));
    }
    // catalog points and rank-0 points first so they survive deduplication
    candidates.sort_by(|(ea, a), (eb, b)| {
        ea.cmp(eb)
            .then(a.rank.cmp(&b.rank))
            .then(a.j.total_cmp(&b.j))
            .then(a.h.total_cmp(&b.h))
    });
    let total = candidates.len();
    let points = dedupe(candidates.into_iter().map(|(_, c)| c).collect(), opts.dedupe_radius);
    ScanReport {
        duplicates: total - points.len(),
        points,
        seeds: n_seeds,
        converged: n_seeds - nonconverged,
        nonconverged,
        outside_window: outside,
    }
}

fn dedupe(candidates: Vec<CriticalValue>, radius: f64) -> Vec<CriticalValue> {
    let r = radius.max(f64::MIN_POSITIVE);
    let key = |j: f64, h: f64| ((j / r).floor() as i64, (h / r).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut kept: Vec<CriticalValue> = Vec::new();
    for c in candidates {
        let (kj, kh) = key(c.j, c.h);
        let mut dup = false;
        'outer: for dj in -1..=1 {
            for dh in -1..=1 {
                if let Some(ids) = buckets.get(&(kj + dj, kh + dh)) {
                    for &i in ids {
                        if (kept[i].j - c.j).hypot(kept[i].h - c.h) < r {
                            dup = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !dup {
            buckets.entry((kj, kh)).or_default().push(kept.len());
            kept.push(c);
        }
    }
    kept.sort_by(|a, b| a.j.total_cmp(&b.j).then(a.h.total_cmp(&b.h)));
    kept
}
