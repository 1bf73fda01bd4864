//! Independent numerical checks: commutation of the integrals, analytic
//! gradients against finite differences, and the rotation-number holonomy
//! of regular loops.
//!
//! Holonomy. At a regular torus, let `T` be the first time the `X_H`
//! trajectory through `x` returns to the `X_J` orbit of `x`, and `Theta` the
//! `J`-time that carries `x` to the return point: `phi_H^T(x) = phi_J^Theta(x)`.
//! Continuing `Theta` around a loop of regular values changes it by
//! `2 pi k`, where `k` is the off-diagonal entry of the standard monodromy
//! matrix in a basis `(a, b)` with `b` the circle-action orbit. With this
//! convention a counterclockwise loop around a single focus-focus value
//! (positive weights `(1, 1)`) gives `k = +1`, matching the Euler number of
//! the preimage of the loop.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::format;
use crate::integrator::{integrate_observed, IntegratorOptions};
use crate::linalg::min_norm_solve;
use crate::monodromy::{orders_on_loop, LoopSpec};
use crate::systems::{
    constraint_residual, critical_scan, flow, poisson_bracket, project, tangent_basis, vector_field_unchecked,
    IntegrableSystem, PhasePoint, ScanOptions, SystemError, Which, Window,
};

/// Region the random samples are drawn from.
pub const SAMPLE_WINDOW: Window = Window {
    j_min: -2.0,
    j_max: 2.0,
    h_min: -2.0,
    h_max: 2.0,
};

/// Random valid phase points, drawn uniformly in the system's chart box.
pub fn sample_points(sys: &dyn IntegrableSystem, n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = sys.chart_box(&SAMPLE_WINDOW);
    (0..n)
        .map(|_| {
            let u = [0, 1, 2, 3].map(|i| rng.random_range(b[i].0..=b[i].1));
            project(sys, sys.chart(&u))
        })
        .collect()
}

/// `max |{J, H}(x)| / (1 + |x|^4)` over sampled points.
pub fn poisson_residual(sys: &dyn IntegrableSystem, n_samples: usize, seed: u64) -> f64 {
    sample_points(sys, n_samples, seed)
        .iter()
        .map(|x| poisson_bracket(sys, x).abs() / (1.0 + x.norm().powi(4)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradCheck {
    /// Largest `|grad - fd|_inf / max(1, |grad|_inf)` over `J` and `H`.
    #[serde(serialize_with = "format::ser_real")]
    pub max_rel_error: f64,
    /// Same for derivatives along tangent directions, with finite
    /// differences taken along projected curves on the phase space.
    #[serde(serialize_with = "format::ser_real")]
    pub max_tangential_error: f64,
}

fn fd_gradient(f: impl Fn(&PhasePoint) -> f64, x: &PhasePoint, h: f64) -> PhasePoint {
    PhasePoint::from_fn(x.len(), |i, _| {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        (f(&xp) - f(&xm)) / (2.0 * h)
    })
}

/// Compares analytic gradients of `J` and `H` with central differences.
pub fn grad_check(sys: &dyn IntegrableSystem, n_samples: usize, h: f64, seed: u64) -> GradCheck {
    let constrained = !sys.constraints(&PhasePoint::zeros(sys.ambient_dim())).is_empty();
    let mut max_rel: f64 = 0.0;
    let mut max_tan: f64 = 0.0;
    for x in sample_points(sys, n_samples, seed) {
        for which in [Which::J, Which::H] {
            let f = |y: &PhasePoint| match which {
                Which::J => sys.momentum(y),
                Which::H => sys.energy(y),
            };
            let g = crate::systems::gradient(sys, which, &x);
            let fd = fd_gradient(f, &x, h);
            let scale = g.amax().max(1.0);
            max_rel = max_rel.max((&g - &fd).amax() / scale);
            if constrained {
                let basis = tangent_basis(sys, &x);
                for c in 0..basis.ncols() {
                    let b = basis.column(c).into_owned();
                    let plus = project(sys, &x + &b * h);
                    let minus = project(sys, &x - &b * h);
                    let d = (f(&plus) - f(&minus)) / (2.0 * h);
                    max_tan = max_tan.max((d - g.dot(&b)).abs() / scale);
                }
            }
        }
    }
    GradCheck {
        max_rel_error: max_rel,
        max_tangential_error: max_tan,
    }
}

/// Relative return error of `flow(J, x, 2 pi)` over sampled points.
pub fn periodicity_error(sys: &dyn IntegrableSystem, n_samples: usize, seed: u64) -> Result<f64, SystemError> {
    let opts = IntegratorOptions::default();
    let mut worst: f64 = 0.0;
    for x in sample_points(sys, n_samples, seed) {
        let r = flow(sys, Which::J, &x, std::f64::consts::TAU, &opts)?;
        worst = worst.max((&r.state - &x).norm() / (1.0 + x.norm()));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    #[error("loop is not in the regular region: {0}")]
    NotRegular(String),
    #[error("no phase point found over ({}, {}) at station {station}", value.0, value.1)]
    FiberPointNotFound { station: usize, value: (f64, f64) },
    #[error("first return to the circle orbit not found at station {station}")]
    ReturnNotFound { station: usize },
    #[error("rotation angle jumps by {jump:.3} at station {station} even with {stations} stations")]
    Discontinuity { station: usize, jump: f64, stations: usize },
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyOptions {
    pub n_stations: usize,
    pub max_stations: usize,
    pub integrator: IntegratorOptions,
    /// Grid for the regularity scan around the loop; `0` skips it.
    pub scan_grid: usize,
}

impl Default for HolonomyOptions {
    fn default() -> Self {
        HolonomyOptions {
            n_stations: 64,
            max_stations: 1024,
            integrator: IntegratorOptions::default(),
            scan_grid: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Station {
    #[serde(serialize_with = "format::ser_real")]
    pub j: f64,
    #[serde(serialize_with = "format::ser_real")]
    pub h: f64,
    /// First-return time of the `X_H` flow.
    #[serde(rename = "T", serialize_with = "format::ser_real")]
    pub return_time: f64,
    /// Continued rotation angle.
    #[serde(rename = "Theta", serialize_with = "format::ser_real")]
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyTrace {
    pub system: String,
    #[serde(rename = "loop")]
    pub loop_: LoopSpec,
    /// `n + 1` stations; the last one sits over the base point again.
    pub stations: Vec<Station>,
    #[serde(serialize_with = "format::ser_real")]
    pub k_estimate: f64,
    #[serde(serialize_with = "format::ser_real")]
    pub max_theta_jump: f64,
    pub refinements: usize,
}

/// Gauss-Newton (minimum-norm) for `F(x) = target` on the phase space.
fn solve_fiber(sys: &dyn IntegrableSystem, mut x: PhasePoint, target: (f64, f64)) -> Option<PhasePoint> {
    let n = x.len();
    for _ in 0..50 {
        let c = sys.constraints(&x);
        let mut r = DVector::zeros(2 + c.len());
        r[0] = sys.momentum(&x) - target.0;
        r[1] = sys.energy(&x) - target.1;
        for (i, v) in c.iter().enumerate() {
            r[2 + i] = *v;
        }
        if r.amax() < 1e-13 * (1.0 + target.0.abs() + target.1.abs()) {
            return Some(project(sys, x));
        }
        let mut rows = vec![
            sys.momentum_gradient(&x).transpose(),
            sys.energy_gradient(&x).transpose(),
        ];
        rows.extend(sys.constraint_gradients(&x).iter().map(|g| g.transpose()));
        let jac = DMatrix::from_rows(&rows);
        let mut step = min_norm_solve(&jac, &(-r));
        let cap = 0.25 * (1.0 + x.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        x += step;
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    let ok = (sys.momentum(&x) - target.0).abs() + (sys.energy(&x) - target.1).abs() < 1e-10
        && constraint_residual(sys, &x) < 1e-12;
    ok.then(|| project(sys, x)).filter(|_| n == sys.ambient_dim())
}

fn initial_fiber_point(sys: &dyn IntegrableSystem, target: (f64, f64)) -> Option<PhasePoint> {
    let w = Window::new(target.0 - 0.5, target.0 + 0.5, target.1 - 0.5, target.1 + 0.5);
    let b = sys.chart_box(&w);
    let g = 8;
    let mut seeds: Vec<(f64, PhasePoint)> = Vec::new();
    for i in 0..g * g * g * g {
        let idx = [i % g, (i / g) % g, (i / (g * g)) % g, i / (g * g * g)];
        let u = [0, 1, 2, 3].map(|d| b[d].0 + (b[d].1 - b[d].0) * (idx[d] as f64 + 0.5) / g as f64);
        let x = project(sys, sys.chart(&u));
        let err = (sys.momentum(&x) - target.0).hypot(sys.energy(&x) - target.1);
        seeds.push((err, x));
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    seeds
        .into_iter()
        .take(30)
        .find_map(|(_, x)| solve_fiber(sys, x, target))
}

struct ReturnMap<'a> {
    sys: &'a dyn IntegrableSystem,
    opts: IntegratorOptions,
}

impl ReturnMap<'_> {
    fn flow(&self, which: Which, x: &PhasePoint, t: f64) -> Result<PhasePoint, SystemError> {
        Ok(crate::systems::flow_unchecked(self.sys, which, x, t, &self.opts)?.state)
    }

    /// `phi_J^{-Theta}(phi_H^T(x)) - x`
    fn residual(&self, x: &PhasePoint, t: f64, theta: f64) -> Result<PhasePoint, SystemError> {
        let y = self.flow(Which::H, x, t)?;
        Ok(self.flow(Which::J, &y, -theta)? - x)
    }

    /// Newton on `(T, Theta)`; the Jacobian at a solution is exactly
    /// `[X_H(x), -X_J(x)]` because the flows commute.
    fn newton(&self, x: &PhasePoint, mut t: f64, mut theta: f64) -> Result<Option<(f64, f64)>, SystemError> {
        let xh = vector_field_unchecked(self.sys, Which::H, x);
        let xj = vector_field_unchecked(self.sys, Which::J, x);
        let jac = DMatrix::from_columns(&[xh, -xj]);
        let tol = 1e-9 * (1.0 + x.norm());
        for _ in 0..30 {
            if t <= 0.0 || !t.is_finite() {
                return Ok(None);
            }
            let g = self.residual(x, t, theta)?;
            if g.norm() < tol {
                return Ok(Some((t, theta)));
            }
            let step = min_norm_solve(&jac, &(-g));
            t += step[0];
            theta += step[1];
        }
        Ok(None)
    }

    /// First return from scratch: follow the `X_H` trajectory and try
    /// Newton from each local minimum of its distance to the `J`-orbit.
    fn first_return(&self, x: &PhasePoint) -> Result<Option<(f64, f64)>, SystemError> {
        let m = 720;
        let orbit: Vec<PhasePoint> = {
            let mut v = Vec::with_capacity(m);
            let mut y = x.clone();
            let dt = std::f64::consts::TAU / m as f64;
            for _ in 0..m {
                v.push(y.clone());
                y = self.flow(Which::J, &y, dt)?;
            }
            v
        };
        let radius = orbit.iter().map(|p| (p - x).norm()).fold(0.0, f64::max);
        let nearest = |y: &PhasePoint| -> (f64, f64) {
            let mut best = (f64::INFINITY, 0.0);
            for i in 0..m {
                let a = &orbit[i];
                let ab = &orbit[(i + 1) % m] - a;
                let s = ((y - a).dot(&ab) / ab.norm_squared().max(1e-300)).clamp(0.0, 1.0);
                let d = (y - a - &ab * s).norm();
                if d < best.0 {
                    best = (d, std::f64::consts::TAU * (i as f64 + s) / m as f64);
                }
            }
            best
        };
        let speed = vector_field_unchecked(self.sys, Which::H, x).norm().max(1e-12);
        let t_max = 400.0 * (radius.max(1e-3) / speed).max(1.0);
        let mut track: Vec<(f64, f64, f64)> = Vec::new();
        let mut d_max: f64 = 0.0;
        let mut candidates: Vec<(f64, f64)> = Vec::new();
        let constrained = !self.sys.constraints(x).is_empty();
        let opts = IntegratorOptions {
            h_init: 1e-3,
            ..self.opts
        };
        integrate_observed(
            |y| vector_field_unchecked(self.sys, Which::H, y),
            |y| if constrained { project(self.sys, y) } else { y },
            x,
            t_max,
            &opts,
            |t, y| {
                let (d, th) = nearest(y);
                d_max = d_max.max(d);
                track.push((t, d, th));
                let k = track.len();
                if k >= 3 {
                    let (a, b, c) = (track[k - 3].1, track[k - 2].1, track[k - 1].1);
                    if b <= a && b <= c && b < 0.2 * d_max {
                        candidates.push((track[k - 2].0, track[k - 2].2));
                    }
                }
                candidates.len() < 8
            },
        )
        .map_err(SystemError::from)?;
        for (t0, th0) in candidates {
            if let Some(sol) = self.newton(x, t0, th0)? {
                return Ok(Some(sol));
            }
        }
        Ok(None)
    }
}

fn check_regular(sys: &dyn IntegrableSystem, lp: &LoopSpec, opts: &HolonomyOptions) -> Result<(), HolonomyError> {
    for p in sys.fixed_point_catalog() {
        if lp.distance_to(p.f_value) < 1e-6 {
            return Err(HolonomyError::NotRegular("loop meets a fixed-point image".into()));
        }
    }
    let o = orders_on_loop(sys, lp, 4000, 0.0).map_err(|e| HolonomyError::NotRegular(e.to_string()))?;
    if !o.crossings.is_empty() {
        return Err(HolonomyError::NotRegular(format!(
            "loop crosses {} stratum image(s) of exceptional orbits",
            o.crossings.len()
        )));
    }
    if opts.scan_grid > 0 {
        let pts = lp.sample(256);
        let (mut j0, mut j1, mut h0, mut h1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (j, h) in &pts {
            j0 = j0.min(*j);
            j1 = j1.max(*j);
            h0 = h0.min(*h);
            h1 = h1.max(*h);
        }
        let pad = 0.1 * (j1 - j0).max(h1 - h0);
        let w = Window::new(j0 - pad, j1 + pad, h0 - pad, h1 + pad);
        let rep = critical_scan(
            sys,
            &w,
            &ScanOptions {
                grid: opts.scan_grid,
                ..Default::default()
            },
        );
        let size = (j1 - j0).max(h1 - h0);
        let margin = 0.02 * size;
        if let Some(c) = rep.points.iter().find(|c| lp.distance_to((c.j, c.h)) < margin) {
            return Err(HolonomyError::NotRegular(format!(
                "critical value ({}, {}) lies on the loop",
                c.j, c.h
            )));
        }
        // Critical values are sampled points of curves; nearby samples are
        // joined so that a curve passing between two of them is still seen.
        let link = 0.25 * size;
        let pts: Vec<(f64, f64)> = rep.points.iter().map(|c| (c.j, c.h)).collect();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                if (a.0 - b.0).hypot(a.1 - b.1) < link && !lp.intersect_segment(*a, *b).is_empty() {
                    return Err(HolonomyError::NotRegular(format!(
                        "a curve of critical values through ({}, {}) and ({}, {}) crosses the loop",
                        a.0, a.1, b.0, b.1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Rotation-number holonomy of a loop of regular values. The loop is used
/// with its given orientation.
pub fn rotation_holonomy(
    sys: &dyn IntegrableSystem,
    loop_: &LoopSpec,
    opts: &HolonomyOptions,
) -> Result<HolonomyTrace, HolonomyError> {
    loop_.validate().map_err(|e| HolonomyError::NotRegular(e.to_string()))?;
    check_regular(sys, loop_, opts)?;
    let rm = ReturnMap {
        sys,
        opts: opts.integrator,
    };

    let mut n = opts.n_stations.max(4);
    let mut refinements = 0;
    loop {
        match trace_once(sys, loop_, &rm, n) {
            Ok((stations, max_jump)) => {
                let k = (stations.last().unwrap().theta - stations[0].theta) / std::f64::consts::TAU;
                return Ok(HolonomyTrace {
                    system: sys.id(),
                    loop_: loop_.clone(),
                    stations,
                    k_estimate: k,
                    max_theta_jump: max_jump,
                    refinements,
                });
            }
            Err(HolonomyError::Discontinuity { station, jump, .. }) if n * 2 <= opts.max_stations => {
                let _ = (station, jump);
                n *= 2;
                refinements += 1;
            }
            Err(HolonomyError::Discontinuity { station, jump, .. }) => {
                return Err(HolonomyError::Discontinuity {
                    station,
                    jump,
                    stations: n,
                })
            }
            Err(e) => return Err(e),
        }
    }
}

fn trace_once(
    sys: &dyn IntegrableSystem,
    lp: &LoopSpec,
    rm: &ReturnMap<'_>,
    n: usize,
) -> Result<(Vec<Station>, f64), HolonomyError> {
    let p0 = lp.point_at(0.0);
    let mut x = initial_fiber_point(sys, p0).ok_or(HolonomyError::FiberPointNotFound { station: 0, value: p0 })?;
    let (mut t, mut theta) = rm
        .first_return(&x)?
        .ok_or(HolonomyError::ReturnNotFound { station: 0 })?;
    let mut stations = vec![Station {
        j: p0.0,
        h: p0.1,
        return_time: t,
        theta,
    }];
    let mut max_jump: f64 = 0.0;
    for i in 1..=n {
        let p = lp.point_at(i as f64 / n as f64);
        x = solve_fiber(sys, x, p).ok_or(HolonomyError::FiberPointNotFound { station: i, value: p })?;
        let (t1, th1) = match rm.newton(&x, t, theta)? {
            Some(s) => s,
            None => {
                return Err(HolonomyError::Discontinuity {
                    station: i,
                    jump: f64::NAN,
                    stations: n,
                })
            }
        };
        let jump = (th1 - theta).abs();
        if jump >= std::f64::consts::PI || (t1 - t).abs() > 0.5 * t {
            return Err(HolonomyError::Discontinuity {
                station: i,
                jump,
                stations: n,
            });
        }
        max_jump = max_jump.max(jump);
        t = t1;
        theta = th1;
        stations.push(Station {
            j: p.0,
            h: p.1,
            return_time: t,
            theta,
        });
    }
    Ok((stations, max_jump))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_action::WeightedFixedPoint;
    use crate::systems::{catalog_system, StratumSpec};

    /// Wraps a system and perturbs its energy or its gradient.
    struct Corrupted {
        inner: Box<dyn IntegrableSystem>,
        energy: bool,
    }

    impl IntegrableSystem for Corrupted {
        fn id(&self) -> String {
            "corrupted".into()
        }
        fn description(&self) -> String {
            String::new()
        }
        fn ambient_dim(&self) -> usize {
            self.inner.ambient_dim()
        }
        fn coordinate_names(&self) -> Vec<&'static str> {
            self.inner.coordinate_names()
        }
        fn parameters(&self) -> Vec<(String, f64)> {
            Vec::new()
        }
        fn momentum(&self, x: &PhasePoint) -> f64 {
            self.inner.momentum(x)
        }
        fn energy(&self, x: &PhasePoint) -> f64 {
            self.inner.energy(x) + if self.energy { 0.1 * x[0] } else { 0.0 }
        }
        fn momentum_gradient(&self, x: &PhasePoint) -> PhasePoint {
            self.inner.momentum_gradient(x)
        }
        fn energy_gradient(&self, x: &PhasePoint) -> PhasePoint {
            let mut g = self.inner.energy_gradient(x);
            if self.energy {
                g[0] += 0.1;
            } else {
                g[1] *= 1.001;
            }
            g
        }
        fn poisson_tensor(&self, x: &PhasePoint) -> DMatrix<f64> {
            self.inner.poisson_tensor(x)
        }
        fn constraints(&self, x: &PhasePoint) -> Vec<f64> {
            self.inner.constraints(x)
        }
        fn constraint_gradients(&self, x: &PhasePoint) -> Vec<PhasePoint> {
            self.inner.constraint_gradients(x)
        }
        fn fixed_point_catalog(&self) -> Vec<WeightedFixedPoint> {
            Vec::new()
        }
        fn strata(&self) -> Vec<StratumSpec> {
            Vec::new()
        }
        fn chart(&self, u: &[f64; 4]) -> PhasePoint {
            self.inner.chart(u)
        }
        fn chart_box(&self, w: &Window) -> [(f64, f64); 4] {
            self.inner.chart_box(w)
        }
    }

    #[test]
    fn residuals_of_catalog_systems() {
        for id in ["res:1:-2", "res:1:-1", "res:2:-3", "s2xs2", "qsp"] {
            let s = catalog_system(id, &[]).unwrap();
            assert!(poisson_residual(&*s, 300, 1) < 1e-9, "{id}");
            let g = grad_check(&*s, 100, 1e-5, 2);
            assert!(g.max_rel_error < 1e-6, "{id}: {g:?}");
            assert!(g.max_tangential_error < 1e-5, "{id}: {g:?}");
        }
    }

    #[test]
    fn corruption_is_detected() {
        let bad_h = Corrupted {
            inner: catalog_system("res:1:-2", &[]).unwrap(),
            energy: true,
        };
        assert!(poisson_residual(&bad_h, 100, 1) > 1e-4);
        let bad_grad = Corrupted {
            inner: catalog_system("s2xs2", &[]).unwrap(),
            energy: false,
        };
        assert!(grad_check(&bad_grad, 50, 1e-5, 1).max_rel_error > 1e-5);
    }

    #[test]
    fn fiber_point_solver() {
        let s = catalog_system("qsp", &[]).unwrap();
        let x = initial_fiber_point(&*s, (0.3, 0.5)).unwrap();
        assert!((s.momentum(&x) - 0.3).abs() < 1e-10 && (s.energy(&x) - 0.5).abs() < 1e-10);
        assert!(constraint_residual(&*s, &x) < 1e-12);
    }

    #[test]
    fn focus_focus_holonomy_is_one() {
        let s = catalog_system("res:1:-1", &[]).unwrap();
        let lp: LoopSpec = "circle:0,0,0.5".parse().unwrap();
        let t = rotation_holonomy(&*s, &lp, &HolonomyOptions::default()).unwrap();
        assert!((t.k_estimate - 1.0).abs() < 1e-6, "{}", t.k_estimate);
        assert_eq!(t.stations.len(), 65);
        let r = rotation_holonomy(&*s, &lp.reversed(), &HolonomyOptions::default()).unwrap();
        assert!((r.k_estimate + 1.0).abs() < 1e-6);
    }

    #[test]
    fn contractible_loop_has_no_holonomy() {
        let s = catalog_system("res:1:-2", &[]).unwrap();
        let t = rotation_holonomy(&*s, &"circle:1,2,0.3".parse().unwrap(), &HolonomyOptions::default()).unwrap();
        assert!(t.k_estimate.abs() < 1e-6);
    }

    #[test]
    fn singular_loops_are_rejected() {
        let s = catalog_system("res:1:-2", &[]).unwrap();
        let e = rotation_holonomy(
            &*s,
            &"circle:0,0.03,0.045".parse().unwrap(),
            &HolonomyOptions::default(),
        );
        assert!(matches!(e, Err(HolonomyError::NotRegular(_))));
        let q = catalog_system("qsp", &[]).unwrap();
        let e = rotation_holonomy(&*q, &"circle:0,-0.5,0.3".parse().unwrap(), &HolonomyOptions::default());
        assert!(matches!(e, Err(HolonomyError::NotRegular(_))));
    }
}
