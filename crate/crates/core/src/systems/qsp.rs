//! Quadratic spherical pendulum on `TS^2 = {|x| = 1, x.v = 0}` in R^6 with
//! `H = |v|^2/2 + b x3^2 + c x3` and `J = x1 v2 - x2 v1`. The bracket is the
//! Dirac bracket of the canonical one on `T R^3`.
//!
//! Defaults `b = -1`, `c = 0.5`: the potential restricted to the sphere has
//! local minima at both poles and a maximum on the circle `x3 = 1/4`, so the
//! north pole is an elliptic-elliptic point whose image `(0, -1/2)` lies
//! inside the image of `F` and is surrounded by the island of regular values
//! lifting to two tori.

use nalgebra::DMatrix;

use super::{fixed_point_weights, IntegrableSystem, PhasePoint, StratumSpec, SystemError, Window};
use crate::circle_action::{WeightedFixedPoint, Weights};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSphericalPendulum {
    pub b: f64,
    pub c: f64,
    catalog: Vec<WeightedFixedPoint>,
}

impl Default for QuadraticSphericalPendulum {
    fn default() -> Self {
        Self::new(-1.0, 0.5).expect("default parameters are valid")
    }
}

impl QuadraticSphericalPendulum {
    /// Fails if a pole is a degenerate fixed point for these parameters.
    pub fn new(b: f64, c: f64) -> Result<Self, SystemError> {
        if !(b.is_finite() && c.is_finite()) {
            return Err(SystemError::InvalidParameter("b and c must be finite".into()));
        }
        let mut sys = QuadraticSphericalPendulum {
            b,
            c,
            catalog: Vec::new(),
        };
        // the north pole has weights (1, 1); the south pole is whatever the
        // linearization says
        let north = vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let south = vec![0.0, 0.0, -1.0, 0.0, 0.0, 0.0];
        let ws = fixed_point_weights(&sys, &PhasePoint::from_vec(south.clone()), 1e-6)?;
        sys.catalog = vec![
            WeightedFixedPoint::new(south, ws, (0.0, b - c)),
            WeightedFixedPoint::new(north, Weights(1, 1), (0.0, b + c)),
        ];
        Ok(sys)
    }

    pub fn potential(&self, x3: f64) -> f64 {
        self.b * x3 * x3 + self.c * x3
    }

    fn canonical(&self) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(6, 6);
        for i in 0..3 {
            p[(i, i + 3)] = 1.0;
            p[(i + 3, i)] = -1.0;
        }
        p
    }
}

impl IntegrableSystem for QuadraticSphericalPendulum {
    fn id(&self) -> String {
        "qsp".into()
    }

    fn description(&self) -> String {
        format!("quadratic spherical pendulum, V(x3) = {} x3^2 + {} x3", self.b, self.c)
    }

    fn ambient_dim(&self) -> usize {
        6
    }

    fn coordinate_names(&self) -> Vec<&'static str> {
        vec!["x1", "x2", "x3", "v1", "v2", "v3"]
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        vec![("b".into(), self.b), ("c".into(), self.c)]
    }

    fn momentum(&self, x: &PhasePoint) -> f64 {
        x[0] * x[4] - x[1] * x[3]
    }

    fn momentum_gradient(&self, x: &PhasePoint) -> PhasePoint {
        PhasePoint::from_vec(vec![x[4], -x[3], 0.0, -x[1], x[0], 0.0])
    }

    fn energy(&self, x: &PhasePoint) -> f64 {
        0.5 * (x[3] * x[3] + x[4] * x[4] + x[5] * x[5]) + self.potential(x[2])
    }

    fn energy_gradient(&self, x: &PhasePoint) -> PhasePoint {
        PhasePoint::from_vec(vec![0.0, 0.0, 2.0 * self.b * x[2] + self.c, x[3], x[4], x[5]])
    }

    fn poisson_tensor(&self, x: &PhasePoint) -> DMatrix<f64> {
        let p0 = self.canonical();
        let g = DMatrix::from_columns(&self.constraint_gradients(x));
        let c = g.transpose() * &p0 * &g;
        match c.try_inverse() {
            Some(ci) => &p0 - &p0 * &g * ci * g.transpose() * &p0,
            None => p0,
        }
    }

    fn constraints(&self, x: &PhasePoint) -> Vec<f64> {
        vec![
            x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0,
            x[0] * x[3] + x[1] * x[4] + x[2] * x[5],
        ]
    }

    fn constraint_gradients(&self, x: &PhasePoint) -> Vec<PhasePoint> {
        vec![
            PhasePoint::from_vec(vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 0.0, 0.0, 0.0]),
            PhasePoint::from_vec(vec![x[3], x[4], x[5], x[0], x[1], x[2]]),
        ]
    }

    fn fixed_point_catalog(&self) -> Vec<WeightedFixedPoint> {
        self.catalog.clone()
    }

    fn strata(&self) -> Vec<StratumSpec> {
        Vec::new()
    }

    /// `(theta, phi, a, b)`: `x` in spherical angles about the x3 axis and
    /// `v = a e_theta + b e_phi`.
    fn chart(&self, u: &[f64; 4]) -> PhasePoint {
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let e_t = [ct * cp, ct * sp, -st];
        let e_p = [-sp, cp, 0.0];
        PhasePoint::from_vec(vec![
            st * cp,
            st * sp,
            ct,
            u[2] * e_t[0] + u[3] * e_p[0],
            u[2] * e_t[1] + u[3] * e_p[1],
            u[2] * e_t[2] + u[3] * e_p[2],
        ])
    }

    fn chart_box(&self, window: &Window) -> [(f64, f64); 4] {
        let vmin = [-1.0, 1.0, -self.c / (2.0 * self.b)]
            .into_iter()
            .filter(|t| t.abs() <= 1.0)
            .map(|t| self.potential(t))
            .fold(f64::INFINITY, f64::min);
        let vmax = (2.0 * (window.h_max - vmin).max(0.01)).sqrt() * 1.05;
        let pi = std::f64::consts::PI;
        [(0.0, pi), (0.0, 2.0 * pi), (-vmax, vmax), (-vmax, vmax)]
    }
}
