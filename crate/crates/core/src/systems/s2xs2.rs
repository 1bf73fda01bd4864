//! The system on S^2 x S^2 with `J = x1 + 2 y1` and
//! `H = Re{(x2 + i x3)^2 (y2 - i y3)}`, with the Lie-Poisson bracket
//! `{x_i, x_j} = eps_ijk x_k` on each factor.

use nalgebra::DMatrix;

use super::{IntegrableSystem, PhasePoint, StratumSpec, Window};
use crate::circle_action::{WeightedFixedPoint, Weights};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SphereProduct;

impl SphereProduct {
    pub fn new() -> Self {
        SphereProduct
    }
}

fn sphere(t: f64, f: f64) -> [f64; 3] {
    [t.cos(), t.sin() * f.cos(), t.sin() * f.sin()]
}

fn pole_stratum(sign: f64) -> StratumSpec {
    let desc = if sign > 0.0 {
        "x = (1,0,0), y off the poles"
    } else {
        "x = (-1,0,0), y off the poles"
    };
    StratumSpec::new(2, 2, (0.0, std::f64::consts::PI), desc, move |a, th| {
        let y = sphere(a, th);
        PhasePoint::from_vec(vec![sign, 0.0, 0.0, y[0], y[1], y[2]])
    })
}

impl IntegrableSystem for SphereProduct {
    fn id(&self) -> String {
        "s2xs2".into()
    }

    fn description(&self) -> String {
        "J = x1 + 2 y1, H = Re{(x2 + i x3)^2 (y2 - i y3)} on S^2 x S^2".into()
    }

    fn ambient_dim(&self) -> usize {
        6
    }

    fn coordinate_names(&self) -> Vec<&'static str> {
        vec!["x1", "x2", "x3", "y1", "y2", "y3"]
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        Vec::new()
    }

    fn momentum(&self, x: &PhasePoint) -> f64 {
        x[0] + 2.0 * x[3]
    }

    fn momentum_gradient(&self, _x: &PhasePoint) -> PhasePoint {
        PhasePoint::from_vec(vec![1.0, 0.0, 0.0, 2.0, 0.0, 0.0])
    }

    fn energy(&self, x: &PhasePoint) -> f64 {
        (x[1] * x[1] - x[2] * x[2]) * x[4] + 2.0 * x[1] * x[2] * x[5]
    }

    fn energy_gradient(&self, x: &PhasePoint) -> PhasePoint {
        PhasePoint::from_vec(vec![
            0.0,
            2.0 * x[1] * x[4] + 2.0 * x[2] * x[5],
            -2.0 * x[2] * x[4] + 2.0 * x[1] * x[5],
            0.0,
            x[1] * x[1] - x[2] * x[2],
            2.0 * x[1] * x[2],
        ])
    }

    fn poisson_tensor(&self, x: &PhasePoint) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(6, 6);
        for off in [0, 3] {
            let (a, b, c) = (x[off], x[off + 1], x[off + 2]);
            p[(off, off + 1)] = c;
            p[(off + 1, off)] = -c;
            p[(off + 1, off + 2)] = a;
            p[(off + 2, off + 1)] = -a;
            p[(off + 2, off)] = b;
            p[(off, off + 2)] = -b;
        }
        p
    }

    fn constraints(&self, x: &PhasePoint) -> Vec<f64> {
        vec![
            x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0,
            x[3] * x[3] + x[4] * x[4] + x[5] * x[5] - 1.0,
        ]
    }

    fn constraint_gradients(&self, x: &PhasePoint) -> Vec<PhasePoint> {
        vec![
            PhasePoint::from_vec(vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 0.0, 0.0, 0.0]),
            PhasePoint::from_vec(vec![0.0, 0.0, 0.0, 2.0 * x[3], 2.0 * x[4], 2.0 * x[5]]),
        ]
    }

    fn fixed_point_catalog(&self) -> Vec<WeightedFixedPoint> {
        // (sign of x1, sign of y1, weights); ordered by J
        [
            (-1.0, -1.0, Weights(1, -2)),
            (1.0, -1.0, Weights(1, 2)),
            (-1.0, 1.0, Weights(1, 2)),
            (1.0, 1.0, Weights(1, -2)),
        ]
        .into_iter()
        .map(|(sx, sy, w)| WeightedFixedPoint::new(vec![sx, 0.0, 0.0, sy, 0.0, 0.0], w, (sx + 2.0 * sy, 0.0)))
        .collect()
    }

    fn strata(&self) -> Vec<StratumSpec> {
        vec![pole_stratum(1.0), pole_stratum(-1.0)]
    }

    fn chart(&self, u: &[f64; 4]) -> PhasePoint {
        let x = sphere(u[0], u[1]);
        let y = sphere(u[2], u[3]);
        PhasePoint::from_vec(vec![x[0], x[1], x[2], y[0], y[1], y[2]])
    }

    fn chart_box(&self, _window: &Window) -> [(f64, f64); 4] {
        let pi = std::f64::consts::PI;
        [(0.0, pi), (0.0, 2.0 * pi), (0.0, pi), (0.0, 2.0 * pi)]
    }
}
