//! `m:(-n)` resonant systems on R^4.
//!
//! Coordinates are `(q1, p1, q2, p2)` with `z = p1 + i q1`, `w = p2 + i q2`
//! and the canonical bracket `{q_i, p_i} = 1`. The momentum
//! `J = m/2 |z|^2 - n/2 |w|^2` generates `(e^{imt} z, e^{-int} w)`.

use nalgebra::{Complex, DMatrix};

use super::{IntegrableSystem, PhasePoint, StratumSpec, SystemError, Window};
use crate::circle_action::{WeightedFixedPoint, Weights};

/// Energy functions available for the resonant family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResonantHamiltonian {
    /// `-Re(z^n w^m) + eps R^power` with `R = (m|z|^2 + |n||w|^2)/2`
    /// (`w` replaced by its conjugate when `n < 0`). For `1:(-2)` and
    /// `power = 2` this is `2 q1 p1 q2 + (q1^2 - p1^2) p2 + eps R^2`.
    Standard { eps: f64, power: u32 },
    /// `Im(z w) + eps |z|^2 |w|^2 = p1 q2 + p2 q1 + eps (q1^2+p1^2)(q2^2+p2^2)`,
    /// only for `1:(-1)`.
    SymmetricQuartic { eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonantSystem {
    m: i64,
    n: i64,
    hamiltonian: ResonantHamiltonian,
    extent: f64,
}

/// Smallest power of `R` that dominates the resonant monomial at infinity.
fn proper_power(m: i64, n: i64) -> u32 {
    let deg = (m + n.abs()) as u32;
    (deg / 2 + 1).max(2)
}

impl ResonantSystem {
    /// Weights `(m, n)`: `J = m/2 |z|^2 - n/2 |w|^2`.
    pub fn new(m: i64, n: i64) -> Result<Self, SystemError> {
        let w = Weights::new(m, n)?;
        if m <= 0 {
            return Err(SystemError::InvalidParameter(format!("m must be positive, got {m}")));
        }
        let hamiltonian = if (w.0, w.1) == (1, 1) {
            ResonantHamiltonian::SymmetricQuartic { eps: 0.25 }
        } else {
            ResonantHamiltonian::Standard {
                eps: 1.0,
                power: proper_power(m, n),
            }
        };
        Ok(ResonantSystem {
            m,
            n,
            hamiltonian,
            extent: 2.0,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self, SystemError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(SystemError::InvalidParameter(format!(
                "eps must be positive, got {eps}"
            )));
        }
        match &mut self.hamiltonian {
            ResonantHamiltonian::Standard { eps: e, .. } | ResonantHamiltonian::SymmetricQuartic { eps: e } => *e = eps,
        }
        Ok(self)
    }

    /// Switches to the standard energy with the given power of `R`.
    pub fn with_power(mut self, power: u32) -> Result<Self, SystemError> {
        if power < proper_power(self.m, self.n) {
            return Err(SystemError::InvalidParameter(format!(
                "power {power} does not make F proper; need >= {}",
                proper_power(self.m, self.n)
            )));
        }
        let eps = self.eps();
        self.hamiltonian = ResonantHamiltonian::Standard { eps, power };
        Ok(self)
    }

    /// Transverse radius up to which strata are sampled.
    pub fn with_extent(mut self, extent: f64) -> Result<Self, SystemError> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(SystemError::InvalidParameter(format!(
                "extent must be positive, got {extent}"
            )));
        }
        self.extent = extent;
        Ok(self)
    }

    pub fn weights(&self) -> (i64, i64) {
        (self.m, self.n)
    }

    pub fn hamiltonian(&self) -> ResonantHamiltonian {
        self.hamiltonian
    }

    fn eps(&self) -> f64 {
        match self.hamiltonian {
            ResonantHamiltonian::Standard { eps, .. } | ResonantHamiltonian::SymmetricQuartic { eps } => eps,
        }
    }

    fn zw(x: &PhasePoint) -> (Complex<f64>, Complex<f64>) {
        (Complex::new(x[1], x[0]), Complex::new(x[3], x[2]))
    }

    /// The invariant monomial and its derivatives in `z` and in the second
    /// factor (`w` or its conjugate).
    fn monomial(&self, x: &PhasePoint) -> (Complex<f64>, Complex<f64>, Complex<f64>) {
        let (z, w) = Self::zw(x);
        let ww = if self.n > 0 { w } else { w.conj() };
        let a = self.n.unsigned_abs() as u32;
        let b = self.m as u32;
        let zb = z.powu(a);
        let wb = ww.powu(b);
        let dz = z.powu(a - 1) * wb * a as f64;
        let dw = zb * ww.powu(b - 1) * b as f64;
        (zb * wb, dz, dw)
    }

    fn r(&self, x: &PhasePoint) -> f64 {
        0.5 * (self.m as f64 * (x[0] * x[0] + x[1] * x[1]) + self.n.abs() as f64 * (x[2] * x[2] + x[3] * x[3]))
    }
}

impl IntegrableSystem for ResonantSystem {
    fn id(&self) -> String {
        format!("res:{}:{}", self.m, -self.n)
    }

    fn description(&self) -> String {
        format!("{}:({}) resonant system on R^4", self.m, -self.n)
    }

    fn ambient_dim(&self) -> usize {
        4
    }

    fn coordinate_names(&self) -> Vec<&'static str> {
        vec!["q1", "p1", "q2", "p2"]
    }

    fn parameters(&self) -> Vec<(String, f64)> {
        let mut p = vec![("m".to_string(), self.m as f64), ("n".to_string(), self.n as f64)];
        match self.hamiltonian {
            ResonantHamiltonian::Standard { eps, power } => {
                p.push(("eps".into(), eps));
                p.push(("power".into(), power as f64));
            }
            ResonantHamiltonian::SymmetricQuartic { eps } => p.push(("eps".into(), eps)),
        }
        p.push(("extent".into(), self.extent));
        p
    }

    fn momentum(&self, x: &PhasePoint) -> f64 {
        0.5 * (self.m as f64 * (x[0] * x[0] + x[1] * x[1]) - self.n as f64 * (x[2] * x[2] + x[3] * x[3]))
    }

    fn momentum_gradient(&self, x: &PhasePoint) -> PhasePoint {
        let (m, n) = (self.m as f64, self.n as f64);
        PhasePoint::from_vec(vec![m * x[0], m * x[1], -n * x[2], -n * x[3]])
    }

    fn energy(&self, x: &PhasePoint) -> f64 {
        match self.hamiltonian {
            ResonantHamiltonian::Standard { eps, power } => -self.monomial(x).0.re + eps * self.r(x).powi(power as i32),
            ResonantHamiltonian::SymmetricQuartic { eps } => {
                let (z, w) = Self::zw(x);
                (z * w).im + eps * z.norm_sqr() * w.norm_sqr()
            }
        }
    }

    fn energy_gradient(&self, x: &PhasePoint) -> PhasePoint {
        match self.hamiltonian {
            ResonantHamiltonian::Standard { eps, power } => {
                let (_, dz, dw) = self.monomial(x);
                let sigma = if self.n > 0 { 1.0 } else { -1.0 };
                let c = eps * power as f64 * self.r(x).powi(power as i32 - 1);
                let (m, n) = (self.m as f64, self.n.abs() as f64);
                // d Re(phi)/dq1 = -Im(phi_z), d/dp1 = Re(phi_z); likewise for w
                PhasePoint::from_vec(vec![
                    dz.im + c * m * x[0],
                    -dz.re + c * m * x[1],
                    sigma * dw.im + c * n * x[2],
                    -dw.re + c * n * x[3],
                ])
            }
            ResonantHamiltonian::SymmetricQuartic { eps } => {
                let (q1, p1, q2, p2) = (x[0], x[1], x[2], x[3]);
                let zz = q1 * q1 + p1 * p1;
                let ww = q2 * q2 + p2 * p2;
                PhasePoint::from_vec(vec![
                    p2 + 2.0 * eps * q1 * ww,
                    q2 + 2.0 * eps * p1 * ww,
                    p1 + 2.0 * eps * q2 * zz,
                    q1 + 2.0 * eps * p2 * zz,
                ])
            }
        }
    }

    fn poisson_tensor(&self, _x: &PhasePoint) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(4, 4);
        p[(0, 1)] = 1.0;
        p[(1, 0)] = -1.0;
        p[(2, 3)] = 1.0;
        p[(3, 2)] = -1.0;
        p
    }

    fn fixed_point_catalog(&self) -> Vec<WeightedFixedPoint> {
        vec![WeightedFixedPoint::new(
            vec![0.0; 4],
            Weights(self.m, self.n),
            (0.0, 0.0),
        )]
    }

    fn strata(&self) -> Vec<StratumSpec> {
        let mut out = Vec::new();
        let a = self.n.unsigned_abs();
        if a >= 2 {
            out.push(StratumSpec::new(a, 2, (0.0, self.extent), "z = 0, w != 0", |s, th| {
                PhasePoint::from_vec(vec![0.0, 0.0, s * th.sin(), s * th.cos()])
            }));
        }
        if self.m >= 2 {
            out.push(StratumSpec::new(
                self.m as u64,
                2,
                (0.0, self.extent),
                "w = 0, z != 0",
                |s, th| PhasePoint::from_vec(vec![s * th.sin(), s * th.cos(), 0.0, 0.0]),
            ));
        }
        out
    }

    fn resonance(&self) -> Option<(i64, i64)> {
        Some((self.m, self.n))
    }

    fn chart(&self, u: &[f64; 4]) -> PhasePoint {
        PhasePoint::from_vec(u.to_vec())
    }

    fn chart_box(&self, window: &Window) -> [(f64, f64); 4] {
        let (jmax, hmax) = window.extent();
        let p = match self.hamiltonian {
            ResonantHamiltonian::Standard { power, .. } => power as f64,
            ResonantHamiltonian::SymmetricQuartic { .. } => 2.0,
        };
        let r = 1.5 * jmax.max((hmax / self.eps()).powf(1.0 / p)).max(0.05);
        let lo = self.m.min(self.n.abs()) as f64;
        let s = (2.0 * r / lo).sqrt();
        [(-s, s); 4]
    }
}
