//! Catalog of integrable systems `F = (J, H)` with a 2pi-periodic momentum
//! `J`, plus the generic machinery that works on any of them: Hamiltonian
//! vector fields from a Poisson tensor, constrained flows, linearization at
//! fixed points, isotropy strata and the critical-value scan.

mod qsp;
mod resonant;
mod s2xs2;
mod scan;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::circle_action::{weights_from_linearization, CircleActionError, WeightedFixedPoint, Weights};
use crate::integrator::{self, IntegratorError, IntegratorOptions};
use crate::linalg;

pub use qsp::QuadraticSphericalPendulum;
pub use resonant::{ResonantHamiltonian, ResonantSystem};
pub use s2xs2::SphereProduct;
pub use scan::{critical_scan, CriticalValue, ScanOptions, ScanReport};

/// A point of the ambient space the system lives in.
pub type PhasePoint = DVector<f64>;

/// Default tolerance for constraint residuals.
pub const CONSTRAINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("unknown system id {0:?}")]
    UnknownSystem(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point violates constraints (residual {0:e})")]
    ConstraintViolation(f64),
    #[error("point has dimension {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("integration failed: {0}")]
    Integration(#[from] IntegratorError),
    #[error("constraint drift {0:e} during integration")]
    ConstraintDrift(f64),
    #[error(transparent)]
    CircleAction(#[from] CircleActionError),
}

/// Which of the two integrals generates a flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Which {
    J,
    H,
}

/// Rectangle in the `(J, H)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub j_min: f64,
    pub j_max: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Window {
    pub fn new(j_min: f64, j_max: f64, h_min: f64, h_max: f64) -> Self {
        Window {
            j_min,
            j_max,
            h_min,
            h_max,
        }
    }

    pub fn contains(&self, j: f64, h: f64) -> bool {
        j >= self.j_min && j <= self.j_max && h >= self.h_min && h <= self.h_max
    }

    /// Largest absolute coordinate values, used to size seed boxes.
    pub fn extent(&self) -> (f64, f64) {
        (
            self.j_min.abs().max(self.j_max.abs()),
            self.h_min.abs().max(self.h_max.abs()),
        )
    }
}

impl FromStr for Window {
    type Err = SystemError;

    /// `j_min,j_max,h_min,h_max`
    fn from_str(s: &str) -> Result<Self, SystemError> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| SystemError::InvalidParameter(format!("window {s:?}")))?;
        match v.as_slice() {
            [a, b, c, d] if a < b && c < d => Ok(Window::new(*a, *b, *c, *d)),
            _ => Err(SystemError::InvalidParameter(format!(
                "window {s:?} must be j_min,j_max,h_min,h_max with min < max"
            ))),
        }
    }
}

type StratumMap = Arc<dyn Fn(f64, f64) -> PhasePoint + Send + Sync>;

/// A family of points with finite isotropy `Z_order`, parameterized by a
/// transverse parameter `s` in `param_range` and the orbit angle `theta`.
#[derive(Clone)]
pub struct StratumSpec {
    pub order: u64,
    pub dimension: usize,
    pub param_range: (f64, f64),
    pub description: String,
    map: StratumMap,
}

impl StratumSpec {
    pub fn new(
        order: u64,
        dimension: usize,
        param_range: (f64, f64),
        description: impl Into<String>,
        map: impl Fn(f64, f64) -> PhasePoint + Send + Sync + 'static,
    ) -> Self {
        StratumSpec {
            order,
            dimension,
            param_range,
            description: description.into(),
            map: Arc::new(map),
        }
    }

    pub fn point(&self, s: f64, theta: f64) -> PhasePoint {
        (self.map)(s, theta)
    }
}

impl fmt::Debug for StratumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StratumSpec")
            .field("order", &self.order)
            .field("dimension", &self.dimension)
            .field("param_range", &self.param_range)
            .field("description", &self.description)
            .finish()
    }
}

/// A concrete integrable system with a Hamiltonian circle action generated
/// by `J`. Implementors supply closed forms; everything else in this module
/// is derived from them.
pub trait IntegrableSystem: Send + Sync {
    fn id(&self) -> String;
    fn description(&self) -> String;
    fn ambient_dim(&self) -> usize;
    fn coordinate_names(&self) -> Vec<&'static str>;
    fn parameters(&self) -> Vec<(String, f64)>;

    fn momentum(&self, x: &PhasePoint) -> f64;
    fn energy(&self, x: &PhasePoint) -> f64;
    fn momentum_gradient(&self, x: &PhasePoint) -> PhasePoint;
    fn energy_gradient(&self, x: &PhasePoint) -> PhasePoint;

    /// Matrix of brackets `{x_i, x_j}` at `x`.
    fn poisson_tensor(&self, x: &PhasePoint) -> DMatrix<f64>;

    /// Constraint functions vanishing on the phase space.
    fn constraints(&self, _x: &PhasePoint) -> Vec<f64> {
        Vec::new()
    }

    fn constraint_gradients(&self, _x: &PhasePoint) -> Vec<PhasePoint> {
        Vec::new()
    }

    /// Isolated fixed points of the circle action, with weights.
    fn fixed_point_catalog(&self) -> Vec<WeightedFixedPoint>;

    /// Points with finite nontrivial isotropy.
    fn strata(&self) -> Vec<StratumSpec>;

    /// `(m, n)` for resonant systems on R^4 whose only fixed point is the origin.
    fn resonance(&self) -> Option<(i64, i64)> {
        None
    }

    /// Four-parameter chart used to seed searches.
    fn chart(&self, u: &[f64; 4]) -> PhasePoint;

    /// Chart box covering the phase-space region that maps into `window`.
    fn chart_box(&self, window: &Window) -> [(f64, f64); 4];
}

fn check_dim(sys: &dyn IntegrableSystem, x: &PhasePoint) -> Result<(), SystemError> {
    if x.len() != sys.ambient_dim() {
        return Err(SystemError::Dimension {
            got: x.len(),
            expected: sys.ambient_dim(),
        });
    }
    Ok(())
}

pub fn constraint_residual(sys: &dyn IntegrableSystem, x: &PhasePoint) -> f64 {
    sys.constraints(x).iter().map(|c| c.abs()).fold(0.0, f64::max)
}

pub fn validate_point(sys: &dyn IntegrableSystem, x: &PhasePoint) -> Result<(), SystemError> {
    check_dim(sys, x)?;
    let r = constraint_residual(sys, x);
    if r > CONSTRAINT_TOL.sqrt() * 1e-2 {
        return Err(SystemError::ConstraintViolation(r));
    }
    Ok(())
}

/// `(J, H)` at a valid phase point.
pub fn eval_f(sys: &dyn IntegrableSystem, x: &PhasePoint) -> Result<(f64, f64), SystemError> {
    validate_point(sys, x)?;
    Ok((sys.momentum(x), sys.energy(x)))
}

/// Newton projection onto the constraint set.
pub fn project(sys: &dyn IntegrableSystem, mut x: PhasePoint) -> PhasePoint {
    for _ in 0..30 {
        let c = sys.constraints(&x);
        if c.is_empty() || c.iter().all(|v| v.abs() < 1e-15) {
            break;
        }
        let g = DMatrix::from_columns(&sys.constraint_gradients(&x));
        let gram = g.transpose() * &g;
        let Some(inv) = gram.try_inverse() else { break };
        let step = &g * (inv * DVector::from_vec(c));
        x -= step;
    }
    x
}

pub fn tangent_projector(sys: &dyn IntegrableSystem, x: &PhasePoint) -> DMatrix<f64> {
    linalg::tangent_projector(&sys.constraint_gradients(x), sys.ambient_dim())
}

/// Orthonormal basis of the tangent space of the phase space at `x`.
pub fn tangent_basis(sys: &dyn IntegrableSystem, x: &PhasePoint) -> DMatrix<f64> {
    linalg::tangent_basis(&sys.constraint_gradients(x), sys.ambient_dim())
}

pub fn gradient(sys: &dyn IntegrableSystem, which: Which, x: &PhasePoint) -> PhasePoint {
    match which {
        Which::J => sys.momentum_gradient(x),
        Which::H => sys.energy_gradient(x),
    }
}

/// `X_f = {., f}` on coordinates, projected onto the tangent space.
pub fn vector_field_unchecked(sys: &dyn IntegrableSystem, which: Which, x: &PhasePoint) -> PhasePoint {
    let v = sys.poisson_tensor(x) * gradient(sys, which, x);
    if sys.constraints(x).is_empty() {
        v
    } else {
        tangent_projector(sys, x) * v
    }
}

pub fn hamiltonian_vector_field(
    sys: &dyn IntegrableSystem,
    which: Which,
    x: &PhasePoint,
) -> Result<PhasePoint, SystemError> {
    validate_point(sys, x)?;
    Ok(vector_field_unchecked(sys, which, x))
}

/// `{J, H}(x)`
pub fn poisson_bracket(sys: &dyn IntegrableSystem, x: &PhasePoint) -> f64 {
    sys.momentum_gradient(x)
        .dot(&(sys.poisson_tensor(x) * sys.energy_gradient(x)))
}

/// Gram determinant of the tangential gradients of `J` and `H`; zero exactly
/// where `dF` restricted to the phase space has rank < 2.
pub fn gram_det(sys: &dyn IntegrableSystem, x: &PhasePoint) -> f64 {
    let p = tangent_projector(sys, x);
    let gj = &p * sys.momentum_gradient(x);
    let gh = &p * sys.energy_gradient(x);
    let d = gj.dot(&gj) * gh.dot(&gh) - gj.dot(&gh).powi(2);
    d.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub state: PhasePoint,
    pub drift_j: f64,
    pub drift_h: f64,
    pub constraint_residual: f64,
    pub steps: usize,
}

pub fn default_flow_options() -> IntegratorOptions {
    IntegratorOptions::default()
}

/// Integrates the Hamiltonian flow of `J` or `H` for time `t`, projecting
/// back onto the constraints after each step.
pub fn flow(
    sys: &dyn IntegrableSystem,
    which: Which,
    x: &PhasePoint,
    t: f64,
    opts: &IntegratorOptions,
) -> Result<FlowResult, SystemError> {
    validate_point(sys, x)?;
    flow_unchecked(sys, which, x, t, opts)
}

pub(crate) fn flow_unchecked(
    sys: &dyn IntegrableSystem,
    which: Which,
    x: &PhasePoint,
    t: f64,
    opts: &IntegratorOptions,
) -> Result<FlowResult, SystemError> {
    let constrained = !sys.constraints(x).is_empty();
    let sol = integrator::integrate(
        |y| vector_field_unchecked(sys, which, y),
        |y| if constrained { project(sys, y) } else { y },
        x,
        t,
        opts,
    )?;
    let res = constraint_residual(sys, &sol.state);
    if res > CONSTRAINT_TOL {
        return Err(SystemError::ConstraintDrift(res));
    }
    Ok(FlowResult {
        drift_j: (sys.momentum(&sol.state) - sys.momentum(x)).abs(),
        drift_h: (sys.energy(&sol.state) - sys.energy(x)).abs(),
        constraint_residual: res,
        steps: sol.steps,
        state: sol.state,
    })
}

/// Ambient Jacobian of `X_f` at `x` by central differences.
pub fn linearization(sys: &dyn IntegrableSystem, which: Which, x: &PhasePoint) -> DMatrix<f64> {
    let n = sys.ambient_dim();
    let h = 1e-6;
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let col = (vector_field_unchecked(sys, which, &xp) - vector_field_unchecked(sys, which, &xm)) / (2.0 * h);
        jac.set_column(j, &col);
    }
    jac
}

/// Sign of the symplectic orientation of the frame given by the columns of
/// `basis` (a tangent basis at `x`).
pub fn orientation_sign(sys: &dyn IntegrableSystem, x: &PhasePoint, basis: &DMatrix<f64>) -> f64 {
    let reduced = basis.transpose() * sys.poisson_tensor(x) * basis;
    let omega = -reduced
        .try_inverse()
        .expect("Poisson tensor is nondegenerate on the phase space");
    linalg::pfaffian4(&linalg::to_matrix4(&omega)).signum()
}

/// Isotropy weights at a fixed point of the circle action, from the
/// linearization of `X_J` restricted to the tangent space.
pub fn fixed_point_weights(sys: &dyn IntegrableSystem, x: &PhasePoint, tol: f64) -> Result<Weights, SystemError> {
    let basis = tangent_basis(sys, x);
    let lin = basis.transpose() * linearization(sys, Which::J, x) * &basis;
    let sign = orientation_sign(sys, x, &basis);
    Ok(weights_from_linearization(&linalg::to_matrix4(&lin), sign, tol)?)
}

/// Samples the image of a stratum under `F` as polylines ordered by the
/// transverse parameter. The orbit angle is fixed since `F` is invariant.
pub fn stratum_image(sys: &dyn IntegrableSystem, st: &StratumSpec, samples: usize) -> Vec<Vec<(f64, f64)>> {
    let samples = samples.max(2);
    let (s0, s1) = st.param_range;
    let mut line: Vec<(f64, f64)> = Vec::with_capacity(samples);
    for i in 0..samples {
        let s = s0 + (s1 - s0) * (i as f64 + 0.5) / samples as f64;
        let x = st.point(s, 0.0);
        let p = (sys.momentum(&x), sys.energy(&x));
        if let Some(last) = line.last() {
            if (p.0 - last.0).hypot(p.1 - last.1) < 1e-12 {
                continue;
            }
        }
        line.push(p);
    }
    vec![line]
}

/// Minimal period of the circle action at `x` is `2pi/order` (checked for
/// the first few primes above `order`).
pub fn has_isotropy(sys: &dyn IntegrableSystem, x: &PhasePoint, order: u64, tol: f64) -> Result<bool, SystemError> {
    let opts = default_flow_options();
    let tau = std::f64::consts::TAU;
    let scale = 1.0 + x.norm();
    let back = flow(sys, Which::J, x, tau / order as f64, &opts)?;
    if (&back.state - x).norm() > tol * scale {
        return Ok(false);
    }
    for q in [2u64, 3, 5, 7] {
        let r = flow(sys, Which::J, x, tau / (order * q) as f64, &opts)?;
        if (&r.state - x).norm() <= tol * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parameter overrides as `name=value` pairs.
pub type Params = [(String, f64)];

fn param(params: &Params, name: &str) -> Option<f64> {
    params.iter().rev().find(|(k, _)| k == name).map(|(_, v)| *v)
}

fn reject_unknown(params: &Params, known: &[&str]) -> Result<(), SystemError> {
    for (k, _) in params {
        if !known.contains(&k.as_str()) {
            return Err(SystemError::InvalidParameter(format!("unknown parameter {k:?}")));
        }
    }
    Ok(())
}

/// Ids of the built-in catalog. `res:m:-n` stands for the whole resonant family.
pub const CATALOG_IDS: [&str; 5] = ["res:1:-2", "res:1:-1", "res:m:-n", "s2xs2", "qsp"];

/// Builds a catalog system from its id (`res:<m>:<-n>`, `s2xs2`, `qsp`).
pub fn catalog_system(id: &str, params: &Params) -> Result<Box<dyn IntegrableSystem>, SystemError> {
    let id = id.trim();
    if let Some(rest) = id.strip_prefix("res:") {
        let (m, n) = rest
            .split_once(':')
            .ok_or_else(|| SystemError::UnknownSystem(id.to_string()))?;
        let m: i64 = m.parse().map_err(|_| SystemError::UnknownSystem(id.to_string()))?;
        let minus_n: i64 = n.parse().map_err(|_| SystemError::UnknownSystem(id.to_string()))?;
        reject_unknown(params, &["eps", "extent", "power"])?;
        let mut sys = ResonantSystem::new(m, -minus_n)?;
        if let Some(e) = param(params, "eps") {
            sys = sys.with_eps(e)?;
        }
        if let Some(x) = param(params, "extent") {
            sys = sys.with_extent(x)?;
        }
        if let Some(p) = param(params, "power") {
            sys = sys.with_power(p as u32)?;
        }
        return Ok(Box::new(sys));
    }
    match id {
        "s2xs2" => {
            reject_unknown(params, &[])?;
            Ok(Box::new(SphereProduct::new()))
        }
        "qsp" => {
            reject_unknown(params, &["b", "c"])?;
            let d = QuadraticSphericalPendulum::default();
            Ok(Box::new(QuadraticSphericalPendulum::new(
                param(params, "b").unwrap_or(d.b),
                param(params, "c").unwrap_or(d.c),
            )?))
        }
        _ => Err(SystemError::UnknownSystem(id.to_string())),
    }
}
