//! From a loop in the `(J, H)` plane to a fractional-monodromy certificate.
//!
//! The enclosed fixed points give the Euler number `e` of the preimage of
//! the loop, the isotropy orders of exceptional orbits met by the loop give
//! `N`, and the certificate records `k = N e`, the transport group
//! `span{(N, 0), (0, 1)}` and the matrix `[[1, e], [0, 1]]`.

mod loops;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::circle_action::{euler_from_fixed_points, WeightedFixedPoint};
use crate::format;
use crate::qalgebra::{gcd, lcm_orders, Lattice2, MonodromyMatrixQ, QError, Rational};
use crate::seifert::{SeifertData, SeifertError};
use crate::systems::{stratum_image, IntegrableSystem, SystemError};

pub use loops::{winding_number, LoopSpec, Point2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonodromyError {
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point ({}, {}) lies on the loop (distance {distance:e})", point.0, point.1)]
    PointOnLoop { point: Point2, distance: f64 },
    #[error(
        "regularity violated: fixed point of the circle action on the preimage of the loop \
         (its image ({}, {}) is within {distance:e} of the loop)",
        f_value.0, f_value.1
    )]
    FixedPointOnLoop { f_value: Point2, distance: f64 },
    #[error(
        "regularity violated: non-transversal crossing of a Z_{order} stratum image at ({}, {}) \
         (angle {angle_deg:.3} deg); H'(t) dJ - J'(t) dH must not vanish there",
        point.0, point.1
    )]
    NonTransversal { order: u64, point: Point2, angle_deg: f64 },
    #[error("inconsistent data: N = {n}, e = {euler}, N e is not an integer (missed stratum crossing?)")]
    Inconsistent { n: u64, euler: Rational },
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Algebra(#[from] QError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Regularity,
    Numeric,
}

impl MonodromyError {
    pub fn class(&self) -> ErrorClass {
        match self {
            MonodromyError::InvalidLoop(_)
            | MonodromyError::InvalidInput(_)
            | MonodromyError::Seifert(_)
            | MonodromyError::Algebra(_) => ErrorClass::InvalidInput,
            MonodromyError::PointOnLoop { .. }
            | MonodromyError::FixedPointOnLoop { .. }
            | MonodromyError::NonTransversal { .. } => ErrorClass::Regularity,
            MonodromyError::System(SystemError::UnknownSystem(_) | SystemError::InvalidParameter(_)) => {
                ErrorClass::InvalidInput
            }
            MonodromyError::Inconsistent { .. } | MonodromyError::System(_) => ErrorClass::Numeric,
        }
    }
}

/// One transversal intersection of the loop with a stratum image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub order: u64,
    pub stratum: String,
    #[serde(serialize_with = "format::ser_real_pair")]
    pub point: Point2,
    #[serde(serialize_with = "format::ser_real")]
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrdersOnLoop {
    /// Distinct orders, ascending.
    pub orders: Vec<u64>,
    /// Every crossing, in stratum order then along the stratum.
    pub crossings: Vec<Crossing>,
    /// Smallest distance from the loop to an endpoint of a sampled stratum
    /// image that is not a fixed-point image.
    #[serde(serialize_with = "format::ser_real")]
    pub min_endpoint_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    /// Fixed-point images closer than this to the loop are a violation.
    pub point_tol: f64,
    /// Minimum crossing angle with stratum images, in degrees.
    pub min_angle_deg: f64,
    /// Samples per stratum image.
    pub stratum_samples: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            point_tol: 1e-6,
            min_angle_deg: 5.0,
            stratum_samples: 4000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regularity {
    pub simple: bool,
    pub normalized_from_clockwise: bool,
    pub crossings: Vec<Crossing>,
    pub detected_orders: Vec<u64>,
    pub forced_orders: Vec<u64>,
    #[serde(serialize_with = "format::ser_real")]
    pub min_fixed_point_distance: f64,
    #[serde(serialize_with = "format::ser_real")]
    pub min_stratum_endpoint_distance: f64,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyCertificate {
    pub system: String,
    #[serde(rename = "loop")]
    pub loop_: LoopSpec,
    pub euler: Rational,
    pub orders_on_loop: Vec<u64>,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: i64,
    pub transport_group: Lattice2,
    pub matrix: MonodromyMatrixQ,
    pub enclosed_fixed_points: Vec<WeightedFixedPoint>,
    pub regularity: Regularity,
    pub assumed_connected: bool,
}

impl MonodromyCertificate {
    pub fn seifert(&self) -> SeifertData {
        SeifertData::new(self.euler, self.orders_on_loop.clone(), self.system.clone())
            .expect("certificate data is consistent")
    }
}

/// Catalog fixed points whose images the loop winds around once.
pub fn enclosed_fixed_points(
    sys: &dyn IntegrableSystem,
    loop_: &LoopSpec,
    tol: f64,
) -> Result<Vec<WeightedFixedPoint>, MonodromyError> {
    let mut out = Vec::new();
    for p in sys.fixed_point_catalog() {
        match winding_number(loop_, p.f_value, tol) {
            Ok(1) => out.push(p),
            Ok(0) => {}
            Ok(w) => {
                return Err(MonodromyError::InvalidLoop(format!(
                    "winding number {w} around ({}, {}); loop must be simple and counterclockwise",
                    p.f_value.0, p.f_value.1
                )))
            }
            Err(MonodromyError::PointOnLoop { point, distance }) => {
                return Err(MonodromyError::FixedPointOnLoop {
                    f_value: point,
                    distance,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Orders of the stratum images crossed by the loop, with crossing records.
pub fn orders_on_loop(
    sys: &dyn IntegrableSystem,
    loop_: &LoopSpec,
    samples: usize,
    min_angle_deg: f64,
) -> Result<OrdersOnLoop, MonodromyError> {
    let fixed: Vec<Point2> = sys.fixed_point_catalog().iter().map(|p| p.f_value).collect();
    let mut crossings = Vec::new();
    let mut orders = BTreeSet::new();
    let mut min_endpoint = f64::INFINITY;
    for st in sys.strata() {
        for line in stratum_image(sys, &st, samples) {
            for end in [line.first(), line.last()].into_iter().flatten() {
                // endpoints next to a fixed-point image are where the stratum
                // closes up, not a genuine end
                let near_fixed = fixed
                    .iter()
                    .any(|f| (f.0 - end.0).hypot(f.1 - end.1) < 1e-2 * (1.0 + f.0.abs() + f.1.abs()));
                if !near_fixed {
                    min_endpoint = min_endpoint.min(loop_.distance_to(*end));
                }
            }
            let segs = line.len().saturating_sub(1);
            for i in 0..segs {
                let (a, b) = (line[i], line[i + 1]);
                for (_, p, t) in loop_.intersect_segment(a, b) {
                    let d = (b.0 - a.0, b.1 - a.1);
                    let dn = d.0.hypot(d.1);
                    let sin = ((d.0 * t.1 - d.1 * t.0) / dn).abs().min(1.0);
                    let angle = sin.asin().to_degrees();
                    if angle < min_angle_deg {
                        return Err(MonodromyError::NonTransversal {
                            order: st.order,
                            point: p,
                            angle_deg: angle,
                        });
                    }
                    orders.insert(st.order);
                    crossings.push(Crossing {
                        order: st.order,
                        stratum: st.description.clone(),
                        point: p,
                        angle_deg: angle,
                    });
                }
            }
        }
    }
    Ok(OrdersOnLoop {
        orders: orders.into_iter().collect(),
        crossings,
        min_endpoint_distance: min_endpoint,
    })
}

fn checked_k(euler: Rational, n: u64) -> Result<i64, MonodromyError> {
    let k = euler.checked_mul_int(n as i128)?;
    match k.to_integer() {
        Some(k) => i64::try_from(k).map_err(|_| MonodromyError::Algebra(QError::Overflow)),
        None => Err(MonodromyError::Inconsistent { n, euler }),
    }
}

/// Full pipeline for one loop.
pub fn analyze(
    sys: &dyn IntegrableSystem,
    loop_: &LoopSpec,
    opts: &AnalyzeOptions,
) -> Result<MonodromyCertificate, MonodromyError> {
    loop_.validate()?;
    let normalized_from_clockwise = !loop_.is_counterclockwise();
    let lp = loop_.normalized();

    let enclosed = enclosed_fixed_points(sys, &lp, opts.point_tol)?;
    let min_fp = sys
        .fixed_point_catalog()
        .iter()
        .map(|p| lp.distance_to(p.f_value))
        .fold(f64::INFINITY, f64::min);
    let euler = euler_from_fixed_points(&enclosed);

    let found = orders_on_loop(sys, &lp, opts.stratum_samples, opts.min_angle_deg)?;
    let mut diagnostics = Vec::new();
    if found.min_endpoint_distance <= opts.point_tol.max(1e-9) * 10.0 {
        diagnostics.push(format!(
            "loop passes within {:e} of a sampled stratum endpoint",
            found.min_endpoint_distance
        ));
    }

    let mut forced = Vec::new();
    if let Some((m, n)) = sys.resonance() {
        let origin_enclosed = enclosed.iter().any(|p| p.location.iter().all(|c| *c == 0.0));
        if origin_enclosed {
            forced = [m as u64, n.unsigned_abs()].into_iter().filter(|o| *o >= 2).collect();
            forced.sort_unstable();
            forced.dedup();
            if forced != found.orders {
                diagnostics.push(format!(
                    "crossing detection found orders {:?}, resonance forces {:?}; using the forced orders",
                    found.orders, forced
                ));
            }
        }
    }
    let orders = if forced.is_empty() {
        found.orders.clone()
    } else {
        forced.clone()
    };

    let n = lcm_orders(&orders)?;
    let k = checked_k(euler, n)?;
    let seifert = SeifertData::new(euler, orders.clone(), sys.id())?;
    debug_assert_eq!(seifert.euler_to_k(), k);

    Ok(MonodromyCertificate {
        system: sys.id(),
        loop_: lp,
        euler,
        orders_on_loop: orders,
        n,
        k,
        transport_group: seifert.transport_group(),
        matrix: seifert.monodromy_matrix(),
        enclosed_fixed_points: enclosed,
        regularity: Regularity {
            simple: true,
            normalized_from_clockwise,
            crossings: found.crossings,
            detected_orders: found.orders,
            forced_orders: forced,
            min_fixed_point_distance: min_fp,
            min_stratum_endpoint_distance: found.min_endpoint_distance,
            diagnostics,
        },
        assumed_connected: true,
    })
}

/// Closed-form answer for the `m:(-n)` resonant family: with the origin
/// enclosed `N = m|n|` and `e = 1/(mn)`; otherwise `N = lcm(crossed orders)`
/// and the matrix is the identity.
pub fn resonant_case(
    m: i64,
    n: i64,
    encloses_origin: bool,
    crossed_orders: &[u64],
) -> Result<(u64, MonodromyMatrixQ), MonodromyError> {
    if m <= 0 || n == 0 || gcd(m as i128, n as i128) != 1 {
        return Err(MonodromyError::InvalidInput(format!(
            "need coprime m > 0, n != 0, got ({m}, {n})"
        )));
    }
    let mn = m as u64 * n.unsigned_abs();
    if encloses_origin {
        let e = Rational::new(1, m as i128 * n as i128)?;
        return Ok((mn, MonodromyMatrixQ::unipotent(e)));
    }
    if let Some(bad) = crossed_orders.iter().find(|o| **o < 2 || !mn.is_multiple_of(**o)) {
        return Err(MonodromyError::InvalidInput(format!(
            "order {bad} does not divide m n = {mn}"
        )));
    }
    Ok((lcm_orders(crossed_orders)?, MonodromyMatrixQ::identity()))
}
