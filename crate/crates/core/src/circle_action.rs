//! Fixed points of the circle action, their isotropy weights and the
//! fixed-point formula for the Euler number of the boundary Seifert manifold.
//!
//! Weight convention: near a fixed point, in complex coordinates `(z, w)`
//! that are positively oriented for the symplectic orientation, the action
//! is `(e^{imt} z, e^{-int} w)`. The contribution of the point is `1/(mn)`.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;
use thiserror::Error;

use crate::format;
use crate::qalgebra::{gcd, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircleActionError {
    #[error("weights must be nonzero, got ({0}, {1})")]
    ZeroWeight(i64, i64),
    #[error("weights ({0}, {1}) are not coprime")]
    NotCoprime(i64, i64),
    #[error("linearization is not a circle action: eigenvalue real part {0:e}")]
    NotCircleAction(f64),
    #[error("fixed point is not isolated: rotation rate {0:e}")]
    NonIsolated(f64),
    #[error("rotation rates ({0}, {1}) are not integers within tolerance")]
    NonIntegralRates(f64, f64),
    #[error("rounded weights ({0}, {1}) are degenerate")]
    DegenerateWeights(i64, i64),
}

/// Signed isotropy weights `(m, n)` of an isolated fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Weights(pub i64, pub i64);

impl Weights {
    pub fn new(m: i64, n: i64) -> Result<Self, CircleActionError> {
        if m == 0 || n == 0 {
            return Err(CircleActionError::ZeroWeight(m, n));
        }
        if gcd(m as i128, n as i128) != 1 {
            return Err(CircleActionError::NotCoprime(m, n));
        }
        Ok(Weights(m, n))
    }

    pub fn contribution(&self) -> Rational {
        Rational::new(1, self.0 as i128 * self.1 as i128).expect("nonzero weights")
    }
}

/// An isolated fixed point of the circle action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedFixedPoint {
    #[serde(serialize_with = "format::ser_reals")]
    pub location: Vec<f64>,
    pub weights: Weights,
    #[serde(serialize_with = "format::ser_real_pair")]
    pub f_value: (f64, f64),
    pub contribution: Rational,
}

impl WeightedFixedPoint {
    pub fn new(location: Vec<f64>, weights: Weights, f_value: (f64, f64)) -> Self {
        WeightedFixedPoint {
            location,
            contribution: weights.contribution(),
            weights,
            f_value,
        }
    }
}

/// `1/(m n)` for a single fixed point.
pub fn contribution(p: &WeightedFixedPoint) -> Rational {
    p.weights.contribution()
}

/// Euler number of the boundary: the sum of `1/(m_k n_k)`.
pub fn euler_from_fixed_points(points: &[WeightedFixedPoint]) -> Rational {
    points.iter().map(contribution).sum()
}

/// Recovers signed isotropy weights from the linearization `l` of the
/// 2pi-periodic generator at an isolated fixed point.
///
/// `l` is expressed in a local frame whose orientation relative to the
/// symplectic orientation is `orientation_sign` (`+1` or `-1`). The first
/// complex plane (`z`) is the invariant plane carrying more of the first
/// frame axis; ties go to the slower rotation. This makes the output
/// coincide with `(m, n)` for the `m:(-n)` oscillator written in
/// `(q1, p1, q2, p2)` order.
pub fn weights_from_linearization(
    l: &Matrix4<f64>,
    orientation_sign: f64,
    tol: f64,
) -> Result<Weights, CircleActionError> {
    let eig = l.complex_eigenvalues();
    let max_re = eig.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
    if max_re > tol {
        return Err(CircleActionError::NotCircleAction(max_re));
    }
    let mut rates: Vec<f64> = eig.iter().map(|c| c.im.abs()).collect();
    rates.sort_by(|a, b| a.total_cmp(b));
    let slow = 0.5 * (rates[0] + rates[1]);
    let fast = 0.5 * (rates[2] + rates[3]);
    if slow < tol {
        return Err(CircleActionError::NonIsolated(slow));
    }

    let l2 = l * l;
    let id = Matrix4::<f64>::identity();
    // (vector spanning plane, rate) for the two invariant planes, z first
    let (p1, w1, p2, w2) = if (fast - slow).abs() > tol {
        let proj_slow = (l2 + id * fast * fast) / (fast * fast - slow * slow);
        let proj_fast = id - proj_slow;
        let v_slow = dominant_column(&proj_slow);
        let v_fast = dominant_column(&proj_fast);
        if proj_fast[(0, 0)] > proj_slow[(0, 0)] + 1e-9 {
            (v_fast, fast, v_slow, slow)
        } else {
            (v_slow, slow, v_fast, fast)
        }
    } else {
        // L = w K with K a complex structure; any K-invariant splitting works
        let w = 0.5 * (slow + fast);
        let v = Vector4::new(1.0, 0.0, 0.0, 0.0);
        let lv = l * v / w;
        let mut best = Vector4::zeros();
        let mut best_norm = -1.0;
        for i in 0..4 {
            let mut e = Vector4::zeros();
            e[i] = 1.0;
            let r = complement(&e, &v, &lv);
            if r.norm() > best_norm {
                best_norm = r.norm();
                best = r;
            }
        }
        (v, w, best / best_norm, w)
    };

    let frame = Matrix4::from_columns(&[p1, l * p1 / w1, p2, l * p2 / w2]);
    let s = frame.determinant().signum() * orientation_sign.signum();

    let (m_r, n_r) = (w1.round(), w2.round());
    if (w1 - m_r).abs() > tol || (w2 - n_r).abs() > tol {
        return Err(CircleActionError::NonIntegralRates(w1, w2));
    }
    let m = m_r as i64;
    let n = -(s as i64) * n_r as i64;
    if gcd(m as i128, n as i128) != 1 {
        return Err(CircleActionError::DegenerateWeights(m, n));
    }
    Ok(Weights(m, n))
}

fn dominant_column(p: &Matrix4<f64>) -> Vector4<f64> {
    let mut best = p.column(0).into_owned();
    for j in 1..4 {
        let c = p.column(j).into_owned();
        if c.norm() > best.norm() {
            best = c;
        }
    }
    best / best.norm()
}

fn complement(e: &Vector4<f64>, a: &Vector4<f64>, b: &Vector4<f64>) -> Vector4<f64> {
    let an = a / a.norm();
    let mut r = e - an * an.dot(e);
    let bp = b - an * an.dot(b);
    let bn = bp / bp.norm();
    r -= bn * bn.dot(&r);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(m: i64, n: i64) -> WeightedFixedPoint {
        WeightedFixedPoint::new(vec![0.0; 4], Weights::new(m, n).unwrap(), (0.0, 0.0))
    }

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    /// Linearization of `(e^{imt} z, e^{-int} w)` in `(q1, p1, q2, p2)` with
    /// `z = p1 + i q1`, `w = p2 + i q2`: `q1' = m p1, p1' = -m q1`,
    /// `q2' = -n p2, p2' = n q2`.
    fn oscillator(m: f64, n: f64) -> Matrix4<f64> {
        Matrix4::new(
            0.0, m, 0.0, 0.0, //
            -m, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -n, //
            0.0, 0.0, n, 0.0,
        )
    }

    #[test]
    fn contributions() {
        assert_eq!(contribution(&fp(1, 2)), q(1, 2));
        assert_eq!(contribution(&fp(1, 1)), Rational::ONE);
        assert_eq!(contribution(&fp(1, -1)), -Rational::ONE);
        assert_eq!(euler_from_fixed_points(&[fp(1, 2)]), q(1, 2));
        assert_eq!(euler_from_fixed_points(&[]), Rational::ZERO);
        assert_eq!(euler_from_fixed_points(&[fp(1, 2), fp(1, 2)]), Rational::ONE);
        for m in 1..=5 {
            for n in 1..=5 {
                if gcd(m, n) == 1 {
                    assert_eq!(euler_from_fixed_points(&[fp(m as i64, n as i64)]), q(1, m * n));
                }
            }
        }
    }

    #[test]
    fn weight_validation() {
        assert_eq!(Weights::new(0, 1), Err(CircleActionError::ZeroWeight(0, 1)));
        assert_eq!(Weights::new(2, 4), Err(CircleActionError::NotCoprime(2, 4)));
        assert!(Weights::new(-1, 3).is_ok());
    }

    #[test]
    fn oscillator_weights() {
        for m in 1..=5i64 {
            for n in -5..=5i64 {
                if n == 0 || gcd(m as i128, n as i128) != 1 {
                    continue;
                }
                let w = weights_from_linearization(&oscillator(m as f64, n as f64), 1.0, 1e-6).unwrap();
                assert_eq!(w, Weights(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn plane_swap_preserves_contribution() {
        // conjugate by the even permutation swapping the two coordinate planes
        let p = Matrix4::new(
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0,
        );
        for (m, n) in [(1.0, 2.0), (2.0, 3.0), (3.0, -1.0), (1.0, 1.0), (1.0, -1.0)] {
            let l = oscillator(m, n);
            let a = weights_from_linearization(&l, 1.0, 1e-6).unwrap();
            let b = weights_from_linearization(&(p * l * p), 1.0, 1e-6).unwrap();
            assert_eq!(a.contribution(), b.contribution());
        }
    }

    #[test]
    fn orientation_flip_negates_second_weight() {
        let w = weights_from_linearization(&oscillator(1.0, 2.0), -1.0, 1e-6).unwrap();
        assert_eq!(w, Weights(1, -2));
    }

    #[test]
    fn linearization_errors() {
        let mut bad = oscillator(1.0, 2.0);
        bad[(0, 0)] = 0.1;
        bad[(1, 1)] = 0.1;
        assert!(matches!(
            weights_from_linearization(&bad, 1.0, 1e-6),
            Err(CircleActionError::NotCircleAction(_))
        ));
        let mut degenerate = oscillator(1.0, 2.0);
        degenerate[(0, 1)] = 0.0;
        degenerate[(1, 0)] = 0.0;
        assert!(matches!(
            weights_from_linearization(&degenerate, 1.0, 1e-6),
            Err(CircleActionError::NonIsolated(_))
        ));
        assert!(matches!(
            weights_from_linearization(&oscillator(1.0, 1.5), 1.0, 1e-6),
            Err(CircleActionError::NonIntegralRates(..))
        ));
        assert!(matches!(
            weights_from_linearization(&oscillator(2.0, 4.0), 1.0, 1e-6),
            Err(CircleActionError::DegenerateWeights(2, 4))
        ));
    }

    #[test]
    fn json_shape() {
        let p = WeightedFixedPoint::new(vec![0.0, 1.0], Weights(1, 2), (0.0, -1.0));
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(
            js,
            r#"{"location":[0.0000000000000000,1.0000000000000000],"weights":[1,2],"f_value":[0.0000000000000000,-1.0000000000000000],"contribution":"1/2"}"#
        );
    }
}
