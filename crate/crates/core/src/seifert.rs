//! Seifert-fibration data and closed-form homological parallel transport.
//!
//! For a Seifert manifold cut open along a regular torus, with Euler number
//! `e`, exceptional orders `n_j` and `N = lcm(n_j)`, only the cycles
//! `p a + q b` with `N | p` transport, and transport acts as
//! `N a -> N a + k b`, `b -> b` with `k = N e`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qalgebra::{lcm_orders, Cycle, Lattice2, MonodromyMatrixQ, QError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("N * e = {n} * {euler} is not an integer")]
    NonIntegralK { n: u64, euler: Rational },
    #[error("non-orientable base: parallel transport is not unique")]
    NonOrientableBase,
    #[error(transparent)]
    Algebra(#[from] QError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseOrientability {
    Orientable,
    NonOrientable,
}

/// Euler number plus exceptional-orbit orders of a Seifert fibration.
///
/// Construction checks that `N * euler` is an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeifertRepr", into = "SeifertRepr")]
pub struct SeifertData {
    euler: Rational,
    orders: Vec<u64>,
    label: String,
    base_genus: Option<u32>,
    boundary_components: Option<u32>,
    n: u64,
}

#[derive(Serialize, Deserialize)]
struct SeifertRepr {
    euler: Rational,
    orders: Vec<u64>,
    #[serde(default)]
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary_components: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<BaseOrientability>,
}

impl TryFrom<SeifertRepr> for SeifertData {
    type Error = SeifertError;

    fn try_from(r: SeifertRepr) -> Result<Self, SeifertError> {
        if r.base == Some(BaseOrientability::NonOrientable) {
            return Err(SeifertError::NonOrientableBase);
        }
        let mut s = SeifertData::new(r.euler, r.orders, r.label)?;
        s.base_genus = r.base_genus;
        s.boundary_components = r.boundary_components;
        Ok(s)
    }
}

impl From<SeifertData> for SeifertRepr {
    fn from(s: SeifertData) -> Self {
        SeifertRepr {
            euler: s.euler,
            orders: s.orders,
            label: s.label,
            base_genus: s.base_genus,
            boundary_components: s.boundary_components,
            base: None,
        }
    }
}

/// Result of transporting one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transport {
    Image(Cycle),
    NotTransportable,
}

impl SeifertData {
    pub fn new(euler: Rational, orders: Vec<u64>, label: impl Into<String>) -> Result<Self, SeifertError> {
        let n = lcm_orders(&orders)?;
        let k = euler.checked_mul_int(n as i128)?;
        if !k.is_integer() {
            return Err(SeifertError::NonIntegralK { n, euler });
        }
        Ok(SeifertData {
            euler,
            orders,
            label: label.into(),
            base_genus: None,
            boundary_components: None,
            n,
        })
    }

    /// Same as [`SeifertData::new`] but rejects non-orientable bases up front.
    pub fn with_base(
        euler: Rational,
        orders: Vec<u64>,
        label: impl Into<String>,
        base: BaseOrientability,
        genus: Option<u32>,
    ) -> Result<Self, SeifertError> {
        if base == BaseOrientability::NonOrientable {
            return Err(SeifertError::NonOrientableBase);
        }
        let mut s = Self::new(euler, orders, label)?;
        s.base_genus = genus;
        Ok(s)
    }

    pub fn euler(&self) -> Rational {
        self.euler
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn base_genus(&self) -> Option<u32> {
        self.base_genus
    }

    /// lcm of the exceptional orders.
    pub fn lcm(&self) -> u64 {
        self.n
    }

    pub fn transport_group(&self) -> Lattice2 {
        Lattice2::transport(self.n)
    }

    pub fn transport(&self, c: Cycle) -> Transport {
        let n = self.n as i128;
        let p = c.a_coeff as i128;
        if p.rem_euclid(n) != 0 {
            return Transport::NotTransportable;
        }
        // p * e = (p / N) * k is an integer because N | p and N e = k.
        let shift = (p / n) * self.k() as i128;
        let b = (c.b_coeff as i128) + shift;
        match i64::try_from(b) {
            Ok(b) => Transport::Image(Cycle::new(c.a_coeff, b)),
            // an image outside i64 cannot be represented; treat as overflow panic
            Err(_) => panic!("transport image overflows i64"),
        }
    }

    /// `[[1, e], [0, 1]]`; as a map it is only defined on [`Self::transport_group`].
    pub fn monodromy_matrix(&self) -> MonodromyMatrixQ {
        MonodromyMatrixQ::unipotent(self.euler)
    }

    pub fn euler_to_k(&self) -> i64 {
        let k = self.quotient_euler();
        i64::try_from(k.to_integer().expect("validated at construction")).expect("k fits in i64")
    }

    pub fn k(&self) -> i64 {
        self.euler_to_k()
    }

    /// Euler number of the principal bundle obtained by dividing out Z_N.
    pub fn quotient_euler(&self) -> Rational {
        self.euler * Rational::integer(self.n as i128)
    }
}

/// `e = k / N` with `N = lcm(orders)`.
pub fn k_to_euler(k: i64, orders: &[u64]) -> Result<Rational, QError> {
    let n = lcm_orders(orders)?;
    Rational::new(k as i128, n as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn sd(e: Rational, orders: &[u64]) -> SeifertData {
        SeifertData::new(e, orders.to_vec(), "test").unwrap()
    }

    #[test]
    fn transport_group_examples() {
        assert_eq!(sd(q(1, 2), &[2]).transport_group(), Lattice2::transport(2));
        assert_eq!(sd(Rational::ZERO, &[]).transport_group(), Lattice2::transport(1));
        assert_eq!(sd(q(1, 6), &[2, 3]).transport_group(), Lattice2::transport(6));
    }

    #[test]
    fn transport_examples() {
        let half = sd(q(1, 2), &[2]);
        assert_eq!(half.transport(Cycle::new(2, 0)), Transport::Image(Cycle::new(2, 1)));
        assert_eq!(half.transport(Cycle::new(0, 1)), Transport::Image(Cycle::new(0, 1)));
        let integral = sd(Rational::ONE, &[2]);
        assert_eq!(integral.transport(Cycle::new(1, 0)), Transport::NotTransportable);
        let free = sd(Rational::ZERO, &[]);
        assert_eq!(free.transport(Cycle::new(3, -4)), Transport::Image(Cycle::new(3, -4)));
    }

    #[test]
    fn matrix_and_k_examples() {
        assert_eq!(
            sd(q(1, 2), &[2]).monodromy_matrix(),
            MonodromyMatrixQ::unipotent(q(1, 2))
        );
        assert!(sd(Rational::ZERO, &[]).monodromy_matrix().is_identity());
        for (m, n) in [(2u64, 3u64), (3, 5), (4, 5)] {
            let s = sd(q(1, (m * n) as i128), &[m, n]);
            assert_eq!(s.monodromy_matrix().shear(), q(1, (m * n) as i128));
            assert_eq!(s.quotient_euler(), Rational::ONE);
        }
        assert_eq!(sd(q(1, 2), &[2]).euler_to_k(), 1);
        assert_eq!(sd(Rational::ZERO, &[]).euler_to_k(), 0);
        assert_eq!(k_to_euler(5, &[2, 3]).unwrap(), q(5, 6));
        assert_eq!(k_to_euler(5, &[]).unwrap(), Rational::integer(5));
        assert_eq!(sd(q(5, 6), &[2, 3]).euler_to_k(), 5);
        assert_eq!(sd(q(1, 2), &[2]).quotient_euler(), Rational::ONE);
        assert_eq!(sd(Rational::ZERO, &[]).quotient_euler(), Rational::ZERO);
    }

    #[test]
    fn rejects_inconsistent_data() {
        assert!(matches!(
            SeifertData::new(q(1, 3), vec![2], ""),
            Err(SeifertError::NonIntegralK { .. })
        ));
        assert!(matches!(
            SeifertData::new(q(1, 2), vec![1], ""),
            Err(SeifertError::Algebra(QError::InvalidOrder(1)))
        ));
        assert_eq!(
            SeifertData::with_base(Rational::ZERO, vec![], "", BaseOrientability::NonOrientable, None),
            Err(SeifertError::NonOrientableBase)
        );
    }

    #[test]
    fn json_shape() {
        let s = SeifertData::new(q(1, 2), vec![2], "res:1:-2").unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"euler":"1/2","orders":[2],"label":"res:1:-2"}"#);
        let back: SeifertData = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<SeifertData>(r#"{"euler":"1/3","orders":[2]}"#).is_err());
        assert!(serde_json::from_str::<SeifertData>(r#"{"euler":"0","orders":[],"base":"non_orientable"}"#).is_err());
    }

    /// (e, orders) with N e integral.
    fn seifert_strategy() -> impl Strategy<Value = SeifertData> {
        (proptest::collection::vec(2u64..8, 0..3), -30i64..30).prop_map(|(orders, k)| {
            let e = k_to_euler(k, &orders).unwrap();
            SeifertData::new(e, orders, "p").unwrap()
        })
    }

    proptest! {
        #[test]
        fn transport_properties(s in seifert_strategy(),
                                a1 in -50i64..50, b1 in -50i64..50,
                                a2 in -50i64..50, b2 in -50i64..50) {
            let n = s.lcm() as i64;
            let k = s.euler_to_k();
            // integrality and inverse
            prop_assert_eq!(s.quotient_euler(), Rational::integer(k as i128));
            prop_assert_eq!(k_to_euler(k, s.orders()).unwrap(), s.euler());
            prop_assert_eq!(s.monodromy_matrix().det(), Rational::ONE);
            // b-axis is fixed
            prop_assert_eq!(s.transport(Cycle::new(0, b1)), Transport::Image(Cycle::new(0, b1)));
            // transportable iff N | a
            let c1 = Cycle::new(a1, b1);
            prop_assert_eq!(
                matches!(s.transport(c1), Transport::Image(_)),
                a1.rem_euclid(n) == 0
            );
            // deterministic
            prop_assert_eq!(s.transport(c1), s.transport(c1));
            // homomorphism on the transport group, matrix [[1,k],[0,1]] in basis (N a, b)
            let c1 = Cycle::new(a1 * n, b1);
            let c2 = Cycle::new(a2 * n, b2);
            let (Transport::Image(t1), Transport::Image(t2)) = (s.transport(c1), s.transport(c2)) else {
                panic!("lattice element not transportable");
            };
            let Transport::Image(t12) = s.transport(c1.checked_add(c2).unwrap()) else { panic!() };
            prop_assert_eq!(t1.checked_add(t2).unwrap(), t12);
            prop_assert_eq!(t1, Cycle::new(a1 * n, b1 + a1 * k));
            // agrees with the rational matrix on its domain
            prop_assert_eq!(s.monodromy_matrix().apply(c1).unwrap(), t1);
        }
    }
}
