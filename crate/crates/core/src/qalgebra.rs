//! Exact rational arithmetic, unipotent 2x2 rational matrices and rank-2
//! sublattices of Z^2.
//!
//! Rationals are stored as reduced `i128` fractions. Every arithmetic
//! operation is checked: an overflow surfaces as [`QError::Overflow`] from
//! the `checked_*` methods and as a panic from the operator impls. Nothing
//! ever wraps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid exceptional-orbit order {0} (orders must be >= 2)")]
    InvalidOrder(i64),
    #[error("matrix image of cycle ({0},{1}) is not integral")]
    NotInDomain(i64, i64),
    #[error("matrix determinant is {0}, expected 1")]
    NotUnimodular(Rational),
    #[error("lattice generators are linearly dependent")]
    Degenerate,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

pub type QResult<T> = Result<T, QError>;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Least common multiple of exceptional-orbit orders. The empty list has lcm 1.
pub fn lcm_orders(orders: &[u64]) -> QResult<u64> {
    let mut acc: u64 = 1;
    for &n in orders {
        if n < 2 {
            return Err(QError::InvalidOrder(n as i64));
        }
        let g = gcd(acc as i128, n as i128) as u64;
        acc = (acc / g).checked_mul(n).ok_or(QError::Overflow)?;
    }
    Ok(acc)
}

/// Reduced fraction `num/den` with `den >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> QResult<Self> {
        if den == 0 {
            return Err(QError::ZeroDenominator);
        }
        let g = gcd(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or(QError::Overflow)?;
            d = d.checked_neg().ok_or(QError::Overflow)?;
        }
        Ok(Rational { num: n, den: d })
    }

    pub fn integer(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// The integer value, if the fraction has denominator 1.
    pub fn to_integer(&self) -> Option<i128> {
        self.is_integer().then_some(self.num)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, rhs: Self) -> QResult<Self> {
        let g = gcd(self.den, rhs.den);
        let l = self.den / g;
        let r = rhs.den / g;
        let num = self
            .num
            .checked_mul(r)
            .and_then(|a| rhs.num.checked_mul(l).and_then(|b| a.checked_add(b)))
            .ok_or(QError::Overflow)?;
        let den = l.checked_mul(rhs.den).ok_or(QError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_neg(self) -> QResult<Self> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(QError::Overflow)?,
            den: self.den,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> QResult<Self> {
        self.checked_add(rhs.checked_neg()?)
    }

    pub fn checked_mul(self, rhs: Self) -> QResult<Self> {
        // cross-reduce first so intermediate products stay small
        let g1 = gcd(self.num, rhs.den);
        let g2 = gcd(rhs.num, self.den);
        let num = (self.num / g1).checked_mul(rhs.num / g2).ok_or(QError::Overflow)?;
        let den = (self.den / g2).checked_mul(rhs.den / g1).ok_or(QError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_recip(self) -> QResult<Self> {
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(self, rhs: Self) -> QResult<Self> {
        self.checked_mul(rhs.checked_recip()?)
    }

    pub fn checked_mul_int(self, k: i128) -> QResult<Self> {
        self.checked_mul(Rational::integer(k))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = QError;

    fn from_str(s: &str) -> QResult<Self> {
        let t = s.trim();
        let bad = || QError::Parse(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: i128 = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::integer(t.parse().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n as i128)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num.checked_mul(other.den);
        let rhs = other.num.checked_mul(self.den);
        match (lhs, rhs) {
            (Some(l), Some(r)) => l.cmp(&r),
            // fall back to the sign of the exact difference
            _ => match self.checked_sub(*other) {
                Ok(d) => d.num.cmp(&0),
                Err(_) => self.to_f64().total_cmp(&other.to_f64()),
            },
        }
    }
}

macro_rules! panicking_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("rational {}: {e}", stringify!($m)))
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.checked_neg().expect("rational negation overflow")
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A first-homology class `a_coeff * a + b_coeff * b` of a torus fiber,
/// where `b` is the class of a circle-action orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub a_coeff: i64,
    pub b_coeff: i64,
}

impl Cycle {
    pub const fn new(a_coeff: i64, b_coeff: i64) -> Self {
        Cycle { a_coeff, b_coeff }
    }

    pub fn checked_add(self, rhs: Cycle) -> QResult<Cycle> {
        Ok(Cycle {
            a_coeff: self.a_coeff.checked_add(rhs.a_coeff).ok_or(QError::Overflow)?,
            b_coeff: self.b_coeff.checked_add(rhs.b_coeff).ok_or(QError::Overflow)?,
        })
    }

    pub fn checked_sub(self, rhs: Cycle) -> QResult<Cycle> {
        Ok(Cycle {
            a_coeff: self.a_coeff.checked_sub(rhs.a_coeff).ok_or(QError::Overflow)?,
            b_coeff: self.b_coeff.checked_sub(rhs.b_coeff).ok_or(QError::Overflow)?,
        })
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a_coeff, self.b_coeff)
    }
}

impl FromStr for Cycle {
    type Err = QError;

    fn from_str(s: &str) -> QResult<Self> {
        let bad = || QError::Parse(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Cycle {
            a_coeff: a.trim().parse().map_err(|_| bad())?,
            b_coeff: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// True iff `c` lies in the parallel-transport group span{(n,0),(0,1)}.
pub fn in_transport_lattice(c: Cycle, n: u64) -> bool {
    assert!(n >= 1, "lattice index must be positive");
    (c.a_coeff as i128).rem_euclid(n as i128) == 0
}

/// 2x2 rational matrix with determinant exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonodromyMatrixQ {
    entries: [[Rational; 2]; 2],
}

impl MonodromyMatrixQ {
    pub fn try_new(entries: [[Rational; 2]; 2]) -> QResult<Self> {
        let det = entries[0][0]
            .checked_mul(entries[1][1])?
            .checked_sub(entries[0][1].checked_mul(entries[1][0])?)?;
        if det != Rational::ONE {
            return Err(QError::NotUnimodular(det));
        }
        Ok(MonodromyMatrixQ { entries })
    }

    /// `[[1, e], [0, 1]]`
    pub fn unipotent(e: Rational) -> Self {
        MonodromyMatrixQ {
            entries: [[Rational::ONE, e], [Rational::ZERO, Rational::ONE]],
        }
    }

    pub fn identity() -> Self {
        Self::unipotent(Rational::ZERO)
    }

    pub fn entries(&self) -> &[[Rational; 2]; 2] {
        &self.entries
    }

    pub fn det(&self) -> Rational {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn is_unipotent_upper(&self) -> bool {
        let e = &self.entries;
        e[0][0] == Rational::ONE && e[1][1] == Rational::ONE && e[1][0].is_zero()
    }

    pub fn is_identity(&self) -> bool {
        self.is_unipotent_upper() && self.entries[0][1].is_zero()
    }

    /// Off-diagonal entry of the unipotent form.
    pub fn shear(&self) -> Rational {
        self.entries[0][1]
    }

    /// Exact action on a cycle, rows as images: row 0 of `[[1, e], [0, 1]]`
    /// is the image of `a`, so `(p, q)` maps to `p * row0 + q * row1`.
    pub fn apply(&self, c: Cycle) -> QResult<Cycle> {
        let e = &self.entries;
        let p = Rational::from(c.a_coeff);
        let q = Rational::from(c.b_coeff);
        // image = p * row0 + q * row1
        let a_img = p.checked_mul(e[0][0])?.checked_add(q.checked_mul(e[1][0])?)?;
        let b_img = p.checked_mul(e[0][1])?.checked_add(q.checked_mul(e[1][1])?)?;
        match (a_img.to_integer(), b_img.to_integer()) {
            (Some(a), Some(b)) => Ok(Cycle {
                a_coeff: i64::try_from(a).map_err(|_| QError::Overflow)?,
                b_coeff: i64::try_from(b).map_err(|_| QError::Overflow)?,
            }),
            _ => Err(QError::NotInDomain(c.a_coeff, c.b_coeff)),
        }
    }

    pub fn to_strings(&self) -> [[String; 2]; 2] {
        self.entries.map(|row| row.map(|x| x.to_string()))
    }
}

impl fmt::Display for MonodromyMatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

impl Serialize for MonodromyMatrixQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonodromyMatrixQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = <[[Rational; 2]; 2]>::deserialize(d)?;
        MonodromyMatrixQ::try_new(entries).map_err(serde::de::Error::custom)
    }
}

/// Full-rank sublattice of Z^2 stored in row Hermite normal form:
/// basis rows `(h00, h01)` and `(0, h11)` with `h00, h11 > 0` and
/// `0 <= h01 < h11`. Equal lattices have equal representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice2 {
    basis: [Cycle; 2],
}

impl Lattice2 {
    /// Lattice spanned by the given generators (at least two independent ones).
    pub fn span(generators: &[Cycle]) -> QResult<Self> {
        // Row-reduce the generator matrix over Z.
        let mut rows: Vec<(i128, i128)> = generators
            .iter()
            .map(|c| (c.a_coeff as i128, c.b_coeff as i128))
            .collect();
        // Collapse the first column into a single row via gcd steps.
        let mut pivot: Option<(i128, i128)> = None;
        let mut rest: Vec<i128> = Vec::new();
        for (a, b) in rows.drain(..) {
            match pivot {
                None => {
                    if a == 0 {
                        rest.push(b);
                    } else {
                        pivot = Some((a, b));
                    }
                }
                Some((pa, pb)) => {
                    if a == 0 {
                        rest.push(b);
                        continue;
                    }
                    let (g, s, t) = ext_gcd(pa, a);
                    let nb = s
                        .checked_mul(pb)
                        .and_then(|x| t.checked_mul(b).and_then(|y| x.checked_add(y)))
                        .ok_or(QError::Overflow)?;
                    // the complementary unimodular row kills the first column
                    let kb = (a / g)
                        .checked_mul(pb)
                        .and_then(|x| (pa / g).checked_mul(b).and_then(|y| x.checked_sub(y)))
                        .ok_or(QError::Overflow)?;
                    pivot = Some((g, nb));
                    rest.push(kb);
                }
            }
        }
        let (mut h00, mut h01) = pivot.ok_or(QError::Degenerate)?;
        let h11 = rest.iter().fold(0i128, |acc, &x| gcd(acc, x));
        if h11 == 0 {
            return Err(QError::Degenerate);
        }
        if h00 < 0 {
            h00 = -h00;
            h01 = -h01;
        }
        h01 = h01.rem_euclid(h11);
        let to64 = |x: i128| i64::try_from(x).map_err(|_| QError::Overflow);
        Ok(Lattice2 {
            basis: [Cycle::new(to64(h00)?, to64(h01)?), Cycle::new(0, to64(h11)?)],
        })
    }

    /// span{(n, 0), (0, 1)}
    pub fn transport(n: u64) -> Self {
        assert!(n >= 1);
        Lattice2 {
            basis: [Cycle::new(n as i64, 0), Cycle::new(0, 1)],
        }
    }

    pub fn basis(&self) -> [Cycle; 2] {
        self.basis
    }

    /// Index of the sublattice in Z^2.
    pub fn index(&self) -> u64 {
        (self.basis[0].a_coeff as u64) * (self.basis[1].b_coeff as u64)
    }

    pub fn contains(&self, c: Cycle) -> bool {
        let [r0, r1] = self.basis;
        let (a, b) = (c.a_coeff as i128, c.b_coeff as i128);
        let h00 = r0.a_coeff as i128;
        if a % h00 != 0 {
            return false;
        }
        let k = a / h00;
        (b - k * r0.b_coeff as i128) % (r1.b_coeff as i128) == 0
    }
}

impl Serialize for Lattice2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [r0, r1] = self.basis;
        [[r0.a_coeff, r0.b_coeff], [r1.a_coeff, r1.b_coeff]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[[i64; 2]; 2]>::deserialize(d)?;
        Lattice2::span(&rows.map(|[a, b]| Cycle::new(a, b))).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    /// Smallest positive integer divisible by all entries, by enumeration.
    fn lcm_brute(xs: &[u64]) -> u64 {
        (1..).find(|c| xs.iter().all(|x| c % x == 0)).unwrap()
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_orders(&[2]).unwrap(), 2);
        assert_eq!(lcm_orders(&[]).unwrap(), 1);
        assert_eq!(lcm_brute(&[4, 6]), 12);
        assert_eq!(lcm_orders(&[4, 6]).unwrap(), 12);
        assert_eq!(lcm_orders(&[1]), Err(QError::InvalidOrder(1)));
        assert_eq!(lcm_orders(&[3, 0]), Err(QError::InvalidOrder(0)));
    }

    #[test]
    fn rational_normalizes() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(0, -7), Rational::ZERO);
        assert_eq!(q(0, 5).den(), 1);
        assert_eq!(Rational::new(1, 0), Err(QError::ZeroDenominator));
    }

    #[test]
    fn rational_display_and_parse() {
        assert_eq!(q(1, 2).to_string(), "1/2");
        assert_eq!(q(-4, 2).to_string(), "-2");
        assert_eq!("1/2".parse::<Rational>().unwrap(), q(1, 2));
        assert_eq!(" -3 ".parse::<Rational>().unwrap(), Rational::integer(-3));
        assert!("x/2".parse::<Rational>().is_err());
        assert_eq!(serde_json::to_string(&q(1, 6)).unwrap(), "\"1/6\"");
        assert_eq!(serde_json::to_string(&Rational::ONE).unwrap(), "\"1\"");
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::integer(i128::MAX);
        assert_eq!(big.checked_add(Rational::ONE), Err(QError::Overflow));
        assert_eq!(big.checked_mul(Rational::integer(2)), Err(QError::Overflow));
        assert_eq!(Rational::integer(i128::MIN).checked_neg(), Err(QError::Overflow));
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn operator_overflow_panics() {
        let _ = Rational::integer(i128::MAX) + Rational::ONE;
    }

    #[test]
    fn transport_lattice_membership() {
        assert!(in_transport_lattice(Cycle::new(2, 0), 2));
        assert!(!in_transport_lattice(Cycle::new(1, 0), 2));
        assert!(in_transport_lattice(Cycle::new(0, 5), 7));
        assert!(in_transport_lattice(Cycle::new(-4, 1), 2));
    }

    #[test]
    fn apply_examples() {
        let m = MonodromyMatrixQ::unipotent(q(1, 2));
        assert_eq!(m.apply(Cycle::new(2, 0)).unwrap(), Cycle::new(2, 1));
        assert_eq!(
            MonodromyMatrixQ::identity().apply(Cycle::new(5, -3)).unwrap(),
            Cycle::new(5, -3)
        );
        assert_eq!(m.apply(Cycle::new(1, 0)), Err(QError::NotInDomain(1, 0)));
    }

    #[test]
    fn matrix_requires_unit_determinant() {
        let bad = [[Rational::integer(2), Rational::ZERO], [Rational::ZERO, Rational::ONE]];
        assert!(matches!(MonodromyMatrixQ::try_new(bad), Err(QError::NotUnimodular(_))));
        let m = MonodromyMatrixQ::unipotent(q(1, 6));
        assert_eq!(m.det(), Rational::ONE);
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[["1","1/6"],["0","1"]]"#);
    }

    #[test]
    fn lattice_hermite_form() {
        let l = Lattice2::span(&[Cycle::new(2, 0), Cycle::new(0, 1)]).unwrap();
        assert_eq!(l, Lattice2::transport(2));
        // a different basis of the same lattice
        let l2 = Lattice2::span(&[Cycle::new(2, 1), Cycle::new(4, 3)]).unwrap();
        assert_eq!(l2, Lattice2::transport(2));
        let z2 = Lattice2::span(&[Cycle::new(3, 2), Cycle::new(1, 1)]).unwrap();
        assert_eq!(z2, Lattice2::transport(1));
        assert_eq!(Lattice2::transport(6).index(), 6);
        assert!(Lattice2::span(&[Cycle::new(1, 2), Cycle::new(2, 4)]).is_err());
        assert_eq!(serde_json::to_string(&Lattice2::transport(2)).unwrap(), "[[2,0],[0,1]]");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1_000_000i128..1_000_000, 1i128..1_000_000).prop_map(|(n, d)| q(n, d))
    }

    fn small_cycle() -> impl Strategy<Value = Cycle> {
        (-10_000i64..10_000, -10_000i64..10_000).prop_map(|(a, b)| Cycle::new(a, b))
    }

    proptest! {
        #[test]
        fn add_sub_round_trip(x in small_rational(), y in small_rational()) {
            prop_assert_eq!((x + y) - y, x);
            prop_assert_eq!(x * y, y * x);
            prop_assert!(gcd(x.num(), x.den()) == 1 && x.den() >= 1);
        }

        #[test]
        fn lcm_matches_enumeration(xs in proptest::collection::vec(2u64..10, 0..4)) {
            prop_assert_eq!(lcm_orders(&xs).unwrap(), lcm_brute(&xs));
        }

        #[test]
        fn transport_lattice_is_subgroup(c1 in small_cycle(), c2 in small_cycle(), n in 1u64..12) {
            if in_transport_lattice(c1, n) && in_transport_lattice(c2, n) {
                prop_assert!(in_transport_lattice(c1.checked_add(c2).unwrap(), n));
                prop_assert!(in_transport_lattice(c1.checked_sub(c2).unwrap(), n));
            }
            prop_assert_eq!(in_transport_lattice(c1, n), Lattice2::transport(n).contains(c1));
        }

        #[test]
        fn apply_is_additive(k in -20i128..20, n in 1i128..12, c1 in small_cycle(), c2 in small_cycle()) {
            let m = MonodromyMatrixQ::unipotent(q(k, n));
            prop_assert_eq!(m.det(), Rational::ONE);
            let sum = c1.checked_add(c2).unwrap();
            if let (Ok(a), Ok(b), Ok(s)) = (m.apply(c1), m.apply(c2), m.apply(sum)) {
                prop_assert_eq!(a.checked_add(b).unwrap(), s);
            }
        }

        #[test]
        fn hnf_is_basis_invariant(a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6,
                                  u in -3i64..3) {
            prop_assume!(a * d - b * c != 0);
            let l = Lattice2::span(&[Cycle::new(a, b), Cycle::new(c, d)]).unwrap();
            // unimodular change of basis: (r0 + u r1, r1)
            let r0 = Cycle::new(a + u * c, b + u * d);
            let l2 = Lattice2::span(&[r0, Cycle::new(c, d)]).unwrap();
            prop_assert_eq!(l, l2);
            prop_assert_eq!(l.index() as i64, (a * d - b * c).abs());
        }
    }
}
