//! Exact integer Laurent polynomials in a single variable `q`.
//!
//! Storage is dense: a lowest exponent plus a coefficient vector whose first
//! and last entries are nonzero. The zero polynomial has an empty vector.
//! All coefficient arithmetic is checked; overflow panics instead of wrapping.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<i64>,
}

#[inline]
fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("Laurent coefficient overflow in {a} + {b}"))
}

#[inline]
fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("Laurent coefficient overflow in {a} * {b}"))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// `coeff * q^exp`.
    pub fn monomial(coeff: i64, exp: i32) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        Self {
            low: exp,
            coeffs: vec![coeff],
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, i64> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert(0);
            *slot = checked_add(*slot, c);
        }
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero();
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::normalized(lo, coeffs)
    }

    fn normalized(mut low: i32, mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            low += lead_zeros as i32;
        }
        Self { low, coeffs }
    }

    /// Quantum integer `[n]` for `n` in {2, 3}: `q + q^-1` and `q^2 + 1 + q^-2`.
    pub fn quantum_int(n: u32) -> Result<Self, Error> {
        match n {
            2 => Ok(Self::from_terms([(1, 1), (-1, 1)])),
            3 => Ok(Self::from_terms([(2, 1), (0, 1), (-2, 1)])),
            _ => Err(Error::QuantumIntDomain(n)),
        }
    }

    /// `[2] = q + q^-1`.
    pub fn qint2() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    /// `[3] = q^2 + 1 + q^-2`.
    pub fn qint3() -> Self {
        Self::from_terms([(2, 1), (0, 1), (-2, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i32 - 1)
        }
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(self.low)
        }
    }

    pub fn leading_coeff(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff_at(&self, exp: i32) -> i64 {
        if self.is_zero() || exp < self.low {
            return 0;
        }
        self.coeffs
            .get((exp - self.low) as usize)
            .copied()
            .unwrap_or(0)
    }

    /// Nonzero terms as `(exponent, coefficient)`, increasing exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.low + i as i32, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `p(q) -> p(q^-1)`.
    pub fn substitute_q_inverse(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let deg = self.degree().unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -deg, coeffs }
    }

    /// `p(q) -> p(q^k)` for `k != 0`.
    pub fn substitute_power(&self, k: i32) -> Self {
        assert!(k != 0, "substitution exponent must be nonzero");
        Self::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + shift,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| checked_mul(c, k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Invariant under `q <-> q^-1`.
    pub fn is_palindromic(&self) -> bool {
        *self == self.substitute_q_inverse()
    }

    /// Every exponent with a nonzero coefficient is even.
    pub fn has_only_even_exponents(&self) -> bool {
        self.terms().all(|(e, _)| e % 2 == 0)
    }

    /// Exact division in `Z[q, q^-1]`. Returns `None` when `divisor` does not
    /// divide `self` with integer coefficients.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dlead = divisor.leading_coeff();
        let ddeg = divisor.degree().unwrap();
        let dlow = divisor.low;
        let mut rem = self.clone();
        let mut quotient: Vec<(i32, i64)> = Vec::new();
        // Long division from the top; the remainder's span shrinks each step.
        while !rem.is_zero() {
            let rdeg = rem.degree().unwrap();
            if rdeg - rem.low < ddeg - dlow {
                return None;
            }
            let lc = rem.leading_coeff();
            if lc % dlead != 0 {
                return None;
            }
            let c = lc / dlead;
            let e = rdeg - ddeg;
            quotient.push((e, c));
            rem = &rem - &divisor.scale(c).shift(e);
        }
        Some(Self::from_terms(quotient))
    }

    fn add_impl(&self, other: &Self, sign: i64) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.scale(sign);
        }
        let low = self.low.min(other.low);
        let high = self.degree().unwrap().max(other.degree().unwrap());
        let mut coeffs = vec![0i64; (high - low + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] = c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - low) as usize + i];
            *slot = checked_add(*slot, checked_mul(c, sign));
        }
        Self::normalized(low, coeffs)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = checked_add(coeffs[i + j], checked_mul(a, b));
            }
        }
        Self::normalized(self.low + other.low, coeffs)
    }

    /// Exponent-to-coefficient map with string keys, the JSON wire form.
    pub fn to_json_map(&self) -> BTreeMap<String, i64> {
        self.terms().map(|(e, c)| (e.to_string(), c)).collect()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Canonical rendering: decreasing exponents, e.g. `q^4 + 2*q^2 + 3 + 2*q^-2 + q^-4`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => f.write_str("q")?,
                (1, m) => write!(f, "{m}*q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, m) => write!(f, "{m}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the canonical rendering (and minor whitespace variations).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| Error::Parse(format!("Laurent polynomial {s:?}: {msg}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        if compact == "0" {
            return Ok(Self::zero());
        }
        // Split into signed terms; a '-' directly after '^' is an exponent sign.
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut out = Vec::new();
        for t in terms {
            let (sign, body) = match t.as_bytes().first() {
                Some(b'-') => (-1i64, &t[1..]),
                Some(b'+') => (1, &t[1..]),
                _ => (1, t),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coeff, var) = match body.split_once('*') {
                Some((c, v)) => (
                    c.parse::<i64>().map_err(|_| bad("bad coefficient"))?,
                    Some(v),
                ),
                None if body.starts_with('q') => (1, Some(body)),
                None => (body.parse::<i64>().map_err(|_| bad("bad constant"))?, None),
            };
            let exp = match var {
                None => 0,
                Some("q") => 1,
                Some(v) => v
                    .strip_prefix("q^")
                    .ok_or_else(|| bad("expected q^<int>"))?
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse::<i32>()
                    .map_err(|_| bad("bad exponent"))?,
            };
            out.push((exp, sign * coeff));
        }
        Ok(Self::from_terms(out))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json_map().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, i64>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, c) in map {
            let e = k.parse::<i32>().map_err(serde::de::Error::custom)?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(&self, rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, 1));
forward_binop!(Sub, sub, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, -1));
forward_binop!(Mul, mul, |a: &LaurentPoly, b: &LaurentPoly| a.mul_impl(b));

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_impl(rhs, 1);
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self = self.add_impl(&rhs, 1);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_impl(rhs, -1);
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.mul_impl(rhs);
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, p| acc * p)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(c, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_cancels_and_prunes() {
        let a = LaurentPoly::q() + LaurentPoly::one();
        assert_eq!(a + LaurentPoly::from(-1), LaurentPoly::q());
        let x = p("3*q^2 - q^-1");
        assert_eq!(LaurentPoly::zero() + &x, x);
        let two = LaurentPoly::qint2();
        assert_eq!(&two + &two, p("2*q + 2*q^-1"));
    }

    #[test]
    fn products_of_quantum_integers() {
        let two = LaurentPoly::qint2();
        let three = LaurentPoly::qint3();
        assert_eq!(&two * &two, p("q^2 + 2 + q^-2"));
        // (q + q^-1)(q^2 + 1 + q^-2) by hand
        assert_eq!(&two * &three, p("q^3 + 2*q + 2*q^-1 + q^-3"));
        assert_eq!(&three * &LaurentPoly::one(), three);
    }

    #[test]
    fn quantum_int_domain() {
        assert_eq!(LaurentPoly::quantum_int(2).unwrap(), p("q + q^-1"));
        assert_eq!(LaurentPoly::quantum_int(3).unwrap(), p("q^2 + 1 + q^-2"));
        assert!(matches!(
            LaurentPoly::quantum_int(5),
            Err(Error::QuantumIntDomain(5))
        ));
    }

    #[test]
    fn coefficient_lookup() {
        let three = LaurentPoly::qint3();
        assert_eq!(three.coeff_at(2), 1);
        assert_eq!(three.coeff_at(1), 0);
        // q^-6 [3]^2 = q^-2 + 2q^-4 + 3q^-6 + 2q^-8 + q^-10
        let x = three.pow(2).shift(-6);
        assert_eq!(x.coeff_at(-6), 3);
        assert_eq!(x.coeff_at(-2), 1);
        assert_eq!(x.coeff_at(100), 0);
    }

    #[test]
    fn inverse_substitution() {
        assert_eq!(p("q^2 + 3").substitute_q_inverse(), p("q^-2 + 3"));
        assert_eq!(LaurentPoly::qint3().substitute_q_inverse(), LaurentPoly::qint3());
        assert_eq!(LaurentPoly::monomial(1, -6).substitute_q_inverse(), LaurentPoly::monomial(1, 6));
    }

    #[test]
    fn a2_identity() {
        let two = LaurentPoly::qint2();
        assert_eq!(&two * &two - LaurentPoly::qint3(), LaurentPoly::one());
    }

    #[test]
    fn canonical_rendering() {
        let x = LaurentPoly::qint3().pow(2);
        assert_eq!(x.to_string(), "q^4 + 2*q^2 + 3 + 2*q^-2 + q^-4");
        assert_eq!(p("-q^2 + q - 1").to_string(), "-q^2 + q - 1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("-2*q^-3").to_string(), "-2*q^-3");
    }

    #[test]
    fn json_uses_string_keys() {
        let j = serde_json::to_string(&LaurentPoly::qint2()).unwrap();
        assert_eq!(j, r#"{"-1":1,"1":1}"#);
        let back: LaurentPoly = serde_json::from_str(&j).unwrap();
        assert_eq!(back, LaurentPoly::qint2());
    }

    #[test]
    fn exact_division() {
        let three = LaurentPoly::qint3();
        let two = LaurentPoly::qint2();
        let prod = &three * &two.pow(3);
        assert_eq!(prod.div_exact(&two).unwrap(), &three * &two.pow(2));
        // (q^3 - q^-3) / (q - q^-1) = [3]
        let num = p("q^3 - q^-3");
        let den = p("q - q^-1");
        assert_eq!(num.div_exact(&den).unwrap(), three);
        assert!(three.div_exact(&two).is_none());
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_loud() {
        let big = LaurentPoly::monomial(i64::MAX / 2 + 1, 0);
        let _ = &big + &big;
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..6, -20i64..20), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a - &a, LaurentPoly::zero());
        }

        #[test]
        fn inversion_is_involutive_homomorphism(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!(a.substitute_q_inverse().substitute_q_inverse(), a.clone());
            prop_assert_eq!((&a * &b).substitute_q_inverse(),
                a.substitute_q_inverse() * b.substitute_q_inverse());
            prop_assert_eq!((&a + &b).substitute_q_inverse(),
                a.substitute_q_inverse() + b.substitute_q_inverse());
        }

        #[test]
        fn display_parse_roundtrip(a in arb_poly()) {
            let back: LaurentPoly = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            prop_assert_eq!(prod.div_exact(&b), Some(a));
        }
    }
}
