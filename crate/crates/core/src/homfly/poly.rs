use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer Laurent polynomial in `a` and `z`, keyed by `(a_exp, z_exp)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<(i32, i32, i64)>", from = "Vec<(i32, i32, i64)>")]
pub struct HomflyPoly {
    terms: BTreeMap<(i32, i32), i64>,
}

impl HomflyPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0, 0)
    }

    pub fn monomial(c: i64, a: i32, z: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(a, z, c);
        p
    }

    fn add_term(&mut self, a: i32, z: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry((a, z)).or_insert(0);
        *slot = slot.checked_add(c).expect("HOMFLY coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&(a, z));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, a: i32, z: i32) -> i64 {
        self.terms.get(&(a, z)).copied().unwrap_or(0)
    }

    pub fn mul_monomial(&self, c: i64, a: i32, z: i32) -> Self {
        let mut p = Self::zero();
        for ((x, y), k) in self.terms() {
            p.add_term(x + a, y + z, k.checked_mul(c).expect("HOMFLY coefficient overflow"));
        }
        p
    }

    /// Division by `c a^a z^z`; `None` if some coefficient is not divisible.
    pub fn div_monomial(&self, c: i64, a: i32, z: i32) -> Option<Self> {
        if c == 0 || self.terms.values().any(|k| k % c != 0) {
            return None;
        }
        let mut p = Self::zero();
        for ((x, y), k) in self.terms() {
            p.add_term(x - a, y - z, k / c);
        }
        Some(p)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `a -> a^-1`.
    pub fn invert_a(&self) -> Self {
        let mut p = Self::zero();
        for ((a, z), c) in self.terms() {
            p.add_term(-a, z, c);
        }
        p
    }

    /// `z -> -z`.
    pub fn negate_z(&self) -> Self {
        let mut p = Self::zero();
        for ((a, z), c) in self.terms() {
            p.add_term(a, z, if z % 2 == 0 { c } else { -c });
        }
        p
    }

    /// The polynomial of the mirror image: `P(a^-1, -z)`.
    pub fn mirror(&self) -> Self {
        self.invert_a().negate_z()
    }

    /// Parses a sum of products of integers and the two named variables, with
    /// parentheses and integer exponents such as `v^(-2)`.
    pub fn parse_with(text: &str, a_var: &str, z_var: &str) -> Result<Self> {
        let mut p = Parser {
            src: text,
            pos: 0,
            a_var,
            z_var,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(out)
    }

    /// Single monomial `(c, a, z)` if this polynomial has one term.
    fn as_monomial(&self) -> Option<(i64, i32, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.terms().next().map(|((a, z), c)| (c, a, z))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    a_var: &'a str,
    z_var: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<HomflyPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<HomflyPoly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<HomflyPoly> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<HomflyPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer()?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            if neg {
                -n
            } else {
                n
            }
        } else {
            let neg = self.eat('-');
            let n = self.integer()?;
            if neg {
                -n
            } else {
                n
            }
        };
        let exp = i32::try_from(exp).map_err(|_| self.error("exponent too large"))?;
        if exp >= 0 {
            return Ok(base.pow(exp as u32));
        }
        match base.as_monomial() {
            Some((c, a, z)) if c == 1 || c == -1 => {
                let sign = if exp % 2 != 0 { c } else { 1 };
                Ok(HomflyPoly::monomial(sign, a * exp, z * exp))
            }
            _ => Err(self.error("negative exponent on a non-unit")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if end == 0 {
            return Err(self.error("expected an integer"));
        }
        let n = rest[..end].parse().map_err(|_| self.error("integer out of range"))?;
        self.pos += end;
        Ok(n)
    }

    fn atom(&mut self) -> Result<HomflyPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(HomflyPoly::monomial(self.integer()?, 0, 0)),
            Some(c) if c.is_alphabetic() => {
                let rest = &self.src[self.pos..];
                let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
                let name = &rest[..end];
                let p = if name == self.a_var {
                    HomflyPoly::monomial(1, 1, 0)
                } else if name == self.z_var {
                    HomflyPoly::monomial(1, 0, 1)
                } else {
                    return Err(self.error(&format!("unknown variable {name:?}")));
                };
                self.pos += end;
                Ok(p)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

impl FromStr for HomflyPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, "a", "z")
    }
}

impl fmt::Display for HomflyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|&((a, z), _)| (z, a));
        for (i, ((a, z), c)) in terms.into_iter().enumerate() {
            let mut vars = Vec::new();
            for (name, e) in [("a", a), ("z", z)] {
                match e {
                    0 => {}
                    1 => vars.push(name.to_string()),
                    _ => vars.push(format!("{name}^{e}")),
                }
            }
            let mag = c.unsigned_abs();
            let body = match (mag, vars.is_empty()) {
                (_, true) => mag.to_string(),
                (1, false) => vars.join("*"),
                _ => format!("{mag}*{}", vars.join("*")),
            };
            match (i, c < 0) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomflyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomflyPoly({self})")
    }
}

impl From<HomflyPoly> for Vec<(i32, i32, i64)> {
    fn from(p: HomflyPoly) -> Self {
        p.terms().map(|((a, z), c)| (a, z, c)).collect()
    }
}

impl From<Vec<(i32, i32, i64)>> for HomflyPoly {
    fn from(v: Vec<(i32, i32, i64)>) -> Self {
        let mut p = HomflyPoly::zero();
        for (a, z, c) in v {
            p.add_term(a, z, c);
        }
        p
    }
}

impl Add for HomflyPoly {
    type Output = HomflyPoly;
    fn add(mut self, rhs: HomflyPoly) -> HomflyPoly {
        for ((a, z), c) in rhs.terms() {
            self.add_term(a, z, c);
        }
        self
    }
}

impl Sub for HomflyPoly {
    type Output = HomflyPoly;
    fn sub(self, rhs: HomflyPoly) -> HomflyPoly {
        self + (-rhs)
    }
}

impl Neg for HomflyPoly {
    type Output = HomflyPoly;
    fn neg(self) -> HomflyPoly {
        self.mul_monomial(-1, 0, 0)
    }
}

impl Mul for &HomflyPoly {
    type Output = HomflyPoly;
    fn mul(self, rhs: &HomflyPoly) -> HomflyPoly {
        let mut p = HomflyPoly::zero();
        for ((a1, z1), c1) in self.terms() {
            for ((a2, z2), c2) in rhs.terms() {
                p.add_term(a1 + a2, z1 + z2, c1.checked_mul(c2).expect("HOMFLY coefficient overflow"));
            }
        }
        p
    }
}

impl Mul for HomflyPoly {
    type Output = HomflyPoly;
    fn mul(self, rhs: HomflyPoly) -> HomflyPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_roundtrip() {
        for s in ["2*a^2 - a^4 + a^2*z^2", "-a^-1*z^-1 + 3", "0", "z"] {
            let p: HomflyPoly = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<HomflyPoly>().unwrap(), p);
        }
        assert_eq!("2*a^2 - a^4 + a^2*z^2".parse::<HomflyPoly>().unwrap().to_string(), "2*a^2 - a^4 + a^2*z^2");
    }

    #[test]
    fn parser_handles_grouping_and_negative_powers() {
        let p = HomflyPoly::parse_with("(v^(-2)-1+ v^2)-z^2", "v", "z").unwrap();
        assert_eq!(p.coeff(-2, 0), 1);
        assert_eq!(p.coeff(0, 0), -1);
        assert_eq!(p.coeff(2, 0), 1);
        assert_eq!(p.coeff(0, 2), -1);
        let q = HomflyPoly::parse_with("(-v^(-4)+ 4*v^(-2)-1)*z^2", "v", "z").unwrap();
        assert_eq!(q.coeff(-4, 2), -1);
        assert_eq!(q.coeff(-2, 2), 4);
        assert_eq!(HomflyPoly::parse_with("-(v)^(-3)", "v", "z").unwrap(), HomflyPoly::monomial(-1, -3, 0));
    }

    #[test]
    fn parser_rejects_garbage() {
        for s in ["", "2*", "(a", "a^", "x", "2a)", "(1+a)^(-1)", "a ^ b"] {
            assert!(matches!(s.parse::<HomflyPoly>(), Err(Error::Parse(_))), "{s}");
        }
    }

    #[test]
    fn ring_ops_and_mirror() {
        let p: HomflyPoly = "a + z".parse().unwrap();
        assert_eq!(p.pow(2), "a^2 + 2*a*z + z^2".parse().unwrap());
        assert_eq!(p.mirror(), "a^-1 - z".parse().unwrap());
        assert_eq!(p.mirror().mirror(), p);
        assert!((p.clone() - p).is_zero());
        assert_eq!(HomflyPoly::monomial(2, 1, 1).div_monomial(2, 0, 1), Some(HomflyPoly::monomial(1, 1, 0)));
        assert_eq!(HomflyPoly::monomial(3, 0, 0).div_monomial(2, 0, 0), None);
    }

    #[test]
    fn serde_roundtrip() {
        let p: HomflyPoly = "2*a^2 - a^4 + a^2*z^2".parse().unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<HomflyPoly>(&s).unwrap(), p);
    }
}
