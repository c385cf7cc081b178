//! Integer Laurent polynomials in one variable.
//!
//! Polynomials in `A` store integer exponents. Polynomials in `t` store exponents in
//! half-units, so the key `3` means `t^{3/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variable {
    A,
    T,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: Variable,
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero(var: Variable) -> Self {
        LaurentPoly {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(var: Variable) -> Self {
        Self::monomial(var, 0, 1)
    }

    pub fn monomial(var: Variable, exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero(var);
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(var: Variable, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.var, self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.var);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitutes the inverse variable.
    pub fn invert(&self) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Reinterprets the polynomial in another variable, mapping each exponent.
    pub fn map_exponents(&self, var: Variable, f: impl Fn(i64) -> i64) -> Self {
        Self::from_terms(var, self.terms().map(|(e, c)| (f(e), c)))
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.var);
        while let Some(top) = rem.max_exp() {
            if top - dhi < rem.min_exp()? - dlo {
                return None;
            }
            let c = rem.coeff(top);
            if c % lead != 0 {
                return None;
            }
            let q = Self::monomial(self.var, top - dhi, c / lead);
            rem = &rem - &(&q * divisor);
            quot = &quot + &q;
        }
        Some(quot)
    }

    fn exp_label(&self, e: i64) -> String {
        match self.var {
            Variable::A => e.to_string(),
            Variable::T => format!("{e}/2"),
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.var);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let name = match self.var {
            Variable::A => "A",
            Variable::T => "t",
        };
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            let exp = match self.var {
                Variable::T if e % 2 != 0 => format!("{e}/2"),
                Variable::T => (e / 2).to_string(),
                Variable::A => e.to_string(),
            };
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (_, 1) => write!(f, "{name}^{exp}")?,
                (_, m) => write!(f, "{m}{name}^{exp}")?,
            }
        }
        Ok(())
    }
}

/// Serializes as a map from exponent label (`"k"` for `A`, `"k/2"` for `t`) to coefficient.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (e, c) in self.terms() {
            map.serialize_entry(&self.exp_label(e), &c)?;
        }
        map.end()
    }
}

/// Deserializes the map form; keys with a `/2` suffix select the `t` variable.
impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, i64> = BTreeMap::deserialize(d)?;
        let var = if raw.keys().any(|k| k.ends_with("/2")) {
            Variable::T
        } else {
            Variable::A
        };
        let mut p = LaurentPoly::zero(var);
        for (k, c) in raw {
            let num = k.strip_suffix("/2").unwrap_or(&k);
            let e: i64 = num.parse().map_err(serde::de::Error::custom)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}
