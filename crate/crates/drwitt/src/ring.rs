//! Base rings for Witt vector components: ℤ₍p₎ and ℤ₍p₎[X].
//!
//! Witt functor inputs here are always torsion-free rings in which the ghost
//! map is injective, so the whole Witt arithmetic can run through ghost
//! coordinates with exact division on the way back. [`BaseRingElem`] is the
//! component type; [`SparsePoly`] is a one-variable polynomial with p-local
//! coefficients and zero terms dropped eagerly.

use crate::scalar::{PLocalInt, ScalarError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One-variable sparse polynomial over ℤ₍p₎, exponent ↦ coefficient.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsePoly {
    prime: u32,
    terms: BTreeMap<u64, PLocalInt>,
}

impl SparsePoly {
    pub fn zero(p: u32) -> Self {
        SparsePoly {
            prime: p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: PLocalInt) -> Self {
        let p = c.prime();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        SparsePoly { prime: p, terms }
    }

    /// Builds from (exponent, coefficient) pairs, merging duplicates.
    pub fn from_terms(p: u32, pairs: impl IntoIterator<Item = (u64, PLocalInt)>) -> Self {
        let mut poly = SparsePoly::zero(p);
        for (e, c) in pairs {
            poly.add_term(e, &c);
        }
        poly
    }

    /// The monomial c·X^e.
    pub fn monomial(e: u64, c: PLocalInt) -> Self {
        Self::from_terms(c.prime(), [(e, c)])
    }

    pub fn x(p: u32) -> Self {
        Self::monomial(1, PLocalInt::one(p))
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &PLocalInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: u64) -> PLocalInt {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| PLocalInt::zero(self.prime))
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: u64, c: &PLocalInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c.clone());
            }
            Some(old) => {
                let sum = &old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.prime, rhs.prime, "polynomial primes differ");
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            prime: self.prime,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.prime, rhs.prime, "polynomial primes differ");
        let mut out = SparsePoly::zero(self.prime);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &PLocalInt) -> Self {
        let mut out = SparsePoly::zero(self.prime);
        for (e, k) in self.terms() {
            out.add_term(*e, &(k * c));
        }
        out
    }

    /// Exponentiation by squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = SparsePoly::constant(PLocalInt::one(self.prime));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Coefficient-wise exact division by p^pow.
    pub fn div_exact_p_pow(&self, pow: u32) -> Result<Self, ScalarError> {
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms() {
            terms.insert(*e, c.div_exact_p_pow(pow)?);
        }
        Ok(SparsePoly {
            prime: self.prime,
            terms,
        })
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest degree first, the conventional reading order.
        for (e, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.numer().sign() == num_bigint::Sign::Minus {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{mag}*X")?,
                (_, true) => write!(f, "X^{e}")?,
                (_, false) => write!(f, "{mag}*X^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses one term of a polynomial literal: `[coeff][*][X[^exp]]`.
fn parse_term(term: &str, p: u32) -> Result<(u64, PLocalInt), String> {
    let term = term.trim();
    if term.is_empty() {
        return Err("empty term".into());
    }
    let (coeff_str, var_str) = match term.find(['X', 'x']) {
        None => (term, ""),
        Some(i) => (term[..i].trim().trim_end_matches('*').trim(), &term[i..]),
    };
    let coeff = match coeff_str {
        "" => PLocalInt::one(p),
        "-" => -PLocalInt::one(p),
        "+" => PLocalInt::one(p),
        s => {
            let (num, den) = match s.split_once('/') {
                None => (s, "1"),
                Some((n, d)) => (n, d),
            };
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator {num:?}"))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator {den:?}"))?;
            PLocalInt::new(num, den, p).map_err(|e| e.to_string())?
        }
    };
    let exp = match var_str {
        "" => 0,
        "X" | "x" => 1,
        s => {
            let rest = s[1..].trim_start();
            let rest = rest.strip_prefix('^').ok_or(format!("bad term {term:?}"))?;
            rest.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad exponent {rest:?}"))?
        }
    };
    Ok((exp, coeff))
}

impl SparsePoly {
    /// Parses a polynomial literal like `X^2 + 3*X - 4/3` at the given prime.
    ///
    /// Accepted pieces: integer or `a/b` coefficients, optional `*`, variable
    /// `X` or `x`, caret exponents. The Unicode minus sign is normalized.
    pub fn parse(input: &str, p: u32) -> Result<Self, String> {
        let s = input.replace('\u{2212}', "-");
        let s = s.trim();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        // Split into signed terms at top-level + and -, keeping signs that
        // belong to exponents or fractions intact (none can occur: exponents
        // are unsigned, fractions are sign-normalized up front).
        let mut poly = SparsePoly::zero(p);
        let mut term = String::new();
        let mut sign = 1i64;
        let mut chars = s.chars().peekable();
        let flush = |term: &mut String, sign: i64, poly: &mut SparsePoly| -> Result<(), String> {
            if term.trim().is_empty() {
                return Err("dangling sign".into());
            }
            let (e, c) = parse_term(term, p)?;
            let c = if sign < 0 { -&c } else { c };
            poly.add_term(e, &c);
            term.clear();
            Ok(())
        };
        // Leading sign applies to the first term.
        let mut pending_sign = 1i64;
        let mut started = false;
        while let Some(ch) = chars.next() {
            match ch {
                '+' | '-' if started => {
                    flush(&mut term, sign, &mut poly)?;
                    sign = if ch == '-' { -1 } else { 1 };
                }
                '+' | '-' => {
                    pending_sign = if ch == '-' { -pending_sign } else { pending_sign };
                }
                c if c.is_whitespace() && !started => {}
                c => {
                    if !started {
                        sign = pending_sign;
                        started = true;
                    }
                    term.push(c);
                }
            }
        }
        if !started {
            return Err("empty polynomial".into());
        }
        flush(&mut term, sign, &mut poly)?;
        Ok(poly)
    }
}

/// A component of a Witt vector: a p-local scalar or a polynomial over them.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseRingElem {
    Scalar(PLocalInt),
    Poly(SparsePoly),
}

impl BaseRingElem {
    pub fn from_int(n: impl Into<BigInt>, p: u32) -> Self {
        BaseRingElem::Scalar(PLocalInt::from_int(n, p))
    }

    pub fn zero_like(&self) -> Self {
        match self {
            BaseRingElem::Scalar(c) => BaseRingElem::Scalar(PLocalInt::zero(c.prime())),
            BaseRingElem::Poly(q) => BaseRingElem::Poly(SparsePoly::zero(q.prime())),
        }
    }

    pub fn prime(&self) -> u32 {
        match self {
            BaseRingElem::Scalar(c) => c.prime(),
            BaseRingElem::Poly(q) => q.prime(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            BaseRingElem::Scalar(c) => c.is_zero(),
            BaseRingElem::Poly(q) => q.is_zero(),
        }
    }

    pub fn is_poly(&self) -> bool {
        matches!(self, BaseRingElem::Poly(_))
    }

    /// Scalar payload, if this is not a polynomial.
    pub fn as_scalar(&self) -> Option<&PLocalInt> {
        match self {
            BaseRingElem::Scalar(c) => Some(c),
            BaseRingElem::Poly(_) => None,
        }
    }

    fn lift(&self, other: &Self) -> (SparsePoly, SparsePoly) {
        // Mixed scalar/poly operations embed the scalar as a constant.
        let to_poly = |e: &Self| match e {
            BaseRingElem::Scalar(c) => SparsePoly::constant(c.clone()),
            BaseRingElem::Poly(q) => q.clone(),
        };
        (to_poly(self), to_poly(other))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (BaseRingElem::Scalar(a), BaseRingElem::Scalar(b)) => BaseRingElem::Scalar(a + b),
            _ => {
                let (a, b) = self.lift(rhs);
                BaseRingElem::Poly(a.add(&b))
            }
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            BaseRingElem::Scalar(a) => BaseRingElem::Scalar(-a),
            BaseRingElem::Poly(q) => BaseRingElem::Poly(q.neg()),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (BaseRingElem::Scalar(a), BaseRingElem::Scalar(b)) => BaseRingElem::Scalar(a * b),
            _ => {
                let (a, b) = self.lift(rhs);
                BaseRingElem::Poly(a.mul(&b))
            }
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        match self {
            BaseRingElem::Scalar(a) => {
                // Square-and-multiply; ghost columns use exponents p^k that
                // can exceed u32.
                let mut base = a.clone();
                let mut acc = PLocalInt::one(a.prime());
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = &acc * &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                BaseRingElem::Scalar(acc)
            }
            BaseRingElem::Poly(q) => BaseRingElem::Poly(q.pow(e)),
        }
    }

    pub fn mul_p_pow(&self, pow: u32) -> Self {
        match self {
            BaseRingElem::Scalar(a) => BaseRingElem::Scalar(a.mul_p_pow(pow)),
            BaseRingElem::Poly(q) => {
                BaseRingElem::Poly(q.scale(&PLocalInt::from_int(1, q.prime()).mul_p_pow(pow)))
            }
        }
    }

    /// Exact division by p^pow; the NonIntegralGhost signal bubbles from here.
    pub fn div_exact_p_pow(&self, pow: u32) -> Result<Self, ScalarError> {
        match self {
            BaseRingElem::Scalar(a) => Ok(BaseRingElem::Scalar(a.div_exact_p_pow(pow)?)),
            BaseRingElem::Poly(q) => Ok(BaseRingElem::Poly(q.div_exact_p_pow(pow)?)),
        }
    }
}

impl fmt::Display for BaseRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRingElem::Scalar(c) => write!(f, "{c}"),
            BaseRingElem::Poly(q) => write!(f, "{q}"),
        }
    }
}

impl fmt::Debug for BaseRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> PLocalInt {
        PLocalInt::from_int(n, 2)
    }

    #[test]
    fn poly_mul_and_pow() {
        // (X+1)^2 = X^2 + 2X + 1
        let xp1 = SparsePoly::from_terms(2, [(1, int(1)), (0, int(1))]);
        let sq = xp1.pow(2);
        assert_eq!(sq.coeff(2), int(1));
        assert_eq!(sq.coeff(1), int(2));
        assert_eq!(sq.coeff(0), int(1));
        assert_eq!(sq.degree(), Some(2));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let a = SparsePoly::from_terms(2, [(3, int(5)), (1, int(2))]);
        let b = SparsePoly::from_terms(2, [(3, int(-5))]);
        let s = a.add(&b);
        assert_eq!(s.terms().count(), 1);
        assert_eq!(s.degree(), Some(1));
    }

    #[test]
    fn parses_polynomial_literals() {
        let q = SparsePoly::parse("X^2 + 3*X - 4/3", 2).unwrap();
        assert_eq!(q.coeff(2), int(1));
        assert_eq!(q.coeff(1), int(3));
        assert_eq!(q.coeff(0), PLocalInt::new(BigInt::from(-4), BigInt::from(3), 2).unwrap());
        assert_eq!(SparsePoly::parse("-x", 2).unwrap().coeff(1), int(-1));
        assert_eq!(SparsePoly::parse("7", 3).unwrap().coeff(0), PLocalInt::from_int(7, 3));
        // Round trip through Display.
        let shown = q.to_string();
        assert_eq!(SparsePoly::parse(&shown, 2).unwrap(), q);
        assert!(SparsePoly::parse("1/2", 2).is_err());
        assert!(SparsePoly::parse("", 2).is_err());
        assert!(SparsePoly::parse("X^", 2).is_err());
    }

    #[test]
    fn exact_division_per_coefficient() {
        let a = SparsePoly::from_terms(2, [(2, int(4)), (0, int(8))]);
        let half = a.div_exact_p_pow(2).unwrap();
        assert_eq!(half.coeff(2), int(1));
        assert_eq!(half.coeff(0), int(2));
        let odd = SparsePoly::from_terms(2, [(1, int(3))]);
        assert!(odd.div_exact_p_pow(1).is_err());
    }
}
