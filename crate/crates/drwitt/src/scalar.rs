//! p-local rational scalars.
//!
//! A [`PLocalInt`] is an element of ℤ₍p₎ = { a/b ∈ ℚ : p ∤ b }: an exact,
//! eagerly reduced fraction whose denominator is a unit p-locally. These are
//! the scalars of every torsion-free group in the crate; keeping the
//! denominator prime to p is what makes reduction into ℤ/p^k well defined
//! (the denominator inverts mod p^k).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

/// Errors from p-local scalar construction and transport.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    /// The denominator is divisible by p, so the fraction is not p-local.
    #[error("denominator {den} is divisible by p = {p}")]
    DenominatorNotCoprime { p: u32, den: BigInt },
    /// Division that the caller required to be exact left a remainder.
    #[error("inexact division by {p}^{pow}")]
    InexactDivision { p: u32, pow: u32 },
    /// Two scalars tagged with different primes met in one operation.
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
}

/// An element of ℤ₍p₎: a reduced fraction with denominator coprime to p.
///
/// Invariants, enforced at construction and preserved by every operation:
/// the fraction is in lowest terms with positive denominator, and
/// gcd(denominator, p) = 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PLocalInt {
    value: BigRational,
    prime: u32,
}

impl PLocalInt {
    /// Builds a/b ∈ ℤ₍p₎, reducing eagerly. Fails if after reduction p | b.
    pub fn new(num: BigInt, den: BigInt, p: u32) -> Result<Self, ScalarError> {
        assert!(!den.is_zero(), "zero denominator");
        let value = BigRational::new(num, den);
        if value.denom().mod_floor(&BigInt::from(p)).is_zero() {
            return Err(ScalarError::DenominatorNotCoprime {
                p,
                den: value.denom().clone(),
            });
        }
        Ok(PLocalInt { value, prime: p })
    }

    /// The integer n as an element of ℤ₍p₎.
    pub fn from_int(n: impl Into<BigInt>, p: u32) -> Self {
        PLocalInt {
            value: BigRational::from_integer(n.into()),
            prime: p,
        }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_int(0, p)
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(1, p)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    /// The p-adic valuation; `None` for zero (valuation +∞).
    ///
    /// Denominators are units, so the valuation is the multiplicity of p in
    /// the numerator and is never negative.
    pub fn valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(self.prime);
        let mut n = self.value.numer().clone();
        let mut v = 0u32;
        loop {
            let (q, r) = n.div_rem(&p);
            if r.is_zero() {
                v += 1;
                n = q;
            } else {
                return Some(v);
            }
        }
    }

    /// Exact division by p^pow. Errors if v_p(self) < pow.
    pub fn div_exact_p_pow(&self, pow: u32) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.valuation().unwrap_or(0) < pow {
            return Err(ScalarError::InexactDivision {
                p: self.prime,
                pow,
            });
        }
        let scale = BigInt::from(self.prime).pow(pow);
        Ok(PLocalInt {
            value: &self.value / BigRational::from_integer(scale),
            prime: self.prime,
        })
    }

    /// Multiplies by p^pow.
    pub fn mul_p_pow(&self, pow: u32) -> Self {
        let scale = BigInt::from(self.prime).pow(pow);
        PLocalInt {
            value: &self.value * BigRational::from_integer(scale),
            prime: self.prime,
        }
    }

    /// The canonical residue in [0, m) of this scalar mod m, where m is a
    /// power of p. The denominator is a unit mod m, so this is num·den⁻¹.
    pub fn residue_mod(&self, m: u64) -> u64 {
        debug_assert!(m > 0);
        if m == 1 {
            return 0;
        }
        let mb = BigInt::from(m);
        let num = self.value.numer().mod_floor(&mb);
        let den = self.value.denom().mod_floor(&mb);
        let inv = mod_inverse(&den, &mb).expect("denominator is a unit mod p^k by invariant");
        (num * inv).mod_floor(&mb).try_into().unwrap()
    }

    pub fn pow(&self, e: u32) -> Self {
        PLocalInt {
            value: self.value.pow(e as i32),
            prime: self.prime,
        }
    }

    /// Inverts a p-local unit. `None` if self is zero or v_p(self) > 0
    /// (then 1/self has p in the denominator and leaves ℤ₍p₎).
    pub fn invert(&self) -> Option<Self> {
        if self.is_zero() || self.valuation() != Some(0) {
            return None;
        }
        Some(PLocalInt {
            value: self.value.recip(),
            prime: self.prime,
        })
    }

    fn assert_same_prime(&self, other: &Self) {
        assert_eq!(
            self.prime, other.prime,
            "scalar primes differ: {} vs {}",
            self.prime, other.prime
        );
    }
}

/// Inverse of a mod m by extended gcd; `None` when gcd(a, m) ≠ 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Canonical residue of an arbitrary BigInt mod m (m a u64 power of p).
pub fn bigint_mod_u64(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).try_into().unwrap()
}

/// a·b mod m without overflow (moduli reach 5^16, near 2^37; products of
/// residues need the u128 detour).
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a+b mod m without overflow.
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 + b as u128) % m as u128) as u64
}

/// p^k as u64, panicking on overflow (levels are capped far below that).
pub fn p_pow_u64(p: u32, k: u32) -> u64 {
    (p as u64)
        .checked_pow(k)
        .unwrap_or_else(|| panic!("p^k overflows u64: {p}^{k}"))
}

/// p^k as BigUint, for unbounded work (ghost scaling, Teichmüller columns).
pub fn p_pow_big(p: u32, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

impl Add for &PLocalInt {
    type Output = PLocalInt;
    fn add(self, rhs: &PLocalInt) -> PLocalInt {
        self.assert_same_prime(rhs);
        PLocalInt {
            value: &self.value + &rhs.value,
            prime: self.prime,
        }
    }
}

impl Sub for &PLocalInt {
    type Output = PLocalInt;
    fn sub(self, rhs: &PLocalInt) -> PLocalInt {
        self.assert_same_prime(rhs);
        PLocalInt {
            value: &self.value - &rhs.value,
            prime: self.prime,
        }
    }
}

impl Mul for &PLocalInt {
    type Output = PLocalInt;
    fn mul(self, rhs: &PLocalInt) -> PLocalInt {
        self.assert_same_prime(rhs);
        PLocalInt {
            value: &self.value * &rhs.value,
            prime: self.prime,
        }
    }
}

impl Neg for &PLocalInt {
    type Output = PLocalInt;
    fn neg(self) -> PLocalInt {
        PLocalInt {
            value: -&self.value,
            prime: self.prime,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait for PLocalInt {
            type Output = PLocalInt;
            fn $method(self, rhs: PLocalInt) -> PLocalInt {
                (&self).$method(&rhs)
            }
        }
        impl $assign_trait for PLocalInt {
            fn $assign_method(&mut self, rhs: PLocalInt) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_owned_binop!(Add, add, AddAssign, add_assign);
forward_owned_binop!(Sub, sub, SubAssign, sub_assign);
forward_owned_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for PLocalInt {
    type Output = PLocalInt;
    fn neg(self) -> PLocalInt {
        -&self
    }
}

impl fmt::Display for PLocalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_integer() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

// Debug = Display: the reduced fraction is the whole state.
impl fmt::Debug for PLocalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> PLocalInt {
        PLocalInt::new(BigInt::from(n), BigInt::from(d), 2).unwrap()
    }

    #[test]
    fn rejects_even_denominator_at_p2() {
        let r = PLocalInt::new(BigInt::from(1), BigInt::from(6), 2);
        assert!(matches!(
            r,
            Err(ScalarError::DenominatorNotCoprime { p: 2, .. })
        ));
        // 3/6 reduces to 1/2: still rejected.
        let r = PLocalInt::new(BigInt::from(3), BigInt::from(6), 2);
        assert!(r.is_err());
        // 2/6 reduces to 1/3: fine.
        assert!(PLocalInt::new(BigInt::from(2), BigInt::from(6), 2).is_ok());
    }

    #[test]
    fn valuation_and_exact_division() {
        assert_eq!(q(12, 1).valuation(), Some(2));
        assert_eq!(q(3, 5).valuation(), Some(0));
        assert_eq!(q(0, 1).valuation(), None);
        assert_eq!(q(12, 1).div_exact_p_pow(2).unwrap(), q(3, 1));
        assert!(q(12, 1).div_exact_p_pow(3).is_err());
        // 4/3 has valuation 2 despite the denominator.
        assert_eq!(q(4, 3).div_exact_p_pow(2).unwrap(), q(1, 3));
    }

    #[test]
    fn residue_inverts_denominator() {
        // 1/3 mod 8: 3·3 = 9 ≡ 1, so 1/3 ≡ 3.
        assert_eq!(q(1, 3).residue_mod(8), 3);
        // -1 mod 8 = 7.
        assert_eq!(q(-1, 1).residue_mod(8), 7);
        // 5/7 mod 16: 7⁻¹ ≡ 7 (49 ≡ 1), 5·7 = 35 ≡ 3.
        assert_eq!(q(5, 7).residue_mod(16), 3);
    }
}
