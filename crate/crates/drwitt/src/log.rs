//! The de Rham-Witt groups of ℤ₍p₎ with the log structure generated by p.
//!
//! Degree 1 gains a single new generator dlog[p] = "d log p" of additive
//! order exactly p^n at level n:
//!
//! ```text
//! W_nΩ^0 unchanged,   W_nΩ^1 = (ℤ/p^n)·dlog[p] ⊕ ⊕_{i=1}^{n-1} (ℤ/p^i)·dV^i(1)
//! ```
//!
//! subject to the defining relation λ[p]·dlog[p] = dλ[p]. The operators
//! extend by F(dlog) = dlog, R(dlog) = dlog, d(dlog) = 0, ι(dlog) = 0, and
//! V acts through V(x·dlog) = x·V(1)·dlog. Everything therefore reduces to
//! one new product row, V^i(1)·dlog[p], recorded in
//! [`v_dlog_product_row`]; for p = 2 its dV-tail is controlled by a
//! sequence of window sums whose balanced coefficients (1, -1, 4, 0, 0, …)
//! are not guessable but are pinned down by the defining relation. The
//! solver [`solve_log_coefficients`] recovers them from scratch by exact
//! forward substitution and the tests cross-check the frozen table against
//! it and against the relation itself.

use crate::drw::{
    dv_basis_name, parse_element_shell, parse_term, push_term, v_basis_name, DrwElement,
    ParsedTerm,
};
use crate::ring::BaseRingElem;
use crate::scalar::{add_mod, mul_mod, p_pow_u64, PLocalInt};
use crate::witt::{teichmuller_coeffs, WittError, WittVector};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Balanced tail constants of the p = 2 row V^i(1)·dlog[2]; all later ones
/// vanish. Recomputed from first principles by [`solve_log_coefficients`].
const DLOG_TAIL_P2: [i64; 3] = [1, -1, 4];

/// The balanced coefficient sequence entering the p = 2 product row.
pub fn log_tail_constants() -> &'static [i64] {
    &DLOG_TAIL_P2
}

fn tail_prefix_sum(k: usize) -> i64 {
    DLOG_TAIL_P2.iter().take(k).sum()
}

/// The window sum a_{j-i+1} + … + a_j of the tail sequence.
fn tail_window(j: usize, i: usize) -> i64 {
    debug_assert!(i >= 1 && j >= i);
    tail_prefix_sum(j) - tail_prefix_sum(j - i)
}

/// Expands V^i(1)·dlog[p] at the given level as (dlog coefficient, dV-tail).
///
/// The dlog coefficient is a residue mod p^level, each tail entry (j, c) a
/// residue c mod p^j attached to dV^j(1). The rows are:
///
/// * p = 2:  2^i·dlog + Σ_{j=i}^{n-1} 2^{i-1}·(a_{j-i+1}+…+a_j)·dV^j(1)
///   with (a_k) the balanced tail constants;
/// * p = 3:  3^i·dlog + 3^{i-1}·dV^i(1) + 3^i·dV^{i+1}(1);
/// * p ≥ 5:  p^i·dlog + p^{i-1}·dV^i(1);
///
/// and i = 0 is the identity. Terms past the level are truncated away.
pub fn v_dlog_product_row(prime: u32, level: usize, i: usize) -> (u64, Vec<(usize, u64)>) {
    assert!(i < level, "V^{i}(1) does not live at level {level}");
    let m_dlog = p_pow_u64(prime, level as u32);
    if i == 0 {
        return (1, Vec::new());
    }
    let dlog = p_pow_u64(prime, i as u32) % m_dlog;
    let mut tail = Vec::new();
    if prime == 2 {
        for j in i..level {
            let m = p_pow_u64(2, j as u32);
            let w = tail_window(j, i).rem_euclid(m as i64) as u64;
            let c = mul_mod(1u64 << (i - 1), w, m);
            if c != 0 {
                tail.push((j, c));
            }
        }
    } else {
        let m = p_pow_u64(prime, i as u32);
        tail.push((i, p_pow_u64(prime, (i - 1) as u32) % m));
        if prime == 3 && i + 1 < level {
            let m2 = p_pow_u64(3, (i + 1) as u32);
            let c = p_pow_u64(3, i as u32) % m2;
            tail.push((i + 1, c));
        }
    }
    (dlog, tail)
}

/// An element of the level-n log complex: a plain element plus a residue
/// mod p^n in front of dlog[p].
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDrwElement {
    base: DrwElement,
    dlog: u64,
}

impl LogDrwElement {
    pub fn zero(prime: u32, level: usize) -> Self {
        let _ = p_pow_u64(prime, level as u32);
        LogDrwElement {
            base: DrwElement::zero(prime, level),
            dlog: 0,
        }
    }

    /// The generator dlog[p].
    pub fn dlog_gen(prime: u32, level: usize) -> Self {
        let mut e = Self::zero(prime, level);
        e.dlog = 1;
        e
    }

    /// Embeds a plain element with no dlog component.
    pub fn from_base(base: DrwElement) -> Self {
        let _ = p_pow_u64(base.prime(), base.level() as u32);
        LogDrwElement { base, dlog: 0 }
    }

    pub fn from_parts(base: DrwElement, dlog: u64) -> Self {
        let m = p_pow_u64(base.prime(), base.level() as u32);
        LogDrwElement {
            base,
            dlog: dlog % m,
        }
    }

    /// The image of a Witt vector under λ (no dlog component).
    pub fn lambda(w: &WittVector) -> Result<Self, WittError> {
        Ok(Self::from_base(DrwElement::lambda(w)?))
    }

    pub fn prime(&self) -> u32 {
        self.base.prime()
    }

    pub fn level(&self) -> usize {
        self.base.level()
    }

    pub fn base(&self) -> &DrwElement {
        &self.base
    }

    /// The dlog[p] coefficient, canonical in [0, p^n).
    pub fn dlog_coeff(&self) -> u64 {
        self.dlog
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.dlog == 0
    }

    fn dlog_modulus(&self) -> u64 {
        p_pow_u64(self.prime(), self.level() as u32)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LogDrwElement {
            base: self.base.add(&rhs.base),
            dlog: add_mod(self.dlog, rhs.dlog, self.dlog_modulus()),
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.dlog_modulus();
        LogDrwElement {
            base: self.base.neg(),
            dlog: (m - self.dlog) % m,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scalar_mul(&self, c: &PLocalInt) -> Self {
        let m = self.dlog_modulus();
        LogDrwElement {
            base: self.base.scalar_mul(c),
            dlog: mul_mod(self.dlog, c.residue_mod(m), m),
        }
    }

    pub fn int_mul(&self, k: i64) -> Self {
        self.scalar_mul(&PLocalInt::from_int(k, self.prime()))
    }

    /// The graded product. dlog[p] is odd, so dlog·dlog and dlog·dV land in
    /// the vanishing degree 2; only deg0 × dlog survives, via the row table.
    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prime();
        let n = self.level();
        let mut out = LogDrwElement::from_base(self.base.mul(&rhs.base));
        let m_dlog = out.dlog_modulus();
        for (zero_side, dlog_side) in [(self, rhs), (rhs, self)] {
            let r = dlog_side.dlog;
            if r == 0 {
                continue;
            }
            for (i, c) in zero_side.base.deg0().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (dcoeff, tail) = v_dlog_product_row(p, n, i);
                let contrib = mul_mod(mul_mod(c.residue_mod(m_dlog), dcoeff, m_dlog), r, m_dlog);
                out.dlog = add_mod(out.dlog, contrib, m_dlog);
                for (j, t) in tail {
                    let m = p_pow_u64(p, j as u32);
                    let v = mul_mod(mul_mod(c.residue_mod(m), t, m), r % m, m);
                    out.base.deg1[j] = add_mod(out.base.deg1[j], v, m);
                }
            }
        }
        out
    }

    pub fn restriction(&self) -> Self {
        let m = p_pow_u64(self.prime(), (self.level() - 1) as u32);
        LogDrwElement {
            base: self.base.restriction(),
            dlog: self.dlog % m,
        }
    }

    pub fn frobenius(&self) -> Self {
        let m = p_pow_u64(self.prime(), (self.level() - 1) as u32);
        LogDrwElement {
            base: self.base.frobenius(),
            dlog: self.dlog % m,
        }
    }

    pub fn verschiebung(&self) -> Self {
        let p = self.prime();
        let n = self.level();
        let mut out = LogDrwElement::from_base(self.base.verschiebung());
        if self.dlog != 0 {
            let (dcoeff, tail) = v_dlog_product_row(p, n + 1, 1);
            out.dlog = mul_mod(self.dlog, dcoeff, out.dlog_modulus());
            for (j, t) in tail {
                let m = p_pow_u64(p, j as u32);
                out.base.deg1[j] = add_mod(out.base.deg1[j], mul_mod(self.dlog % m, t, m), m);
            }
        }
        out
    }

    /// d kills both the dV-part and the dlog-part.
    pub fn d(&self) -> Self {
        Self::from_base(self.base.d())
    }

    pub fn iota(&self) -> Self {
        Self::from_base(self.base.iota())
    }
}

impl fmt::Display for LogDrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.base.deg0().iter().enumerate() {
            if !c.is_zero() {
                push_term(&mut terms, &c.to_string(), v_basis_name(i));
            }
        }
        for (i, &r) in self.base.deg1().iter().enumerate() {
            if r != 0 {
                push_term(&mut terms, &r.to_string(), dv_basis_name(i));
            }
        }
        if self.dlog != 0 {
            push_term(
                &mut terms,
                &self.dlog.to_string(),
                format!("dlog[{}]", self.prime()),
            );
        }
        let body = if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        };
        write!(
            f,
            "{} @ {{p={}, n={}, log}}",
            body,
            self.prime(),
            self.level()
        )
    }
}

impl fmt::Debug for LogDrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LogDrwElement {
    type Err = WittError;

    fn from_str(s: &str) -> Result<Self, WittError> {
        let (terms, prime, level, _log) = parse_element_shell(s).map_err(WittError::Parse)?;
        if level < 1 {
            return Err(WittError::Parse("level must be >= 1".into()));
        }
        let mut e = LogDrwElement::zero(prime, level);
        let m_dlog = e.dlog_modulus();
        for t in &terms {
            let t = t.trim();
            if t == "0" {
                continue;
            }
            let (sign, t) = match t.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, t),
            };
            let (mut coeff, slot) = parse_term(t, prime).map_err(WittError::Parse)?;
            if sign {
                coeff = -&coeff;
            }
            match slot {
                ParsedTerm::V(i) => {
                    if i >= level {
                        return Err(WittError::Parse(format!(
                            "V^{i}(1) does not live at level {level}"
                        )));
                    }
                    e.base.deg0[i] = &e.base.deg0[i] + &coeff;
                }
                ParsedTerm::Dv(i) => {
                    if i == 0 || i >= level {
                        return Err(WittError::Parse(format!(
                            "dV^{i}(1) does not live at level {level}"
                        )));
                    }
                    let m = p_pow_u64(prime, i as u32);
                    e.base.deg1[i] = add_mod(e.base.deg1[i], coeff.residue_mod(m), m);
                }
                ParsedTerm::DlogP => {
                    e.dlog = add_mod(e.dlog, coeff.residue_mod(m_dlog), m_dlog);
                }
            }
        }
        Ok(e)
    }
}

/// The additive order of dlog[p] at the given level, found by multiplying
/// through successive p-powers.
pub fn dlog_torsion_order(prime: u32, level: usize) -> u64 {
    let g = LogDrwElement::dlog_gen(prime, level);
    let mut k = 1u64;
    loop {
        if g.int_mul(k as i64).is_zero() {
            return k;
        }
        k *= prime as u64;
    }
}

/// Whether λ[p]·dlog[p] = dλ[p] holds at the given level, the relation that
/// defines dlog[p] and pins the product table.
pub fn defining_relation_holds(prime: u32, level: usize) -> bool {
    let tp = WittVector::teichmuller(BaseRingElem::from_int(prime as i64, prime), level);
    let lam = LogDrwElement::lambda(&tp).expect("Teichmüller of an integer decomposes");
    let g = LogDrwElement::dlog_gen(prime, level);
    lam.mul(&g) == lam.d()
}

/// The exact solution of the tail-coefficient system together with its
/// canonical and balanced residue reductions.
pub struct LogCoefficientSolution {
    /// a_j from exact forward substitution over ℤ.
    pub exact: Vec<BigInt>,
    /// a_j mod 2^j in [0, 2^j).
    pub canonical: Vec<BigInt>,
    /// The representative of smallest absolute value (ties to the
    /// non-negative one). These are the constants the product row uses.
    pub balanced: Vec<BigInt>,
}

fn big_pow2(k: u32) -> BigInt {
    BigInt::one() << (k as usize)
}

fn balanced_residue(v: &BigInt, modulus: &BigInt) -> BigInt {
    let mut r = ((v % modulus) + modulus) % modulus;
    if &r * 2 > *modulus {
        r -= modulus;
    }
    r
}

/// Solves for the p = 2 tail coefficients from first principles.
///
/// Matching dV^j-coefficients in λ[2]·dlog[2] = dλ[2] at every level, with
/// c_j the Teichmüller coefficients of 2, forces
///
/// ```text
/// Σ_{k=1}^{j} (2^{2^j - 1} - 2^{2^{j-k} - 1})·a_k ≡ c_j  (mod 2^j)
/// ```
///
/// because Σ_{i=j-k+1}^{j} c_i·2^{i-1} telescopes to that matrix entry.
/// Mod 2^j the matrix entry is -2^{2^{j-k} - 1} (the first summand dies),
/// so replacing c_j by its balanced residue c'_j gives a unipotent-like
/// triangular system with diagonal -1 that can be solved exactly over ℤ by
/// forward substitution. The solution is unique mod 2^j in each slot; its
/// balanced residues stabilize to (1, -1, 4, 0, 0, …).
pub fn solve_log_coefficients(jmax: usize) -> LogCoefficientSolution {
    assert!(jmax >= 1);
    let two = PLocalInt::from_int(2, 2);
    let c = teichmuller_coeffs(&two, jmax + 1);
    let mut exact: Vec<BigInt> = Vec::with_capacity(jmax);
    for j in 1..=jmax {
        let modulus = big_pow2(j as u32);
        debug_assert!(c[j].is_integer());
        let rhs = balanced_residue(c[j].numer(), &modulus);
        // -a_j + Σ_{k<j} b_{jk}·a_k = c'_j with b_{jk} = -2^(2^(j-k) - 1).
        let mut acc = BigInt::zero();
        for (k, a) in exact.iter().enumerate() {
            let b = -big_pow2((1u32 << (j - (k + 1))) - 1);
            acc += b * a;
        }
        exact.push(acc - rhs);
    }
    let canonical: Vec<BigInt> = exact
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let m = big_pow2((idx + 1) as u32);
            ((a % &m) + &m) % &m
        })
        .collect();
    let balanced: Vec<BigInt> = exact
        .iter()
        .enumerate()
        .map(|(idx, a)| balanced_residue(a, &big_pow2((idx + 1) as u32)))
        .collect();
    LogCoefficientSolution {
        exact,
        canonical,
        balanced,
    }
}

/// Checks a candidate coefficient vector against the original congruence
/// system Σ_k (2^{2^j-1} - 2^{2^{j-k}-1})·a_k ≡ c_j (mod 2^j).
pub fn log_coefficient_congruences_hold(a: &[BigInt]) -> bool {
    let jmax = a.len();
    let two = PLocalInt::from_int(2, 2);
    let c = teichmuller_coeffs(&two, jmax + 1);
    for j in 1..=jmax {
        let modulus = big_pow2(j as u32);
        let lead = big_pow2((1u32 << j) - 1);
        let mut acc = BigInt::zero();
        for k in 1..=j {
            let b = &lead - big_pow2((1u32 << (j - k)) - 1);
            acc += b * &a[k - 1];
        }
        if !((acc - c[j].numer()) % &modulus).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rows_match_hand_expansion() {
        // V(1)·dlog[2] at n = 3: 2·dlog + dV(1) - dV^2(1).
        let (d, tail) = v_dlog_product_row(2, 3, 1);
        assert_eq!(d, 2);
        assert_eq!(tail, vec![(1, 1), (2, 3)]);
        // V^2(1)·dlog[2] at n = 4: 4·dlog + 2·(a_1+a_2)·dV^2 + 2·(a_2+a_3)·dV^3
        // and a_1 + a_2 = 0.
        let (d, tail) = v_dlog_product_row(2, 4, 2);
        assert_eq!(d, 4);
        assert_eq!(tail, vec![(3, 6)]);
        // V(1)·dlog[3] at n = 3: 3·dlog + dV(1) + 3·dV^2(1).
        let (d, tail) = v_dlog_product_row(3, 3, 1);
        assert_eq!(d, 3);
        assert_eq!(tail, vec![(1, 1), (2, 3)]);
        // V(1)·dlog[5] at n = 3: 5·dlog + dV(1).
        let (d, tail) = v_dlog_product_row(5, 3, 1);
        assert_eq!(d, 5);
        assert_eq!(tail, vec![(1, 1)]);
    }

    #[test]
    fn defining_relation_at_small_levels() {
        for p in [2u32, 3, 5] {
            for n in 1..=6 {
                assert!(
                    defining_relation_holds(p, n),
                    "λ[p]·dlog[p] = dλ[p] failed at p = {p}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn frobenius_after_verschiebung_is_p() {
        for p in [2u32, 3, 5] {
            for n in 1..=4 {
                let g = LogDrwElement::dlog_gen(p, n);
                assert_eq!(
                    g.verschiebung().frobenius(),
                    g.int_mul(p as i64),
                    "FV = p failed on dlog at p = {p}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn torsion_order_is_p_to_the_level() {
        for p in [2u32, 3, 5] {
            for n in 1..=4 {
                assert_eq!(dlog_torsion_order(p, n), p_pow_u64(p, n as u32));
            }
        }
    }

    #[test]
    fn solver_reproduces_frozen_constants() {
        let sol = solve_log_coefficients(6);
        let want_exact: Vec<BigInt> = [-1i64, 3, 4, 96, 32160, 2147319744]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(sol.exact, want_exact);
        let want_balanced: Vec<BigInt> = [1i64, -1, 4, 0, 0, 0]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(sol.balanced, want_balanced);
        for (k, v) in log_tail_constants().iter().enumerate() {
            assert_eq!(sol.balanced[k], BigInt::from(*v));
        }
        assert!(log_coefficient_congruences_hold(&sol.exact));
        assert!(log_coefficient_congruences_hold(&sol.balanced));
        assert!(log_coefficient_congruences_hold(&sol.canonical));
    }

    #[test]
    fn display_parse_round_trip() {
        let e = LogDrwElement::dlog_gen(2, 3)
            .int_mul(5)
            .add(&LogDrwElement::from_base(DrwElement::v_basis_elem(2, 3, 1)));
        assert_eq!(e.to_string(), "V(1) + 5\u{b7}dlog[2] @ {p=2, n=3, log}");
        assert_eq!(e.to_string().parse::<LogDrwElement>().unwrap(), e);
        let z = LogDrwElement::zero(3, 2);
        assert_eq!(z.to_string(), "0 @ {p=3, n=2, log}");
        assert_eq!(z.to_string().parse::<LogDrwElement>().unwrap(), z);
    }
}
