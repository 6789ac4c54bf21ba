//! The de Rham-Witt groups W_nΩ^q of ℤ₍p₎ with their operators.
//!
//! For the base ring ℤ₍p₎ the groups are small and completely explicit:
//!
//! ```text
//! W_nΩ^0 = ⊕_{i=0}^{n-1} ℤ₍p₎·V^i(1)        (free)
//! W_nΩ^1 = ⊕_{i=1}^{n-1} (ℤ/p^i)·dV^i(1)    (torsion)
//! W_nΩ^q = 0 for q ≥ 2
//! ```
//!
//! An element is stored as the coefficient vector of this basis: exact
//! p-local scalars in degree 0, canonical residues mod p^i in degree 1.
//! All operators and the ring structure reduce to integer tables:
//!
//! * V^i(1)·V^j(1) = p^min(i,j)·V^max(i,j)(1);
//! * for p = 2: V^i(1)·dV^j(1) = 2^i·dV^j(1) + Σ_{s>max(i,j)} 2^{s-1}·dV^s(1)
//!   (i ≥ 1; the sum is the 2-torsion correction ι(V^i(1)·V^j(1)));
//! * for odd p: V^i(1)·dV^j(1) = p^i·dV^j(1) if i < j, and 0 if 1 ≤ j ≤ i;
//! * F(V^i(1)) = p·V^{i-1}(1) for i ≥ 1, F(1) = 1;
//! * for p = 2: F(dV^i(1)) = dV^{i-1}(1) + Σ_{s≥i} 2^{s-1}·dV^s(1), the
//!   tail being ι(V^{i-1}(1)); for odd p just dV^{i-1}(1);
//! * V shifts degree-0 indices up and doubles into torsion:
//!   V(dV^i(1)) = p·dV^{i+1}(1);
//! * d sends Σ c_i·V^i(1) to Σ_{i≥1} c_i·dV^i(1), reducing c_i mod p^i;
//! * ι is multiplication by the square-zero class ι(1) = λ[-1]·dλ[-1];
//!   concretely ι(V^i(1)) = Σ_{s>i} 2^{s-1}·dV^s(1) at p = 2 and ι = 0 at
//!   odd p.
//!
//! Every sum in these tables is truncated at the ambient level; that
//! truncation is forced by F∘d∘V = d + ι, which the sweep in [`crate::check`]
//! verifies together with the rest of the operator relations.

use crate::scalar::{add_mod, mul_mod, p_pow_u64, PLocalInt};
use crate::witt::{WittError, WittVector};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// An element of W_nΩ^0 ⊕ W_nΩ^1 over ℤ₍p₎ in basis coordinates.
///
/// `deg0[i]` is the coefficient of V^i(1); `deg1[i]` is the canonical
/// residue in [0, p^i) of the coefficient of dV^i(1) (`deg1[0]` is always 0:
/// dV^0(1) = d(1) = 0).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrwElement {
    pub(crate) prime: u32,
    pub(crate) level: usize,
    pub(crate) deg0: Vec<PLocalInt>,
    pub(crate) deg1: Vec<u64>,
}

impl DrwElement {
    pub fn zero(prime: u32, level: usize) -> Self {
        assert!(level >= 1, "level must be >= 1");
        // Forces an early panic if p^(n-1) cannot be a u64 torsion modulus.
        let _ = p_pow_u64(prime, (level - 1) as u32);
        DrwElement {
            prime,
            level,
            deg0: vec![PLocalInt::zero(prime); level],
            deg1: vec![0; level],
        }
    }

    /// The ring unit 1 = V^0(1).
    pub fn unit(prime: u32, level: usize) -> Self {
        Self::v_basis_elem(prime, level, 0)
    }

    /// The basis element V^i(1) (with V^0(1) = 1).
    pub fn v_basis_elem(prime: u32, level: usize, i: usize) -> Self {
        assert!(i < level, "V^{i}(1) does not live at level {level}");
        let mut e = Self::zero(prime, level);
        e.deg0[i] = PLocalInt::one(prime);
        e
    }

    /// The torsion basis element dV^i(1), of order p^i (1 ≤ i < level).
    pub fn dv_basis_elem(prime: u32, level: usize, i: usize) -> Self {
        assert!(
            (1..level).contains(&i),
            "dV^{i}(1) does not live at level {level}"
        );
        let mut e = Self::zero(prime, level);
        e.deg1[i] = 1;
        e
    }

    /// Builds an element from raw coefficients, canonicalizing residues.
    pub fn from_parts(prime: u32, level: usize, deg0: Vec<PLocalInt>, deg1: Vec<u64>) -> Self {
        assert_eq!(deg0.len(), level);
        assert_eq!(deg1.len(), level);
        let mut e = Self::zero(prime, level);
        for (i, c) in deg0.into_iter().enumerate() {
            assert_eq!(c.prime(), prime);
            e.deg0[i] = c;
        }
        for (i, r) in deg1.into_iter().enumerate().skip(1) {
            e.deg1[i] = r % p_pow_u64(prime, i as u32);
        }
        e
    }

    /// The image of a Witt vector under λ: W_n(ℤ₍p₎) → W_nΩ^0.
    ///
    /// λ is the V-basis decomposition; it fails only on vectors with
    /// polynomial components, which live in a different complex.
    pub fn lambda(w: &WittVector) -> Result<Self, WittError> {
        let coeffs = w.v_basis_decompose()?;
        let level = coeffs.len();
        let mut e = Self::zero(w.prime(), level);
        e.deg0 = coeffs;
        Ok(e)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn deg0(&self) -> &[PLocalInt] {
        &self.deg0
    }

    pub fn deg1(&self) -> &[u64] {
        &self.deg1
    }

    pub fn is_zero(&self) -> bool {
        self.deg0.iter().all(|c| c.is_zero()) && self.deg1.iter().all(|&r| r == 0)
    }

    pub fn deg0_is_zero(&self) -> bool {
        self.deg0.iter().all(|c| c.is_zero())
    }

    pub fn deg1_is_zero(&self) -> bool {
        self.deg1.iter().all(|&r| r == 0)
    }

    /// Keeps only the degree-0 part.
    pub fn deg0_part(&self) -> Self {
        let mut e = self.clone();
        e.deg1 = vec![0; self.level];
        e
    }

    /// Keeps only the degree-1 part.
    pub fn deg1_part(&self) -> Self {
        let mut e = self.clone();
        e.deg0 = vec![PLocalInt::zero(self.prime); self.level];
        e
    }

    fn modulus(&self, i: usize) -> u64 {
        p_pow_u64(self.prime, i as u32)
    }

    fn assert_same_shape(&self, rhs: &Self) {
        assert_eq!(self.prime, rhs.prime, "element primes differ");
        assert_eq!(self.level, rhs.level, "element levels differ");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_same_shape(rhs);
        let mut out = self.clone();
        for (i, c) in rhs.deg0.iter().enumerate() {
            out.deg0[i] = &out.deg0[i] + c;
        }
        for i in 1..self.level {
            out.deg1[i] = add_mod(out.deg1[i], rhs.deg1[i], self.modulus(i));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.deg0 {
            *c = -&*c;
        }
        for i in 1..self.level {
            let m = self.modulus(i);
            out.deg1[i] = (m - out.deg1[i]) % m;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Multiplication by a p-local scalar (residue action on torsion).
    pub fn scalar_mul(&self, c: &PLocalInt) -> Self {
        assert_eq!(self.prime, c.prime());
        let mut out = self.clone();
        for k in &mut out.deg0 {
            *k = &*k * c;
        }
        for i in 1..self.level {
            let m = self.modulus(i);
            out.deg1[i] = mul_mod(out.deg1[i], c.residue_mod(m), m);
        }
        out
    }

    /// Multiplication by an integer, a convenience over [`Self::scalar_mul`].
    pub fn int_mul(&self, k: i64) -> Self {
        self.scalar_mul(&PLocalInt::from_int(k, self.prime))
    }

    /// The graded product. The degree-2 component (deg1 × deg1) is zero.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_same_shape(rhs);
        let p = self.prime;
        let n = self.level;
        let mut out = Self::zero(p, n);
        // deg0 × deg0: V^i(1)·V^j(1) = p^min·V^max(1).
        for (i, ci) in self.deg0.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in rhs.deg0.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let k = i.max(j);
                let c = (ci * cj).mul_p_pow(i.min(j) as u32);
                out.deg0[k] = &out.deg0[k] + &c;
            }
        }
        // deg0 × deg1, both orders (degree 0 and 1 commute without signs).
        for (zero_side, one_side) in [(self, rhs), (rhs, self)] {
            for (i, c) in zero_side.deg0.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for j in 1..n {
                    let r = one_side.deg1[j];
                    if r != 0 {
                        accumulate_v_dv(&mut out.deg1, p, n, i, c, j, r);
                    }
                }
            }
        }
        out
    }

    /// Restriction R: level n → n-1, forgetting the top basis index.
    pub fn restriction(&self) -> Self {
        assert!(self.level >= 2, "restriction needs level >= 2");
        DrwElement {
            prime: self.prime,
            level: self.level - 1,
            deg0: self.deg0[..self.level - 1].to_vec(),
            deg1: self.deg1[..self.level - 1].to_vec(),
        }
    }

    /// Frobenius F: level n → n-1.
    pub fn frobenius(&self) -> Self {
        assert!(self.level >= 2, "Frobenius needs level >= 2");
        let p = self.prime;
        let n = self.level;
        let mut out = Self::zero(p, n - 1);
        // F(1) = 1, F(V^i(1)) = p·V^{i-1}(1).
        out.deg0[0] = &self.deg0[0] + &self.deg0[1].mul_p_pow(1);
        for i in 1..n - 1 {
            out.deg0[i] = self.deg0[i + 1].mul_p_pow(1);
        }
        for j in 1..n {
            let r = self.deg1[j];
            if r == 0 {
                continue;
            }
            // F(dV^j(1)) = dV^{j-1}(1) + ι(V^{j-1}(1)).
            if j >= 2 {
                let m = out.modulus(j - 1);
                out.deg1[j - 1] = add_mod(out.deg1[j - 1], r % m, m);
            }
            if p == 2 {
                for s in j..n - 1 {
                    let m = out.modulus(s);
                    let tail = mul_mod(r % m, 1u64 << (s - 1), m);
                    out.deg1[s] = add_mod(out.deg1[s], tail, m);
                }
            }
        }
        out
    }

    /// Verschiebung V: level n → n+1.
    pub fn verschiebung(&self) -> Self {
        let p = self.prime;
        let n = self.level;
        let mut out = Self::zero(p, n + 1);
        for i in 0..n {
            out.deg0[i + 1] = self.deg0[i].clone();
        }
        // V(dV^i(1)) = p·dV^{i+1}(1).
        for i in 1..n {
            let m = out.modulus(i + 1);
            out.deg1[i + 1] = mul_mod(self.deg1[i], p as u64, m);
        }
        out
    }

    /// The differential d: degree 0 → degree 1 (and degree 1 → 0 = W_nΩ^2).
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.prime, self.level);
        for i in 1..self.level {
            out.deg1[i] = self.deg0[i].residue_mod(self.modulus(i));
        }
        out
    }

    /// ι, multiplication by λ[-1]·dλ[-1]. Zero for odd p; at p = 2 it sends
    /// V^i(1) to Σ_{s>i} 2^{s-1}·dV^s(1) and kills degree 1.
    pub fn iota(&self) -> Self {
        let mut out = Self::zero(self.prime, self.level);
        if self.prime != 2 {
            return out;
        }
        for i in 0..self.level {
            if self.deg0[i].residue_mod(2) == 1 {
                for s in i + 1..self.level {
                    let m = out.modulus(s);
                    out.deg1[s] = add_mod(out.deg1[s], 1u64 << (s - 1), m);
                }
            }
        }
        out
    }
}

/// Adds c·r·(V^i(1)·dV^j(1)) into degree-1 accumulators.
fn accumulate_v_dv(deg1: &mut [u64], p: u32, n: usize, i: usize, c: &PLocalInt, j: usize, r: u64) {
    let modulus = |s: usize| p_pow_u64(p, s as u32);
    let mut add_at = |s: usize, multiplier: u64| {
        let m = modulus(s);
        let v = mul_mod(mul_mod(c.residue_mod(m), r % m, m), multiplier % m, m);
        deg1[s] = add_mod(deg1[s], v, m);
    };
    if i == 0 {
        add_at(j, 1);
        return;
    }
    if p == 2 {
        add_at(j, 1u64 << i);
        for s in i.max(j) + 1..n {
            add_at(s, 1u64 << (s - 1));
        }
    } else if i < j {
        add_at(j, p_pow_u64(p, i as u32));
    }
}

impl Add for &DrwElement {
    type Output = DrwElement;
    fn add(self, rhs: &DrwElement) -> DrwElement {
        DrwElement::add(self, rhs)
    }
}

impl Sub for &DrwElement {
    type Output = DrwElement;
    fn sub(self, rhs: &DrwElement) -> DrwElement {
        DrwElement::sub(self, rhs)
    }
}

impl Mul for &DrwElement {
    type Output = DrwElement;
    fn mul(self, rhs: &DrwElement) -> DrwElement {
        DrwElement::mul(self, rhs)
    }
}

impl Neg for &DrwElement {
    type Output = DrwElement;
    fn neg(self) -> DrwElement {
        DrwElement::neg(self)
    }
}

pub(crate) fn v_basis_name(i: usize) -> String {
    match i {
        0 => "[1]".into(),
        1 => "V(1)".into(),
        _ => format!("V^{i}(1)"),
    }
}

pub(crate) fn dv_basis_name(i: usize) -> String {
    match i {
        1 => "dV(1)".into(),
        _ => format!("dV^{i}(1)"),
    }
}

pub(crate) fn push_term(out: &mut Vec<String>, coeff: &str, basis: String) {
    if coeff == "1" {
        out.push(basis);
    } else {
        out.push(format!("{coeff}\u{b7}{basis}"));
    }
}

/// Renders the basis expansion without the level trailer.
pub(crate) fn body_string(e: &DrwElement) -> String {
    let mut terms = Vec::new();
    for (i, c) in e.deg0.iter().enumerate() {
        if !c.is_zero() {
            push_term(&mut terms, &c.to_string(), v_basis_name(i));
        }
    }
    for (i, &r) in e.deg1.iter().enumerate() {
        if r != 0 {
            push_term(&mut terms, &r.to_string(), dv_basis_name(i));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for DrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {{p={}, n={}}}",
            body_string(self),
            self.prime,
            self.level
        )
    }
}

impl fmt::Debug for DrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One parsed basis term.
pub(crate) enum ParsedTerm {
    V(usize),
    Dv(usize),
    DlogP,
}

/// Parses one term `coeff·basis`, returning the coefficient and slot.
/// Accepts `·` or `*` between coefficient and basis, `[1]`, `V(1)`,
/// `V^i(1)`, `dV(1)`, `dV^i(1)`, and (for the log complex) `dlog[p]`.
pub(crate) fn parse_term(term: &str, p: u32) -> Result<(PLocalInt, ParsedTerm), String> {
    let term = term.trim();
    let (coeff_str, basis_str) = match term.find(['\u{b7}', '*']) {
        Some(i) => (
            term[..i].trim(),
            term[i..].trim_start_matches(['\u{b7}', '*']).trim(),
        ),
        None => ("1", term),
    };
    let coeff = {
        let (num, den) = match coeff_str.split_once('/') {
            None => (coeff_str, "1"),
            Some((a, b)) => (a, b),
        };
        let num: num_bigint::BigInt =
            num.trim().parse().map_err(|_| format!("bad coefficient {coeff_str:?}"))?;
        let den: num_bigint::BigInt =
            den.trim().parse().map_err(|_| format!("bad coefficient {coeff_str:?}"))?;
        PLocalInt::new(num, den, p).map_err(|e| e.to_string())?
    };
    let slot = if basis_str == "[1]" {
        ParsedTerm::V(0)
    } else if basis_str == "V(1)" {
        ParsedTerm::V(1)
    } else if basis_str == "dV(1)" {
        ParsedTerm::Dv(1)
    } else if basis_str == "dlog[p]" || basis_str == format!("dlog[{p}]") {
        ParsedTerm::DlogP
    } else if let Some(rest) = basis_str.strip_prefix("dV^") {
        let i = rest
            .strip_suffix("(1)")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or(format!("bad basis {basis_str:?}"))?;
        ParsedTerm::Dv(i)
    } else if let Some(rest) = basis_str.strip_prefix("V^") {
        let i = rest
            .strip_suffix("(1)")
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or(format!("bad basis {basis_str:?}"))?;
        ParsedTerm::V(i)
    } else {
        return Err(format!("bad basis {basis_str:?}"));
    };
    Ok((coeff, slot))
}

/// Splits `body @ {p=…, n=…(, log)}` into term strings, prime, level, and
/// whether the log marker is present.
pub(crate) fn parse_element_shell(s: &str) -> Result<(Vec<String>, u32, usize, bool), String> {
    let t = s.replace('\u{2212}', "-");
    let (body, trailer) = t
        .rsplit_once('@')
        .ok_or("missing @ {p=…, n=…} trailer".to_string())?;
    let trailer = trailer.trim();
    let inner = trailer
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .ok_or(format!("bad trailer {trailer:?}"))?;
    let mut prime = None;
    let mut level = None;
    let mut log = false;
    for piece in inner.split(',') {
        let piece = piece.trim();
        if piece == "log" {
            log = true;
            continue;
        }
        let (k, v) = piece.split_once('=').ok_or(format!("bad trailer piece {piece:?}"))?;
        match k.trim() {
            "p" => prime = Some(v.trim().parse::<u32>().map_err(|_| "bad p".to_string())?),
            "n" => level = Some(v.trim().parse::<usize>().map_err(|_| "bad n".to_string())?),
            other => return Err(format!("unknown trailer key {other:?}")),
        }
    }
    let prime = prime.ok_or("missing p".to_string())?;
    let level = level.ok_or("missing n".to_string())?;
    // Split the body on top-level +/- (no signs occur inside terms).
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '+' | '-' if !cur.trim().is_empty() => {
                terms.push(cur.clone());
                cur.clear();
                if ch == '-' {
                    cur.push('-');
                }
            }
            '-' => cur.push('-'),
            '+' => {}
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        terms.push(cur);
    }
    Ok((terms, prime, level, log))
}

impl FromStr for DrwElement {
    type Err = WittError;

    fn from_str(s: &str) -> Result<Self, WittError> {
        let (terms, prime, level, log) = parse_element_shell(s).map_err(WittError::Parse)?;
        if log {
            return Err(WittError::Parse(
                "log marker on a plain element (use the log complex type)".into(),
            ));
        }
        if level < 1 {
            return Err(WittError::Parse("level must be >= 1".into()));
        }
        let mut e = DrwElement::zero(prime, level);
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
                    e.deg0[i] = &e.deg0[i] + &coeff;
                }
                ParsedTerm::Dv(i) => {
                    if i == 0 || i >= level {
                        return Err(WittError::Parse(format!(
                            "dV^{i}(1) does not live at level {level}"
                        )));
                    }
                    let m = p_pow_u64(prime, i as u32);
                    e.deg1[i] = add_mod(e.deg1[i], coeff.residue_mod(m), m);
                }
                ParsedTerm::DlogP => {
                    return Err(WittError::Parse(
                        "dlog[p] term on a plain element (use the log complex type)".into(),
                    ))
                }
            }
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::BaseRingElem;

    fn v(p: u32, n: usize, i: usize) -> DrwElement {
        DrwElement::v_basis_elem(p, n, i)
    }

    fn dv(p: u32, n: usize, i: usize) -> DrwElement {
        DrwElement::dv_basis_elem(p, n, i)
    }

    #[test]
    fn deg0_products_follow_min_max_rule() {
        // V(1)·V(1) = 2·V(1) at p = 2 (ghost: (0,2,2)² = 2·(0,2,2)).
        let x = v(2, 3, 1);
        assert_eq!(x.mul(&x), x.int_mul(2));
        // V(1)·V^2(1) = 2·V^2(1).
        assert_eq!(v(2, 3, 1).mul(&v(2, 3, 2)), v(2, 3, 2).int_mul(2));
        // At p = 3: V^2(1)·V^2(1) = 9·V^2(1).
        assert_eq!(v(3, 3, 2).mul(&v(3, 3, 2)), v(3, 3, 2).int_mul(9));
    }

    #[test]
    fn torsion_products_at_p2() {
        // V(1)·dV(1) = 2·dV^2(1) at n = 3 (the 2·dV(1) head dies).
        let got = v(2, 3, 1).mul(&dv(2, 3, 1));
        assert_eq!(got, dv(2, 3, 2).int_mul(2));
        // V(1)·dV^2(1) = 2·dV^2(1) at n = 3 (no tail room).
        assert_eq!(v(2, 3, 1).mul(&dv(2, 3, 2)), dv(2, 3, 2).int_mul(2));
        // V(1)·dV^2(1) = 2·dV^2(1) + 4·dV^3(1) at n = 4.
        let got = v(2, 4, 1).mul(&dv(2, 4, 2));
        let want = dv(2, 4, 2).int_mul(2).add(&dv(2, 4, 3).int_mul(4));
        assert_eq!(got, want);
    }

    #[test]
    fn torsion_products_at_odd_p() {
        // j ≤ i kills the product; i < j scales by p^i.
        assert!(v(3, 4, 2).mul(&dv(3, 4, 1)).is_zero());
        assert!(v(3, 4, 1).mul(&dv(3, 4, 1)).is_zero());
        assert_eq!(v(3, 4, 1).mul(&dv(3, 4, 2)), dv(3, 4, 2).int_mul(3));
        assert_eq!(v(5, 4, 2).mul(&dv(5, 4, 3)), dv(5, 4, 3).int_mul(25));
    }

    #[test]
    fn frobenius_tables() {
        // F(V(1)) = 2·[1], F(V^2(1)) = 2·V(1) at p = 2.
        assert_eq!(v(2, 4, 1).frobenius(), v(2, 3, 0).int_mul(2));
        assert_eq!(v(2, 4, 2).frobenius(), v(2, 3, 1).int_mul(2));
        // F(dV(1)) = ι(1): at n = 4 → 3, that is dV(1) + 2·dV^2(1).
        let got = dv(2, 4, 1).frobenius();
        let want = dv(2, 3, 1).add(&dv(2, 3, 2).int_mul(2));
        assert_eq!(got, want);
        // F(dV^2(1)) = dV(1) + 2·dV^2(1) at n = 4 → 3.
        assert_eq!(
            dv(2, 4, 2).frobenius(),
            dv(2, 3, 1).add(&dv(2, 3, 2).int_mul(2))
        );
        // Odd p: F(dV(1)) = 0, F(dV^2(1)) = dV(1).
        assert!(dv(3, 4, 1).frobenius().is_zero());
        assert_eq!(dv(3, 4, 2).frobenius(), dv(3, 3, 1));
    }

    #[test]
    fn iota_is_the_torsion_tail() {
        // ι(1) = dV(1) + 2·dV^2(1) + 4·dV^3(1) at p = 2, n = 4.
        let got = DrwElement::unit(2, 4).iota();
        let want = dv(2, 4, 1)
            .add(&dv(2, 4, 2).int_mul(2))
            .add(&dv(2, 4, 3).int_mul(4));
        assert_eq!(got, want);
        // ι kills degree 1, even coefficients, and everything at odd p.
        assert!(dv(2, 4, 2).iota().is_zero());
        assert!(DrwElement::unit(2, 4).int_mul(2).iota().is_zero());
        assert!(DrwElement::unit(3, 4).iota().is_zero());
    }

    #[test]
    fn relation_fdv_is_d_plus_iota() {
        for p in [2u32, 3, 5] {
            for n in 2..=5usize {
                let mut x = DrwElement::zero(p, n);
                for i in 0..n {
                    x.deg0[i] = PLocalInt::from_int(3 * i as i64 + 1, p);
                }
                for i in 1..n {
                    x.deg1[i] = (i as u64 + 2) % p_pow_u64(p, i as u32);
                }
                let lhs = x.verschiebung().d().frobenius();
                let rhs = x.d().add(&x.iota());
                assert_eq!(lhs, rhs, "FdV = d + ι failed at p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn lambda_of_minus_one() {
        // λ[-1] = -[1] + V(1), so d(λ[-1]) = dV(1).
        let m = WittVector::teichmuller(BaseRingElem::from_int(-1, 2), 3);
        let e = DrwElement::lambda(&m).unwrap();
        let want = DrwElement::unit(2, 3).neg().add(&v(2, 3, 1));
        assert_eq!(e, want);
        assert_eq!(e.d(), dv(2, 3, 1));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let e = v(2, 4, 2)
            .int_mul(3)
            .add(&dv(2, 4, 1))
            .add(&dv(2, 4, 2).int_mul(2));
        assert_eq!(e.to_string(), "3\u{b7}V^2(1) + dV(1) + 2\u{b7}dV^2(1) @ {p=2, n=4}");
        assert_eq!(e.to_string().parse::<DrwElement>().unwrap(), e);
        // Negative and fractional coefficients, ASCII * accepted.
        let f: DrwElement = "-1/3\u{b7}[1] + 5*V(1) @ {p=2, n=2}".parse().unwrap();
        assert_eq!(
            f.deg0()[0],
            PLocalInt::new((-1).into(), 3.into(), 2).unwrap()
        );
        assert_eq!(f.deg0()[1], PLocalInt::from_int(5, 2));
        assert_eq!(DrwElement::zero(3, 2).to_string(), "0 @ {p=3, n=2}");
        assert_eq!(
            "0 @ {p=3, n=2}".parse::<DrwElement>().unwrap(),
            DrwElement::zero(3, 2)
        );
    }
}
