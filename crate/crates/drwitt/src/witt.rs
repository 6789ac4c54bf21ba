//! Truncated p-typical Witt vectors with exact ghost transport.
//!
//! W_n(A) for a torsion-free p-local base A (here ℤ₍p₎ or ℤ₍p₎[X]) embeds
//! into A^n by the ghost map
//!
//! ```text
//! w_i(a) = a_0^{p^i} + p·a_1^{p^{i-1}} + … + p^i·a_i
//! ```
//!
//! so ring operations are computed in ghost coordinates and pulled back by
//! exact division. Pullback of a sum or product of genuine Witt vectors
//! never leaves the image (the universal sum and product polynomials have
//! integer coefficients); the fallible surface is [`WittVector::from_ghost`]
//! on user-supplied ghost coordinates, where a failed division reports
//! exactly which component obstructs the lift.
//!
//! The additive structure of W_n(ℤ₍p₎) is free: the elements V^i([1]) for
//! 0 ≤ i < n form a ℤ₍p₎-basis, with ghost coordinates
//! (0, …, 0, p^i, …, p^i). The basis coefficients of x are therefore
//! c_0 = w_0 and c_i = (w_i − w_{i-1})/p^i, and the divisions are exact for
//! every x ∈ W_n(ℤ₍p₎); that is where a^{p^i} ≡ a^{p^{i-1}} mod p^i enters.

use crate::ring::BaseRingElem;
use crate::scalar::{p_pow_u64, PLocalInt, ScalarError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Errors from the fallible Witt vector surface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    /// A ghost vector is not in the image of the ghost map: the division
    /// recovering component `index` left a remainder.
    #[error("ghost component {index} does not lift: {source}")]
    NonIntegralGhost { index: usize, source: ScalarError },
    /// The operation is defined for vectors with scalar components only.
    #[error("operation requires scalar components")]
    ScalarComponentsRequired,
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Ghost coordinates (w_0, …, w_{n-1}) of a length-n Witt vector.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhostVector {
    prime: u32,
    components: Vec<BaseRingElem>,
}

impl GhostVector {
    pub fn new(prime: u32, components: Vec<BaseRingElem>) -> Self {
        assert!(!components.is_empty(), "ghost vector must have length >= 1");
        for c in &components {
            assert_eq!(c.prime(), prime, "component prime differs from vector prime");
        }
        GhostVector { prime, components }
    }

    pub fn from_ints(prime: u32, ints: &[i64]) -> Self {
        Self::new(
            prime,
            ints.iter().map(|&n| BaseRingElem::from_int(n, prime)).collect(),
        )
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[BaseRingElem] {
        &self.components
    }
}

/// A length-n p-typical Witt vector (a_0, …, a_{n-1}).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittVector {
    prime: u32,
    components: Vec<BaseRingElem>,
}

impl WittVector {
    pub fn new(prime: u32, components: Vec<BaseRingElem>) -> Self {
        assert!(!components.is_empty(), "Witt vector must have length >= 1");
        for c in &components {
            assert_eq!(c.prime(), prime, "component prime differs from vector prime");
        }
        WittVector { prime, components }
    }

    pub fn from_ints(prime: u32, ints: &[i64]) -> Self {
        Self::new(
            prime,
            ints.iter().map(|&n| BaseRingElem::from_int(n, prime)).collect(),
        )
    }

    pub fn zero(prime: u32, level: usize) -> Self {
        Self::new(prime, vec![BaseRingElem::from_int(0, prime); level])
    }

    /// The multiplicative unit [1] = (1, 0, …, 0).
    pub fn one(prime: u32, level: usize) -> Self {
        Self::teichmuller(BaseRingElem::from_int(1, prime), level)
    }

    /// The Teichmüller lift [a] = (a, 0, …, 0).
    pub fn teichmuller(a: BaseRingElem, level: usize) -> Self {
        assert!(level >= 1);
        let p = a.prime();
        let mut components = vec![BaseRingElem::from_int(0, p); level];
        components[0] = a;
        WittVector { prime: p, components }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[BaseRingElem] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    fn assert_compatible(&self, rhs: &WittVector) {
        assert_eq!(self.prime, rhs.prime, "Witt vector primes differ");
        assert_eq!(self.level(), rhs.level(), "Witt vector levels differ");
    }

    /// Ghost coordinates: w_i = Σ_{j≤i} p^j·a_j^{p^{i-j}}.
    pub fn ghost(&self) -> GhostVector {
        let n = self.level();
        let p = self.prime;
        let mut ws = vec![BaseRingElem::from_int(0, p); n];
        for j in 0..n {
            // Power chain a_j, a_j^p, a_j^{p^2}, … feeding rows j, j+1, ….
            let mut pw = self.components[j].clone();
            ws[j] = ws[j].add(&pw.mul_p_pow(j as u32));
            for w in ws.iter_mut().take(n).skip(j + 1) {
                pw = pw.pow(p as u64);
                *w = w.add(&pw.mul_p_pow(j as u32));
            }
        }
        GhostVector {
            prime: p,
            components: ws,
        }
    }

    /// Recovers Witt components from ghost coordinates by exact division:
    /// a_s = (w_s − Σ_{i<s} p^i·a_i^{p^{s-i}}) / p^s.
    pub fn from_ghost(g: &GhostVector) -> Result<Self, WittError> {
        let n = g.level();
        let p = g.prime;
        let mut components: Vec<BaseRingElem> = Vec::with_capacity(n);
        for s in 0..n {
            let mut acc = g.components[s].clone();
            for (i, a) in components.iter().enumerate() {
                let e = p_pow_u64(p, (s - i) as u32);
                acc = acc.sub(&a.pow(e).mul_p_pow(i as u32));
            }
            let a_s = acc
                .div_exact_p_pow(s as u32)
                .map_err(|source| WittError::NonIntegralGhost { index: s, source })?;
            components.push(a_s);
        }
        Ok(WittVector {
            prime: p,
            components,
        })
    }

    fn transport(g: GhostVector, what: &str) -> Self {
        Self::from_ghost(&g).unwrap_or_else(|e| {
            panic!("{what} left the ghost image ({e}); the base ring must be torsion-free")
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let (a, b) = (self.ghost(), rhs.ghost());
        let ws = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.add(y))
            .collect();
        Self::transport(GhostVector { prime: self.prime, components: ws }, "Witt sum")
    }

    pub fn neg(&self) -> Self {
        let g = self.ghost();
        let ws = g.components.iter().map(|x| x.neg()).collect();
        Self::transport(GhostVector { prime: self.prime, components: ws }, "Witt negation")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let (a, b) = (self.ghost(), rhs.ghost());
        let ws = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.mul(y))
            .collect();
        Self::transport(GhostVector { prime: self.prime, components: ws }, "Witt product")
    }

    /// Action of c ∈ ℤ₍p₎ on the additive group: ghost coordinates scale by
    /// c. Exact because c is a p-local unit times a p-power.
    pub fn scalar_mul(&self, c: &PLocalInt) -> Self {
        assert_eq!(self.prime, c.prime(), "scalar prime differs");
        let g = self.ghost();
        let scalar = BaseRingElem::Scalar(c.clone());
        let ws = g.components.iter().map(|x| x.mul(&scalar)).collect();
        Self::transport(GhostVector { prime: self.prime, components: ws }, "scalar action")
    }

    /// Frobenius F: W_n → W_{n-1}, the shift in ghost coordinates.
    pub fn frobenius(&self) -> Self {
        assert!(self.level() >= 2, "Frobenius needs level >= 2");
        let g = self.ghost();
        let ws = g.components[1..].to_vec();
        Self::transport(GhostVector { prime: self.prime, components: ws }, "Frobenius")
    }

    /// Verschiebung V: W_n → W_{n+1}, prepend a zero component.
    pub fn verschiebung(&self) -> Self {
        let mut components = Vec::with_capacity(self.level() + 1);
        components.push(BaseRingElem::from_int(0, self.prime));
        components.extend(self.components.iter().cloned());
        WittVector {
            prime: self.prime,
            components,
        }
    }

    /// Restriction R: W_n → W_{n-1}, drop the last component.
    pub fn restriction(&self) -> Self {
        assert!(self.level() >= 2, "restriction needs level >= 2");
        WittVector {
            prime: self.prime,
            components: self.components[..self.level() - 1].to_vec(),
        }
    }

    /// V^i([1]_{n-i}) ∈ W_n, the i-th additive basis vector.
    pub fn v_basis_vector(prime: u32, level: usize, i: usize) -> Self {
        assert!(i < level);
        let mut v = Self::one(prime, level - i);
        for _ in 0..i {
            v = v.verschiebung();
        }
        v
    }

    /// Coefficients (c_0, …, c_{n-1}) with self = Σ c_i·V^i([1]).
    ///
    /// Defined for scalar components; always succeeds on them, because
    /// ghost coordinates of elements of W_n(ℤ₍p₎) satisfy
    /// w_i ≡ w_{i-1} mod p^i.
    pub fn v_basis_decompose(&self) -> Result<Vec<PLocalInt>, WittError> {
        if self.components.iter().any(|c| c.is_poly()) {
            return Err(WittError::ScalarComponentsRequired);
        }
        let g = self.ghost();
        let w: Vec<&PLocalInt> = g
            .components
            .iter()
            .map(|c| c.as_scalar().expect("checked scalar above"))
            .collect();
        let mut coeffs = Vec::with_capacity(self.level());
        coeffs.push(w[0].clone());
        for s in 1..self.level() {
            let diff = w[s] - w[s - 1];
            let c = diff
                .div_exact_p_pow(s as u32)
                .map_err(|source| WittError::NonIntegralGhost { index: s, source })?;
            coeffs.push(c);
        }
        Ok(coeffs)
    }

    /// Rebuilds Σ c_i·V^i([1]) from basis coefficients.
    pub fn v_basis_recompose(prime: u32, coeffs: &[PLocalInt]) -> Self {
        assert!(!coeffs.is_empty());
        // Ghost coordinates are the partial sums Σ_{i≤s} c_i·p^i.
        let mut ws = Vec::with_capacity(coeffs.len());
        let mut acc = PLocalInt::zero(prime);
        for (i, c) in coeffs.iter().enumerate() {
            assert_eq!(c.prime(), prime, "coefficient prime differs");
            acc = &acc + &c.mul_p_pow(i as u32);
            ws.push(BaseRingElem::Scalar(acc.clone()));
        }
        Self::transport(
            GhostVector { prime, components: ws },
            "V-basis recomposition",
        )
    }
}

/// Basis coefficients of the Teichmüller lift, straight from the closed
/// form: c_0 = a and c_i = (a^{p^i} − a^{p^{i-1}})/p^i.
///
/// The divisions are exact for every a ∈ ℤ₍p₎; see
/// [`frobenius_congruence_holds`].
pub fn teichmuller_coeffs(a: &PLocalInt, level: usize) -> Vec<PLocalInt> {
    assert!(level >= 1);
    let p = a.prime();
    let mut coeffs = Vec::with_capacity(level);
    coeffs.push(a.clone());
    let mut prev = a.clone(); // a^{p^{i-1}}
    for i in 1..level {
        let cur = pow_u64(&prev, p as u64);
        let c = (&cur - &prev)
            .div_exact_p_pow(i as u32)
            .expect("Teichmüller coefficients are integral over Z_(p)");
        coeffs.push(c);
        prev = cur;
    }
    coeffs
}

fn pow_u64(a: &PLocalInt, mut e: u64) -> PLocalInt {
    let mut base = a.clone();
    let mut acc = PLocalInt::one(a.prime());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Checks v_p(a^{p^k} − a^{p^{k-1}}) ≥ k, the congruence behind the
/// integrality of Teichmüller coefficients.
pub fn frobenius_congruence_holds(a: &PLocalInt, k: u32) -> bool {
    assert!(k >= 1);
    let p = a.prime() as u64;
    let hi = pow_u64(a, p.pow(k));
    let lo = pow_u64(a, p.pow(k - 1));
    (&hi - &lo).div_exact_p_pow(k).is_ok()
}

/// The four square roots of 1 in W_n(ℤ₍₂₎), as ±[1] and ±[−1]:
/// (1, 0, …, 0), (−1, 0, …, 0), (−1, −1, …, −1), (1, −1, …, −1).
/// At n = 1 they coincide in pairs.
pub fn square_roots_of_unity(level: usize) -> [WittVector; 4] {
    let one = WittVector::one(2, level);
    let minus_one = WittVector::teichmuller(BaseRingElem::from_int(-1, 2), level);
    let roots = [one.clone(), minus_one.clone(), one.neg(), minus_one.neg()];
    for r in &roots {
        debug_assert_eq!(r.mul(r), one);
    }
    roots
}

impl Add for &WittVector {
    type Output = WittVector;
    fn add(self, rhs: &WittVector) -> WittVector {
        WittVector::add(self, rhs)
    }
}

impl Sub for &WittVector {
    type Output = WittVector;
    fn sub(self, rhs: &WittVector) -> WittVector {
        WittVector::sub(self, rhs)
    }
}

impl Mul for &WittVector {
    type Output = WittVector;
    fn mul(self, rhs: &WittVector) -> WittVector {
        WittVector::mul(self, rhs)
    }
}

impl Neg for &WittVector {
    type Output = WittVector;
    fn neg(self) -> WittVector {
        WittVector::neg(self)
    }
}

fn fmt_vector(
    f: &mut fmt::Formatter<'_>,
    tag: &str,
    prime: u32,
    components: &[BaseRingElem],
) -> fmt::Result {
    write!(f, "{tag}{{p={},n={}}}[", prime, components.len())?;
    for (i, c) in components.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "({c})")?;
    }
    write!(f, "]")
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vector(f, "W", self.prime, &self.components)
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GhostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_vector(f, "G", self.prime, &self.components)
    }
}

impl fmt::Debug for GhostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `W{p=2,n=3}[(-1),(0),(0)]` (or the `G` ghost form) into prime and
/// components. Scalar components may be integers or fractions `a/b`;
/// polynomial components use the literal grammar of
/// [`crate::ring::SparsePoly::parse`].
fn parse_vector(s: &str, tag: &str) -> Result<(u32, Vec<BaseRingElem>), WittError> {
    let err = |m: &str| WittError::Parse(format!("{m} in {s:?}"));
    let t = s.replace('\u{2212}', "-");
    let t = t.trim();
    let t = t
        .strip_prefix(tag)
        .ok_or_else(|| err(&format!("expected leading {tag:?}")))?;
    let t = t.strip_prefix('{').ok_or_else(|| err("expected '{'"))?;
    let (params, rest) = t.split_once('}').ok_or_else(|| err("expected '}'"))?;
    let mut prime: Option<u32> = None;
    let mut level: Option<usize> = None;
    for piece in params.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| err("expected key=value"))?;
        match k.trim() {
            "p" => prime = Some(v.trim().parse().map_err(|_| err("bad p"))?),
            "n" => level = Some(v.trim().parse().map_err(|_| err("bad n"))?),
            _ => return Err(err("unknown parameter")),
        }
    }
    let prime = prime.ok_or_else(|| err("missing p"))?;
    let level = level.ok_or_else(|| err("missing n"))?;
    let rest = rest.trim();
    let body = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| err("expected [...]"))?;
    let mut components = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in body.chars() {
        match ch {
            '(' => {
                if depth > 0 {
                    cur.push(ch);
                }
                depth += 1;
            }
            ')' => {
                if depth == 0 {
                    return Err(err("unbalanced parentheses"));
                }
                depth -= 1;
                if depth == 0 {
                    components.push(parse_component(cur.trim(), prime)?);
                    cur.clear();
                } else {
                    cur.push(ch);
                }
            }
            ',' if depth == 0 => {}
            c if depth == 0 && c.is_whitespace() => {}
            _ if depth == 0 => return Err(err("component outside parentheses")),
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(err("unbalanced parentheses"));
    }
    if components.len() != level {
        return Err(err(&format!(
            "expected {level} components, found {}",
            components.len()
        )));
    }
    Ok((prime, components))
}

fn parse_component(s: &str, p: u32) -> Result<BaseRingElem, WittError> {
    if s.contains(['X', 'x']) {
        let poly = crate::ring::SparsePoly::parse(s, p).map_err(WittError::Parse)?;
        Ok(BaseRingElem::Poly(poly))
    } else {
        let poly = crate::ring::SparsePoly::parse(s, p).map_err(WittError::Parse)?;
        Ok(BaseRingElem::Scalar(poly.coeff(0)))
    }
}

impl FromStr for WittVector {
    type Err = WittError;
    fn from_str(s: &str) -> Result<Self, WittError> {
        let (prime, components) = parse_vector(s, "W")?;
        Ok(WittVector::new(prime, components))
    }
}

impl FromStr for GhostVector {
    type Err = WittError;
    fn from_str(s: &str) -> Result<Self, WittError> {
        let (prime, components) = parse_vector(s, "G")?;
        Ok(GhostVector::new(prime, components))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u32, ints: &[i64]) -> WittVector {
        WittVector::from_ints(p, ints)
    }

    #[test]
    fn ghost_round_trip() {
        let x = w(2, &[3, -1, 4, 7]);
        assert_eq!(WittVector::from_ghost(&x.ghost()).unwrap(), x);
        let y = w(5, &[2, 0, -3]);
        assert_eq!(WittVector::from_ghost(&y.ghost()).unwrap(), y);
    }

    #[test]
    fn ghost_of_teichmuller_is_power_chain() {
        let t = WittVector::teichmuller(BaseRingElem::from_int(3, 2), 4);
        let g = t.ghost();
        let expect: Vec<i64> = vec![3, 9, 81, 6561];
        for (c, e) in g.components().iter().zip(expect) {
            assert_eq!(c, &BaseRingElem::from_int(e, 2));
        }
    }

    #[test]
    fn non_integral_ghost_is_reported() {
        let g = GhostVector::from_ints(2, &[1, 0]);
        // a_1 = (0 - 1)/2 is not 2-local.
        match WittVector::from_ghost(&g) {
            Err(WittError::NonIntegralGhost { index: 1, .. }) => {}
            other => panic!("expected NonIntegralGhost at 1, got {other:?}"),
        }
    }

    #[test]
    fn frobenius_verschiebung_composite_is_p() {
        for p in [2u32, 3, 5] {
            let x = w(p, &[3, 1, -2, 5]);
            let fv = x.verschiebung().frobenius();
            let px = x.scalar_mul(&PLocalInt::from_int(p, p));
            assert_eq!(fv, px, "FV = p failed at p = {p}");
        }
    }

    #[test]
    fn frobenius_of_teichmuller() {
        for p in [2u32, 3, 5] {
            let a = BaseRingElem::from_int(7, p);
            let t = WittVector::teichmuller(a.clone(), 4);
            assert_eq!(
                t.frobenius(),
                WittVector::teichmuller(a.pow(p as u64), 3),
                "F[a] = [a^p] failed at p = {p}"
            );
        }
    }

    #[test]
    fn minus_one_decomposes_as_claimed() {
        // [-1] = -[1] + V([1]) in W_n(Z_(2)).
        let n = 5;
        let minus_one = WittVector::teichmuller(BaseRingElem::from_int(-1, 2), n);
        let rhs = WittVector::one(2, n)
            .neg()
            .add(&WittVector::one(2, n - 1).verschiebung());
        assert_eq!(minus_one, rhs);
    }

    #[test]
    fn four_square_roots_of_unity() {
        let roots = square_roots_of_unity(4);
        let forms: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 0],
            vec![-1, 0, 0, 0],
            vec![-1, -1, -1, -1],
            vec![1, -1, -1, -1],
        ];
        for (r, form) in roots.iter().zip(forms) {
            assert_eq!(r, &WittVector::from_ints(2, &form));
        }
        // Level 1: the four roots coincide in pairs.
        let small = square_roots_of_unity(1);
        assert_eq!(small[0], small[3]);
        assert_eq!(small[1], small[2]);
        assert_ne!(small[0], small[1]);
    }

    #[test]
    fn teichmuller_coeffs_match_decomposition() {
        for p in [2u32, 3, 5] {
            let a = PLocalInt::from_int(6, p);
            let t = WittVector::teichmuller(BaseRingElem::Scalar(a.clone()), 5);
            assert_eq!(teichmuller_coeffs(&a, 5), t.v_basis_decompose().unwrap());
        }
    }

    #[test]
    fn teichmuller_coeffs_of_two_at_p2() {
        // c = (2, 1, 3, 30, 4080): c_i = (2^{2^i} - 2^{2^{i-1}})/2^i.
        let c = teichmuller_coeffs(&PLocalInt::from_int(2, 2), 5);
        let expect = [2i64, 1, 3, 30, 4080];
        for (got, want) in c.iter().zip(expect) {
            assert_eq!(got, &PLocalInt::from_int(want, 2));
        }
    }

    #[test]
    fn recompose_inverts_decompose() {
        let x = w(3, &[4, -2, 9, 1]);
        let coeffs = x.v_basis_decompose().unwrap();
        assert_eq!(WittVector::v_basis_recompose(3, &coeffs), x);
    }

    #[test]
    fn decompose_rejects_polynomials() {
        let x = WittVector::new(
            2,
            vec![BaseRingElem::Poly(crate::ring::SparsePoly::x(2))],
        );
        assert_eq!(
            x.v_basis_decompose(),
            Err(WittError::ScalarComponentsRequired)
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        let x = w(2, &[-1, 0, 0]);
        assert_eq!(x.to_string(), "W{p=2,n=3}[(-1),(0),(0)]");
        assert_eq!("W{p=2,n=3}[(-1),(0),(0)]".parse::<WittVector>().unwrap(), x);
        // Unicode minus and whitespace are tolerated.
        let y: WittVector = "W{p=2, n=2}[(\u{2212}3), (1/3)]".parse().unwrap();
        assert_eq!(
            y.components()[1],
            BaseRingElem::Scalar(PLocalInt::new(1.into(), 3.into(), 2).unwrap())
        );
        // Polynomial components round trip too.
        let t = WittVector::teichmuller(
            BaseRingElem::Poly(crate::ring::SparsePoly::parse("X+1", 2).unwrap()),
            2,
        );
        assert_eq!(t.to_string().parse::<WittVector>().unwrap(), t);
    }
}
