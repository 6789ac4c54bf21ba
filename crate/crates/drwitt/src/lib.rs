//! Exact arithmetic for p-typical Witt vectors and de Rham-Witt complexes.
//!
//! The crate builds, over ℤ and ℤ₍p₎ for p ∈ {2, 3, 5}:
//!
//! * truncated Witt vectors W_n(A) with ghost/unghost transport, Frobenius,
//!   Verschiebung, restriction, Teichmüller lifts, and the V-basis
//!   decomposition W_n(ℤ₍p₎) = ⊕ ℤ₍p₎·V^i([1]) ([`witt`]);
//! * the de Rham-Witt groups W_nΩ^q with their full operator set
//!   (R, F, V, d, ι) and basis product tables ([`drw`]);
//! * the log extension adjoining dlog[p] ([`log`]);
//! * the polynomial extension P(E) over A[X] for p = 2, with the four-type
//!   normal form and its explicit product tables ([`polyext`]);
//! * relation checkers that machine-verify every complex axiom at bounded
//!   level, sequentially or data-parallel ([`check`]).
//!
//! Everything is exact: scalars are arbitrary-precision rationals whose
//! denominators are units p-locally, torsion coefficients are canonical
//! residues, and every division is checked. Nothing rounds.

pub mod check;
pub mod drw;
pub mod log;
pub mod polyext;
pub mod ring;
pub mod scalar;
pub mod witt;

pub use drw::DrwElement;
pub use log::LogDrwElement;
pub use polyext::PolyDrwElement;
pub use ring::{BaseRingElem, SparsePoly};
pub use scalar::PLocalInt;
pub use witt::{GhostVector, WittError, WittVector};

/// Highest level the command-line surface accepts. Library functions accept
/// any level whose torsion moduli p^n fit in u64.
pub const MAX_CLI_LEVEL: u8 = 16;

/// Primes the de Rham-Witt tables are implemented for.
pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];
