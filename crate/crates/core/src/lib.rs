//! Quadratic pseudo-planar functions over GF(2^n) and the combinatorial
//! objects built from them: relative difference sets in the Galois ring
//! GR(4^n), mutually unbiased bases, optimal codebooks and commutative
//! semifields.

pub mod error;
pub mod gf2;
pub mod gring;
pub mod linop;
pub mod planar;
pub mod search;
pub mod sfield;
pub mod signal;

pub use error::{Error, Result};
pub use gf2::{Fe, FieldCtx, FieldSpec, Split};
pub use linop::LinPoly;
pub use planar::{DoQuad, FamilyView};
