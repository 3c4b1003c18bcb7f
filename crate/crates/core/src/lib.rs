//! Exact computer algebra for Rees algebras of almost linearly presented
//! height-two perfect ideals in `k[x, y, z]`.
//!
//! The crate is layered bottom-up:
//!
//! * [`ring`]: polynomials over `Q` or `GF(p)`, monomial orders, matrices.
//! * [`groebner`]: division, S-polynomials, Buchberger, elimination.
//! * [`ideals`]: colon, saturation, intersection, radical membership,
//!   dimension, Fitting ideals and the `G_s` test.
//! * [`pencil`]: invariant factors and block structure of linear pencils.
//! * [`rees`]: the defining-ideal pipeline and its certification.
//! * [`instance`]: instance files with expected values.

pub mod groebner;
pub mod ideals;
pub mod instance;
pub mod pencil;
pub mod rees;
pub mod ring;
