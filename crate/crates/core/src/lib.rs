//! Exact computations in KLR (quiver Hecke) algebras and their cyclotomic
//! quotients.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`poly`], [`linalg`]: exact fields, sparse polynomials,
//!   sparse row reduction.
//! * [`cartan`], [`symgroup`]: Cartan data with Q-polynomials, and the
//!   symmetric group with reduced words and the gamma order.
//! * [`klr`]: normal-form arithmetic in `R_beta`.
//! * [`cyclotomic`]: monomial bases of `R^Lambda_beta`, structure constants
//!   and linear-algebra verifiers (center, trace forms, annihilators).
//! * [`cocenter`]: cocenter monomial bases, the commutator generators and
//!   the center verdict.

pub mod cartan;
pub mod cocenter;
pub mod cyclotomic;
pub mod klr;
pub mod scalar;
pub mod linalg;
pub mod poly;
pub mod symgroup;

pub use scalar::{Field, Fp, Gf32003, Rational};

/// Polynomials with rational coefficients.
pub type QPoly = poly::MultiPoly<Rational>;
/// Cartan datum over the rationals.
pub type QCartan = cartan::CartanDatum<Rational>;
/// KLR algebra elements over the rationals.
pub type QElement = klr::KlrElement<Rational>;
