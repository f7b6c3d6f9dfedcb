//! Normal-form arithmetic in the KLR algebra `R_beta`.
//!
//! Elements are stored as `sum tau_w P_{w,nu}(x) e(nu)` with `tau_w` labelled
//! by the preferred (lexicographically smallest) reduced word of `w`.

pub mod algebra;
pub mod element;
pub mod polyrep;
pub mod relations;

pub use algebra::{KlrAlgebra, KlrError, Terms, MAX_HEIGHT};
pub use element::{GradedDegree, KlrElement};
pub use polyrep::{polyrep_apply, PolyVector};
pub use relations::{verify_relations, RelationFailure, RelationReport};

#[cfg(test)]
mod tests;
