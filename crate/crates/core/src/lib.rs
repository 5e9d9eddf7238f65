//! Exact torus-equivariant Schubert calculus on flag manifolds.
//!
//! The crate computes equivariant cohomology and K-theory classes of flag
//! manifolds of the classical types through GKM localization: classes are
//! total maps from the Weyl group to an exact coefficient ring. On top of
//! that it implements structure constants, duality pairings, and the
//! pattern-map pullback to a Levi subgroup in three presentations
//! (localization, Schubert basis, and the type-A Borel presentation), with
//! cross-validation between them.

pub mod borel;
pub mod error;
pub mod gkm;
mod linalg;
pub mod pattern;
pub mod symbolic;
pub mod weyl;

pub use error::{Error, Result};
