//! Coordinate machinery for lifting tensor fields and symmetric connections
//! from a manifold to its (0,q)-tensor bundle along cross-sections.
//!
//! Everything works in a single chart. Field components are symbolic
//! [`expr::ScalarExpr`] trees, differentiated exactly; bundle-level objects
//! (adapted frames, lifted endomorphisms, lifted connection coefficients) are
//! assembled numerically at sample points. Identities are decided by
//! sampled residuals against fixed tolerances.
//!
//! Index conventions: all indices are zero-based in the API. Multi-indices
//! of covariant fields are flattened row-major (see [`tensor::MultiIndex`]).
//! Endomorphism components are `phi[i][j] = φ^i_j`, connection components
//! are `gamma[h][j][i] = Γ^h_{ji}` and curvature components are
//! `R[k][j][i][l] = R_{kji}^l`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bundle;
pub mod connection_lift;
pub mod error;
pub mod expr;
pub mod matrix;
pub mod sample;
pub mod tensor;

pub use error::{Error, Result};
pub use expr::{parse, EvalPoint, ScalarExpr};
