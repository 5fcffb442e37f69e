//! harmonia: pointwise numerical verification of harmonic sections and
//! harmonic maps for differential forms attached to G-structures on model
//! Riemannian manifolds.
//!
//! The crate layers as: exterior algebra ([`multilinear`]) and canonical
//! structure tensors ([`gstructures`]) over a finite-difference geometry
//! engine ([`manifold`]), the analysis operators ([`harmonic`]), a model
//! catalog with expected verdicts ([`models`]), independent cross-check
//! routes ([`oracle`]), and the named checks plus run driver ([`checks`],
//! [`report`]).

pub mod checks;
pub mod gstructures;
pub mod harmonic;
pub mod manifold;
pub mod models;
pub mod multilinear;
pub mod numerics;
pub mod oracle;
pub mod report;
