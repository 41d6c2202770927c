//! Graph varieties `X(G, W)`: assignments of vectors to the vertices of a
//! graph such that adjacent vertices are orthogonal under a bilinear form.
//!
//! The crate provides exact linear algebra over ℚ and F_p, Jacobian-based
//! smoothness tests with singularity certificates, a sampler for the
//! regular locus of an ordered graph, finite-field point counts, and the
//! vertex-weighting constructions that split a graph into matchings.

pub mod algebra;
pub mod count;
pub mod error;
pub mod graph;
pub mod sampling;
pub mod splitting;
pub mod variety;

pub use error::{Error, Result};
