//! Exponential graphs, neighborhood and Hom complexes, discrete Morse theory
//! and homology over the two-element field.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`]: finite graphs with loops, products, exponential graphs, folds;
//! * [`hom`]: cells of `Hom(G, H)` and the order complex of their face poset;
//! * [`simplicial`]: facet-based complexes, neighborhood complexes, collapses
//!   and the collapsed complex `Δ` of the core of `K_{n+1}^{K_n}`;
//! * [`homology`]: bit-packed matrices, ranks and Betti numbers;
//! * [`morse`]: face posets, matchings, acyclicity and Morse boundaries;
//! * [`pipeline`]: the explicit matching on `Δ` and the resulting homology reports.

pub mod error;
pub mod graph;
pub mod hom;
pub mod homology;
pub mod morse;
pub mod pipeline;
pub mod simplicial;

pub use error::{Error, Result};
