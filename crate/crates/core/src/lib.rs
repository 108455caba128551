//! A toolkit for extremal combinatorics of uniform hypergraphs, built around
//! the hypergraph Lagrangian.
//!
//! The crate provides:
//!
//! * a compact [`Hypergraph`] type with parsing, serialization, restriction,
//!   generation, blow-ups and links ([`hypergraph`], [`io`]);
//! * a catalog of named families (complete graphs, the Fano plane, stars,
//!   pair-generated families, five-part Turán constructions, ...) together
//!   with exact edge-count formulas ([`families`]);
//! * a certified multistart maximizer for the Lagrangian
//!   `λ(G) = max { Σ_e Π_{i∈e} x_i : x ≥ 0, Σ x_i = 1 }`, plus the standard
//!   weight-shuffling lemmas (symmetric averaging, link domination)
//!   ([`lagrangian`]);
//! * compression ("shifting") of intersecting set families and its structural
//!   invariants ([`shifting`]);
//! * an isomorph-free census of maximal intersecting 3-graphs on small ground
//!   sets with per-record Lagrangian certificates ([`classify`]);
//! * a desk-scale simulator for the cleaning / merging symmetrization process
//!   on partitioned 3-graphs, with a full invariant audit ([`symmetrize`]);
//! * a verification suite wiring all of the above into named checks
//!   ([`verify`]).
//!
//! Numeric kernels are generic over the scalar type via [`scalar::Real`]
//! (any `num-traits` float; `f32` and `f64` both work), and polynomial
//! evaluation is additionally available over exact rationals. The aliases
//! below fix the concrete `f64` instantiations used by the CLI and tests.

pub mod canon;
pub mod classify;
pub mod families;
pub mod hom;
pub mod hypergraph;
pub mod io;
pub mod lagrangian;
pub mod scalar;
pub mod shifting;
pub mod symmetrize;
pub mod verify;

pub use hypergraph::{Hypergraph, Partition, SetFamily};

/// Default floating-point scalar for optimizer work.
pub type Weight = f64;

/// Weight vector on the probability simplex over the `f64` scalar.
pub type WeightVector = lagrangian::Weights<f64>;

/// Result of a Lagrangian maximization over the `f64` scalar.
pub type Maximum = lagrangian::Maximum<f64>;

/// Options controlling a Lagrangian maximization over the `f64` scalar.
pub type MaximizeOptions = lagrangian::Options;

/// Exact rational scalar used for closed-form certificates.
pub type Rational = num_rational::BigRational;
