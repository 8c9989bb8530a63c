//! Exact computations around quasi-lines: lattices and Smith forms, simplicial
//! fans and their resolutions, toric divisors and section counts, splitting
//! types of bundles on the projective line, lines on cubic threefolds, and a
//! propagation engine for the birational invariants of a model.

pub mod bundle;
pub mod cubic;
pub mod divisor;
pub mod fan;
pub mod lattice;
pub mod models;
pub mod poly;
pub mod rng;

pub use lattice::{IntMatrix, IntVector, Rational};
