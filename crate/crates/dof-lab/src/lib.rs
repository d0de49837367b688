//! Degrees-of-freedom bounds for MIMO interference networks.
//!
//! The crate mechanizes a family of converse and achievability arguments for
//! the K-user MIMO interference channel and its relatives (many-to-one
//! networks, the MIMO X channel):
//!
//! * [`linalg`] — dense rank/null-space over exact rationals and
//!   tolerance-checked floats;
//! * [`subspace`] — span, orthogonal complement, intersection, set-minus and
//!   generic subspace generation;
//! * [`multilook`] — greedy packing of ordered subspaces into complete
//!   full-dimensional sets;
//! * [`network`] — generic and structured channel realizations;
//! * [`genie`] — exposed-subspace resolution, genie acceptability, symbolic
//!   entropy ledgers and the DoF bound they telescope to;
//! * [`scripts`] — the built-in chain scripts and the two regime algorithms;
//! * [`certify`] — exact full-rank certificates on structured 0/1 channels;
//! * [`dof`] — closed-form bounds, regime classification, proof status;
//! * [`align`] — null-space precoder designs and alignment verification;
//! * [`cli`] — the `dof-lab` command-line front end.
//!
//! Start with the runnable examples (`cargo run --example subspace_calculus`
//! and friends); each one walks a single capability end to end.

pub mod align;
pub mod certify;
pub mod cli;
pub mod dof;
pub mod genie;
pub mod linalg;
pub mod multilook;
pub mod network;
pub mod rng;
pub mod scripts;
pub mod subspace;

pub use linalg::{Backend, Mat};
pub use subspace::Subspace;
