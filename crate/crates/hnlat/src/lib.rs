//! Exact arithmetic for hermitian lattices over the integers.
//!
//! A hermitian lattice here is `Z^n` together with a positive definite
//! rational Gram matrix on its rational span. The crate provides:
//!
//! - exact rational/integer linear algebra (fraction-free determinants,
//!   Hermite and Smith normal forms, kernels, saturation) in [`linalg`],
//! - the metric calculus on Gram matrices (restriction, quotient, dual,
//!   tensor and wedge metrics, exact domination tests) in [`herm`],
//! - arithmetic degrees and slopes of sublattices in exponential encoding,
//!   without floating point, in [`lattice`],
//! - complete enumeration of saturated sublattices of degree at least a
//!   given rational threshold, via branch-and-bound short-vector search in
//!   wedge coordinates and Pluecker recovery, in [`enumeration`],
//! - the canonical slope filtration (maximal destabilizing chains with
//!   strictly decreasing slopes and semistable quotients) in [`hn`],
//! - independent brute-force reference implementations in [`oracle`],
//! - deterministic test corpora and the cross-check property suite in
//!   [`corpus`] and [`checks`].
//!
//! Every mathematical comparison in this crate is exact; floating point
//! appears only in clearly-labeled advisory log approximations.

pub mod checks;
pub mod combi;
pub mod corpus;
pub mod enumeration;
pub mod error;
pub mod herm;
pub mod hn;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod rat;

pub use error::{Error, Result};
pub use rat::{Int, Rat};
