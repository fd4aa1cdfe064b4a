//! Exact arithmetic for composite number fields: integral bases, index form
//! factorizations and monogenity obstructions.
//!
//! The library works with five parametric families of composite fields built
//! from a quadratic field and a cubic/quartic/sextic partner field (degrees 6,
//! 8 and 12). All arithmetic is exact: coefficients are arbitrary-precision
//! rationals, divisibility statements are checked coefficient-wise over the
//! integers, and every randomized check is driven by an explicit seed.
//!
//! Module map:
//! - [`tower`]: quotient rings `Q[x1..xk]/(r1(x1),..,rk(xk))`, characteristic
//!   polynomials, traces, inverses.
//! - [`mpoly`]: sparse multivariate polynomials with tower-element
//!   coefficients, plus content extraction.
//! - [`linalg`]: exact rational/integer linear algebra (Bareiss determinants,
//!   Hermite normal form, kernels mod p).
//! - [`families`]: the five field families, parameter validation, component
//!   bases, conjugate embeddings and the published residue-class tables.
//! - [`order`]: maximal orders via p-enlargement and CRT combination of
//!   p-maximal orders.
//! - [`index_form`]: linear forms, factor products, contents, divisibility
//!   relations and the index oracle.
//! - [`symbolic`]: a per-residue-class symbolic expansion engine used to make
//!   large degree-12 parameter scans affordable.
//! - [`monogenity`]: verdicts, table cross-checks and corollary scans.

pub mod expand;
pub mod families;
pub mod index_form;
pub mod linalg;
pub mod monogenity;
pub mod mpoly;
pub mod num_util;
pub mod order;
pub mod report;
pub mod symbolic;
pub mod tower;

/// Exact scalar used everywhere in the core: arbitrary-precision rational.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

pub use tower::{TowerElement, TowerSpec, UniPoly};
