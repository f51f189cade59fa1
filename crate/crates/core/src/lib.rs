//! Exact symbolic calculus of variations on first-order jet bundles.
//!
//! The crate computes Euler-Lagrange operators, prolongs vector fields to
//! jets, decomposes Lie derivatives of Lagrangians by the first variational
//! formula, recognises variationally trivial densities and reconstructs
//! their sources, and derives conservation laws whose validity is certified
//! by exact off-shell identities rather than floating-point checks.
//!
//! The expression engine is generic over the coefficient scalar through
//! [`scalar::Coeff`]; the aliases below pin the concrete instantiation used
//! by the geometry: exact arbitrary-precision rationals over jet-bundle
//! coordinates.

pub mod error;
pub mod jetspace;
pub mod noether;
pub mod sampling;
pub mod scalar;
pub mod symexpr;
pub mod symmetry;
pub mod variational;

pub use error::{Error, Result};
pub use scalar::Rational;

/// Expression over jet-bundle coordinates with rational coefficients.
pub type Expr = symexpr::Expr<jetspace::JetCoordinate, Rational>;

/// Atom of [`Expr`].
pub type Atom = symexpr::Atom<jetspace::JetCoordinate, Rational>;

/// Monomial of [`Expr`].
pub type Monomial = symexpr::Monomial<jetspace::JetCoordinate, Rational>;
