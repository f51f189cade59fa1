//! Exact multivariate expressions: polynomials over an ordered scalar in an
//! open-ended set of atoms (coordinates and elementary function
//! applications), with exact differentiation, substitution, and definite
//! parameter integration.

mod atom;
mod calculus;
mod expr;

pub use atom::{Atom, FuncName};
pub use expr::{Expr, Monomial};
