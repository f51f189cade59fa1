//! Scalar and variable bounds for the expression engine.
//!
//! The engine is generic over its coefficient ring so the same code drives
//! any exact scalar with a total order; the crate root pins the alias used
//! everywhere else to arbitrary-precision rationals.

use num_traits::{FromPrimitive, Signed};
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Exact coefficient scalar: an ordered signed field with integer embedding.
///
/// The `Ord` bound is load-bearing: canonical forms are sorted maps and the
/// atom order compares function arguments, so coefficients must be totally
/// ordered. Floating-point types are excluded on purpose — every identity in
/// this crate is certified by exact equality of canonical forms.
pub trait Coeff: Clone + Ord + Hash + Debug + Display + Signed + FromPrimitive {
    /// Embeds a machine integer, which every admissible scalar can represent.
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("coefficient scalar must embed i64")
    }
}

impl<T> Coeff for T where T: Clone + Ord + Hash + Debug + Display + Signed + FromPrimitive {}

/// Variable identity used in atoms: any totally ordered, cloneable key.
///
/// The order of `V` decides the canonical atom order inside monomials and
/// therefore the printed term order.
pub trait Variable: Clone + Ord + Hash + Debug {}

impl<T> Variable for T where T: Clone + Ord + Hash + Debug {}

/// Exact rational scalar used by the concrete aliases at the crate root.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair, reduced on construction.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Parses a decimal digit string of any length into a rational integer.
pub fn integer(digits: &str) -> Option<Rational> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n = num_bigint::BigInt::parse_bytes(digits.as_bytes(), 10)?;
    Some(Rational::from_integer(n))
}
