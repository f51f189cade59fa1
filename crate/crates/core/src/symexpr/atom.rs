//! Atoms: the indeterminates expressions are polynomial in.

use super::Expr;
use crate::scalar::{Coeff, Rational, Variable};
use std::fmt;

/// Elementary function heads admitted in function atoms.
///
/// Declared in alphabetical order so the derived order matches ordering by
/// printed name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncName {
    Cos,
    Exp,
    Ln,
    Sin,
}

impl FuncName {
    /// Printed (and parsed) name of the head.
    pub fn as_str(self) -> &'static str {
        match self {
            FuncName::Cos => "cos",
            FuncName::Exp => "exp",
            FuncName::Ln => "ln",
            FuncName::Sin => "sin",
        }
    }

    /// Inverse of [`FuncName::as_str`], for lexers.
    pub fn from_name(name: &str) -> Option<FuncName> {
        match name {
            "cos" => Some(FuncName::Cos),
            "exp" => Some(FuncName::Exp),
            "ln" => Some(FuncName::Ln),
            "sin" => Some(FuncName::Sin),
            _ => None,
        }
    }
}

impl fmt::Display for FuncName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single indeterminate: a coordinate, or an elementary function applied
/// to an expression that is itself in canonical form.
///
/// The derived order is the canonical atom order used inside monomials:
/// coordinates first, in the order of `V`, then function atoms ordered by
/// head name and canonical argument.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom<V: Variable, C: Coeff = Rational> {
    /// A coordinate of the underlying space.
    Coord(V),
    /// An elementary function of an expression, e.g. `sin(x + y)`.
    Func(FuncName, Box<Expr<V, C>>),
}

impl<V: Variable, C: Coeff> Atom<V, C> {
    /// The coordinate inside a `Coord` atom, if this is one.
    pub fn as_coord(&self) -> Option<&V> {
        match self {
            Atom::Coord(v) => Some(v),
            Atom::Func(..) => None,
        }
    }

    /// True for function atoms.
    pub fn is_func(&self) -> bool {
        matches!(self, Atom::Func(..))
    }

    /// Calls `f` on every coordinate mentioned by this atom, including the
    /// coordinates inside function arguments.
    pub fn for_each_coordinate(&self, f: &mut impl FnMut(&V)) {
        match self {
            Atom::Coord(v) => f(v),
            Atom::Func(_, arg) => arg.for_each_coordinate(f),
        }
    }
}
