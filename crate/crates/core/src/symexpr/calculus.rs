//! Differentiation, substitution, and definite parameter integration.

use super::{Atom, Expr, FuncName, Monomial};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, Variable};

impl<V: Variable, C: Coeff> Expr<V, C> {
    /// Partial derivative with respect to the coordinate `v`, treating all
    /// other coordinates as independent and differentiating through function
    /// atoms by the chain rule.
    ///
    /// Fails only when the chain rule for `ln` would need the reciprocal of
    /// a multi-term argument, which has no canonical form here.
    pub fn diff(&self, v: &V) -> Result<Self> {
        let mut out = Expr::zero();
        for (mon, coeff) in self.terms() {
            for (idx, (atom, exp)) in mon.factors().iter().enumerate() {
                let datom = diff_atom(atom, v)?;
                if datom.is_zero() {
                    continue;
                }
                // d(atom^k)/dv = k * atom^(k-1) * datom, times the rest.
                let mut rest: Vec<(Atom<V, C>, i32)> = mon
                    .factors()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != idx)
                    .map(|(_, f)| f.clone())
                    .collect();
                if exp - 1 != 0 {
                    rest.push((atom.clone(), exp - 1));
                }
                let scaled = Expr::from_monomial(
                    Monomial::from_factors(rest),
                    coeff.clone() * C::from_int(i64::from(*exp)),
                );
                out = &out + &(&scaled * &datom);
            }
        }
        Ok(out)
    }

    /// Replaces every occurrence of `target` (including occurrences inside
    /// function arguments) by `image`, re-canonicalising the result.
    ///
    /// A negative power of `target` requires `image` to be a single term,
    /// since only those have polynomial inverses.
    pub fn substitute(&self, target: &Atom<V, C>, image: &Expr<V, C>) -> Result<Self> {
        let mut out = Expr::zero();
        for (mon, coeff) in self.terms() {
            let mut acc = Expr::constant(coeff.clone());
            for (atom, exp) in mon.factors() {
                let factor = if atom == target {
                    image.pow_int(*exp)?
                } else {
                    match atom {
                        Atom::Coord(_) => Expr::from_monomial(
                            Monomial::from_factors(vec![(atom.clone(), *exp)]),
                            C::one(),
                        ),
                        Atom::Func(head, arg) => {
                            Expr::func(*head, arg.substitute(target, image)?).pow_int(*exp)?
                        }
                    }
                };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Definite integral over `v` from 0 to 1 of an expression polynomial
    /// in `v`: each `c * v^k * rest` becomes `c/(k+1) * rest`.
    pub fn integrate_unit(&self, v: &V) -> Result<Self> {
        let mut out = Expr::zero();
        for (mon, coeff) in self.terms() {
            let mut degree: i32 = 0;
            let mut rest: Vec<(Atom<V, C>, i32)> = Vec::with_capacity(mon.factors().len());
            for (atom, exp) in mon.factors() {
                match atom {
                    Atom::Coord(w) if w == v => degree = *exp,
                    Atom::Func(_, arg) if arg.depends_on(v) => {
                        return Err(Error::ParameterInsideFunction);
                    }
                    _ => rest.push((atom.clone(), *exp)),
                }
            }
            if degree < 0 {
                return Err(Error::NonPolynomialIntegrand);
            }
            let scaled = coeff.clone() / C::from_int(i64::from(degree) + 1);
            out = &out + &Expr::from_monomial(Monomial::from_factors(rest), scaled);
        }
        Ok(out)
    }
}

/// Derivative of a single atom with respect to `v`.
fn diff_atom<V: Variable, C: Coeff>(atom: &Atom<V, C>, v: &V) -> Result<Expr<V, C>> {
    match atom {
        Atom::Coord(w) => Ok(if w == v { Expr::one() } else { Expr::zero() }),
        Atom::Func(head, arg) => {
            let darg = arg.diff(v)?;
            if darg.is_zero() {
                return Ok(Expr::zero());
            }
            let outer = match head {
                FuncName::Sin => Expr::func(FuncName::Cos, (**arg).clone()),
                FuncName::Cos => -Expr::func(FuncName::Sin, (**arg).clone()),
                FuncName::Exp => Expr::func(FuncName::Exp, (**arg).clone()),
                FuncName::Ln => arg
                    .pow_int(-1)
                    .map_err(|_| Error::CompoundLogarithm)?,
            };
            Ok(&outer * &darg)
        }
    }
}
