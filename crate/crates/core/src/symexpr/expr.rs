//! Canonical polynomial expressions over an open set of atoms.
//!
//! An [`Expr`] is a finite sum of monomials with nonzero coefficients, kept
//! canonical at all times:
//!
//! - terms live in an ordered map keyed by monomial, so equal values have
//!   equal representations and iteration order is deterministic;
//! - monomials hold each atom once, sorted, with nonzero integer exponents
//!   (negative exponents arise only for single atoms, e.g. from the
//!   derivative of `ln`);
//! - function atoms are simplified by a fixed rewrite table on construction:
//!   `sin(0) -> 0`, `cos(0) -> 1`, `exp(0) -> 1`, and any `sin(a)^k` with
//!   `k >= 2` is rewritten through `sin(a)^2 -> 1 - cos(a)^2`.
//!
//! Equality of canonical forms decides zero-ness exactly on the polynomial
//! fragment; the rewrite table extends that to the trigonometric identities
//! the engine promises, no further.

use super::{Atom, FuncName};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, Rational, Variable};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// A product of atom powers, sorted by atom, exponents nonzero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V: Variable, C: Coeff = Rational> {
    factors: Vec<(Atom<V, C>, i32)>,
}

impl<V: Variable, C: Coeff> Monomial<V, C> {
    /// The empty product.
    pub fn unit() -> Self {
        Monomial { factors: Vec::new() }
    }

    /// Builds a monomial from arbitrary factors: sorts, merges repeated
    /// atoms, and drops factors whose exponents cancel to zero.
    pub fn from_factors(mut factors: Vec<(Atom<V, C>, i32)>) -> Self {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Atom<V, C>, i32)> = Vec::with_capacity(factors.len());
        for (atom, exp) in factors {
            match merged.last_mut() {
                Some((last, e)) if *last == atom => *e += exp,
                _ => merged.push((atom, exp)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        Monomial { factors: merged }
    }

    /// The sorted factors of this monomial.
    pub fn factors(&self) -> &[(Atom<V, C>, i32)] {
        &self.factors
    }

    /// True for the empty product.
    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of two monomials.
    fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Monomial::from_factors(factors)
    }
}

/// A canonical polynomial in atoms over the scalar `C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr<V: Variable, C: Coeff = Rational> {
    terms: BTreeMap<Monomial<V, C>, C>,
}

impl<V: Variable, C: Coeff> Expr<V, C> {
    /// The zero expression (no terms).
    pub fn zero() -> Self {
        Expr { terms: BTreeMap::new() }
    }

    /// The unit expression.
    pub fn one() -> Self {
        Expr::constant(C::one())
    }

    /// A constant expression.
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Expr { terms }
    }

    /// A constant expression from a machine integer.
    pub fn int(n: i64) -> Self {
        Expr::constant(C::from_int(n))
    }

    /// The expression consisting of a single coordinate.
    pub fn coordinate(v: V) -> Self {
        Expr::from_monomial(Monomial::from_factors(vec![(Atom::Coord(v), 1)]), C::one())
    }

    /// Applies a function head to an argument, going through the rewrite
    /// table: `sin(0) -> 0`, `cos(0) -> 1`, `exp(0) -> 1`.
    pub fn func(name: FuncName, arg: Expr<V, C>) -> Self {
        if arg.is_zero() {
            match name {
                FuncName::Sin => return Expr::zero(),
                FuncName::Cos | FuncName::Exp => return Expr::one(),
                // No rule applies to ln; keep the atom as written.
                FuncName::Ln => {}
            }
        }
        Expr::from_monomial(
            Monomial::from_factors(vec![(Atom::Func(name, Box::new(arg)), 1)]),
            C::one(),
        )
    }

    /// Single-monomial expression.
    pub fn from_monomial(mon: Monomial<V, C>, coeff: C) -> Self {
        Expr::from_terms([(mon, coeff)])
    }

    /// Sums arbitrary `(monomial, coefficient)` pairs into canonical form.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V, C>, C)>) -> Self {
        let mut map = BTreeMap::new();
        for (mon, coeff) in terms {
            insert_term(&mut map, mon, coeff);
        }
        Expr { terms: map }
    }

    /// Iterates terms in canonical monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V, C>, &C)> {
        self.terms.iter()
    }

    /// Number of terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// True iff this is the canonical zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the canonical one.
    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value of a constant expression, `None` if any atom occurs.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (mon, c) = self.terms.iter().next().expect("one term");
                mon.is_unit().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Integer power. `pow_int(e, 0) = 1` for every `e`. Negative powers
    /// exist only for nonzero single-term expressions, whose inverse is
    /// again a single term.
    pub fn pow_int(&self, k: i32) -> Result<Self> {
        if k == 0 {
            return Ok(Expr::one());
        }
        if k > 0 {
            return Ok(self.pow_uint(k as u32));
        }
        if self.terms.len() != 1 {
            return Err(Error::NegativePower);
        }
        let (mon, coeff) = self.terms.iter().next().expect("one term");
        let inv = C::one() / coeff.clone();
        let mut c = C::one();
        for _ in 0..k.unsigned_abs() {
            c = c * inv.clone();
        }
        let factors = mon
            .factors
            .iter()
            .map(|(a, e)| (a.clone(), e * k))
            .collect();
        Ok(Expr::from_monomial(Monomial::from_factors(factors), c))
    }

    /// Nonnegative integer power by repeated multiplication.
    pub fn pow_uint(&self, k: u32) -> Self {
        let mut acc = Expr::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Calls `f` on every coordinate the expression mentions, including
    /// coordinates buried inside function arguments.
    pub fn for_each_coordinate(&self, f: &mut impl FnMut(&V)) {
        for mon in self.terms.keys() {
            for (atom, _) in &mon.factors {
                atom.for_each_coordinate(f);
            }
        }
    }

    /// True iff the expression mentions `v` anywhere.
    pub fn depends_on(&self, v: &V) -> bool {
        let mut found = false;
        self.for_each_coordinate(&mut |w| found |= w == v);
        found
    }

    /// The first function atom in canonical order, if any: the expression is
    /// polynomial in its coordinates exactly when there is none.
    pub fn first_func_atom(&self) -> Option<&Atom<V, C>> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter())
            .map(|(a, _)| a)
            .find(|a| a.is_func())
    }

    /// Rebuilds the expression over another variable type, re-sorting
    /// monomials under the new atom order.
    pub fn map_vars<W: Variable>(&self, f: &impl Fn(&V) -> W) -> Expr<W, C> {
        Expr::from_terms(self.terms.iter().map(|(mon, c)| {
            let factors = mon
                .factors
                .iter()
                .map(|(atom, e)| (map_atom(atom, f), *e))
                .collect();
            (Monomial::from_factors(factors), c.clone())
        }))
    }

    /// Renders the canonical form with `name` supplying coordinate names.
    ///
    /// The output re-parses to the same canonical form under the expression
    /// grammar: the only subtlety is a leading minus directly before a
    /// powered factor, where the explicit coefficient `1` keeps the minus
    /// from binding inside the power.
    pub fn render_with(&self, name: &dyn Fn(&V) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (mon, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let guard_power = i == 0 && negative;
            out.push_str(&render_term(&coeff.abs(), mon, guard_power, name));
        }
        out
    }
}

/// One rendered term, sign already emitted by the caller.
fn render_term<V: Variable, C: Coeff>(
    magnitude: &C,
    mon: &Monomial<V, C>,
    guard_power: bool,
    name: &dyn Fn(&V) -> String,
) -> String {
    if mon.is_unit() {
        return magnitude.to_string();
    }
    let mut parts: Vec<String> = Vec::with_capacity(mon.factors.len() + 1);
    let leading_exponent = mon.factors[0].1;
    if !magnitude.is_one() || (guard_power && leading_exponent != 1) {
        parts.push(magnitude.to_string());
    }
    for (atom, exp) in &mon.factors {
        let base = match atom {
            Atom::Coord(v) => name(v),
            Atom::Func(f, arg) => format!("{}({})", f, arg.render_with(name)),
        };
        if *exp == 1 {
            parts.push(base);
        } else {
            parts.push(format!("{base}^{exp}"));
        }
    }
    parts.join("*")
}

fn map_atom<V: Variable, W: Variable, C: Coeff>(
    atom: &Atom<V, C>,
    f: &impl Fn(&V) -> W,
) -> Atom<W, C> {
    match atom {
        Atom::Coord(v) => Atom::Coord(f(v)),
        Atom::Func(head, arg) => Atom::Func(*head, Box::new(arg.map_vars(f))),
    }
}

/// Adds one term into an accumulating canonical map, applying the
/// `sin(a)^2 -> 1 - cos(a)^2` rewrite until no squared sine remains.
fn insert_term<V: Variable, C: Coeff>(
    map: &mut BTreeMap<Monomial<V, C>, C>,
    mon: Monomial<V, C>,
    coeff: C,
) {
    if coeff.is_zero() {
        return;
    }
    let squared_sin = mon
        .factors
        .iter()
        .position(|(a, e)| *e >= 2 && matches!(a, Atom::Func(FuncName::Sin, _)));
    if let Some(idx) = squared_sin {
        let (atom, exp) = mon.factors[idx].clone();
        let arg = match &atom {
            Atom::Func(FuncName::Sin, arg) => (**arg).clone(),
            _ => unreachable!("position matched a sine atom"),
        };
        let mut rest = mon.factors.clone();
        rest.remove(idx);
        if exp % 2 == 1 {
            rest.push((atom, 1));
        }
        let rest = Expr::from_monomial(Monomial::from_factors(rest), coeff);
        let one_minus_cos_sq = &Expr::one() - &Expr::func(FuncName::Cos, arg).pow_uint(2);
        let replacement = &rest * &one_minus_cos_sq.pow_uint((exp / 2) as u32);
        for (m, c) in replacement.terms {
            // Already canonical: no squared sine can survive the recursion.
            accumulate(map, m, c);
        }
    } else {
        accumulate(map, mon, coeff);
    }
}

/// Plain coefficient accumulation with zero-scrubbing.
fn accumulate<V: Variable, C: Coeff>(
    map: &mut BTreeMap<Monomial<V, C>, C>,
    mon: Monomial<V, C>,
    coeff: C,
) {
    use std::collections::btree_map::Entry;
    match map.entry(mon) {
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
        Entry::Occupied(mut slot) => {
            let sum = slot.get().clone() + coeff;
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

impl<V: Variable, C: Coeff> Add for &Expr<V, C> {
    type Output = Expr<V, C>;
    fn add(self, rhs: Self) -> Expr<V, C> {
        let mut terms = self.terms.clone();
        for (mon, coeff) in &rhs.terms {
            insert_term(&mut terms, mon.clone(), coeff.clone());
        }
        Expr { terms }
    }
}

impl<V: Variable, C: Coeff> Sub for &Expr<V, C> {
    type Output = Expr<V, C>;
    fn sub(self, rhs: Self) -> Expr<V, C> {
        let mut terms = self.terms.clone();
        for (mon, coeff) in &rhs.terms {
            insert_term(&mut terms, mon.clone(), coeff.clone().neg());
        }
        Expr { terms }
    }
}

impl<V: Variable, C: Coeff> Mul for &Expr<V, C> {
    type Output = Expr<V, C>;
    fn mul(self, rhs: Self) -> Expr<V, C> {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                insert_term(&mut terms, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Expr { terms }
    }
}

impl<V: Variable, C: Coeff> Neg for &Expr<V, C> {
    type Output = Expr<V, C>;
    fn neg(self) -> Expr<V, C> {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone().neg()))
                .collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl<V: Variable, C: Coeff> $trait for Expr<V, C> {
            type Output = Expr<V, C>;
            fn $method(self, rhs: Self) -> Expr<V, C> {
                $trait::$method(&self, &rhs)
            }
        }
        impl<V: Variable, C: Coeff> $trait<&Expr<V, C>> for Expr<V, C> {
            type Output = Expr<V, C>;
            fn $method(self, rhs: &Expr<V, C>) -> Expr<V, C> {
                $trait::$method(&self, rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<V: Variable, C: Coeff> Neg for Expr<V, C> {
    type Output = Expr<V, C>;
    fn neg(self) -> Expr<V, C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    type E = Expr<&'static str>;

    fn x() -> E {
        E::coordinate("x")
    }
    fn y() -> E {
        E::coordinate("y")
    }
    fn render(e: &E) -> String {
        e.render_with(&|v| v.to_string())
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        assert_eq!(&x() + &x(), x().scale(&ratio(2, 1)));
        assert!((&x() - &x()).is_zero());
        assert_eq!((&x() - &x()).n_terms(), 0);
    }

    #[test]
    fn binomial_square_expands() {
        let e = (&x() + &E::one()).pow_int(2).unwrap();
        let expected = &(&x() * &x()) + &(&x().scale(&ratio(2, 1)) + &E::one());
        assert_eq!(e, expected);
        assert_eq!(render(&e), "1 + 2*x + x^2");
    }

    #[test]
    fn pow_zero_is_one_even_for_zero_base() {
        assert!(E::zero().pow_int(0).unwrap().is_one());
        assert!(x().pow_int(0).unwrap().is_one());
    }

    #[test]
    fn negative_power_needs_single_term() {
        let inv = x().scale(&ratio(2, 1)).pow_int(-1).unwrap();
        assert_eq!(render(&inv), "1/2*x^-1");
        assert_eq!(&inv * &x().scale(&ratio(2, 1)), E::one());
        assert_eq!((&x() + &y()).pow_int(-1), Err(Error::NegativePower));
        assert_eq!(E::zero().pow_int(-2), Err(Error::NegativePower));
    }

    #[test]
    fn rewrite_table_collapses_special_points() {
        assert!(E::func(FuncName::Sin, E::zero()).is_zero());
        assert!(E::func(FuncName::Cos, E::zero()).is_one());
        assert!(E::func(FuncName::Exp, E::zero()).is_one());
        // ln has no entry in the table.
        assert_eq!(E::func(FuncName::Ln, E::zero()).n_terms(), 1);
    }

    #[test]
    fn pythagorean_identity_cancels_to_zero() {
        let sin = E::func(FuncName::Sin, x());
        let cos = E::func(FuncName::Cos, x());
        let e = &(&(&sin * &sin) + &(&cos * &cos)) - &E::one();
        assert!(e.is_zero());
    }

    #[test]
    fn odd_sine_powers_keep_one_sine() {
        let sin = E::func(FuncName::Sin, x());
        let cubed = sin.pow_int(3).unwrap();
        // sin^3 = sin - sin*cos^2
        let cos = E::func(FuncName::Cos, x());
        let expected = &sin - &(&sin * &(&cos * &cos));
        assert_eq!(cubed, expected);
    }

    #[test]
    fn constants_are_recognised() {
        assert_eq!(E::zero().as_constant(), Some(ratio(0, 1)));
        assert_eq!(E::int(-7).as_constant(), Some(ratio(-7, 1)));
        assert_eq!(x().as_constant(), None);
    }

    #[test]
    fn render_orders_terms_and_guards_leading_powers() {
        let e = &(&x() * &x()) - &y();
        // x^2 sorts before y: coordinates order by V.
        assert_eq!(render(&e), "x^2 - y");
        let minus_x_sq = -&(&x() * &x());
        // A bare "-x^2" would re-parse as (-x)^2; the explicit 1 prevents it.
        assert_eq!(render(&minus_x_sq), "-1*x^2");
        assert_eq!(render(&-&(&x() * &y())), "-x*y");
        assert_eq!(render(&E::zero()), "0");
        assert_eq!(render(&E::constant(ratio(-1, 2))), "-1/2");
    }

    #[test]
    fn function_atoms_order_by_head_then_argument() {
        let sin_x = E::func(FuncName::Sin, x());
        let cos_x = E::func(FuncName::Cos, x());
        let e = &sin_x + &cos_x;
        assert_eq!(render(&e), "cos(x) + sin(x)");
    }

    #[test]
    fn map_vars_resorts_monomials() {
        let e = &(&x() * &y()) + &x();
        let swapped = e.map_vars(&|v| if *v == "x" { "y" } else { "x" });
        assert_eq!(swapped.render_with(&|v| v.to_string()), "x*y + y");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_expr() -> impl Strategy<Value = E> {
            let atom = prop_oneof![
                Just(x()),
                Just(y()),
                Just(E::coordinate("z")),
                Just(E::func(FuncName::Sin, x())),
                Just(E::func(FuncName::Cos, y())),
            ];
            let term = (atom, -4i64..=4, 1u32..=2).prop_map(|(a, c, k)| {
                a.pow_int(k as i32).unwrap().scale(&ratio(c, 1))
            });
            prop::collection::vec(term, 0..4)
                .prop_map(|ts| ts.into_iter().fold(E::zero(), |acc, t| &acc + &t))
        }

        proptest! {
            #[test]
            fn ring_axioms(a in small_expr(), b in small_expr(), c in small_expr()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert!((&a - &a).is_zero());
                prop_assert_eq!(&a * &E::one(), a.clone());
                prop_assert!((&a * &E::zero()).is_zero());
            }

            #[test]
            fn canonical_form_is_stable(a in small_expr()) {
                let rebuilt = E::from_terms(a.terms().map(|(m, c)| (m.clone(), c.clone())));
                prop_assert_eq!(rebuilt, a);
            }
        }
    }
}
