//! Differential forms in adapted coordinates and the horizontal calculus.
//!
//! Forms are stored as maps from strictly increasing basis words to
//! coefficient expressions, over the one-form basis `dx^0..dx^{n-1},
//! dy^0..dy^{m-1}` (indices `0..n` then `n..n+m`). Any insertion is
//! sign-normalised, so equal forms have equal representations.

use super::chart::{jet_order, BundleChart, JetCoordinate};
use super::total_derivative;
use crate::error::{Error, Result};
use crate::symmetry::ProjectableVectorField;
use crate::Expr;
use itertools::Itertools;
use std::collections::BTreeMap;

/// Shared alternating-algebra core: a degree and sorted basis words.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Alternating {
    degree: usize,
    terms: BTreeMap<Vec<usize>, Expr>,
}

impl Alternating {
    fn zero(degree: usize) -> Self {
        Alternating {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `coeff * e^word`, sorting the word and tracking the permutation
    /// sign; words with a repeated index vanish.
    fn insert(&mut self, mut word: Vec<usize>, coeff: Expr) {
        debug_assert_eq!(word.len(), self.degree);
        if coeff.is_zero() {
            return;
        }
        // Insertion sort, counting transpositions for the sign.
        let mut swaps = 0usize;
        for i in 1..word.len() {
            let mut j = i;
            while j > 0 && word[j - 1] > word[j] {
                word.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if word.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let signed = if swaps % 2 == 1 { -coeff } else { coeff };
        let entry = self.terms.entry(word).or_insert_with(Expr::zero);
        *entry = &*entry + &signed;
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn wedge(&self, rhs: &Alternating) -> Alternating {
        let mut out = Alternating::zero(self.degree + rhs.degree);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut word = wa.clone();
                word.extend_from_slice(wb);
                out.insert(word, ca * cb);
            }
        }
        out
    }

    /// Interior product against a vector with component `value(idx)` along
    /// the `idx`-th basis direction.
    fn contract(&self, value: &dyn Fn(usize) -> Expr) -> Alternating {
        let mut out = Alternating::zero(self.degree - 1);
        for (word, coeff) in &self.terms {
            for (k, idx) in word.iter().enumerate() {
                let comp = value(*idx);
                if comp.is_zero() {
                    continue;
                }
                let mut rest = word.clone();
                rest.remove(k);
                let signed = if k % 2 == 1 { -(coeff * &comp) } else { coeff * &comp };
                out.insert(rest, signed);
            }
        }
        out
    }

    /// Replaces each `dy^i` by `y^i_lam dx^lam` and expands, leaving a form
    /// with pure `dx` words. Words are stored with all `dx` indices before
    /// all `dy` indices, so the substitution appends at the tail.
    fn horizontalize(&self, n: usize) -> Alternating {
        let mut out = Alternating::zero(self.degree);
        for (word, coeff) in &self.terms {
            let split = word.partition_point(|&idx| idx < n);
            let (dx_part, dy_part) = word.split_at(split);
            if dy_part.is_empty() {
                out.insert(word.clone(), coeff.clone());
                continue;
            }
            let fields: Vec<usize> = dy_part.iter().map(|&idx| idx - n).collect();
            for lams in fields.iter().map(|_| 0..n).multi_cartesian_product() {
                let mut velocity = coeff.clone();
                for (field, lam) in fields.iter().zip(&lams) {
                    velocity = &velocity
                        * &Expr::coordinate(JetCoordinate::Jet1 {
                            field: *field,
                            deriv: *lam,
                        });
                }
                let mut new_word = dx_part.to_vec();
                new_word.extend_from_slice(&lams);
                out.insert(new_word, velocity);
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Checks degree and index bounds shared by both form types.
fn check_term(
    chart: &BundleChart,
    degree: usize,
    word: &[usize],
    coeff: &Expr,
    max_jet: u8,
    context: &'static str,
) -> Result<()> {
    if word.len() != degree {
        return Err(Error::DegreeOutOfRange {
            op: context,
            degree: word.len(),
            expected: degree.to_string(),
        });
    }
    let dim = chart.base_dim() + chart.fibre_dim();
    for &idx in word {
        if idx >= dim {
            return Err(Error::IndexOutOfRange {
                axis: "one-form basis",
                index: idx,
                dim,
            });
        }
    }
    chart.check_expr(coeff)?;
    let order = jet_order(coeff);
    if order > max_jet {
        return Err(Error::JetOrder {
            found: order,
            limit: max_jet,
            context,
        });
    }
    Ok(())
}

/// An exterior form pulled back from the total space: coefficients depend
/// only on base and fibre coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormOnY {
    chart: BundleChart,
    alt: Alternating,
}

impl FormOnY {
    /// The zero form of the given degree.
    pub fn zero(chart: BundleChart, degree: usize) -> Result<Self> {
        let top = chart.base_dim() + chart.fibre_dim();
        if degree > top {
            return Err(Error::DegreeOutOfRange {
                op: "form on Y",
                degree,
                expected: format!("0..={top}"),
            });
        }
        Ok(FormOnY {
            chart,
            alt: Alternating::zero(degree),
        })
    }

    /// Adds `coeff * e^word`; the word may be in any order.
    pub fn add_term(&mut self, word: &[usize], coeff: Expr) -> Result<()> {
        check_term(&self.chart, self.degree(), word, &coeff, 0, "form on Y")?;
        self.alt.insert(word.to_vec(), coeff);
        Ok(())
    }

    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.alt.degree
    }

    pub fn is_zero(&self) -> bool {
        self.alt.is_zero()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.alt.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    /// Exterior derivative: `d(c e^J) = dc / dz^b e^b ^ e^J` over all base
    /// and fibre coordinates `z^b`.
    pub fn exterior_derivative(&self) -> Result<FormOnY> {
        let (n, m) = (self.chart.base_dim(), self.chart.fibre_dim());
        let mut out = Alternating::zero(self.degree() + 1);
        for (word, coeff) in &self.alt.terms {
            for b in 0..n + m {
                let z = if b < n {
                    JetCoordinate::Base(b)
                } else {
                    JetCoordinate::Fibre(b - n)
                };
                let partial = coeff.diff(&z)?;
                if partial.is_zero() {
                    continue;
                }
                let mut new_word = Vec::with_capacity(word.len() + 1);
                new_word.push(b);
                new_word.extend_from_slice(word);
                out.insert(new_word, partial);
            }
        }
        Ok(FormOnY {
            chart: self.chart.clone(),
            alt: out,
        })
    }

    /// Wedge product of two forms over the same chart.
    pub fn wedge(&self, rhs: &FormOnY) -> Result<FormOnY> {
        self.chart.require_same(&rhs.chart)?;
        Ok(FormOnY {
            chart: self.chart.clone(),
            alt: self.alt.wedge(&rhs.alt),
        })
    }

    /// Interior product with a projectable vector field.
    pub fn interior_product(&self, u: &ProjectableVectorField) -> Result<FormOnY> {
        self.chart.require_same(u.chart())?;
        if self.degree() == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "interior product",
                degree: 0,
                expected: ">= 1".to_string(),
            });
        }
        let n = self.chart.base_dim();
        let alt = self.alt.contract(&|idx| {
            if idx < n {
                u.base_component(idx).clone()
            } else {
                u.fibre_component(idx - n).clone()
            }
        });
        Ok(FormOnY {
            chart: self.chart.clone(),
            alt,
        })
    }

    /// Views this form as semibasic (the inclusion is coefficient-wise).
    pub fn to_semibasic(&self) -> SemibasicForm {
        SemibasicForm {
            chart: self.chart.clone(),
            alt: self.alt.clone(),
        }
    }

    /// Horizontal projection; defined for degrees `n-1` and `n`.
    pub fn horizontalize(&self) -> Result<HorizontalForm> {
        self.to_semibasic().horizontalize()
    }
}

/// A form over the first jet space spanned by `dx^lam, dy^i` only, with
/// coefficients of jet order at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemibasicForm {
    chart: BundleChart,
    alt: Alternating,
}

impl SemibasicForm {
    /// The zero semibasic form of the given degree.
    pub fn zero(chart: BundleChart, degree: usize) -> Result<Self> {
        let top = chart.base_dim() + chart.fibre_dim();
        if degree > top {
            return Err(Error::DegreeOutOfRange {
                op: "semibasic form",
                degree,
                expected: format!("0..={top}"),
            });
        }
        Ok(SemibasicForm {
            chart,
            alt: Alternating::zero(degree),
        })
    }

    /// Adds `coeff * e^word`; the word may be in any order.
    pub fn add_term(&mut self, word: &[usize], coeff: Expr) -> Result<()> {
        check_term(&self.chart, self.degree(), word, &coeff, 1, "semibasic form")?;
        self.alt.insert(word.to_vec(), coeff);
        Ok(())
    }

    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.alt.degree
    }

    pub fn is_zero(&self) -> bool {
        self.alt.is_zero()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Expr)> {
        self.alt.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    /// Interior product with a projectable vector field.
    pub fn interior_product(&self, u: &ProjectableVectorField) -> Result<SemibasicForm> {
        self.chart.require_same(u.chart())?;
        if self.degree() == 0 {
            return Err(Error::DegreeOutOfRange {
                op: "interior product",
                degree: 0,
                expected: ">= 1".to_string(),
            });
        }
        let n = self.chart.base_dim();
        let alt = self.alt.contract(&|idx| {
            if idx < n {
                u.base_component(idx).clone()
            } else {
                u.fibre_component(idx - n).clone()
            }
        });
        Ok(SemibasicForm {
            chart: self.chart.clone(),
            alt,
        })
    }

    /// Horizontal projection `dy^i -> y^i_lam dx^lam`, read off against the
    /// volume form `omega` (degree `n`) or the contracted volume forms
    /// `omega_lam` (degree `n-1`).
    pub fn horizontalize(&self) -> Result<HorizontalForm> {
        let n = self.chart.base_dim();
        let p = self.degree();
        if p != n && p + 1 != n {
            return Err(Error::DegreeOutOfRange {
                op: "horizontalize",
                degree: p,
                expected: format!("{} or {}", n.saturating_sub(1), n),
            });
        }
        let horizontal = self.alt.horizontalize(n);
        if p == n {
            // Single surviving word: dx^0 ^ .. ^ dx^{n-1}.
            let volume: Vec<usize> = (0..n).collect();
            let coeff = horizontal
                .terms
                .get(&volume)
                .cloned()
                .unwrap_or_else(Expr::zero);
            Ok(HorizontalForm::Density {
                chart: self.chart.clone(),
                coeff,
            })
        } else {
            // Word missing dx^lam pairs with omega_lam = (-1)^lam dx^{..no lam..}.
            let mut comps = vec![Expr::zero(); n];
            for (word, coeff) in &horizontal.terms {
                let lam = (0..n)
                    .find(|l| !word.contains(l))
                    .expect("degree n-1 word omits one base index");
                comps[lam] = if lam % 2 == 1 { -coeff } else { coeff.clone() };
            }
            Ok(HorizontalForm::Current {
                chart: self.chart.clone(),
                comps,
            })
        }
    }
}

/// A horizontal form spanned by the base volume form or its contractions:
/// a density `c * omega` (degree `n`) or a current `S^lam omega_lam`
/// (degree `n-1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HorizontalForm {
    /// `coeff * omega`.
    Density { chart: BundleChart, coeff: Expr },
    /// `comps[lam] * omega_lam`.
    Current { chart: BundleChart, comps: Vec<Expr> },
}

impl HorizontalForm {
    /// A density from its coefficient.
    pub fn density(chart: BundleChart, coeff: Expr) -> Self {
        HorizontalForm::Density { chart, coeff }
    }

    /// A current from its components; the length must match the base
    /// dimension.
    pub fn current(chart: BundleChart, comps: Vec<Expr>) -> Self {
        assert_eq!(comps.len(), chart.base_dim(), "one component per base coordinate");
        HorizontalForm::Current { chart, comps }
    }

    pub fn chart(&self) -> &BundleChart {
        match self {
            HorizontalForm::Density { chart, .. } | HorizontalForm::Current { chart, .. } => chart,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            HorizontalForm::Density { chart, .. } => chart.base_dim(),
            HorizontalForm::Current { chart, .. } => chart.base_dim() - 1,
        }
    }

    /// The density coefficient, if this is a density.
    pub fn as_density(&self) -> Option<&Expr> {
        match self {
            HorizontalForm::Density { coeff, .. } => Some(coeff),
            HorizontalForm::Current { .. } => None,
        }
    }

    /// The current components, if this is a current.
    pub fn as_current(&self) -> Option<&[Expr]> {
        match self {
            HorizontalForm::Current { comps, .. } => Some(comps),
            HorizontalForm::Density { .. } => None,
        }
    }

    /// Componentwise difference of two horizontal forms of the same kind
    /// over the same chart.
    pub fn sub(&self, rhs: &HorizontalForm) -> Result<HorizontalForm> {
        self.chart().require_same(rhs.chart())?;
        match (self, rhs) {
            (
                HorizontalForm::Density { chart, coeff: a },
                HorizontalForm::Density { coeff: b, .. },
            ) => Ok(HorizontalForm::Density {
                chart: chart.clone(),
                coeff: a - b,
            }),
            (
                HorizontalForm::Current { chart, comps: a },
                HorizontalForm::Current { comps: b, .. },
            ) => Ok(HorizontalForm::Current {
                chart: chart.clone(),
                comps: a.iter().zip(b).map(|(x, y)| x - y).collect(),
            }),
            _ => Err(Error::DegreeOutOfRange {
                op: "horizontal difference",
                degree: rhs.degree(),
                expected: self.degree().to_string(),
            }),
        }
    }

    /// Horizontal divergence `sum_lam d_lam S^lam * omega` of a current.
    pub fn horizontal_divergence(&self) -> Result<HorizontalForm> {
        match self {
            HorizontalForm::Current { chart, comps } => {
                let mut total = Expr::zero();
                for (lam, comp) in comps.iter().enumerate() {
                    total = &total + &total_derivative(chart, comp, lam)?;
                }
                Ok(HorizontalForm::Density {
                    chart: chart.clone(),
                    coeff: total,
                })
            }
            HorizontalForm::Density { chart, .. } => Err(Error::DegreeOutOfRange {
                op: "horizontal divergence",
                degree: chart.base_dim(),
                expected: (chart.base_dim() - 1).to_string(),
            }),
        }
    }
}
