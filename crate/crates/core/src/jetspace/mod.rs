//! Jet-space geometry: adapted charts, total derivatives, and the
//! horizontal calculus of differential forms.

mod chart;
mod form;

pub use chart::{jet_order, BundleChart, JetCoordinate};
pub use form::{FormOnY, HorizontalForm, SemibasicForm};

use crate::error::{Error, Result};
use crate::Expr;

/// Total derivative along `x^lam` on the second jet space:
///
/// `d_lam = ∂_lam + y^i_lam ∂_i + y^i_{lam mu} ∂^mu_i`
///
/// It raises jet order by one, so the input must have jet order at most one.
pub fn total_derivative(chart: &BundleChart, e: &Expr, lam: usize) -> Result<Expr> {
    if lam >= chart.base_dim() {
        return Err(Error::IndexOutOfRange {
            axis: "base",
            index: lam,
            dim: chart.base_dim(),
        });
    }
    let order = jet_order(e);
    if order > 1 {
        return Err(Error::JetOrder {
            found: order,
            limit: 1,
            context: "total derivative",
        });
    }
    let mut out = e.diff(&JetCoordinate::Base(lam))?;
    for field in 0..chart.fibre_dim() {
        let dy = e.diff(&JetCoordinate::Fibre(field))?;
        if !dy.is_zero() {
            out = &out + &(&chart.jet1(field, lam) * &dy);
        }
        for mu in 0..chart.base_dim() {
            let dv = e.diff(&JetCoordinate::Jet1 { field, deriv: mu })?;
            if !dv.is_zero() {
                out = &out + &(&chart.jet2(field, lam, mu) * &dv);
            }
        }
    }
    Ok(out)
}
