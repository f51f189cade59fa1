//! Projectable vector fields, their jet prolongations, and Lie derivatives
//! of Lagrangians and Euler-Lagrange operators.

use crate::error::{Error, Result};
use crate::jetspace::{jet_order, total_derivative, BundleChart, JetCoordinate};
use crate::scalar::ratio;
use crate::variational::{euler_lagrange, EulerLagrangeOperator, Lagrangian};
use crate::Expr;
use std::collections::BTreeMap;

/// A projectable vector field `u = u^lam(x) ∂_lam + u^i(x, y) ∂_i` on the
/// total space: base components depend on base coordinates only, fibre
/// components on base and fibre coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectableVectorField {
    chart: BundleChart,
    base: Vec<Expr>,
    fibre: Vec<Expr>,
}

impl ProjectableVectorField {
    /// Builds a field, enforcing component counts and the projectability
    /// dependency rules.
    pub fn new(chart: BundleChart, base: Vec<Expr>, fibre: Vec<Expr>) -> Result<Self> {
        if base.len() != chart.base_dim() || fibre.len() != chart.fibre_dim() {
            return Err(Error::InvalidChart(format!(
                "field needs {} base and {} fibre components, got {} and {}",
                chart.base_dim(),
                chart.fibre_dim(),
                base.len(),
                fibre.len()
            )));
        }
        for comp in base.iter().chain(fibre.iter()) {
            chart.check_expr(comp)?;
        }
        for comp in &base {
            let mut offender: Option<JetCoordinate> = None;
            comp.for_each_coordinate(&mut |c: &JetCoordinate| {
                if !matches!(c, JetCoordinate::Base(_)) && offender.is_none() {
                    offender = Some(*c);
                }
            });
            if let Some(c) = offender {
                return Err(Error::DependencyViolation {
                    context: "base component of a projectable field",
                    atom: chart.coordinate_name(&c),
                });
            }
        }
        for comp in &fibre {
            if jet_order(comp) > 0 {
                let mut offender = String::new();
                comp.for_each_coordinate(&mut |c: &JetCoordinate| {
                    if c.order() > 0 && offender.is_empty() {
                        offender = chart.coordinate_name(c);
                    }
                });
                return Err(Error::DependencyViolation {
                    context: "fibre component of a projectable field",
                    atom: offender,
                });
            }
        }
        Ok(ProjectableVectorField { chart, base, fibre })
    }

    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    /// `u^lam`.
    pub fn base_component(&self, lam: usize) -> &Expr {
        &self.base[lam]
    }

    /// `u^i`.
    pub fn fibre_component(&self, i: usize) -> &Expr {
        &self.fibre[i]
    }

    /// Contraction with the `i`-th contact form:
    /// `u ⌟ theta^i = u^i - y^i_mu u^mu`.
    pub fn contact_component(&self, i: usize) -> Expr {
        let mut out = self.fibre[i].clone();
        for (mu, u_mu) in self.base.iter().enumerate() {
            out = &out - &(&self.chart.jet1(i, mu) * u_mu);
        }
        out
    }

    /// Divergence of the base projection, `sum_lam ∂_lam u^lam`.
    pub fn base_divergence(&self) -> Expr {
        let mut out = Expr::zero();
        for (lam, comp) in self.base.iter().enumerate() {
            out = &out + &comp.diff(&JetCoordinate::Base(lam)).expect("polynomial in x");
        }
        out
    }
}

/// A projectable vector field prolonged to the first or second jet space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProlongedVectorField {
    field: ProjectableVectorField,
    /// `xi^i_lam`, indexed `[i][lam]`.
    jet1: Vec<Vec<Expr>>,
    /// `xi^i_{lam mu}` keyed by `(lam, mu)` with `lam <= mu`; present only
    /// at order two.
    jet2: Option<Vec<BTreeMap<(usize, usize), Expr>>>,
}

impl ProlongedVectorField {
    /// Prolongation order: 1 or 2.
    pub fn order(&self) -> u8 {
        if self.jet2.is_some() {
            2
        } else {
            1
        }
    }

    /// The underlying field on the total space.
    pub fn field(&self) -> &ProjectableVectorField {
        &self.field
    }

    /// Coefficient of `∂ / ∂ y^i_lam`.
    pub fn jet1_coefficient(&self, i: usize, lam: usize) -> &Expr {
        &self.jet1[i][lam]
    }

    /// Coefficient of `∂ / ∂ y^i_{lam mu}`; the pair is symmetric.
    pub fn jet2_coefficient(&self, i: usize, lam: usize, mu: usize) -> Option<&Expr> {
        let key = (lam.min(mu), lam.max(mu));
        self.jet2.as_ref().map(|j2| &j2[i][&key])
    }

    /// Applies the prolonged field to an expression as a derivation. The
    /// expression's jet order must not exceed the prolongation order.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let order = jet_order(e);
        if order > self.order() {
            return Err(Error::JetOrder {
                found: order,
                limit: self.order(),
                context: "prolonged field application",
            });
        }
        let chart = self.field.chart();
        let mut out = Expr::zero();
        for lam in 0..chart.base_dim() {
            let partial = e.diff(&JetCoordinate::Base(lam))?;
            out = &out + &(self.field.base_component(lam) * &partial);
        }
        for i in 0..chart.fibre_dim() {
            let partial = e.diff(&JetCoordinate::Fibre(i))?;
            out = &out + &(self.field.fibre_component(i) * &partial);
            for lam in 0..chart.base_dim() {
                let partial = e.diff(&JetCoordinate::Jet1 { field: i, deriv: lam })?;
                out = &out + &(&self.jet1[i][lam] * &partial);
            }
        }
        if let Some(jet2) = &self.jet2 {
            for (i, comps) in jet2.iter().enumerate() {
                for ((lam, mu), coeff) in comps {
                    let partial = e.diff(&JetCoordinate::jet2(i, *lam, *mu))?;
                    out = &out + &(coeff * &partial);
                }
            }
        }
        Ok(out)
    }
}

/// First prolongation: `xi^i_lam = d_lam u^i - y^i_mu ∂_lam u^mu`.
pub fn prolong1(u: &ProjectableVectorField) -> Result<ProlongedVectorField> {
    Ok(ProlongedVectorField {
        field: u.clone(),
        jet1: jet1_coefficients(u)?,
        jet2: None,
    })
}

/// Second prolongation: on top of the first,
/// `xi^i_{lam mu} = d_mu xi^i_lam - y^i_{lam nu} ∂_mu u^nu`,
/// symmetrised over `(lam, mu)`.
pub fn prolong2(u: &ProjectableVectorField) -> Result<ProlongedVectorField> {
    let chart = u.chart();
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let jet1 = jet1_coefficients(u)?;
    let mut jet2 = Vec::with_capacity(m);
    let half = ratio(1, 2);
    for (i, jets) in jet1.iter().enumerate() {
        let raw = |lam: usize, mu: usize| -> Result<Expr> {
            let mut out = total_derivative(chart, &jets[lam], mu)?;
            for nu in 0..n {
                let shear = u.base_component(nu).diff(&JetCoordinate::Base(mu))?;
                if !shear.is_zero() {
                    out = &out - &(&chart.jet2(i, lam, nu) * &shear);
                }
            }
            Ok(out)
        };
        let mut comps = BTreeMap::new();
        for lam in 0..n {
            for mu in lam..n {
                let sym = (&raw(lam, mu)? + &raw(mu, lam)?).scale(&half);
                comps.insert((lam, mu), sym);
            }
        }
        jet2.push(comps);
    }
    Ok(ProlongedVectorField {
        field: u.clone(),
        jet1,
        jet2: Some(jet2),
    })
}

fn jet1_coefficients(u: &ProjectableVectorField) -> Result<Vec<Vec<Expr>>> {
    let chart = u.chart();
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let mut jet1 = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(n);
        for lam in 0..n {
            let mut coeff = total_derivative(chart, u.fibre_component(i), lam)?;
            for mu in 0..n {
                let shear = u.base_component(mu).diff(&JetCoordinate::Base(lam))?;
                if !shear.is_zero() {
                    coeff = &coeff - &(&chart.jet1(i, mu) * &shear);
                }
            }
            row.push(coeff);
        }
        jet1.push(row);
    }
    Ok(jet1)
}

/// Lie derivative of a Lagrangian along the first prolongation of `u`:
///
/// `L_{J1 u} (L omega) = [∂_lam(u^lam L) + u^i ∂_i L + xi^i_lam ∂^lam_i L] omega`.
pub fn lie_derivative_lagrangian(
    u: &ProjectableVectorField,
    l: &Lagrangian,
) -> Result<Lagrangian> {
    l.chart().require_same(u.chart())?;
    let chart = l.chart().clone();
    let prolonged = prolong1(u)?;
    let mut density = prolonged.apply(l.density())?;
    density = &density + &(l.density() * &u.base_divergence());
    Lagrangian::new(chart, density)
}

/// Lie derivative of an Euler-Lagrange operator along the second
/// prolongation of `u`, acting on `E = E_i theta^i ^ omega`:
///
/// component `i` = `J2u(E_i) + E_j ∂_i u^j + E_i ∂_lam u^lam`.
pub fn lie_derivative_el(
    u: &ProjectableVectorField,
    e: &EulerLagrangeOperator,
) -> Result<EulerLagrangeOperator> {
    e.chart().require_same(u.chart())?;
    let chart = e.chart().clone();
    let prolonged = prolong2(u)?;
    let div = u.base_divergence();
    let mut comps = Vec::with_capacity(chart.fibre_dim());
    for i in 0..chart.fibre_dim() {
        let mut comp = prolonged.apply(e.component(i))?;
        for j in 0..chart.fibre_dim() {
            let pull = u.fibre_component(j).diff(&JetCoordinate::Fibre(i))?;
            if !pull.is_zero() {
                comp = &comp + &(e.component(j) * &pull);
            }
        }
        comp = &comp + &(e.component(i) * &div);
        comps.push(comp);
    }
    EulerLagrangeOperator::new(chart, comps)
}

/// How a symmetry candidate relates to a Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceClass {
    /// `L_{J1 u} L = 0`: the Lagrangian itself is invariant.
    LagrangianInvariant,
    /// The Lie derivative is nonzero but variationally trivial: the
    /// Euler-Lagrange operator is invariant, the Lagrangian is not.
    ELInvariantOnly,
    /// The Lie derivative is not even variationally trivial.
    NotInvariant,
}

impl InvarianceClass {
    /// Stable lower-case label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            InvarianceClass::LagrangianInvariant => "lagrangian-invariant",
            InvarianceClass::ELInvariantOnly => "el-invariant-only",
            InvarianceClass::NotInvariant => "not-invariant",
        }
    }
}

/// Classifies `u` against `L`, short-circuiting in the order of the
/// definitions: exact invariance first, then variational triviality of the
/// Lie derivative.
pub fn invariance_class(u: &ProjectableVectorField, l: &Lagrangian) -> Result<InvarianceClass> {
    let lie = lie_derivative_lagrangian(u, l)?;
    if lie.density().is_zero() {
        return Ok(InvarianceClass::LagrangianInvariant);
    }
    if euler_lagrange(&lie)?.is_zero() {
        return Ok(InvarianceClass::ELInvariantOnly);
    }
    Ok(InvarianceClass::NotInvariant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn chart() -> BundleChart {
        BundleChart::new(["t"], ["y"]).unwrap()
    }

    fn free_particle() -> Lagrangian {
        let c = chart();
        let half_vsq = (&c.jet1(0, 0) * &c.jet1(0, 0)).scale(&ratio(1, 2));
        Lagrangian::new(c, half_vsq).unwrap()
    }

    fn time_translation() -> ProjectableVectorField {
        ProjectableVectorField::new(chart(), vec![Expr::one()], vec![Expr::zero()]).unwrap()
    }

    fn galilean_boost() -> ProjectableVectorField {
        let c = chart();
        let t = c.base_coord(0);
        ProjectableVectorField::new(c, vec![Expr::zero()], vec![t]).unwrap()
    }

    fn scaling() -> ProjectableVectorField {
        let c = chart();
        let y = c.fibre_coord(0);
        ProjectableVectorField::new(c, vec![Expr::zero()], vec![y]).unwrap()
    }

    #[test]
    fn projectability_is_enforced() {
        let c = chart();
        // Base component depending on y is rejected.
        assert!(matches!(
            ProjectableVectorField::new(c.clone(), vec![c.fibre_coord(0)], vec![Expr::zero()]),
            Err(Error::DependencyViolation { .. })
        ));
        // Fibre component depending on a velocity is rejected.
        assert!(matches!(
            ProjectableVectorField::new(c.clone(), vec![Expr::zero()], vec![c.jet1(0, 0)]),
            Err(Error::DependencyViolation { .. })
        ));
    }

    #[test]
    fn prolongation_of_a_boost_and_a_scaling() {
        // u = t ∂_y: xi_t = 1.
        let p = prolong1(&galilean_boost()).unwrap();
        assert!(p.jet1_coefficient(0, 0).is_one());
        // u = y ∂_y: xi_t = y_t, xi_tt = y_tt.
        let p = prolong2(&scaling()).unwrap();
        let c = chart();
        assert_eq!(p.jet1_coefficient(0, 0), &c.jet1(0, 0));
        assert_eq!(p.jet2_coefficient(0, 0, 0).unwrap(), &c.jet2(0, 0, 0));
    }

    #[test]
    fn prolongation_of_a_base_shear() {
        // n = 2, u = x1 ∂_{x0}: xi^0_{x1} = -y_{x0}, xi^0_{x0} = 0.
        let c = BundleChart::new(["x0", "x1"], ["y"]).unwrap();
        let u = ProjectableVectorField::new(
            c.clone(),
            vec![c.base_coord(1), Expr::zero()],
            vec![Expr::zero()],
        )
        .unwrap();
        let p = prolong1(&u).unwrap();
        assert!(p.jet1_coefficient(0, 0).is_zero());
        assert_eq!(p.jet1_coefficient(0, 1), &-&c.jet1(0, 0));
    }

    #[test]
    fn second_prolongation_is_symmetric() {
        let c = BundleChart::new(["x0", "x1"], ["y"]).unwrap();
        let u = ProjectableVectorField::new(
            c.clone(),
            vec![c.base_coord(1), c.base_coord(0)],
            vec![&c.fibre_coord(0) * &c.base_coord(0)],
        )
        .unwrap();
        let p = prolong2(&u).unwrap();
        assert_eq!(
            p.jet2_coefficient(0, 0, 1).unwrap(),
            p.jet2_coefficient(0, 1, 0).unwrap()
        );
    }

    #[test]
    fn lie_derivative_of_the_free_particle() {
        let l = free_particle();
        // Time translation leaves it invariant.
        let lie = lie_derivative_lagrangian(&time_translation(), &l).unwrap();
        assert!(lie.density().is_zero());
        // Boost changes it by y_t.
        let lie = lie_derivative_lagrangian(&galilean_boost(), &l).unwrap();
        assert_eq!(lie.density(), &chart().jet1(0, 0));
        // Scaling changes it by y_t^2.
        let lie = lie_derivative_lagrangian(&scaling(), &l).unwrap();
        let vsq = &chart().jet1(0, 0) * &chart().jet1(0, 0);
        assert_eq!(lie.density(), &vsq);
    }

    #[test]
    fn lie_derivative_of_the_free_el_operator_under_scaling() {
        let l = free_particle();
        let e = euler_lagrange(&l).unwrap();
        let lie = lie_derivative_el(&scaling(), &e).unwrap();
        // E = -y_tt scales to -2 y_tt.
        assert_eq!(lie.component(0), &chart().jet2(0, 0, 0).scale(&ratio(-2, 1)));
    }

    #[test]
    fn invariance_classification_short_circuits_in_order() {
        let l = free_particle();
        assert_eq!(
            invariance_class(&time_translation(), &l).unwrap(),
            InvarianceClass::LagrangianInvariant
        );
        assert_eq!(
            invariance_class(&galilean_boost(), &l).unwrap(),
            InvarianceClass::ELInvariantOnly
        );
        assert_eq!(
            invariance_class(&scaling(), &l).unwrap(),
            InvarianceClass::NotInvariant
        );
    }

    #[test]
    fn contact_components_subtract_transported_velocities() {
        let u = galilean_boost();
        // u ⌟ theta = t (boost has no base part).
        assert_eq!(u.contact_component(0), chart().base_coord(0));
        let w = time_translation();
        assert_eq!(w.contact_component(0), -&chart().jet1(0, 0));
    }
}
