//! Conserved currents: the classical current of an invariant Lagrangian,
//! the corrected current when only the Euler-Lagrange operator is
//! invariant, and exactly certified conservation reports.

use crate::error::{Error, Result};
use crate::jetspace::{HorizontalForm, JetCoordinate};
use crate::symmetry::{
    lie_derivative_lagrangian, InvarianceClass, ProjectableVectorField,
};
use crate::variational::{
    boundary_current, certify_triviality, euler_lagrange, EulerLagrangeOperator, Lagrangian,
    TrivialityCertificate,
};
use crate::Expr;

/// The classical current
/// `J^lam = pi^lam_i (u^mu y^i_mu - u^i) - u^lam L`,
/// definable for any pairing of a projectable field with a Lagrangian. It is
/// the negative of the boundary current of the first variational identity,
/// an equality kept under test.
pub fn noether_current(
    u: &ProjectableVectorField,
    l: &Lagrangian,
) -> Result<HorizontalForm> {
    l.chart().require_same(u.chart())?;
    let chart = l.chart();
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let mut comps = Vec::with_capacity(n);
    for lam in 0..n {
        let mut comp = -&(u.base_component(lam) * l.density());
        for i in 0..m {
            let momentum = l.density().diff(&JetCoordinate::Jet1 { field: i, deriv: lam })?;
            if momentum.is_zero() {
                continue;
            }
            // u^mu y^i_mu - u^i = -(u ⌟ theta^i).
            comp = &comp - &(&momentum * &u.contact_component(i));
        }
        comps.push(comp);
    }
    Ok(HorizontalForm::current(chart.clone(), comps))
}

/// The corrected current `S - h0(sigma)` for a field that preserves only the
/// Euler-Lagrange operator: the boundary current minus the horizontalized
/// potential of the Lie-derivative density. Needs an exact certificate.
pub fn corrected_current(
    u: &ProjectableVectorField,
    l: &Lagrangian,
    cert: &TrivialityCertificate,
) -> Result<HorizontalForm> {
    let Some(sigma) = &cert.sigma else {
        return Err(Error::PotentialUnavailable);
    };
    boundary_current(u, l)?.sub(&sigma.horizontalize()?)
}

/// Shape of a certified law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawForm {
    /// `d_lam flux^lam = Q^i E_i`: the flux is conserved on shell.
    StrictConservation,
    /// The source form is closed but carries no computable potential; the
    /// law is the off-shell identity `d_lam flux^lam - lie = Q^i E_i`.
    WeakEqualityOnly,
}

impl LawForm {
    /// Stable lower-case label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            LawForm::StrictConservation => "strict-conservation",
            LawForm::WeakEqualityOnly => "weak-equality-only",
        }
    }
}

/// A fully certified answer to "does `u` yield a conservation law for `l`".
///
/// The law-bearing fields are present exactly when the classification is not
/// [`InvarianceClass::NotInvariant`]; they then satisfy the exact off-shell
/// identity `residual = Q^i E_i`, with `residual = d_lam flux^lam` for a
/// strict law and `residual = d_lam flux^lam - lie` for a weak one. The
/// identity is recomputed on every run; a failure is an engine bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoetherReport {
    pub classification: InvarianceClass,
    /// Density of the Lie derivative of the Lagrangian along `u`.
    pub lie_density: Expr,
    /// Euler-Lagrange operator of the Lagrangian itself.
    pub el: EulerLagrangeOperator,
    /// Characteristics `Q^i = -(u^i - y^i_mu u^mu)`.
    pub characteristics: Option<Vec<Expr>>,
    /// The certified flux: the boundary current, corrected when a potential
    /// exists for the Lie-derivative density.
    pub current: Option<HorizontalForm>,
    /// Triviality certificate of the Lie-derivative density, when only the
    /// Euler-Lagrange operator is invariant.
    pub certificate: Option<TrivialityCertificate>,
    pub law_form: Option<LawForm>,
    /// `Q^i E_i`, equal to the divergence side of the law.
    pub residual: Option<Expr>,
}

/// Classifies `u` against `l` and assembles the certified conservation law
/// when one exists.
pub fn verify(u: &ProjectableVectorField, l: &Lagrangian) -> Result<NoetherReport> {
    l.chart().require_same(u.chart())?;
    let chart = l.chart().clone();
    let lie = lie_derivative_lagrangian(u, l)?;
    let el = euler_lagrange(l)?;
    let classification = if lie.density().is_zero() {
        InvarianceClass::LagrangianInvariant
    } else if euler_lagrange(&lie)?.is_zero() {
        InvarianceClass::ELInvariantOnly
    } else {
        InvarianceClass::NotInvariant
    };
    if classification == InvarianceClass::NotInvariant {
        return Ok(NoetherReport {
            classification,
            lie_density: lie.density().clone(),
            el,
            characteristics: None,
            current: None,
            certificate: None,
            law_form: None,
            residual: None,
        });
    }

    let characteristics: Vec<Expr> =
        (0..chart.fibre_dim()).map(|i| -u.contact_component(i)).collect();
    let s = boundary_current(u, l)?;
    let (flux, certificate, law_form) = match classification {
        InvarianceClass::LagrangianInvariant => {
            // The classical current is the negative of the boundary current.
            let bracket = noether_current(u, l)?;
            let negated = HorizontalForm::current(
                chart.clone(),
                s.as_current().expect("boundary current").iter().map(|c| -c).collect(),
            );
            if bracket != negated {
                return Err(Error::InternalIdentity {
                    what: "classical current differs from the negated boundary current".into(),
                });
            }
            (s, None, LawForm::StrictConservation)
        }
        InvarianceClass::ELInvariantOnly => {
            let cert = certify_triviality(&lie)?;
            if cert.exact() {
                let flux = corrected_current(u, l, &cert)?;
                (flux, Some(cert), LawForm::StrictConservation)
            } else {
                (s, Some(cert), LawForm::WeakEqualityOnly)
            }
        }
        InvarianceClass::NotInvariant => unreachable!("handled above"),
    };

    let mut residual = flux
        .horizontal_divergence()?
        .as_density()
        .expect("divergence of a current is a density")
        .clone();
    if law_form == LawForm::WeakEqualityOnly {
        residual = &residual - lie.density();
    }
    let mut interior = Expr::zero();
    for (q, e) in characteristics.iter().zip(el.components()) {
        interior = &interior + &(q * e);
    }
    if residual != interior {
        return Err(Error::InternalIdentity {
            what: format!(
                "conservation identity failed: divergence side {} vs characteristic side {}",
                chart.render(&residual),
                chart.render(&interior)
            ),
        });
    }

    Ok(NoetherReport {
        classification,
        lie_density: lie.density().clone(),
        el,
        characteristics: Some(characteristics),
        current: Some(flux),
        certificate,
        law_form: Some(law_form),
        residual: Some(residual),
    })
}

/// Outcome of comparing the laws of a Lagrangian and its shift by a
/// variationally trivial density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SameLawReport {
    /// Whether the Euler-Lagrange operators of `l` and `l + l0` agree
    /// (a linearity theorem; recomputed, not assumed).
    pub el_match: bool,
    /// Whether both reports carry identical characteristics.
    pub characteristics_match: bool,
    pub base: NoetherReport,
    pub shifted: NoetherReport,
}

/// Verifies `u` against both `l` and `l + l0`, where `l0` must be
/// variationally trivial, and compares the resulting laws.
pub fn same_law_check(
    u: &ProjectableVectorField,
    l: &Lagrangian,
    l0: &Lagrangian,
) -> Result<SameLawReport> {
    l.chart().require_same(u.chart())?;
    l.chart().require_same(l0.chart())?;
    let el0 = euler_lagrange(l0)?;
    if let Some(i) = (0..l0.chart().fibre_dim()).find(|i| !el0.component(*i).is_zero()) {
        return Err(Error::NotTrivial {
            component: l0.chart().render(el0.component(i)),
        });
    }
    let sum = Lagrangian::new(l.chart().clone(), l.density() + l0.density())?;
    let el_match = euler_lagrange(&sum)? == euler_lagrange(l)?;
    let base = verify(u, l)?;
    let shifted = verify(u, &sum)?;
    let characteristics_match = base.characteristics == shifted.characteristics;
    Ok(SameLawReport {
        el_match,
        characteristics_match,
        base,
        shifted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetspace::BundleChart;
    use crate::scalar::ratio;
    use crate::symexpr::FuncName;

    fn chart1() -> BundleChart {
        BundleChart::new(["t"], ["y"]).unwrap()
    }

    fn free_particle() -> Lagrangian {
        let c = chart1();
        let half_vsq = (&c.jet1(0, 0) * &c.jet1(0, 0)).scale(&ratio(1, 2));
        Lagrangian::new(c, half_vsq).unwrap()
    }

    fn oscillator() -> Lagrangian {
        let c = chart1();
        let density = &(&c.jet1(0, 0) * &c.jet1(0, 0)).scale(&ratio(1, 2))
            - &(&c.fibre_coord(0) * &c.fibre_coord(0));
        Lagrangian::new(c, density).unwrap()
    }

    fn time_translation() -> ProjectableVectorField {
        ProjectableVectorField::new(chart1(), vec![Expr::one()], vec![Expr::zero()]).unwrap()
    }

    fn galilean_boost() -> ProjectableVectorField {
        let c = chart1();
        let t = c.base_coord(0);
        ProjectableVectorField::new(c, vec![Expr::zero()], vec![t]).unwrap()
    }

    #[test]
    fn classical_current_of_time_translation_is_the_energy() {
        let c = chart1();
        let j = noether_current(&time_translation(), &oscillator()).unwrap();
        let energy = &(&c.jet1(0, 0) * &c.jet1(0, 0)).scale(&ratio(1, 2))
            + &(&c.fibre_coord(0) * &c.fibre_coord(0));
        assert_eq!(j.as_current().unwrap(), &[energy]);
    }

    #[test]
    fn classical_current_is_the_negated_boundary_current() {
        let cases = [
            (time_translation(), free_particle()),
            (time_translation(), oscillator()),
            (galilean_boost(), free_particle()),
        ];
        for (u, l) in &cases {
            let j = noether_current(u, l).unwrap();
            let s = boundary_current(u, l).unwrap();
            let neg: Vec<Expr> = s.as_current().unwrap().iter().map(|c| -c).collect();
            assert_eq!(j.as_current().unwrap(), &neg[..]);
        }
    }

    #[test]
    fn strict_law_for_time_translation() {
        let c = chart1();
        let report = verify(&time_translation(), &oscillator()).unwrap();
        assert_eq!(report.classification, InvarianceClass::LagrangianInvariant);
        assert_eq!(report.law_form, Some(LawForm::StrictConservation));
        assert!(report.certificate.is_none());
        // Flux = -(1/2 y_t^2 + y^2); characteristics Q = y_t.
        let energy = &(&c.jet1(0, 0) * &c.jet1(0, 0)).scale(&ratio(1, 2))
            + &(&c.fibre_coord(0) * &c.fibre_coord(0));
        assert_eq!(
            report.current.as_ref().unwrap().as_current().unwrap(),
            &[-&energy]
        );
        assert_eq!(report.characteristics.as_ref().unwrap(), &[c.jet1(0, 0)]);
        // residual = Q E = y_t (-2y - y_tt).
        let expected = &(&c.jet1(0, 0) * &c.fibre_coord(0)).scale(&ratio(-2, 1))
            - &(&c.jet1(0, 0) * &c.jet2(0, 0, 0));
        assert_eq!(report.residual.as_ref().unwrap(), &expected);
    }

    #[test]
    fn corrected_law_for_a_boost() {
        let c = chart1();
        let report = verify(&galilean_boost(), &free_particle()).unwrap();
        assert_eq!(report.classification, InvarianceClass::ELInvariantOnly);
        assert_eq!(report.law_form, Some(LawForm::StrictConservation));
        let cert = report.certificate.as_ref().unwrap();
        assert!(cert.exact());
        // Flux = t y_t - y, characteristics Q = -t, residual = t y_tt.
        let flux = &(&c.base_coord(0) * &c.jet1(0, 0)) - &c.fibre_coord(0);
        assert_eq!(
            report.current.as_ref().unwrap().as_current().unwrap(),
            &[flux]
        );
        assert_eq!(
            report.characteristics.as_ref().unwrap(),
            &[-&c.base_coord(0)]
        );
        assert_eq!(
            report.residual.as_ref().unwrap(),
            &(&c.base_coord(0) * &c.jet2(0, 0, 0))
        );
    }

    #[test]
    fn weak_law_when_the_potential_is_transcendental() {
        let c = chart1();
        let l = Lagrangian::new(c.clone(), c.jet1(0, 0)).unwrap();
        let u = ProjectableVectorField::new(
            c.clone(),
            vec![Expr::zero()],
            vec![Expr::func(FuncName::Sin, c.fibre_coord(0))],
        )
        .unwrap();
        let report = verify(&u, &l).unwrap();
        assert_eq!(report.classification, InvarianceClass::ELInvariantOnly);
        assert_eq!(report.law_form, Some(LawForm::WeakEqualityOnly));
        assert!(!report.certificate.as_ref().unwrap().exact());
        // Flux = sin(y); the operator vanishes, so the residual does too.
        assert_eq!(
            report.current.as_ref().unwrap().as_current().unwrap(),
            &[Expr::func(FuncName::Sin, c.fibre_coord(0))]
        );
        assert!(report.el.is_zero());
        assert!(report.residual.as_ref().unwrap().is_zero());
    }

    #[test]
    fn no_law_without_invariance() {
        let c = chart1();
        let scaling =
            ProjectableVectorField::new(c.clone(), vec![Expr::zero()], vec![c.fibre_coord(0)])
                .unwrap();
        let report = verify(&scaling, &free_particle()).unwrap();
        assert_eq!(report.classification, InvarianceClass::NotInvariant);
        assert!(report.current.is_none());
        assert!(report.law_form.is_none());
        assert!(report.residual.is_none());
        assert!(report.characteristics.is_none());
    }

    #[test]
    fn rotation_charge_on_a_two_field_model() {
        // L = 1/2 sum_lam (y1_lam^2 + y2_lam^2), u = y2 ∂_{y1} - y1 ∂_{y2}.
        let c = BundleChart::new(["x0", "x1"], ["y1", "y2"]).unwrap();
        let mut density = Expr::zero();
        for i in 0..2 {
            for lam in 0..2 {
                density = &density + &(&c.jet1(i, lam) * &c.jet1(i, lam)).scale(&ratio(1, 2));
            }
        }
        let l = Lagrangian::new(c.clone(), density).unwrap();
        let u = ProjectableVectorField::new(
            c.clone(),
            vec![Expr::zero(), Expr::zero()],
            vec![c.fibre_coord(1), -&c.fibre_coord(0)],
        )
        .unwrap();
        let report = verify(&u, &l).unwrap();
        assert_eq!(report.classification, InvarianceClass::LagrangianInvariant);
        // Flux_lam = y2 y1_lam - y1 y2_lam.
        let expected: Vec<Expr> = (0..2)
            .map(|lam| {
                &(&c.fibre_coord(1) * &c.jet1(0, lam)) - &(&c.fibre_coord(0) * &c.jet1(1, lam))
            })
            .collect();
        assert_eq!(
            report.current.as_ref().unwrap().as_current().unwrap(),
            &expected[..]
        );
    }

    #[test]
    fn trivial_shifts_keep_the_corrected_law() {
        // L0 = 3 y^2 y_t shifts the free particle without moving the law.
        let c = chart1();
        let l0_density =
            (&(&c.fibre_coord(0) * &c.fibre_coord(0)) * &c.jet1(0, 0)).scale(&ratio(3, 1));
        let l0 = Lagrangian::new(c.clone(), l0_density).unwrap();
        let report = same_law_check(&galilean_boost(), &free_particle(), &l0).unwrap();
        assert!(report.el_match);
        assert!(report.characteristics_match);
        assert_eq!(report.base.current, report.shifted.current);
        assert_eq!(report.base.residual, report.shifted.residual);
        assert_eq!(
            report.shifted.classification,
            InvarianceClass::ELInvariantOnly
        );
    }

    #[test]
    fn same_law_rejects_a_nontrivial_shift() {
        let c = chart1();
        let l0 = Lagrangian::new(c.clone(), c.fibre_coord(0)).unwrap();
        assert!(matches!(
            same_law_check(&galilean_boost(), &free_particle(), &l0),
            Err(Error::NotTrivial { .. })
        ));
    }

    #[test]
    fn corrected_current_needs_a_potential() {
        let c = chart1();
        let l = Lagrangian::new(c.clone(), c.jet1(0, 0)).unwrap();
        let u = ProjectableVectorField::new(
            c.clone(),
            vec![Expr::zero()],
            vec![Expr::func(FuncName::Sin, c.fibre_coord(0))],
        )
        .unwrap();
        let lie = lie_derivative_lagrangian(&u, &l).unwrap();
        let cert = certify_triviality(&lie).unwrap();
        assert!(matches!(
            corrected_current(&u, &l, &cert),
            Err(Error::PotentialUnavailable)
        ));
    }
}
