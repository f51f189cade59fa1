//! The variational layer: Euler-Lagrange operators, the Poincare-Cartan
//! form, the first variational identity, and exact certificates for
//! variationally trivial densities.

use crate::error::{Error, Result};
use crate::jetspace::{
    jet_order, total_derivative, BundleChart, FormOnY, HorizontalForm, JetCoordinate,
};
use crate::scalar::Rational;
use crate::symexpr;
use crate::symmetry::{lie_derivative_lagrangian, ProjectableVectorField};
use crate::{Atom, Expr, Monomial};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A first-order Lagrangian density over a bundle chart. The density
/// multiplies the base volume form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lagrangian {
    chart: BundleChart,
    density: Expr,
}

impl Lagrangian {
    /// Wraps a density, checking coordinate ranges and the first-order cap.
    pub fn new(chart: BundleChart, density: Expr) -> Result<Self> {
        chart.check_expr(&density)?;
        let order = jet_order(&density);
        if order > 1 {
            return Err(Error::JetOrder {
                found: order,
                limit: 1,
                context: "lagrangian density",
            });
        }
        Ok(Lagrangian { chart, density })
    }

    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }
}

/// The Euler-Lagrange operator of a first-order Lagrangian: one second-order
/// component per fibre coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerLagrangeOperator {
    chart: BundleChart,
    comps: Vec<Expr>,
}

impl EulerLagrangeOperator {
    /// Wraps components, checking count, ranges, and the second-order cap.
    pub fn new(chart: BundleChart, comps: Vec<Expr>) -> Result<Self> {
        if comps.len() != chart.fibre_dim() {
            return Err(Error::InvalidChart(format!(
                "operator needs {} components, got {}",
                chart.fibre_dim(),
                comps.len()
            )));
        }
        for comp in &comps {
            chart.check_expr(comp)?;
        }
        Ok(EulerLagrangeOperator { chart, comps })
    }

    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    /// True when every component vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    /// True when each component is affine in the second-order jet
    /// coordinates: no products of them, no powers, none inside function
    /// arguments.
    pub fn is_affine_in_jet2(&self) -> bool {
        self.comps.iter().all(|comp| {
            comp.terms().all(|(mon, _)| {
                let mut degree = 0i64;
                for (atom, exp) in mon.factors() {
                    match atom {
                        Atom::Coord(c) if c.order() == 2 => {
                            if *exp < 0 {
                                return false;
                            }
                            degree += i64::from(*exp);
                        }
                        Atom::Coord(_) => {}
                        Atom::Func(_, arg) => {
                            if jet_order(arg) == 2 {
                                return false;
                            }
                        }
                    }
                }
                degree <= 1
            })
        })
    }
}

/// Computes the Euler-Lagrange operator
/// `E_i = ∂_i L - d_lam ∂^lam_i L`.
pub fn euler_lagrange(l: &Lagrangian) -> Result<EulerLagrangeOperator> {
    let chart = l.chart();
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let mut comps = Vec::with_capacity(m);
    for i in 0..m {
        let mut comp = l.density().diff(&JetCoordinate::Fibre(i))?;
        for lam in 0..n {
            let momentum = l.density().diff(&JetCoordinate::Jet1 { field: i, deriv: lam })?;
            if !momentum.is_zero() {
                comp = &comp - &total_derivative(chart, &momentum, lam)?;
            }
        }
        comps.push(comp);
    }
    EulerLagrangeOperator::new(chart.clone(), comps)
}

/// The Poincare-Cartan form of a first-order Lagrangian,
/// `pi^lam_i dy^i ^ omega_lam + (L - y^i_lam pi^lam_i) omega`,
/// kept both as its ingredients and as an assembled semibasic n-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareCartanForm {
    chart: BundleChart,
    momenta: Vec<Vec<Expr>>,
    rest: Expr,
    form: crate::jetspace::SemibasicForm,
}

impl PoincareCartanForm {
    pub fn chart(&self) -> &BundleChart {
        &self.chart
    }

    /// `pi^lam_i = ∂ L / ∂ y^i_lam`, indexed `(i, lam)`.
    pub fn momentum(&self, i: usize, lam: usize) -> &Expr {
        &self.momenta[i][lam]
    }

    /// The volume-form coefficient `L - y^i_lam pi^lam_i`.
    pub fn rest(&self) -> &Expr {
        &self.rest
    }

    /// The assembled semibasic n-form.
    pub fn form(&self) -> &crate::jetspace::SemibasicForm {
        &self.form
    }
}

/// Builds the Poincare-Cartan form of `l`.
pub fn poincare_cartan(l: &Lagrangian) -> Result<PoincareCartanForm> {
    let chart = l.chart().clone();
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let mut momenta = Vec::with_capacity(m);
    let mut rest = l.density().clone();
    let mut form = crate::jetspace::SemibasicForm::zero(chart.clone(), n)?;
    let mut sign = Rational::one();
    let minus_one = -Rational::one();
    for lam in 0..n {
        // omega_lam = ∂_lam ⌟ omega carries the sign (-1)^lam.
        let mut word = vec![0usize; n];
        for (k, b) in (0..n).filter(|b| *b != lam).enumerate() {
            word[k + 1] = b;
        }
        for i in 0..m {
            let momentum = l.density().diff(&JetCoordinate::Jet1 { field: i, deriv: lam })?;
            rest = &rest - &(&momentum * &chart.jet1(i, lam));
            if lam == 0 {
                momenta.push(vec![momentum.clone()]);
            } else {
                momenta[i].push(momentum.clone());
            }
            if !momentum.is_zero() {
                word[0] = n + i;
                form.add_term(&word[..n], momentum.scale(&sign))?;
            }
        }
        sign *= minus_one.clone();
    }
    let volume: Vec<usize> = (0..n).collect();
    if !rest.is_zero() {
        form.add_term(&volume, rest.clone())?;
    }
    Ok(PoincareCartanForm { chart, momenta, rest, form })
}

/// The first variational identity evaluated on a symmetry candidate: the Lie
/// derivative of the density splits into an interior (Euler-Lagrange) part
/// and the divergence of a boundary current.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstVariation {
    /// Density of the Lie derivative of the Lagrangian.
    pub lie: Expr,
    /// `(u^i - y^i_mu u^mu) E_i`.
    pub interior: Expr,
    /// The boundary current `S = h0(u ⌟ Theta_L)`.
    pub flux: HorizontalForm,
    /// `lie - interior - div(flux)`; identically zero for every input.
    pub residual: Expr,
}

/// Decomposes the Lie derivative of `l` along `u` through the first
/// variational identity and checks the identity exactly. A nonzero residual
/// is reported as an internal error: it cannot arise from input data.
pub fn first_variation_decompose(
    u: &ProjectableVectorField,
    l: &Lagrangian,
) -> Result<FirstVariation> {
    l.chart().require_same(u.chart())?;
    let lie = lie_derivative_lagrangian(u, l)?.density().clone();
    let el = euler_lagrange(l)?;
    let mut interior = Expr::zero();
    for i in 0..l.chart().fibre_dim() {
        let contact = u.contact_component(i);
        if !contact.is_zero() {
            interior = &interior + &(&contact * el.component(i));
        }
    }
    let flux = boundary_current(u, l)?;
    let div = flux
        .horizontal_divergence()?
        .as_density()
        .expect("divergence of a current is a density")
        .clone();
    let residual = &(&lie - &interior) - &div;
    if !residual.is_zero() {
        return Err(Error::InternalIdentity {
            what: format!(
                "first variational identity left residual {}",
                l.chart().render(&residual)
            ),
        });
    }
    Ok(FirstVariation { lie, interior, flux, residual })
}

/// The boundary current of the first variational identity,
/// `S = h0(u ⌟ Theta_L)`, as a horizontal (n-1)-form.
pub fn boundary_current(
    u: &ProjectableVectorField,
    l: &Lagrangian,
) -> Result<HorizontalForm> {
    poincare_cartan(l)?.form().interior_product(u)?.horizontalize()
}

/// True when the Euler-Lagrange operator of `l` vanishes identically.
pub fn is_variationally_trivial(l: &Lagrangian) -> Result<bool> {
    Ok(euler_lagrange(l)?.is_zero())
}

/// Splits an at-most-first-order density into velocity monomials with
/// coefficients depending on base and fibre coordinates only. Function atoms
/// may appear in the coefficients, but their arguments must be jet-free.
fn split_velocity_monomials(
    chart: &BundleChart,
    e: &Expr,
    context: &'static str,
) -> Result<BTreeMap<Monomial, Expr>> {
    let mut out: BTreeMap<Monomial, Expr> = BTreeMap::new();
    for (mon, coeff) in e.terms() {
        let mut jet_factors = Vec::new();
        let mut rest_factors = Vec::new();
        for (atom, exp) in mon.factors() {
            match atom {
                Atom::Coord(c) if c.order() > 0 => {
                    if *exp < 0 {
                        return Err(Error::NonPolynomial {
                            context,
                            atom: factor_label(chart, atom, *exp),
                        });
                    }
                    jet_factors.push((atom.clone(), *exp));
                }
                Atom::Func(_, arg) if jet_order(arg) > 0 => {
                    return Err(Error::NonPolynomial {
                        context,
                        atom: factor_label(chart, atom, 1),
                    });
                }
                _ => rest_factors.push((atom.clone(), *exp)),
            }
        }
        let key = Monomial::from_factors(jet_factors);
        let value = Expr::from_monomial(Monomial::from_factors(rest_factors), coeff.clone());
        let slot = out.entry(key).or_insert_with(Expr::zero);
        *slot = &*slot + &value;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Renders a single monomial factor for error messages.
fn factor_label(chart: &BundleChart, atom: &Atom, exp: i32) -> String {
    let base = chart.render(&Expr::from_monomial(
        Monomial::from_factors(vec![(atom.clone(), 1)]),
        Rational::one(),
    ));
    if exp == 1 {
        base
    } else {
        format!("{base}^{exp}")
    }
}

/// Reconstructs the unique n-form `phi` on the total space with
/// `h0(phi) = L0 omega` for a variationally trivial first-order density.
///
/// The horizontalization of a basis n-form is a jet minor, so matching
/// velocity monomials yields an exact linear system over the rationals with
/// expression-valued right-hand sides; it is solved by Gaussian elimination
/// and the result is verified by round-trip and closedness checks.
pub fn reconstruct_phi(l0: &Lagrangian) -> Result<FormOnY> {
    let chart = l0.chart().clone();
    let el = euler_lagrange(l0)?;
    if let Some(i) = (0..chart.fibre_dim()).find(|i| !el.component(*i).is_zero()) {
        return Err(Error::NotTrivial {
            component: chart.render(el.component(i)),
        });
    }
    let (n, m) = (chart.base_dim(), chart.fibre_dim());
    let target = split_velocity_monomials(&chart, l0.density(), "source reconstruction")?;

    // Columns: basis n-forms on Y and their horizontalized velocity images.
    let mut columns: Vec<(Vec<usize>, BTreeMap<Monomial, Rational>)> = Vec::new();
    for word in (0..n + m).combinations(n) {
        let mut basis = FormOnY::zero(chart.clone(), n)?;
        basis.add_term(&word, Expr::one())?;
        let image = match basis.horizontalize()? {
            HorizontalForm::Density { coeff, .. } => coeff,
            HorizontalForm::Current { .. } => unreachable!("degree n horizontalizes to a density"),
        };
        let mut minor = BTreeMap::new();
        for (mon, value) in split_velocity_monomials(&chart, &image, "source reconstruction")? {
            let c = value
                .as_constant()
                .expect("basis minors have numeric coefficients");
            minor.insert(mon, c);
        }
        columns.push((word, minor));
    }

    // Rows: every velocity monomial seen in the density or in a minor.
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for mon in target.keys().chain(columns.iter().flat_map(|(_, im)| im.keys())) {
        let next = row_of.len();
        row_of.entry(mon.clone()).or_insert(next);
    }
    let nrows = row_of.len();
    let ncols = columns.len();
    let mut labels: Vec<Monomial> = vec![Monomial::unit(); nrows];
    for (mon, r) in &row_of {
        labels[*r] = mon.clone();
    }
    let mut matrix = vec![vec![Rational::zero(); ncols]; nrows];
    for (col, (_, minor)) in columns.iter().enumerate() {
        for (mon, c) in minor {
            matrix[row_of[mon]][col] = c.clone();
        }
    }
    let mut rhs = vec![Expr::zero(); nrows];
    for (mon, value) in &target {
        rhs[row_of[mon]] = value.clone();
    }

    // Monomials no basis form can produce fail fast with a precise listing.
    let unmatched: Vec<String> = (0..nrows)
        .filter(|r| !rhs[*r].is_zero() && matrix[*r].iter().all(Rational::is_zero))
        .map(|r| velocity_label(&chart, &labels[r]))
        .collect();
    if !unmatched.is_empty() {
        return Err(Error::Reconstruction { unmatched });
    }

    // Exact Gauss-Jordan elimination on (matrix | rhs).
    let mut rank = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|r| !matrix[*r][col].is_zero()) else {
            continue;
        };
        matrix.swap(rank, pivot_row);
        rhs.swap(rank, pivot_row);
        labels.swap(rank, pivot_row);
        let pivot = matrix[rank][col].clone();
        for entry in &mut matrix[rank] {
            *entry = &*entry / &pivot;
        }
        rhs[rank] = rhs[rank].scale(&(Rational::one() / pivot));
        let pivot_row = matrix[rank].clone();
        for r in 0..nrows {
            if r == rank || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for (entry, p) in matrix[r].iter_mut().zip(&pivot_row) {
                *entry = &*entry - &(&factor * p);
            }
            rhs[r] = &rhs[r] - &rhs[rank].scale(&factor);
        }
        pivots.push((col, rank));
        rank += 1;
    }
    let inconsistent: Vec<String> = (rank..nrows)
        .filter(|r| !rhs[*r].is_zero())
        .map(|r| velocity_label(&chart, &labels[r]))
        .collect();
    if !inconsistent.is_empty() {
        return Err(Error::Reconstruction { unmatched: inconsistent });
    }

    let mut phi = FormOnY::zero(chart.clone(), n)?;
    for (col, row) in pivots {
        if !rhs[row].is_zero() {
            phi.add_term(&columns[col].0, rhs[row].clone())?;
        }
    }

    // Round-trip and closedness are theorems here; failures are engine bugs.
    let round_trip = match phi.horizontalize()? {
        HorizontalForm::Density { coeff, .. } => coeff,
        HorizontalForm::Current { .. } => unreachable!("degree n horizontalizes to a density"),
    };
    if &round_trip != l0.density() {
        return Err(Error::InternalIdentity {
            what: "reconstructed source does not horizontalize back to the density".into(),
        });
    }
    if !phi.exterior_derivative()?.is_zero() {
        return Err(Error::InternalIdentity {
            what: "reconstructed source form is not closed".into(),
        });
    }
    Ok(phi)
}

fn velocity_label(chart: &BundleChart, mon: &Monomial) -> String {
    chart.render(&Expr::from_monomial(mon.clone(), Rational::one()))
}

/// Variable set for the radial-scaling integrand: the bundle coordinates
/// plus the scaling parameter that is integrated away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum HomotopyVar {
    Coord(JetCoordinate),
    Param,
}

/// Applies the radial homotopy for the exterior derivative on a
/// star-shaped chart to a closed form with polynomial coefficients,
/// producing a potential one degree down:
///
/// `K(c dz^{j_1} ^ ... ^ dz^{j_p}) = sum_k (-1)^{k-1} z^{j_k}
///  [∫_0^1 t^{p-1} c(t z) dt] dz^{j_1} ^ ... omit k ... ^ dz^{j_p}`.
pub fn poincare_homotopy(phi: &FormOnY) -> Result<FormOnY> {
    let chart = phi.chart().clone();
    let p = phi.degree();
    if p == 0 {
        return Err(Error::DegreeOutOfRange {
            op: "homotopy",
            degree: 0,
            expected: "at least 1".into(),
        });
    }
    let n = chart.base_dim();
    let mut out = FormOnY::zero(chart.clone(), p - 1)?;
    for (word, coeff) in phi.terms() {
        for (atom, exp) in coeff.terms().flat_map(|(mon, _)| mon.factors()) {
            if *exp < 0 || atom.is_func() {
                return Err(Error::NonPolynomial {
                    context: "homotopy source",
                    atom: factor_label(&chart, atom, *exp),
                });
            }
        }
        // Scale every coordinate by the parameter and integrate it out.
        let mut scaled = coeff.map_vars(&|v| HomotopyVar::Coord(*v));
        let mut seen: BTreeSet<JetCoordinate> = BTreeSet::new();
        coeff.for_each_coordinate(&mut |c| {
            seen.insert(*c);
        });
        let param = symexpr::Expr::<HomotopyVar, Rational>::coordinate(HomotopyVar::Param);
        for c in &seen {
            let image = &param * &symexpr::Expr::coordinate(HomotopyVar::Coord(*c));
            scaled = scaled.substitute(&symexpr::Atom::Coord(HomotopyVar::Coord(*c)), &image)?;
        }
        let integrand = &scaled * &param.pow_uint(p as u32 - 1);
        let integral = integrand
            .integrate_unit(&HomotopyVar::Param)?
            .map_vars(&|v| match v {
                HomotopyVar::Coord(c) => *c,
                HomotopyVar::Param => unreachable!("parameter was integrated out"),
            });
        if integral.is_zero() {
            continue;
        }
        for (k, &jk) in word.iter().enumerate() {
            let z = if jk < n {
                chart.base_coord(jk)
            } else {
                chart.fibre_coord(jk - n)
            };
            let mut term = &z * &integral;
            if k % 2 == 1 {
                term = -term;
            }
            let mut rest: Vec<usize> = word.to_vec();
            rest.remove(k);
            if !term.is_zero() {
                out.add_term(&rest, term)?;
            }
        }
    }
    Ok(out)
}

/// An exact certificate that a density is variationally trivial: the source
/// form `phi` with `h0(phi) = L0 omega` and `d phi = 0`, and, whenever the
/// coefficients of `phi` are polynomial, a potential `sigma` with
/// `d sigma = phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivialityCertificate {
    pub phi: FormOnY,
    pub sigma: Option<FormOnY>,
}

impl TrivialityCertificate {
    /// True when a potential is part of the certificate.
    pub fn exact(&self) -> bool {
        self.sigma.is_some()
    }
}

/// Builds the full certificate for a trivial density: reconstructs the
/// source form and, if its coefficients are polynomial, a potential via the
/// homotopy, verifying `d sigma = phi` exactly.
pub fn certify_triviality(l0: &Lagrangian) -> Result<TrivialityCertificate> {
    let phi = reconstruct_phi(l0)?;
    let sigma = match poincare_homotopy(&phi) {
        Ok(sigma) => {
            if sigma.exterior_derivative()? != phi {
                return Err(Error::InternalIdentity {
                    what: "homotopy potential does not differentiate to the source form".into(),
                });
            }
            Some(sigma)
        }
        Err(Error::NonPolynomial { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(TrivialityCertificate { phi, sigma })
}
