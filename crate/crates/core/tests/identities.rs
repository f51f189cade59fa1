//! Seeded identity batteries tying the variational modules together.
//!
//! Every assertion is exact: expressions carry rational coefficients, so
//! equality below means canonical-form equality, not numerical closeness.

use noether_core::jetspace::{total_derivative, BundleChart, JetCoordinate};
use noether_core::noether::{noether_current, verify};
use noether_core::sampling::Sampler;
use noether_core::scalar::ratio;
use noether_core::symmetry::{
    lie_derivative_el, lie_derivative_lagrangian, prolong1, InvarianceClass,
    ProjectableVectorField,
};
use noether_core::variational::{
    boundary_current, euler_lagrange, first_variation_decompose, poincare_cartan, Lagrangian,
};
use noether_core::{Atom, Expr};

fn chart(n: usize, m: usize) -> BundleChart {
    let base: &[&str] = if n == 1 { &["t"] } else { &["x0", "x1"] };
    let fibre: &[&str] = if m == 1 { &["y"] } else { &["y1", "y2"] };
    BundleChart::new(base.iter().copied(), fibre.iter().copied()).unwrap()
}

/// Every bundle shape with one or two base and fibre coordinates.
fn shapes() -> Vec<BundleChart> {
    vec![chart(1, 1), chart(1, 2), chart(2, 1), chart(2, 2)]
}

fn field_sum(a: &ProjectableVectorField, b: &ProjectableVectorField) -> ProjectableVectorField {
    let chart = a.chart().clone();
    let base = (0..chart.base_dim())
        .map(|lam| a.base_component(lam) + b.base_component(lam))
        .collect();
    let fibre = (0..chart.fibre_dim())
        .map(|i| a.fibre_component(i) + b.fibre_component(i))
        .collect();
    ProjectableVectorField::new(chart, base, fibre).unwrap()
}

#[test]
fn first_variation_residual_vanishes() {
    let mut s = Sampler::new(0x0001_f1e7);
    let mut count = 0;
    for round in 0..8 {
        let funcs = round % 2 == 1;
        for chart in shapes() {
            for _ in 0..4 {
                let l = s.lagrangian(&chart, funcs);
                let u = s.projectable_field(&chart, funcs);
                let fv = first_variation_decompose(&u, &l).unwrap();
                assert!(fv.residual.is_zero());
                // Re-derive the split with an independent divergence pass.
                let div = fv.flux.horizontal_divergence().unwrap();
                let rebuilt = &fv.interior + div.as_density().unwrap();
                assert_eq!(fv.lie, rebuilt);
            }
            count += 4;
        }
    }
    assert!(count >= 100);
}

#[test]
fn lie_routes_commute_with_euler_lagrange() {
    let mut s = Sampler::new(0x0002_f1e7);
    let mut count = 0;
    for round in 0..8 {
        let funcs = round % 2 == 1;
        for chart in shapes() {
            for _ in 0..4 {
                let l = s.lagrangian(&chart, funcs);
                let u = s.projectable_field(&chart, funcs);
                let through_density =
                    euler_lagrange(&lie_derivative_lagrangian(&u, &l).unwrap()).unwrap();
                let through_operator =
                    lie_derivative_el(&u, &euler_lagrange(&l).unwrap()).unwrap();
                assert_eq!(through_density.components(), through_operator.components());
            }
            count += 4;
        }
    }
    assert!(count >= 100);
}

#[test]
fn lie_derivatives_are_additive_in_the_field() {
    let mut s = Sampler::new(0x0003_f1e7);
    for chart in shapes() {
        for _ in 0..8 {
            let l = s.lagrangian(&chart, false);
            let u = s.projectable_field(&chart, false);
            let v = s.projectable_field(&chart, false);
            let w = field_sum(&u, &v);
            let lu = lie_derivative_lagrangian(&u, &l).unwrap();
            let lv = lie_derivative_lagrangian(&v, &l).unwrap();
            let lw = lie_derivative_lagrangian(&w, &l).unwrap();
            assert_eq!(lw.density(), &(lu.density() + lv.density()));
            let el = euler_lagrange(&l).unwrap();
            let eu = lie_derivative_el(&u, &el).unwrap();
            let ev = lie_derivative_el(&v, &el).unwrap();
            let ew = lie_derivative_el(&w, &el).unwrap();
            for i in 0..chart.fibre_dim() {
                assert_eq!(ew.component(i), &(eu.component(i) + ev.component(i)));
            }
        }
    }
}

#[test]
fn vertical_fields_reduce_to_momentum_flux() {
    // With no base motion the interior term is u^i E_i and the boundary flux
    // is carried by the momenta alone.
    let mut s = Sampler::new(0x0004_f1e7);
    for chart in shapes() {
        for _ in 0..8 {
            let l = s.lagrangian(&chart, false);
            let fibre: Vec<Expr> = (0..chart.fibre_dim())
                .map(|_| s.expr(&chart, 0, 2, 2, false))
                .collect();
            let base = vec![Expr::zero(); chart.base_dim()];
            let u = ProjectableVectorField::new(chart.clone(), base, fibre.clone()).unwrap();
            let fv = first_variation_decompose(&u, &l).unwrap();
            let el = euler_lagrange(&l).unwrap();
            let mut interior = Expr::zero();
            for (i, comp) in fibre.iter().enumerate() {
                interior = &interior + &(comp * el.component(i));
            }
            assert_eq!(fv.interior, interior);
            let pc = poincare_cartan(&l).unwrap();
            let flux = fv.flux.as_current().unwrap();
            for (lam, got) in flux.iter().enumerate() {
                let mut want = Expr::zero();
                for (i, comp) in fibre.iter().enumerate() {
                    want = &want + &(comp * pc.momentum(i, lam));
                }
                assert_eq!(got, &want);
            }
        }
    }
}

#[test]
fn vertical_prolongations_are_total_derivatives() {
    let mut s = Sampler::new(0x0005_f1e7);
    for chart in shapes() {
        for _ in 0..8 {
            let fibre: Vec<Expr> = (0..chart.fibre_dim())
                .map(|_| s.expr(&chart, 0, 2, 2, false))
                .collect();
            let base = vec![Expr::zero(); chart.base_dim()];
            let u = ProjectableVectorField::new(chart.clone(), base, fibre.clone()).unwrap();
            let p = prolong1(&u).unwrap();
            for (i, comp) in fibre.iter().enumerate() {
                for lam in 0..chart.base_dim() {
                    let direct = total_derivative(&chart, comp, lam).unwrap();
                    assert_eq!(p.jet1_coefficient(i, lam), &direct);
                }
            }
        }
    }
}

#[test]
fn total_derivatives_commute() {
    let mut s = Sampler::new(0x0006_f1e7);
    for chart in shapes() {
        for _ in 0..8 {
            // Order-zero input keeps both iterated derivatives inside the cap.
            let e = s.expr(&chart, 0, 3, 3, true);
            for lam in 0..chart.base_dim() {
                for mu in 0..chart.base_dim() {
                    let ab = total_derivative(&chart, &e, lam)
                        .and_then(|d| total_derivative(&chart, &d, mu))
                        .unwrap();
                    let ba = total_derivative(&chart, &e, mu)
                        .and_then(|d| total_derivative(&chart, &d, lam))
                        .unwrap();
                    assert_eq!(ab, ba);
                }
            }
        }
    }
}

#[test]
fn bracket_current_negates_the_boundary_flux() {
    let mut s = Sampler::new(0x0007_f1e7);
    for chart in shapes() {
        for _ in 0..8 {
            let l = s.lagrangian(&chart, false);
            let u = s.projectable_field(&chart, false);
            let bracket = noether_current(&u, &l).unwrap();
            let flux = boundary_current(&u, &l).unwrap();
            let bracket = bracket.as_current().unwrap();
            let flux = flux.as_current().unwrap();
            for (j, f) in bracket.iter().zip(flux) {
                assert_eq!(*j, f.scale(&ratio(-1, 1)));
            }
        }
    }
}

#[test]
fn residuals_vanish_on_shell_for_mechanical_densities() {
    // L = 1/2 y_t^2 - W(y): the operator is affine in y_tt with a constant
    // leading coefficient, so E = 0 solves for y_tt and substituting that
    // solution kills both the operator and the conservation residual.
    let line = chart(1, 1);
    let y = Expr::coordinate(JetCoordinate::Fibre(0));
    let yt = Expr::coordinate(JetCoordinate::Jet1 { field: 0, deriv: 0 });
    let ytt = Atom::Coord(JetCoordinate::jet2(0, 0, 0));
    let mut s = Sampler::new(0x0008_f1e7);
    for _ in 0..16 {
        let mut w = Expr::zero();
        for k in 1..=3u32 {
            w = &w + &y.pow_uint(k).scale(&s.coeff());
        }
        let density = &yt.pow_uint(2).scale(&ratio(1, 2)) - &w;
        let l = Lagrangian::new(line.clone(), density).unwrap();
        let u = ProjectableVectorField::new(line.clone(), vec![Expr::one()], vec![Expr::zero()])
            .unwrap();
        let report = verify(&u, &l).unwrap();
        assert_eq!(report.classification, InvarianceClass::LagrangianInvariant);
        assert!(report.el.is_affine_in_jet2());
        let solved = w.diff(&JetCoordinate::Fibre(0)).unwrap().scale(&ratio(-1, 1));
        assert!(report.el.component(0).substitute(&ytt, &solved).unwrap().is_zero());
        let residual = report.residual.expect("strict laws carry a residual");
        assert!(residual.substitute(&ytt, &solved).unwrap().is_zero());
    }
}
