//! Acceptance gate: one test per shipping criterion, every check an exact
//! symbolic identity on canonical forms. The whole file is expected to run
//! in well under ten seconds.

use noether_cli::corpus::BUNDLED;
use noether_cli::exprparse::{parse_expr, SourcePos};
use noether_cli::model::{parse_model, ModelFile};
use noether_cli::render::render_form;
use noether_core::jetspace::BundleChart;
use noether_core::noether::{noether_current, same_law_check, verify, LawForm};
use noether_core::sampling::Sampler;
use noether_core::symmetry::{
    lie_derivative_el, lie_derivative_lagrangian, InvarianceClass,
};
use noether_core::variational::{
    boundary_current, euler_lagrange, first_variation_decompose, poincare_homotopy,
    reconstruct_phi, Lagrangian,
};
use noether_core::Expr;
use std::process::Command;

/// Parses one of the models compiled into the binary.
fn bundled(name: &str) -> ModelFile {
    let (_, text) = BUNDLED
        .iter()
        .find(|(file, _)| *file == name)
        .expect("bundled corpus contains the requested model");
    parse_model(name, text).expect("bundled models parse")
}

/// Parses an oracle expression over the model's chart.
fn oracle(model: &ModelFile, src: &str) -> Expr {
    parse_expr(src, &model.chart, &SourcePos::new("oracle", 1, 1)).expect("oracles parse")
}

/// The four bundle shapes the randomized criteria sweep: one or two base
/// coordinates crossed with one or two fibre coordinates.
fn shapes() -> Vec<BundleChart> {
    let mut charts = Vec::new();
    for base in [vec!["t"], vec!["x0", "x1"]] {
        for fibre in [vec!["y"], vec!["y1", "y2"]] {
            charts.push(BundleChart::new(base.clone(), fibre).expect("valid chart"));
        }
    }
    charts
}

#[test]
fn criterion_1_euler_lagrange_oracles() {
    let mechanics = bundled("mechanics.model");
    let free = euler_lagrange(mechanics.density("free").unwrap()).unwrap();
    assert_eq!(free.components(), &[oracle(&mechanics, "-y_tt")]);

    let fields2d = bundled("fields2d.model");
    let kg = euler_lagrange(fields2d.density("kg").unwrap()).unwrap();
    assert_eq!(
        kg.components(),
        &[oracle(&fields2d, "-2*y - y_x0x0 - y_x1x1")]
    );

    let driven = euler_lagrange(mechanics.density("driven").unwrap()).unwrap();
    assert_eq!(driven.components(), &[oracle(&mechanics, "-2*t")]);
    println!("PASS criterion 1: Euler-Lagrange oracle suite");
}

#[test]
fn criterion_2_first_variation_residuals_vanish() {
    let mut s = Sampler::new(0xacc2);
    let mut count = 0u32;
    for round in 0..8 {
        let funcs = round % 2 == 1;
        for chart in shapes() {
            for _ in 0..4 {
                let l = s.lagrangian(&chart, funcs);
                let u = s.projectable_field(&chart, funcs);
                let fv = first_variation_decompose(&u, &l).unwrap();
                assert!(
                    fv.residual.is_zero(),
                    "nonzero residual for L = {}",
                    chart.render(l.density())
                );
                count += 1;
            }
        }
    }
    assert!(count >= 100, "population too small: {count}");
    println!("PASS criterion 2: first variational formula on {count} randomized pairs");
}

#[test]
fn criterion_3_lie_derivative_routes_agree() {
    let mut s = Sampler::new(0xacc3);
    let mut count = 0u32;
    for round in 0..8 {
        let funcs = round % 2 == 1;
        for chart in shapes() {
            for _ in 0..4 {
                let l = s.lagrangian(&chart, funcs);
                let u = s.projectable_field(&chart, funcs);
                let through_operator =
                    lie_derivative_el(&u, &euler_lagrange(&l).unwrap()).unwrap();
                let through_density =
                    euler_lagrange(&lie_derivative_lagrangian(&u, &l).unwrap()).unwrap();
                assert_eq!(
                    through_operator.components(),
                    through_density.components(),
                    "routes disagree for L = {}",
                    chart.render(l.density())
                );
                count += 1;
            }
        }
    }
    assert!(count >= 100, "population too small: {count}");
    println!("PASS criterion 3: two-route agreement on {count} randomized pairs");
}

#[test]
fn criterion_4_trivial_densities_certify_and_reconstruct() {
    let mut s = Sampler::new(0xacc4);
    let mut count = 0u32;
    for round in 0..18 {
        for chart in shapes() {
            let n = chart.base_dim();
            let sigma = s.form_on_y(&chart, n - 1);
            let phi = sigma.exterior_derivative().unwrap();
            if phi.is_zero() {
                continue;
            }
            let density = phi.horizontalize().unwrap();
            let l0 = Lagrangian::new(chart.clone(), density.as_density().unwrap().clone())
                .unwrap();
            let el = euler_lagrange(&l0).unwrap();
            assert!(el.is_zero(), "exact density with nonzero Euler-Lagrange");

            let back = reconstruct_phi(&l0).unwrap();
            assert!(back.exterior_derivative().unwrap().is_zero());
            assert_eq!(
                back.horizontalize().unwrap().as_density(),
                Some(l0.density())
            );

            let u = s.projectable_field(&chart, round % 2 == 1);
            let lie = lie_derivative_lagrangian(&u, &l0).unwrap();
            let div = boundary_current(&u, &l0)
                .unwrap()
                .horizontal_divergence()
                .unwrap();
            assert_eq!(Some(lie.density()), div.as_density());
            count += 1;
        }
    }
    assert!(count >= 50, "population too small: {count}");
    println!("PASS criterion 4: triviality suite on {count} exact densities");
}

#[test]
fn criterion_5_flagship_corrected_law() {
    let mechanics = bundled("mechanics.model");
    let chart = &mechanics.chart;
    let report = verify(
        mechanics.field("boost").unwrap(),
        mechanics.density("free").unwrap(),
    )
    .unwrap();
    assert_eq!(report.classification, InvarianceClass::ELInvariantOnly);
    assert_eq!(report.law_form, Some(LawForm::StrictConservation));

    let cert = report.certificate.as_ref().unwrap();
    assert_eq!(render_form(chart, &cert.phi), "dy");
    assert_eq!(render_form(chart, cert.sigma.as_ref().unwrap()), "y");

    let current = report.current.as_ref().unwrap();
    assert_eq!(
        current.as_current().unwrap(),
        &[oracle(&mechanics, "t*y_t - y")]
    );
    assert_eq!(
        report.characteristics.as_deref().unwrap(),
        &[oracle(&mechanics, "-t")]
    );

    // The certified identity, reassembled from scratch: d_t(current) equals
    // Q * E off shell.
    let residual = report.residual.as_ref().unwrap();
    assert_eq!(residual, &oracle(&mechanics, "t*y_tt"));
    let q_times_e = &report.characteristics.as_ref().unwrap()[0] * report.el.component(0);
    assert_eq!(residual, &q_times_e);
    let div = current.horizontal_divergence().unwrap();
    assert_eq!(div.as_density(), Some(residual));
    println!("PASS criterion 5: flagship corrected conservation law");
}

#[test]
fn criterion_6_classical_currents() {
    let mechanics = bundled("mechanics.model");
    let energy = noether_current(
        mechanics.field("translation").unwrap(),
        mechanics.density("oscillator").unwrap(),
    )
    .unwrap();
    assert_eq!(
        energy.as_current().unwrap(),
        &[oracle(&mechanics, "y^2 + 1/2*y_t^2")]
    );

    let twofield = bundled("twofield.model");
    let charge = noether_current(
        twofield.field("rotation").unwrap(),
        twofield.density("kinetic").unwrap(),
    )
    .unwrap();
    assert_eq!(
        charge.as_current().unwrap(),
        &[oracle(&twofield, "y1*y2_t - y1_t*y2")]
    );

    // Both symmetries are strict, and each report's residual identity
    // reassembles exactly as sum(Q^i E_i) = d_lam(flux^lam).
    for (model, field, lagrangian) in [
        (&mechanics, "translation", "oscillator"),
        (&twofield, "rotation", "kinetic"),
    ] {
        let report = verify(
            model.field(field).unwrap(),
            model.density(lagrangian).unwrap(),
        )
        .unwrap();
        assert_eq!(report.classification, InvarianceClass::LagrangianInvariant);
        assert_eq!(report.law_form, Some(LawForm::StrictConservation));
        let q = report.characteristics.as_ref().unwrap();
        let sum = q
            .iter()
            .zip(report.el.components())
            .fold(Expr::zero(), |acc, (q, e)| &acc + &(q * e));
        assert_eq!(report.residual.as_ref(), Some(&sum));
        let div = report
            .current
            .as_ref()
            .unwrap()
            .horizontal_divergence()
            .unwrap();
        assert_eq!(div.as_density(), report.residual.as_ref());
    }
    println!("PASS criterion 6: classical energy and rotation charge");
}

#[test]
fn criterion_7_trivial_shifts_preserve_the_law() {
    let mechanics = bundled("mechanics.model");
    for shift in ["velocity", "cubic"] {
        for field in ["translation", "boost"] {
            let report = same_law_check(
                mechanics.field(field).unwrap(),
                mechanics.density("free").unwrap(),
                mechanics.shift_density(shift).unwrap(),
            )
            .unwrap();
            assert!(report.el_match, "EL changed under {shift} for {field}");
            assert!(
                report.characteristics_match,
                "characteristics changed under {shift} for {field}"
            );
            assert_eq!(
                report.base.el.components(),
                report.shifted.el.components()
            );
            assert_eq!(report.base.characteristics, report.shifted.characteristics);
            // Stronger than required: the certified fluxes coincide too.
            assert_eq!(report.base.current, report.shifted.current);
        }
    }
    println!("PASS criterion 7: conservation law survives trivial shifts");
}

#[test]
fn criterion_8_infrastructure() {
    // Horizontalization intertwines the exterior and total derivatives.
    let mut s = Sampler::new(0xacc8);
    for _ in 0..10 {
        for chart in shapes() {
            let rho = s.form_on_y(&chart, chart.base_dim() - 1);
            let left = rho
                .horizontalize()
                .unwrap()
                .horizontal_divergence()
                .unwrap();
            let right = rho.exterior_derivative().unwrap().horizontalize().unwrap();
            assert_eq!(left, right, "h0 does not intertwine d");
        }
    }

    // The homotopy is a right inverse of d on exact polynomial forms.
    let mut count = 0u32;
    for round in 0..12 {
        for chart in shapes() {
            let top = chart.base_dim() + chart.fibre_dim();
            let sigma = s.form_on_y(&chart, round % top.max(1));
            let phi = sigma.exterior_derivative().unwrap();
            if phi.is_zero() {
                continue;
            }
            let primitive = poincare_homotopy(&phi).unwrap();
            assert_eq!(primitive.exterior_derivative().unwrap(), phi);
            count += 1;
        }
    }
    assert!(count >= 30, "population too small: {count}");

    // Rendered expressions reparse to the same canonical form.
    for round in 0..10 {
        for chart in shapes() {
            let e = s.expr(&chart, 1, 4, 3, round % 2 == 1);
            let rendered = chart.render(&e);
            let back =
                parse_expr(&rendered, &chart, &SourcePos::new("roundtrip", 1, 1)).unwrap();
            assert_eq!(back, e, "round-trip changed {rendered:?}");
            assert_eq!(chart.render(&back), rendered);
        }
    }

    // The binary is deterministic: identical invocations, identical bytes.
    let model = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/mechanics.model");
    for args in [
        vec!["corpus"],
        vec!["-m", model, "verify", "boost", "free"],
        vec!["-m", model, "--format", "json", "verify", "boost", "free"],
    ] {
        let run = |args: &[&str]| {
            Command::new(env!("CARGO_BIN_EXE_noether"))
                .args(args)
                .output()
                .expect("binary runs")
        };
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success(), "exit nonzero for {args:?}");
        assert_eq!(first.stdout, second.stdout, "nondeterministic {args:?}");
        assert!(!first.stdout.is_empty());
    }
    println!("PASS criterion 8: intertwining, homotopy, round-trip, determinism");
}
