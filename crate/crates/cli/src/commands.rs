//! One entry point per subcommand, shared by the binary and the test suite.
//!
//! Every command produces both a text body and a JSON document with the same
//! fields, plus the process exit code: 0 for success or a confirmed check,
//! 1 for a failed check or a symmetry with no conservation law, 2 for input
//! errors. Diagnostics and errors travel through [`Failure`].

use crate::diag::Diagnostic;
use crate::model::ModelFile;
use crate::render::{keyed_json, keyed_lines, render_form, report_json, report_lines};
use noether_core::jetspace::JetCoordinate;
use noether_core::noether::{noether_current, same_law_check, verify};
use noether_core::symmetry::{
    lie_derivative_el, lie_derivative_lagrangian, prolong1, prolong2, InvarianceClass,
    ProjectableVectorField, ProlongedVectorField,
};
use noether_core::variational::{
    certify_triviality, euler_lagrange, first_variation_decompose, is_variationally_trivial,
    Lagrangian,
};
use noether_core::{Error, Expr};
use serde_json::{json, Map, Value};

/// A finished command: text and JSON views of the same result.
#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl CommandOutput {
    fn new(lines: Vec<String>, json: Value, exit: i32) -> Self {
        CommandOutput {
            text: lines.join("\n"),
            json,
            exit,
        }
    }
}

/// Why a command could not produce a result.
#[derive(Debug)]
pub enum Failure {
    /// A positioned rejection of a model file or expression.
    Diag(Diagnostic),
    /// A malformed invocation: unknown names, unreadable files.
    Input(String),
    /// A check that ran and failed, or a violated precondition.
    Check(String),
}

impl Failure {
    pub fn exit(&self) -> i32 {
        match self {
            Failure::Diag(_) | Failure::Input(_) => 2,
            Failure::Check(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Diag(d) => d.to_string(),
            Failure::Input(m) | Failure::Check(m) => format!("error: {m}"),
        }
    }
}

/// Maps engine errors: violated invariants are failed checks, the rest are
/// input problems.
fn engine(e: Error) -> Failure {
    match e {
        Error::InternalIdentity { .. } | Error::NotTrivial { .. } => Failure::Check(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}

fn named_density<'a>(model: &'a ModelFile, name: &str) -> Result<&'a Lagrangian, Failure> {
    model
        .density(name)
        .ok_or_else(|| Failure::Input(format!("no density named {name:?} in the model")))
}

fn named_shift<'a>(model: &'a ModelFile, name: &str) -> Result<&'a Lagrangian, Failure> {
    model
        .shift_density(name)
        .ok_or_else(|| Failure::Input(format!("no density named {name:?} in the model")))
}

fn named_field<'a>(model: &'a ModelFile, name: &str) -> Result<&'a ProjectableVectorField, Failure> {
    model
        .field(name)
        .ok_or_else(|| Failure::Input(format!("no field named {name:?} in the model")))
}

/// `el <L>`: the Euler-Lagrange components of a named density.
pub fn run_el(model: &ModelFile, lagrangian: &str) -> Result<CommandOutput, Failure> {
    let l = named_density(model, lagrangian)?;
    let el = euler_lagrange(l).map_err(engine)?;
    let chart = &model.chart;
    let lines = keyed_lines(chart, "E", chart.fibre_names(), el.components());
    let json = json!({
        "command": "el",
        "lagrangian": lagrangian,
        "E": keyed_json(chart, chart.fibre_names(), el.components()),
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// Coordinate-keyed expressions in chart declaration order.
type NamedExprs = Vec<(String, Expr)>;

fn prolongation_maps(model: &ModelFile, p: &ProlongedVectorField) -> (NamedExprs, NamedExprs) {
    let chart = &model.chart;
    let u = p.field();
    let mut comps = Vec::new();
    for lam in 0..chart.base_dim() {
        let name = chart.coordinate_name(&JetCoordinate::Base(lam));
        comps.push((name, u.base_component(lam).clone()));
    }
    for i in 0..chart.fibre_dim() {
        let name = chart.coordinate_name(&JetCoordinate::Fibre(i));
        comps.push((name, u.fibre_component(i).clone()));
    }
    let mut jets = Vec::new();
    for i in 0..chart.fibre_dim() {
        for lam in 0..chart.base_dim() {
            let name = chart.coordinate_name(&JetCoordinate::Jet1 { field: i, deriv: lam });
            jets.push((name, p.jet1_coefficient(i, lam).clone()));
        }
    }
    if p.order() >= 2 {
        for i in 0..chart.fibre_dim() {
            for a in 0..chart.base_dim() {
                for b in a..chart.base_dim() {
                    let name = chart.coordinate_name(&JetCoordinate::jet2(i, a, b));
                    let coeff = p
                        .jet2_coefficient(i, a, b)
                        .expect("second prolongations carry all second-order coefficients");
                    jets.push((name, coeff.clone()));
                }
            }
        }
    }
    (comps, jets)
}

/// `prolong <u> --order 1|2`: the prolonged field's coefficients.
pub fn run_prolong(model: &ModelFile, field: &str, order: u8) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let p = match order {
        1 => prolong1(u).map_err(engine)?,
        2 => prolong2(u).map_err(engine)?,
        _ => return Err(Failure::Input("order must be 1 or 2".into())),
    };
    let chart = &model.chart;
    let (comps, jets) = prolongation_maps(model, &p);
    let mut lines = Vec::new();
    let mut u_map = Map::new();
    for (name, e) in &comps {
        lines.push(format!("u[{name}] = {}", chart.render(e)));
        u_map.insert(name.clone(), Value::String(chart.render(e)));
    }
    let mut xi_map = Map::new();
    for (name, e) in &jets {
        lines.push(format!("xi[{name}] = {}", chart.render(e)));
        xi_map.insert(name.clone(), Value::String(chart.render(e)));
    }
    let json = json!({
        "command": "prolong",
        "field": field,
        "order": order,
        "u": Value::Object(u_map),
        "xi": Value::Object(xi_map),
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// `lie <u> <L>`: the Lie derivative density.
pub fn run_lie(model: &ModelFile, field: &str, lagrangian: &str) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let l = named_density(model, lagrangian)?;
    let lie = lie_derivative_lagrangian(u, l).map_err(engine)?;
    let chart = &model.chart;
    let lines = vec![format!("density = {}", chart.render(lie.density()))];
    let json = json!({
        "command": "lie",
        "field": field,
        "lagrangian": lagrangian,
        "density": chart.render(lie.density()),
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// `decompose <u> <L>`: the first variation split into interior and
/// boundary parts, with its certified zero residual.
pub fn run_decompose(
    model: &ModelFile,
    field: &str,
    lagrangian: &str,
) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let l = named_density(model, lagrangian)?;
    let fv = first_variation_decompose(u, l).map_err(engine)?;
    let chart = &model.chart;
    let flux = fv
        .flux
        .as_current()
        .expect("the boundary flux sits one degree below the volume form");
    let mut lines = vec![
        format!("lie = {}", chart.render(&fv.lie)),
        format!("interior = {}", chart.render(&fv.interior)),
    ];
    lines.extend(keyed_lines(chart, "flux", chart.base_names(), flux));
    lines.push(format!("residual = {}", chart.render(&fv.residual)));
    let json = json!({
        "command": "decompose",
        "field": field,
        "lagrangian": lagrangian,
        "lie": chart.render(&fv.lie),
        "interior": chart.render(&fv.interior),
        "flux": keyed_json(chart, chart.base_names(), flux),
        "residual": chart.render(&fv.residual),
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// `trivial <L0>`: the triviality verdict with its certificate.
pub fn run_trivial(model: &ModelFile, name: &str) -> Result<CommandOutput, Failure> {
    let l0 = named_shift(model, name)?;
    let chart = &model.chart;
    if !is_variationally_trivial(l0).map_err(engine)? {
        let el = euler_lagrange(l0).map_err(engine)?;
        let mut lines = vec!["trivial = false".to_string()];
        lines.extend(keyed_lines(chart, "E", chart.fibre_names(), el.components()));
        let json = json!({
            "command": "trivial",
            "lagrangian": name,
            "trivial": false,
            "E": keyed_json(chart, chart.fibre_names(), el.components()),
        });
        return Ok(CommandOutput::new(lines, json, 1));
    }
    let cert = certify_triviality(l0).map_err(engine)?;
    let mut lines = vec!["trivial = true".to_string()];
    lines.push(format!("phi = {}", render_form(chart, &cert.phi)));
    let sigma = match &cert.sigma {
        Some(sigma) => {
            lines.push(format!("sigma = {}", render_form(chart, sigma)));
            Value::String(render_form(chart, sigma))
        }
        None => {
            lines.push("sigma = none".to_string());
            Value::Null
        }
    };
    let json = json!({
        "command": "trivial",
        "lagrangian": name,
        "trivial": true,
        "phi": render_form(chart, &cert.phi),
        "sigma": sigma,
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// `current <u> <L>`: the conserved current of the symmetry bracket.
pub fn run_current(
    model: &ModelFile,
    field: &str,
    lagrangian: &str,
) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let l = named_density(model, lagrangian)?;
    let current = noether_current(u, l).map_err(engine)?;
    let chart = &model.chart;
    let comps = current
        .as_current()
        .expect("conserved currents sit one degree below the volume form");
    let lines = keyed_lines(chart, "J", chart.base_names(), comps);
    let json = json!({
        "command": "current",
        "field": field,
        "lagrangian": lagrangian,
        "J": keyed_json(chart, chart.base_names(), comps),
    });
    Ok(CommandOutput::new(lines, json, 0))
}

/// `verify <u> <L>`: classification, certificate, conservation law, and the
/// certified residual identity.
pub fn run_verify(
    model: &ModelFile,
    field: &str,
    lagrangian: &str,
) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let l = named_density(model, lagrangian)?;
    let report = verify(u, l).map_err(engine)?;
    let chart = &model.chart;
    let lines = report_lines(chart, &report, "");
    let mut json = Map::new();
    json.insert("command".into(), Value::String("verify".into()));
    json.insert("field".into(), Value::String(field.into()));
    json.insert("lagrangian".into(), Value::String(lagrangian.into()));
    let Value::Object(body) = report_json(chart, &report) else {
        unreachable!("reports serialize to objects");
    };
    json.extend(body);
    let exit = if report.classification == InvarianceClass::NotInvariant {
        1
    } else {
        0
    };
    Ok(CommandOutput::new(lines, Value::Object(json), exit))
}

/// `identity <u> <L>`: both Lie-derivative routes and their difference.
pub fn run_identity(
    model: &ModelFile,
    field: &str,
    lagrangian: &str,
) -> Result<CommandOutput, Failure> {
    let u = named_field(model, field)?;
    let l = named_density(model, lagrangian)?;
    let chart = &model.chart;
    let through_operator =
        lie_derivative_el(u, &euler_lagrange(l).map_err(engine)?).map_err(engine)?;
    let through_density =
        euler_lagrange(&lie_derivative_lagrangian(u, l).map_err(engine)?).map_err(engine)?;
    let difference: Vec<Expr> = through_operator
        .components()
        .iter()
        .zip(through_density.components())
        .map(|(a, b)| a - b)
        .collect();
    let agree = difference.iter().all(Expr::is_zero);
    let mut lines = keyed_lines(
        chart,
        "route-operator",
        chart.fibre_names(),
        through_operator.components(),
    );
    lines.extend(keyed_lines(
        chart,
        "route-density",
        chart.fibre_names(),
        through_density.components(),
    ));
    lines.extend(keyed_lines(
        chart,
        "difference",
        chart.fibre_names(),
        &difference,
    ));
    lines.push(format!("identity = {}", if agree { "ok" } else { "violated" }));
    let json = json!({
        "command": "identity",
        "field": field,
        "lagrangian": lagrangian,
        "route-operator": keyed_json(chart, chart.fibre_names(), through_operator.components()),
        "route-density": keyed_json(chart, chart.fibre_names(), through_density.components()),
        "difference": keyed_json(chart, chart.fibre_names(), &difference),
        "identity": if agree { "ok" } else { "violated" },
    });
    Ok(CommandOutput::new(lines, json, if agree { 0 } else { 1 }))
}

/// `samelaw <L> <L0> <u>`: the conservation law before and after a trivial
/// shift of the density.
pub fn run_samelaw(
    model: &ModelFile,
    lagrangian: &str,
    shift: &str,
    field: &str,
) -> Result<CommandOutput, Failure> {
    let l = named_density(model, lagrangian)?;
    let l0 = named_shift(model, shift)?;
    let u = named_field(model, field)?;
    let report = same_law_check(u, l, l0).map_err(engine)?;
    let chart = &model.chart;
    let mut lines = vec![
        format!("el-match = {}", report.el_match),
        format!("characteristics-match = {}", report.characteristics_match),
    ];
    lines.extend(report_lines(chart, &report.base, "base."));
    lines.extend(report_lines(chart, &report.shifted, "shifted."));
    let json = json!({
        "command": "samelaw",
        "lagrangian": lagrangian,
        "shift": shift,
        "field": field,
        "el-match": report.el_match,
        "characteristics-match": report.characteristics_match,
        "base": report_json(chart, &report.base),
        "shifted": report_json(chart, &report.shifted),
    });
    let ok = report.el_match && report.characteristics_match;
    Ok(CommandOutput::new(lines, json, if ok { 0 } else { 1 }))
}
