//! Batch checks over a directory of model files.
//!
//! Every model is swept through the whole pipeline: Euler-Lagrange
//! computation, expression round-trips through the renderer and parser,
//! first-variation residuals, the two Lie-derivative routes, symmetry
//! verification, triviality certificates, and shifted-law comparisons.
//! A built-in corpus runs when no directory is given.

use crate::commands::{CommandOutput, Failure};
use crate::exprparse::{parse_expr, SourcePos};
use crate::model::{parse_model, ModelFile};
use noether_core::noether::{same_law_check, verify};
use noether_core::symmetry::{lie_derivative_el, lie_derivative_lagrangian};
use noether_core::variational::{
    certify_triviality, euler_lagrange, first_variation_decompose, is_variationally_trivial,
};
use serde_json::json;
use std::path::Path;

/// Models compiled into the binary, exercised when no directory is given.
pub const BUNDLED: &[(&str, &str)] = &[
    ("fields2d.model", include_str!("../corpus/fields2d.model")),
    ("mechanics.model", include_str!("../corpus/mechanics.model")),
    (
        "transcendental.model",
        include_str!("../corpus/transcendental.model"),
    ),
    ("twofield.model", include_str!("../corpus/twofield.model")),
];

/// Records one named check per line and keeps the failures.
struct Tally {
    lines: Vec<String>,
    failures: Vec<String>,
    checks: u64,
}

impl Tally {
    fn new() -> Self {
        Tally {
            lines: Vec::new(),
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, label: String, ok: bool) {
        self.checks += 1;
        if ok {
            self.lines.push(format!("ok {label}"));
        } else {
            self.lines.push(format!("FAIL {label}"));
            self.failures.push(label);
        }
    }
}

/// An expression survives rendering and reparsing unchanged.
fn roundtrips(model: &ModelFile, e: &noether_core::Expr) -> bool {
    let rendered = model.chart.render(e);
    let pos = SourcePos::new("corpus", 1, 1);
    match parse_expr(&rendered, &model.chart, &pos) {
        Ok(back) => back == *e && model.chart.render(&back) == rendered,
        Err(_) => false,
    }
}

fn run_checks(tally: &mut Tally, file: &str, model: &ModelFile) {
    let densities: Vec<_> = model
        .lagrangians
        .iter()
        .chain(&model.trivials)
        .collect();
    for (name, l) in &densities {
        let affine = euler_lagrange(l).map(|el| el.is_affine_in_jet2());
        tally.check(format!("{file}::el::{name}"), affine == Ok(true));
        tally.check(
            format!("{file}::roundtrip::{name}"),
            roundtrips(model, l.density()),
        );
    }
    for (uname, u) in &model.fields {
        let mut ok = true;
        for lam in 0..model.chart.base_dim() {
            ok &= roundtrips(model, u.base_component(lam));
        }
        for i in 0..model.chart.fibre_dim() {
            ok &= roundtrips(model, u.fibre_component(i));
        }
        tally.check(format!("{file}::roundtrip::{uname}"), ok);
    }
    for (uname, u) in &model.fields {
        for (lname, l) in &densities {
            let split = first_variation_decompose(u, l);
            tally.check(
                format!("{file}::decompose::{uname},{lname}"),
                split.map(|fv| fv.residual.is_zero()) == Ok(true),
            );
            let routes = euler_lagrange(l)
                .and_then(|el| lie_derivative_el(u, &el))
                .and_then(|through_operator| {
                    let through_density =
                        euler_lagrange(&lie_derivative_lagrangian(u, l)?)?;
                    Ok(through_operator.components() == through_density.components())
                });
            tally.check(format!("{file}::routes::{uname},{lname}"), routes == Ok(true));
            tally.check(
                format!("{file}::verify::{uname},{lname}"),
                verify(u, l).is_ok(),
            );
        }
    }
    for (tname, t) in &model.trivials {
        let certified = is_variationally_trivial(t) == Ok(true)
            && certify_triviality(t).is_ok_and(|cert| {
                let closed = cert
                    .phi
                    .exterior_derivative()
                    .is_ok_and(|d| d.is_zero());
                let recovers = cert
                    .phi
                    .horizontalize()
                    .is_ok_and(|h| h.as_density() == Some(t.density()));
                closed && recovers
            });
        tally.check(format!("{file}::trivial::{tname}"), certified);
    }
    for (lname, l) in &model.lagrangians {
        for (tname, t) in &model.trivials {
            for (uname, u) in &model.fields {
                let same = same_law_check(u, l, t)
                    .map(|r| r.el_match && r.characteristics_match);
                tally.check(
                    format!("{file}::samelaw::{lname},{tname},{uname}"),
                    same == Ok(true),
                );
            }
        }
    }
}

/// Runs the corpus from `dir`, or the built-in models when `dir` is `None`.
pub fn run(dir: Option<&Path>) -> Result<CommandOutput, Failure> {
    let sources: Vec<(String, String)> = match dir {
        None => BUNDLED
            .iter()
            .map(|(name, text)| (name.to_string(), text.to_string()))
            .collect(),
        Some(dir) => {
            let entries = std::fs::read_dir(dir)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", dir.display())))?;
            let mut paths: Vec<_> = entries
                .filter_map(|r| r.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "model"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(Failure::Input(format!(
                    "no .model files in {}",
                    dir.display()
                )));
            }
            let mut sources = Vec::new();
            for path in paths {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
                let name = path
                    .file_name()
                    .expect("read_dir yields named entries")
                    .to_string_lossy()
                    .into_owned();
                sources.push((name, text));
            }
            sources
        }
    };
    let mut tally = Tally::new();
    let mut files = Vec::new();
    for (name, text) in &sources {
        files.push(name.clone());
        match parse_model(name, text) {
            Ok(model) => run_checks(&mut tally, name, &model),
            Err(d) => tally.check(format!("{name}::parse ({d})"), false),
        }
    }
    tally.lines.push(format!("checks = {}", tally.checks));
    tally
        .lines
        .push(format!("failures = {}", tally.failures.len()));
    let exit = if tally.failures.is_empty() { 0 } else { 1 };
    let json = json!({
        "command": "corpus",
        "checks": tally.checks,
        "failures": tally.failures,
        "files": files,
    });
    Ok(CommandOutput {
        text: tally.lines.join("\n"),
        json,
        exit,
    })
}
