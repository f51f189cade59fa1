//! Deterministic text and JSON views of engine objects.
//!
//! Output is ASCII: expressions render through the chart's coordinate names,
//! exterior forms as `coeff*dx^dy` sums, and vector-valued data as component
//! lists keyed by coordinate name. JSON documents carry the same fields as
//! the text lines, with every expression as its rendered string.

use noether_core::jetspace::{BundleChart, FormOnY, HorizontalForm};
use noether_core::noether::NoetherReport;
use noether_core::scalar::ratio;
use noether_core::Expr;
use serde_json::{Map, Value};

/// Renders an exterior form as a sum of wedge monomials.
pub fn render_form(chart: &BundleChart, phi: &FormOnY) -> String {
    if phi.is_zero() {
        return "0".to_string();
    }
    let mut pieces = Vec::new();
    for (word, coeff) in phi.terms() {
        let basis = word
            .iter()
            .map(|&idx| chart.one_form_name(idx))
            .collect::<Vec<_>>()
            .join("^");
        let piece = if basis.is_empty() {
            chart.render(coeff)
        } else if coeff.is_one() {
            basis
        } else if coeff.as_constant() == Some(ratio(-1, 1)) {
            format!("-{basis}")
        } else if coeff.n_terms() == 1 {
            format!("{}*{basis}", chart.render(coeff))
        } else {
            format!("({})*{basis}", chart.render(coeff))
        };
        pieces.push(piece);
    }
    pieces.join(" + ")
}

/// Text lines `label[key] = expr` for components keyed by coordinate names.
pub fn keyed_lines(
    chart: &BundleChart,
    label: &str,
    keys: &[String],
    comps: &[Expr],
) -> Vec<String> {
    keys.iter()
        .zip(comps)
        .map(|(key, e)| format!("{label}[{key}] = {}", chart.render(e)))
        .collect()
}

/// JSON object mapping each key to its rendered component.
pub fn keyed_json(chart: &BundleChart, keys: &[String], comps: &[Expr]) -> Value {
    let mut map = Map::new();
    for (key, e) in keys.iter().zip(comps) {
        map.insert(key.clone(), Value::String(chart.render(e)));
    }
    Value::Object(map)
}

/// The components of a horizontal current, keyed by base coordinate.
fn current_parts(h: &HorizontalForm) -> &[Expr] {
    h.as_current()
        .expect("conserved currents are one degree below the volume form")
}

/// Text lines for a classification report; `prefix` namespaces the keys when
/// two reports print side by side.
pub fn report_lines(chart: &BundleChart, report: &NoetherReport, prefix: &str) -> Vec<String> {
    let mut lines = Vec::new();
    lines.push(format!(
        "{prefix}classification = {}",
        report.classification.label()
    ));
    lines.push(format!("{prefix}lie = {}", chart.render(&report.lie_density)));
    lines.extend(keyed_lines(
        chart,
        &format!("{prefix}E"),
        chart.fibre_names(),
        report.el.components(),
    ));
    if let Some(cert) = &report.certificate {
        lines.push(format!("{prefix}phi = {}", render_form(chart, &cert.phi)));
        match &cert.sigma {
            Some(sigma) => lines.push(format!("{prefix}sigma = {}", render_form(chart, sigma))),
            None => lines.push(format!("{prefix}sigma = none")),
        }
    }
    match &report.law_form {
        Some(law) => lines.push(format!("{prefix}law = {}", law.label())),
        None => lines.push(format!("{prefix}law = none")),
    }
    if let Some(current) = &report.current {
        lines.extend(keyed_lines(
            chart,
            &format!("{prefix}current"),
            chart.base_names(),
            current_parts(current),
        ));
    }
    if let Some(q) = &report.characteristics {
        lines.extend(keyed_lines(
            chart,
            &format!("{prefix}Q"),
            chart.fibre_names(),
            q,
        ));
    }
    if let Some(residual) = &report.residual {
        lines.push(format!("{prefix}residual = {}", chart.render(residual)));
    }
    lines
}

/// JSON object with the same fields as [`report_lines`].
pub fn report_json(chart: &BundleChart, report: &NoetherReport) -> Value {
    let mut map = Map::new();
    map.insert(
        "classification".into(),
        Value::String(report.classification.label().into()),
    );
    map.insert(
        "lie".into(),
        Value::String(chart.render(&report.lie_density)),
    );
    map.insert(
        "E".into(),
        keyed_json(chart, chart.fibre_names(), report.el.components()),
    );
    if let Some(cert) = &report.certificate {
        map.insert("phi".into(), Value::String(render_form(chart, &cert.phi)));
        map.insert(
            "sigma".into(),
            match &cert.sigma {
                Some(sigma) => Value::String(render_form(chart, sigma)),
                None => Value::Null,
            },
        );
    }
    map.insert(
        "law".into(),
        match &report.law_form {
            Some(law) => Value::String(law.label().into()),
            None => Value::Null,
        },
    );
    if let Some(current) = &report.current {
        map.insert(
            "current".into(),
            keyed_json(chart, chart.base_names(), current_parts(current)),
        );
    }
    if let Some(q) = &report.characteristics {
        map.insert("Q".into(), keyed_json(chart, chart.fibre_names(), q));
    }
    if let Some(residual) = &report.residual {
        map.insert("residual".into(), Value::String(chart.render(residual)));
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use noether_core::jetspace::JetCoordinate;

    #[test]
    fn forms_render_with_wedges_and_coefficient_guards() {
        let chart = BundleChart::new(["x0", "x1"], ["y"]).unwrap();
        let mut phi = FormOnY::zero(chart.clone(), 2).unwrap();
        phi.add_term(&[0, 2], Expr::one()).unwrap();
        assert_eq!(render_form(&chart, &phi), "dx0^dy");
        let y = Expr::coordinate(JetCoordinate::Fibre(0));
        let mut phi = FormOnY::zero(chart.clone(), 1).unwrap();
        phi.add_term(&[2], y.scale(&ratio(3, 1))).unwrap();
        assert_eq!(render_form(&chart, &phi), "3*y*dy");
        let mut phi = FormOnY::zero(chart.clone(), 1).unwrap();
        let sum = &Expr::coordinate(JetCoordinate::Base(1)) + &Expr::one();
        phi.add_term(&[0], sum).unwrap();
        assert_eq!(render_form(&chart, &phi), "(1 + x1)*dx0");
        let mut phi = FormOnY::zero(chart.clone(), 1).unwrap();
        phi.add_term(&[2], Expr::one().scale(&ratio(-1, 1))).unwrap();
        assert_eq!(render_form(&chart, &phi), "-dy");
        let zero = FormOnY::zero(chart.clone(), 1).unwrap();
        assert_eq!(render_form(&chart, &zero), "0");
        let mut sigma = FormOnY::zero(chart.clone(), 0).unwrap();
        sigma.add_term(&[], y).unwrap();
        assert_eq!(render_form(&chart, &sigma), "y");
    }

    #[test]
    fn keyed_lines_follow_declaration_order() {
        let chart = BundleChart::new(["t"], ["y1", "y2"]).unwrap();
        let comps = vec![Expr::one(), Expr::zero()];
        let lines = keyed_lines(&chart, "Q", chart.fibre_names(), &comps);
        assert_eq!(lines, vec!["Q[y1] = 1", "Q[y2] = 0"]);
    }
}
