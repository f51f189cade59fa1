//! Model files: one bundle chart plus named densities and vector fields.
//!
//! ```text
//! # comments run to end of line
//! [bundle]
//! base = t
//! fiber = y
//!
//! [lagrangian L]
//! density = 1/2*y_t^2
//!
//! [field u]
//! y = t          # keys are coordinate names; omitted components are zero
//!
//! [trivial L0]
//! density = 3*y^2*y_t
//! ```
//!
//! Lagrangian and trivial names share one namespace (both are densities);
//! field names have their own. Files may use LF or CRLF line endings.

use crate::diag::{self, Diagnostic};
use crate::exprparse::{parse_expr, SourcePos, FUNCTION_NAMES};
use noether_core::jetspace::{jet_order, BundleChart, JetCoordinate};
use noether_core::symmetry::ProjectableVectorField;
use noether_core::variational::Lagrangian;
use noether_core::{Error, Expr};

/// A parsed model: the chart and the named objects, in declaration order.
#[derive(Debug)]
pub struct ModelFile {
    pub chart: BundleChart,
    pub lagrangians: Vec<(String, Lagrangian)>,
    pub trivials: Vec<(String, Lagrangian)>,
    pub fields: Vec<(String, ProjectableVectorField)>,
}

impl ModelFile {
    /// Looks up a density by name, preferring plain Lagrangians.
    pub fn density(&self, name: &str) -> Option<&Lagrangian> {
        lookup(&self.lagrangians, name).or_else(|| lookup(&self.trivials, name))
    }

    /// Looks up a density by name, preferring declared trivial ones.
    pub fn shift_density(&self, name: &str) -> Option<&Lagrangian> {
        lookup(&self.trivials, name).or_else(|| lookup(&self.lagrangians, name))
    }

    pub fn field(&self, name: &str) -> Option<&ProjectableVectorField> {
        lookup(&self.fields, name)
    }
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

enum SectionKind {
    Bundle,
    Lagrangian(String),
    Field(String),
    Trivial(String),
}

struct RawEntry {
    key: String,
    line: usize,
    key_column: usize,
    value: String,
    value_column: usize,
}

struct RawSection {
    kind: SectionKind,
    line: usize,
    column: usize,
    entries: Vec<RawEntry>,
}

/// 1-based character column of the byte offset `idx` in `line`.
fn char_col(line: &str, idx: usize) -> usize {
    line[..idx].chars().count() + 1
}

fn scan_sections(file: &str, text: &str) -> Result<Vec<RawSection>, Diagnostic> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut line = raw.strip_suffix('\r').unwrap_or(raw);
        if let Some(hash) = line.find('#') {
            line = &line[..hash];
        }
        if line.trim().is_empty() {
            continue;
        }
        let start = line.len() - line.trim_start().len();
        let column = char_col(line, start);
        let body = line.trim();
        if let Some(inner) = body.strip_prefix('[') {
            let Some(inner) = inner.strip_suffix(']') else {
                return Err(Diagnostic::new(
                    file,
                    line_no,
                    column,
                    diag::SECTION_SYNTAX,
                    "section header must close with ']'",
                ));
            };
            let words: Vec<&str> = inner.split_whitespace().collect();
            let fail = |code, message: String| Diagnostic::new(file, line_no, column, code, message);
            let kind = match words.as_slice() {
                [] => {
                    return Err(fail(diag::SECTION_SYNTAX, "empty section header".into()));
                }
                ["bundle"] => SectionKind::Bundle,
                ["bundle", ..] => {
                    return Err(fail(
                        diag::SECTION_SYNTAX,
                        "the bundle section takes no name".into(),
                    ));
                }
                [kind @ ("lagrangian" | "field" | "trivial"), name] => {
                    if name.is_empty()
                        || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                    {
                        return Err(fail(
                            diag::SECTION_SYNTAX,
                            format!("invalid {kind} name {name:?}"),
                        ));
                    }
                    match *kind {
                        "lagrangian" => SectionKind::Lagrangian(name.to_string()),
                        "field" => SectionKind::Field(name.to_string()),
                        _ => SectionKind::Trivial(name.to_string()),
                    }
                }
                [kind @ ("lagrangian" | "field" | "trivial")] => {
                    return Err(fail(
                        diag::SECTION_SYNTAX,
                        format!("section [{kind}] needs a name"),
                    ));
                }
                [kind @ ("lagrangian" | "field" | "trivial"), ..] => {
                    return Err(fail(
                        diag::SECTION_SYNTAX,
                        format!("section [{kind}] takes exactly one name"),
                    ));
                }
                [kind, ..] => {
                    return Err(Diagnostic::new(
                        file,
                        line_no,
                        column,
                        diag::SECTION_KIND,
                        format!("unknown section kind {kind:?}"),
                    ));
                }
            };
            sections.push(RawSection {
                kind,
                line: line_no,
                column,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Diagnostic::new(
                file,
                line_no,
                column,
                diag::ENTRY_SYNTAX,
                "expected 'key = value'",
            ));
        };
        let key = line[..eq].trim();
        if key.is_empty() {
            return Err(Diagnostic::new(
                file,
                line_no,
                column,
                diag::ENTRY_SYNTAX,
                "expected a key before '='",
            ));
        }
        let after = &line[eq + 1..];
        let pad = after.len() - after.trim_start().len();
        let value = after.trim();
        let value_column = char_col(line, eq) + 1 + after[..pad].chars().count();
        let Some(section) = sections.last_mut() else {
            return Err(Diagnostic::new(
                file,
                line_no,
                column,
                diag::ENTRY_SYNTAX,
                "entry outside any section",
            ));
        };
        section.entries.push(RawEntry {
            key: key.to_string(),
            line: line_no,
            key_column: column,
            value: value.to_string(),
            value_column,
        });
    }
    Ok(sections)
}

fn build_chart(file: &str, section: &RawSection) -> Result<BundleChart, Diagnostic> {
    let mut base: Option<Vec<String>> = None;
    let mut fibre: Option<Vec<String>> = None;
    for entry in &section.entries {
        let names: Vec<String> = entry
            .value
            .split([',', ' ', '\t'])
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        for name in &names {
            if FUNCTION_NAMES.contains(&name.as_str()) {
                return Err(Diagnostic::new(
                    file,
                    entry.line,
                    entry.value_column,
                    diag::BUNDLE,
                    format!("coordinate name {name:?} is reserved for functions"),
                ));
            }
        }
        let slot = match entry.key.as_str() {
            "base" => &mut base,
            "fiber" | "fibre" => &mut fibre,
            other => {
                return Err(Diagnostic::new(
                    file,
                    entry.line,
                    entry.key_column,
                    diag::ENTRY_SYNTAX,
                    format!("unknown bundle key {other:?}"),
                ));
            }
        };
        if slot.is_some() {
            return Err(Diagnostic::new(
                file,
                entry.line,
                entry.key_column,
                diag::ENTRY_SYNTAX,
                format!("duplicate bundle key {:?}", entry.key),
            ));
        }
        *slot = Some(names);
    }
    let (Some(base), Some(fibre)) = (base, fibre) else {
        return Err(Diagnostic::new(
            file,
            section.line,
            section.column,
            diag::MISSING,
            "the bundle section needs both 'base' and 'fiber' keys",
        ));
    };
    BundleChart::new(base, fibre).map_err(|e| {
        Diagnostic::new(file, section.line, section.column, diag::BUNDLE, e.to_string())
    })
}

fn parse_density(
    file: &str,
    chart: &BundleChart,
    section: &RawSection,
    kind: &str,
) -> Result<Lagrangian, Diagnostic> {
    let mut density: Option<&RawEntry> = None;
    for entry in &section.entries {
        if entry.key != "density" {
            return Err(Diagnostic::new(
                file,
                entry.line,
                entry.key_column,
                diag::ENTRY_SYNTAX,
                format!("unknown {kind} key {:?}", entry.key),
            ));
        }
        if density.is_some() {
            return Err(Diagnostic::new(
                file,
                entry.line,
                entry.key_column,
                diag::ENTRY_SYNTAX,
                "duplicate 'density' key",
            ));
        }
        density = Some(entry);
    }
    let Some(entry) = density else {
        return Err(Diagnostic::new(
            file,
            section.line,
            section.column,
            diag::MISSING,
            format!("a {kind} section needs a 'density' key"),
        ));
    };
    let pos = SourcePos::new(file, entry.line, entry.value_column);
    let expr = parse_expr(&entry.value, chart, &pos)?;
    Lagrangian::new(chart.clone(), expr).map_err(|e| {
        let code = match e {
            Error::JetOrder { .. } => diag::JET_ORDER,
            _ => diag::ENTRY_SYNTAX,
        };
        Diagnostic::new(file, entry.line, entry.value_column, code, e.to_string())
    })
}

fn parse_field(
    file: &str,
    chart: &BundleChart,
    section: &RawSection,
) -> Result<ProjectableVectorField, Diagnostic> {
    let mut base = vec![None; chart.base_dim()];
    let mut fibre = vec![None; chart.fibre_dim()];
    for entry in &section.entries {
        let pos = SourcePos::new(file, entry.line, entry.value_column);
        let expr = parse_expr(&entry.value, chart, &pos)?;
        let slot = if let Some(lam) = chart.find_base(&entry.key) {
            check_base_component(file, chart, entry, &expr)?;
            &mut base[lam]
        } else if let Some(i) = chart.find_fibre(&entry.key) {
            if jet_order(&expr) > 0 {
                return Err(Diagnostic::new(
                    file,
                    entry.line,
                    entry.value_column,
                    diag::DEPENDENCY,
                    format!(
                        "the {:?} component may not depend on jet coordinates",
                        entry.key
                    ),
                ));
            }
            &mut fibre[i]
        } else {
            return Err(Diagnostic::new(
                file,
                entry.line,
                entry.key_column,
                diag::UNKNOWN_COORDINATE,
                format!(
                    "no coordinate named {:?} in chart {}",
                    entry.key,
                    chart.label()
                ),
            ));
        };
        if slot.is_some() {
            return Err(Diagnostic::new(
                file,
                entry.line,
                entry.key_column,
                diag::ENTRY_SYNTAX,
                format!("duplicate component {:?}", entry.key),
            ));
        }
        *slot = Some(expr);
    }
    let base: Vec<Expr> = base.into_iter().map(|c| c.unwrap_or_else(Expr::zero)).collect();
    let fibre: Vec<Expr> = fibre.into_iter().map(|c| c.unwrap_or_else(Expr::zero)).collect();
    ProjectableVectorField::new(chart.clone(), base, fibre).map_err(|e| {
        Diagnostic::new(
            file,
            section.line,
            section.column,
            diag::DEPENDENCY,
            e.to_string(),
        )
    })
}

fn check_base_component(
    file: &str,
    chart: &BundleChart,
    entry: &RawEntry,
    expr: &Expr,
) -> Result<(), Diagnostic> {
    let mut bad: Option<JetCoordinate> = None;
    expr.for_each_coordinate(&mut |c: &JetCoordinate| {
        if bad.is_none() && !matches!(c, JetCoordinate::Base(_)) {
            bad = Some(*c);
        }
    });
    if let Some(c) = bad {
        return Err(Diagnostic::new(
            file,
            entry.line,
            entry.value_column,
            diag::DEPENDENCY,
            format!(
                "the {:?} component may depend on base coordinates only, not {}",
                entry.key,
                chart.coordinate_name(&c)
            ),
        ));
    }
    Ok(())
}

/// Parses a complete model file.
pub fn parse_model(file: &str, text: &str) -> Result<ModelFile, Diagnostic> {
    let sections = scan_sections(file, text)?;
    let mut bundle: Option<&RawSection> = None;
    for section in &sections {
        if matches!(section.kind, SectionKind::Bundle) {
            if bundle.is_some() {
                return Err(Diagnostic::new(
                    file,
                    section.line,
                    section.column,
                    diag::DUPLICATE_NAME,
                    "duplicate [bundle] section",
                ));
            }
            bundle = Some(section);
        }
    }
    let Some(bundle) = bundle else {
        return Err(Diagnostic::new(
            file,
            1,
            1,
            diag::MISSING,
            "missing [bundle] section",
        ));
    };
    let chart = build_chart(file, bundle)?;
    let mut model = ModelFile {
        chart: chart.clone(),
        lagrangians: Vec::new(),
        trivials: Vec::new(),
        fields: Vec::new(),
    };
    for section in &sections {
        match &section.kind {
            SectionKind::Bundle => {}
            SectionKind::Lagrangian(name) | SectionKind::Trivial(name) => {
                if model.density(name).is_some() {
                    return Err(Diagnostic::new(
                        file,
                        section.line,
                        section.column,
                        diag::DUPLICATE_NAME,
                        format!("a density named {name:?} is already declared"),
                    ));
                }
                let kind = match &section.kind {
                    SectionKind::Trivial(_) => "trivial",
                    _ => "lagrangian",
                };
                let density = parse_density(file, &chart, section, kind)?;
                if matches!(section.kind, SectionKind::Trivial(_)) {
                    model.trivials.push((name.clone(), density));
                } else {
                    model.lagrangians.push((name.clone(), density));
                }
            }
            SectionKind::Field(name) => {
                if model.field(name).is_some() {
                    return Err(Diagnostic::new(
                        file,
                        section.line,
                        section.column,
                        diag::DUPLICATE_NAME,
                        format!("a field named {name:?} is already declared"),
                    ));
                }
                let field = parse_field(file, &chart, section)?;
                model.fields.push((name.clone(), field));
            }
        }
    }
    if model.lagrangians.is_empty() && model.trivials.is_empty() {
        return Err(Diagnostic::new(
            file,
            1,
            1,
            diag::MISSING,
            "a model must declare at least one lagrangian",
        ));
    }
    Ok(model)
}
