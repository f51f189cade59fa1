//! Bundle charts and jet coordinates.

use crate::error::{Error, Result};
use crate::Expr;

/// A coordinate on the second jet space of a fibred manifold: a base
/// coordinate `x^lam`, a fibre coordinate `y^i`, a first-jet coordinate
/// `y^i_lam`, or a second-jet coordinate `y^i_{lam mu}` stored with
/// `lam <= mu` (second jets are symmetric).
///
/// The derived order — base, fibre, first jet, second jet, each block by
/// index — is the canonical atom order of the expression engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetCoordinate {
    /// Base coordinate `x^lam`.
    Base(usize),
    /// Fibre coordinate `y^i`.
    Fibre(usize),
    /// First-jet coordinate `y^i_lam`.
    Jet1 { field: usize, deriv: usize },
    /// Second-jet coordinate `y^i_{lam mu}`, `lam <= mu`.
    Jet2 { field: usize, lo: usize, hi: usize },
}

impl JetCoordinate {
    /// Second-jet coordinate with the index pair put in storage order.
    pub fn jet2(field: usize, a: usize, b: usize) -> Self {
        JetCoordinate::Jet2 {
            field,
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    /// Jet depth of the coordinate: 0, 1, or 2.
    pub fn order(&self) -> u8 {
        match self {
            JetCoordinate::Base(_) | JetCoordinate::Fibre(_) => 0,
            JetCoordinate::Jet1 { .. } => 1,
            JetCoordinate::Jet2 { .. } => 2,
        }
    }
}

/// Highest jet depth of any coordinate in the expression, including
/// coordinates inside function arguments. Zero for constants.
pub fn jet_order(e: &Expr) -> u8 {
    let mut max = 0;
    e.for_each_coordinate(&mut |c: &JetCoordinate| max = max.max(c.order()));
    max
}

/// An adapted coordinate chart on a fibred manifold: named base coordinates
/// and named fibre coordinates. All geometric objects carry the chart they
/// are written in, and operations refuse to mix charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleChart {
    base: Vec<String>,
    fibre: Vec<String>,
}

impl BundleChart {
    /// Builds a chart, enforcing: at least one coordinate on each level, all
    /// names nonempty, free of `_` (reserved for jet suffixes), and pairwise
    /// distinct across both levels.
    pub fn new(
        base: impl IntoIterator<Item = impl Into<String>>,
        fibre: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self> {
        let base: Vec<String> = base.into_iter().map(Into::into).collect();
        let fibre: Vec<String> = fibre.into_iter().map(Into::into).collect();
        if base.is_empty() {
            return Err(Error::InvalidChart("no base coordinates".into()));
        }
        if fibre.is_empty() {
            return Err(Error::InvalidChart("no fibre coordinates".into()));
        }
        let mut seen: Vec<&str> = Vec::new();
        for name in base.iter().chain(fibre.iter()) {
            if name.is_empty() {
                return Err(Error::InvalidChart("empty coordinate name".into()));
            }
            if name.contains('_') {
                return Err(Error::InvalidChart(format!(
                    "coordinate name {name:?} contains '_', which is reserved for jet suffixes"
                )));
            }
            if seen.contains(&name.as_str()) {
                return Err(Error::InvalidChart(format!(
                    "duplicate coordinate name {name:?}"
                )));
            }
            seen.push(name);
        }
        // Jet names concatenate base names after the underscore; any clash
        // among the derived names would make rendering ambiguous.
        let mut derived: Vec<String> = seen.iter().map(|s| s.to_string()).collect();
        for f in &fibre {
            for (ai, a) in base.iter().enumerate() {
                derived.push(format!("{f}_{a}"));
                for b in &base[ai..] {
                    derived.push(format!("{f}_{a}{b}"));
                }
            }
        }
        for (k, name) in derived.iter().enumerate() {
            if derived[..k].contains(name) {
                return Err(Error::InvalidChart(format!(
                    "jet coordinate name {name:?} is ambiguous in this chart"
                )));
            }
        }
        Ok(BundleChart { base, fibre })
    }

    /// Number of base coordinates.
    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    /// Number of fibre coordinates.
    pub fn fibre_dim(&self) -> usize {
        self.fibre.len()
    }

    /// Base coordinate names in order.
    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    /// Fibre coordinate names in order.
    pub fn fibre_names(&self) -> &[String] {
        &self.fibre
    }

    /// Printable chart summary, used in mismatch diagnostics.
    pub fn label(&self) -> String {
        format!("({}; {})", self.base.join(","), self.fibre.join(","))
    }

    /// Index of the base coordinate called `name`.
    pub fn find_base(&self, name: &str) -> Option<usize> {
        self.base.iter().position(|b| b == name)
    }

    /// Index of the fibre coordinate called `name`.
    pub fn find_fibre(&self, name: &str) -> Option<usize> {
        self.fibre.iter().position(|f| f == name)
    }

    /// Canonical printed name of a jet coordinate in this chart: fibre name,
    /// underscore, then the base names of the derivative indices.
    pub fn coordinate_name(&self, c: &JetCoordinate) -> String {
        match *c {
            JetCoordinate::Base(l) => self.base[l].clone(),
            JetCoordinate::Fibre(i) => self.fibre[i].clone(),
            JetCoordinate::Jet1 { field, deriv } => {
                format!("{}_{}", self.fibre[field], self.base[deriv])
            }
            JetCoordinate::Jet2 { field, lo, hi } => {
                format!("{}_{}{}", self.fibre[field], self.base[lo], self.base[hi])
            }
        }
    }

    /// Name of the `idx`-th one-form basis element on the total space:
    /// `dx^lam` for `idx < n`, then `dy^i`.
    pub fn one_form_name(&self, idx: usize) -> String {
        if idx < self.base_dim() {
            format!("d{}", self.base[idx])
        } else {
            format!("d{}", self.fibre[idx - self.base_dim()])
        }
    }

    /// Renders an expression with this chart's coordinate names.
    pub fn render(&self, e: &Expr) -> String {
        e.render_with(&|c| self.coordinate_name(c))
    }

    /// Checks that every coordinate of `e` has indices inside this chart.
    pub fn check_expr(&self, e: &Expr) -> Result<()> {
        let (n, m) = (self.base_dim(), self.fibre_dim());
        let mut bad: Option<Error> = None;
        e.for_each_coordinate(&mut |c: &JetCoordinate| {
            if bad.is_some() {
                return;
            }
            let check = |axis: &'static str, index: usize, dim: usize| {
                (index < dim).then_some(()).ok_or(Error::IndexOutOfRange { axis, index, dim })
            };
            let verdict = match *c {
                JetCoordinate::Base(l) => check("base", l, n),
                JetCoordinate::Fibre(i) => check("fibre", i, m),
                JetCoordinate::Jet1 { field, deriv } => {
                    check("fibre", field, m).and_then(|()| check("base", deriv, n))
                }
                JetCoordinate::Jet2 { field, lo, hi } => check("fibre", field, m)
                    .and_then(|()| check("base", lo, n))
                    .and_then(|()| check("base", hi, n)),
            };
            if let Err(e) = verdict {
                bad = Some(e);
            }
        });
        match bad {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Expression for the base coordinate `x^lam`.
    pub fn base_coord(&self, lam: usize) -> Expr {
        assert!(lam < self.base_dim(), "base index out of range");
        Expr::coordinate(JetCoordinate::Base(lam))
    }

    /// Expression for the fibre coordinate `y^i`.
    pub fn fibre_coord(&self, i: usize) -> Expr {
        assert!(i < self.fibre_dim(), "fibre index out of range");
        Expr::coordinate(JetCoordinate::Fibre(i))
    }

    /// Expression for the first-jet coordinate `y^i_lam`.
    pub fn jet1(&self, field: usize, deriv: usize) -> Expr {
        assert!(field < self.fibre_dim() && deriv < self.base_dim());
        Expr::coordinate(JetCoordinate::Jet1 { field, deriv })
    }

    /// Expression for the second-jet coordinate `y^i_{lam mu}`.
    pub fn jet2(&self, field: usize, a: usize, b: usize) -> Expr {
        assert!(field < self.fibre_dim() && a < self.base_dim() && b < self.base_dim());
        Expr::coordinate(JetCoordinate::jet2(field, a, b))
    }

    /// Requires two charts to be identical, for operations that combine
    /// objects written in adapted coordinates.
    pub fn require_same(&self, other: &BundleChart) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                left: self.label(),
                right: other.label(),
            })
        }
    }
}
