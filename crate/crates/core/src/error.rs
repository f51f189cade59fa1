//! Error type shared by every operation in the crate.

/// Everything that can go wrong inside the symbolic engine.
///
/// Variants split into three families: unsupported inputs (the operation is
/// outside the engine's exact fragment), structural misuse (mixed charts,
/// out-of-range indices, broken preconditions), and internal-consistency
/// failures that signal a bug in this crate rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An operation met a jet coordinate deeper than it supports.
    #[error("jet order {found} exceeds the supported order {limit} in {context}")]
    JetOrder {
        found: u8,
        limit: u8,
        context: &'static str,
    },

    /// The operation needs a polynomial expression but met a function atom.
    #[error("{context} requires a polynomial expression, found function atom {atom}")]
    NonPolynomial { context: &'static str, atom: String },

    /// Negative powers only exist for nonzero single-term expressions.
    #[error("negative power requires a nonzero single-term base; rational-function arithmetic is unsupported")]
    NegativePower,

    /// The logarithm chain rule needs a single-term argument.
    #[error("derivative of ln with a multi-term argument has no polynomial reciprocal")]
    CompoundLogarithm,

    /// `integrate_unit` met the integration variable inside a function atom.
    #[error("integration variable occurs inside a function argument")]
    ParameterInsideFunction,

    /// `integrate_unit` met a negative power of the integration variable.
    #[error("integrand has a negative power of the integration variable")]
    NonPolynomialIntegrand,

    /// Two objects built over different bundle charts were combined.
    #[error("bundle charts differ: {left} vs {right}")]
    ChartMismatch { left: String, right: String },

    /// A chart failed its construction rules.
    #[error("invalid bundle chart: {0}")]
    InvalidChart(String),

    /// A coordinate index fell outside the chart's dimensions.
    #[error("coordinate index {index} out of range for {axis} dimension {dim}")]
    IndexOutOfRange {
        axis: &'static str,
        index: usize,
        dim: usize,
    },

    /// An expression depends on coordinates its host forbids.
    #[error("{context} must not depend on {atom}")]
    DependencyViolation { context: &'static str, atom: String },

    /// A form operation was applied at an unsupported degree.
    #[error("{op} is not defined at degree {degree} (expected {expected})")]
    DegreeOutOfRange {
        op: &'static str,
        degree: usize,
        expected: String,
    },

    /// A source reconstruction was requested for a non-trivial density.
    #[error("density is not variationally trivial; Euler-Lagrange component {component} is nonzero")]
    NotTrivial { component: String },

    /// The reconstruction system had velocity monomials no basis form matches.
    #[error("no source form matches velocity monomials: {}", unmatched.join(", "))]
    Reconstruction { unmatched: Vec<String> },

    /// A corrected current was requested from a certificate without a
    /// potential.
    #[error("certificate carries no potential; the corrected current is unavailable")]
    PotentialUnavailable,

    /// An identity that must hold for every input failed: a bug in this crate.
    #[error("internal consistency failure: {what} (this is a bug in the engine, not in the input)")]
    InternalIdentity { what: String },
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
