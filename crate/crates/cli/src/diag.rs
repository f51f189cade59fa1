//! Positioned diagnostics with stable codes.
//!
//! Every rejection of a model file or expression carries the source position
//! and a code, printed as `file:line:column: code: message` so editors and
//! scripts can jump to the offending token.

use std::fmt;

/// Code for a malformed section header.
pub const SECTION_SYNTAX: &str = "E101";
/// Code for an unknown section kind.
pub const SECTION_KIND: &str = "E102";
/// Code for a name declared twice.
pub const DUPLICATE_NAME: &str = "E103";
/// Code for a malformed or misplaced `key = value` line.
pub const ENTRY_SYNTAX: &str = "E104";
/// Code for a character no token starts with.
pub const LEX: &str = "E105";
/// Code for a token sequence outside the expression grammar.
pub const EXPR_SYNTAX: &str = "E106";
/// Code for an identifier naming no coordinate of the bundle.
pub const UNKNOWN_COORDINATE: &str = "E107";
/// Code for a jet suffix readable as two different coordinates.
pub const AMBIGUOUS_JET: &str = "E108";
/// Code for division by anything but a rational constant.
pub const DIVISION: &str = "E109";
/// Code for a density depending on second-order jets.
pub const JET_ORDER: &str = "E110";
/// Code for a field component depending on coordinates its slot forbids.
pub const DEPENDENCY: &str = "E111";
/// Code for an unusable bundle declaration.
pub const BUNDLE: &str = "E112";
/// Code for a required section or key that never appears.
pub const MISSING: &str = "E113";

/// A rejected input: where, which rule, and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        file: impl Into<String>,
        line: usize,
        column: usize,
        code: &'static str,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            file: file.into(),
            line,
            column,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.file, self.line, self.column, self.code, self.message
        )
    }
}

impl std::error::Error for Diagnostic {}
