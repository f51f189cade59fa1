//! Expression grammar over a bundle chart.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := base ("^" unsigned-integer)?
//! base   := integer | identifier | function "(" expr ")" | "(" expr ")" | "-" base
//! ```
//!
//! Identifiers name chart coordinates: a bare base or fibre name, or a fibre
//! name followed by `_` and one or two base names for jet coordinates.
//! Division is exact scaling, so the divisor must be a rational constant.

use crate::diag::{self, Diagnostic};
use noether_core::jetspace::{BundleChart, JetCoordinate};
use noether_core::scalar::{integer, ratio};
use noether_core::symexpr::FuncName;
use noether_core::Expr;

/// Names claimed by the function grammar; no coordinate may use them.
pub const FUNCTION_NAMES: [&str; 4] = ["cos", "exp", "ln", "sin"];

/// Where an expression string sits inside its file: `column` addresses the
/// first character of the string.
#[derive(Debug, Clone)]
pub struct SourcePos {
    pub file: String,
    pub line: usize,
    pub column: usize,
}

impl SourcePos {
    pub fn new(file: impl Into<String>, line: usize, column: usize) -> Self {
        SourcePos {
            file: file.into(),
            line,
            column,
        }
    }

    /// A diagnostic at the `k`-th character (1-based) of the string.
    fn diag(&self, k: usize, code: &'static str, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(&self.file, self.line, self.column + k - 1, code, message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    column: usize,
}

fn lex(src: &str, pos: &SourcePos) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let column = i + 1;
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Int(digits),
                column,
            });
            continue;
        }
        if c.is_alphabetic() {
            let mut name = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                name.push(chars[i]);
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident(name),
                column,
            });
            continue;
        }
        let kind = match c {
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            _ => {
                return Err(pos.diag(column, diag::LEX, format!("unexpected character {c:?}")));
            }
        };
        out.push(Token { kind, column });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    k: usize,
    end: usize,
    chart: &'a BundleChart,
    pos: &'a SourcePos,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.k).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.k).map_or(self.end, |t| t.column)
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.k].clone();
        self.k += 1;
        t
    }

    fn fail(&self, code: &'static str, message: impl Into<String>) -> Diagnostic {
        self.pos.diag(self.here(), code, message)
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut acc = self.term()?;
        while let Some(kind) = self.peek() {
            match kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut acc = self.factor()?;
        while let Some(kind) = self.peek() {
            match kind {
                TokenKind::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                TokenKind::Slash => {
                    let slash = self.bump();
                    let rhs = self.factor()?;
                    let Some(c) = rhs.as_constant() else {
                        return Err(self.pos.diag(
                            slash.column,
                            diag::DIVISION,
                            "the divisor must be a rational constant",
                        ));
                    };
                    if c == ratio(0, 1) {
                        return Err(self.pos.diag(slash.column, diag::DIVISION, "division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.base()?;
        if self.peek() == Some(&TokenKind::Caret) {
            self.bump();
            let Some(TokenKind::Int(digits)) = self.peek().cloned() else {
                return Err(self.fail(
                    diag::EXPR_SYNTAX,
                    "the exponent must be an unsigned integer",
                ));
            };
            let Ok(k) = digits.parse::<u32>() else {
                return Err(self.fail(diag::EXPR_SYNTAX, "exponent out of range"));
            };
            self.bump();
            return Ok(base.pow_uint(k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek().cloned() {
            Some(TokenKind::Int(digits)) => {
                self.bump();
                let c = integer(&digits).expect("lexer emits decimal digits");
                Ok(Expr::constant(c))
            }
            Some(TokenKind::Ident(name)) => {
                let t = self.bump();
                if let Some(f) = function_named(&name) {
                    if self.peek() != Some(&TokenKind::LParen) {
                        return Err(self.fail(
                            diag::EXPR_SYNTAX,
                            format!("{name} is a function and needs an argument list"),
                        ));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    if self.peek() != Some(&TokenKind::RParen) {
                        return Err(self.fail(diag::EXPR_SYNTAX, "expected ')'"));
                    }
                    self.bump();
                    return Ok(Expr::func(f, arg));
                }
                let coord = resolve(self.chart, &name, t.column, self.pos)?;
                Ok(Expr::coordinate(coord))
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(&TokenKind::RParen) {
                    return Err(self.fail(diag::EXPR_SYNTAX, "expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Some(TokenKind::Minus) => {
                self.bump();
                Ok(self.base()?.scale(&ratio(-1, 1)))
            }
            _ => Err(self.fail(diag::EXPR_SYNTAX, "expected a value")),
        }
    }
}

fn function_named(name: &str) -> Option<FuncName> {
    match name {
        "sin" => Some(FuncName::Sin),
        "cos" => Some(FuncName::Cos),
        "exp" => Some(FuncName::Exp),
        "ln" => Some(FuncName::Ln),
        _ => None,
    }
}

/// Maps an identifier to a chart coordinate. A jet suffix concatenates base
/// names, so every decomposition is tried; readings that disagree make the
/// name ambiguous rather than silently picking one.
fn resolve(
    chart: &BundleChart,
    name: &str,
    column: usize,
    pos: &SourcePos,
) -> Result<JetCoordinate, Diagnostic> {
    if let Some(lam) = chart.find_base(name) {
        return Ok(JetCoordinate::Base(lam));
    }
    if let Some(i) = chart.find_fibre(name) {
        return Ok(JetCoordinate::Fibre(i));
    }
    let unknown = || {
        pos.diag(
            column,
            diag::UNKNOWN_COORDINATE,
            format!("no coordinate named {name:?} in chart {}", chart.label()),
        )
    };
    let Some((head, tail)) = name.split_once('_') else {
        return Err(unknown());
    };
    let Some(field) = chart.find_fibre(head) else {
        return Err(unknown());
    };
    let mut readings: Vec<JetCoordinate> = Vec::new();
    if let Some(lam) = chart.find_base(tail) {
        readings.push(JetCoordinate::Jet1 { field, deriv: lam });
    }
    for (split, _) in tail.char_indices().skip(1) {
        let (a, b) = tail.split_at(split);
        if let (Some(ia), Some(ib)) = (chart.find_base(a), chart.find_base(b)) {
            let c = JetCoordinate::jet2(field, ia, ib);
            if !readings.contains(&c) {
                readings.push(c);
            }
        }
    }
    match readings.len() {
        0 => Err(unknown()),
        1 => Ok(readings[0]),
        _ => Err(pos.diag(
            column,
            diag::AMBIGUOUS_JET,
            format!("the jet suffix of {name:?} has more than one reading"),
        )),
    }
}

/// Parses `src` as an expression in the chart's coordinates.
pub fn parse_expr(src: &str, chart: &BundleChart, pos: &SourcePos) -> Result<Expr, Diagnostic> {
    let tokens = lex(src, pos)?;
    if tokens.is_empty() {
        return Err(pos.diag(1, diag::EXPR_SYNTAX, "empty expression"));
    }
    let end = src.chars().count() + 1;
    let mut parser = Parser {
        tokens,
        k: 0,
        end,
        chart,
        pos,
    };
    let out = parser.expr()?;
    if parser.k < parser.tokens.len() {
        return Err(parser.fail(diag::EXPR_SYNTAX, "unexpected trailing input"));
    }
    Ok(out)
}
