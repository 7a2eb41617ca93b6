//! Expression language used in guards, state updates, time advances, and
//! output values.
//!
//! The language is deliberately small: three scalar types (`int`, `real`,
//! `bool`), the distinguished constant `INF`, arithmetic, comparisons,
//! boolean connectives, and a conditional expression. Both simulation
//! engines evaluate expressions through this single module so that equal
//! inputs produce bit-identical results.

mod eval;
mod lexer;
mod parse;
mod typeck;

pub use eval::{eval, Bindings, EvalError};
pub use lexer::{Lexer, Token, TokenKind};
pub use parse::{parse_expr, parse_value_literal, ParseError, TokenCursor};
pub use typeck::{typecheck, TypeEnv, TypeError};

use std::fmt;

/// 1-based source position of a token or expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Scalar type tags of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Int,
    Real,
    Bool,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Int => write!(f, "int"),
            Ty::Real => write!(f, "real"),
            Ty::Bool => write!(f, "bool"),
        }
    }
}

/// Runtime scalar value. `Real` admits positive infinity only in
/// time-advance position; event values and pseudostate values are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
}

impl Value {
    pub fn ty(&self) -> Ty {
        match self {
            Value::Int(_) => Ty::Int,
            Value::Real(_) => Ty::Real,
            Value::Bool(_) => Ty::Bool,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Real(r) if r.is_infinite())
    }

    /// Widens `Int` to `Real`; other variants are returned unchanged.
    pub fn widen_to_real(self) -> Value {
        match self {
            Value::Int(i) => Value::Real(i as f64),
            other => other,
        }
    }
}

/// Canonical value printer: ints bare, reals with the shortest decimal that
/// round-trips, bools as `true`/`false`, infinity as `INF`.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) if r.is_infinite() => {
                write!(f, "{}INF", if *r < 0.0 { "-" } else { "" })
            }
            Value::Real(r) => write!(f, "{r}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Binary operators, in source notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

/// Expression AST. Structural equality ignores spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Real(f64),
    Bool(bool),
    /// The distinguished literal `INF` (positive infinity).
    Inf,
    Var(String),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    /// Convenience constructor with a default span, for synthesized nodes.
    pub fn synth(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    /// True iff the expression is the literal `INF` (used for the syntactic
    /// passive-state check in time-advance tables).
    pub fn is_literal_inf(&self) -> bool {
        matches!(self.kind, ExprKind::Inf)
    }

    /// Walks the tree, calling `f` on every node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Unary(_, e) => e.walk(f),
            ExprKind::Binary(_, a, b) => {
                a.walk(f);
                b.walk(f);
            }
            ExprKind::If(c, t, e) => {
                c.walk(f);
                t.walk(f);
                e.walk(f);
            }
            _ => {}
        }
    }

    /// Names of all variables referenced by the expression.
    pub fn free_vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ExprKind::Var(name) = &e.kind {
                if !out.contains(&name.as_str()) {
                    out.push(name.as_str());
                }
            }
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_printing_is_canonical() {
        assert_eq!(Value::Int(7).to_string(), "7");
        assert_eq!(Value::Real(7.0).to_string(), "7");
        assert_eq!(Value::Real(2.5).to_string(), "2.5");
        assert_eq!(Value::Real(0.1).to_string(), "0.1");
        assert_eq!(Value::Real(f64::INFINITY).to_string(), "INF");
        assert_eq!(Value::Bool(true).to_string(), "true");
        assert_eq!(Value::Bool(false).to_string(), "false");
    }

    #[test]
    fn structural_equality_ignores_spans() {
        let a = Expr::new(ExprKind::Int(1), Span::new(1, 1));
        let b = Expr::new(ExprKind::Int(1), Span::new(9, 9));
        assert_eq!(a, b);
    }
}
