//! Recursive descent parser for the expression grammar, plus the token
//! cursor shared with the model DSL and scenario parsers.
//!
//! Precedence, loosest first: `if`/`then`/`else`, `or`, `and`, `not`,
//! comparisons, `+`/`-`, `*`/`/`, unary `-`, atoms. Binary operators are
//! left-associative; the `else` branch extends as far right as possible.

use super::lexer::{LexError, Lexer, Token, TokenKind};
use super::{BinOp, Expr, ExprKind, Span, UnOp, Value};
use thiserror::Error;

/// Syntax error with the offending token and 1-based position.
#[derive(Debug, Clone, Error)]
pub enum ParseError {
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("syntax error at {span}: expected {expected}, found {found}")]
    Unexpected {
        expected: String,
        found: TokenKind,
        span: Span,
    },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Lex(e) => e.span,
            ParseError::Unexpected { span, .. } => *span,
        }
    }
}

pub type ParseResult<T> = Result<T, ParseError>;

/// Cursor over a pre-lexed token stream.
pub struct TokenCursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl TokenCursor {
    pub fn new(src: &str) -> ParseResult<Self> {
        Ok(TokenCursor {
            tokens: Lexer::new(src).tokenize()?,
            pos: 0,
        })
    }

    pub fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    pub fn peek_span(&self) -> Span {
        self.tokens[self.pos].span
    }

    pub fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == TokenKind::Eof
    }

    pub fn error<T>(&self, expected: impl Into<String>) -> ParseResult<T> {
        Err(ParseError::Unexpected {
            expected: expected.into(),
            found: self.peek().clone(),
            span: self.peek_span(),
        })
    }

    pub fn expect(&mut self, kind: TokenKind) -> ParseResult<Token> {
        if *self.peek() == kind {
            Ok(self.bump())
        } else {
            self.error(kind.to_string())
        }
    }

    /// Consumes the token if it matches.
    pub fn eat(&mut self, kind: TokenKind) -> bool {
        if *self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> ParseResult<(String, Span)> {
        match self.peek() {
            TokenKind::Ident(_) => {
                let tok = self.bump();
                match tok.kind {
                    TokenKind::Ident(name) => Ok((name, tok.span)),
                    _ => unreachable!(),
                }
            }
            _ => self.error(what.to_string()),
        }
    }

    /// Consumes an identifier with the exact given spelling (contextual
    /// keywords of the DSL).
    pub fn expect_word(&mut self, word: &str) -> ParseResult<Span> {
        match self.peek() {
            TokenKind::Ident(s) if s == word => Ok(self.bump().span),
            _ => self.error(format!("`{word}`")),
        }
    }

    pub fn at_word(&self, word: &str) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == word)
    }

    // ---- expression grammar ----

    pub fn parse_expr(&mut self) -> ParseResult<Expr> {
        if *self.peek() == TokenKind::If {
            return self.parse_if();
        }
        self.parse_or()
    }

    fn parse_if(&mut self) -> ParseResult<Expr> {
        let span = self.expect(TokenKind::If)?.span;
        let cond = self.parse_expr()?;
        self.expect(TokenKind::Then)?;
        let then = self.parse_expr()?;
        self.expect(TokenKind::Else)?;
        let els = self.parse_expr()?;
        Ok(Expr::new(
            ExprKind::If(Box::new(cond), Box::new(then), Box::new(els)),
            span,
        ))
    }

    fn parse_or(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.parse_and()?;
        while *self.peek() == TokenKind::Or {
            let span = self.bump().span;
            let rhs = self.parse_and()?;
            lhs = Expr::new(ExprKind::Binary(BinOp::Or, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.parse_not()?;
        while *self.peek() == TokenKind::And {
            let span = self.bump().span;
            let rhs = self.parse_not()?;
            lhs = Expr::new(ExprKind::Binary(BinOp::And, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn parse_not(&mut self) -> ParseResult<Expr> {
        if *self.peek() == TokenKind::Not {
            let span = self.bump().span;
            let inner = self.parse_not()?;
            return Ok(Expr::new(ExprKind::Unary(UnOp::Not, Box::new(inner)), span));
        }
        self.parse_cmp()
    }

    fn parse_cmp(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.parse_add()?;
        loop {
            let op = match self.peek() {
                TokenKind::EqEq => BinOp::Eq,
                TokenKind::Ne => BinOp::Ne,
                TokenKind::Lt => BinOp::Lt,
                TokenKind::Le => BinOp::Le,
                TokenKind::Gt => BinOp::Gt,
                TokenKind::Ge => BinOp::Ge,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.parse_add()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn parse_add(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.parse_mul()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinOp::Add,
                TokenKind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.parse_mul()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn parse_mul(&mut self) -> ParseResult<Expr> {
        let mut lhs = self.parse_unary()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => BinOp::Mul,
                TokenKind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.parse_unary()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn parse_unary(&mut self) -> ParseResult<Expr> {
        if *self.peek() == TokenKind::Minus {
            let span = self.bump().span;
            let inner = self.parse_unary()?;
            return Ok(Expr::new(ExprKind::Unary(UnOp::Neg, Box::new(inner)), span));
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> ParseResult<Expr> {
        let span = self.peek_span();
        let kind = match self.peek().clone() {
            TokenKind::Int(i) => {
                self.bump();
                ExprKind::Int(i)
            }
            TokenKind::Real(r) => {
                self.bump();
                ExprKind::Real(r)
            }
            TokenKind::True => {
                self.bump();
                ExprKind::Bool(true)
            }
            TokenKind::False => {
                self.bump();
                ExprKind::Bool(false)
            }
            TokenKind::Inf => {
                self.bump();
                ExprKind::Inf
            }
            TokenKind::Ident(name) => {
                self.bump();
                ExprKind::Var(name)
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(inner);
            }
            TokenKind::If => return self.parse_if(),
            _ => return self.error("an expression"),
        };
        Ok(Expr::new(kind, span))
    }
}

/// Parses a complete expression; trailing input is a syntax error.
pub fn parse_expr(text: &str) -> ParseResult<Expr> {
    let mut cur = TokenCursor::new(text)?;
    let expr = cur.parse_expr()?;
    if !cur.at_eof() {
        return cur.error("end of input");
    }
    Ok(expr)
}

/// Parses a scalar literal with optional leading `-`, as used in scenario
/// files and DSL default values. `INF` is rejected here; it is only legal
/// inside time-advance expressions.
pub fn parse_value_literal(cur: &mut TokenCursor) -> ParseResult<Value> {
    let negative = cur.eat(TokenKind::Minus);
    let span = cur.peek_span();
    let value = match cur.peek().clone() {
        TokenKind::Int(i) => {
            cur.bump();
            Value::Int(if negative { -i } else { i })
        }
        TokenKind::Real(r) => {
            cur.bump();
            Value::Real(if negative { -r } else { r })
        }
        TokenKind::True if !negative => {
            cur.bump();
            Value::Bool(true)
        }
        TokenKind::False if !negative => {
            cur.bump();
            Value::Bool(false)
        }
        found => {
            return Err(ParseError::Unexpected {
                expected: "a literal value".into(),
                found,
                span,
            })
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Expr {
        Expr::synth(ExprKind::Var(name.into()))
    }

    fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::synth(ExprKind::Binary(op, Box::new(a), Box::new(b)))
    }

    #[test]
    fn parses_addition() {
        let e = parse_expr("1 + 2").unwrap();
        assert_eq!(
            e,
            bin(
                BinOp::Add,
                Expr::synth(ExprKind::Int(1)),
                Expr::synth(ExprKind::Int(2))
            )
        );
    }

    #[test]
    fn parses_guard_with_precedence() {
        let e = parse_expr("elapsed >= 0 and v > 3.5").unwrap();
        assert_eq!(
            e,
            bin(
                BinOp::And,
                bin(BinOp::Ge, var("elapsed"), Expr::synth(ExprKind::Int(0))),
                bin(BinOp::Gt, var("v"), Expr::synth(ExprKind::Real(3.5))),
            )
        );
    }

    #[test]
    fn truncated_input_reports_column() {
        let err = parse_expr("1 + ").unwrap_err();
        assert_eq!(err.span(), Span::new(1, 5));
    }

    #[test]
    fn conditional_and_inf() {
        let e = parse_expr("if phase_ok then 2.5 else INF").unwrap();
        match e.kind {
            ExprKind::If(c, t, f) => {
                assert_eq!(*c, var("phase_ok"));
                assert_eq!(*t, Expr::synth(ExprKind::Real(2.5)));
                assert!(f.is_literal_inf());
            }
            other => panic!("expected if, got {other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_tighter_than_mul() {
        let e = parse_expr("-x * y").unwrap();
        assert_eq!(
            e,
            bin(
                BinOp::Mul,
                Expr::synth(ExprKind::Unary(UnOp::Neg, Box::new(var("x")))),
                var("y"),
            )
        );
    }

    #[test]
    fn trailing_tokens_rejected() {
        assert!(parse_expr("1 2").is_err());
    }
}
