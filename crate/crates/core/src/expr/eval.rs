//! Evaluator. Evaluation is strict: both operands of every binary operator
//! are evaluated (including `and`/`or`); only `if` selects a single branch.
//! Real arithmetic is plain IEEE binary64 in the order fixed by the AST, so
//! that repeated evaluation of the same expression over the same bindings
//! returns bit-identical values in every engine.

use super::{BinOp, Expr, ExprKind, Span, UnOp, Value};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("evaluation error at {span}: division by zero")]
    DivisionByZero { span: Span },
    #[error("evaluation error at {span}: unbound variable `{name}`")]
    UnboundVariable { name: String, span: Span },
    #[error("evaluation error at {span}: operator `{op}` applied to {found}")]
    BadValue {
        op: &'static str,
        found: &'static str,
        span: Span,
    },
}

impl EvalError {
    pub fn span(&self) -> Span {
        match self {
            EvalError::DivisionByZero { span }
            | EvalError::UnboundVariable { span, .. }
            | EvalError::BadValue { span, .. } => *span,
        }
    }
}

/// Name-to-value bindings for one evaluation.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    entries: Vec<(String, Value)>,
}

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    /// Adds or replaces a binding.
    pub fn bind(&mut self, name: impl Into<String>, value: Value) {
        let name = name.into();
        if let Some(slot) = self.entries.iter_mut().find(|(n, _)| *n == name) {
            slot.1 = value;
        } else {
            self.entries.push((name, value));
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: Value) -> Self {
        self.bind(name, value);
        self
    }

    pub fn lookup(&self, name: &str) -> Option<Value> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }
}

/// Evaluates a well-typed expression. Comparisons on infinity follow
/// extended-real order; division by zero (int or real) is an error.
pub fn eval(e: &Expr, bindings: &Bindings) -> Result<Value, EvalError> {
    match &e.kind {
        ExprKind::Int(i) => Ok(Value::Int(*i)),
        ExprKind::Real(r) => Ok(Value::Real(*r)),
        ExprKind::Bool(b) => Ok(Value::Bool(*b)),
        ExprKind::Inf => Ok(Value::Real(f64::INFINITY)),
        ExprKind::Var(name) => {
            bindings
                .lookup(name)
                .ok_or_else(|| EvalError::UnboundVariable {
                    name: name.clone(),
                    span: e.span,
                })
        }
        ExprKind::Unary(UnOp::Neg, inner) => match eval(inner, bindings)? {
            Value::Int(i) => Ok(Value::Int(i.wrapping_neg())),
            Value::Real(r) => Ok(Value::Real(-r)),
            Value::Bool(_) => Err(EvalError::BadValue {
                op: "-",
                found: "a bool",
                span: e.span,
            }),
        },
        ExprKind::Unary(UnOp::Not, inner) => match eval(inner, bindings)? {
            Value::Bool(b) => Ok(Value::Bool(!b)),
            _ => Err(EvalError::BadValue {
                op: "not",
                found: "a non-bool",
                span: e.span,
            }),
        },
        ExprKind::Binary(op, lhs, rhs) => {
            let lv = eval(lhs, bindings)?;
            let rv = eval(rhs, bindings)?;
            apply_binary(*op, lv, rv, e.span)
        }
        ExprKind::If(cond, then, els) => match eval(cond, bindings)? {
            Value::Bool(true) => eval(then, bindings),
            Value::Bool(false) => eval(els, bindings),
            _ => Err(EvalError::BadValue {
                op: "if",
                found: "a non-bool condition",
                span: cond.span,
            }),
        },
    }
}

fn apply_binary(op: BinOp, lv: Value, rv: Value, span: Span) -> Result<Value, EvalError> {
    use Value::{Bool, Int, Real};
    match op {
        BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => {
            match (lv, rv) {
                // Integer arithmetic wraps on overflow and truncates on
                // division, matching two's-complement i64.
                (Int(a), Int(b)) => {
                    let v = match op {
                        BinOp::Add => a.wrapping_add(b),
                        BinOp::Sub => a.wrapping_sub(b),
                        BinOp::Mul => a.wrapping_mul(b),
                        BinOp::Div => {
                            if b == 0 {
                                return Err(EvalError::DivisionByZero { span });
                            }
                            a.wrapping_div(b)
                        }
                        _ => unreachable!(),
                    };
                    Ok(Int(v))
                }
                (a, b) => {
                    let (a, b) = match (a.widen_to_real(), b.widen_to_real()) {
                        (Real(a), Real(b)) => (a, b),
                        _ => {
                            return Err(EvalError::BadValue {
                                op: op.symbol(),
                                found: "a bool",
                                span,
                            })
                        }
                    };
                    let v = match op {
                        BinOp::Add => a + b,
                        BinOp::Sub => a - b,
                        BinOp::Mul => a * b,
                        BinOp::Div => {
                            if b == 0.0 {
                                return Err(EvalError::DivisionByZero { span });
                            }
                            a / b
                        }
                        _ => unreachable!(),
                    };
                    Ok(Real(v))
                }
            }
        }
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
            let ord = numeric_order(lv, rv, op.symbol(), span)?;
            let v = match op {
                BinOp::Lt => ord == std::cmp::Ordering::Less,
                BinOp::Le => ord != std::cmp::Ordering::Greater,
                BinOp::Gt => ord == std::cmp::Ordering::Greater,
                BinOp::Ge => ord != std::cmp::Ordering::Less,
                _ => unreachable!(),
            };
            Ok(Bool(v))
        }
        BinOp::Eq | BinOp::Ne => {
            let equal = match (lv, rv) {
                (Bool(a), Bool(b)) => a == b,
                (Bool(_), _) | (_, Bool(_)) => {
                    return Err(EvalError::BadValue {
                        op: op.symbol(),
                        found: "a bool compared with a number",
                        span,
                    })
                }
                (a, b) => numeric_order(a, b, op.symbol(), span)? == std::cmp::Ordering::Equal,
            };
            Ok(Bool(if op == BinOp::Eq { equal } else { !equal }))
        }
        BinOp::And | BinOp::Or => match (lv, rv) {
            (Bool(a), Bool(b)) => Ok(Bool(if op == BinOp::And { a && b } else { a || b })),
            _ => Err(EvalError::BadValue {
                op: op.symbol(),
                found: "a non-bool",
                span,
            }),
        },
    }
}

fn numeric_order(
    a: Value,
    b: Value,
    op: &'static str,
    span: Span,
) -> Result<std::cmp::Ordering, EvalError> {
    use Value::{Int, Real};
    let ord = match (a, b) {
        (Int(a), Int(b)) => a.cmp(&b),
        (a, b) => match (a.widen_to_real(), b.widen_to_real()) {
            (Real(a), Real(b)) => a.partial_cmp(&b).ok_or(EvalError::BadValue {
                op,
                found: "NaN",
                span,
            })?,
            _ => {
                return Err(EvalError::BadValue {
                    op,
                    found: "a bool",
                    span,
                })
            }
        },
    };
    Ok(ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn run(text: &str, bindings: Bindings) -> Result<Value, EvalError> {
        eval(&parse_expr(text).unwrap(), &bindings)
    }

    #[test]
    fn evaluates_arithmetic() {
        assert_eq!(run("1 + 2", Bindings::new()).unwrap(), Value::Int(3));
        assert_eq!(run("7 / 2", Bindings::new()).unwrap(), Value::Int(3));
        assert_eq!(run("1 + 2.5", Bindings::new()).unwrap(), Value::Real(3.5));
    }

    #[test]
    fn elapsed_boundary_guard() {
        let b = Bindings::new().with("elapsed", Value::Real(0.0));
        assert_eq!(run("elapsed >= 0", b).unwrap(), Value::Bool(true));
    }

    #[test]
    fn conditional_selects_inf() {
        let b = Bindings::new().with("phase_ok", Value::Bool(false));
        assert_eq!(
            run("if phase_ok then 2.5 else INF", b).unwrap(),
            Value::Real(f64::INFINITY)
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            run("1 / 0", Bindings::new()),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert!(matches!(
            run("1.0 / 0.0", Bindings::new()),
            Err(EvalError::DivisionByZero { .. })
        ));
    }

    #[test]
    fn extended_real_order_on_inf() {
        assert_eq!(run("INF > 1000000.0", Bindings::new()).unwrap(), Value::Bool(true));
        assert_eq!(run("INF == INF", Bindings::new()).unwrap(), Value::Bool(true));
    }

    #[test]
    fn mixed_equality_promotes() {
        assert_eq!(run("1 == 1.0", Bindings::new()).unwrap(), Value::Bool(true));
    }
}
