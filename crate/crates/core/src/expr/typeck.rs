//! Type checker. `int` promotes to `real` in mixed arithmetic and
//! comparisons; boolean connectives require `bool` operands; `==`/`!=`
//! also accept a pair of bools.

use super::{BinOp, Expr, ExprKind, Span, Ty, UnOp};
use thiserror::Error;

/// Declared variable types; names are unique.
#[derive(Debug, Clone, Default)]
pub struct TypeEnv {
    entries: Vec<(String, Ty)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    /// Adds a binding, replacing any previous entry of the same name.
    pub fn bind(&mut self, name: impl Into<String>, ty: Ty) {
        let name = name.into();
        if let Some(slot) = self.entries.iter_mut().find(|(n, _)| *n == name) {
            slot.1 = ty;
        } else {
            self.entries.push((name, ty));
        }
    }

    pub fn with(mut self, name: impl Into<String>, ty: Ty) -> Self {
        self.bind(name, ty);
        self
    }

    pub fn lookup(&self, name: &str) -> Option<Ty> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, ty)| *ty)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Ty)> {
        self.entries.iter().map(|(n, t)| (n.as_str(), *t))
    }
}

#[derive(Debug, Clone, Error)]
pub enum TypeError {
    #[error("type error at {span}: unknown variable `{name}`")]
    UnknownVariable { name: String, span: Span },
    #[error("type error at {span}: operator `{op}` expects {expected}, {side} operand is {found}")]
    BadOperand {
        op: &'static str,
        expected: &'static str,
        side: &'static str,
        found: Ty,
        span: Span,
    },
    #[error("type error at {span}: branches of `if` have different types ({then_ty} vs {else_ty})")]
    BranchMismatch {
        then_ty: Ty,
        else_ty: Ty,
        span: Span,
    },
    #[error("type error at {span}: condition of `if` must be bool, found {found}")]
    BadCondition { found: Ty, span: Span },
    #[error("type error at {span}: operands of `{op}` cannot be compared ({lhs} vs {rhs})")]
    Incomparable {
        op: &'static str,
        lhs: Ty,
        rhs: Ty,
        span: Span,
    },
}

impl TypeError {
    pub fn span(&self) -> Span {
        match self {
            TypeError::UnknownVariable { span, .. }
            | TypeError::BadOperand { span, .. }
            | TypeError::BranchMismatch { span, .. }
            | TypeError::BadCondition { span, .. }
            | TypeError::Incomparable { span, .. } => *span,
        }
    }
}

/// Returns the expression's type under `env`, or the first diagnostic.
pub fn typecheck(e: &Expr, env: &TypeEnv) -> Result<Ty, TypeError> {
    match &e.kind {
        ExprKind::Int(_) => Ok(Ty::Int),
        ExprKind::Real(_) | ExprKind::Inf => Ok(Ty::Real),
        ExprKind::Bool(_) => Ok(Ty::Bool),
        ExprKind::Var(name) => env.lookup(name).ok_or_else(|| TypeError::UnknownVariable {
            name: name.clone(),
            span: e.span,
        }),
        ExprKind::Unary(UnOp::Neg, inner) => {
            let ty = typecheck(inner, env)?;
            if ty == Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: "-",
                    expected: "a numeric operand",
                    side: "the",
                    found: ty,
                    span: e.span,
                });
            }
            Ok(ty)
        }
        ExprKind::Unary(UnOp::Not, inner) => {
            let ty = typecheck(inner, env)?;
            if ty != Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: "not",
                    expected: "a bool operand",
                    side: "the",
                    found: ty,
                    span: e.span,
                });
            }
            Ok(Ty::Bool)
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let lt = typecheck(lhs, env)?;
            let rt = typecheck(rhs, env)?;
            check_binary(*op, lt, rt, e.span)
        }
        ExprKind::If(cond, then, els) => {
            let ct = typecheck(cond, env)?;
            if ct != Ty::Bool {
                return Err(TypeError::BadCondition {
                    found: ct,
                    span: cond.span,
                });
            }
            let tt = typecheck(then, env)?;
            let et = typecheck(els, env)?;
            match unify_numeric(tt, et) {
                Some(ty) => Ok(ty),
                None => Err(TypeError::BranchMismatch {
                    then_ty: tt,
                    else_ty: et,
                    span: e.span,
                }),
            }
        }
    }
}

fn check_binary(op: BinOp, lt: Ty, rt: Ty, span: Span) -> Result<Ty, TypeError> {
    match op {
        BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div => {
            let expected = "numeric operands";
            if lt == Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "left",
                    found: lt,
                    span,
                });
            }
            if rt == Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "right",
                    found: rt,
                    span,
                });
            }
            Ok(unify_numeric(lt, rt).expect("numeric pair"))
        }
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
            let expected = "numeric operands";
            if lt == Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "left",
                    found: lt,
                    span,
                });
            }
            if rt == Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "right",
                    found: rt,
                    span,
                });
            }
            Ok(Ty::Bool)
        }
        BinOp::Eq | BinOp::Ne => {
            if (lt == Ty::Bool) != (rt == Ty::Bool) {
                return Err(TypeError::Incomparable {
                    op: op.symbol(),
                    lhs: lt,
                    rhs: rt,
                    span,
                });
            }
            Ok(Ty::Bool)
        }
        BinOp::And | BinOp::Or => {
            let expected = "bool operands";
            if lt != Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "left",
                    found: lt,
                    span,
                });
            }
            if rt != Ty::Bool {
                return Err(TypeError::BadOperand {
                    op: op.symbol(),
                    expected,
                    side: "right",
                    found: rt,
                    span,
                });
            }
            Ok(Ty::Bool)
        }
    }
}

/// Join of two types under int-to-real promotion; `None` when one side is
/// bool and the other is not.
fn unify_numeric(a: Ty, b: Ty) -> Option<Ty> {
    match (a, b) {
        (Ty::Int, Ty::Int) => Some(Ty::Int),
        (Ty::Int, Ty::Real) | (Ty::Real, Ty::Int) | (Ty::Real, Ty::Real) => Some(Ty::Real),
        (Ty::Bool, Ty::Bool) => Some(Ty::Bool),
        _ => None,
    }
}

/// True when an expression of type `found` may initialize or update a slot
/// of type `want` (identity, or int widening to real).
pub fn assignable(want: Ty, found: Ty) -> bool {
    want == found || (want == Ty::Real && found == Ty::Int)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn env(pairs: &[(&str, Ty)]) -> TypeEnv {
        let mut e = TypeEnv::new();
        for (n, t) in pairs {
            e.bind(*n, *t);
        }
        e
    }

    #[test]
    fn mixed_arithmetic_promotes() {
        let e = parse_expr("x + 1").unwrap();
        assert_eq!(typecheck(&e, &env(&[("x", Ty::Real)])).unwrap(), Ty::Real);
    }

    #[test]
    fn bool_operand_of_and_is_reported() {
        let e = parse_expr("x and 1").unwrap();
        let err = typecheck(&e, &env(&[("x", Ty::Bool)])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("right operand"), "{msg}");
    }

    #[test]
    fn unknown_variable() {
        let e = parse_expr("y").unwrap();
        let err = typecheck(&e, &env(&[])).unwrap_err();
        assert!(matches!(err, TypeError::UnknownVariable { ref name, .. } if name == "y"));
    }

    #[test]
    fn comparison_yields_bool() {
        let e = parse_expr("elapsed >= 0").unwrap();
        assert_eq!(
            typecheck(&e, &env(&[("elapsed", Ty::Real)])).unwrap(),
            Ty::Bool
        );
    }

    #[test]
    fn if_branches_unify() {
        let e = parse_expr("if b then 1 else 2.0").unwrap();
        assert_eq!(typecheck(&e, &env(&[("b", Ty::Bool)])).unwrap(), Ty::Real);
    }
}
