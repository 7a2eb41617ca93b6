//! Parser for the model DSL (`.devs` files).
//!
//! Parsing is syntax-only: duplicate ports, feedback couplings, type
//! errors and the like are left to [`validate_model`](super::validate_model)
//! so that a file can be parsed and inspected even when it is not a valid
//! model. Only model-level resolution (duplicate model names, unresolved
//! component references, missing root) is rejected here.

use super::{
    AtomicModel, ComponentDecl, CoupledModel, Coupling, Direction, Endpoint, EndpointOwner,
    ExternalRule, InternalRule, Model, ModelSet, Pattern, PortDecl, StateVarDecl, TaEntry,
    VarDefault, VarKind,
};
use crate::expr::{
    parse_value_literal, ParseError, ParseResult, Span, TokenCursor, TokenKind, Ty,
};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("duplicate model name `{name}` at {span}")]
    DuplicateModel { name: String, span: Span },
    #[error("unresolved component reference `{model}` in `{coupled}` at {span}")]
    UnresolvedComponent {
        coupled: String,
        model: String,
        span: Span,
    },
    #[error("no root model: the file declares no models")]
    NoRootModel,
}

/// Parses a complete `.devs` file into a fully resolved [`ModelSet`].
/// The last model declared becomes the designated root.
pub fn parse_model_file(text: &str) -> Result<ModelSet, ModelError> {
    let mut cur = TokenCursor::new(text)?;
    let mut models: Vec<Model> = Vec::new();
    while !cur.at_eof() {
        let model = parse_model(&mut cur)?;
        if let Some(prev) = models.iter().find(|m| m.name() == model.name()) {
            let _ = prev;
            return Err(ModelError::DuplicateModel {
                name: model.name().to_string(),
                span: model.span(),
            });
        }
        models.push(model);
    }
    let root = match models.last() {
        Some(m) => m.name().to_string(),
        None => return Err(ModelError::NoRootModel),
    };
    // Component references must resolve; everything else is validation.
    for model in &models {
        if let Model::Coupled(c) = model {
            for comp in &c.components {
                if !models.iter().any(|m| m.name() == comp.model) {
                    return Err(ModelError::UnresolvedComponent {
                        coupled: c.name.clone(),
                        model: comp.model.clone(),
                        span: comp.span,
                    });
                }
            }
        }
    }
    Ok(ModelSet { models, root })
}

fn parse_model(cur: &mut TokenCursor) -> Result<Model, ModelError> {
    if cur.at_word("atomic") {
        Ok(Model::Atomic(parse_atomic(cur)?))
    } else if cur.at_word("coupled") {
        Ok(Model::Coupled(parse_coupled(cur)?))
    } else {
        Err(cur.error::<()>("`atomic` or `coupled`").unwrap_err().into())
    }
}

fn parse_atomic(cur: &mut TokenCursor) -> ParseResult<AtomicModel> {
    let span = cur.expect_word("atomic")?;
    let (name, _) = cur.expect_ident("model name")?;
    cur.expect(TokenKind::LBrace)?;
    let mut model = AtomicModel {
        name,
        ports: Vec::new(),
        state_vars: Vec::new(),
        ta: Vec::new(),
        ext_rules: Vec::new(),
        int_rules: Vec::new(),
        span,
    };
    while !cur.eat(TokenKind::RBrace) {
        if cur.at_word("inports") {
            cur.bump();
            parse_port_block(cur, Direction::Input, &mut model.ports)?;
        } else if cur.at_word("outports") {
            cur.bump();
            parse_port_block(cur, Direction::Output, &mut model.ports)?;
        } else if cur.at_word("finite") {
            model.state_vars.push(parse_finite_decl(cur)?);
        } else if cur.at_word("free") {
            model.state_vars.push(parse_free_decl(cur)?);
        } else if cur.at_word("ta") {
            cur.bump();
            cur.expect(TokenKind::LBrace)?;
            while !cur.eat(TokenKind::RBrace) {
                let pattern = parse_pattern(cur)?;
                cur.expect(TokenKind::Arrow)?;
                let expr = cur.parse_expr()?;
                model.ta.push(TaEntry { pattern, expr });
                if !cur.eat(TokenKind::Semi) {
                    cur.expect(TokenKind::RBrace)?;
                    break;
                }
            }
        } else if cur.at_word("ext") {
            model.ext_rules.push(parse_ext_rule(cur)?);
        } else if cur.at_word("int") {
            model.int_rules.push(parse_int_rule(cur)?);
        } else {
            return cur.error("an atomic model item (inports, outports, finite, free, ta, ext, int)");
        }
    }
    Ok(model)
}

fn parse_port_block(
    cur: &mut TokenCursor,
    direction: Direction,
    out: &mut Vec<PortDecl>,
) -> ParseResult<()> {
    cur.expect(TokenKind::LBrace)?;
    while !cur.eat(TokenKind::RBrace) {
        let (name, span) = cur.expect_ident("a port name")?;
        out.push(PortDecl {
            name,
            direction,
            span,
        });
        cur.eat(TokenKind::Comma);
    }
    Ok(())
}

fn parse_finite_decl(cur: &mut TokenCursor) -> ParseResult<StateVarDecl> {
    let span = cur.expect_word("finite")?;
    let (name, _) = cur.expect_ident("a variable name")?;
    cur.expect_word("in")?;
    cur.expect(TokenKind::LBrace)?;
    let mut domain = Vec::new();
    while !cur.eat(TokenKind::RBrace) {
        let (value, _) = cur.expect_ident("a domain value")?;
        domain.push(value);
        cur.eat(TokenKind::Comma);
    }
    let default = if cur.eat(TokenKind::Assign) {
        let (value, _) = cur.expect_ident("a default domain value")?;
        Some(VarDefault::Symbol(value))
    } else {
        None
    };
    Ok(StateVarDecl {
        name,
        kind: VarKind::Finite(domain),
        default,
        span,
    })
}

fn parse_free_decl(cur: &mut TokenCursor) -> ParseResult<StateVarDecl> {
    let span = cur.expect_word("free")?;
    let (name, _) = cur.expect_ident("a variable name")?;
    cur.expect(TokenKind::Colon)?;
    let ty = parse_type(cur)?;
    let default = if cur.eat(TokenKind::Assign) {
        Some(VarDefault::Literal(parse_value_literal(cur)?))
    } else {
        None
    };
    Ok(StateVarDecl {
        name,
        kind: VarKind::Free(ty),
        default,
        span,
    })
}

fn parse_type(cur: &mut TokenCursor) -> ParseResult<Ty> {
    let (word, span) = cur.expect_ident("a type (int, real, bool)")?;
    match word.as_str() {
        "int" => Ok(Ty::Int),
        "real" => Ok(Ty::Real),
        "bool" => Ok(Ty::Bool),
        _ => Err(ParseError::Unexpected {
            expected: "a type (int, real, bool)".into(),
            found: TokenKind::Ident(word),
            span,
        }),
    }
}

fn parse_pattern(cur: &mut TokenCursor) -> ParseResult<Pattern> {
    let span = cur.peek_span();
    if cur.eat(TokenKind::Star) {
        return Ok(Pattern::wildcard(span));
    }
    let mut entries = Vec::new();
    loop {
        let (var, _) = cur.expect_ident("a finite variable name or `*`")?;
        cur.expect(TokenKind::Assign)?;
        let (value, _) = cur.expect_ident("a domain value")?;
        entries.push((var, value));
        if !cur.eat(TokenKind::Comma) {
            break;
        }
    }
    Ok(Pattern {
        wildcard: false,
        entries,
        span,
    })
}

fn parse_updates(cur: &mut TokenCursor) -> ParseResult<Vec<(String, crate::expr::Expr)>> {
    let mut updates = Vec::new();
    if !cur.at_word("with") {
        return Ok(updates);
    }
    cur.bump();
    cur.expect(TokenKind::LBrace)?;
    while !cur.eat(TokenKind::RBrace) {
        let (var, _) = cur.expect_ident("a free variable name")?;
        cur.expect(TokenKind::Assign)?;
        let expr = cur.parse_expr()?;
        updates.push((var, expr));
        if !cur.eat(TokenKind::Comma) {
            cur.expect(TokenKind::RBrace)?;
            break;
        }
    }
    Ok(updates)
}

fn parse_ext_rule(cur: &mut TokenCursor) -> ParseResult<ExternalRule> {
    let span = cur.expect_word("ext")?;
    cur.expect_word("from")?;
    let source = parse_pattern(cur)?;
    cur.expect_word("on")?;
    let (port, _) = cur.expect_ident("an input port name")?;
    cur.expect(TokenKind::LParen)?;
    let (binder, _) = cur.expect_ident("a value binder")?;
    cur.expect(TokenKind::RParen)?;
    cur.expect_word("when")?;
    let guard = cur.parse_expr()?;
    cur.expect(TokenKind::Arrow)?;
    let target = parse_pattern(cur)?;
    let updates = parse_updates(cur)?;
    Ok(ExternalRule {
        source,
        port,
        binder,
        guard,
        target,
        updates,
        span,
    })
}

fn parse_int_rule(cur: &mut TokenCursor) -> ParseResult<InternalRule> {
    let span = cur.expect_word("int")?;
    cur.expect_word("from")?;
    let source = parse_pattern(cur)?;
    cur.expect_word("when")?;
    let guard = cur.parse_expr()?;
    cur.expect(TokenKind::Arrow)?;
    let target = parse_pattern(cur)?;
    let updates = parse_updates(cur)?;
    let output = if cur.at_word("output") {
        cur.bump();
        let (port, _) = cur.expect_ident("an output port name")?;
        cur.expect(TokenKind::LParen)?;
        let expr = cur.parse_expr()?;
        cur.expect(TokenKind::RParen)?;
        Some((port, expr))
    } else {
        None
    };
    Ok(InternalRule {
        source,
        guard,
        target,
        updates,
        output,
        span,
    })
}

fn parse_coupled(cur: &mut TokenCursor) -> ParseResult<CoupledModel> {
    let span = cur.expect_word("coupled")?;
    let (name, _) = cur.expect_ident("model name")?;
    cur.expect(TokenKind::LBrace)?;
    let mut model = CoupledModel {
        name,
        ports: Vec::new(),
        components: Vec::new(),
        couplings: Vec::new(),
        select_order: None,
        span,
    };
    while !cur.eat(TokenKind::RBrace) {
        if cur.at_word("inports") {
            cur.bump();
            parse_port_block(cur, Direction::Input, &mut model.ports)?;
        } else if cur.at_word("outports") {
            cur.bump();
            parse_port_block(cur, Direction::Output, &mut model.ports)?;
        } else if cur.at_word("components") {
            cur.bump();
            cur.expect(TokenKind::LBrace)?;
            while !cur.eat(TokenKind::RBrace) {
                let (reference, span) = cur.expect_ident("a component reference")?;
                cur.expect(TokenKind::Colon)?;
                let (model_name, _) = cur.expect_ident("a model name")?;
                model.components.push(ComponentDecl {
                    reference,
                    model: model_name,
                    span,
                });
                cur.eat(TokenKind::Comma);
            }
        } else if cur.at_word("couple") {
            let span = cur.bump().span;
            let from = parse_endpoint(cur, &model.name)?;
            cur.expect(TokenKind::Arrow)?;
            let to = parse_endpoint(cur, &model.name)?;
            model.couplings.push(Coupling { from, to, span });
        } else if cur.at_word("select") {
            cur.bump();
            cur.expect_word("order")?;
            cur.expect(TokenKind::LBrace)?;
            let mut order = Vec::new();
            while !cur.eat(TokenKind::RBrace) {
                let (reference, _) = cur.expect_ident("a component reference")?;
                order.push(reference);
                cur.eat(TokenKind::Comma);
            }
            model.select_order = Some(order);
        } else {
            return cur
                .error("a coupled model item (inports, outports, components, couple, select)");
        }
    }
    Ok(model)
}

fn parse_endpoint(cur: &mut TokenCursor, model_name: &str) -> ParseResult<Endpoint> {
    let (owner, _) = cur.expect_ident("a model or component name")?;
    cur.expect(TokenKind::Dot)?;
    let (port, _) = cur.expect_ident("a port name")?;
    let owner = if owner == model_name {
        EndpointOwner::Model
    } else {
        EndpointOwner::Component(owner)
    };
    Ok(Endpoint { owner, port })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub const PROCESSOR_DSL: &str = "atomic Processor { inports { in } outports { out } \
        finite phase in { idle, busy } = idle free job : real = 0.0 \
        ta { phase=idle -> INF ; phase=busy -> 2.5 } \
        ext from phase=idle on in(v) when true -> phase=busy with { job = v } \
        int from phase=busy when true -> phase=idle output out(job) }";

    #[test]
    fn parses_processor_counts() {
        let ms = parse_model_file(PROCESSOR_DSL).unwrap();
        assert_eq!(ms.models.len(), 1);
        assert_eq!(ms.root, "Processor");
        let m = match &ms.models[0] {
            Model::Atomic(m) => m,
            _ => panic!("expected atomic"),
        };
        assert_eq!(m.ports.len(), 2);
        assert_eq!(m.state_vars.len(), 2);
        assert_eq!(m.ext_rules.len(), 1);
        assert_eq!(m.int_rules.len(), 1);
        assert_eq!(m.ta.len(), 2);
        assert!(m.ta[0].expr.is_literal_inf());
    }

    #[test]
    fn empty_file_has_no_root() {
        assert!(matches!(
            parse_model_file(""),
            Err(ModelError::NoRootModel)
        ));
    }

    #[test]
    fn feedback_coupling_is_parsed_not_rejected() {
        let text = format!(
            "{PROCESSOR_DSL}\ncoupled Loop {{ components {{ p1: Processor }} couple p1.out -> p1.in }}"
        );
        let ms = parse_model_file(&text).unwrap();
        assert_eq!(ms.root, "Loop");
        let c = match ms.get("Loop").unwrap() {
            Model::Coupled(c) => c,
            _ => panic!(),
        };
        assert_eq!(c.couplings.len(), 1);
    }

    #[test]
    fn duplicate_model_rejected() {
        let text = format!("{PROCESSOR_DSL}\n{PROCESSOR_DSL}");
        assert!(matches!(
            parse_model_file(&text),
            Err(ModelError::DuplicateModel { .. })
        ));
    }

    #[test]
    fn unresolved_component_rejected() {
        let text = "coupled C { components { p: Ghost } }";
        assert!(matches!(
            parse_model_file(text),
            Err(ModelError::UnresolvedComponent { .. })
        ));
    }

    #[test]
    fn pipeline_roundtrip_shape() {
        let text = format!(
            "{PROCESSOR_DSL}\ncoupled Pipeline {{ inports {{ jobs }} outports {{ done }} \
             components {{ p1: Processor, p2: Processor }} \
             couple Pipeline.jobs -> p1.in couple p1.out -> p2.in couple p2.out -> Pipeline.done \
             select order {{ p1, p2 }} }}"
        );
        let ms = parse_model_file(&text).unwrap();
        let c = match ms.get("Pipeline").unwrap() {
            Model::Coupled(c) => c,
            _ => panic!(),
        };
        assert_eq!(c.components.len(), 2);
        assert_eq!(c.couplings.len(), 3);
        assert_eq!(c.select_order, Some(vec!["p1".into(), "p2".into()]));
        assert_eq!(c.couplings[0].from.owner, EndpointOwner::Model);
    }
}
