//! Static validation of a parsed model set.
//!
//! The result is a list of diagnostics, empty exactly when every model
//! invariant holds. Diagnostics are sorted by model name and then source
//! location, so the output is stable across runs.

use super::{
    AtomicModel, CoupledModel, Direction, EndpointOwner, Model, ModelSet, Pattern, VarDefault,
    VarKind, RESERVED_VAR_NAMES,
};
use crate::expr::{typecheck, Expr, ExprKind, Span, Ty, TypeEnv};
use std::collections::BTreeSet;
use std::fmt;

/// Machine-readable diagnostic category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagCode {
    DuplicatePort,
    DuplicateVariable,
    EmptyDomain,
    DuplicateDomainValue,
    BadStateToken,
    ReservedName,
    BadDefault,
    TaCoverage,
    TaOverlap,
    TaNotNumeric,
    UnknownPort,
    UnknownVariable,
    UnknownDomainValue,
    IncompleteTarget,
    UpdateTargetNotFree,
    DuplicateUpdate,
    GuardNotBool,
    TypeError,
    InfOutsideTa,
    OutputNotNumeric,
    DuplicateComponentRef,
    ComponentRefClash,
    UnknownEndpoint,
    CouplingDirection,
    Feedback,
    DuplicateCoupling,
    SelectOrderInvalid,
    CyclicContainment,
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One validation finding, tied to a model, a source location, and (when
/// it concerns a transition table) a rule id like `ext#0`.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub model: String,
    pub span: Span,
    pub rule: Option<String>,
    pub code: DiagCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.model, self.span, self.code, self.message)?;
        if let Some(rule) = &self.rule {
            write!(f, " (in {rule})")?;
        }
        Ok(())
    }
}

struct Ctx<'a> {
    ms: &'a ModelSet,
    out: Vec<Diagnostic>,
}

impl Ctx<'_> {
    fn push(
        &mut self,
        model: &str,
        span: Span,
        rule: Option<String>,
        code: DiagCode,
        message: impl Into<String>,
    ) {
        self.out.push(Diagnostic {
            model: model.to_string(),
            span,
            rule,
            code,
            message: message.into(),
        });
    }
}

/// Checks every model invariant; returns an empty list iff the set is
/// valid.
pub fn validate_model(ms: &ModelSet) -> Vec<Diagnostic> {
    let mut ctx = Ctx {
        ms,
        out: Vec::new(),
    };
    for model in &ms.models {
        match model {
            Model::Atomic(m) => check_atomic(&mut ctx, m),
            Model::Coupled(m) => check_coupled(&mut ctx, m),
        }
    }
    check_containment_cycles(&mut ctx);
    let mut out = ctx.out;
    out.sort_by(|a, b| {
        (a.model.as_str(), a.span.line, a.span.col)
            .cmp(&(b.model.as_str(), b.span.line, b.span.col))
    });
    out
}

fn check_ports(ctx: &mut Ctx, model: &str, ports: &[super::PortDecl]) {
    let mut seen = BTreeSet::new();
    for p in ports {
        if !seen.insert(p.name.as_str()) {
            ctx.push(
                model,
                p.span,
                None,
                DiagCode::DuplicatePort,
                format!("port `{}` declared more than once; ports are unidirectional and names are shared across directions", p.name),
            );
        }
    }
}

/// State-variable names and domain symbols become part of canonical state
/// ids of the form `var=value__var=value`; the token shape below keeps
/// that encoding injective.
fn id_token_ok(token: &str) -> bool {
    !token.starts_with('_') && !token.ends_with('_') && !token.contains("__")
}

fn check_atomic(ctx: &mut Ctx, m: &AtomicModel) {
    check_ports(ctx, &m.name, &m.ports);

    let mut seen = BTreeSet::new();
    for v in &m.state_vars {
        if !seen.insert(v.name.as_str()) {
            ctx.push(
                &m.name,
                v.span,
                None,
                DiagCode::DuplicateVariable,
                format!("state variable `{}` declared more than once", v.name),
            );
        }
        if RESERVED_VAR_NAMES.contains(&v.name.as_str()) {
            ctx.push(
                &m.name,
                v.span,
                None,
                DiagCode::ReservedName,
                format!("`{}` is reserved and cannot be a state variable", v.name),
            );
        }
        match &v.kind {
            VarKind::Finite(domain) => {
                if domain.is_empty() {
                    ctx.push(
                        &m.name,
                        v.span,
                        None,
                        DiagCode::EmptyDomain,
                        format!("finite variable `{}` has an empty domain", v.name),
                    );
                }
                let mut vals = BTreeSet::new();
                for value in domain {
                    if !vals.insert(value.as_str()) {
                        ctx.push(
                            &m.name,
                            v.span,
                            None,
                            DiagCode::DuplicateDomainValue,
                            format!("domain value `{value}` repeated in `{}`", v.name),
                        );
                    }
                    if !id_token_ok(value) {
                        ctx.push(
                            &m.name,
                            v.span,
                            None,
                            DiagCode::BadStateToken,
                            format!("domain value `{value}` may not start or end with `_` or contain `__`"),
                        );
                    }
                }
                if !id_token_ok(&v.name) {
                    ctx.push(
                        &m.name,
                        v.span,
                        None,
                        DiagCode::BadStateToken,
                        format!("finite variable name `{}` may not start or end with `_` or contain `__`", v.name),
                    );
                }
                if let Some(VarDefault::Symbol(sym)) = &v.default {
                    if !domain.contains(sym) {
                        ctx.push(
                            &m.name,
                            v.span,
                            None,
                            DiagCode::BadDefault,
                            format!("default `{sym}` is not in the domain of `{}`", v.name),
                        );
                    }
                }
                if matches!(v.default, Some(VarDefault::Literal(_))) {
                    ctx.push(
                        &m.name,
                        v.span,
                        None,
                        DiagCode::BadDefault,
                        format!("finite variable `{}` needs a symbolic default", v.name),
                    );
                }
            }
            VarKind::Free(ty) => {
                if let Some(VarDefault::Literal(value)) = &v.default {
                    if !crate::expr::typeck::assignable(*ty, value.ty()) {
                        ctx.push(
                            &m.name,
                            v.span,
                            None,
                            DiagCode::BadDefault,
                            format!(
                                "default of `{}` has type {}, expected {}",
                                v.name,
                                value.ty(),
                                ty
                            ),
                        );
                    }
                }
                if matches!(v.default, Some(VarDefault::Symbol(_))) {
                    ctx.push(
                        &m.name,
                        v.span,
                        None,
                        DiagCode::BadDefault,
                        format!("free variable `{}` needs a literal default", v.name),
                    );
                }
            }
        }
    }

    let free_env = m.free_env();

    // Time-advance table: patterns, numeric type, and exact coverage.
    for (i, entry) in m.ta.iter().enumerate() {
        let rule = Some(format!("ta#{i}"));
        check_pattern(ctx, m, &entry.pattern, rule.clone(), false);
        match typecheck(&entry.expr, &free_env) {
            Ok(Ty::Int) | Ok(Ty::Real) => {}
            Ok(other) => ctx.push(
                &m.name,
                entry.expr.span,
                rule.clone(),
                DiagCode::TaNotNumeric,
                format!("time advance must be numeric, found {other}"),
            ),
            Err(e) => ctx.push(
                &m.name,
                e.span(),
                rule.clone(),
                DiagCode::TypeError,
                e.to_string(),
            ),
        }
    }
    check_ta_coverage(ctx, m);

    for (i, rule) in m.ext_rules.iter().enumerate() {
        let id = Some(format!("ext#{i}"));
        check_pattern(ctx, m, &rule.source, id.clone(), false);
        check_pattern(ctx, m, &rule.target, id.clone(), true);
        match m.port(&rule.port) {
            Some(p) if p.direction == Direction::Input => {}
            Some(_) => ctx.push(
                &m.name,
                rule.span,
                id.clone(),
                DiagCode::UnknownPort,
                format!("`{}` is an output port; external rules trigger on input ports", rule.port),
            ),
            None => ctx.push(
                &m.name,
                rule.span,
                id.clone(),
                DiagCode::UnknownPort,
                format!("unknown port `{}`", rule.port),
            ),
        }
        if RESERVED_VAR_NAMES.contains(&rule.binder.as_str()) {
            ctx.push(
                &m.name,
                rule.span,
                id.clone(),
                DiagCode::ReservedName,
                format!("`{}` is reserved and cannot be a value binder", rule.binder),
            );
        }
        if m.state_vars.iter().any(|v| v.name == rule.binder) {
            ctx.push(
                &m.name,
                rule.span,
                id.clone(),
                DiagCode::ReservedName,
                format!("value binder `{}` shadows a state variable", rule.binder),
            );
        }
        let env = free_env
            .clone()
            .with(rule.binder.clone(), Ty::Real)
            .with("elapsed", Ty::Real);
        check_guard(ctx, m, &rule.guard, &env, id.clone());
        check_updates(ctx, m, &rule.updates, &env, id.clone());
        check_no_inf(ctx, m, &rule.guard, id.clone());
        for (_, e) in &rule.updates {
            check_no_inf(ctx, m, e, id.clone());
        }
    }

    for (i, rule) in m.int_rules.iter().enumerate() {
        let id = Some(format!("int#{i}"));
        check_pattern(ctx, m, &rule.source, id.clone(), false);
        check_pattern(ctx, m, &rule.target, id.clone(), true);
        check_guard(ctx, m, &rule.guard, &free_env, id.clone());
        check_updates(ctx, m, &rule.updates, &free_env, id.clone());
        check_no_inf(ctx, m, &rule.guard, id.clone());
        for (_, e) in &rule.updates {
            check_no_inf(ctx, m, e, id.clone());
        }
        if let Some((port, value)) = &rule.output {
            match m.port(port) {
                Some(p) if p.direction == Direction::Output => {}
                Some(_) => ctx.push(
                    &m.name,
                    rule.span,
                    id.clone(),
                    DiagCode::UnknownPort,
                    format!("`{port}` is an input port; outputs go to output ports"),
                ),
                None => ctx.push(
                    &m.name,
                    rule.span,
                    id.clone(),
                    DiagCode::UnknownPort,
                    format!("unknown port `{port}`"),
                ),
            }
            match typecheck(value, &free_env) {
                Ok(Ty::Int) | Ok(Ty::Real) => {}
                Ok(other) => ctx.push(
                    &m.name,
                    value.span,
                    id.clone(),
                    DiagCode::OutputNotNumeric,
                    format!("output values are numeric, found {other}"),
                ),
                Err(e) => ctx.push(
                    &m.name,
                    e.span(),
                    id.clone(),
                    DiagCode::TypeError,
                    e.to_string(),
                ),
            }
            check_no_inf(ctx, m, value, id.clone());
        }
    }
}

fn check_pattern(ctx: &mut Ctx, m: &AtomicModel, pattern: &Pattern, rule: Option<String>, full: bool) {
    let finite = m.finite_vars();
    let mut seen = BTreeSet::new();
    for (var, value) in &pattern.entries {
        if !seen.insert(var.as_str()) {
            ctx.push(
                &m.name,
                pattern.span,
                rule.clone(),
                DiagCode::DuplicateVariable,
                format!("pattern constrains `{var}` twice"),
            );
        }
        match finite.iter().find(|(n, _)| n == var) {
            None => ctx.push(
                &m.name,
                pattern.span,
                rule.clone(),
                DiagCode::UnknownVariable,
                format!("`{var}` is not a finite state variable"),
            ),
            Some((_, domain)) => {
                if !domain.iter().any(|s| s == value) {
                    ctx.push(
                        &m.name,
                        pattern.span,
                        rule.clone(),
                        DiagCode::UnknownDomainValue,
                        format!("`{value}` is not in the domain of `{var}`"),
                    );
                }
            }
        }
    }
    if full && !pattern.wildcard {
        for (name, _) in &finite {
            if !pattern.entries.iter().any(|(v, _)| v == name) {
                ctx.push(
                    &m.name,
                    pattern.span,
                    rule.clone(),
                    DiagCode::IncompleteTarget,
                    format!("target must assign every finite variable; `{name}` is missing"),
                );
            }
        }
    }
    if full && pattern.wildcard && !finite.is_empty() {
        ctx.push(
            &m.name,
            pattern.span,
            rule,
            DiagCode::IncompleteTarget,
            "target `*` only stands for the empty assignment in models without finite variables",
        );
    }
}

fn check_guard(ctx: &mut Ctx, m: &AtomicModel, guard: &Expr, env: &TypeEnv, rule: Option<String>) {
    match typecheck(guard, env) {
        Ok(Ty::Bool) => {}
        Ok(other) => ctx.push(
            &m.name,
            guard.span,
            rule,
            DiagCode::GuardNotBool,
            format!("guard must be bool, found {other}"),
        ),
        Err(e) => ctx.push(&m.name, e.span(), rule, DiagCode::TypeError, e.to_string()),
    }
}

fn check_updates(
    ctx: &mut Ctx,
    m: &AtomicModel,
    updates: &[(String, Expr)],
    env: &TypeEnv,
    rule: Option<String>,
) {
    let mut seen = BTreeSet::new();
    for (var, expr) in updates {
        if !seen.insert(var.as_str()) {
            ctx.push(
                &m.name,
                expr.span,
                rule.clone(),
                DiagCode::DuplicateUpdate,
                format!("`{var}` updated twice in one rule"),
            );
        }
        let target_ty = match m.state_vars.iter().find(|v| v.name == *var) {
            Some(decl) => match &decl.kind {
                VarKind::Free(ty) => Some(*ty),
                VarKind::Finite(_) => {
                    ctx.push(
                        &m.name,
                        expr.span,
                        rule.clone(),
                        DiagCode::UpdateTargetNotFree,
                        format!("`{var}` is finite; finite state changes through the target pattern"),
                    );
                    None
                }
            },
            None => {
                ctx.push(
                    &m.name,
                    expr.span,
                    rule.clone(),
                    DiagCode::UnknownVariable,
                    format!("unknown free variable `{var}`"),
                );
                None
            }
        };
        match typecheck(expr, env) {
            Ok(found) => {
                if let Some(want) = target_ty {
                    if !crate::expr::typeck::assignable(want, found) {
                        ctx.push(
                            &m.name,
                            expr.span,
                            rule.clone(),
                            DiagCode::TypeError,
                            format!("cannot assign {found} to `{var}` of type {want}"),
                        );
                    }
                }
            }
            Err(e) => ctx.push(
                &m.name,
                e.span(),
                rule.clone(),
                DiagCode::TypeError,
                e.to_string(),
            ),
        }
    }
}

/// `INF` is legal only inside time-advance expressions.
fn check_no_inf(ctx: &mut Ctx, m: &AtomicModel, expr: &Expr, rule: Option<String>) {
    let mut spans = Vec::new();
    expr.walk(&mut |e| {
        if matches!(e.kind, ExprKind::Inf) {
            spans.push(e.span);
        }
    });
    for span in spans {
        ctx.push(
            &m.name,
            span,
            rule.clone(),
            DiagCode::InfOutsideTa,
            "`INF` is only permitted in time-advance expressions",
        );
    }
}

/// Every finite combination must be matched by exactly one ta entry.
fn check_ta_coverage(ctx: &mut Ctx, m: &AtomicModel) {
    let Some(count) = m.finite_combo_count() else {
        return;
    };
    if count > 1_000_000 {
        ctx.push(
            &m.name,
            m.span,
            None,
            DiagCode::TaCoverage,
            format!("finite state space of {count} combinations is too large to check"),
        );
        return;
    }
    let masks: Vec<Option<Vec<Option<usize>>>> = m
        .ta
        .iter()
        .map(|e| m.compile_pattern(&e.pattern).ok())
        .collect();
    for combo in m.combos() {
        let matching: Vec<usize> = masks
            .iter()
            .enumerate()
            .filter_map(|(i, mask)| match mask {
                Some(mask) if super::mask_matches(mask, &combo) => Some(i),
                _ => None,
            })
            .collect();
        let label = describe_combo(m, &combo);
        match matching.len() {
            0 => ctx.push(
                &m.name,
                m.span,
                None,
                DiagCode::TaCoverage,
                format!("no time-advance entry covers {label}"),
            ),
            1 => {}
            _ => ctx.push(
                &m.name,
                m.span,
                Some(format!("ta#{}", matching[1])),
                DiagCode::TaOverlap,
                format!("{label} is matched by ta entries {matching:?}; overlap is an error"),
            ),
        }
    }
}

fn describe_combo(m: &AtomicModel, combo: &[usize]) -> String {
    let finite = m.finite_vars();
    if finite.is_empty() {
        return "the unit state".to_string();
    }
    let parts: Vec<String> = finite
        .iter()
        .zip(combo)
        .map(|((name, domain), idx)| format!("{name}={}", domain[*idx]))
        .collect();
    parts.join(", ")
}

fn check_coupled(ctx: &mut Ctx, m: &CoupledModel) {
    check_ports(ctx, &m.name, &m.ports);

    let mut refs = BTreeSet::new();
    for comp in &m.components {
        if !refs.insert(comp.reference.as_str()) {
            ctx.push(
                &m.name,
                comp.span,
                None,
                DiagCode::DuplicateComponentRef,
                format!("component reference `{}` repeated", comp.reference),
            );
        }
        if comp.reference == m.name {
            ctx.push(
                &m.name,
                comp.span,
                None,
                DiagCode::ComponentRefClash,
                format!("component reference `{}` shadows the coupled model's own name", comp.reference),
            );
        }
    }

    let mut seen_couplings = BTreeSet::new();
    for (i, coupling) in m.couplings.iter().enumerate() {
        let id = Some(format!("couple#{i}"));
        let from = endpoint_direction(ctx, m, &coupling.from, coupling.span, &id);
        let to = endpoint_direction(ctx, m, &coupling.to, coupling.span, &id);
        let (Some(from_dir), Some(to_dir)) = (from, to) else {
            continue;
        };
        use EndpointOwner::{Component, Model as Slf};
        match (&coupling.from.owner, from_dir, &coupling.to.owner, to_dir) {
            // External input coupling: model input to component input.
            (Slf, Direction::Input, Component(_), Direction::Input) => {}
            // External output coupling: component output to model output.
            (Component(_), Direction::Output, Slf, Direction::Output) => {}
            // Internal coupling: component output to a different
            // component's input; self-loops are feedback.
            (Component(a), Direction::Output, Component(b), Direction::Input) => {
                if a == b {
                    ctx.push(
                        &m.name,
                        coupling.span,
                        id.clone(),
                        DiagCode::Feedback,
                        format!("feedback loop: `{a}` couples to itself"),
                    );
                }
            }
            _ => ctx.push(
                &m.name,
                coupling.span,
                id.clone(),
                DiagCode::CouplingDirection,
                "couplings run model-in→component-in, component-out→model-out, or component-out→component-in",
            ),
        }
        let key = (
            endpoint_key(&coupling.from),
            endpoint_key(&coupling.to),
        );
        if !seen_couplings.insert(key) {
            ctx.push(
                &m.name,
                coupling.span,
                id,
                DiagCode::DuplicateCoupling,
                "identical coupling listed twice",
            );
        }
    }

    if let Some(order) = &m.select_order {
        let declared: BTreeSet<&str> = m.components.iter().map(|c| c.reference.as_str()).collect();
        let listed: BTreeSet<&str> = order.iter().map(String::as_str).collect();
        if listed != declared || order.len() != m.components.len() {
            ctx.push(
                &m.name,
                m.span,
                None,
                DiagCode::SelectOrderInvalid,
                "select order must list every component reference exactly once",
            );
        }
    }
}

fn endpoint_key(e: &super::Endpoint) -> (String, String) {
    let owner = match &e.owner {
        EndpointOwner::Model => String::new(),
        EndpointOwner::Component(c) => c.clone(),
    };
    (owner, e.port.clone())
}

fn endpoint_direction(
    ctx: &mut Ctx,
    m: &CoupledModel,
    endpoint: &super::Endpoint,
    span: Span,
    rule: &Option<String>,
) -> Option<Direction> {
    match &endpoint.owner {
        EndpointOwner::Model => match m.ports.iter().find(|p| p.name == endpoint.port) {
            Some(p) => Some(p.direction),
            None => {
                ctx.push(
                    &m.name,
                    span,
                    rule.clone(),
                    DiagCode::UnknownEndpoint,
                    format!("`{}` has no port `{}`", m.name, endpoint.port),
                );
                None
            }
        },
        EndpointOwner::Component(reference) => {
            let Some(comp) = m.components.iter().find(|c| c.reference == *reference) else {
                ctx.push(
                    &m.name,
                    span,
                    rule.clone(),
                    DiagCode::UnknownEndpoint,
                    format!("`{reference}` is not a component of `{}`", m.name),
                );
                return None;
            };
            let Some(model) = ctx.ms.get(&comp.model) else {
                return None; // unresolved references are parse errors
            };
            match model.port(&endpoint.port) {
                Some(p) => Some(p.direction),
                None => {
                    ctx.push(
                        &m.name,
                        span,
                        rule.clone(),
                        DiagCode::UnknownEndpoint,
                        format!("`{}` ({}) has no port `{}`", reference, comp.model, endpoint.port),
                    );
                    None
                }
            }
        }
    }
}

/// Containment must be acyclic: a coupled model may not reach itself
/// through its components.
fn check_containment_cycles(ctx: &mut Ctx) {
    let names: Vec<String> = ctx.ms.models.iter().map(|m| m.name().to_string()).collect();
    for name in names {
        let mut stack = vec![name.clone()];
        let mut visited = BTreeSet::new();
        let mut cyclic = false;
        while let Some(current) = stack.pop() {
            let Some(Model::Coupled(c)) = ctx.ms.get(&current) else {
                continue;
            };
            for comp in &c.components {
                if comp.model == name {
                    cyclic = true;
                } else if visited.insert(comp.model.clone()) {
                    stack.push(comp.model.clone());
                }
            }
        }
        if cyclic {
            let span = ctx.ms.get(&name).unwrap().span();
            ctx.push(
                &name,
                span,
                None,
                DiagCode::CyclicContainment,
                format!("`{name}` contains itself through its components"),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_model_file;
    use super::*;

    const PROCESSOR: &str = "atomic Processor { inports { in } outports { out } \
        finite phase in { idle, busy } = idle free job : real = 0.0 \
        ta { phase=idle -> INF ; phase=busy -> 2.5 } \
        ext from phase=idle on in(v) when true -> phase=busy with { job = v } \
        int from phase=busy when true -> phase=idle output out(job) }";

    fn pipeline_text() -> String {
        format!(
            "{PROCESSOR}\ncoupled Pipeline {{ inports {{ jobs }} outports {{ done }} \
             components {{ p1: Processor, p2: Processor }} \
             couple Pipeline.jobs -> p1.in couple p1.out -> p2.in couple p2.out -> Pipeline.done \
             select order {{ p1, p2 }} }}"
        )
    }

    #[test]
    fn pipeline_is_clean() {
        let ms = parse_model_file(&pipeline_text()).unwrap();
        let diags = validate_model(&ms);
        assert!(diags.is_empty(), "{diags:#?}");
    }

    #[test]
    fn feedback_is_flagged() {
        let text = format!(
            "{PROCESSOR}\ncoupled Loop {{ components {{ p1: Processor }} couple p1.out -> p1.in }}"
        );
        let ms = parse_model_file(&text).unwrap();
        let diags = validate_model(&ms);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagCode::Feedback);
        assert_eq!(diags[0].model, "Loop");
        assert!(diags[0].message.contains("p1"));
    }

    #[test]
    fn unknown_port_in_ext_rule() {
        let text = PROCESSOR.replace("on in(v)", "on inn(v)");
        let ms = parse_model_file(&text).unwrap();
        let diags = validate_model(&ms);
        assert!(diags.iter().any(|d| d.code == DiagCode::UnknownPort));
    }

    #[test]
    fn ta_coverage_and_overlap() {
        let missing = "atomic M { finite s in { a, b } = a ta { s=a -> INF } }";
        let ms = parse_model_file(missing).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::TaCoverage));

        let overlap = "atomic M { finite s in { a, b } = a ta { * -> INF ; s=a -> 1.0 } }";
        let ms = parse_model_file(overlap).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::TaOverlap));
    }

    #[test]
    fn inf_outside_ta_is_flagged() {
        let text = PROCESSOR.replace("when true -> phase=busy", "when INF > 1.0 -> phase=busy");
        let ms = parse_model_file(&text).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::InfOutsideTa));
    }

    #[test]
    fn binder_shadowing_is_reserved() {
        let text = PROCESSOR.replace("on in(v)", "on in(job)");
        let ms = parse_model_file(&text).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::ReservedName));
    }

    #[test]
    fn diagnostics_sorted_by_model_then_location() {
        let text = format!(
            "atomic Zed {{ inports {{ a a }} outports {{ }} ta {{ * -> INF }} }}\n\
             atomic Abc {{ inports {{ b b }} outports {{ }} ta {{ * -> INF }} }}\n\
             coupled Top {{ components {{ z: Zed, a: Abc }} }}"
        );
        let ms = parse_model_file(&text).unwrap();
        let diags = validate_model(&ms);
        let models: Vec<&str> = diags.iter().map(|d| d.model.as_str()).collect();
        let mut sorted = models.clone();
        sorted.sort();
        assert_eq!(models, sorted);
    }

    #[test]
    fn select_order_must_be_permutation() {
        let text = format!(
            "{PROCESSOR}\ncoupled Pipe {{ components {{ p1: Processor, p2: Processor }} select order {{ p1 }} }}"
        );
        let ms = parse_model_file(&text).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::SelectOrderInvalid));
    }

    #[test]
    fn containment_cycle_detected() {
        let text = "coupled A { components { b: B } }\ncoupled B { components { a: A } }";
        let ms = parse_model_file(text).unwrap();
        assert!(validate_model(&ms)
            .iter()
            .any(|d| d.code == DiagCode::CyclicContainment));
    }
}
