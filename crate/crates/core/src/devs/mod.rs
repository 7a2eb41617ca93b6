//! DEVS domain types in executable rule-table form, the model DSL
//! frontend, and static validation.
//!
//! An atomic model keeps its transition behavior as finite rule tables
//! with expression bodies rather than opaque functions, which makes
//! transition existence decidable per rule and gives the mapper syntax to
//! work with. A coupled model keeps its components in declaration order;
//! that order doubles as the default select priority.

mod parse;
mod validate;

pub use parse::{parse_model_file, ModelError};
pub use validate::{validate_model, DiagCode, Diagnostic};

use crate::expr::{Expr, Span, Ty, TypeEnv, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortDecl {
    pub name: String,
    pub direction: Direction,
    pub span: Span,
}

/// Per-variable default used when a scenario does not pin the value.
#[derive(Debug, Clone, PartialEq)]
pub enum VarDefault {
    Symbol(String),
    Literal(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VarKind {
    /// Finitely-valued variable with an ordered symbolic domain.
    Finite(Vec<String>),
    /// Free variable of a scalar type.
    Free(Ty),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVarDecl {
    pub name: String,
    pub kind: VarKind,
    pub default: Option<VarDefault>,
    pub span: Span,
}

/// Finite-state pattern: either the wildcard `*` or a list of
/// `var=value` requirements; variables left unmentioned match anything.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub wildcard: bool,
    pub entries: Vec<(String, String)>,
    pub span: Span,
}

impl Pattern {
    pub fn wildcard(span: Span) -> Self {
        Pattern {
            wildcard: true,
            entries: Vec::new(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaEntry {
    pub pattern: Pattern,
    pub expr: Expr,
}

/// One row of the external transition table (δ_ext).
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalRule {
    pub source: Pattern,
    pub port: String,
    pub binder: String,
    pub guard: Expr,
    pub target: Pattern,
    pub updates: Vec<(String, Expr)>,
    pub span: Span,
}

/// One row of the internal transition table (δ_int plus its λ output).
#[derive(Debug, Clone, PartialEq)]
pub struct InternalRule {
    pub source: Pattern,
    pub guard: Expr,
    pub target: Pattern,
    pub updates: Vec<(String, Expr)>,
    pub output: Option<(String, Expr)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicModel {
    pub name: String,
    pub ports: Vec<PortDecl>,
    pub state_vars: Vec<StateVarDecl>,
    pub ta: Vec<TaEntry>,
    pub ext_rules: Vec<ExternalRule>,
    pub int_rules: Vec<InternalRule>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EndpointOwner {
    /// The coupled model itself, written with the model's own name.
    Model,
    Component(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Endpoint {
    pub owner: EndpointOwner,
    pub port: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub from: Endpoint,
    pub to: Endpoint,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDecl {
    pub reference: String,
    pub model: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledModel {
    pub name: String,
    pub ports: Vec<PortDecl>,
    pub components: Vec<ComponentDecl>,
    pub couplings: Vec<Coupling>,
    pub select_order: Option<Vec<String>>,
    pub span: Span,
}

impl CoupledModel {
    /// The select priority: the explicit `select order` clause when
    /// present, otherwise component declaration order.
    pub fn select_order_or_default(&self) -> Vec<&str> {
        match &self.select_order {
            Some(order) => order.iter().map(String::as_str).collect(),
            None => self.components.iter().map(|c| c.reference.as_str()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Atomic(AtomicModel),
    Coupled(CoupledModel),
}

impl Model {
    pub fn name(&self) -> &str {
        match self {
            Model::Atomic(m) => &m.name,
            Model::Coupled(m) => &m.name,
        }
    }

    pub fn ports(&self) -> &[PortDecl] {
        match self {
            Model::Atomic(m) => &m.ports,
            Model::Coupled(m) => &m.ports,
        }
    }

    pub fn port(&self, name: &str) -> Option<&PortDecl> {
        self.ports().iter().find(|p| p.name == name)
    }

    pub fn span(&self) -> Span {
        match self {
            Model::Atomic(m) => m.span,
            Model::Coupled(m) => m.span,
        }
    }
}

/// Parsed model file: every model by declaration order plus the designated
/// root (the last model declared).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSet {
    pub models: Vec<Model>,
    pub root: String,
}

impl ModelSet {
    pub fn get(&self, name: &str) -> Option<&Model> {
        self.models.iter().find(|m| m.name() == name)
    }

    pub fn root_model(&self) -> &Model {
        self.get(&self.root).expect("root model exists")
    }
}

impl AtomicModel {
    pub fn input_ports(&self) -> impl Iterator<Item = &PortDecl> {
        self.ports.iter().filter(|p| p.direction == Direction::Input)
    }

    pub fn output_ports(&self) -> impl Iterator<Item = &PortDecl> {
        self.ports.iter().filter(|p| p.direction == Direction::Output)
    }

    pub fn port(&self, name: &str) -> Option<&PortDecl> {
        self.ports.iter().find(|p| p.name == name)
    }

    /// Finite variables with their domains, in declaration order.
    pub fn finite_vars(&self) -> Vec<(&str, &[String])> {
        self.state_vars
            .iter()
            .filter_map(|v| match &v.kind {
                VarKind::Finite(domain) => Some((v.name.as_str(), domain.as_slice())),
                VarKind::Free(_) => None,
            })
            .collect()
    }

    /// Free variables with their types, in declaration order.
    pub fn free_vars(&self) -> Vec<(&str, Ty)> {
        self.state_vars
            .iter()
            .filter_map(|v| match &v.kind {
                VarKind::Free(ty) => Some((v.name.as_str(), *ty)),
                VarKind::Finite(_) => None,
            })
            .collect()
    }

    /// Type environment holding exactly the free variables.
    pub fn free_env(&self) -> TypeEnv {
        let mut env = TypeEnv::new();
        for (name, ty) in self.free_vars() {
            env.bind(name, ty);
        }
        env
    }

    /// Number of finite-state combinations (1 when there are no finite
    /// variables); `None` on multiplication overflow.
    pub fn finite_combo_count(&self) -> Option<u128> {
        let mut count: u128 = 1;
        for (_, domain) in self.finite_vars() {
            count = count.checked_mul(domain.len() as u128)?;
        }
        Some(count)
    }

    /// Iterates every finite combination in canonical order: variables in
    /// declaration order, rightmost variable cycling fastest.
    pub fn combos(&self) -> ComboIter {
        let sizes: Vec<usize> = self.finite_vars().iter().map(|(_, d)| d.len()).collect();
        ComboIter::new(sizes)
    }

    /// Compiles a pattern to one optional domain index per finite
    /// variable. Callers must have validated the pattern.
    pub fn compile_pattern(&self, pattern: &Pattern) -> Result<Vec<Option<usize>>, String> {
        let finite = self.finite_vars();
        let mut mask: Vec<Option<usize>> = vec![None; finite.len()];
        if pattern.wildcard {
            return Ok(mask);
        }
        for (var, value) in &pattern.entries {
            let idx = finite
                .iter()
                .position(|(n, _)| n == var)
                .ok_or_else(|| format!("unknown finite variable `{var}`"))?;
            let val = finite[idx]
                .1
                .iter()
                .position(|s| s == value)
                .ok_or_else(|| format!("value `{value}` not in domain of `{var}`"))?;
            mask[idx] = Some(val);
        }
        Ok(mask)
    }

    /// Compiles a full target assignment; errors if any variable is left
    /// unassigned.
    pub fn compile_target(&self, pattern: &Pattern) -> Result<Vec<usize>, String> {
        let mask = self.compile_pattern(pattern)?;
        mask.iter()
            .enumerate()
            .map(|(i, slot)| {
                slot.ok_or_else(|| {
                    format!(
                        "target does not assign finite variable `{}`",
                        self.finite_vars()[i].0
                    )
                })
            })
            .collect()
    }

    /// The unique time-advance entry matching `combo`, if the table is
    /// well-formed.
    pub fn ta_entry_for(&self, combo: &[usize]) -> Option<&TaEntry> {
        self.ta.iter().find(|entry| {
            self.compile_pattern(&entry.pattern)
                .map(|mask| mask_matches(&mask, combo))
                .unwrap_or(false)
        })
    }
}

/// True when every pinned slot of the mask equals the combination.
pub fn mask_matches(mask: &[Option<usize>], combo: &[usize]) -> bool {
    mask.iter()
        .zip(combo)
        .all(|(m, c)| m.map_or(true, |v| v == *c))
}

/// Odometer over finite domains; yields index vectors.
pub struct ComboIter {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ComboIter {
    fn new(sizes: Vec<usize>) -> Self {
        let next = if sizes.iter().any(|&s| s == 0) {
            None
        } else {
            Some(vec![0; sizes.len()])
        };
        ComboIter { sizes, next }
    }
}

impl Iterator for ComboIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bumped = current.clone();
        let mut done = true;
        for i in (0..self.sizes.len()).rev() {
            bumped[i] += 1;
            if bumped[i] < self.sizes[i] {
                done = false;
                break;
            }
            bumped[i] = 0;
        }
        self.next = if done { None } else { Some(bumped) };
        Some(current)
    }
}

/// Finite-combination count and free-variable environment of an atomic
/// model's total state.
pub fn total_state_type(m: &AtomicModel) -> (u128, TypeEnv) {
    let count = m.finite_combo_count().unwrap_or(u128::MAX);
    (count, m.free_env())
}

/// Names that cannot be declared as state variables or value binders:
/// `elapsed` is implicitly bound in external-rule scopes.
pub const RESERVED_VAR_NAMES: &[&str] = &["elapsed"];

#[cfg(test)]
mod tests {
    use super::*;

    fn atomic_with_vars(vars: Vec<StateVarDecl>) -> AtomicModel {
        AtomicModel {
            name: "M".into(),
            ports: vec![],
            state_vars: vars,
            ta: vec![],
            ext_rules: vec![],
            int_rules: vec![],
            span: Span::default(),
        }
    }

    fn finite(name: &str, domain: &[&str]) -> StateVarDecl {
        StateVarDecl {
            name: name.into(),
            kind: VarKind::Finite(domain.iter().map(|s| s.to_string()).collect()),
            default: None,
            span: Span::default(),
        }
    }

    fn free(name: &str, ty: Ty) -> StateVarDecl {
        StateVarDecl {
            name: name.into(),
            kind: VarKind::Free(ty),
            default: None,
            span: Span::default(),
        }
    }

    #[test]
    fn total_state_of_processor_shape() {
        let m = atomic_with_vars(vec![finite("phase", &["idle", "busy"]), free("job", Ty::Real)]);
        let (count, env) = total_state_type(&m);
        assert_eq!(count, 2);
        assert_eq!(env.lookup("job"), Some(Ty::Real));
        assert_eq!(env.iter().count(), 1);
    }

    #[test]
    fn total_state_cross_product() {
        let m = atomic_with_vars(vec![finite("a", &["0", "1"]), finite("b", &["x", "y", "z"])]);
        let (count, env) = total_state_type(&m);
        assert_eq!(count, 6);
        assert_eq!(env.iter().count(), 0);
    }

    #[test]
    fn total_state_with_no_finite_vars_is_unit() {
        let m = atomic_with_vars(vec![free("w", Ty::Int)]);
        let (count, _) = total_state_type(&m);
        assert_eq!(count, 1);
    }

    #[test]
    fn combos_cycle_rightmost_fastest() {
        let m = atomic_with_vars(vec![finite("a", &["0", "1"]), finite("b", &["x", "y", "z"])]);
        let combos: Vec<_> = m.combos().collect();
        assert_eq!(combos.len(), 6);
        assert_eq!(combos[0], vec![0, 0]);
        assert_eq!(combos[1], vec![0, 1]);
        assert_eq!(combos[3], vec![1, 0]);
    }

    #[test]
    fn zero_finite_vars_yield_one_empty_combo() {
        let m = atomic_with_vars(vec![]);
        let combos: Vec<_> = m.combos().collect();
        assert_eq!(combos, vec![Vec::<usize>::new()]);
    }
}
