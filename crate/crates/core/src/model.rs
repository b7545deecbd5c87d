//! Model definitions, validation and the compiled (tabulated) model.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::assignment::{Context, MixedRadix, NamedAssignment, PartialAssignment};
use crate::error::{AssignmentError, ModelError, SignatureError};
use crate::expr::{EvalError, Expr};
use crate::signature::{Signature, VarId, VarKind};
use crate::value::Value;

/// Default cap on the number of points any single enumeration may visit.
pub const DEFAULT_MAX_EVALS: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_MAX_EVALS`].
pub const MAX_EVALS_ENV: &str = "CAUSALQ_MAX_EVALS";

/// Enumeration guard shared by validation and the decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_evals: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_evals: DEFAULT_MAX_EVALS,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        std::env::var(MAX_EVALS_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(|max_evals| Limits { max_evals })
            .unwrap_or_default()
    }
}

/// A causal model as written: a named signature plus one expression per
/// endogenous variable. This is also the parse tree of the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDef {
    pub name: String,
    pub signature: Signature,
    pub equations: Vec<Option<Expr>>,
}

impl ModelDef {
    pub fn new(name: impl Into<String>) -> Self {
        ModelDef {
            name: name.into(),
            signature: Signature::new(),
            equations: Vec::new(),
        }
    }

    pub fn add_exogenous(
        &mut self,
        name: impl Into<String>,
        range: Vec<Value>,
    ) -> Result<VarId, SignatureError> {
        let id = self.signature.add(name, VarKind::Exogenous, range)?;
        self.equations.push(None);
        Ok(id)
    }

    /// Declares an endogenous variable; its equation is set separately so
    /// that equations may reference variables declared later.
    pub fn add_endogenous(
        &mut self,
        name: impl Into<String>,
        range: Vec<Value>,
    ) -> Result<VarId, SignatureError> {
        let id = self.signature.add(name, VarKind::Endogenous, range)?;
        self.equations.push(None);
        Ok(id)
    }

    pub fn set_equation(&mut self, id: VarId, expr: Expr) {
        self.equations[id.0] = Some(expr);
    }

    pub fn equation(&self, id: VarId) -> Option<&Expr> {
        self.equations[id.0].as_ref()
    }

    pub fn validate(&self, limits: &Limits) -> ValidationReport {
        analyze(self, limits).0
    }

    pub fn compile(&self) -> Result<Model, ModelError> {
        self.compile_with(&Limits::default())
    }

    pub fn compile_with(&self, limits: &Limits) -> Result<Model, ModelError> {
        let (report, tables) = analyze(self, limits);
        if !report.is_valid() {
            return Err(ModelError::Invalid(Box::new(report)));
        }
        let tables = tables.expect("valid report implies tables");
        Ok(Model::from_parts(Arc::new(self.clone()), tables, report.order_ids))
    }
}

/// Outcome of [`validate`]: failures are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub model: String,
    pub valid: bool,
    /// Well-formedness problems other than totality and acyclicity.
    pub problems: Vec<String>,
    pub range_violations: Vec<RangeViolation>,
    /// A dependence cycle, listed so that each variable depends on the next
    /// (and the last on the first).
    pub cycle: Option<Vec<String>>,
    /// Endogenous variables in topological order; empty when invalid.
    pub order: Vec<String>,
    #[serde(skip)]
    order_ids: Vec<VarId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RangeViolation {
    pub variable: String,
    pub input: NamedAssignment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.valid
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return write!(f, "{}: valid, order ({})", self.model, self.order.join(", "));
        }
        write!(f, "{}: invalid", self.model)?;
        for p in &self.problems {
            write!(f, "\n  {p}")?;
        }
        for v in &self.range_violations {
            write!(f, "\n  totality violation for {} at ({}): ", v.variable, v.input)?;
            match (&v.output, &v.error) {
                (Some(out), _) => write!(f, "output {out} is not in its range")?,
                (None, Some(e)) => write!(f, "{e}")?,
                (None, None) => {}
            }
        }
        if let Some(cycle) = &self.cycle {
            write!(f, "\n  dependence cycle ({})", cycle.join(", "))?;
        }
        Ok(())
    }
}

/// Checks totality (every equation lands in its range on every input) and
/// strong recursivity (the dependence relation is acyclic).
pub fn validate(def: &ModelDef) -> ValidationReport {
    def.validate(&Limits::default())
}

const NOT_FORCED: u32 = u32::MAX;
const FORCED_TABLE_MAX: u128 = 1 << 22;

/// A structural equation tabulated over the variables it actually depends on.
#[derive(Debug, Clone)]
pub(crate) struct Equation {
    pub(crate) parents: Vec<VarId>,
    radices: Vec<usize>,
    strides: Vec<usize>,
    table: Vec<u32>,
    /// Indexed by parent patterns where digit 0 means "free" and `v + 1`
    /// means bound to `v`; holds the value forced by the pattern.
    forced: Option<Vec<u32>>,
    pattern_strides: Vec<usize>,
}

impl Equation {
    fn new(parents: Vec<VarId>, radices: Vec<usize>, table: Vec<u32>) -> Self {
        let strides = strides_of(&radices);
        let pattern_radices: Vec<usize> = radices.iter().map(|r| r + 1).collect();
        let pattern_strides = strides_of(&pattern_radices);
        let mut eq = Equation {
            parents,
            radices,
            strides,
            table,
            forced: None,
            pattern_strides,
        };
        if MixedRadix::count(&pattern_radices) <= FORCED_TABLE_MAX {
            eq.forced = Some(eq.build_forced(&pattern_radices));
        }
        eq
    }

    fn constant(value: usize) -> Self {
        Equation::new(Vec::new(), Vec::new(), vec![value as u32])
    }

    fn build_forced(&self, pattern_radices: &[usize]) -> Vec<u32> {
        let n: usize = pattern_radices.iter().product();
        let mut forced = vec![NOT_FORCED; n];
        for p in (0..n).rev() {
            let free = (0..self.parents.len()).find(|&j| digit(p, &self.pattern_strides, pattern_radices, j) == 0);
            forced[p] = match free {
                None => {
                    let idx: usize = (0..self.parents.len())
                        .map(|j| (digit(p, &self.pattern_strides, pattern_radices, j) - 1) * self.strides[j])
                        .sum();
                    self.table[idx]
                }
                Some(j) => {
                    let first = forced[p + self.pattern_strides[j]];
                    let same = (1..self.radices[j])
                        .all(|v| forced[p + (v + 1) * self.pattern_strides[j]] == first);
                    if same {
                        first
                    } else {
                        NOT_FORCED
                    }
                }
            };
        }
        forced
    }

    #[inline]
    pub(crate) fn eval(&self, world: &[usize]) -> usize {
        let idx: usize = self
            .parents
            .iter()
            .zip(&self.strides)
            .map(|(p, s)| world[p.0] * s)
            .sum();
        self.table[idx] as usize
    }

    /// The value this equation takes for every completion of `bindings`
    /// over its unbound parents, if there is one.
    pub(crate) fn forced(&self, bindings: &[Option<usize>]) -> Option<usize> {
        if let Some(forced) = &self.forced {
            let idx: usize = self
                .parents
                .iter()
                .zip(&self.pattern_strides)
                .map(|(p, s)| bindings[p.0].map_or(0, |v| v + 1) * s)
                .sum();
            let v = forced[idx];
            return (v != NOT_FORCED).then_some(v as usize);
        }
        let free: Vec<usize> = (0..self.parents.len())
            .filter(|&j| bindings[self.parents[j].0].is_none())
            .collect();
        let base: usize = self
            .parents
            .iter()
            .zip(&self.strides)
            .map(|(p, s)| bindings[p.0].unwrap_or(0) * s)
            .sum();
        let mut seen: Option<u32> = None;
        for digits in MixedRadix::new(free.iter().map(|&j| self.radices[j]).collect()) {
            let idx = base + free.iter().zip(&digits).map(|(&j, d)| d * self.strides[j]).sum::<usize>();
            match seen {
                None => seen = Some(self.table[idx]),
                Some(s) if s != self.table[idx] => return None,
                _ => {}
            }
        }
        seen.map(|v| v as usize)
    }
}

fn strides_of(radices: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; radices.len()];
    for j in (0..radices.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * radices[j + 1];
    }
    strides
}

#[inline]
fn digit(p: usize, strides: &[usize], radices: &[usize], j: usize) -> usize {
    (p / strides[j]) % radices[j]
}

type Tables = Vec<Option<Equation>>;

fn analyze(def: &ModelDef, limits: &Limits) -> (ValidationReport, Option<Tables>) {
    let sig = &def.signature;
    let mut report = ValidationReport {
        model: def.name.clone(),
        valid: false,
        problems: Vec::new(),
        range_violations: Vec::new(),
        cycle: None,
        order: Vec::new(),
        order_ids: Vec::new(),
    };
    if sig.num_endogenous() == 0 {
        report.problems.push("model has no endogenous variables".into());
    }
    for id in sig.ids() {
        let name = sig.name(id);
        match (sig.is_exogenous(id), def.equation(id)) {
            (true, Some(_)) => report
                .problems
                .push(format!("exogenous variable `{name}` has an equation")),
            (false, None) => report
                .problems
                .push(format!("endogenous variable `{name}` has no equation")),
            _ => {}
        }
        if let Some(e) = def.equation(id) {
            if let Some(bad) = e.references().into_iter().find(|r| r.0 >= sig.len()) {
                report
                    .problems
                    .push(format!("equation for `{name}` references undeclared variable {bad}"));
            }
        }
    }
    if !report.problems.is_empty() {
        return (report, None);
    }

    // Tabulate every equation over its syntactic arguments. Outcomes are
    // interned so that out-of-range results still count as distinct outputs
    // for the dependence analysis.
    let mut raw: Vec<Option<(Vec<VarId>, Vec<usize>, Vec<u32>)>> = vec![None; sig.len()];
    for id in sig.endogenous() {
        let expr = def.equation(id).unwrap();
        let args: Vec<VarId> = expr.references().into_iter().collect();
        let radices: Vec<usize> = args.iter().map(|&a| sig.range_len(a)).collect();
        let count = MixedRadix::count(&radices);
        if count > limits.max_evals {
            report.problems.push(format!(
                "equation for `{}` has {count} input tuples, above the enumeration guard of {}",
                sig.name(id),
                limits.max_evals
            ));
            continue;
        }
        let range = sig.range(id);
        let mut extra: Vec<Result<Value, EvalError>> = Vec::new();
        let mut table = Vec::with_capacity(count as usize);
        for digits in MixedRadix::new(radices.clone()) {
            let lookup = |v: VarId| {
                let j = args.binary_search(&v).expect("referenced variable");
                sig.value(v, digits[j]).clone()
            };
            let out = expr.eval(&lookup);
            let code = match &out {
                Ok(v) => range.iter().position(|r| r == v),
                Err(_) => None,
            };
            let code = match code {
                Some(c) => c as u32,
                None => {
                    if report.range_violations.iter().filter(|v| v.variable == sig.name(id)).count() < 8 {
                        let mut input = PartialAssignment::empty(sig);
                        for (a, d) in args.iter().zip(&digits) {
                            input.set(*a, *d);
                        }
                        report.range_violations.push(RangeViolation {
                            variable: sig.name(id).to_string(),
                            input: input.named(sig),
                            output: out.as_ref().ok().cloned(),
                            error: out.as_ref().err().map(|e| e.to_string()),
                        });
                    }
                    let k = match extra.iter().position(|e| *e == out) {
                        Some(k) => k,
                        None => {
                            extra.push(out);
                            extra.len() - 1
                        }
                    };
                    (range.len() + k) as u32
                }
            };
            table.push(code);
        }
        raw[id.0] = Some((args, radices, table));
    }
    if !report.problems.is_empty() {
        return (report, None);
    }

    let tables: Tables = raw
        .into_iter()
        .map(|r| r.map(|(args, radices, table)| reduce(args, radices, table)))
        .collect();

    match topological_order(sig, &tables) {
        Ok(order) => {
            report.order = order.iter().map(|&id| sig.name(id).to_string()).collect();
            report.order_ids = order;
        }
        Err(cycle) => {
            report.cycle = Some(cycle.iter().map(|&id| sig.name(id).to_string()).collect());
        }
    }
    report.valid = report.problems.is_empty()
        && report.range_violations.is_empty()
        && report.cycle.is_none();
    if !report.valid {
        report.order.clear();
        report.order_ids.clear();
    }
    (report, Some(tables))
}

/// Drops arguments the tabulated function does not actually depend on.
fn reduce(args: Vec<VarId>, radices: Vec<usize>, table: Vec<u32>) -> Equation {
    let strides = strides_of(&radices);
    let depends = |j: usize| -> bool {
        (0..table.len()).any(|i| {
            let d = (i / strides[j]) % radices[j];
            d + 1 < radices[j] && table[i] != table[i + strides[j]]
        })
    };
    let keep: Vec<usize> = (0..args.len()).filter(|&j| depends(j)).collect();
    let parents: Vec<VarId> = keep.iter().map(|&j| args[j]).collect();
    let new_radices: Vec<usize> = keep.iter().map(|&j| radices[j]).collect();
    let new_table: Vec<u32> = MixedRadix::new(new_radices.clone())
        .map(|digits| {
            let idx: usize = keep.iter().zip(&digits).map(|(&j, d)| d * strides[j]).sum();
            table[idx]
        })
        .collect();
    Equation::new(parents, new_radices, new_table)
}

/// Kahn's algorithm, always releasing the earliest-declared ready variable.
fn topological_order(sig: &Signature, tables: &Tables) -> Result<Vec<VarId>, Vec<VarId>> {
    let endo: Vec<VarId> = sig.endogenous().collect();
    let deps = |id: VarId| -> Vec<VarId> {
        tables[id.0]
            .as_ref()
            .map(|e| e.parents.iter().copied().filter(|&p| !sig.is_exogenous(p)).collect())
            .unwrap_or_default()
    };
    let mut pending: BTreeSet<VarId> = endo.iter().copied().collect();
    let mut order = Vec::with_capacity(endo.len());
    loop {
        let ready = pending
            .iter()
            .copied()
            .find(|&id| deps(id).iter().all(|d| !pending.contains(d)));
        match ready {
            Some(id) => {
                pending.remove(&id);
                order.push(id);
            }
            None => break,
        }
    }
    if pending.is_empty() {
        return Ok(order);
    }
    // Every pending variable has a pending dependency, so walking them must
    // revisit a node.
    let mut path: Vec<VarId> = Vec::new();
    let mut cur = *pending.iter().next().unwrap();
    loop {
        if let Some(pos) = path.iter().position(|&p| p == cur) {
            return Err(path[pos..].to_vec());
        }
        path.push(cur);
        cur = deps(cur).into_iter().find(|d| pending.contains(d)).unwrap();
    }
}

/// A validated, tabulated causal model. Immutable; interventions return new
/// models.
#[derive(Debug, Clone)]
pub struct Model {
    def: Arc<ModelDef>,
    equations: Arc<Vec<Option<Equation>>>,
    order: Arc<Vec<VarId>>,
    children: Arc<Vec<Vec<VarId>>>,
}

impl Model {
    fn from_parts(def: Arc<ModelDef>, equations: Tables, order: Vec<VarId>) -> Self {
        let n = def.signature.len();
        let mut children = vec![Vec::new(); n];
        for (i, eq) in equations.iter().enumerate() {
            if let Some(eq) = eq {
                for p in &eq.parents {
                    children[p.0].push(VarId(i));
                }
            }
        }
        Model {
            def,
            equations: Arc::new(equations),
            order: Arc::new(order),
            children: Arc::new(children),
        }
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn signature(&self) -> &Signature {
        &self.def.signature
    }

    pub fn definition(&self) -> &ModelDef {
        &self.def
    }

    /// Endogenous variables in the topological order used by [`Model::solve`].
    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    pub(crate) fn equation(&self, id: VarId) -> Option<&Equation> {
        self.equations[id.0].as_ref()
    }

    /// Variables the equation of `id` genuinely depends on (the parent
    /// relation), including exogenous ones. Empty for exogenous variables.
    pub fn parents(&self, id: VarId) -> &[VarId] {
        self.equations[id.0].as_ref().map_or(&[], |e| &e.parents)
    }

    /// Endogenous variables whose equations depend on `id`.
    pub fn children(&self, id: VarId) -> &[VarId] {
        &self.children[id.0]
    }

    /// Evaluates the equation of endogenous `id` at a total world.
    pub fn evaluate(&self, id: VarId, world: &[usize]) -> usize {
        self.equations[id.0]
            .as_ref()
            .expect("evaluate on an exogenous variable")
            .eval(world)
    }

    /// The unique solution in `ctx`, restricted to the endogenous variables.
    pub fn solve(&self, ctx: &Context) -> PartialAssignment {
        let world = self.world(ctx);
        PartialAssignment::from_world(&world).restrict_kind(self.signature(), VarKind::Endogenous)
    }

    /// The full world (context plus solution) as value indices by [`VarId`].
    pub fn world(&self, ctx: &Context) -> Vec<usize> {
        self.world_under(ctx.assignment(), &PartialAssignment::empty(self.signature()))
    }

    /// Solves with the endogenous variables of `setting` held fixed.
    /// `exo` must bind every exogenous variable.
    pub(crate) fn world_under(&self, exo: &PartialAssignment, setting: &PartialAssignment) -> Vec<usize> {
        let sig = self.signature();
        let mut world = vec![0; sig.len()];
        for id in sig.exogenous() {
            world[id.0] = exo.get(id).expect("context binds every exogenous variable");
        }
        for &id in self.order.iter() {
            world[id.0] = match setting.get(id) {
                Some(v) => v,
                None => self.evaluate(id, &world),
            };
        }
        world
    }

    /// Solves following a caller-supplied order, which must be topological.
    pub fn solve_with_order(&self, ctx: &Context, order: &[VarId]) -> Result<PartialAssignment, ModelError> {
        let sig = self.signature();
        let mut seen = vec![false; sig.len()];
        for id in sig.exogenous() {
            seen[id.0] = true;
        }
        let endo: BTreeSet<VarId> = sig.endogenous().collect();
        if order.len() != endo.len() || order.iter().copied().collect::<BTreeSet<_>>() != endo {
            return Err(ModelError::NotTopological);
        }
        let mut world = vec![0; sig.len()];
        for id in sig.exogenous() {
            world[id.0] = ctx.get(id).unwrap();
        }
        for &id in order {
            if self.parents(id).iter().any(|p| !seen[p.0]) {
                return Err(ModelError::NotTopological);
            }
            world[id.0] = self.evaluate(id, &world);
            seen[id.0] = true;
        }
        Ok(PartialAssignment::from_world(&world).restrict_kind(sig, VarKind::Endogenous))
    }

    /// `M_{X̄←x̄}`: the same model with each intervened equation replaced by
    /// the constant it is set to.
    pub fn intervene(&self, setting: &PartialAssignment) -> Result<Model, ModelError> {
        let sig = self.signature();
        if let Some(id) = setting.vars().find(|&id| sig.is_exogenous(id)) {
            return Err(AssignmentError::ExogenousIntervention(sig.name(id).to_string()).into());
        }
        if setting.is_empty() {
            return Ok(self.clone());
        }
        let mut def = (*self.def).clone();
        let mut equations = (*self.equations).clone();
        for (id, v) in setting.iter() {
            def.equations[id.0] = Some(Expr::Lit(sig.value(id, v).clone()));
            equations[id.0] = Some(Equation::constant(v));
        }
        Ok(Model::from_parts(Arc::new(def), equations, (*self.order).clone()))
    }
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.def == other.def
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::BinOp;

    fn bin() -> Vec<Value> {
        vec![0.into(), 1.into()]
    }

    /// C = U_C, E = 2*C with the given range for E.
    fn example1(e_range: Vec<Value>) -> ModelDef {
        let mut d = ModelDef::new("M");
        let u = d.add_exogenous("U_C", bin()).unwrap();
        let c = d.add_endogenous("C", bin()).unwrap();
        let e = d.add_endogenous("E", e_range).unwrap();
        d.set_equation(c, Expr::var(u));
        d.set_equation(e, Expr::bin(BinOp::Mul, Expr::int(2), Expr::var(c)));
        d
    }

    #[test]
    fn totality_violation_is_reported_with_input() {
        let r = validate(&example1(bin()));
        assert!(!r.is_valid());
        assert_eq!(r.range_violations.len(), 1);
        let v = &r.range_violations[0];
        assert_eq!(v.variable, "E");
        assert_eq!(v.input.0, vec![("C".to_string(), Value::Int(1))]);
        assert_eq!(v.output, Some(Value::Int(2)));
    }

    #[test]
    fn two_variable_cycle() {
        let mut d = ModelDef::new("M");
        let x = d.add_endogenous("X", bin()).unwrap();
        let y = d.add_endogenous("Y", bin()).unwrap();
        d.set_equation(x, Expr::var(y));
        d.set_equation(y, Expr::var(x));
        let r = validate(&d);
        assert_eq!(r.cycle, Some(vec!["X".to_string(), "Y".to_string()]));
        assert!(r.order.is_empty());
    }

    #[test]
    fn syntactic_but_not_semantic_cycle_is_fine() {
        // X = Y & 0 reads Y but does not depend on it.
        let mut d = ModelDef::new("M");
        let x = d.add_endogenous("X", bin()).unwrap();
        let y = d.add_endogenous("Y", bin()).unwrap();
        d.set_equation(x, Expr::and(Expr::var(y), Expr::int(0)));
        d.set_equation(y, Expr::var(x));
        let r = validate(&d);
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.order, vec!["X", "Y"]);
    }

    #[test]
    fn empty_model_is_rejected() {
        let r = validate(&ModelDef::new("M"));
        assert!(!r.is_valid());
        assert!(r.problems[0].contains("no endogenous"));
    }

    #[test]
    fn solve_and_intervene() {
        let m = example1(vec![0.into(), 1.into(), 2.into()]).compile().unwrap();
        let sig = m.signature().clone();
        let ctx = Context::new(&sig, PartialAssignment::empty(&sig).with(VarId(0), 1)).unwrap();
        assert_eq!(m.solve(&ctx).display(&sig).to_string(), "C=1, E=2");
        let e = sig.lookup("E").unwrap();
        let forced = m.intervene(&PartialAssignment::empty(&sig).with(e, 0)).unwrap();
        for ctx in Context::enumerate(&sig) {
            assert_eq!(forced.solve(&ctx).get(e), Some(0));
        }
        assert_eq!(m.intervene(&PartialAssignment::empty(&sig)).unwrap(), m);
        let u = sig.lookup("U_C").unwrap();
        assert!(m.intervene(&PartialAssignment::empty(&sig).with(u, 0)).is_err());
    }

    #[test]
    fn forced_table_matches_enumeration() {
        // E = (A & !C) | B over three binary parents.
        let mut d = ModelDef::new("M");
        let a = d.add_exogenous("A", bin()).unwrap();
        let b = d.add_exogenous("B", bin()).unwrap();
        let c = d.add_exogenous("C", bin()).unwrap();
        let e = d.add_endogenous("E", bin()).unwrap();
        d.set_equation(
            e,
            Expr::or(Expr::and(Expr::var(a), Expr::not(Expr::var(c))), Expr::var(b)),
        );
        let m = d.compile().unwrap();
        let eq = m.equation(e).unwrap();
        for pattern in MixedRadix::new(vec![3, 3, 3]) {
            let bindings: Vec<Option<usize>> = pattern
                .iter()
                .map(|&d| (d > 0).then(|| d - 1))
                .chain(std::iter::once(None))
                .collect();
            let fast = eq.forced(&bindings);
            let mut outs = BTreeSet::new();
            for full in MixedRadix::new(vec![2, 2, 2]) {
                if (0..3).all(|j| bindings[j].is_none_or(|v| v == full[j])) {
                    let world = vec![full[0], full[1], full[2], 0];
                    outs.insert(eq.eval(&world));
                }
            }
            let slow = (outs.len() == 1).then(|| *outs.iter().next().unwrap());
            assert_eq!(fast, slow, "pattern {pattern:?}");
        }
    }
}
