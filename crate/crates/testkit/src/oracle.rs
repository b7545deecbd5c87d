use std::collections::{HashSet, VecDeque};

use causalq_core::assignment::MixedRadix;
use causalq_core::{Context, Model, PartialAssignment, Signature, VarId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("needs about {needed} evaluations, over the limit of {limit}")]
    TooLarge { needed: u128, limit: u128 },
    #[error("{states} chain states, over the limit of {limit}")]
    TooManyStates { states: u128, limit: u128 },
    #[error("the antecedent binds an exogenous variable")]
    ExogenousIntervention,
}

/// Size limits for the oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuard {
    pub max_evals: u128,
    /// Cap on the number of partial endogenous assignments a chain may
    /// range over. The default admits five binary variables.
    pub max_chain_states: u128,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard {
            max_evals: 10_000_000,
            max_chain_states: 243,
        }
    }
}

impl OracleGuard {
    fn check(&self, needed: u128) -> Result<(), OracleError> {
        if needed > self.max_evals {
            return Err(OracleError::TooLarge {
                needed,
                limit: self.max_evals,
            });
        }
        Ok(())
    }
}

/// Evaluates the equation of `y` from its expression at a total world.
fn eval(model: &Model, world: &[usize], y: VarId) -> usize {
    let sig = model.signature();
    let expr = model.definition().equation(y).expect("endogenous");
    let v = expr
        .eval(&|id| sig.value(id, world[id.0]).clone())
        .expect("a valid model evaluates");
    sig.var(y).value_index(&v).expect("a valid model stays in range")
}

fn space(sig: &Signature, vars: &[VarId]) -> u128 {
    vars.iter().map(|&v| sig.range_len(v) as u128).product()
}

/// Calls `f` on every world that agrees with `fixed` and ranges freely over
/// `free`.
fn for_worlds(sig: &Signature, fixed: &PartialAssignment, free: &[VarId], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut world = vec![0; sig.len()];
    for (id, v) in fixed.iter() {
        world[id.0] = v;
    }
    let radices = free.iter().map(|&v| sig.range_len(v)).collect();
    for digits in MixedRadix::new(radices) {
        for (&v, &d) in free.iter().zip(&digits) {
            world[v.0] = d;
        }
        if !f(&world) {
            return false;
        }
    }
    true
}

/// `[X̄←x̄, Z̄←z̄] Y=y` for every context and every setting `z̄` of the
/// endogenous variables other than `X̄` and `Y`.
fn forced(model: &Model, x: &PartialAssignment, y: VarId, v: usize) -> bool {
    let sig = model.signature();
    if sig.is_exogenous(y) {
        return false;
    }
    if let Some(b) = x.get(y) {
        return b == v;
    }
    let free: Vec<VarId> = sig.ids().filter(|&id| id != y && !x.contains(id)).collect();
    for_worlds(sig, x, &free, |w| eval(model, w, y) == v)
}

fn direct_cost(model: &Model, x: &PartialAssignment, targets: usize) -> u128 {
    let sig = model.signature();
    let free: Vec<VarId> = sig.ids().filter(|&id| !x.contains(id)).collect();
    space(sig, &free).saturating_mul(targets.max(1) as u128)
}

/// `x̄` is directly sufficient for `ȳ`.
pub fn oracle_directly_sufficient(
    model: &Model,
    x: &PartialAssignment,
    y: &PartialAssignment,
    guard: &OracleGuard,
) -> Result<bool, OracleError> {
    guard.check(direct_cost(model, x, y.len()))?;
    Ok(y.iter().all(|(id, v)| forced(model, x, id, v)))
}

/// Every partial assignment over `vars`, the empty one included.
fn partial_assignments(sig: &Signature, vars: &[VarId]) -> Vec<PartialAssignment> {
    // Digit 0 leaves a variable unbound.
    let radices = vars.iter().map(|&v| sig.range_len(v) + 1).collect();
    MixedRadix::new(radices)
        .map(|digits| {
            let mut pa = PartialAssignment::empty(sig);
            for (&v, &d) in vars.iter().zip(&digits) {
                if d > 0 {
                    pa.set(v, d - 1);
                }
            }
            pa
        })
        .collect()
}

/// `x̄` is sufficient for `ȳ`: a chain `x̄ = w̄₀, …, w̄ₙ = ȳ` of partial
/// endogenous assignments where `x̄` together with each `w̄ᵢ` is directly
/// sufficient for `w̄ᵢ₊₁`. The search visits every state reachable from
/// `x̄`, which covers all chains up to the number of states.
pub fn oracle_sufficient(
    model: &Model,
    x: &PartialAssignment,
    y: &PartialAssignment,
    guard: &OracleGuard,
) -> Result<bool, OracleError> {
    let sig = model.signature();
    let endo: Vec<VarId> = sig.endogenous().collect();
    let states: u128 = endo.iter().map(|&v| sig.range_len(v) as u128 + 1).product();
    if states > guard.max_chain_states {
        return Err(OracleError::TooManyStates {
            states,
            limit: guard.max_chain_states,
        });
    }
    let per_state = direct_cost(model, x, endo.iter().map(|&v| sig.range_len(v)).sum());
    guard.check(states.saturating_mul(per_state))?;
    if y.vars().any(|id| sig.is_exogenous(id)) {
        return Ok(false);
    }
    if y == x {
        return Ok(true);
    }
    let candidates = partial_assignments(sig, &endo);
    let mut seen: HashSet<PartialAssignment> = HashSet::new();
    let mut queue = VecDeque::from([x.clone()]);
    seen.insert(x.clone());
    while let Some(state) = queue.pop_front() {
        let Some(antecedent) = x.merge(&state) else {
            continue;
        };
        // Which single bindings the antecedent forces; a candidate state is
        // directly sufficient-for exactly when all its bindings are.
        let mut table: Vec<Vec<bool>> = sig
            .ids()
            .map(|id| vec![false; sig.range_len(id)])
            .collect();
        for &v in &endo {
            for val in 0..sig.range_len(v) {
                table[v.0][val] = forced(model, &antecedent, v, val);
            }
        }
        for w in &candidates {
            if !w.iter().all(|(id, v)| table[id.0][v]) {
                continue;
            }
            if w == y {
                return Ok(true);
            }
            if seen.insert(w.clone()) {
                queue.push_back(w.clone());
            }
        }
    }
    Ok(false)
}

/// Solves `M` under `setting` in `ctx` by searching all endogenous worlds
/// for the one that satisfies every equation not overridden.
pub fn solve_by_search(model: &Model, ctx: &Context, setting: &PartialAssignment) -> Vec<usize> {
    let sig = model.signature();
    let fixed = ctx.assignment().merge(setting).expect("disjoint");
    let free: Vec<VarId> = sig.endogenous().filter(|&v| !setting.contains(v)).collect();
    let mut found = None;
    for_worlds(sig, &fixed, &free, |w| {
        if free.iter().all(|&v| eval(model, w, v) == w[v.0]) {
            found = Some(w.to_vec());
            return false;
        }
        true
    });
    found.expect("an acyclic model has a solution")
}

/// `x̄` is weakly sufficient for `ȳ` in `ctx`: `(M, ū) ⊨ [X̄←x̄] Ȳ=ȳ`.
pub fn oracle_weakly_sufficient(
    model: &Model,
    ctx: &Context,
    x: &PartialAssignment,
    y: &PartialAssignment,
    guard: &OracleGuard,
) -> Result<bool, OracleError> {
    let sig = model.signature();
    if x.vars().any(|id| sig.is_exogenous(id)) {
        return Err(OracleError::ExogenousIntervention);
    }
    let free: Vec<VarId> = sig.endogenous().filter(|&v| !x.contains(v)).collect();
    guard.check(space(sig, &free).saturating_mul(free.len().max(1) as u128))?;
    if y.vars().any(|id| sig.is_exogenous(id)) {
        return Ok(false);
    }
    Ok(y.holds_in(&solve_by_search(model, ctx, x)))
}

/// The formula-based parent check: a context and a setting of every other
/// endogenous variable under which `X←x` gives `Y=y` and `X←x′` gives
/// `Y=y′`. Returns the first such setting, context included.
pub fn oracle_potential_parent(
    model: &Model,
    x: (VarId, usize, usize),
    y: (VarId, usize, usize),
    guard: &OracleGuard,
) -> Result<Option<PartialAssignment>, OracleError> {
    let sig = model.signature();
    let rest: Vec<VarId> = sig.endogenous().filter(|&v| v != x.0 && v != y.0).collect();
    let exo: Vec<VarId> = sig.exogenous().collect();
    let per = space(sig, &sig.endogenous().collect::<Vec<_>>()).saturating_mul(sig.len() as u128);
    guard.check(space(sig, &rest).saturating_mul(space(sig, &exo)).saturating_mul(per))?;
    for ctx in Context::enumerate(sig) {
        let radices = rest.iter().map(|&v| sig.range_len(v)).collect();
        for digits in MixedRadix::new(radices) {
            let mut z = PartialAssignment::empty(sig);
            for (&v, &d) in rest.iter().zip(&digits) {
                z.set(v, d);
            }
            let left = solve_by_search(model, &ctx, &z.clone().with(x.0, x.1));
            let right = solve_by_search(model, &ctx, &z.clone().with(x.0, x.2));
            if left[y.0.0] == y.1 && right[y.0.0] == y.2 {
                return Ok(Some(ctx.assignment().merge(&z).expect("disjoint")));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use causalq_core::dsl::{parse_assignment, parse_model};

    fn model(text: &str) -> Model {
        parse_model(text).unwrap().compile().unwrap()
    }

    fn pa(m: &Model, s: &str) -> PartialAssignment {
        parse_assignment(s, m.signature()).unwrap()
    }

    #[test]
    fn constants_are_forced_by_nothing() {
        let m = model("model K { var A : {0,1} = 1 var B : {0,1} = A }");
        let g = OracleGuard::default();
        assert!(oracle_directly_sufficient(&m, &pa(&m, ""), &pa(&m, "A=1"), &g).unwrap());
        assert!(!oracle_directly_sufficient(&m, &pa(&m, ""), &pa(&m, "B=1"), &g).unwrap());
        assert!(oracle_sufficient(&m, &pa(&m, ""), &pa(&m, "B=1"), &g).unwrap());
    }

    #[test]
    fn chains_hold_the_antecedent() {
        let m = model("model C { exo U : {0,1} var C : {0,1} = U var D : {0,1} = C var E : {0,1} = D }");
        let g = OracleGuard::default();
        assert!(oracle_sufficient(&m, &pa(&m, "C=1, D=0"), &pa(&m, "E=0"), &g).unwrap());
        assert!(!oracle_sufficient(&m, &pa(&m, "C=1, D=0"), &pa(&m, "E=1"), &g).unwrap());
        assert!(!oracle_sufficient(&m, &pa(&m, "U=0"), &pa(&m, "U=0"), &g).unwrap());
    }

    #[test]
    fn guard_refuses_large_models() {
        let m = model("model C { exo U : {0,1} var C : {0,1} = U var D : {0,1} = C var E : {0,1} = D }");
        let tiny = OracleGuard {
            max_evals: 3,
            max_chain_states: 243,
        };
        assert!(matches!(
            oracle_directly_sufficient(&m, &pa(&m, ""), &pa(&m, "E=1"), &tiny),
            Err(OracleError::TooLarge { .. })
        ));
        let few = OracleGuard {
            max_evals: 1 << 40,
            max_chain_states: 10,
        };
        assert!(matches!(
            oracle_sufficient(&m, &pa(&m, ""), &pa(&m, "E=1"), &few),
            Err(OracleError::TooManyStates { states: 27, .. })
        ));
    }

    #[test]
    fn weak_sufficiency_solves_the_intervened_model() {
        let m = model("model C { exo U : {0,1} var C : {0,1} = U var D : {0,1} = C var E : {0,1} = D }");
        let sig = m.signature();
        let ctx = Context::new(sig, pa(&m, "U=1")).unwrap();
        let g = OracleGuard::default();
        assert!(oracle_weakly_sufficient(&m, &ctx, &pa(&m, "D=0"), &pa(&m, "C=1, E=0"), &g).unwrap());
        assert!(oracle_weakly_sufficient(&m, &ctx, &pa(&m, "U=0"), &pa(&m, ""), &g).is_err());
    }
}
