//! Direct, transitive and weak sufficiency.
//!
//! A binding `Y = y` is *forced* by an antecedent `x̄` when the equation of
//! `Y` yields `y` for every value of every parent not bound by `x̄`, i.e. for
//! every setting of the remaining endogenous variables and every context
//! consistent with `x̄`. Direct sufficiency asks this of each target binding.
//!
//! Transitive sufficiency chains direct steps, with the antecedent held in
//! place for the whole chain: each link is checked with `x̄` added to its own
//! antecedent. Because forcing is monotone in the antecedent, the best chain
//! is the fixpoint of repeatedly adding everything forced, so the search is a
//! layer-by-layer closure rather than a walk over arbitrary assignments.

use serde::Serialize;

use crate::assignment::{Context, NamedAssignment, PartialAssignment};
use crate::error::AssignmentError;
use crate::model::Model;
use crate::signature::{Signature, VarId};

/// The value of `y` forced by `bindings`, if any. Bound variables force
/// themselves; unbound exogenous variables are never forced.
pub fn forced_value(model: &Model, bindings: &PartialAssignment, y: VarId) -> Option<usize> {
    if let Some(v) = bindings.get(y) {
        return Some(v);
    }
    model.equation(y)?.forced(bindings.slots())
}

/// `x̄` is directly sufficient for `ȳ`: every binding of `ȳ` is forced by
/// `x̄`. Targets bound by `x̄` must carry the same value; exogenous targets
/// never qualify.
pub fn directly_sufficient(model: &Model, x: &PartialAssignment, y: &PartialAssignment) -> bool {
    let sig = model.signature();
    y.iter()
        .all(|(id, v)| !sig.is_exogenous(id) && forced_value(model, x, id) == Some(v))
}

/// All endogenous bindings `x̄` is directly sufficient for, including the
/// endogenous part of `x̄` itself.
pub fn max_forced(model: &Model, x: &PartialAssignment) -> PartialAssignment {
    let mut out = PartialAssignment::empty(model.signature());
    for id in model.signature().endogenous() {
        if let Some(v) = forced_value(model, x, id) {
            out.set(id, v);
        }
    }
    out
}

/// Layers `S₀ = x̄ ⊆ S₁ ⊆ …` where `S_{k+1}` adds everything `S_k` forces;
/// the last layer is the fixpoint.
fn layers(model: &Model, x: &PartialAssignment) -> Vec<PartialAssignment> {
    let mut out = vec![x.clone()];
    loop {
        let cur = out.last().unwrap();
        let next = cur
            .merge(&max_forced(model, cur))
            .expect("forced values agree with the antecedent");
        if next == *cur {
            return out;
        }
        out.push(next);
    }
}

/// Everything `x̄` is sufficient for, together with `x̄` itself.
pub fn closure(model: &Model, x: &PartialAssignment) -> PartialAssignment {
    layers(model, x).pop().unwrap()
}

/// Certificate for sufficiency: `w̄₀ = x̄, …, w̄ₙ = ȳ`, each link directly
/// sufficient (with `x̄` carried along) for the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub links: Vec<PartialAssignment>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.links.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn named(&self, sig: &Signature) -> Vec<NamedAssignment> {
        self.links.iter().map(|l| l.named(sig)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedChain(pub Vec<NamedAssignment>);

/// Decides whether `x̄` is sufficient for `ȳ`, returning the shortest
/// layered chain when it is.
pub fn sufficient(model: &Model, x: &PartialAssignment, y: &PartialAssignment) -> Option<Chain> {
    let sig = model.signature();
    if y.vars().any(|id| sig.is_exogenous(id)) {
        return None;
    }
    if y == x {
        return Some(Chain {
            links: vec![x.clone()],
        });
    }
    let mut links = Vec::new();
    for layer in layers(model, x) {
        let done = y.is_subset_of(&layer);
        links.push(if links.is_empty() {
            layer
        } else {
            layer.restrict_kind(sig, crate::signature::VarKind::Endogenous)
        });
        if done {
            if links.last() != Some(y) {
                links.push(y.clone());
            }
            return Some(Chain { links });
        }
    }
    None
}

/// `(M, ū) ⊨ [X̄←x̄] Ȳ=ȳ`.
pub fn weakly_sufficient(
    model: &Model,
    ctx: &Context,
    x: &PartialAssignment,
    y: &PartialAssignment,
) -> Result<bool, AssignmentError> {
    let sig = model.signature();
    if let Some(id) = x.vars().find(|&id| sig.is_exogenous(id)) {
        return Err(AssignmentError::ExogenousIntervention(sig.name(id).to_string()));
    }
    if let Some(id) = y.vars().find(|&id| sig.is_exogenous(id)) {
        return Err(AssignmentError::ExogenousTarget(sig.name(id).to_string()));
    }
    let world = model.world_under(ctx.assignment(), x);
    Ok(y.holds_in(&world))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::model::ModelDef;
    use crate::value::Value;

    fn bin() -> Vec<Value> {
        vec![0.into(), 1.into()]
    }

    fn pa(m: &Model, pairs: &[(&str, i64)]) -> PartialAssignment {
        PartialAssignment::from_named(m.signature(), pairs.iter().map(|(n, v)| (*n, Value::Int(*v))))
            .unwrap()
    }

    /// U_C → C → D → E, all copies.
    fn chain_model() -> Model {
        let mut d = ModelDef::new("M1");
        let u = d.add_exogenous("U_C", bin()).unwrap();
        let c = d.add_endogenous("C", bin()).unwrap();
        let dd = d.add_endogenous("D", bin()).unwrap();
        let e = d.add_endogenous("E", bin()).unwrap();
        d.set_equation(c, Expr::var(u));
        d.set_equation(dd, Expr::var(c));
        d.set_equation(e, Expr::var(dd));
        d.compile().unwrap()
    }

    #[test]
    fn direct_sufficiency_is_one_hop() {
        let m = chain_model();
        assert!(!directly_sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("E", 1)])));
        assert!(directly_sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("D", 1)])));
        // Bound targets must agree with the antecedent.
        assert!(directly_sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("C", 1)])));
        assert!(!directly_sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("C", 0)])));
    }

    #[test]
    fn sufficiency_chains_through_intermediates() {
        let m = chain_model();
        let chain = sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("E", 1)])).unwrap();
        let sig = m.signature();
        let shown: Vec<String> = chain.links.iter().map(|l| l.display(sig).to_string()).collect();
        assert_eq!(shown, vec!["C=1", "C=1, D=1", "C=1, D=1, E=1", "E=1"]);
        assert!(sufficient(&m, &pa(&m, &[("C", 1)]), &pa(&m, &[("E", 0)])).is_none());
    }

    #[test]
    fn antecedent_is_held_for_the_whole_chain() {
        // C=1 would force D=1 and then E=1, but D is pinned to 0.
        let m = chain_model();
        let x = pa(&m, &[("C", 1), ("D", 0)]);
        assert!(sufficient(&m, &x, &pa(&m, &[("E", 0)])).is_some());
        assert!(sufficient(&m, &x, &pa(&m, &[("E", 1)])).is_none());
    }

    #[test]
    fn zero_length_chain() {
        let m = chain_model();
        let x = pa(&m, &[("D", 1)]);
        assert_eq!(sufficient(&m, &x, &x).unwrap().len(), 0);
    }

    #[test]
    fn exogenous_antecedent_restricts_contexts() {
        let m = chain_model();
        let closure = closure(&m, &pa(&m, &[("U_C", 0)]));
        assert_eq!(closure.display(m.signature()).to_string(), "U_C=0, C=0, D=0, E=0");
        assert!(sufficient(&m, &pa(&m, &[("U_C", 0)]), &pa(&m, &[("U_C", 0)])).is_none());
    }

    #[test]
    fn weak_sufficiency_uses_the_given_context() {
        let m = chain_model();
        let sig = m.signature();
        let ctx = Context::new(sig, pa(&m, &[("U_C", 1)])).unwrap();
        assert!(weakly_sufficient(&m, &ctx, &pa(&m, &[]), &pa(&m, &[("E", 1)])).unwrap());
        assert!(weakly_sufficient(&m, &ctx, &pa(&m, &[("D", 0)]), &pa(&m, &[("E", 0), ("C", 1)])).unwrap());
        assert!(weakly_sufficient(&m, &ctx, &pa(&m, &[("U_C", 0)]), &pa(&m, &[])).is_err());
    }

    #[test]
    fn constants_are_always_forced() {
        let mut d = ModelDef::new("K");
        let y = d.add_endogenous("Y", bin()).unwrap();
        d.set_equation(y, Expr::int(1));
        let m = d.compile().unwrap();
        assert_eq!(max_forced(&m, &PartialAssignment::empty(m.signature())).get(y), Some(1));
    }
}
