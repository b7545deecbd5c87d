use crate::assignment::{Context, PartialAssignment};
use crate::error::{AssignmentError, ModelError};
use crate::model::Model;
use crate::signature::{Signature, VarId};

/// Boolean combination of atoms `X = x` over endogenous variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Atom(VarId, usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn atom(id: VarId, value: usize) -> Self {
        BoolExpr::Atom(id, value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(a))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    /// Conjunction of the atoms of an assignment; `None` when it is empty.
    pub fn conjunction(assignment: &PartialAssignment) -> Option<Self> {
        assignment
            .iter()
            .map(|(id, v)| BoolExpr::Atom(id, v))
            .reduce(BoolExpr::and)
    }

    pub fn holds_in(&self, world: &[usize]) -> bool {
        match self {
            BoolExpr::Atom(id, v) => world[id.0] == *v,
            BoolExpr::Not(a) => !a.holds_in(world),
            BoolExpr::And(a, b) => a.holds_in(world) && b.holds_in(world),
            BoolExpr::Or(a, b) => a.holds_in(world) || b.holds_in(world),
        }
    }

    fn check(&self, sig: &Signature) -> Result<(), AssignmentError> {
        match self {
            BoolExpr::Atom(id, v) => {
                if sig.is_exogenous(*id) {
                    return Err(AssignmentError::ExogenousTarget(sig.name(*id).to_string()));
                }
                if *v >= sig.range_len(*id) {
                    return Err(AssignmentError::OutOfRange {
                        variable: sig.name(*id).to_string(),
                        value: (*v as i64).into(),
                    });
                }
                Ok(())
            }
            BoolExpr::Not(a) => a.check(sig),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
        }
    }
}

/// `[Y₁←y₁, …, Yₖ←yₖ] φ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub interventions: PartialAssignment,
    pub body: BoolExpr,
}

impl Formula {
    pub fn new(
        sig: &Signature,
        interventions: PartialAssignment,
        body: BoolExpr,
    ) -> Result<Self, AssignmentError> {
        if let Some(id) = interventions.vars().find(|&id| sig.is_exogenous(id)) {
            return Err(AssignmentError::ExogenousIntervention(sig.name(id).to_string()));
        }
        body.check(sig)?;
        Ok(Formula {
            interventions,
            body,
        })
    }

    pub fn plain(sig: &Signature, body: BoolExpr) -> Result<Self, AssignmentError> {
        Formula::new(sig, PartialAssignment::empty(sig), body)
    }
}

/// `(M, ū) ⊨ [Ȳ←ȳ]φ`: φ holds in the unique solution of the intervened model.
pub fn satisfies(model: &Model, ctx: &Context, formula: &Formula) -> Result<bool, ModelError> {
    let intervened = model.intervene(&formula.interventions)?;
    Ok(formula.body.holds_in(&intervened.world(ctx)))
}
