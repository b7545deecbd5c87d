//! Finite-domain structural causal models.
//!
//! The crate decides, by exhaustive enumeration over finite ranges, the
//! value-level causal relations of a model (potential and actual joint
//! ancestry, direct/transitive/weak sufficiency) and four notions of
//! equivalence between a model and an extension of it that adds variables:
//! structural, functional, conservative and causal equivalence.
//!
//! Every positive answer carries a certificate (a witness, a chain of
//! sufficient assignments, or a network of joint-parent steps) and every
//! negative equivalence verdict a counterexample that can be re-checked with
//! the single-model operations.

pub mod assignment;
pub mod dsl;
pub mod equivalence;
pub mod error;
pub mod expr;
pub mod formula;
pub mod model;
pub mod relations;
pub mod signature;
pub mod sufficiency;
pub mod value;

pub use assignment::{Context, Contrast, NamedAssignment, NamedContrast, PartialAssignment};
pub use error::{AssignmentError, ModelError, PairError, SignatureError};
pub use expr::{BinOp, Expr};
pub use formula::{satisfies, BoolExpr, Formula};
pub use model::{validate, Limits, Model, ModelDef, ValidationReport};
pub use signature::{Signature, VarId, VarKind, Variable};
pub use value::Value;
