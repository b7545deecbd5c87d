use std::fmt;

use serde::Serialize;

use crate::assignment::{NamedAssignment, NamedContrast};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivKind {
    Structural,
    Functional,
    Conservative,
    Causal,
}

impl fmt::Display for EquivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivKind::Structural => "structural",
            EquivKind::Functional => "functional",
            EquivKind::Conservative => "conservative",
            EquivKind::Causal => "causal",
        })
    }
}

/// The model in which a disputed fact holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Base,
    Extension,
}

/// A fact true in exactly one of the two models. Values are named in terms
/// of the common variables; `context` is a base-model context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "relation", rename_all = "kebab-case")]
pub enum Counterexample {
    PotentialAncestry {
        source: NamedContrast,
        target: NamedContrast,
        holds_in: Side,
    },
    ActualAncestry {
        context: NamedAssignment,
        source: NamedContrast,
        target: NamedContrast,
        holds_in: Side,
    },
    Sufficiency {
        antecedent: NamedAssignment,
        consequent: NamedAssignment,
        holds_in: Side,
    },
    WeakSufficiency {
        context: NamedAssignment,
        antecedent: NamedAssignment,
        consequent: NamedAssignment,
        holds_in: Side,
    },
}

impl Counterexample {
    pub fn holds_in(&self) -> Side {
        match self {
            Counterexample::PotentialAncestry { holds_in, .. }
            | Counterexample::ActualAncestry { holds_in, .. }
            | Counterexample::Sufficiency { holds_in, .. }
            | Counterexample::WeakSufficiency { holds_in, .. } => *holds_in,
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &Side| match s {
            Side::Base => "base",
            Side::Extension => "extension",
        };
        match self {
            Counterexample::PotentialAncestry { source, target, holds_in } => write!(
                f,
                "potential joint ancestry ({source}) ~> ({target}) holds only in the {} model",
                side(holds_in)
            ),
            Counterexample::ActualAncestry {
                context,
                source,
                target,
                holds_in,
            } => write!(
                f,
                "in context {context}, actual joint ancestry ({source}) ~> ({target}) holds only in the {} model",
                side(holds_in)
            ),
            Counterexample::Sufficiency {
                antecedent,
                consequent,
                holds_in,
            } => write!(
                f,
                "{{{antecedent}}} is sufficient for {{{consequent}}} only in the {} model",
                side(holds_in)
            ),
            Counterexample::WeakSufficiency {
                context,
                antecedent,
                consequent,
                holds_in,
            } => write!(
                f,
                "in context {context}, [{antecedent}] gives {consequent} only in the {} model",
                side(holds_in)
            ),
        }
    }
}

/// Outcome for one candidate setting of the marginalized variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessTrial {
    pub witness: NamedAssignment,
    pub passed: bool,
    /// Which check failed first (`structural`, `functional`, ...).
    pub failed: Option<EquivKind>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub kind: EquivKind,
    pub base: String,
    pub extension: String,
    pub verdict: bool,
    /// The first passing setting of the marginalized variables.
    pub witness: Option<NamedAssignment>,
    /// The first candidate's failure when no candidate passes.
    pub counterexample: Option<Counterexample>,
    pub trace: Vec<WitnessTrial>,
    pub warnings: Vec<String>,
}

impl EquivReport {
    pub(crate) fn from_trials(
        kind: EquivKind,
        base: &str,
        extension: &str,
        trace: Vec<WitnessTrial>,
        warnings: Vec<String>,
    ) -> Self {
        let passing = trace.iter().find(|t| t.passed);
        EquivReport {
            kind,
            base: base.to_string(),
            extension: extension.to_string(),
            verdict: passing.is_some(),
            witness: passing.map(|t| t.witness.clone()),
            counterexample: match passing {
                Some(_) => None,
                None => trace.first().and_then(|t| t.counterexample.clone()),
            },
            trace,
            warnings,
        }
    }
}

fn show(a: &NamedAssignment) -> String {
    if a.is_empty() {
        "(empty)".into()
    } else {
        a.to_string()
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} equivalence of {} and {}: {}",
            self.kind, self.base, self.extension, self.verdict
        )?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {}", show(w))?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "counterexample: {c}")?;
        }
        if self.trace.len() > 1 || !self.verdict {
            for t in &self.trace {
                let what = match (&t.failed, t.passed) {
                    (_, true) => "passed".to_string(),
                    (Some(k), false) => format!("{k} check failed"),
                    (None, false) => "failed".to_string(),
                };
                writeln!(f, "  candidate {}: {what}", show(&t.witness))?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
