//! Text formats: models, causal formulas, assignments and contrasts.
//!
//! ```text
//! # C driven by its own exogenous source
//! model M {
//!   exo U_C : {0, 1}
//!   var C : {0, 1} = U_C
//!   var E : {0, 1, 2} = 2 * C
//! }
//! ```
//!
//! Formulas look like `[A<-1, C<-0] E=1 & !(B=0)`, assignments like
//! `A=1, C=0`, and contrasts like `A=1,C=1 vs A=0,C=0`.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::Serialize;

use crate::assignment::{Contrast, PartialAssignment};
use crate::formula::Formula;
use crate::model::ModelDef;
use crate::signature::Signature;

pub use printer::{print_expr, print_formula, print_model};

/// A parse failure with its 1-based position and the tokens that would have
/// been accepted there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub(crate) fn at(pos: lexer::Pos, message: String, expected: Vec<String>) -> Self {
        Diagnostic {
            line: pos.line,
            column: pos.column,
            message,
            expected,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// Every `model` block in a file, in order.
pub fn parse_file(text: &str) -> Result<Vec<ModelDef>, Diagnostic> {
    let mut p = parser::Parser::new(text, false)?;
    let mut out: Vec<ModelDef> = Vec::new();
    while !p.at_eof() {
        let m = p.model()?;
        if out.iter().any(|o| o.name == m.name) {
            return Err(Diagnostic {
                line: 0,
                column: 0,
                message: format!("model `{}` defined twice", m.name),
                expected: vec![],
            });
        }
        out.push(m);
    }
    Ok(out)
}

/// Exactly one `model` block.
pub fn parse_model(text: &str) -> Result<ModelDef, Diagnostic> {
    let mut p = parser::Parser::new(text, false)?;
    let m = p.model()?;
    p.finish()?;
    Ok(m)
}

/// `[Y<-y, …] φ` against a signature.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, Diagnostic> {
    parser::Parser::new(text, true)?.formula(sig)
}

/// `A=1, C=0`; empty text gives the empty assignment.
pub fn parse_assignment(text: &str, sig: &Signature) -> Result<PartialAssignment, Diagnostic> {
    parser::Parser::new(text, false)?.assignment(sig)
}

/// `A=1,C=1 vs A=0,C=0`: two assignments over the same variables that
/// differ everywhere. A single variable may be abbreviated `C=1 vs 0`.
pub fn parse_contrast(text: &str, sig: &Signature) -> Result<Contrast, Diagnostic> {
    let fail = |message: String| Diagnostic {
        line: 1,
        column: 1,
        message,
        expected: vec![],
    };
    let parts: Vec<&str> = text.split(" vs ").collect();
    if parts.len() != 2 {
        return Err(fail("a contrast is written `LEFT vs RIGHT`".into()));
    }
    let left = parse_assignment(parts[0].trim(), sig)?;
    let right_text = parts[1].trim();
    let right = if left.len() == 1 && !right_text.contains('=') {
        let id = left.vars().next().unwrap();
        parse_assignment(&format!("{}={}", sig.name(id), right_text), sig)?
    } else {
        parse_assignment(right_text, sig)?
    };
    let c = parser::contrast_from(&left, &right).map_err(|e| fail(e.to_string()))?;
    Ok(c)
}

/// Renders a report as indented text (via `Display`) or pretty JSON.
pub fn print_report<R: Serialize + fmt::Display>(report: &R, json: bool) -> String {
    if json {
        serde_json::to_string_pretty(report).expect("reports serialize")
    } else {
        report.to_string()
    }
}

/// JSON array of reports; `[]` when empty.
pub fn print_reports<R: Serialize>(reports: &[R]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
