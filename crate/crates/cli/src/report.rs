use std::fmt;

use serde::Serialize;
use serde_json::Value as Json;

/// Verdict of a single-model relation with its certificate.
#[derive(Serialize)]
pub struct RelationReport {
    pub relation: &'static str,
    pub model: String,
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Json>,
    /// Text form of the certificate, one line each.
    #[serde(skip)]
    pub lines: Vec<String>,
    #[serde(skip)]
    pub show_certificate: bool,
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        if self.show_certificate {
            for l in &self.lines {
                write!(f, "\n{l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct SolveReport {
    pub model: String,
    pub context: Json,
    pub solution: Json,
    #[serde(skip)]
    pub text: String,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Serialize)]
pub struct QueryReport {
    pub model: String,
    pub context: Json,
    pub formula: String,
    pub verdict: bool,
}

impl fmt::Display for QueryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)
    }
}
