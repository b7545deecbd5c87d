//! Equivalence between a model `M` and an extension `M′`.
//!
//! Each check searches the settings `w̄` of the extension's extra exogenous
//! variables in declared order and reports the first that works. Facts are
//! compared over the common variables only.
//!
//! In the ancestry comparisons, the endogenous variables of `M′` missing from
//! `M` are treated as determined by their equations: a joint-parent step in
//! `M′` may bind them (in its source, target or witness) only to values that
//! some setting of the remaining free variables produces. Setting them
//! against their equations would describe interventions `M` cannot express.
//! [`EquivConfig::free_hidden`] drops this requirement.

mod functional;
mod pair;
mod report;
mod structural;

use serde::Serialize;

use crate::assignment::PartialAssignment;
use crate::error::PairError;
use crate::relations::{is_ancestor, ActualReading, Carry};

pub use pair::ModelPair;
pub use report::{Counterexample, EquivKind, EquivReport, Side, WitnessTrial};

use structural::Universe;

/// Above this many common values the ancestry comparisons get slow.
pub const LARGE_COMMON_VALUES: usize = 12;

#[derive(Debug, Clone, Default)]
pub struct EquivConfig {
    /// Check only this setting of the marginalized variables.
    pub witness: Option<PartialAssignment>,
    /// Fix the marginalized variables to the witness in the potential
    /// ancestry clause as well.
    pub strict_potential: bool,
    /// Let joint-parent steps in `M′` set hidden endogenous variables
    /// freely, as interventions.
    pub free_hidden: bool,
    /// Leave exogenous variables out of ancestry sources.
    pub endogenous_sources_only: bool,
    /// Cap on `|X̄| + |Ȳ|` in the ancestry comparisons.
    pub max_set_size: Option<usize>,
    pub reading: ActualReading,
    pub carry: Carry,
    /// Also compare ancestry between overlapping variable sets.
    pub overlapping: bool,
    /// Conservative equivalence by full quantification instead of the
    /// single-variable reduction.
    pub naive_conservative: bool,
}

/// Resolved options used by the clause implementations.
pub(crate) struct Resolved {
    pub exogenous_sources: bool,
    pub free_hidden: bool,
    pub max_set_size: Option<usize>,
    pub reading: ActualReading,
    pub carry: Carry,
    pub overlapping: bool,
}

impl EquivConfig {
    fn resolved(&self) -> Resolved {
        Resolved {
            exogenous_sources: !self.endogenous_sources_only,
            free_hidden: self.free_hidden,
            max_set_size: self.max_set_size,
            reading: self.reading,
            carry: self.carry,
            overlapping: self.overlapping,
        }
    }
}

struct Checker<'p> {
    pair: &'p ModelPair,
    config: &'p EquivConfig,
    inner: Resolved,
    universe: Option<Universe>,
    potential: Option<Option<Counterexample>>,
}

impl<'p> Checker<'p> {
    fn new(pair: &'p ModelPair, config: &'p EquivConfig) -> Self {
        Checker {
            pair,
            config,
            inner: config.resolved(),
            universe: None,
            potential: None,
        }
    }

    fn universe(&mut self) -> &Universe {
        if self.universe.is_none() {
            self.universe = Some(Universe::new(self.pair));
        }
        self.universe.as_ref().unwrap()
    }

    fn structural(&mut self, w: &PartialAssignment) -> Option<Counterexample> {
        self.universe();
        let universe = self.universe.as_ref().unwrap();
        let potential = if self.config.strict_potential {
            structural::potential_clause(self.pair, &self.inner, universe, Some(w))
        } else {
            // The witness-free clause is the same for every candidate.
            if self.potential.is_none() {
                self.potential = Some(structural::potential_clause(self.pair, &self.inner, universe, None));
            }
            self.potential.clone().unwrap()
        };
        potential.or_else(|| structural::actual_clause(self.pair, &self.inner, universe, w))
    }

    fn run(&mut self, kind: EquivKind) -> Result<EquivReport, PairError> {
        let candidates = match &self.config.witness {
            Some(w) => {
                self.pair.check_witness(w)?;
                vec![w.clone()]
            }
            None => self.pair.witnesses(),
        };
        let es = self.pair.extension().signature();
        let mut trace = Vec::new();
        for w in candidates {
            let failure = match kind {
                EquivKind::Structural => self.structural(&w).map(|c| (kind, c)),
                EquivKind::Functional => functional::functional_clause(self.pair, &w).map(|c| (kind, c)),
                EquivKind::Conservative => {
                    let c = if self.config.naive_conservative {
                        functional::conservative_naive(self.pair, &w)
                    } else {
                        functional::conservative_fast(self.pair, &w)
                    };
                    c.map(|c| (kind, c))
                }
                EquivKind::Causal => self
                    .structural(&w)
                    .map(|c| (EquivKind::Structural, c))
                    .or_else(|| functional::functional_clause(self.pair, &w).map(|c| (EquivKind::Functional, c))),
            };
            let passed = failure.is_none();
            trace.push(WitnessTrial {
                witness: w.named(es),
                passed,
                failed: failure.as_ref().map(|f| f.0),
                counterexample: failure.map(|f| f.1),
            });
            if passed {
                break;
            }
        }
        let mut warnings = Vec::new();
        if matches!(kind, EquivKind::Structural | EquivKind::Causal)
            && self.pair.common_values() > LARGE_COMMON_VALUES
            && self.config.max_set_size.is_none()
        {
            warnings.push(format!(
                "{} common values; ancestry comparisons enumerate every contrast over them",
                self.pair.common_values()
            ));
        }
        Ok(EquivReport::from_trials(
            kind,
            self.pair.base().name(),
            self.pair.extension().name(),
            trace,
            warnings,
        ))
    }
}

/// Dispatches on `kind`.
pub fn check(pair: &ModelPair, kind: EquivKind, config: &EquivConfig) -> Result<EquivReport, PairError> {
    Checker::new(pair, config).run(kind)
}

pub fn structurally_equivalent(pair: &ModelPair, config: &EquivConfig) -> Result<EquivReport, PairError> {
    check(pair, EquivKind::Structural, config)
}

pub fn functionally_equivalent(pair: &ModelPair, config: &EquivConfig) -> Result<EquivReport, PairError> {
    check(pair, EquivKind::Functional, config)
}

pub fn conservatively_equivalent(pair: &ModelPair, config: &EquivConfig) -> Result<EquivReport, PairError> {
    check(pair, EquivKind::Conservative, config)
}

pub fn causally_equivalent(pair: &ModelPair, config: &EquivConfig) -> Result<EquivReport, PairError> {
    check(pair, EquivKind::Causal, config)
}

/// The first actual-ancestry fact, in any base context, on which the two
/// models disagree with the marginalized variables set to `w`.
pub fn actual_ancestry_disagreement(
    pair: &ModelPair,
    config: &EquivConfig,
    w: &PartialAssignment,
) -> Result<Option<Counterexample>, PairError> {
    pair.check_witness(w)?;
    let universe = Universe::new(pair);
    Ok(structural::actual_clause(pair, &config.resolved(), &universe, w))
}

/// An ancestor edge of `M` over common variables that `M′` lacks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AncestryViolation {
    pub ancestor: String,
    pub descendant: String,
}

/// Ancestor pairs of `M` (over common endogenous variables) that are not
/// ancestor pairs of `M′`. Empty for conservative extensions.
pub fn ancestry_preservation_check(pair: &ModelPair) -> Vec<AncestryViolation> {
    let sig = pair.base().signature();
    let endo: Vec<_> = pair.common_endogenous().collect();
    let mut out = Vec::new();
    for &x in &endo {
        for &y in &endo {
            if x == y {
                continue;
            }
            let in_base = is_ancestor(pair.base(), x, y).expect("endogenous pair").is_some();
            if in_base
                && is_ancestor(pair.extension(), pair.ext_id(x), pair.ext_id(y))
                    .expect("endogenous pair")
                    .is_none()
            {
                out.push(AncestryViolation {
                    ancestor: sig.name(x).to_string(),
                    descendant: sig.name(y).to_string(),
                });
            }
        }
    }
    out
}
