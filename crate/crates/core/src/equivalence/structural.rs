//! Agreement on potential and actual joint ancestry over the common
//! variables.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::assignment::{Context, Contrast, MixedRadix, PartialAssignment};
use crate::model::Model;
use crate::relations::{AncestryGraph, JointParents, SearchSpace};
use crate::signature::{Signature, VarId};

use super::pair::ModelPair;
use super::report::{Counterexample, Side};
use super::Resolved as EquivConfig;

/// Lexicographic nonempty subsets of `vars`, smallest first.
pub(crate) fn subsets(vars: &[VarId]) -> Vec<Vec<VarId>> {
    let n = vars.len();
    let mut out: Vec<Vec<VarId>> = (1u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| vars[i]).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Every contrast over `vars` whose left side is `left` (when given).
fn contrasts_over(sig: &Signature, vars: &[VarId], left: Option<&[usize]>, out: &mut Vec<Contrast>) {
    let radices: Vec<usize> = vars.iter().map(|&v| sig.range_len(v)).collect();
    let lefts: Vec<Vec<usize>> = match left {
        Some(l) => vec![l.to_vec()],
        None => MixedRadix::new(radices.clone()).collect(),
    };
    for l in lefts {
        // Right sides avoid the left value in every coordinate.
        let rad: Vec<usize> = radices.iter().map(|r| r - 1).collect();
        for digits in MixedRadix::new(rad) {
            let entries = vars
                .iter()
                .zip(&l)
                .zip(&digits)
                .map(|((&v, &lv), &d)| (v, lv, if d >= lv { d + 1 } else { d }))
                .collect();
            out.push(Contrast::from_sorted(entries));
        }
    }
}

/// Target contrasts over the common endogenous variables, indexed.
pub(crate) struct Universe {
    pub items: Vec<Contrast>,
    pub index: HashMap<Contrast, usize>,
}

impl Universe {
    pub fn new(pair: &ModelPair) -> Self {
        let sig = pair.base().signature();
        let endo: Vec<VarId> = pair.common_endogenous().collect();
        let mut items = Vec::new();
        for s in subsets(&endo) {
            contrasts_over(sig, &s, None, &mut items);
        }
        let index = items.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Universe { items, index }
    }
}

fn source_vars(pair: &ModelPair, config: &EquivConfig) -> Vec<Vec<VarId>> {
    let sig = pair.base().signature();
    let vars: Vec<VarId> = pair
        .common()
        .filter(|&v| config.exogenous_sources || !sig.is_exogenous(v))
        .collect();
    subsets(&vars)
        .into_iter()
        .filter(|s| config.max_set_size.is_none_or(|cap| s.len() < cap))
        .collect()
}

/// The extension's search space, with hidden endogenous variables held to
/// their equations unless configured otherwise.
fn ext_space(pair: &ModelPair, config: &EquivConfig, pinned: Option<&PartialAssignment>, world: Option<Vec<usize>>) -> SearchSpace {
    let es = pair.extension().signature();
    let mask = (!config.free_hidden && !pair.hidden().is_empty()).then(|| {
        let mut m = vec![false; es.len()];
        for &h in pair.hidden() {
            m[h.0] = true;
        }
        m
    });
    SearchSpace {
        witness_vars: None,
        pinned: pinned.cloned().unwrap_or_else(|| PartialAssignment::empty(es)),
        actual: world,
        reading: config.reading,
        determined: mask,
        carry: config.carry,
    }
}

fn compare(
    pair: &ModelPair,
    config: &EquivConfig,
    universe: &Universe,
    sources: &[Contrast],
    base: (&AncestryGraph, &[FixedBitSet]),
    ext: (&AncestryGraph, &[FixedBitSet]),
) -> Option<(Contrast, Contrast, Side)> {
    let empty = FixedBitSet::with_capacity(universe.items.len());
    for s in sources {
        let rb = base.0.node(s).map_or(&empty, |i| &base.1[i]);
        let se = pair.contrast_to_ext(s);
        let re = ext.0.node(&se).map_or(&empty, |i| &ext.1[i]);
        if rb == re {
            continue;
        }
        let mut diff = rb.clone();
        diff.symmetric_difference_with(re);
        for t in diff.ones() {
            let tgt = &universe.items[t];
            let overlap = tgt.vars().iter().any(|&v| s.contains(v));
            if (overlap && !config.overlapping) || tgt.vars() == s.vars() || config.max_set_size.is_some_and(|cap| s.len() + tgt.len() > cap) {
                continue;
            }
            let side = if rb.contains(t) { Side::Base } else { Side::Extension };
            return Some((s.clone(), tgt.clone(), side));
        }
    }
    None
}

fn reach_of(pair: &ModelPair, graph: &AncestryGraph, universe: &Universe, on_ext: bool) -> Vec<FixedBitSet> {
    graph.reach(universe.items.len(), |c| {
        if on_ext {
            pair.contrast_to_base(c).and_then(|b| universe.index.get(&b).copied())
        } else {
            universe.index.get(c).copied()
        }
    })
}

/// The potential-ancestry clause. `pinned` fixes the marginalized
/// variables in the extension (strict reading); otherwise they are free.
pub(crate) fn potential_clause(
    pair: &ModelPair,
    config: &EquivConfig,
    universe: &Universe,
    pinned: Option<&PartialAssignment>,
) -> Option<Counterexample> {
    let sig = pair.base().signature();
    let mut sources = Vec::new();
    for s in source_vars(pair, config) {
        contrasts_over(sig, &s, None, &mut sources);
    }
    let base_search = JointParents::new(
        pair.base(),
        SearchSpace {
            carry: config.carry,
            ..SearchSpace::potential(pair.base())
        },
    );
    let ext_search = JointParents::new(pair.extension(), ext_space(pair, config, pinned, None));
    let ext_sources: Vec<Contrast> = sources.iter().map(|s| pair.contrast_to_ext(s)).collect();
    let gb = AncestryGraph::build(&base_search, &sources);
    let ge = AncestryGraph::build(&ext_search, &ext_sources);
    let rb = reach_of(pair, &gb, universe, false);
    let re = reach_of(pair, &ge, universe, true);
    compare(pair, config, universe, &sources, (&gb, &rb), (&ge, &re)).map(|(s, t, side)| {
        Counterexample::PotentialAncestry {
            source: s.named(sig),
            target: t.named(sig),
            holds_in: side,
        }
    })
}

/// The actual-ancestry clause for one setting `w` of the marginalized
/// variables, over every base context.
pub(crate) fn actual_clause(
    pair: &ModelPair,
    config: &EquivConfig,
    universe: &Universe,
    w: &PartialAssignment,
) -> Option<Counterexample> {
    let sig = pair.base().signature();
    for ctx in Context::enumerate(sig) {
        let world_b = pair.base().world(&ctx);
        let ext_ctx = pair.to_ext(ctx.assignment()).merge(w).expect("disjoint");
        let world_e = ext_world(pair.extension(), &ext_ctx);
        let world_e_common: Vec<usize> = sig.ids().map(|id| world_e[pair.ext_id(id).0]).collect();
        let mut sources = Vec::new();
        for s in source_vars(pair, config) {
            let lb: Vec<usize> = s.iter().map(|v| world_b[v.0]).collect();
            let le: Vec<usize> = s.iter().map(|v| world_e_common[v.0]).collect();
            contrasts_over(sig, &s, Some(&lb), &mut sources);
            if le != lb {
                contrasts_over(sig, &s, Some(&le), &mut sources);
            }
        }
        let base_search = JointParents::new(
            pair.base(),
            SearchSpace {
                reading: config.reading,
                carry: config.carry,
                ..SearchSpace::actual(pair.base(), &ctx)
            },
        );
        let ext_search = JointParents::new(pair.extension(), ext_space(pair, config, None, Some(world_e)));
        let ext_sources: Vec<Contrast> = sources.iter().map(|s| pair.contrast_to_ext(s)).collect();
        let gb = AncestryGraph::build(&base_search, &sources);
        let ge = AncestryGraph::build(&ext_search, &ext_sources);
        let rb = reach_of(pair, &gb, universe, false);
        let re = reach_of(pair, &ge, universe, true);
        if let Some((s, t, side)) = compare(pair, config, universe, &sources, (&gb, &rb), (&ge, &re)) {
            return Some(Counterexample::ActualAncestry {
                context: ctx.assignment().named(sig),
                source: s.named(sig),
                target: t.named(sig),
                holds_in: side,
            });
        }
    }
    None
}

fn ext_world(m: &Model, exo: &PartialAssignment) -> Vec<usize> {
    let ctx = Context::new(m.signature(), exo.clone()).expect("a full extension context");
    m.world(&ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_ordered_by_size() {
        let v = [VarId(0), VarId(1), VarId(2)];
        let s = subsets(&v);
        assert_eq!(s.len(), 7);
        assert_eq!(s[0], vec![VarId(0)]);
        assert_eq!(s[3], vec![VarId(0), VarId(1)]);
        assert_eq!(s[6], v.to_vec());
    }

    #[test]
    fn contrasts_avoid_the_left_value() {
        let mut sig = Signature::new();
        let a = sig.add("A", crate::signature::VarKind::Endogenous, vec![0.into(), 1.into(), 2.into()]).unwrap();
        let mut out = Vec::new();
        contrasts_over(&sig, &[a], None, &mut out);
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(|c| c.left_values()[0] != c.right_values()[0]));
        out.clear();
        contrasts_over(&sig, &[a], Some(&[1]), &mut out);
        let rights: Vec<usize> = out.iter().map(|c| c.right_values()[0]).collect();
        assert_eq!(rights, vec![0, 2]);
    }
}
