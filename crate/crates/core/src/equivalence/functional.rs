//! Agreement on sufficiency and on weak sufficiency.

use crate::assignment::{Context, MixedRadix, PartialAssignment};
use crate::signature::{VarId, VarKind};
use crate::sufficiency::closure;

use super::pair::ModelPair;
use super::report::{Counterexample, Side};
use super::structural::subsets;

/// Every assignment over every nonempty subset of `vars`: by size, then
/// variables, then values. The empty assignment comes first.
pub(crate) fn assignments(width: usize, ranges: &[(VarId, usize)]) -> impl Iterator<Item = PartialAssignment> + '_ {
    let vars: Vec<VarId> = ranges.iter().map(|r| r.0).collect();
    let len = |v: VarId| ranges.iter().find(|r| r.0 == v).unwrap().1;
    let subsets: Vec<Vec<VarId>> = std::iter::once(Vec::new()).chain(subsets(&vars)).collect();
    subsets.into_iter().flat_map(move |s| {
        let radices = s.iter().map(|&v| len(v)).collect();
        MixedRadix::new(radices).map(move |digits| {
            let mut pa = PartialAssignment::with_len(width);
            for (&v, &d) in s.iter().zip(&digits) {
                pa.set(v, d);
            }
            pa
        })
    })
}

/// First antecedent over the common variables whose sufficient
/// consequences differ between `M` and `M′` with `w` prepended.
pub(crate) fn functional_clause(pair: &ModelPair, w: &PartialAssignment) -> Option<Counterexample> {
    let sig = pair.base().signature();
    let ranges: Vec<(VarId, usize)> = sig.ids().map(|id| (id, sig.range_len(id))).collect();
    for x in assignments(sig.len(), &ranges) {
        let cb = closure(pair.base(), &x).restrict_kind(sig, VarKind::Endogenous);
        let xe = pair.to_ext(&x).merge(w).expect("witness binds marginal variables only");
        let ce = pair.to_base(&closure(pair.extension(), &xe)).restrict_kind(sig, VarKind::Endogenous);
        if cb == ce {
            continue;
        }
        let (id, v, side) = sig
            .endogenous()
            .find_map(|id| match (cb.get(id), ce.get(id)) {
                (Some(v), other) if other != Some(v) => Some((id, v, Side::Base)),
                (_, Some(v)) if cb.get(id) != Some(v) => Some((id, v, Side::Extension)),
                _ => None,
            })
            .unwrap();
        return Some(Counterexample::Sufficiency {
            antecedent: x.named(sig),
            consequent: PartialAssignment::empty(sig).with(id, v).named(sig),
            holds_in: side,
        });
    }
    None
}

fn weak_counterexample(
    pair: &ModelPair,
    ctx: &Context,
    x: &PartialAssignment,
    wb: &[usize],
    we: &[usize],
) -> Option<Counterexample> {
    let sig = pair.base().signature();
    let id = sig.endogenous().find(|&id| wb[id.0] != we[pair.ext_id(id).0])?;
    Some(Counterexample::WeakSufficiency {
        context: ctx.assignment().named(sig),
        antecedent: x.named(sig),
        consequent: PartialAssignment::empty(sig).with(id, wb[id.0]).named(sig),
        holds_in: Side::Base,
    })
}

/// Compares `[z̄]X` for every endogenous `X` and full setting `z̄` of the
/// other common endogenous variables, in every base context.
pub(crate) fn conservative_fast(pair: &ModelPair, w: &PartialAssignment) -> Option<Counterexample> {
    let sig = pair.base().signature();
    let endo: Vec<VarId> = sig.endogenous().collect();
    for ctx in Context::enumerate(sig) {
        let ext_exo = pair.to_ext(ctx.assignment()).merge(w).expect("disjoint");
        for &x in &endo {
            let others: Vec<VarId> = endo.iter().copied().filter(|&v| v != x).collect();
            let radices = others.iter().map(|&v| sig.range_len(v)).collect();
            for digits in MixedRadix::new(radices) {
                let mut z = PartialAssignment::empty(sig);
                for (&v, &d) in others.iter().zip(&digits) {
                    z.set(v, d);
                }
                let wb = pair.base().world_under(ctx.assignment(), &z);
                let we = pair.extension().world_under(&ext_exo, &pair.to_ext(&z));
                if wb[x.0] != we[pair.ext_id(x).0] {
                    return weak_counterexample(pair, &ctx, &z, &wb, &we);
                }
            }
        }
    }
    None
}

/// Compares the solutions under every intervention on the common
/// endogenous variables, in every base context.
pub(crate) fn conservative_naive(pair: &ModelPair, w: &PartialAssignment) -> Option<Counterexample> {
    let sig = pair.base().signature();
    let ranges: Vec<(VarId, usize)> = sig.endogenous().map(|id| (id, sig.range_len(id))).collect();
    for ctx in Context::enumerate(sig) {
        let ext_exo = pair.to_ext(ctx.assignment()).merge(w).expect("disjoint");
        for x in assignments(sig.len(), &ranges) {
            let wb = pair.base().world_under(ctx.assignment(), &x);
            let we = pair.extension().world_under(&ext_exo, &pair.to_ext(&x));
            if let Some(c) = weak_counterexample(pair, &ctx, &x, &wb, &we) {
                return Some(c);
            }
        }
    }
    None
}
