use crate::assignment::{Contrast, MixedRadix, PartialAssignment};
use crate::error::PairError;
use crate::model::Model;
use crate::signature::{Signature, VarId};

/// A base model `M` and an extension `M′` whose signature contains it.
#[derive(Debug, Clone)]
pub struct ModelPair {
    base: Model,
    ext: Model,
    to_ext: Vec<VarId>,
    to_base: Vec<Option<VarId>>,
    marginal: Vec<VarId>,
    hidden: Vec<VarId>,
}

impl ModelPair {
    /// Pairs `base` with `ext`, checking that every base variable appears in
    /// the extension with the same kind and range.
    pub fn new(base: Model, ext: Model) -> Result<Self, PairError> {
        let bs = base.signature();
        let es = ext.signature();
        let mut to_ext = Vec::with_capacity(bs.len());
        let mut to_base = vec![None; es.len()];
        for (id, var) in bs.variables() {
            let e = es
                .lookup(&var.name)
                .ok_or_else(|| PairError::MissingVariable(var.name.clone()))?;
            if es.kind(e) != var.kind {
                return Err(PairError::KindMismatch(var.name.clone()));
            }
            if es.range(e) != var.range.as_slice() {
                return Err(PairError::RangeMismatch(var.name.clone()));
            }
            to_ext.push(e);
            to_base[e.0] = Some(id);
        }
        let marginal = es.exogenous().filter(|e| to_base[e.0].is_none()).collect();
        let hidden = es.endogenous().filter(|e| to_base[e.0].is_none()).collect();
        Ok(ModelPair {
            base,
            ext,
            to_ext,
            to_base,
            marginal,
            hidden,
        })
    }

    /// Whether `a`'s variables all occur in `b` (names only).
    pub fn nests(a: &Signature, b: &Signature) -> bool {
        a.variables().all(|(_, v)| b.lookup(&v.name).is_some())
    }

    pub fn base(&self) -> &Model {
        &self.base
    }

    pub fn extension(&self) -> &Model {
        &self.ext
    }

    /// `W`: exogenous variables only the extension has.
    pub fn marginal(&self) -> &[VarId] {
        &self.marginal
    }

    /// Endogenous variables only the extension has.
    pub fn hidden(&self) -> &[VarId] {
        &self.hidden
    }

    pub fn common(&self) -> impl Iterator<Item = VarId> + '_ {
        self.base.signature().ids()
    }

    pub fn common_endogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.base.signature().endogenous()
    }

    pub fn ext_id(&self, id: VarId) -> VarId {
        self.to_ext[id.0]
    }

    pub fn base_id(&self, id: VarId) -> Option<VarId> {
        self.to_base[id.0]
    }

    pub fn to_ext(&self, a: &PartialAssignment) -> PartialAssignment {
        let mut out = PartialAssignment::empty(self.ext.signature());
        for (id, v) in a.iter() {
            out.set(self.ext_id(id), v);
        }
        out
    }

    /// Restriction of an extension assignment to the common variables.
    pub fn to_base(&self, a: &PartialAssignment) -> PartialAssignment {
        let mut out = PartialAssignment::empty(self.base.signature());
        for (id, v) in a.iter() {
            if let Some(b) = self.base_id(id) {
                out.set(b, v);
            }
        }
        out
    }

    pub fn contrast_to_ext(&self, c: &Contrast) -> Contrast {
        let mut entries: Vec<_> = c.entries().map(|(id, l, r)| (self.ext_id(id), l, r)).collect();
        entries.sort_by_key(|e| e.0);
        Contrast::from_sorted(entries)
    }

    /// The base-model form of an extension contrast over common variables.
    pub fn contrast_to_base(&self, c: &Contrast) -> Option<Contrast> {
        let entries: Option<Vec<_>> = c
            .entries()
            .map(|(id, l, r)| self.base_id(id).map(|b| (b, l, r)))
            .collect();
        let mut entries = entries?;
        entries.sort_by_key(|e| e.0);
        Some(Contrast::from_sorted(entries))
    }

    /// Every setting of `W`, in declared order.
    pub fn witnesses(&self) -> Vec<PartialAssignment> {
        let es = self.ext.signature();
        let radices = self.marginal.iter().map(|&w| es.range_len(w)).collect();
        MixedRadix::new(radices)
            .map(|digits| {
                let mut pa = PartialAssignment::empty(es);
                for (&w, &d) in self.marginal.iter().zip(&digits) {
                    pa.set(w, d);
                }
                pa
            })
            .collect()
    }

    /// Checks that `w` binds exactly the marginal variables.
    pub fn check_witness(&self, w: &PartialAssignment) -> Result<(), PairError> {
        let es = self.ext.signature();
        for id in es.ids() {
            let marginal = self.marginal.contains(&id);
            if marginal != w.contains(id) {
                return Err(PairError::Witness(if marginal {
                    format!("`{}` must be set", es.name(id))
                } else {
                    format!("`{}` is not a marginalized variable", es.name(id))
                }));
            }
        }
        Ok(())
    }

    /// Sum of the range sizes of the common variables.
    pub fn common_values(&self) -> usize {
        let bs = self.base.signature();
        bs.ids().map(|id| bs.range_len(id)).sum()
    }
}
