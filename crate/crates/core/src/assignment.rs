use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::AssignmentError;
use crate::signature::{Signature, VarId, VarKind};
use crate::value::Value;

/// Values for a subset of a signature's variables, stored densely by [`VarId`]
/// as indices into each variable's range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    slots: Vec<Option<usize>>,
}

impl PartialAssignment {
    pub fn empty(sig: &Signature) -> Self {
        Self::with_len(sig.len())
    }

    pub fn with_len(n: usize) -> Self {
        PartialAssignment {
            slots: vec![None; n],
        }
    }

    /// Total assignment from a full world of value indices.
    pub fn from_world(world: &[usize]) -> Self {
        PartialAssignment {
            slots: world.iter().map(|&v| Some(v)).collect(),
        }
    }

    /// Builds an assignment from `(name, value)` pairs, checking names, ranges
    /// and duplicate bindings.
    pub fn from_named<'a, I>(sig: &Signature, pairs: I) -> Result<Self, AssignmentError>
    where
        I: IntoIterator<Item = (&'a str, Value)>,
    {
        let mut out = Self::empty(sig);
        for (name, value) in pairs {
            let id = sig
                .lookup(name)
                .ok_or_else(|| AssignmentError::UnknownVariable(name.to_string()))?;
            let idx = sig
                .var(id)
                .value_index(&value)
                .ok_or_else(|| AssignmentError::OutOfRange {
                    variable: name.to_string(),
                    value: value.clone(),
                })?;
            if out.get(id).is_some() {
                return Err(AssignmentError::DuplicateBinding(name.to_string()));
            }
            out.set(id, idx);
        }
        Ok(out)
    }

    pub fn width(&self) -> usize {
        self.slots.len()
    }

    pub fn get(&self, id: VarId) -> Option<usize> {
        self.slots[id.0]
    }

    pub fn contains(&self, id: VarId) -> bool {
        self.slots[id.0].is_some()
    }

    pub fn set(&mut self, id: VarId, value: usize) {
        self.slots[id.0] = Some(value);
    }

    pub fn unset(&mut self, id: VarId) {
        self.slots[id.0] = None;
    }

    pub fn with(mut self, id: VarId, value: usize) -> Self {
        self.set(id, value);
        self
    }

    /// Number of bound variables.
    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|v| (VarId(i), v)))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.iter().map(|(id, _)| id)
    }

    pub fn slots(&self) -> &[Option<usize>] {
        &self.slots
    }

    /// True when no variable is bound to different values by the two.
    pub fn is_consistent_with(&self, other: &PartialAssignment) -> bool {
        self.slots
            .iter()
            .zip(&other.slots)
            .all(|(a, b)| match (a, b) {
                (Some(x), Some(y)) => x == y,
                _ => true,
            })
    }

    /// Union of two consistent assignments; `None` on conflict.
    pub fn merge(&self, other: &PartialAssignment) -> Option<PartialAssignment> {
        let mut out = self.clone();
        for (id, v) in other.iter() {
            match out.get(id) {
                Some(w) if w != v => return None,
                _ => out.set(id, v),
            }
        }
        Some(out)
    }

    /// True when every binding of `self` also appears in `other`.
    pub fn is_subset_of(&self, other: &PartialAssignment) -> bool {
        self.iter().all(|(id, v)| other.get(id) == Some(v))
    }

    /// True when every binding matches the given total world.
    pub fn holds_in(&self, world: &[usize]) -> bool {
        self.iter().all(|(id, v)| world[id.0] == v)
    }

    pub fn restrict(&self, mut keep: impl FnMut(VarId) -> bool) -> PartialAssignment {
        PartialAssignment {
            slots: self
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| if keep(VarId(i)) { *s } else { None })
                .collect(),
        }
    }

    pub fn restrict_kind(&self, sig: &Signature, kind: VarKind) -> PartialAssignment {
        self.restrict(|id| sig.kind(id) == kind)
    }

    pub fn named(&self, sig: &Signature) -> NamedAssignment {
        NamedAssignment(
            self.iter()
                .map(|(id, v)| (sig.name(id).to_string(), sig.value(id, v).clone()))
                .collect(),
        )
    }

    /// `A=1, C=0` style rendering.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> AssignmentDisplay<'a> {
        AssignmentDisplay {
            assignment: self,
            sig,
            sep: ", ",
        }
    }

    pub fn display_sep<'a>(&'a self, sig: &'a Signature, sep: &'a str) -> AssignmentDisplay<'a> {
        AssignmentDisplay {
            assignment: self,
            sig,
            sep,
        }
    }
}

pub struct AssignmentDisplay<'a> {
    assignment: &'a PartialAssignment,
    sig: &'a Signature,
    sep: &'a str,
}

impl fmt::Display for AssignmentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (id, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(self.sep)?;
            }
            write!(f, "{}={}", self.sig.name(id), self.sig.value(id, v))?;
        }
        Ok(())
    }
}

/// A total assignment to the exogenous variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Context(PartialAssignment);

impl Context {
    pub fn new(sig: &Signature, values: PartialAssignment) -> Result<Self, AssignmentError> {
        for id in sig.ids() {
            match (sig.is_exogenous(id), values.get(id)) {
                (true, None) => {
                    return Err(AssignmentError::MissingContext(sig.name(id).to_string()))
                }
                (false, Some(_)) => {
                    return Err(AssignmentError::EndogenousInContext(
                        sig.name(id).to_string(),
                    ))
                }
                _ => {}
            }
        }
        Ok(Context(values))
    }

    pub fn assignment(&self) -> &PartialAssignment {
        &self.0
    }

    pub fn get(&self, id: VarId) -> Option<usize> {
        self.0.get(id)
    }

    /// Every context of the signature, in declared (lexicographic) order.
    pub fn enumerate(sig: &Signature) -> Vec<Context> {
        let exo: Vec<VarId> = sig.exogenous().collect();
        let radices: Vec<usize> = exo.iter().map(|&id| sig.range_len(id)).collect();
        MixedRadix::new(radices)
            .map(|digits| {
                let mut pa = PartialAssignment::empty(sig);
                for (&id, &d) in exo.iter().zip(&digits) {
                    pa.set(id, d);
                }
                Context(pa)
            })
            .collect()
    }
}

/// `x̄ rather than x̄′`: two assignments over the same variables that differ at
/// every coordinate. Variables are kept sorted by declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Contrast {
    vars: Vec<VarId>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Contrast {
    pub fn new(entries: Vec<(VarId, usize, usize)>) -> Result<Self, AssignmentError> {
        let mut entries = entries;
        entries.sort_by_key(|e| e.0);
        if entries.is_empty() {
            return Err(AssignmentError::EmptyContrast);
        }
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(AssignmentError::DuplicateBinding(w[0].0.to_string()));
            }
        }
        if let Some(e) = entries.iter().find(|e| e.1 == e.2) {
            return Err(AssignmentError::OverlappingContrast(e.0.to_string()));
        }
        Ok(Self::from_sorted(entries))
    }

    pub(crate) fn from_sorted(entries: Vec<(VarId, usize, usize)>) -> Self {
        Contrast {
            vars: entries.iter().map(|e| e.0).collect(),
            left: entries.iter().map(|e| e.1).collect(),
            right: entries.iter().map(|e| e.2).collect(),
        }
    }

    pub fn singleton(var: VarId, left: usize, right: usize) -> Result<Self, AssignmentError> {
        Self::new(vec![(var, left, right)])
    }

    /// Pairs up two assignments over the same variables.
    pub fn from_assignments(
        left: &PartialAssignment,
        right: &PartialAssignment,
    ) -> Result<Self, AssignmentError> {
        let lv: Vec<VarId> = left.vars().collect();
        let rv: Vec<VarId> = right.vars().collect();
        if lv != rv {
            return Err(AssignmentError::MismatchedContrast);
        }
        Self::new(
            lv.into_iter()
                .map(|id| (id, left.get(id).unwrap(), right.get(id).unwrap()))
                .collect(),
        )
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn left_values(&self) -> &[usize] {
        &self.left
    }

    pub fn right_values(&self) -> &[usize] {
        &self.right
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (VarId, usize, usize)> + '_ {
        (0..self.vars.len()).map(|i| (self.vars[i], self.left[i], self.right[i]))
    }

    pub fn contains(&self, id: VarId) -> bool {
        self.vars.binary_search(&id).is_ok()
    }

    pub fn position(&self, id: VarId) -> Option<usize> {
        self.vars.binary_search(&id).ok()
    }

    pub fn left(&self, width: usize) -> PartialAssignment {
        let mut pa = PartialAssignment::with_len(width);
        for (id, l, _) in self.entries() {
            pa.set(id, l);
        }
        pa
    }

    pub fn right(&self, width: usize) -> PartialAssignment {
        let mut pa = PartialAssignment::with_len(width);
        for (id, _, r) in self.entries() {
            pa.set(id, r);
        }
        pa
    }

    /// `(x̄′, x̄)` for `(x̄, x̄′)`.
    pub fn swapped(&self) -> Contrast {
        Contrast {
            vars: self.vars.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn same_vars(&self, other: &Contrast) -> bool {
        self.vars == other.vars
    }

    pub fn named(&self, sig: &Signature) -> NamedContrast {
        NamedContrast {
            left: self.left(sig.len()).named(sig),
            right: self.right(sig.len()).named(sig),
        }
    }

    /// `(1_A,1_B; 0_A,0_B)` rendering.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> ContrastDisplay<'a> {
        ContrastDisplay {
            contrast: self,
            sig,
        }
    }
}

pub struct ContrastDisplay<'a> {
    contrast: &'a Contrast,
    sig: &'a Signature,
}

impl fmt::Display for ContrastDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, vals: &[usize]| -> fmt::Result {
            for (i, (&id, &v)) in self.contrast.vars.iter().zip(vals).enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}_{}", self.sig.value(id, v), self.sig.name(id))?;
            }
            Ok(())
        };
        f.write_str("(")?;
        side(f, &self.contrast.left)?;
        f.write_str("; ")?;
        side(f, &self.contrast.right)?;
        f.write_str(")")
    }
}

/// Model-independent form of an assignment, keyed by variable name and kept
/// in declaration order. Serializes as a JSON object in that order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NamedAssignment(pub Vec<(String, Value)>);

impl NamedAssignment {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn resolve(&self, sig: &Signature) -> Result<PartialAssignment, AssignmentError> {
        PartialAssignment::from_named(sig, self.0.iter().map(|(n, v)| (n.as_str(), v.clone())))
    }
}

impl fmt::Display for NamedAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for NamedAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (n, v) in &self.0 {
            map.serialize_entry(n, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedContrast {
    pub left: NamedAssignment,
    pub right: NamedAssignment,
}

impl NamedContrast {
    pub fn resolve(&self, sig: &Signature) -> Result<Contrast, AssignmentError> {
        Contrast::from_assignments(&self.left.resolve(sig)?, &self.right.resolve(sig)?)
    }
}

impl fmt::Display for NamedContrast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs {}", self.left, self.right)
    }
}

impl Serialize for NamedContrast {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Contrast", 2)?;
        s.serialize_field("left", &self.left)?;
        s.serialize_field("right", &self.right)?;
        s.end()
    }
}

/// Odometer over mixed-radix digit vectors; the last digit moves fastest.
/// An empty radix list yields exactly one (empty) tuple.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        let next = if radices.iter().any(|&r| r == 0) {
            None
        } else {
            Some(vec![0; radices.len()])
        };
        MixedRadix { radices, next }
    }

    pub fn count(radices: &[usize]) -> u128 {
        radices.iter().map(|&r| r as u128).product()
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.radices[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add("U", VarKind::Exogenous, vec![0.into(), 1.into()]).unwrap();
        s.add("A", VarKind::Endogenous, vec![0.into(), 1.into()]).unwrap();
        s.add("B", VarKind::Endogenous, vec![0.into(), 1.into(), 2.into()])
            .unwrap();
        s
    }

    #[test]
    fn mixed_radix_counts_and_orders() {
        let all: Vec<_> = MixedRadix::new(vec![2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[5], vec![1, 2]);
        assert_eq!(MixedRadix::new(vec![]).count(), 1);
        assert_eq!(MixedRadix::new(vec![2, 0]).count(), 0);
    }

    #[test]
    fn contrast_rejects_equal_coordinates() {
        let a = VarId(1);
        assert!(matches!(
            Contrast::singleton(a, 1, 1),
            Err(AssignmentError::OverlappingContrast(_))
        ));
        assert!(Contrast::new(vec![]).is_err());
        let c = Contrast::new(vec![(VarId(2), 0, 2), (a, 1, 0)]).unwrap();
        assert_eq!(c.vars(), &[a, VarId(2)]);
        assert_eq!(c.swapped().left_values(), &[0, 2]);
    }

    #[test]
    fn named_round_trip_and_errors() {
        let s = sig();
        let pa = PartialAssignment::from_named(&s, [("B", 2.into()), ("U", 1.into())]).unwrap();
        assert_eq!(pa.display(&s).to_string(), "U=1, B=2");
        assert_eq!(pa.named(&s).resolve(&s).unwrap(), pa);
        assert!(matches!(
            PartialAssignment::from_named(&s, [("A", 2.into())]),
            Err(AssignmentError::OutOfRange { .. })
        ));
        assert!(matches!(
            PartialAssignment::from_named(&s, [("Q", 0.into())]),
            Err(AssignmentError::UnknownVariable(_))
        ));
    }

    #[test]
    fn context_requires_exactly_the_exogenous_variables() {
        let s = sig();
        assert!(Context::new(&s, PartialAssignment::empty(&s)).is_err());
        let bad = PartialAssignment::empty(&s).with(VarId(0), 0).with(VarId(1), 0);
        assert!(Context::new(&s, bad).is_err());
        assert_eq!(Context::enumerate(&s).len(), 2);
    }

    #[test]
    fn merge_detects_conflicts() {
        let s = sig();
        let a = PartialAssignment::empty(&s).with(VarId(1), 0);
        let b = PartialAssignment::empty(&s).with(VarId(1), 1);
        assert!(a.merge(&b).is_none());
        let c = PartialAssignment::empty(&s).with(VarId(2), 1);
        assert_eq!(a.merge(&c).unwrap().len(), 2);
    }
}
