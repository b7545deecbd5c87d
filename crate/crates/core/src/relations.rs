//! Parenthood and ancestry, with and without value contrasts.
//!
//! The variable-level relations read the semantic parent sets computed when a
//! model is compiled. The value-level relations are built on forcing (see
//! [`crate::sufficiency`]): `x̄ rather than x̄′` are joint parents of `ȳ rather
//! than ȳ′` when some side assignment `z̄` makes `(z̄, x̄)` force `ȳ` and
//! `(z̄, x̄′)` force `ȳ′`, and no source variable can be dropped. Target
//! entries copied unchanged from the source are carried along; they neither
//! need forcing nor make a source variable necessary.
//!
//! Witness search runs over side assignments ordered by size, then by
//! variables, then by values, so the first certificate is reproducible.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use crate::assignment::{Context, Contrast, MixedRadix, NamedAssignment, NamedContrast, PartialAssignment};
use crate::error::AssignmentError;
use crate::model::Model;
use crate::signature::{Signature, VarId, VarKind};
use crate::sufficiency::{closure, forced_value};

/// Side assignment under which a step holds, split into its exogenous
/// (context) and endogenous parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepWitness {
    pub context: PartialAssignment,
    pub endogenous: PartialAssignment,
}

impl StepWitness {
    pub fn from_assignment(sig: &Signature, z: &PartialAssignment) -> Self {
        StepWitness {
            context: z.restrict_kind(sig, VarKind::Exogenous),
            endogenous: z.restrict_kind(sig, VarKind::Endogenous),
        }
    }

    pub fn combined(&self) -> PartialAssignment {
        self.context
            .merge(&self.endogenous)
            .expect("witness parts bind disjoint variables")
    }

    pub fn named(&self, sig: &Signature) -> NamedWitness {
        NamedWitness {
            context: self.context.named(sig),
            endogenous: self.endogenous.named(sig),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedWitness {
    pub context: NamedAssignment,
    pub endogenous: NamedAssignment,
}

/// One joint-parent step of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub source: Contrast,
    pub target: Contrast,
    pub witness: StepWitness,
}

/// Chain of joint-parent steps; each target is the next step's source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub steps: Vec<Step>,
}

impl Network {
    pub fn source(&self) -> &Contrast {
        &self.steps[0].source
    }

    pub fn target(&self) -> &Contrast {
        &self.steps.last().unwrap().target
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn named(&self, sig: &Signature) -> NamedNetwork {
        NamedNetwork(
            self.steps
                .iter()
                .map(|s| NamedStep {
                    source: s.source.named(sig),
                    target: s.target.named(sig),
                    witness: s.witness.named(sig),
                })
                .collect(),
        )
    }

    pub fn display(&self, sig: &Signature) -> String {
        let mut out = self.source().display(sig).to_string();
        for s in &self.steps {
            out.push_str(" ~> ");
            out.push_str(&s.target.display(sig).to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedStep {
    pub source: NamedContrast,
    pub target: NamedContrast,
    pub witness: NamedWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedNetwork(pub Vec<NamedStep>);

/// Certificate for a single-variable contrast step: the source and target
/// contrasts and the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentCertificate {
    pub source: Contrast,
    pub target: Contrast,
    pub witness: StepWitness,
}

/// Which network steps must start from values that actually hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ActualReading {
    /// Every step's source values hold in the actual world.
    #[default]
    EveryStep,
    /// Only the network's initial source is required to hold.
    InitialSource,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("source and target bind the same variables")]
    SameVariables,
    #[error("`{0}` is exogenous and cannot be a target")]
    ExogenousTarget(String),
    #[error("relation expects endogenous variables, `{0}` is exogenous")]
    ExogenousVariable(String),
    #[error("relation expects two distinct variables")]
    SameVariable,
    #[error("relation expects single-variable contrasts")]
    NotSingleton,
    #[error("contrast does not fit the model: {0}")]
    Assignment(#[from] AssignmentError),
}

/// How target entries copied unchanged from the source bear on minimality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Carry {
    /// A copied entry needs its source variable, unless the rest of the
    /// antecedent forces it anyway.
    #[default]
    Counted,
    /// Copied entries never make a source variable necessary.
    Ignored,
}

/// Where joint-parent witnesses are drawn from and what is held fixed.
#[derive(Debug, Clone)]
pub struct SearchSpace {
    /// Variables allowed in a witness; `None` allows all.
    pub witness_vars: Option<Vec<bool>>,
    /// Bindings added to every antecedent (a pinned marginal setting).
    pub pinned: PartialAssignment,
    /// The actual world, for actual relations; witnesses then take actual
    /// values and step sources must hold.
    pub actual: Option<Vec<usize>>,
    pub reading: ActualReading,
    /// Variables that only take values their equations can produce. An
    /// antecedent binding them must be reachable by some setting of the
    /// other variables it leaves free.
    pub determined: Option<Vec<bool>>,
    pub carry: Carry,
}

impl SearchSpace {
    pub fn potential(model: &Model) -> Self {
        SearchSpace {
            witness_vars: None,
            pinned: PartialAssignment::empty(model.signature()),
            actual: None,
            reading: ActualReading::EveryStep,
            determined: None,
            carry: Carry::Counted,
        }
    }

    pub fn actual(model: &Model, ctx: &Context) -> Self {
        SearchSpace {
            actual: Some(model.world(ctx)),
            ..Self::potential(model)
        }
    }

    fn allows(&self, id: VarId) -> bool {
        !self.pinned.contains(id) && self.witness_vars.as_ref().is_none_or(|m| m[id.0])
    }

    fn is_determined(&self, id: VarId) -> bool {
        self.determined.as_ref().is_some_and(|d| d[id.0])
    }

    /// Whether a network may pass through (or start from) `c`.
    pub fn admits_source(&self, c: &Contrast, initial: bool) -> bool {
        match &self.actual {
            None => true,
            Some(world) => {
                if !initial && self.reading == ActualReading::InitialSource {
                    return true;
                }
                c.entries().all(|(id, l, _)| world[id.0] == l)
            }
        }
    }
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            next: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let k = cur.len();
        let mut succ = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] < self.n - k + i {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                self.next = Some(succ);
                break;
            }
        }
        Some(cur)
    }
}

/// Joint-parent search over one model.
pub struct JointParents<'m> {
    model: &'m Model,
    space: SearchSpace,
    /// Position of each variable in the model's solving order.
    rank: Vec<usize>,
    realizable: RefCell<HashMap<Vec<(VarId, usize)>, bool>>,
}

impl<'m> JointParents<'m> {
    pub fn new(model: &'m Model, space: SearchSpace) -> Self {
        let mut rank = vec![0; model.signature().len()];
        for (i, v) in model.order().iter().enumerate() {
            rank[v.0] = i;
        }
        JointParents {
            model,
            space,
            rank,
            realizable: RefCell::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    /// Calls `f` on every candidate side assignment over `relevant`, in
    /// search order, until it returns `true`.
    fn for_each_witness(&self, relevant: &[VarId], mut f: impl FnMut(&PartialAssignment) -> bool) -> bool {
        let sig = self.model.signature();
        let width = sig.len();
        for k in 0..=relevant.len() {
            for combo in Combinations::new(relevant.len(), k) {
                let vars: Vec<VarId> = combo.iter().map(|&i| relevant[i]).collect();
                match &self.space.actual {
                    Some(world) => {
                        let mut z = PartialAssignment::with_len(width);
                        for &v in &vars {
                            z.set(v, world[v.0]);
                        }
                        if f(&z) {
                            return true;
                        }
                    }
                    None => {
                        let radices = vars.iter().map(|&v| sig.range_len(v)).collect();
                        for digits in MixedRadix::new(radices) {
                            let mut z = PartialAssignment::with_len(width);
                            for (&v, &d) in vars.iter().zip(&digits) {
                                z.set(v, d);
                            }
                            if f(&z) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn antecedents(&self, z: &PartialAssignment, src: &Contrast) -> (PartialAssignment, PartialAssignment) {
        let mut left = self.space.pinned.clone();
        for (id, v) in z.iter() {
            left.set(id, v);
        }
        let mut right = left.clone();
        for (id, l, r) in src.entries() {
            left.set(id, l);
            right.set(id, r);
        }
        (left, right)
    }

    /// Whether the determined variables bound in `a` can all take their
    /// bound values at once.
    fn is_realizable(&self, a: &PartialAssignment) -> bool {
        let Some(determined) = &self.space.determined else {
            return true;
        };
        let bound: Vec<VarId> = a.vars().filter(|v| determined[v.0]).collect();
        if bound.is_empty() {
            return true;
        }
        let n = a.width();
        let mut inner = vec![false; n];
        let mut frontier = Vec::new();
        let mut stack = bound.clone();
        for &b in &bound {
            inner[b.0] = true;
        }
        let mut seen = inner.clone();
        while let Some(v) = stack.pop() {
            for &p in self.model.parents(v) {
                if std::mem::replace(&mut seen[p.0], true) {
                    continue;
                }
                if determined[p.0] {
                    inner[p.0] = true;
                    stack.push(p);
                } else {
                    frontier.push(p);
                }
            }
        }
        frontier.sort();
        let key: Vec<(VarId, usize)> = bound
            .iter()
            .chain(&frontier)
            .filter_map(|&v| a.get(v).map(|x| (v, x)))
            .collect();
        if let Some(&hit) = self.realizable.borrow().get(&key) {
            return hit;
        }
        let sig = self.model.signature();
        let free: Vec<VarId> = frontier.iter().copied().filter(|&v| !a.contains(v)).collect();
        let order: Vec<VarId> = self.model.order().iter().copied().filter(|v| inner[v.0]).collect();
        let mut world = vec![0; n];
        for &v in &frontier {
            if let Some(x) = a.get(v) {
                world[v.0] = x;
            }
        }
        let radices = free.iter().map(|&v| sig.range_len(v)).collect();
        let ok = MixedRadix::new(radices).any(|digits| {
            for (&v, &d) in free.iter().zip(&digits) {
                world[v.0] = d;
            }
            for &v in &order {
                world[v.0] = self.model.evaluate(v, &world);
            }
            bound.iter().all(|&b| a.get(b) == Some(world[b.0]))
        });
        self.realizable.borrow_mut().insert(key, ok);
        ok
    }

    /// Whether `a` forces every `(y, v)` of `entries` (given in solving
    /// order). Each target is forced on its own, except that determined
    /// targets are solved and feed the targets after them.
    fn forces(&self, a: &PartialAssignment, entries: &[(VarId, usize)]) -> bool {
        let mut a = a.clone();
        for &(y, v) in entries {
            if forced_value(self.model, &a, y) != Some(v) {
                return false;
            }
            if self.space.is_determined(y) {
                a.set(y, v);
            }
        }
        true
    }

    /// Whether the determined variables can take their values in the world
    /// `a` describes once `entries` are added.
    fn realizable_with(&self, a: &PartialAssignment, entries: &[(VarId, usize)]) -> bool {
        if self.space.determined.is_none() {
            return true;
        }
        let mut a = a.clone();
        for &(y, v) in entries {
            a.set(y, v);
        }
        self.is_realizable(&a)
    }

    /// The target entries not carried over from the source, in solving
    /// order, as (left, right) entry lists.
    fn fresh(&self, src: &Contrast, tgt: &Contrast) -> (Vec<(VarId, usize)>, Vec<(VarId, usize)>) {
        let mut e: Vec<(VarId, usize, usize)> = tgt.entries().filter(|&(id, _, _)| !src.contains(id)).collect();
        e.sort_by_key(|&(id, _, _)| self.rank[id.0]);
        (e.iter().map(|&(y, l, _)| (y, l)).collect(), e.iter().map(|&(y, _, r)| (y, r)).collect())
    }

    /// Per source variable: whether dropping it breaks the forcing of the
    /// fresh entries, and whether the rest of the antecedent forces it.
    fn necessity(
        &self,
        src: &Contrast,
        left: &PartialAssignment,
        right: &PartialAssignment,
        fresh: &(Vec<(VarId, usize)>, Vec<(VarId, usize)>),
    ) -> Vec<(bool, bool)> {
        src.entries()
            .map(|(x, xl, xr)| {
                let mut l = left.clone();
                let mut r = right.clone();
                l.unset(x);
                r.unset(x);
                let breaks = !self.forces(&l, &fresh.0) || !self.forces(&r, &fresh.1);
                let self_forced = forced_value(self.model, &l, x) == Some(xl) && forced_value(self.model, &r, x) == Some(xr);
                (breaks, self_forced)
            })
            .collect()
    }

    /// Whether the fresh entries are forced, consistently with the
    /// determined variables.
    fn fresh_forced(
        &self,
        left: &PartialAssignment,
        right: &PartialAssignment,
        fresh: &(Vec<(VarId, usize)>, Vec<(VarId, usize)>),
    ) -> bool {
        self.forces(left, &fresh.0)
            && self.forces(right, &fresh.1)
            && self.realizable_with(left, &fresh.0)
            && self.realizable_with(right, &fresh.1)
    }

    /// Minimality of the source given which of its variables the target
    /// carries.
    fn minimal(&self, src: &Contrast, necessity: &[(bool, bool)], carries: impl Fn(VarId) -> bool) -> bool {
        src.vars().iter().zip(necessity).all(|(&x, &(breaks, self_forced))| {
            breaks || (self.space.carry == Carry::Counted && carries(x) && !self_forced)
        })
    }

    fn check_step(&self, src: &Contrast, tgt: &Contrast) -> Result<(), RelationError> {
        let sig = self.model.signature();
        if src.vars() == tgt.vars() {
            return Err(RelationError::SameVariables);
        }
        if let Some(&id) = tgt.vars().iter().find(|&&id| sig.is_exogenous(id)) {
            return Err(RelationError::ExogenousTarget(sig.name(id).to_string()));
        }
        Ok(())
    }

    /// Variables a witness may bind for steps out of `src` into `targets`:
    /// parents of the targets outside the source.
    fn relevant(&self, src: &Contrast, targets: &[VarId]) -> Vec<VarId> {
        let mut relevant: Vec<VarId> = targets
            .iter()
            .flat_map(|&y| self.model.parents(y).iter().copied())
            .filter(|&p| !src.contains(p) && self.space.allows(p))
            .collect();
        relevant.sort();
        relevant.dedup();
        relevant
    }

    /// First witness `z̄` for `src ⇝ tgt`, if the step holds.
    pub fn witness(&self, src: &Contrast, tgt: &Contrast) -> Result<Option<PartialAssignment>, RelationError> {
        self.check_step(src, tgt)?;
        // Shared variables must keep their values.
        for (id, l, r) in tgt.entries() {
            if let Some(p) = src.position(id) {
                if src.left_values()[p] != l || src.right_values()[p] != r {
                    return Ok(None);
                }
            }
        }
        let fresh = self.fresh(src, tgt);
        let relevant: Vec<VarId> = self
            .relevant(src, tgt.vars())
            .into_iter()
            .filter(|&p| !tgt.contains(p))
            .collect();
        let mut found = None;
        self.for_each_witness(&relevant, |z| {
            if !self.accepts(src, tgt, &fresh, z) {
                return false;
            }
            found = Some(z.clone());
            true
        });
        Ok(found)
    }

    fn accepts(
        &self,
        src: &Contrast,
        tgt: &Contrast,
        fresh: &(Vec<(VarId, usize)>, Vec<(VarId, usize)>),
        z: &PartialAssignment,
    ) -> bool {
        let (left, right) = self.antecedents(z, src);
        if !self.is_realizable(&left) || !self.is_realizable(&right) || !self.fresh_forced(&left, &right, fresh) {
            return false;
        }
        let necessity = self.necessity(src, &left, &right, fresh);
        self.minimal(src, &necessity, |x| tgt.contains(x))
    }

    /// Whether `src ⇝ tgt` holds with the given witness `z̄`, which must
    /// avoid the step's variables (and, for actual relations, hold).
    pub fn holds_with(&self, src: &Contrast, tgt: &Contrast, z: &PartialAssignment) -> Result<bool, RelationError> {
        self.check_step(src, tgt)?;
        if z.vars().any(|v| src.contains(v) || tgt.contains(v) || !self.space.allows(v)) {
            return Ok(false);
        }
        if let Some(world) = &self.space.actual {
            if !z.holds_in(world) || !self.space.admits_source(src, true) {
                return Ok(false);
            }
        }
        for (id, l, r) in tgt.entries() {
            if let Some(p) = src.position(id) {
                if src.left_values()[p] != l || src.right_values()[p] != r {
                    return Ok(false);
                }
            }
        }
        Ok(self.accepts(src, tgt, &self.fresh(src, tgt), z))
    }

    /// Endogenous variables downstream of `src`, in solving order.
    fn downstream(&self, src: &Contrast) -> Vec<VarId> {
        let n = self.model.signature().len();
        let mut seen = vec![false; n];
        let mut stack: Vec<VarId> = src.vars().to_vec();
        while let Some(v) = stack.pop() {
            for &c in self.model.children(v) {
                if !std::mem::replace(&mut seen[c.0], true) {
                    stack.push(c);
                }
            }
        }
        let mut out: Vec<VarId> = (0..n).map(VarId).filter(|v| seen[v.0] && !src.contains(*v)).collect();
        out.sort_by_key(|v| self.rank[v.0]);
        out
    }

    /// Every target `tgt` with `src ⇝ tgt`, in first-found order.
    pub fn successors(&self, src: &Contrast) -> Vec<Contrast> {
        let sig = self.model.signature();
        let downstream = self.downstream(src);
        let relevant = self.relevant(src, &downstream);
        let carried: Vec<(VarId, usize, usize)> = src.entries().filter(|&(id, _, _)| !sig.is_exogenous(id)).collect();

        let mut seen_shapes: HashSet<(Vec<(VarId, usize, usize)>, Vec<(bool, bool)>)> = HashSet::new();
        let mut seen: HashSet<Contrast> = HashSet::new();
        let mut out = Vec::new();
        self.for_each_witness(&relevant, |z| {
            let (left, right) = self.antecedents(z, src);
            if !self.is_realizable(&left) || !self.is_realizable(&right) {
                return false;
            }
            // Only variables that both sides force, to different values,
            // can enter a target.
            let cl = closure(self.model, &left);
            let cr = closure(self.model, &right);
            let cand: Vec<(VarId, usize, usize)> = downstream
                .iter()
                .filter(|&&y| !z.contains(y))
                .filter_map(|&y| match (cl.get(y), cr.get(y)) {
                    (Some(l), Some(r)) if l != r => Some((y, l, r)),
                    _ => None,
                })
                .collect();
            if cand.is_empty() || cand.len() > 24 {
                return false;
            }
            for mask in 1u32..(1u32 << cand.len()) {
                let pick: Vec<(VarId, usize, usize)> = cand
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << j) != 0)
                    .map(|(_, e)| *e)
                    .collect();
                let fresh = (
                    pick.iter().map(|&(y, l, _)| (y, l)).collect(),
                    pick.iter().map(|&(y, _, r)| (y, r)).collect(),
                );
                if !self.fresh_forced(&left, &right, &fresh) {
                    continue;
                }
                let necessity = self.necessity(src, &left, &right, &fresh);
                let key = (pick.clone(), necessity.clone());
                if !seen_shapes.insert(key) {
                    continue;
                }
                for cmask in 0u32..(1u32 << carried.len()) {
                    let carries = |x: VarId| carried.iter().position(|e| e.0 == x).is_some_and(|j| cmask & (1 << j) != 0);
                    if !self.minimal(src, &necessity, carries) {
                        continue;
                    }
                    let mut entries = pick.clone();
                    entries.extend(
                        carried
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| cmask & (1 << j) != 0)
                            .map(|(_, e)| *e),
                    );
                    entries.sort_by_key(|e| e.0);
                    let tgt = Contrast::from_sorted(entries);
                    if tgt.vars() != src.vars() && seen.insert(tgt.clone()) {
                        out.push(tgt);
                    }
                }
            }
            false
        });
        out
    }

    /// Breadth-first search for a network from `src` to `tgt`.
    pub fn network(&self, src: &Contrast, tgt: &Contrast) -> Result<Option<Network>, RelationError> {
        self.check_step(src, tgt)?;
        if !self.space.admits_source(src, true) {
            return Ok(None);
        }
        let mut parent: HashMap<Contrast, Contrast> = HashMap::new();
        let mut queue = VecDeque::from([src.clone()]);
        let mut visited: HashSet<Contrast> = HashSet::from([src.clone()]);
        while let Some(node) = queue.pop_front() {
            if node != *src && !self.space.admits_source(&node, false) {
                continue;
            }
            for next in self.successors(&node) {
                if !visited.insert(next.clone()) {
                    continue;
                }
                parent.insert(next.clone(), node.clone());
                if next == *tgt {
                    return Ok(Some(self.rebuild(src, tgt, &parent)));
                }
                queue.push_back(next);
            }
        }
        Ok(None)
    }

    fn rebuild(&self, src: &Contrast, tgt: &Contrast, parent: &HashMap<Contrast, Contrast>) -> Network {
        let mut path = vec![tgt.clone()];
        while path.last().unwrap() != src {
            path.push(parent[path.last().unwrap()].clone());
        }
        path.reverse();
        let sig = self.model.signature();
        let steps = path
            .windows(2)
            .map(|w| {
                let z = self
                    .witness(&w[0], &w[1])
                    .ok()
                    .flatten()
                    .expect("every successor has a witness");
                Step {
                    source: w[0].clone(),
                    target: w[1].clone(),
                    witness: StepWitness::from_assignment(sig, &z),
                }
            })
            .collect();
        Network { steps }
    }
}

/// The joint-parent graph reachable from a set of sources, with reachability
/// summarized over a fixed universe of target contrasts.
pub struct AncestryGraph {
    nodes: Vec<Contrast>,
    index: HashMap<Contrast, usize>,
    edges: Vec<Vec<usize>>,
}

impl AncestryGraph {
    /// Explores everything reachable from `sources`. Nodes that may not
    /// start a step under `search` are kept as sinks.
    pub fn build(search: &JointParents<'_>, sources: &[Contrast]) -> Self {
        let mut g = AncestryGraph {
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        };
        let mut queue = VecDeque::new();
        for s in sources {
            let i = g.intern(s);
            queue.push_back(i);
        }
        let mut expanded = vec![false; g.nodes.len()];
        while let Some(i) = queue.pop_front() {
            if expanded.get(i).copied().unwrap_or(false) {
                continue;
            }
            if expanded.len() <= i {
                expanded.resize(i + 1, false);
            }
            expanded[i] = true;
            let node = g.nodes[i].clone();
            if !search.space().admits_source(&node, false) {
                continue;
            }
            let succ: Vec<usize> = search.successors(&node).iter().map(|t| g.intern(t)).collect();
            for &j in &succ {
                if j >= expanded.len() || !expanded[j] {
                    queue.push_back(j);
                }
            }
            g.edges[i] = succ;
        }
        g
    }

    fn intern(&mut self, c: &Contrast) -> usize {
        if let Some(&i) = self.index.get(c) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(c.clone());
        self.index.insert(c.clone(), i);
        self.edges.push(Vec::new());
        i
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, c: &Contrast) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// For every node, the set of universe positions reachable by one or
    /// more steps. `position` maps a node to its universe slot, if any.
    pub fn reach(&self, universe: usize, position: impl Fn(&Contrast) -> Option<usize>) -> Vec<FixedBitSet> {
        let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(self.nodes.len(), 0);
        for _ in &self.nodes {
            graph.add_node(());
        }
        for (i, succ) in self.edges.iter().enumerate() {
            for &j in succ {
                graph.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
            }
        }
        let slot: Vec<Option<usize>> = self.nodes.iter().map(&position).collect();
        // Tarjan yields components in reverse topological order, so every
        // successor component is finished before its predecessors.
        let sccs = tarjan_scc(&graph);
        let mut comp_of = vec![0; self.nodes.len()];
        for (c, members) in sccs.iter().enumerate() {
            for m in members {
                comp_of[m.index()] = c;
            }
        }
        let mut comp_reach: Vec<FixedBitSet> = Vec::with_capacity(sccs.len());
        for (c, members) in sccs.iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(universe);
            for m in members {
                for &j in &self.edges[m.index()] {
                    if let Some(s) = slot[j] {
                        bits.insert(s);
                    }
                    let cj = comp_of[j];
                    if cj != c {
                        bits.union_with(&comp_reach[cj]);
                    }
                }
            }
            comp_reach.push(bits);
        }
        (0..self.nodes.len()).map(|i| comp_reach[comp_of[i]].clone()).collect()
    }
}

fn endogenous_pair(model: &Model, x: VarId, y: VarId) -> Result<(), RelationError> {
    let sig = model.signature();
    for id in [x, y] {
        if sig.is_exogenous(id) {
            return Err(RelationError::ExogenousVariable(sig.name(id).to_string()));
        }
    }
    if x == y {
        return Err(RelationError::SameVariable);
    }
    Ok(())
}

/// Full side assignment for a singleton step into `y`: parents of `y` take
/// `parent_values`, every other variable outside `{x, y}` its first value.
fn full_witness(model: &Model, x: VarId, y: VarId, fill: impl Fn(VarId) -> usize) -> StepWitness {
    let sig = model.signature();
    let mut z = PartialAssignment::empty(sig);
    for id in sig.endogenous().filter(|&id| id != x && id != y) {
        z.set(id, fill(id));
    }
    for &p in model.parents(y) {
        if sig.is_exogenous(p) {
            z.set(p, fill(p));
        }
    }
    StepWitness::from_assignment(sig, &z)
}

/// `X` is a parent of `Y`: some setting of everything else lets a change in
/// `X` change `Y`. The certificate reports the change with the later value
/// first.
pub fn is_parent(model: &Model, x: VarId, y: VarId) -> Result<Option<ParentCertificate>, RelationError> {
    endogenous_pair(model, x, y)?;
    if !model.parents(y).contains(&x) {
        return Ok(None);
    }
    let sig = model.signature();
    let others: Vec<VarId> = model.parents(y).iter().copied().filter(|&p| p != x).collect();
    let radices = others.iter().map(|&p| sig.range_len(p)).collect();
    let mut world = vec![0; sig.len()];
    for digits in MixedRadix::new(radices) {
        for (&p, &d) in others.iter().zip(&digits) {
            world[p.0] = d;
        }
        for lo in 0..sig.range_len(x) {
            for hi in lo + 1..sig.range_len(x) {
                world[x.0] = lo;
                let y_lo = model.evaluate(y, &world);
                world[x.0] = hi;
                let y_hi = model.evaluate(y, &world);
                if y_lo != y_hi {
                    let w = world.clone();
                    return Ok(Some(ParentCertificate {
                        source: Contrast::from_sorted(vec![(x, hi, lo)]),
                        target: Contrast::from_sorted(vec![(y, y_hi, y_lo)]),
                        witness: full_witness(model, x, y, |id| w[id.0]),
                    }));
                }
            }
        }
    }
    unreachable!("a semantic parent always has a distinguishing setting")
}

/// `X` is an ancestor of `Y`, with a shortest directed path as certificate.
pub fn is_ancestor(model: &Model, x: VarId, y: VarId) -> Result<Option<Vec<VarId>>, RelationError> {
    endogenous_pair(model, x, y)?;
    let n = model.signature().len();
    let mut prev: Vec<Option<VarId>> = vec![None; n];
    let mut queue = VecDeque::from([x]);
    let mut seen = vec![false; n];
    seen[x.0] = true;
    while let Some(v) = queue.pop_front() {
        for &c in model.children(v) {
            if seen[c.0] {
                continue;
            }
            seen[c.0] = true;
            prev[c.0] = Some(v);
            if c == y {
                let mut path = vec![y];
                while let Some(p) = prev[path.last().unwrap().0] {
                    path.push(p);
                }
                path.reverse();
                return Ok(Some(path));
            }
            queue.push_back(c);
        }
    }
    Ok(None)
}

fn singleton(c: &Contrast) -> Result<(VarId, usize, usize), RelationError> {
    if c.len() != 1 {
        return Err(RelationError::NotSingleton);
    }
    Ok(c.entries().next().unwrap())
}

/// `(x, x′) ⇝ (y, y′)`: some full side assignment `(ū, z̄)` makes `Y = y`
/// under `X = x` and `Y = y′` under `X = x′`.
pub fn potential_parent_contrast(
    model: &Model,
    src: &Contrast,
    tgt: &Contrast,
) -> Result<Option<StepWitness>, RelationError> {
    let (x, xl, xr) = singleton(src)?;
    let (y, yl, yr) = singleton(tgt)?;
    endogenous_pair(model, x, y)?;
    let sig = model.signature();
    let others: Vec<VarId> = model.parents(y).iter().copied().filter(|&p| p != x).collect();
    let radices = others.iter().map(|&p| sig.range_len(p)).collect();
    let mut world = vec![0; sig.len()];
    for digits in MixedRadix::new(radices) {
        for (&p, &d) in others.iter().zip(&digits) {
            world[p.0] = d;
        }
        world[x.0] = xl;
        if model.evaluate(y, &world) != yl {
            continue;
        }
        world[x.0] = xr;
        if model.evaluate(y, &world) == yr {
            let w = world.clone();
            return Ok(Some(full_witness(model, x, y, |id| w[id.0])));
        }
    }
    Ok(None)
}

/// `x̄ rather than x̄′` are potential joint parents of `ȳ rather than ȳ′`.
pub fn potential_joint_parents(
    model: &Model,
    src: &Contrast,
    tgt: &Contrast,
) -> Result<Option<StepWitness>, RelationError> {
    let jp = JointParents::new(model, SearchSpace::potential(model));
    Ok(jp
        .witness(src, tgt)?
        .map(|z| StepWitness::from_assignment(model.signature(), &z)))
}

/// `x̄ rather than x̄′` are potential joint ancestors of `ȳ rather than ȳ′`.
pub fn potential_joint_ancestors(
    model: &Model,
    src: &Contrast,
    tgt: &Contrast,
) -> Result<Option<Network>, RelationError> {
    JointParents::new(model, SearchSpace::potential(model)).network(src, tgt)
}

/// `(x, x′) ⇝ᵘ (y, y′)`: the step holds with the actual values of every
/// other endogenous variable as witness, and `X = x` actually holds.
pub fn actual_parent(
    model: &Model,
    ctx: &Context,
    src: &Contrast,
    tgt: &Contrast,
) -> Result<Option<StepWitness>, RelationError> {
    let (x, xl, xr) = singleton(src)?;
    let (y, yl, yr) = singleton(tgt)?;
    endogenous_pair(model, x, y)?;
    let mut world = model.world(ctx);
    if world[x.0] != xl || model.evaluate(y, &world) != yl {
        return Ok(None);
    }
    world[x.0] = xr;
    if model.evaluate(y, &world) != yr {
        return Ok(None);
    }
    world[x.0] = xl;
    Ok(Some(full_witness(model, x, y, |id| world[id.0])))
}

/// Actual joint ancestry in `(M, ū)`: a network whose witnesses hold
/// actually and whose step sources hold as `reading` requires.
pub fn actual_joint_ancestors(
    model: &Model,
    ctx: &Context,
    src: &Contrast,
    tgt: &Contrast,
    reading: ActualReading,
) -> Result<Option<Network>, RelationError> {
    let space = SearchSpace {
        reading,
        ..SearchSpace::actual(model, ctx)
    };
    JointParents::new(model, space).network(src, tgt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{BinOp, Expr};
    use crate::model::ModelDef;
    use crate::value::Value;

    fn bin() -> Vec<Value> {
        vec![0.into(), 1.into()]
    }

    fn c(m: &Model, entries: &[(&str, i64, i64)]) -> Contrast {
        let sig = m.signature();
        Contrast::new(
            entries
                .iter()
                .map(|(n, l, r)| {
                    let id = sig.lookup(n).unwrap();
                    let v = sig.var(id);
                    (id, v.value_index(&(*l).into()).unwrap(), v.value_index(&(*r).into()).unwrap())
                })
                .collect(),
        )
        .unwrap()
    }

    /// C = U_C, A = C, B = C, E = A + B with E ∈ {0,1,2}.
    fn split_model() -> Model {
        let mut d = ModelDef::new("Mprime");
        let u = d.add_exogenous("U_C", bin()).unwrap();
        let cc = d.add_endogenous("C", bin()).unwrap();
        let a = d.add_endogenous("A", bin()).unwrap();
        let b = d.add_endogenous("B", bin()).unwrap();
        let e = d.add_endogenous("E", vec![0.into(), 1.into(), 2.into()]).unwrap();
        d.set_equation(cc, Expr::var(u));
        d.set_equation(a, Expr::var(cc));
        d.set_equation(b, Expr::var(cc));
        d.set_equation(e, Expr::bin(BinOp::Add, Expr::var(a), Expr::var(b)));
        d.compile().unwrap()
    }

    #[test]
    fn determined_variables_only_take_reachable_values() {
        // With A and B tied to C, E=1 needs A and B to disagree.
        let m = split_model();
        let sig = m.signature();
        let src = c(&m, &[("C", 0, 1)]);
        let tgt = c(&m, &[("E", 1, 2)]);
        let free = JointParents::new(&m, SearchSpace::potential(&m));
        assert!(free.network(&src, &tgt).unwrap().is_some());
        let mut mask = vec![false; sig.len()];
        mask[sig.lookup("A").unwrap().0] = true;
        mask[sig.lookup("B").unwrap().0] = true;
        let held = JointParents::new(
            &m,
            SearchSpace {
                determined: Some(mask),
                ..SearchSpace::potential(&m)
            },
        );
        assert!(held.network(&src, &tgt).unwrap().is_none());
        assert!(held.network(&src, &c(&m, &[("E", 0, 2)])).unwrap().is_some());
    }

    #[test]
    fn carried_entries_can_make_a_source_necessary() {
        // Y = A; B rides along into the target only when carries count.
        let mut d = ModelDef::new("K");
        let a = d.add_endogenous("A", bin()).unwrap();
        let b = d.add_endogenous("B", bin()).unwrap();
        let y = d.add_endogenous("Y", bin()).unwrap();
        d.set_equation(a, Expr::int(0));
        d.set_equation(b, Expr::int(0));
        d.set_equation(y, Expr::var(a));
        let m = d.compile().unwrap();
        let src = c(&m, &[("A", 1, 0), ("B", 1, 0)]);
        let tgt = c(&m, &[("B", 1, 0), ("Y", 1, 0)]);
        let counted = JointParents::new(&m, SearchSpace::potential(&m));
        assert!(counted.witness(&src, &tgt).unwrap().is_some());
        let ignored = JointParents::new(
            &m,
            SearchSpace {
                carry: Carry::Ignored,
                ..SearchSpace::potential(&m)
            },
        );
        assert!(ignored.witness(&src, &tgt).unwrap().is_none());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn split_paths_join_in_one_step() {
        let m = split_model();
        let src = c(&m, &[("C", 1, 0)]);
        let mid = c(&m, &[("A", 1, 0), ("B", 1, 0)]);
        let tgt = c(&m, &[("E", 2, 0)]);
        assert!(potential_joint_parents(&m, &src, &mid).unwrap().is_some());
        assert!(potential_joint_parents(&m, &mid, &tgt).unwrap().is_some());
        assert!(potential_parent_contrast(&m, &src, &tgt).unwrap().is_none());
        let net = potential_joint_ancestors(&m, &src, &tgt).unwrap().unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net.steps[0].target, mid);
    }

    #[test]
    fn redundant_sources_are_not_joint_parents() {
        let mut d = ModelDef::new("R");
        let a = d.add_endogenous("A", bin()).unwrap();
        let _b = d.add_endogenous("B", bin()).unwrap();
        let y = d.add_endogenous("Y", bin()).unwrap();
        d.set_equation(a, Expr::int(0));
        d.set_equation(_b, Expr::int(0));
        d.set_equation(y, Expr::var(a));
        let m = d.compile().unwrap();
        let src = c(&m, &[("A", 1, 0), ("B", 1, 0)]);
        assert!(potential_joint_parents(&m, &src, &c(&m, &[("Y", 1, 0)])).unwrap().is_none());
        assert!(potential_joint_parents(&m, &c(&m, &[("A", 1, 0)]), &c(&m, &[("Y", 1, 0)]))
            .unwrap()
            .is_some());
    }

    #[test]
    fn successors_agree_with_targeted_search() {
        let m = split_model();
        let jp = JointParents::new(&m, SearchSpace::potential(&m));
        let src = c(&m, &[("C", 1, 0)]);
        let succ: HashSet<Contrast> = jp.successors(&src).into_iter().collect();
        assert!(succ.contains(&c(&m, &[("A", 1, 0), ("B", 1, 0)])));
        assert!(succ.contains(&c(&m, &[("A", 1, 0)])));
        for t in &succ {
            assert!(jp.witness(&src, t).unwrap().is_some(), "{}", t.display(m.signature()));
        }
    }

    #[test]
    fn parent_and_ancestor() {
        let m = split_model();
        let sig = m.signature();
        let id = |n| sig.lookup(n).unwrap();
        let cert = is_parent(&m, id("A"), id("E")).unwrap().unwrap();
        assert_eq!(cert.source.display(sig).to_string(), "(1_A; 0_A)");
        assert!(is_parent(&m, id("C"), id("E")).unwrap().is_none());
        assert_eq!(is_ancestor(&m, id("C"), id("E")).unwrap().unwrap(), vec![id("C"), id("A"), id("E")]);
        assert!(is_ancestor(&m, id("E"), id("C")).unwrap().is_none());
        assert!(is_parent(&m, id("E"), id("E")).is_err());
    }

    #[test]
    fn actual_relations_need_actual_values() {
        let m = split_model();
        let sig = m.signature();
        let one = Context::new(sig, PartialAssignment::empty(sig).with(sig.lookup("U_C").unwrap(), 1)).unwrap();
        let zero = Context::new(sig, PartialAssignment::empty(sig).with(sig.lookup("U_C").unwrap(), 0)).unwrap();
        let src = c(&m, &[("A", 1, 0)]);
        let tgt = c(&m, &[("E", 2, 1)]);
        assert!(actual_parent(&m, &one, &src, &tgt).unwrap().is_some());
        assert!(actual_parent(&m, &zero, &src, &tgt).unwrap().is_none());
        let csrc = c(&m, &[("C", 1, 0)]);
        let etgt = c(&m, &[("E", 2, 0)]);
        for reading in [ActualReading::EveryStep, ActualReading::InitialSource] {
            assert!(actual_joint_ancestors(&m, &one, &csrc, &etgt, reading).unwrap().is_some());
            assert!(actual_joint_ancestors(&m, &zero, &csrc, &etgt, reading).unwrap().is_none());
        }
    }

    #[test]
    fn reach_sets_follow_edges_through_cycles() {
        let m = split_model();
        let jp = JointParents::new(&m, SearchSpace::potential(&m));
        let src = c(&m, &[("C", 1, 0)]);
        let g = AncestryGraph::build(&jp, std::slice::from_ref(&src));
        let tgt = c(&m, &[("E", 2, 0)]);
        let reach = g.reach(1, |n| (*n == tgt).then_some(0));
        assert!(reach[g.node(&src).unwrap()].contains(0));
        assert!(!reach[g.node(&tgt).unwrap()].contains(0));
    }
}
