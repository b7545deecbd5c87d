use std::collections::HashMap;
use std::fmt;

use crate::error::SignatureError;
use crate::value::Value;

/// Index of a variable within its signature (declaration order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Exogenous,
    Endogenous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub range: Vec<Value>,
}

impl Variable {
    pub fn is_exogenous(&self) -> bool {
        self.kind == VarKind::Exogenous
    }

    pub fn value_index(&self, value: &Value) -> Option<usize> {
        self.range.iter().position(|v| v == value)
    }
}

/// Exogenous and endogenous variables with finite, ordered ranges.
///
/// Variables keep their declaration order; every enumeration in the crate
/// walks them (and their values) in that order.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    vars: Vec<Variable>,
    by_name: HashMap<String, VarId>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        range: Vec<Value>,
    ) -> Result<VarId, SignatureError> {
        let name = name.into();
        if self.by_name.contains_key(&name) {
            return Err(SignatureError::DuplicateVariable(name));
        }
        if range.is_empty() {
            return Err(SignatureError::EmptyRange(name));
        }
        for (i, v) in range.iter().enumerate() {
            if range[..i].contains(v) {
                return Err(SignatureError::DuplicateValue {
                    variable: name,
                    value: v.clone(),
                });
            }
        }
        let id = VarId(self.vars.len());
        self.by_name.insert(name.clone(), id);
        self.vars.push(Variable { name, kind, range });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.0].name
    }

    pub fn kind(&self, id: VarId) -> VarKind {
        self.vars[id.0].kind
    }

    pub fn is_exogenous(&self, id: VarId) -> bool {
        self.vars[id.0].is_exogenous()
    }

    pub fn range(&self, id: VarId) -> &[Value] {
        &self.vars[id.0].range
    }

    pub fn range_len(&self, id: VarId) -> usize {
        self.vars[id.0].range.len()
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn value(&self, id: VarId, index: usize) -> &Value {
        &self.vars[id.0].range[index]
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len()).map(VarId)
    }

    pub fn variables(&self) -> impl Iterator<Item = (VarId, &Variable)> + '_ {
        self.vars.iter().enumerate().map(|(i, v)| (VarId(i), v))
    }

    pub fn exogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids().filter(|&id| self.is_exogenous(id))
    }

    pub fn endogenous(&self) -> impl Iterator<Item = VarId> + '_ {
        self.ids().filter(|&id| !self.is_exogenous(id))
    }

    pub fn num_endogenous(&self) -> usize {
        self.endogenous().count()
    }
}
