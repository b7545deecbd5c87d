//! Structural-equation expressions.
//!
//! Expressions are evaluated pointwise; the compiled model tabulates them
//! once, so evaluation speed only matters for validation and the naive
//! reference solver.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::signature::VarId;
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&",
            BinOp::Or => "|",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Value),
    Var(VarId),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Ite(Box<Expr>, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("expected an integer, found {0}")]
    NotInteger(Value),
    #[error("expected a Boolean (0 or 1), found {0}")]
    NotBoolean(Value),
    #[error("integer overflow")]
    Overflow,
}

impl Expr {
    pub fn var(id: VarId) -> Expr {
        Expr::Var(id)
    }

    pub fn int(i: i64) -> Expr {
        Expr::Lit(Value::Int(i))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::And, a, b)
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Or, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    pub fn ite(c: Expr, a: Expr, b: Expr) -> Expr {
        Expr::Ite(Box::new(c), Box::new(a), Box::new(b))
    }

    /// Variables the expression reads, in declaration order.
    pub fn references(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Expr::Lit(_) => {}
            Expr::Var(id) => {
                out.insert(*id);
            }
            Expr::Not(a) | Expr::Neg(a) => a.collect_refs(out),
            Expr::Bin(_, a, b) => {
                a.collect_refs(out);
                b.collect_refs(out);
            }
            Expr::Ite(c, a, b) => {
                c.collect_refs(out);
                a.collect_refs(out);
                b.collect_refs(out);
            }
        }
    }

    /// Rewrites every reference to `from` into a reference to `to`.
    pub fn substitute(&self, from: VarId, to: VarId) -> Expr {
        match self {
            Expr::Lit(v) => Expr::Lit(v.clone()),
            Expr::Var(id) => Expr::Var(if *id == from { to } else { *id }),
            Expr::Not(a) => Expr::Not(Box::new(a.substitute(from, to))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(from, to))),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.substitute(from, to), b.substitute(from, to)),
            Expr::Ite(c, a, b) => Expr::ite(
                c.substitute(from, to),
                a.substitute(from, to),
                b.substitute(from, to),
            ),
        }
    }

    /// Evaluates with `lookup` supplying the value of each referenced variable.
    pub fn eval(&self, lookup: &dyn Fn(VarId) -> Value) -> Result<Value, EvalError> {
        match self {
            Expr::Lit(v) => Ok(v.clone()),
            Expr::Var(id) => Ok(lookup(*id)),
            Expr::Not(a) => Ok(Value::from_bool(!boolean(a.eval(lookup)?)?)),
            Expr::Neg(a) => integer(a.eval(lookup)?)?
                .checked_neg()
                .map(Value::Int)
                .ok_or(EvalError::Overflow),
            Expr::Ite(c, a, b) => {
                if boolean(c.eval(lookup)?)? {
                    a.eval(lookup)
                } else {
                    b.eval(lookup)
                }
            }
            Expr::Bin(op, a, b) => {
                let l = a.eval(lookup)?;
                let r = b.eval(lookup)?;
                match op {
                    BinOp::Eq => Ok(Value::from_bool(l == r)),
                    BinOp::Ne => Ok(Value::from_bool(l != r)),
                    BinOp::And => Ok(Value::from_bool(boolean(l)? & boolean(r)?)),
                    BinOp::Or => Ok(Value::from_bool(boolean(l)? | boolean(r)?)),
                    _ => {
                        let (x, y) = (integer(l)?, integer(r)?);
                        let v = match op {
                            BinOp::Add => x.checked_add(y).ok_or(EvalError::Overflow)?,
                            BinOp::Sub => x.checked_sub(y).ok_or(EvalError::Overflow)?,
                            BinOp::Mul => x.checked_mul(y).ok_or(EvalError::Overflow)?,
                            BinOp::Lt => i64::from(x < y),
                            BinOp::Le => i64::from(x <= y),
                            BinOp::Gt => i64::from(x > y),
                            BinOp::Ge => i64::from(x >= y),
                            _ => unreachable!(),
                        };
                        Ok(Value::Int(v))
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Lit(_) | Expr::Var(_) => 1,
            Expr::Not(a) | Expr::Neg(a) => 1 + a.depth(),
            Expr::Bin(_, a, b) => 1 + a.depth().max(b.depth()),
            Expr::Ite(c, a, b) => 1 + c.depth().max(a.depth()).max(b.depth()),
        }
    }
}

fn integer(v: Value) -> Result<i64, EvalError> {
    v.as_int().ok_or(EvalError::NotInteger(v))
}

fn boolean(v: Value) -> Result<bool, EvalError> {
    v.as_bool().ok_or(EvalError::NotBoolean(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_boolean_mix() {
        let c = VarId(0);
        let e = Expr::bin(BinOp::Mul, Expr::int(2), Expr::var(c));
        let at = |v: i64| move |_: VarId| Value::Int(v);
        assert_eq!(e.eval(&at(1)).unwrap(), Value::Int(2));
        let b = Expr::and(Expr::var(c), Expr::not(Expr::int(0)));
        assert_eq!(b.eval(&at(1)).unwrap(), Value::Int(1));
        assert_eq!(b.eval(&at(2)), Err(EvalError::NotBoolean(Value::Int(2))));
        let cmp = Expr::bin(BinOp::Le, Expr::var(c), Expr::int(1));
        assert_eq!(cmp.eval(&at(3)).unwrap(), Value::Int(0));
    }

    #[test]
    fn symbols_compare_but_do_not_add() {
        let e = Expr::bin(BinOp::Eq, Expr::Lit("red".into()), Expr::var(VarId(0)));
        assert_eq!(e.eval(&|_| "red".into()).unwrap(), Value::Int(1));
        let bad = Expr::bin(BinOp::Add, Expr::Lit("red".into()), Expr::int(1));
        assert!(matches!(bad.eval(&|_| 0.into()), Err(EvalError::NotInteger(_))));
    }

    #[test]
    fn references_are_sorted_and_deduplicated() {
        let e = Expr::ite(
            Expr::var(VarId(3)),
            Expr::var(VarId(1)),
            Expr::or(Expr::var(VarId(3)), Expr::var(VarId(0))),
        );
        let refs: Vec<_> = e.references().into_iter().collect();
        assert_eq!(refs, vec![VarId(0), VarId(1), VarId(3)]);
    }
}
