use std::fmt::Write;

use crate::expr::{BinOp, Expr};
use crate::formula::{BoolExpr, Formula};
use crate::model::ModelDef;
use crate::signature::Signature;
use crate::value::Value;

const NOT_LEVEL: u8 = 3;
const ATOM_LEVEL: u8 = 7;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, _, _) => op.precedence(),
        Expr::Not(_) => NOT_LEVEL,
        _ => ATOM_LEVEL,
    }
}

fn is_comparison(op: BinOp) -> bool {
    op.precedence() == 4
}

fn write_expr(out: &mut String, e: &Expr, sig: &Signature) {
    let wrapped = |out: &mut String, e: &Expr, paren: bool| {
        if paren {
            out.push('(');
        }
        write_expr(out, e, sig);
        if paren {
            out.push(')');
        }
    };
    match e {
        Expr::Lit(v) => write!(out, "{v}").unwrap(),
        Expr::Var(id) => out.push_str(sig.name(*id)),
        Expr::Not(a) => {
            out.push('!');
            wrapped(out, a, level(a) < NOT_LEVEL);
        }
        Expr::Neg(a) => {
            out.push('-');
            // `-3` would read back as a negative literal.
            let literal = matches!(**a, Expr::Lit(Value::Int(n)) if n >= 0);
            wrapped(out, a, literal || level(a) < ATOM_LEVEL);
        }
        Expr::Bin(op, a, b) => {
            let p = op.precedence();
            let left_paren = if is_comparison(*op) { level(a) <= p } else { level(a) < p };
            wrapped(out, a, left_paren);
            write!(out, " {} ", op.symbol()).unwrap();
            wrapped(out, b, level(b) <= p);
        }
        Expr::Ite(c, a, b) => {
            out.push_str("ite(");
            write_expr(out, c, sig);
            out.push_str(", ");
            write_expr(out, a, sig);
            out.push_str(", ");
            write_expr(out, b, sig);
            out.push(')');
        }
    }
}

/// Canonical text of an expression, with the fewest parentheses that read
/// back to the same tree.
pub fn print_expr(e: &Expr, sig: &Signature) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, sig);
    out
}

fn range_text(range: &[Value]) -> String {
    let vals: Vec<String> = range.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", vals.join(", "))
}

/// Canonical text of a model; parsing it gives back an equal definition.
pub fn print_model(m: &ModelDef) -> String {
    let sig = &m.signature;
    let mut out = format!("model {} {{\n", m.name);
    for (id, var) in sig.variables() {
        if var.is_exogenous() {
            writeln!(out, "  exo {} : {}", var.name, range_text(&var.range)).unwrap();
        } else {
            let eq = m.equation(id).map_or_else(|| "0".to_string(), |e| print_expr(e, sig));
            writeln!(out, "  var {} : {} = {}", var.name, range_text(&var.range), eq).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn bool_level(b: &BoolExpr) -> u8 {
    match b {
        BoolExpr::Or(..) => 1,
        BoolExpr::And(..) => 2,
        _ => 3,
    }
}

fn write_bool(out: &mut String, b: &BoolExpr, sig: &Signature) {
    let wrapped = |out: &mut String, e: &BoolExpr, paren: bool| {
        if paren {
            out.push('(');
        }
        write_bool(out, e, sig);
        if paren {
            out.push(')');
        }
    };
    match b {
        BoolExpr::Atom(id, v) => write!(out, "{}={}", sig.name(*id), sig.value(*id, *v)).unwrap(),
        BoolExpr::Not(a) => {
            out.push('!');
            wrapped(out, a, bool_level(a) < 3);
        }
        BoolExpr::And(a, c) => {
            wrapped(out, a, bool_level(a) < 2);
            out.push_str(" & ");
            wrapped(out, c, bool_level(c) <= 2);
        }
        BoolExpr::Or(a, c) => {
            wrapped(out, a, bool_level(a) < 1);
            out.push_str(" | ");
            wrapped(out, c, bool_level(c) <= 1);
        }
    }
}

pub fn print_formula(f: &Formula, sig: &Signature) -> String {
    let mut out = String::new();
    if !f.interventions.is_empty() {
        let parts: Vec<String> = f
            .interventions
            .iter()
            .map(|(id, v)| format!("{}<-{}", sig.name(id), sig.value(id, v)))
            .collect();
        write!(out, "[{}] ", parts.join(", ")).unwrap();
    }
    write_bool(&mut out, &f.body, sig);
    out
}
