use crate::assignment::{Contrast, PartialAssignment};
use crate::error::AssignmentError;
use crate::expr::{BinOp, Expr};
use crate::formula::{BoolExpr, Formula};
use crate::model::ModelDef;
use crate::signature::{Signature, VarId};
use crate::value::Value;

use super::lexer::{lex, Pos, Tok, Token};
use super::Diagnostic;

/// Expression with unresolved variable names.
enum Raw {
    Lit(Value),
    Var(String, Pos),
    Not(Box<Raw>),
    Neg(Box<Raw>),
    Bin(BinOp, Box<Raw>, Box<Raw>),
    Ite(Box<Raw>, Box<Raw>, Box<Raw>),
}

impl Raw {
    fn resolve(self, sig: &Signature) -> Result<Expr, Diagnostic> {
        Ok(match self {
            Raw::Lit(v) => Expr::Lit(v),
            Raw::Var(name, pos) => match sig.lookup(&name) {
                Some(id) => Expr::Var(id),
                None => {
                    return Err(Diagnostic::at(pos, format!("unknown variable `{name}`"), vec![]));
                }
            },
            Raw::Not(a) => Expr::Not(Box::new(a.resolve(sig)?)),
            Raw::Neg(a) => Expr::Neg(Box::new(a.resolve(sig)?)),
            Raw::Bin(op, a, b) => Expr::Bin(op, Box::new(a.resolve(sig)?), Box::new(b.resolve(sig)?)),
            Raw::Ite(c, a, b) => Expr::Ite(
                Box::new(c.resolve(sig)?),
                Box::new(a.resolve(sig)?),
                Box::new(b.resolve(sig)?),
            ),
        })
    }
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    pub(crate) fn new(text: &str, arrows: bool) -> Result<Self, Diagnostic> {
        Ok(Parser {
            toks: lex(text, arrows)?,
            i: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        Diagnostic::at(
            self.pos(),
            format!("unexpected {}", self.peek().describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.advance().pos)
        } else {
            Err(self.unexpected(&[&format!("`{}`", tok.text())]))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.advance().pos;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), Diagnostic> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            _ => Err(self.unexpected(&[&format!("`{kw}`")])),
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub(crate) fn finish(&mut self) -> Result<(), Diagnostic> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    /// `-`? integer, or a quoted symbol.
    fn value(&mut self) -> Result<Value, Diagnostic> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Value::Int(if neg { -n } else { n }))
            }
            Tok::Sym(s) if !neg => {
                self.advance();
                Ok(Value::Sym(s))
            }
            _ => Err(self.unexpected(if neg { &["integer"] } else { &["integer", "symbol"] })),
        }
    }

    fn range(&mut self) -> Result<(Vec<Value>, Pos), Diagnostic> {
        let pos = self.expect(Tok::LBrace)?;
        let mut vals = Vec::new();
        if *self.peek() == Tok::RBrace {
            return Err(Diagnostic::at(pos, "empty range".into(), vec!["value".into()]));
        }
        loop {
            let p = self.pos();
            let v = self.value()?;
            if vals.contains(&v) {
                return Err(Diagnostic::at(p, format!("value {v} repeated in range"), vec![]));
            }
            vals.push(v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok((vals, pos))
    }

    pub(crate) fn model(&mut self) -> Result<ModelDef, Diagnostic> {
        self.keyword("model")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut def = ModelDef::new(name);
        let mut pending: Vec<(VarId, Raw)> = Vec::new();
        loop {
            let kw = match self.peek() {
                Tok::RBrace => break,
                Tok::Ident(s) if s == "exo" || s == "var" => s.clone(),
                _ => return Err(self.unexpected(&["`exo`", "`var`", "`}`"])),
            };
            self.advance();
            let (vname, vpos) = self.ident()?;
            self.expect(Tok::Colon)?;
            let (range, _) = self.range()?;
            let added = if kw == "exo" {
                def.add_exogenous(vname.clone(), range)
            } else {
                def.add_endogenous(vname.clone(), range)
            };
            let id = added.map_err(|e| Diagnostic::at(vpos, e.to_string(), vec![]))?;
            if kw == "var" {
                self.expect(Tok::Eq)?;
                pending.push((id, self.expr()?));
            }
        }
        self.expect(Tok::RBrace)?;
        for (id, raw) in pending {
            let e = raw.resolve(&def.signature)?;
            def.set_equation(id, e);
        }
        Ok(def)
    }

    fn expr(&mut self) -> Result<Raw, Diagnostic> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Raw, Diagnostic> {
        let mut a = self.and_expr()?;
        while self.eat(&Tok::Or) {
            let b = self.and_expr()?;
            a = Raw::Bin(BinOp::Or, Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn and_expr(&mut self) -> Result<Raw, Diagnostic> {
        let mut a = self.not_expr()?;
        while self.eat(&Tok::And) {
            let b = self.not_expr()?;
            a = Raw::Bin(BinOp::And, Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn not_expr(&mut self) -> Result<Raw, Diagnostic> {
        if self.eat(&Tok::Bang) {
            return Ok(Raw::Not(Box::new(self.not_expr()?)));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<Raw, Diagnostic> {
        let a = self.add_expr()?;
        let op = match self.peek() {
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(a),
        };
        self.advance();
        let b = self.add_expr()?;
        Ok(Raw::Bin(op, Box::new(a), Box::new(b)))
    }

    fn add_expr(&mut self) -> Result<Raw, Diagnostic> {
        let mut a = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(a),
            };
            self.advance();
            let b = self.mul_expr()?;
            a = Raw::Bin(op, Box::new(a), Box::new(b));
        }
    }

    fn mul_expr(&mut self) -> Result<Raw, Diagnostic> {
        let mut a = self.unary()?;
        while self.eat(&Tok::Star) {
            let b = self.unary()?;
            a = Raw::Bin(BinOp::Mul, Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Raw, Diagnostic> {
        if self.eat(&Tok::Minus) {
            // A minus directly before a literal is part of the literal.
            if let Tok::Int(n) = *self.peek() {
                self.advance();
                return Ok(Raw::Lit(Value::Int(-n)));
            }
            return Ok(Raw::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Raw, Diagnostic> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Raw::Lit(Value::Int(n)))
            }
            Tok::Sym(s) => {
                self.advance();
                Ok(Raw::Lit(Value::Sym(s)))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if name == "ite" && self.toks[self.i + 1].tok == Tok::LParen => {
                self.advance();
                self.advance();
                let c = self.expr()?;
                self.expect(Tok::Comma)?;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Raw::Ite(Box::new(c), Box::new(a), Box::new(b)))
            }
            Tok::Ident(name) => {
                let pos = self.advance().pos;
                Ok(Raw::Var(name, pos))
            }
            _ => Err(self.unexpected(&["integer", "symbol", "identifier", "`(`", "`-`", "`!`"])),
        }
    }

    /// `NAME = value`, resolved against `sig`.
    fn binding(&mut self, sig: &Signature, op: Tok) -> Result<(VarId, usize, Pos), Diagnostic> {
        let (name, pos) = self.ident()?;
        let id = sig
            .lookup(&name)
            .ok_or_else(|| Diagnostic::at(pos, format!("unknown variable `{name}`"), vec![]))?;
        self.expect(op)?;
        let vpos = self.pos();
        let v = self.value()?;
        let idx = sig.var(id).value_index(&v).ok_or_else(|| {
            Diagnostic::at(
                vpos,
                AssignmentError::OutOfRange {
                    variable: name.clone(),
                    value: v.clone(),
                }
                .to_string(),
                vec![],
            )
        })?;
        Ok((id, idx, pos))
    }

    pub(crate) fn formula(&mut self, sig: &Signature) -> Result<Formula, Diagnostic> {
        let mut interventions = PartialAssignment::empty(sig);
        let start = self.pos();
        if self.eat(&Tok::LBracket) {
            if *self.peek() != Tok::RBracket {
                loop {
                    let (id, v, pos) = self.binding(sig, Tok::Arrow)?;
                    if sig.is_exogenous(id) {
                        return Err(Diagnostic::at(
                            pos,
                            AssignmentError::ExogenousIntervention(sig.name(id).into()).to_string(),
                            vec![],
                        ));
                    }
                    if interventions.contains(id) {
                        return Err(Diagnostic::at(
                            pos,
                            format!("variable `{}` intervened on twice", sig.name(id)),
                            vec![],
                        ));
                    }
                    interventions.set(id, v);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.expect(Tok::RBracket)?;
        }
        let body = self.bool_or(sig)?;
        self.finish()?;
        Formula::new(sig, interventions, body).map_err(|e| Diagnostic::at(start, e.to_string(), vec![]))
    }

    fn bool_or(&mut self, sig: &Signature) -> Result<BoolExpr, Diagnostic> {
        let mut a = self.bool_and(sig)?;
        while self.eat(&Tok::Or) {
            a = BoolExpr::or(a, self.bool_and(sig)?);
        }
        Ok(a)
    }

    fn bool_and(&mut self, sig: &Signature) -> Result<BoolExpr, Diagnostic> {
        let mut a = self.bool_not(sig)?;
        while self.eat(&Tok::And) {
            a = BoolExpr::and(a, self.bool_not(sig)?);
        }
        Ok(a)
    }

    fn bool_not(&mut self, sig: &Signature) -> Result<BoolExpr, Diagnostic> {
        if self.eat(&Tok::Bang) {
            return Ok(BoolExpr::not(self.bool_not(sig)?));
        }
        if self.eat(&Tok::LParen) {
            let e = self.bool_or(sig)?;
            self.expect(Tok::RParen)?;
            return Ok(e);
        }
        let (name, pos) = self.ident()?;
        let negate = match self.peek() {
            Tok::Eq => false,
            Tok::Ne => true,
            _ => return Err(self.unexpected(&["`=`", "`!=`"])),
        };
        let id = sig
            .lookup(&name)
            .ok_or_else(|| Diagnostic::at(pos, format!("unknown variable `{name}`"), vec![]))?;
        self.advance();
        let vpos = self.pos();
        let v = self.value()?;
        let idx = sig.var(id).value_index(&v).ok_or_else(|| {
            Diagnostic::at(
                vpos,
                AssignmentError::OutOfRange {
                    variable: name.clone(),
                    value: v.clone(),
                }
                .to_string(),
                vec![],
            )
        })?;
        let atom = BoolExpr::atom(id, idx);
        Ok(if negate { BoolExpr::not(atom) } else { atom })
    }

    /// `A=1, C=0`; the empty string is the empty assignment.
    pub(crate) fn assignment(&mut self, sig: &Signature) -> Result<PartialAssignment, Diagnostic> {
        let mut out = PartialAssignment::empty(sig);
        if self.at_eof() {
            return Ok(out);
        }
        loop {
            let (id, v, pos) = self.binding(sig, Tok::Eq)?;
            if out.contains(id) {
                return Err(Diagnostic::at(
                    pos,
                    AssignmentError::DuplicateBinding(sig.name(id).into()).to_string(),
                    vec![],
                ));
            }
            out.set(id, v);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.finish()?;
        Ok(out)
    }
}

pub(crate) fn contrast_from(
    left: &PartialAssignment,
    right: &PartialAssignment,
) -> Result<Contrast, AssignmentError> {
    Contrast::from_assignments(left, right)
}
