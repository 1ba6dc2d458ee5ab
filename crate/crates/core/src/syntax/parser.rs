use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::lexer::{tokenize, Spanned, Tok};
use crate::context::{ContextPath, Step};
use crate::error::{ParseError, SyntaxError, TypeError};
use crate::proofsys::{Derivation, Sequent};
use crate::quote::{eq_term, forall_term};
use crate::semantics::Guard;
use crate::term::{Kind, Term, Var};
use crate::types::Type;

/// Words that cannot be declared as variables.
pub const RESERVED: &[&str] = &["bot", "top", "imp", "forall", "var", "B"];

/// A parsed `.ptt` file: declarations followed by a term or a sequent.
#[derive(Clone, Debug)]
pub struct SourceUnit {
    pub declarations: Vec<Var>,
    pub body: Body,
}

#[derive(Clone, Debug)]
pub enum Body {
    Term(Term),
    Sequent(Sequent),
}

impl SourceUnit {
    /// The body as a sequent; a bare formula `s` reads as `∅ ⇒ s`.
    pub fn sequent(&self) -> Result<Sequent, TypeError> {
        match &self.body {
            Body::Sequent(q) => Ok(q.clone()),
            Body::Term(t) => Sequent::goal(t.clone()),
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    guard: Guard,
    globals: BTreeMap<String, Var>,
    /// Path binders of a `br` node, visible as free variables.
    locals: Vec<Var>,
    /// λ-binders enclosing the current position, innermost last.
    binders: Vec<(Arc<str>, Type)>,
    cons: HashMap<ConsKey, Term>,
}

/// Interning key: node kind, binder hint and the addresses of the already
/// interned children. α-equivalent terms spelled differently stay distinct.
#[derive(PartialEq, Eq, Hash)]
enum ConsKey {
    Leaf(Term),
    App(usize, usize),
    Lam(Arc<str>, Type, usize),
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(text: &str, guard: Guard) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            guard,
            globals: BTreeMap::new(),
            locals: Vec::new(),
            binders: Vec::new(),
            cons: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError { line: s.line, col: s.col, message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(format!("expected {}, found {}", wanted, self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let name = self.ident()?;
        if RESERVED.contains(&name.as_str()) {
            self.pos -= 1;
            return self.error(format!("`{}` is reserved", name));
        }
        Ok(name)
    }

    fn intern(&mut self, t: Term) -> Term {
        let key = match t.kind() {
            Kind::App(f, a) => ConsKey::App(f.addr(), a.addr()),
            Kind::Lam { hint, body } => ConsKey::Lam(hint.clone(), t.ty().clone(), body.addr()),
            _ => ConsKey::Leaf(t.clone()),
        };
        self.cons.entry(key).or_insert(t).clone()
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Type, ParseError> {
        let dom = match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::Ident(s) if s == "B" => {
                self.bump();
                Type::Base
            }
            _ => return self.unexpected("a type"),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Type::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    // ---- declarations ----

    fn declarations(&mut self) -> PResult<Vec<Var>> {
        let mut out = Vec::new();
        while self.is_word("var") {
            self.bump();
            let mut names = vec![(self.pos, self.binder_name()?)];
            while *self.peek() == Tok::Comma {
                self.bump();
                names.push((self.pos, self.binder_name()?));
            }
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Dot)?;
            for (pos, name) in names {
                if self.globals.contains_key(&name) {
                    self.pos = pos;
                    return Err(self.error::<()>(format!("`{}` is declared twice", name)).unwrap_err().into());
                }
                let v = Var::new(name.clone(), ty.clone());
                self.globals.insert(name, v.clone());
                out.push(v);
            }
        }
        Ok(out)
    }

    // ---- term builders ----

    fn app(&mut self, f: &Term, a: &Term) -> PResult<Term> {
        let t = Term::app(f, a)?;
        Ok(self.intern(t))
    }

    fn imp(&mut self, a: &Term, b: &Term) -> PResult<Term> {
        for t in [a, b] {
            if !t.is_formula() {
                return Err(TypeError::NotAFormula(t.ty().clone()).into());
            }
        }
        let c = self.intern(Term::imp_const());
        let h = self.app(&c, a)?;
        self.app(&h, b)
    }

    fn bot(&mut self) -> Term {
        self.intern(Term::bot())
    }

    fn neg(&mut self, a: &Term) -> PResult<Term> {
        let b = self.bot();
        self.imp(a, &b)
    }

    fn or(&mut self, a: &Term, b: &Term) -> PResult<Term> {
        let ab = self.imp(a, b)?;
        self.imp(&ab, b)
    }

    fn and(&mut self, a: &Term, b: &Term) -> PResult<Term> {
        let na = self.neg(a)?;
        let nb = self.neg(b)?;
        let o = self.or(&na, &nb)?;
        self.neg(&o)
    }

    fn iff(&mut self, a: &Term, b: &Term) -> PResult<Term> {
        let ab = self.imp(a, b)?;
        let ba = self.imp(b, a)?;
        self.and(&ab, &ba)
    }

    fn resolve(&mut self, name: &str) -> PResult<Term> {
        if let Some(i) = self.binders.iter().rev().position(|(n, _)| &**n == name) {
            let ty = self.binders[self.binders.len() - 1 - i].1.clone();
            return Ok(self.intern(Term::bound(i as u32, ty)));
        }
        let v = self
            .locals
            .iter()
            .rev()
            .find(|v| v.name() == name)
            .or_else(|| self.globals.get(name))
            .cloned()
            .ok_or_else(|| TypeError::Undeclared(name.to_string()))?;
        Ok(self.intern(Term::var(&v)))
    }

    // ---- terms ----

    fn term(&mut self) -> PResult<Term> {
        let lhs = self.imp_level()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.term()?;
            return self.iff(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn imp_level(&mut self) -> PResult<Term> {
        let lhs = self.or_level()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp_level()?;
            return self.imp(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn or_level(&mut self) -> PResult<Term> {
        let lhs = self.and_level()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.or_level()?;
            return self.or(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn and_level(&mut self) -> PResult<Term> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.and_level()?;
            return self.and(&lhs, &rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Term> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            let s = self.unary()?;
            return self.neg(&s);
        }
        self.eq_level()
    }

    fn eq_level(&mut self) -> PResult<Term> {
        let lhs = self.application()?;
        if *self.peek() == Tok::EqEq {
            self.bump();
            let rhs = self.application()?;
            if lhs.ty() != rhs.ty() {
                return Err(TypeError::Mismatch(lhs.ty().clone(), rhs.ty().clone()).into());
            }
            let e = eq_term(lhs.ty(), self.guard)?;
            let h = self.app(&e, &lhs)?;
            let t = self.app(&h, &rhs)?;
            if *self.peek() == Tok::EqEq {
                return Err(self.error::<()>("`==` does not associate; add parentheses").unwrap_err().into());
            }
            return Ok(t);
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Backslash => true,
            Tok::Ident(s) => s != "var",
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Term> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            f = self.app(&f, &a)?;
        }
        Ok(f)
    }

    fn binder(&mut self) -> PResult<(Arc<str>, Type, Term)> {
        let name: Arc<str> = self.binder_name()?.into();
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::Dot)?;
        self.binders.push((name.clone(), ty.clone()));
        let body = self.term();
        self.binders.pop();
        Ok((name, ty, body?))
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Backslash => {
                self.bump();
                let (name, ty, body) = self.binder()?;
                Ok(self.intern(Term::lam_raw(name, ty, body)))
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "bot" => Ok(self.bot()),
                    "top" => {
                        let b = self.bot();
                        self.imp(&b, &b)
                    }
                    "imp" => Ok(self.intern(Term::imp_const())),
                    "forall" => {
                        let (name, ty, body) = self.binder()?;
                        if !body.is_formula() {
                            return Err(TypeError::NotAFormula(body.ty().clone()).into());
                        }
                        let q = forall_term(&ty, self.guard)?;
                        let lam = self.intern(Term::lam_raw(name, ty, body));
                        self.app(&q, &lam)
                    }
                    "var" | "B" => {
                        self.pos -= 1;
                        Err(self.unexpected::<()>("a term").unwrap_err().into())
                    }
                    _ => self.resolve(&s),
                }
            }
            _ => Err(self.unexpected::<()>("a term").unwrap_err().into()),
        }
    }

    fn formula(&mut self) -> PResult<Term> {
        let t = self.term()?;
        if !t.is_formula() {
            return Err(TypeError::NotAFormula(t.ty().clone()).into());
        }
        Ok(t)
    }

    fn body(&mut self) -> PResult<Body> {
        let mut parts = Vec::new();
        if *self.peek() != Tok::Turnstile {
            parts.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                parts.push(self.formula()?);
            }
        }
        if *self.peek() == Tok::Turnstile {
            self.bump();
            let s = self.formula()?;
            return Ok(Body::Sequent(Sequent::new(parts, s)?));
        }
        if parts.len() != 1 {
            return Err(self.unexpected::<()>("`|-`").unwrap_err().into());
        }
        Ok(Body::Term(parts.pop().unwrap()))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::Eof {
            return self.unexpected("end of input");
        }
        Ok(())
    }

    // ---- derivations ----

    fn payload(&mut self) -> PResult<Term> {
        let t = self.atom()?;
        Ok(t)
    }

    fn formula_payload(&mut self) -> PResult<Term> {
        let t = self.payload()?;
        if !t.is_formula() {
            return Err(TypeError::NotAFormula(t.ty().clone()).into());
        }
        Ok(t)
    }

    fn derivation(&mut self) -> PResult<Derivation> {
        self.expect(Tok::LParen)?;
        let at = self.pos;
        let tag = self.ident()?;
        let shape = |p: &Parser, e: crate::proofsys::ShapeError| -> SyntaxError {
            let s = &p.toks[at];
            ParseError { line: s.line, col: s.col, message: e.to_string() }.into()
        };
        let d = match tag.as_str() {
            "triv" => {
                self.expect(Tok::LParen)?;
                let mut a = Vec::new();
                if *self.peek() != Tok::RParen {
                    a.push(self.formula()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        a.push(self.formula()?);
                    }
                }
                self.expect(Tok::RParen)?;
                let s = self.formula_payload()?;
                Derivation::triv(a, &s)?
            }
            "weak" => {
                let s = self.formula_payload()?;
                let d = self.derivation()?;
                Derivation::weak(&s, &d)?
            }
            "ded" => {
                let s = self.formula_payload()?;
                let d = self.derivation()?;
                Derivation::ded(&s, &d)?
            }
            "mp" => {
                let d1 = self.derivation()?;
                let d2 = self.derivation()?;
                Derivation::mp(&d1, &d2).map_err(|e| shape(self, e))?
            }
            "dn" => {
                let d = self.derivation()?;
                Derivation::dn(&d).map_err(|e| shape(self, e))?
            }
            "lam" => {
                let t = self.formula_payload()?;
                let d = self.derivation()?;
                Derivation::lam(&t, &d)?
            }
            "br" => {
                let mark = self.locals.len();
                let path = self.path();
                let st = path.and_then(|p| Ok((p, self.payload()?, self.payload()?)));
                self.locals.truncate(mark);
                let (path, s, t) = st?;
                let d_eq = self.derivation()?;
                let d_body = self.derivation()?;
                Derivation::br(&path, &s, &t, &d_eq, &d_body)?
            }
            _ => {
                self.pos = at;
                return Err(self.error::<()>(format!("unknown rule `{}`", tag)).unwrap_err().into());
            }
        };
        self.expect(Tok::RParen)?;
        Ok(d)
    }

    fn path(&mut self) -> PResult<ContextPath> {
        self.expect(Tok::LParen)?;
        let mut steps = Vec::new();
        while *self.peek() == Tok::LParen {
            self.bump();
            let at = self.pos;
            let tag = self.ident()?;
            let step = match tag.as_str() {
                "underlam" => {
                    let name = self.binder_name()?;
                    self.expect(Tok::Colon)?;
                    let ty = self.ty()?;
                    let v = Var::new(name, ty);
                    self.locals.push(v.clone());
                    Step::UnderLam(v)
                }
                "intofun" => Step::IntoFun(self.payload()?),
                "intoarg" => Step::IntoArg(self.payload()?),
                _ => {
                    self.pos = at;
                    return Err(self.error::<()>(format!("unknown path step `{}`", tag)).unwrap_err().into());
                }
            };
            self.expect(Tok::RParen)?;
            steps.push(step);
        }
        self.expect(Tok::RParen)?;
        Ok(ContextPath::new(steps))
    }
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, Guard::default())?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_source_with(text: &str, guard: Guard) -> Result<SourceUnit, SyntaxError> {
    let mut p = Parser::new(text, guard)?;
    let declarations = p.declarations()?;
    let body = p.body()?;
    p.finish()?;
    Ok(SourceUnit { declarations, body })
}

pub fn parse_source(text: &str) -> Result<SourceUnit, SyntaxError> {
    parse_source_with(text, Guard::default())
}

/// Parses declarations followed by a term.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    match parse_source(text)?.body {
        Body::Term(t) => Ok(t),
        Body::Sequent(_) => Err(ParseError { line: 1, col: 1, message: "expected a term, found a sequent".into() }.into()),
    }
}

/// Parses declarations followed by `s1, ..., sn |- s` (or a bare formula).
pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    Ok(parse_source(text)?.sequent()?)
}

pub fn parse_derivation_with(text: &str, guard: Guard) -> Result<Derivation, SyntaxError> {
    let mut p = Parser::new(text, guard)?;
    p.declarations()?;
    let d = p.derivation()?;
    p.finish()?;
    Ok(d)
}

/// Parses a `.pttp` proof file: declarations followed by one derivation.
pub fn parse_derivation(text: &str) -> Result<Derivation, SyntaxError> {
    parse_derivation_with(text, Guard::default())
}

/// Parses a term against the given declarations.
pub fn parse_term_in(decls: &[Var], text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text, Guard::default())?;
    for v in decls {
        p.globals.insert(v.name().to_string(), v.clone());
    }
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
