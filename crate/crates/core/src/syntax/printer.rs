use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write;

use super::lexer::{is_ident_char, is_ident_start};
use super::parser::RESERVED;
use crate::context::Step;
use crate::proofsys::{Derivation, Rule, Sequent};
use crate::quote::{eq_term, forall_term, shape, Shape};
use crate::semantics::{value_count, Guard};
use crate::term::{fresh_name, Kind, Term, Var};
use crate::types::Type;

const BINDER: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const EQ: u8 = 6;
const APP: u8 = 7;
const ATOM: u8 = 8;

/// Maximum indentation of nested derivations in proof files.
const MAX_INDENT: usize = 40;

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char) && !RESERVED.contains(&s)
}

pub fn print_type(ty: &Type) -> String {
    ty.to_string()
}

#[derive(Clone, Copy)]
enum Known {
    Eq,
    Forall,
    Neither,
}

struct Printer<'a> {
    sugar: bool,
    avoid: &'a BTreeSet<String>,
    scope: Vec<String>,
    out: String,
    heads: HashMap<usize, Known>,
}

impl Printer<'_> {
    fn classify(&mut self, h: &Term) -> Known {
        if !h.is_closed() || h.loose() > 0 {
            return Known::Neither;
        }
        if let Some(k) = self.heads.get(&h.addr()) {
            return *k;
        }
        let guard = Guard::default();
        let known = match h.ty().arguments().as_slice() {
            [a, b] if a == b && value_count(a, guard).is_ok() => match eq_term(a, guard) {
                Ok(e) if e == *h => Known::Eq,
                _ => Known::Neither,
            },
            [Type::Arrow(d, c)] if c.is_base() && value_count(d, guard).is_ok() => match forall_term(d, guard) {
                Ok(q) if q == *h => Known::Forall,
                _ => Known::Neither,
            },
            _ => Known::Neither,
        };
        self.heads.insert(h.addr(), known);
        known
    }

    fn open(&mut self, level: u8, need: u8) {
        if level < need {
            self.out.push('(');
        }
    }

    fn close(&mut self, level: u8, need: u8) {
        if level < need {
            self.out.push(')');
        }
    }

    fn binder(&mut self, keyword: &str, lam: &Term, need: u8) {
        let Kind::Lam { hint, body } = lam.kind() else { unreachable!() };
        let base = if valid_name(hint) { hint.to_string() } else { "x".to_string() };
        let name = if self.avoid.contains(&base) || self.scope.contains(&base) {
            let mut used = self.avoid.clone();
            used.extend(self.scope.iter().cloned());
            fresh_name(&base, &used)
        } else {
            base
        };
        self.open(BINDER, need);
        let dom = lam.ty().domain().expect("abstraction has arrow type");
        let _ = write!(self.out, "{}{}:{}. ", keyword, name, dom);
        self.scope.push(name);
        self.term(body, BINDER);
        self.scope.pop();
        self.close(BINDER, need);
    }

    fn infix(&mut self, level: u8, need: u8, l: &Term, ll: u8, op: &str, r: &Term, rl: u8) {
        self.open(level, need);
        self.term(l, ll);
        self.out.push_str(op);
        self.term(r, rl);
        self.close(level, need);
    }

    fn term(&mut self, t: &Term, need: u8) {
        match t.kind() {
            Kind::Free(v) => self.out.push_str(v.name()),
            Kind::Bound(i) => {
                let n = self.scope.len();
                match n.checked_sub(*i as usize + 1) {
                    Some(k) => {
                        let s = self.scope[k].clone();
                        self.out.push_str(&s)
                    }
                    None => {
                        let _ = write!(self.out, "#{}", i);
                    }
                }
            }
            Kind::Bot => self.out.push_str("bot"),
            Kind::Imp => self.out.push_str("imp"),
            Kind::Lam { .. } => self.binder("\\", t, need),
            Kind::App(f, a) => {
                if let Some((s, u)) = t.as_imp() {
                    if !self.sugar {
                        return self.infix(IMP, need, s, OR, " => ", u, IMP);
                    }
                    return match shape(t) {
                        Shape::Top => self.out.push_str("top"),
                        Shape::Neg(s) => {
                            self.open(NOT, need);
                            self.out.push('~');
                            self.term(s, NOT);
                            self.close(NOT, need);
                        }
                        Shape::Or(s, u) => self.infix(OR, need, s, AND, " \\/ ", u, OR),
                        Shape::And(s, u) => self.infix(AND, need, s, NOT, " /\\ ", u, AND),
                        Shape::Equiv(s, u) => self.infix(IFF, need, s, IMP, " <=> ", u, IFF),
                        Shape::Imp(s, u) => self.infix(IMP, need, s, OR, " => ", u, IMP),
                        Shape::Atomic => unreachable!("implication has a connective shape"),
                    };
                }
                if self.sugar {
                    if let Some((h, l)) = f.as_app() {
                        if let Known::Eq = self.classify(h) {
                            return self.infix(EQ, need, l, APP, " == ", a, APP);
                        }
                    }
                    if matches!(a.kind(), Kind::Lam { .. }) {
                        if let Known::Forall = self.classify(f) {
                            return self.binder("forall ", a, need);
                        }
                    }
                }
                self.open(APP, need);
                self.term(f, APP);
                self.out.push(' ');
                self.term(a, ATOM);
                self.close(APP, need);
            }
        }
    }
}

fn free_names<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<String> {
    let mut vars = BTreeSet::new();
    for t in terms {
        t.collect_free(&mut vars);
    }
    vars.into_iter().map(|v| v.name().to_string()).collect()
}

fn write_term(out: &mut String, t: &Term, sugar: bool, need: u8, avoid: &BTreeSet<String>) {
    let mut p = Printer { sugar, avoid, scope: Vec::new(), out: std::mem::take(out), heads: HashMap::new() };
    p.term(t, need);
    *out = p.out;
}

/// Renders a term in the concrete syntax. With `sugar`, defined connectives,
/// `==` and `forall` are recognised and printed in their short forms; without
/// it, only `=>` is abbreviated.
pub fn print_term(t: &Term, sugar: bool) -> String {
    let mut out = String::new();
    write_term(&mut out, t, sugar, BINDER, &free_names([t]));
    out
}

pub fn print_sequent(q: &Sequent, sugar: bool) -> String {
    let parts: Vec<String> = q.assumptions().iter().map(|a| print_term(a, sugar)).collect();
    let goal = print_term(q.conclusion(), sugar);
    if parts.is_empty() {
        format!("|- {}", goal)
    } else {
        format!("{} |- {}", parts.join(", "), goal)
    }
}

/// `var` lines declaring the given variables, one per line.
pub fn print_declarations<'a>(vars: impl IntoIterator<Item = &'a Var>) -> String {
    let mut out = String::new();
    for v in vars {
        let _ = writeln!(out, "var {} : {}.", v.name(), v.ty());
    }
    out
}

fn payload_terms(d: &Derivation) -> Vec<Term> {
    match d.rule() {
        Rule::Triv => {
            let q = d.conclusion();
            q.assumptions().iter().cloned().chain([q.conclusion().clone()]).collect()
        }
        Rule::Weak(s) | Rule::Ded(s) => vec![s.clone()],
        Rule::Lam => vec![d.conclusion().conclusion().clone()],
        Rule::Br { path, lhs, rhs } => {
            let mut v = vec![lhs.clone(), rhs.clone()];
            for s in path.steps() {
                match s {
                    Step::IntoFun(t) | Step::IntoArg(t) => v.push(t.clone()),
                    Step::UnderLam(x) => v.push(Term::var(x)),
                }
            }
            v
        }
        Rule::Mp | Rule::Dn => Vec::new(),
    }
}

/// Free variables of every term written out by [`print_derivation`].
pub fn derivation_vars(d: &Derivation) -> BTreeSet<Var> {
    let mut seen = HashSet::new();
    let mut stack = vec![d.clone()];
    let mut vars = BTreeSet::new();
    while let Some(n) = stack.pop() {
        if !seen.insert(n.addr()) {
            continue;
        }
        for t in payload_terms(&n) {
            t.collect_free(&mut vars);
        }
        stack.extend(n.premises().iter().cloned());
    }
    vars
}

struct DerivWriter {
    out: String,
    avoid: HashMap<usize, BTreeSet<String>>,
}

impl DerivWriter {
    fn payload(&mut self, t: &Term) {
        let avoid = self.avoid.entry(t.addr()).or_insert_with(|| free_names([t])).clone();
        self.out.push(' ');
        write_term(&mut self.out, t, true, ATOM, &avoid);
    }

    fn node(&mut self, d: &Derivation, depth: usize) {
        if depth > 0 {
            self.out.push('\n');
            for _ in 0..depth.min(MAX_INDENT) {
                self.out.push(' ');
            }
        }
        self.out.push('(');
        self.out.push_str(d.rule().name());
        match d.rule() {
            Rule::Triv => {
                let q = d.conclusion();
                self.out.push_str(" (");
                for (i, a) in q.assumptions().iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    let avoid = free_names([a]);
                    write_term(&mut self.out, a, true, BINDER, &avoid);
                }
                self.out.push(')');
                self.payload(q.conclusion());
            }
            Rule::Weak(s) | Rule::Ded(s) => self.payload(s),
            Rule::Lam => self.payload(d.conclusion().conclusion()),
            Rule::Br { path, lhs, rhs } => {
                self.out.push_str(" (");
                for (i, s) in path.steps().iter().enumerate() {
                    if i > 0 {
                        self.out.push(' ');
                    }
                    match s {
                        Step::UnderLam(x) => {
                            let _ = write!(self.out, "(underlam {}:{})", x.name(), x.ty());
                        }
                        Step::IntoFun(t) => {
                            self.out.push_str("(intofun");
                            self.payload(t);
                            self.out.push(')');
                        }
                        Step::IntoArg(t) => {
                            self.out.push_str("(intoarg");
                            self.payload(t);
                            self.out.push(')');
                        }
                    }
                }
                self.out.push(')');
                self.payload(lhs);
                self.payload(rhs);
            }
            Rule::Mp | Rule::Dn => {}
        }
        for p in d.premises() {
            self.node(p, depth + 1);
        }
        self.out.push(')');
    }
}

/// The s-expression of a derivation, without declarations.
pub fn print_derivation(d: &Derivation) -> String {
    let mut w = DerivWriter { out: String::new(), avoid: HashMap::new() };
    w.node(d, 0);
    w.out
}

/// A complete proof file: declarations of every free variable, a blank line
/// and the derivation.
pub fn print_proof_file(d: &Derivation) -> String {
    let vars = derivation_vars(d);
    let mut out = print_declarations(&vars);
    if !out.is_empty() {
        out.push('\n');
    }
    out.push_str(&print_derivation(d));
    out.push('\n');
    out
}
