//! β-normalization by evaluation, η-reduction and the decision procedure for
//! λ-equivalence.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::TypeError;
use crate::term::{Kind, Term};
use crate::types::Type;

#[derive(Clone)]
enum Val {
    Lam { hint: Arc<str>, dom: Type, body: Term, env: Env },
    Neu { head: Head, args: Vec<Val> },
}

#[derive(Clone)]
enum Head {
    /// A free variable or constant.
    Atom(Term),
    /// A binder opened during read-back, as a de Bruijn level.
    Level(u32, Type),
}

type Env = Option<Arc<EnvNode>>;

struct EnvNode {
    val: Val,
    next: Env,
}

fn lookup(env: &Env, mut i: u32) -> Val {
    let mut cur = env;
    loop {
        let node = cur.as_ref().expect("loose bound variable during evaluation");
        if i == 0 {
            return node.val.clone();
        }
        i -= 1;
        cur = &node.next;
    }
}

fn push(env: &Env, val: Val) -> Env {
    Some(Arc::new(EnvNode { val, next: env.clone() }))
}

fn eval(t: &Term, env: &Env) -> Val {
    match t.kind() {
        Kind::Bound(i) => lookup(env, *i),
        Kind::Free(_) | Kind::Bot | Kind::Imp => Val::Neu { head: Head::Atom(t.clone()), args: Vec::new() },
        Kind::Lam { hint, body } => Val::Lam {
            hint: hint.clone(),
            dom: t.ty().domain().unwrap().clone(),
            body: body.clone(),
            env: env.clone(),
        },
        Kind::App(f, a) => apply(eval(f, env), eval(a, env)),
    }
}

fn apply(f: Val, a: Val) -> Val {
    match f {
        Val::Lam { body, env, .. } => eval(&body, &push(&env, a)),
        Val::Neu { head, mut args } => {
            args.push(a);
            Val::Neu { head, args }
        }
    }
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Leaf(Term),
    Lam(Type, usize),
    App(usize, usize),
}

/// Hash-conses terms so that α-equivalent subterms of a normal form share one
/// allocation. The first binder hint seen for a node is kept.
#[derive(Default)]
pub(crate) struct Interner {
    table: HashMap<Key, Term>,
}

impl Interner {
    pub(crate) fn leaf(&mut self, t: Term) -> Term {
        self.table.entry(Key::Leaf(t.clone())).or_insert(t).clone()
    }

    pub(crate) fn lam(&mut self, hint: Arc<str>, dom: Type, body: Term) -> Term {
        let key = Key::Lam(dom.clone(), body.addr());
        self.table
            .entry(key)
            .or_insert_with(|| Term::lam_raw(hint, dom, body))
            .clone()
    }

    pub(crate) fn app(&mut self, f: Term, a: Term) -> Term {
        let key = Key::App(f.addr(), a.addr());
        self.table
            .entry(key)
            .or_insert_with(|| Term::app_unchecked(&f, &a))
            .clone()
    }
}

fn readback(v: Val, depth: u32, interner: &mut Interner) -> Term {
    match v {
        Val::Lam { hint, dom, body, env } => {
            let var = Val::Neu { head: Head::Level(depth, dom.clone()), args: Vec::new() };
            let inner = eval(&body, &push(&env, var));
            let body = readback(inner, depth + 1, interner);
            interner.lam(hint, dom, body)
        }
        Val::Neu { head, args } => {
            let mut acc = match head {
                Head::Atom(t) => interner.leaf(t),
                Head::Level(k, ty) => interner.leaf(Term::bound(depth - 1 - k, ty)),
            };
            for a in args {
                let a = readback(a, depth, interner);
                acc = interner.app(acc, a);
            }
            acc
        }
    }
}

/// The β-normal form. Free variables of the result are among those of `s`.
pub fn beta_normalize(s: &Term) -> Term {
    let mut interner = Interner::default();
    readback(eval(s, &None), 0, &mut interner)
}

fn eta_reduce(t: &Term, memo: &mut HashMap<usize, Term>, interner: &mut Interner) -> Term {
    if let Some(r) = memo.get(&t.addr()) {
        return r.clone();
    }
    let r = match t.kind() {
        Kind::Lam { hint, body } => {
            let body = eta_reduce(body, memo, interner);
            match body.kind() {
                Kind::App(f, a) if matches!(a.kind(), Kind::Bound(0)) && !f.mentions_bound(0) => {
                    let shifted = f.shift_down(1);
                    reintern(&shifted, interner)
                }
                _ => interner.lam(hint.clone(), t.ty().domain().unwrap().clone(), body),
            }
        }
        Kind::App(f, a) => {
            let f = eta_reduce(f, memo, interner);
            let a = eta_reduce(a, memo, interner);
            interner.app(f, a)
        }
        _ => interner.leaf(t.clone()),
    };
    memo.insert(t.addr(), r.clone());
    r
}

fn reintern(t: &Term, interner: &mut Interner) -> Term {
    match t.kind() {
        Kind::Lam { hint, body } => {
            let body = reintern(body, interner);
            interner.lam(hint.clone(), t.ty().domain().unwrap().clone(), body)
        }
        Kind::App(f, a) => {
            let f = reintern(f, interner);
            let a = reintern(a, interner);
            interner.app(f, a)
        }
        _ => interner.leaf(t.clone()),
    }
}

fn beta_eta_with(s: &Term, interner: &mut Interner) -> Term {
    let nf = readback(eval(s, &None), 0, interner);
    eta_reduce(&nf, &mut HashMap::new(), interner)
}

/// The βη-normal form: β-normalize, then η-reduce bottom up. η-reduction of a
/// β-normal term cannot create a β-redex, so the result is canonical.
pub fn beta_eta_normalize(s: &Term) -> Term {
    beta_eta_with(s, &mut Interner::default())
}

/// Decides `s ∼λ t` by comparing βη-normal forms.
pub fn lambda_equiv(s: &Term, t: &Term) -> Result<bool, TypeError> {
    if s.ty() != t.ty() {
        return Err(TypeError::Mismatch(s.ty().clone(), t.ty().clone()));
    }
    if s == t {
        return Ok(true);
    }
    // one interner for both sides: equal normal forms become the same node
    let mut interner = Interner::default();
    let a = beta_eta_with(s, &mut interner);
    let b = beta_eta_with(t, &mut interner);
    Ok(a.ptr_eq(&b) || a == b)
}

/// True when no subterm is a β-redex.
pub fn is_beta_normal(s: &Term) -> bool {
    fn go(t: &Term, seen: &mut std::collections::HashSet<usize>) -> bool {
        if !seen.insert(t.addr()) {
            return true;
        }
        match t.kind() {
            Kind::App(f, a) => !matches!(f.kind(), Kind::Lam { .. }) && go(f, seen) && go(a, seen),
            Kind::Lam { body, .. } => go(body, seen),
            _ => true,
        }
    }
    go(s, &mut Default::default())
}
