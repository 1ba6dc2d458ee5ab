#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ptt_core::semantics::{assignments, eval};
use ptt_core::{Guard, Term, Type, Var};

pub fn b() -> Type {
    Type::Base
}

pub fn bb() -> Type {
    Type::arrow(b(), b())
}

pub fn big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new().stack_size(1 << 28).spawn(f).unwrap().join().unwrap()
}

/// Free variables available to generated terms.
pub fn signature() -> Vec<Var> {
    vec![
        Var::new("x", b()),
        Var::new("y", b()),
        Var::new("f", bb()),
        Var::new("g", Type::curried(&[b(), b()])),
        Var::new("h", Type::arrow(bb(), b())),
    ]
}

/// Random well-typed terms, possibly with β-redexes, over `signature()`.
pub struct TermGen {
    rng: StdRng,
    free: Vec<Var>,
    bound: Vec<Var>,
    next: usize,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen { rng: StdRng::seed_from_u64(seed), free: signature(), bound: Vec::new(), next: 0 }
    }

    pub fn closed(seed: u64) -> TermGen {
        TermGen { free: Vec::new(), ..TermGen::new(seed) }
    }

    fn leaves(&self, ty: &Type) -> Vec<Term> {
        let mut out: Vec<Term> = self.free.iter().chain(&self.bound).filter(|v| v.ty() == ty).map(Term::var).collect();
        if ty.is_base() {
            out.push(Term::bot());
        }
        if *ty == Type::curried(&[b(), b()]) {
            out.push(Term::imp_const());
        }
        out
    }

    fn lam(&mut self, ty: &Type, depth: u32) -> Term {
        let (d, c) = ty.split().unwrap();
        let v = Var::new(format!("v{}", self.next), d.clone());
        self.next += 1;
        self.bound.push(v.clone());
        let body = self.term(c, depth.saturating_sub(1));
        self.bound.pop();
        Term::lam(&v, &body)
    }

    pub fn term(&mut self, ty: &Type, depth: u32) -> Term {
        let leaves = self.leaves(ty);
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            if !leaves.is_empty() {
                let i = self.rng.gen_range(0..leaves.len());
                return leaves[i].clone();
            }
            return self.lam(ty, depth);
        }
        match self.rng.gen_range(0..5) {
            0 if !ty.is_base() => self.lam(ty, depth),
            1 if ty.is_base() => {
                let s = self.term(&b(), depth - 1);
                let t = self.term(&b(), depth - 1);
                Term::imp(&s, &t).unwrap()
            }
            _ => {
                let arg_ty = if self.rng.gen_ratio(2, 3) { b() } else { bb() };
                let fun = self.term(&Type::arrow(arg_ty.clone(), ty.clone()), depth - 1);
                let arg = self.term(&arg_ty, depth - 1);
                Term::app(&fun, &arg).unwrap()
            }
        }
    }
}

/// Agreement of two terms under every assignment of their free variables.
pub fn same_denotation(s: &Term, t: &Term) -> bool {
    let mut vars: Vec<Var> = s.free_vars().into_iter().collect();
    vars.extend(t.free_vars());
    vars.sort();
    vars.dedup();
    let g = Guard::default();
    assignments(&vars, g).unwrap().iter().all(|a| eval(s, a, g).unwrap() == eval(t, a, g).unwrap())
}

/// Formulas built from `leaves` with unary functions `unary` and `→`,
/// grouped by symbol count (each leaf, function symbol and arrow counts one).
/// Entry `n` holds the formulas of size `n`.
pub fn formulas_by_size(leaves: &[Term], unary: &[Term], max: usize) -> Vec<Vec<Term>> {
    let mut by: Vec<Vec<Term>> = vec![Vec::new(); max + 1];
    if max >= 1 {
        by[1] = leaves.to_vec();
    }
    for n in 2..=max {
        let mut out = Vec::new();
        for f in unary {
            for s in &by[n - 1] {
                out.push(Term::app(f, s).unwrap());
            }
        }
        for k in 1..n - 1 {
            for s in &by[k] {
                for t in &by[n - 1 - k] {
                    out.push(Term::imp(s, t).unwrap());
                }
            }
        }
        by[n] = out;
    }
    by
}

pub mod derivations;
