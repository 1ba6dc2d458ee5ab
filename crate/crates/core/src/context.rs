//! One-hole contexts represented as paths from the root to the hole.

use std::collections::BTreeSet;

use crate::error::TypeError;
use crate::term::{Kind, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Descend into the body of `λx. []`.
    UnderLam(Var),
    /// Descend into the function position of `[] arg`.
    IntoFun(Term),
    /// Descend into the argument position of `fun []`.
    IntoArg(Term),
}

/// A context `C`, read from the root to the hole. Sibling terms may mention
/// the binders of enclosing `UnderLam` steps as free variables; plugging binds
/// them, so capture is deliberate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextPath {
    steps: Vec<Step>,
}

/// A direction inside a term, independent of sibling contents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Lam,
    Fun,
    Arg,
}

impl ContextPath {
    pub fn empty() -> ContextPath {
        ContextPath::default()
    }

    pub fn new(steps: Vec<Step>) -> ContextPath {
        ContextPath { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn with(&self, step: Step) -> ContextPath {
        let mut c = self.clone();
        c.push(step);
        c
    }

    /// The variables bound on the way to the hole.
    pub fn binders(&self) -> BTreeSet<Var> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::UnderLam(x) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }

    /// `C[s]`: inserts `s` at the hole without renaming.
    pub fn plug(&self, s: &Term) -> Result<Term, TypeError> {
        let mut cur = s.clone();
        for step in self.steps.iter().rev() {
            cur = match step {
                Step::UnderLam(x) => Term::lam(x, &cur),
                Step::IntoFun(arg) => Term::app(&cur, arg).map_err(hole_error)?,
                Step::IntoArg(fun) => Term::app(fun, &cur).map_err(hole_error)?,
            };
        }
        Ok(cur)
    }

    /// No binder on the path is free in any of the given formulas.
    pub fn admissible<'a>(&self, assumptions: impl IntoIterator<Item = &'a Term>) -> bool {
        let binders = self.binders();
        if binders.is_empty() {
            return true;
        }
        assumptions
            .into_iter()
            .all(|a| binders.iter().all(|x| !a.occurs_free(x)))
    }

    /// Builds the context leading to the position `dirs` inside `term`, and
    /// returns it with the subterm found there. Binders crossed on the way are
    /// opened with the variables yielded by `binder`.
    pub fn focus(
        term: &Term,
        dirs: &[Dir],
        mut binder: impl FnMut(usize, &Term) -> Var,
    ) -> Option<(ContextPath, Term)> {
        let mut steps = Vec::with_capacity(dirs.len());
        let mut cur = term.clone();
        for (i, d) in dirs.iter().enumerate() {
            cur = match (d, cur.kind()) {
                (Dir::Lam, Kind::Lam { .. }) => {
                    let x = binder(i, &cur);
                    let body = cur.open_lam_with(&x)?;
                    steps.push(Step::UnderLam(x));
                    body
                }
                (Dir::Fun, Kind::App(f, a)) => {
                    steps.push(Step::IntoFun(a.clone()));
                    f.clone()
                }
                (Dir::Arg, Kind::App(f, a)) => {
                    steps.push(Step::IntoArg(f.clone()));
                    a.clone()
                }
                _ => return None,
            };
        }
        Some((ContextPath { steps }, cur))
    }

    /// All positions at which `needle` occurs in `haystack`, in left-to-right
    /// order. Bound variables are never matched.
    pub fn positions_of(haystack: &Term, needle: &Var) -> Vec<Vec<Dir>> {
        fn go(t: &Term, needle: &Var, path: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
            if !t.occurs_free(needle) {
                return;
            }
            match t.kind() {
                Kind::Free(v) if v == needle => out.push(path.clone()),
                Kind::Lam { body, .. } => {
                    path.push(Dir::Lam);
                    go(body, needle, path, out);
                    path.pop();
                }
                Kind::App(f, a) => {
                    path.push(Dir::Fun);
                    go(f, needle, path, out);
                    path.pop();
                    path.push(Dir::Arg);
                    go(a, needle, path, out);
                    path.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(haystack, needle, &mut Vec::new(), &mut out);
        out
    }
}

fn hole_error(e: TypeError) -> TypeError {
    match e {
        TypeError::ArgumentMismatch { expected, found } => TypeError::HoleMismatch { expected, found },
        other => other,
    }
}

pub fn plug(c: &ContextPath, s: &Term) -> Result<Term, TypeError> {
    c.plug(s)
}

pub fn admissible<'a>(c: &ContextPath, assumptions: impl IntoIterator<Item = &'a Term>) -> bool {
    c.admissible(assumptions)
}
