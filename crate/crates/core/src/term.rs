//! Terms over named free variables and nameless (de Bruijn) bound variables.
//!
//! Bound variables are stored as indices, so two terms compare equal exactly
//! when they are α-equivalent. Binder names survive only as printing hints and
//! are ignored by `Eq`, `Ord` and `Hash`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::TypeError;
use crate::types::Type;

pub(crate) fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(a << 6).wrapping_add(a >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn str_fingerprint(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// A variable: a name together with its type. The constants `⊥` and `→` are
/// not variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    ty: Type,
}

impl Var {
    pub fn new(name: impl Into<Arc<str>>, ty: Type) -> Var {
        Var { name: name.into(), ty }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ty(&self) -> &Type {
        &self.ty
    }

    /// Name used for variables introduced by the prover: `base'code`, where
    /// `code` identifies the type. Names carrying `'` never clash across types.
    pub fn generated(base: &str, ty: &Type) -> Var {
        Var::new(format!("{}'{}", base, ty.code()), ty.clone())
    }

    pub fn is_generated(&self) -> bool {
        self.name.contains('\'')
    }

    fn fingerprint(&self) -> u64 {
        mix(str_fingerprint(&self.name), self.ty.fingerprint())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.ty)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Picks `base` if unused, otherwise `base` with a numeric suffix strictly
/// larger than every suffix already in use for that base.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    let max = used
        .iter()
        .filter_map(|n| n.strip_prefix(stem))
        .map(|rest| if rest.is_empty() { Some(0) } else { rest.parse::<u64>().ok() })
        .flatten()
        .max()
        .unwrap_or(0);
    format!("{}{}", stem, max + 1)
}

/// Fresh variable of the given type whose name avoids every name in `used`.
pub fn fresh_var(base: &str, ty: &Type, used: &BTreeSet<String>) -> Var {
    Var::new(fresh_name(base, used), ty.clone())
}

#[derive(Clone)]
pub enum Kind {
    Free(Var),
    /// De Bruijn index; 0 refers to the nearest enclosing binder.
    Bound(u32),
    Bot,
    Imp,
    /// Abstraction. The binder type is the domain of the node's type.
    Lam { hint: Arc<str>, body: Term },
    App(Term, Term),
}

struct Node {
    kind: Kind,
    ty: Type,
    hash: u64,
    /// One more than the largest loose bound index (0 when locally closed).
    loose: u32,
    /// True when no free variable occurs.
    closed: bool,
    size: u64,
}

/// An immutable, well-typed term. Cloning is cheap.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    fn mk(kind: Kind, ty: Type) -> Term {
        let (hash, loose, closed, size) = match &kind {
            Kind::Free(v) => (mix(1, v.fingerprint()), 0, false, 1),
            Kind::Bound(i) => (mix(mix(2, *i as u64), ty.fingerprint()), i + 1, true, 1),
            Kind::Bot => (3, 0, true, 1),
            Kind::Imp => (4, 0, true, 1),
            Kind::Lam { body, .. } => (
                mix(mix(5, ty.fingerprint()), body.0.hash),
                body.0.loose.saturating_sub(1),
                body.0.closed,
                body.0.size.saturating_add(1),
            ),
            Kind::App(f, a) => (
                mix(mix(6, f.0.hash), a.0.hash),
                f.0.loose.max(a.0.loose),
                f.0.closed && a.0.closed,
                f.0.size.saturating_add(a.0.size).saturating_add(1),
            ),
        };
        Term(Arc::new(Node { kind, ty, hash, loose, closed, size }))
    }

    pub fn var(v: &Var) -> Term {
        Term::mk(Kind::Free(v.clone()), v.ty.clone())
    }

    pub fn bot() -> Term {
        Term::mk(Kind::Bot, Type::Base)
    }

    /// The implication constant `→ : B->B->B`.
    pub fn imp_const() -> Term {
        Term::mk(Kind::Imp, Type::arrow(Type::Base, Type::arrow(Type::Base, Type::Base)))
    }

    pub(crate) fn bound(index: u32, ty: Type) -> Term {
        Term::mk(Kind::Bound(index), ty)
    }

    pub fn app(fun: &Term, arg: &Term) -> Result<Term, TypeError> {
        match fun.ty().split() {
            Some((dom, cod)) if dom == arg.ty() => {
                let cod = cod.clone();
                Ok(Term::mk(Kind::App(fun.clone(), arg.clone()), cod))
            }
            Some((dom, _)) => Err(TypeError::ArgumentMismatch {
                expected: dom.clone(),
                found: arg.ty().clone(),
            }),
            None => Err(TypeError::NotAFunction(fun.ty().clone())),
        }
    }

    /// Application without the type check; callers guarantee well-typedness.
    pub(crate) fn app_unchecked(fun: &Term, arg: &Term) -> Term {
        let cod = fun.ty().codomain().expect("application of a non-function").clone();
        Term::mk(Kind::App(fun.clone(), arg.clone()), cod)
    }

    pub fn apps(fun: &Term, args: &[Term]) -> Result<Term, TypeError> {
        args.iter().try_fold(fun.clone(), |f, a| Term::app(&f, a))
    }

    /// `s → t` for formulas `s`, `t`.
    pub fn imp(s: &Term, t: &Term) -> Result<Term, TypeError> {
        if !s.is_formula() {
            return Err(TypeError::NotAFormula(s.ty().clone()));
        }
        if !t.is_formula() {
            return Err(TypeError::NotAFormula(t.ty().clone()));
        }
        Ok(Term::imp_unchecked(s, t))
    }

    pub(crate) fn imp_unchecked(s: &Term, t: &Term) -> Term {
        let head = Term::mk(Kind::App(Term::imp_const(), s.clone()), Type::arrow(Type::Base, Type::Base));
        Term::mk(Kind::App(head, t.clone()), Type::Base)
    }

    /// `λx. body`, binding every free occurrence of `x` in `body`.
    pub fn lam(x: &Var, body: &Term) -> Term {
        let abstracted = body.abstract_var(x, 0);
        Term::lam_raw(x.name.clone(), x.ty.clone(), abstracted)
    }

    pub(crate) fn lam_raw(hint: Arc<str>, dom: Type, body: Term) -> Term {
        let ty = Type::arrow(dom, body.ty().clone());
        Term::mk(Kind::Lam { hint, body }, ty)
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    pub fn is_formula(&self) -> bool {
        self.ty().is_base()
    }

    pub fn is_closed(&self) -> bool {
        self.0.closed
    }

    pub(crate) fn loose(&self) -> u32 {
        self.0.loose
    }

    /// Number of nodes in the tree (saturating).
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is_bot(&self) -> bool {
        matches!(self.kind(), Kind::Bot)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.kind() {
            Kind::Free(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            Kind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    /// Splits `s → t` into `(s, t)`.
    pub fn as_imp(&self) -> Option<(&Term, &Term)> {
        let (f, t) = self.as_app()?;
        let (c, s) = f.as_app()?;
        matches!(c.kind(), Kind::Imp).then_some((s, t))
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Kind::App(f, a) = cur.kind() {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// For an abstraction, the binder variable named by its hint and the body
    /// opened with that variable. Callers that need capture-freedom should use
    /// [`Term::open_lam_with`].
    pub fn open_lam_with(&self, x: &Var) -> Option<Term> {
        match self.kind() {
            Kind::Lam { body, .. } => {
                debug_assert_eq!(Some(x.ty()), self.ty().domain());
                Some(body.instantiate(&Term::var(x), 0))
            }
            _ => None,
        }
    }

    pub fn lam_hint(&self) -> Option<&str> {
        match self.kind() {
            Kind::Lam { hint, .. } => Some(hint),
            _ => None,
        }
    }

    /// The variables occurring free, in canonical order.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<Var>) {
        let mut seen = HashSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if t.is_closed() || !seen.insert(t.addr()) {
                continue;
            }
            match t.kind() {
                Kind::Free(v) => {
                    out.insert(v.clone());
                }
                Kind::Lam { body, .. } => stack.push(body),
                Kind::App(f, a) => {
                    stack.push(a);
                    stack.push(f);
                }
                _ => {}
            }
        }
    }

    pub fn occurs_free(&self, x: &Var) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if t.is_closed() || !seen.insert(t.addr()) {
                continue;
            }
            match t.kind() {
                Kind::Free(v) if v == x => return true,
                Kind::Lam { body, .. } => stack.push(body),
                Kind::App(f, a) => {
                    stack.push(a);
                    stack.push(f);
                }
                _ => {}
            }
        }
        false
    }

    /// Capture-free substitution `self[x := t]`.
    pub fn substitute(&self, x: &Var, t: &Term) -> Result<Term, TypeError> {
        if x.ty() != t.ty() {
            return Err(TypeError::ArgumentMismatch { expected: x.ty().clone(), found: t.ty().clone() });
        }
        Ok(self.subst_free(x, t))
    }

    fn subst_free(&self, x: &Var, t: &Term) -> Term {
        self.rewrite(0, &mut HashMap::new(), &mut |node, _| match node.kind() {
            Kind::Free(v) if v == x => Some(t.clone()),
            _ if node.is_closed() => Some(node.clone()),
            _ => None,
        })
    }

    /// Bottom-up rebuild; `leaf` may answer for a node (given its binder
    /// depth) before its children are visited. Results are shared between
    /// occurrences of the same node at the same depth.
    fn rewrite(
        &self,
        depth: u32,
        memo: &mut HashMap<(usize, u32), Term>,
        leaf: &mut dyn FnMut(&Term, u32) -> Option<Term>,
    ) -> Term {
        if let Some(r) = leaf(self, depth) {
            return r;
        }
        let key = (self.addr(), depth);
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let r = match self.kind() {
            Kind::Lam { hint, body } => {
                let nb = body.rewrite(depth + 1, memo, leaf);
                if nb.ptr_eq(body) {
                    self.clone()
                } else {
                    Term::mk(Kind::Lam { hint: hint.clone(), body: nb }, self.ty().clone())
                }
            }
            Kind::App(f, a) => {
                let nf = f.rewrite(depth, memo, leaf);
                let na = a.rewrite(depth, memo, leaf);
                if nf.ptr_eq(f) && na.ptr_eq(a) {
                    self.clone()
                } else {
                    Term::mk(Kind::App(nf, na), self.ty().clone())
                }
            }
            _ => self.clone(),
        };
        if self.0.size >= 8 {
            memo.insert(key, r.clone());
        }
        r
    }

    /// Replaces free `x` by the bound index `depth`.
    pub(crate) fn abstract_var(&self, x: &Var, depth: u32) -> Term {
        self.rewrite(depth, &mut HashMap::new(), &mut |node, d| match node.kind() {
            Kind::Free(v) if v == x => Some(Term::bound(d, v.ty.clone())),
            _ if node.is_closed() => Some(node.clone()),
            _ => None,
        })
    }

    /// Replaces the bound index `depth` by the locally closed term `u`.
    pub(crate) fn instantiate(&self, u: &Term, depth: u32) -> Term {
        self.rewrite(depth, &mut HashMap::new(), &mut |node, d| match node.kind() {
            Kind::Bound(i) if *i == d => Some(u.clone()),
            _ if node.loose() <= d => Some(node.clone()),
            _ => None,
        })
    }

    /// True when the bound index `depth` occurs loose.
    pub(crate) fn mentions_bound(&self, depth: u32) -> bool {
        let mut seen = HashSet::new();
        let mut stack = vec![(self, depth)];
        while let Some((t, d)) = stack.pop() {
            if t.loose() <= d || !seen.insert((t.addr(), d)) {
                continue;
            }
            match t.kind() {
                Kind::Bound(i) if *i == d => return true,
                Kind::Lam { body, .. } => stack.push((body, d + 1)),
                Kind::App(f, a) => {
                    stack.push((a, d));
                    stack.push((f, d));
                }
                _ => {}
            }
        }
        false
    }

    /// Decrements every loose index at or above `depth`; the index `depth - 1`
    /// must not occur.
    pub(crate) fn shift_down(&self, depth: u32) -> Term {
        self.rewrite(depth, &mut HashMap::new(), &mut |node, d| match node.kind() {
            Kind::Bound(i) if *i >= d => Some(Term::bound(i - 1, node.ty().clone())),
            _ if node.loose() <= d => Some(node.clone()),
            _ => None,
        })
    }

    fn rank(&self) -> u8 {
        match self.kind() {
            Kind::Bot => 0,
            Kind::Imp => 1,
            Kind::Free(_) => 2,
            Kind::Bound(_) => 3,
            Kind::Lam { .. } => 4,
            Kind::App(..) => 5,
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        eq_rec(self, other, &mut HashSet::new())
    }
}

/// Structural equality. Pairs of large subterms already found equal are
/// remembered, so comparing terms with heavy internal sharing stays linear
/// in the number of distinct nodes.
fn eq_rec(a: &Term, b: &Term, memo: &mut HashSet<(usize, usize)>) -> bool {
    if a.ptr_eq(b) {
        return true;
    }
    if a.0.hash != b.0.hash || a.0.size != b.0.size {
        return false;
    }
    let big = a.0.size >= 32;
    if big && memo.contains(&(a.addr(), b.addr())) {
        return true;
    }
    let r = match (a.kind(), b.kind()) {
        (Kind::Free(x), Kind::Free(y)) => x == y,
        (Kind::Bound(i), Kind::Bound(j)) => i == j && a.ty() == b.ty(),
        (Kind::Bot, Kind::Bot) | (Kind::Imp, Kind::Imp) => true,
        (Kind::Lam { body: b1, .. }, Kind::Lam { body: b2, .. }) => a.ty() == b.ty() && eq_rec(b1, b2, memo),
        (Kind::App(f1, a1), Kind::App(f2, a2)) => eq_rec(f1, f2, memo) && eq_rec(a1, a2, memo),
        _ => false,
    };
    if r && big {
        memo.insert((a.addr(), b.addr()));
    }
    r
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

/// A total order: by size, then by structural hash, then structurally.
impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        let quick = self.0.size.cmp(&other.0.size).then(self.0.hash.cmp(&other.0.hash));
        if quick != Ordering::Equal || self == other {
            return if quick == Ordering::Equal { Ordering::Equal } else { quick };
        }
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.kind(), other.kind()) {
            (Kind::Free(a), Kind::Free(b)) => a.cmp(b),
            (Kind::Bound(i), Kind::Bound(j)) => i.cmp(j).then_with(|| self.ty().cmp(other.ty())),
            (Kind::Lam { body: b1, .. }, Kind::Lam { body: b2, .. }) => {
                self.ty().cmp(other.ty()).then_with(|| b1.cmp(b2))
            }
            (Kind::App(f1, a1), Kind::App(f2, a2)) => f1.cmp(f2).then_with(|| a1.cmp(a2)),
            _ => Ordering::Equal,
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self, true))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self, f.alternate()))
    }
}

/// The type of a term. Every constructed term is well-typed, so this cannot
/// fail; ill-typed applications are rejected by [`Term::app`].
pub fn type_of(s: &Term) -> Type {
    s.ty().clone()
}
