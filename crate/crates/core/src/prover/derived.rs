//! Derived rules: weakening to a set, Cut, And, Ref and Sub.

use std::collections::BTreeSet;

use super::taut::{taut_prove, taut_prove_with};
use super::{ProveError, ProveResult};
use crate::context::{ContextPath, Step};
use crate::proofsys::Derivation;
use crate::quote::{conj, equiv, top};
use crate::term::{Term, Var};

pub(crate) fn assumptions(d: &Derivation) -> &BTreeSet<Term> {
    d.conclusion().assumptions()
}

pub(crate) fn goal(d: &Derivation) -> &Term {
    d.conclusion().conclusion()
}

/// Adds every formula of `set` missing from the assumptions, one Weak node each.
pub fn weaken_to(d: &Derivation, set: &BTreeSet<Term>) -> ProveResult<Derivation> {
    let mut cur = d.clone();
    for s in set {
        if !assumptions(&cur).contains(s) {
            cur = Derivation::weak(s, &cur)?;
        }
    }
    Ok(cur)
}

/// Ded, weakening first when `s` is not an assumption.
pub(crate) fn ded(s: &Term, d: &Derivation) -> ProveResult<Derivation> {
    let d = if assumptions(d).contains(s) { d.clone() } else { Derivation::weak(s, d)? };
    Ok(Derivation::ded(s, &d)?)
}

fn union(a: &BTreeSet<Term>, b: &BTreeSet<Term>) -> BTreeSet<Term> {
    a.union(b).cloned().collect()
}

/// MP after weakening both premises to the union of their assumptions.
pub(crate) fn mp(d1: &Derivation, d2: &Derivation) -> ProveResult<Derivation> {
    let u = union(assumptions(d1), assumptions(d2));
    let d1 = weaken_to(d1, &u)?;
    let d2 = weaken_to(d2, &u)?;
    match goal(&d1).as_imp() {
        Some((a, _)) if a == goal(&d2) => Ok(Derivation::mp(&d1, &d2)?),
        _ => Err(ProveError::Internal(format!("mp: {} does not match {}", goal(&d1), goal(&d2)))),
    }
}

pub(crate) fn triv(a: &BTreeSet<Term>, s: &Term) -> ProveResult<Derivation> {
    Ok(Derivation::triv(a.iter().cloned(), s)?)
}

/// BR after aligning the assumptions of both premises.
pub(crate) fn br(path: &ContextPath, s: &Term, t: &Term, d_eq: &Derivation, d_body: &Derivation) -> ProveResult<Derivation> {
    let u = union(assumptions(d_eq), assumptions(d_body));
    let d_eq = weaken_to(d_eq, &u)?;
    let d_body = weaken_to(d_body, &u)?;
    if !path.admissible(u.iter()) {
        return Err(ProveError::Internal("replacement context is not admissible".into()));
    }
    Ok(Derivation::br(path, s, t, &d_eq, &d_body)?)
}

pub(crate) fn lam(t: &Term, d: &Derivation) -> ProveResult<Derivation> {
    if goal(d) == t {
        return Ok(d.clone());
    }
    Ok(Derivation::lam(t, d)?)
}

/// From `A, s1, ..., sn ⇒ s` and `A ⇒ si` derive `A ⇒ s`. Each lemma is
/// discharged by Ded followed by MP; lemmas whose conclusion is not an
/// assumption of the main derivation are skipped.
pub fn cut_derive(main: &Derivation, lemmas: &[Derivation]) -> ProveResult<Derivation> {
    let mut cur = main.clone();
    for l in lemmas {
        let s = goal(l);
        if assumptions(&cur).contains(s) {
            cur = mp(&Derivation::ded(s, &cur)?, l)?;
        }
    }
    Ok(cur)
}

/// From `A ⇒ s1` and `A ⇒ s2` derive `A ⇒ s1 ∧ s2`.
pub fn and_intro(d1: &Derivation, d2: &Derivation) -> ProveResult<Derivation> {
    let (s1, s2) = (goal(d1), goal(d2));
    let schema = Term::imp(s1, &Term::imp(s2, &conj(s1, s2)?)?)?;
    let t = taut_prove_with(&schema, &[s1.clone(), s2.clone()])?;
    mp(&mp(&t, d1)?, d2)
}

/// `A ⇒ s ≡ s`
pub fn ref_derive(a: &BTreeSet<Term>, s: &Term) -> ProveResult<Derivation> {
    let t = taut_prove_with(&equiv(s, s)?, std::slice::from_ref(s))?;
    weaken_to(&t, a)
}

/// From `A ⇒ s` derive `A[x:=t] ⇒ s[x:=t]`: discharge `A` into `S`, rewrite
/// `⊤` to `S` inside `(λx.⊤) t`, β-reduce and restore the assumptions.
pub fn sub_derive(d: &Derivation, x: &Var, t: &Term) -> ProveResult<Derivation> {
    if t.ty() != x.ty() {
        return Err(crate::error::TypeError::Mismatch(x.ty().clone(), t.ty().clone()).into());
    }
    let a = assumptions(d).clone();
    if !goal(d).occurs_free(x) && a.iter().all(|s| !s.occurs_free(x)) {
        return Ok(d.clone());
    }
    if let Some(v) = t.as_var() {
        if v == x {
            return Ok(d.clone());
        }
    }
    // discharge every assumption
    let order: Vec<Term> = a.iter().cloned().collect();
    let mut cur = d.clone();
    for s in &order {
        cur = ded(s, &cur)?;
    }
    let big = goal(&cur).clone();
    let tp = top();

    // ⊢ ⊤ ≡ S
    let lemma = taut_prove_with(&Term::imp(&big, &equiv(&tp, &big)?)?, std::slice::from_ref(&big))?;
    let d_eq = mp(&lemma, &cur)?;
    // ⊢ (λx.⊤) t, then ⊢ (λx.S) t by BR under the binder
    let d_top = lam(&Term::app(&Term::lam(x, &tp), t)?, &taut_prove(&tp)?)?;
    let path = ContextPath::new(vec![Step::IntoFun(t.clone()), Step::UnderLam(x.clone())]);
    let d_redex = br(&path, &tp, &big, &d_eq, &d_top)?;
    // ⊢ S[x:=t] by Lam
    let mut out = lam(&big.substitute(x, t)?, &d_redex)?;

    // restore the substituted assumptions
    let a_sub: BTreeSet<Term> = order.iter().map(|s| s.substitute(x, t)).collect::<Result<_, _>>()?;
    out = weaken_to(&out, &a_sub)?;
    for s in order.iter().rev() {
        let s = s.substitute(x, t)?;
        out = mp(&out, &triv(&a_sub, &s)?)?;
    }
    Ok(out)
}
