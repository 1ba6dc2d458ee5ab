//! Defined connectives and the closed terms that name every semantic value:
//! quote terms `↓σ a`, quantifiers `∀σ` and identity predicates `≐σ`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{TooLarge, TypeError};
use crate::semantics::{apply_value, enum_values, value_count, Guard, Value};
use crate::term::{Term, Var};
use crate::types::Type;

fn formula(s: &Term) -> Result<(), TypeError> {
    if s.is_formula() {
        Ok(())
    } else {
        Err(TypeError::NotAFormula(s.ty().clone()))
    }
}

/// `⊤ := ⊥ → ⊥`
pub fn top() -> Term {
    Term::imp_unchecked(&Term::bot(), &Term::bot())
}

/// `¬s := s → ⊥`
pub fn neg(s: &Term) -> Result<Term, TypeError> {
    formula(s)?;
    Ok(Term::imp_unchecked(s, &Term::bot()))
}

/// `s ∨ t := (s → t) → t`
pub fn disj(s: &Term, t: &Term) -> Result<Term, TypeError> {
    formula(s)?;
    formula(t)?;
    Ok(Term::imp_unchecked(&Term::imp_unchecked(s, t), t))
}

/// `s ∧ t := ¬(¬s ∨ ¬t)`
pub fn conj(s: &Term, t: &Term) -> Result<Term, TypeError> {
    neg(&disj(&neg(s)?, &neg(t)?)?)
}

/// `s ≡ t := (s → t) ∧ (t → s)`
pub fn equiv(s: &Term, t: &Term) -> Result<Term, TypeError> {
    conj(&Term::imp(s, t)?, &Term::imp(t, s)?)
}

/// Right-nested disjunction; `⊥` when empty, the element itself when single.
pub fn big_or(items: &[Term]) -> Result<Term, TypeError> {
    match items.split_last() {
        None => Ok(Term::bot()),
        Some((last, init)) => {
            formula(last)?;
            init.iter().rev().try_fold(last.clone(), |acc, s| disj(s, &acc))
        }
    }
}

/// Right-nested conjunction; `⊤` when empty, the element itself when single.
pub fn big_and(items: &[Term]) -> Result<Term, TypeError> {
    match items.split_last() {
        None => Ok(top()),
        Some((last, init)) => {
            formula(last)?;
            init.iter().rev().try_fold(last.clone(), |acc, s| conj(s, &acc))
        }
    }
}

/// A formula read through the defined connectives. Overlapping readings are
/// resolved in the order ≡, ∧, ∨, ⊤, ¬, →; `(s → ⊥) → ⊥` reads as a negation.
#[derive(Clone, Copy, Debug)]
pub enum Shape<'a> {
    Top,
    Neg(&'a Term),
    Or(&'a Term, &'a Term),
    And(&'a Term, &'a Term),
    Equiv(&'a Term, &'a Term),
    Imp(&'a Term, &'a Term),
    /// `⊥` or a formula whose head is not `→`.
    Atomic,
}

fn as_neg(u: &Term) -> Option<&Term> {
    match u.as_imp() {
        Some((s, b)) if b.is_bot() => Some(s),
        _ => None,
    }
}

fn as_and(u: &Term) -> Option<(&Term, &Term)> {
    let w = as_neg(u)?;
    let (v, nt) = w.as_imp()?;
    let (ns, nt2) = v.as_imp()?;
    if nt2 != nt {
        return None;
    }
    Some((as_neg(ns)?, as_neg(nt)?))
}

/// Splits `s ≡ t` into `(s, t)`.
pub fn as_equiv(u: &Term) -> Option<(&Term, &Term)> {
    match shape(u) {
        Shape::Equiv(s, t) => Some((s, t)),
        _ => None,
    }
}

pub fn shape(u: &Term) -> Shape<'_> {
    let Some((a, b)) = u.as_imp() else {
        return Shape::Atomic;
    };
    if let Some((p, q)) = as_and(u) {
        if let (Some((s, t)), Some((t2, s2))) = (p.as_imp(), q.as_imp()) {
            if s == s2 && t == t2 {
                return Shape::Equiv(s, t);
            }
        }
        return Shape::And(p, q);
    }
    if !b.is_bot() {
        if let Some((s, t)) = a.as_imp() {
            if t == b {
                return Shape::Or(s, t);
            }
        }
        return Shape::Imp(a, b);
    }
    if a.is_bot() {
        Shape::Top
    } else {
        Shape::Neg(a)
    }
}

#[derive(Default)]
struct Cache {
    quote: HashMap<(Type, u64), Term>,
    forall: HashMap<Type, Term>,
    eq: HashMap<Type, Term>,
}

fn cache() -> &'static Mutex<Cache> {
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn lookup<K: std::hash::Hash + Eq, F: Fn(&Cache) -> &HashMap<K, Term>>(key: &K, table: F) -> Option<Term> {
    table(&cache().lock().unwrap()).get(key).cloned()
}

/// `s ≐σ t`, i.e. the term `≐σ` applied to `s` and `t`.
pub fn eq_apply(s: &Term, t: &Term, guard: Guard) -> Result<Term, TooLarge> {
    debug_assert_eq!(s.ty(), t.ty());
    let e = eq_term(s.ty(), guard)?;
    Ok(Term::app_unchecked(&Term::app_unchecked(&e, s), t))
}

/// `∀σ x. body`, i.e. `∀σ (λx. body)`.
pub fn forall_apply(x: &Var, body: &Term, guard: Guard) -> Result<Term, TooLarge> {
    debug_assert!(body.is_formula());
    let q = forall_term(x.ty(), guard)?;
    Ok(Term::app_unchecked(&q, &Term::lam(x, body)))
}

/// The closed term `↓σ a` denoting `a`.
pub fn quote(ty: &Type, a: &Value, guard: Guard) -> Result<Term, TooLarge> {
    value_count(ty, guard)?;
    debug_assert_eq!(&a.ty(), ty);
    let key = (ty.clone(), a.index());
    if let Some(t) = lookup(&key, |c| &c.quote) {
        return Ok(t);
    }
    let args = ty.arguments();
    let vars: Vec<Var> = args
        .iter()
        .enumerate()
        .map(|(j, t)| Var::new(if args.len() == 1 { "x".to_string() } else { format!("x{}", j + 1) }, t.clone()))
        .collect();
    let domains = args.iter().map(|t| enum_values(t, guard)).collect::<Result<Vec<_>, _>>()?;
    let mut disjuncts = Vec::new();
    let mut tuple = vec![0usize; args.len()];
    loop {
        let mut v = a.clone();
        for (j, &i) in tuple.iter().enumerate() {
            v = apply_value(&v, &domains[j][i]).expect("value of declared type");
        }
        if v == Value::Bit(true) {
            let mut conjuncts = Vec::with_capacity(args.len());
            for (j, &i) in tuple.iter().enumerate() {
                let q = quote(&args[j], &domains[j][i], guard)?;
                conjuncts.push(eq_apply(&Term::var(&vars[j]), &q, guard)?);
            }
            disjuncts.push(big_and(&conjuncts).expect("formulas"));
        }
        // next tuple, last position varies fastest
        let mut j = args.len();
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            tuple[j] += 1;
            if tuple[j] < domains[j].len() {
                break;
            }
            tuple[j] = 0;
            if j == 0 {
                j = usize::MAX;
                break;
            }
        }
        if args.is_empty() || j == usize::MAX {
            break;
        }
    }
    let body = big_or(&disjuncts).expect("formulas");
    let term = vars.iter().rev().fold(body, |acc, x| Term::lam(x, &acc));
    cache().lock().unwrap().quote.insert(key, term.clone());
    Ok(term)
}

/// The closed term `∀σ := λf. ⋀_{a ∈ 𝓑σ} f (↓σ a)` of type `(σ -> B) -> B`.
pub fn forall_term(ty: &Type, guard: Guard) -> Result<Term, TooLarge> {
    value_count(ty, guard)?;
    if let Some(t) = lookup(ty, |c| &c.forall) {
        return Ok(t);
    }
    let f = Var::new("f", Type::arrow(ty.clone(), Type::Base));
    let mut items = Vec::new();
    for a in enum_values(ty, guard)? {
        items.push(Term::app_unchecked(&Term::var(&f), &quote(ty, &a, guard)?));
    }
    let term = Term::lam(&f, &big_and(&items).expect("formulas"));
    cache().lock().unwrap().forall.insert(ty.clone(), term.clone());
    Ok(term)
}

/// The closed identity predicate `≐σ : σ -> σ -> B`.
pub fn eq_term(ty: &Type, guard: Guard) -> Result<Term, TooLarge> {
    value_count(ty, guard)?;
    if let Some(t) = lookup(ty, |c| &c.eq) {
        return Ok(t);
    }
    let term = match ty {
        Type::Base => {
            let x = Var::new("x", Type::Base);
            let y = Var::new("y", Type::Base);
            let body = equiv(&Term::var(&x), &Term::var(&y)).expect("formulas");
            Term::lam(&x, &Term::lam(&y, &body))
        }
        Type::Arrow(d, c) => {
            let f = Var::new("f", ty.clone());
            let g = Var::new("g", ty.clone());
            let x = Var::new("x", (**d).clone());
            let fx = Term::app_unchecked(&Term::var(&f), &Term::var(&x));
            let gx = Term::app_unchecked(&Term::var(&g), &Term::var(&x));
            debug_assert_eq!(fx.ty(), &**c);
            let body = forall_apply(&x, &eq_apply(&fx, &gx, guard)?, guard)?;
            Term::lam(&f, &Term::lam(&g, &body))
        }
    };
    cache().lock().unwrap().eq.insert(ty.clone(), term.clone());
    Ok(term)
}
