mod common;

use std::collections::BTreeSet;

use common::{b, bb, big_stack};

use ptt_core::context::{ContextPath, Step};
use ptt_core::prover::{and_intro, cut_derive, ref_derive, sub_derive, taut_prove, weaken_to, ProveError};
use ptt_core::quote::{big_or, conj, eq_apply, equiv, quote, top};
use ptt_core::semantics::{enum_values, is_valid_sequent, Value};
use ptt_core::syntax::parse_term;
use ptt_core::{check, Derivation, Guard, Prover, Term, Var};

fn valid(d: &Derivation) {
    check(d).unwrap();
    let q = d.conclusion();
    let a: Vec<Term> = q.assumptions().iter().cloned().collect();
    assert!(is_valid_sequent(&a, q.conclusion(), Guard::default()).unwrap(), "{:?}", q);
}

fn var(name: &str) -> Term {
    Term::var(&Var::new(name, b()))
}

fn fx() -> Term {
    Term::app(&Term::var(&Var::new("f", bb())), &var("x")).unwrap()
}

#[test]
fn ref_instances() {
    let d = ref_derive(&BTreeSet::new(), &Term::bot()).unwrap();
    valid(&d);
    assert_eq!(d.conclusion().conclusion(), &equiv(&Term::bot(), &Term::bot()).unwrap());
    let a: BTreeSet<Term> = [var("x")].into_iter().collect();
    let d = ref_derive(&a, &fx()).unwrap();
    valid(&d);
    assert_eq!(d.conclusion().assumptions(), &a);
    assert_eq!(d.conclusion().conclusion(), &equiv(&fx(), &fx()).unwrap());
}

#[test]
fn cut_and_conjunction() {
    let (x, y) = (var("x"), var("y"));
    let a: BTreeSet<Term> = [x.clone(), y.clone()].into_iter().collect();
    let d1 = Derivation::triv(a.iter().cloned(), &x).unwrap();
    let d2 = Derivation::triv(a.iter().cloned(), &y).unwrap();
    let d = and_intro(&d1, &d2).unwrap();
    valid(&d);
    assert_eq!(d.conclusion().conclusion(), &conj(&x, &y).unwrap());

    // {x} ⊢ x → x and ⊢ x give ⊢ x → x once x is cut
    let main = weaken_to(&taut_prove(&Term::imp(&x, &x).unwrap()).unwrap(), &[x.clone()].into_iter().collect()).unwrap();
    let lemma = Derivation::triv([x.clone()], &x).unwrap();
    let cut = cut_derive(&main, &[lemma]).unwrap();
    valid(&cut);
}

#[test]
fn substitution_instances() {
    let x = Var::new("x", b());
    let d = ref_derive(&BTreeSet::new(), &var("x")).unwrap();
    let same = sub_derive(&d, &x, &var("x")).unwrap();
    assert_eq!(same.conclusion(), d.conclusion());

    let d0 = sub_derive(&d, &x, &Term::bot()).unwrap();
    valid(&d0);
    assert_eq!(d0.conclusion().conclusion(), &equiv(&Term::bot(), &Term::bot()).unwrap());

    let mut p = Prover::default();
    let e = p.enum_derive(&b(), &x).unwrap();
    let fy = Term::app(&Term::var(&Var::new("f", bb())), &var("y")).unwrap();
    let inst = sub_derive(&e, &x, &fy).unwrap();
    valid(&inst);
    assert!(inst.conclusion().conclusion().occurs_free(&Var::new("f", bb())));

    // assumptions are substituted too
    let t = Derivation::triv([var("x"), var("y")], &var("x")).unwrap();
    let s = sub_derive(&t, &x, &fy).unwrap();
    valid(&s);
    let expected: BTreeSet<Term> = [fy.clone(), var("y")].into_iter().collect();
    assert_eq!(s.conclusion().assumptions(), &expected);
    assert_eq!(s.conclusion().conclusion(), &fy);
}

#[test]
fn closed_instances() {
    let mut p = Prover::default();
    valid(&p.closed_prove(&top()).unwrap());
    let id = parse_term("(\\x:B. x) bot").unwrap();
    assert!(matches!(p.closed_prove(&id), Err(ProveError::NotValid { .. })));
    let g = Guard::default();
    let one = quote(&b(), &Value::Bit(true), g).unwrap();
    valid(&p.closed_prove(&eq_apply(&one, &top(), g).unwrap()).unwrap());
}

#[test]
fn distribution_edge_cases() {
    let p = Prover::default();
    let d = p.distrib_derive(&[]).unwrap();
    valid(&d);
    let x = Var::new("x00", b());
    let d = p.distrib_derive(&[vec![x.clone()]]).unwrap();
    valid(&d);
    assert_eq!(d.conclusion().conclusion(), &equiv(&Term::var(&x), &Term::var(&x)).unwrap());
}

#[test]
fn reification_at_base() {
    let mut p = Prover::default();
    let g = Guard::default();
    for a in enum_values(&bb(), g).unwrap() {
        for v in enum_values(&b(), g).unwrap() {
            let d = p.prop_rei_derive(&b(), &b(), &a, &v).unwrap();
            valid(&d);
        }
    }
    // negation applied to 1 quotes 0, i.e. ⊥, on the left
    let neg = Value::parse("[1,0]", &bb()).unwrap();
    let d = p.prop_rei_derive(&b(), &b(), &neg, &Value::Bit(true)).unwrap();
    let lhs = d.conclusion().conclusion().spine().1[0].clone();
    assert!(lhs.is_bot());
}

#[test]
fn enumeration_at_arrow() {
    big_stack(|| {
        let mut p = Prover::default();
        let x = Var::new("x", bb());
        let d = p.enum_derive(&bb(), &x).unwrap();
        valid(&d);
        let g = Guard::default();
        let disjuncts: Vec<Term> = enum_values(&bb(), g)
            .unwrap()
            .iter()
            .map(|a| eq_apply(&quote(&bb(), a, g).unwrap(), &Term::var(&x), g).unwrap())
            .collect();
        assert_eq!(d.conclusion().conclusion(), &big_or(&disjuncts).unwrap());
    })
}

#[test]
fn replacement_at_base() {
    let mut p = Prover::default();
    let g = Guard::default();
    let x = var("x");
    let f = Term::var(&Var::new("f", bb()));
    let hyp = equiv(&x, &top()).unwrap();
    let a: BTreeSet<Term> = [hyp.clone(), fx()].into_iter().collect();
    // A ⊢ x ≐B ⊤ from A ⊢ x ≡ ⊤ by Lam
    let d_eq = Derivation::lam(&eq_apply(&x, &top(), g).unwrap(), &Derivation::triv(a.iter().cloned(), &hyp).unwrap()).unwrap();
    let d_body = Derivation::triv(a.iter().cloned(), &fx()).unwrap();
    let c = ContextPath::new(vec![Step::IntoArg(f.clone())]);
    let d = p.rep_derive(&b(), &d_eq, &d_body, &c).unwrap();
    valid(&d);
    assert_eq!(d.conclusion().conclusion(), &Term::app(&f, &top()).unwrap());

    // an empty context with s = t leaves the conclusion unchanged
    let refl = Derivation::lam(&eq_apply(&x, &x, g).unwrap(), &ref_derive(&a, &x).unwrap()).unwrap();
    let body = Derivation::triv(a.iter().cloned(), &x).unwrap();
    let d = p.rep_derive(&b(), &refl, &body, &ContextPath::empty()).unwrap();
    assert_eq!(d.conclusion().conclusion(), body.conclusion().conclusion());
}

#[test]
fn replacement_at_arrow_under_a_binder() {
    big_stack(|| {
        let mut p = Prover::default();
        let g = Guard::default();
        let f = Var::new("f", bb());
        let k = Var::new("k", bb());
        let h = Var::new("h", ptt_core::Type::arrow(bb(), b()));
        let z = Var::new("z", b());
        // A = {f ≐ k}; body λz. h f, replacing f by k inside the abstraction
        let hyp = eq_apply(&Term::var(&f), &Term::var(&k), g).unwrap();
        let d_eq = Derivation::triv([hyp.clone()], &hyp).unwrap();
        let hf = Term::app(&Term::var(&h), &Term::var(&f)).unwrap();
        let body_goal = Term::app(&Term::lam(&z, &hf), &Term::bot()).unwrap();
        let d_body = Derivation::triv([hyp.clone(), body_goal.clone()], &body_goal).unwrap();
        let c = ContextPath::new(vec![Step::IntoFun(Term::bot()), Step::UnderLam(z.clone()), Step::IntoArg(Term::var(&h))]);
        let d = p.rep_derive(&bb(), &d_eq, &d_body, &c).unwrap();
        valid(&d);
        let hk = Term::app(&Term::var(&h), &Term::var(&k)).unwrap();
        assert_eq!(d.conclusion().conclusion(), &Term::app(&Term::lam(&z, &hk), &Term::bot()).unwrap());
    })
}

#[test]
fn all_at_arrow() {
    big_stack(|| {
        let mut p = Prover::default();
        let f = Var::new("f", ptt_core::Type::arrow(bb(), b()));
        let x = Var::new("x", bb());
        let d = p.all_derive(&bb(), &f, &x).unwrap();
        valid(&d);
        assert_eq!(d.conclusion().conclusion(), &Term::app(&Term::var(&f), &Term::var(&x)).unwrap());
        assert_eq!(d.conclusion().assumptions().len(), 1);
    })
}

#[test]
fn countermodel_is_constant_zero() {
    let s = parse_term("var f : B->B. var x : B. f x").unwrap();
    match Prover::default().prove(&s) {
        Err(ProveError::NotValid { countermodel }) => {
            assert_eq!(countermodel[&Var::new("f", bb())], Value::parse("[0,0]", &bb()).unwrap());
        }
        _ => panic!("expected a countermodel"),
    }
}
