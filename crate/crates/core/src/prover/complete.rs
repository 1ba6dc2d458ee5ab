//! The completeness construction: closed formulas, Enum, Rep and All at every
//! type, and proofs of arbitrary valid formulas by closing over their free
//! variables.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::derived::{and_intro, assumptions, br, cut_derive, ded, goal, lam, mp, sub_derive, triv, weaken_to};
use super::taut::{taut_prove, taut_prove_with};
use super::{ProveError, ProveResult};
use crate::context::{ContextPath, Step};
use crate::normalize::beta_normalize;
use crate::proofsys::{Checker, Derivation, Sequent};
use crate::quote::{big_and, big_or, eq_apply, eq_term, equiv, forall_apply, forall_term, quote};
use crate::semantics::{apply_value, countermodel, enum_values, eval, value_count, Assignment, Guard, Value};
use crate::term::{fresh_name, Kind, Term, Var};
use crate::types::Type;

/// True when `s` is built from variables of type `B`, `⊥` and `→` only.
pub fn is_propositional(s: &Term) -> bool {
    fn go(t: &Term, seen: &mut HashSet<usize>) -> bool {
        if seen.contains(&t.addr()) {
            return true;
        }
        let ok = match t.kind() {
            Kind::Bot => true,
            Kind::Free(v) => v.ty().is_base(),
            _ => match t.as_imp() {
                Some((a, b)) => go(a, seen) && go(b, seen),
                None => false,
            },
        };
        if ok {
            seen.insert(t.addr());
        }
        ok
    }
    s.is_formula() && go(s, &mut HashSet::new())
}

/// Splits `s ≐σ t` into `(s, t)`.
fn as_eq(e: &Term, ty: &Type, guard: Guard) -> ProveResult<(Term, Term)> {
    let bad = || ProveError::Internal(format!("not an identity at {}: {}", ty, e));
    let (h, t) = e.as_app().ok_or_else(bad)?;
    let (q, s) = h.as_app().ok_or_else(bad)?;
    if *q != eq_term(ty, guard)? {
        return Err(bad());
    }
    Ok((s.clone(), t.clone()))
}

fn app(f: &Term, a: &Term) -> ProveResult<Term> {
    Ok(Term::app(f, a)?)
}

/// Builds certified derivations. Results for Enum, All and the closed
/// identities between quote terms are cached per type.
pub struct Prover {
    guard: Guard,
    checker: Checker,
    all: HashMap<Type, Derivation>,
    enums: HashMap<(Type, Var), Derivation>,
    rei: HashMap<(Type, Type, u64, u64), Derivation>,
}

impl Default for Prover {
    fn default() -> Self {
        Prover::new(Guard::default())
    }
}

impl Prover {
    pub fn new(guard: Guard) -> Prover {
        Prover { guard, checker: Checker::new(), all: HashMap::new(), enums: HashMap::new(), rei: HashMap::new() }
    }

    pub fn guard(&self) -> Guard {
        self.guard
    }

    fn certify(&mut self, d: Derivation) -> ProveResult<Derivation> {
        self.checker.check(&d).map_err(ProveError::Certificate)?;
        Ok(d)
    }

    /// `⊢ s` for a closed valid formula: β-normalize, prove the propositional
    /// normal form as a tautology and convert back with one Lam node.
    pub fn closed_prove(&mut self, s: &Term) -> ProveResult<Derivation> {
        if !s.is_formula() {
            return Err(crate::error::TypeError::NotAFormula(s.ty().clone()).into());
        }
        if !s.is_closed() {
            return Err(ProveError::NotClosed);
        }
        let nf = beta_normalize(s);
        if !is_propositional(&nf) {
            return Err(ProveError::Internal(format!("closed normal form is not propositional: {}", nf)));
        }
        if eval(&nf, &Assignment::new(), self.guard)? != Value::Bit(true) {
            return Err(ProveError::NotValid { countermodel: Assignment::new() });
        }
        let d = taut_prove(&nf)?;
        lam(s, &d)
    }

    /// `⊢ ⋀_i ⋁_j x_ij ≡ ⋁_φ ⋀_i x_iφ(i)`, with `φ` ranging over `J^I` in
    /// lexicographic order (row 0 varies slowest).
    pub fn distrib_derive(&self, rows: &[Vec<Var>]) -> ProveResult<Derivation> {
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width || r.iter().any(|v| !v.ty().is_base())) {
            return Err(ProveError::Internal("distribution needs a rectangular matrix of formulas".into()));
        }
        let count = u32::try_from(rows.len())
            .ok()
            .and_then(|n| (width as u64).checked_pow(n))
            .filter(|&c| c <= self.guard.0)
            .ok_or(ProveError::TooWide { rows: rows.len(), cols: width, limit: self.guard.0 })?;
        let matrix: Vec<Vec<Term>> = rows.iter().map(|r| r.iter().map(Term::var).collect()).collect();
        let lhs = big_and(&matrix.iter().map(|r| big_or(r)).collect::<Result<Vec<_>, _>>()?)?;
        let mut disjuncts = Vec::with_capacity(count as usize);
        let mut phi = vec![0usize; rows.len()];
        for _ in 0..count {
            let row: Vec<Term> = phi.iter().enumerate().map(|(i, &j)| matrix[i][j].clone()).collect();
            disjuncts.push(big_and(&row)?);
            for k in (0..phi.len()).rev() {
                phi[k] += 1;
                if phi[k] < width {
                    break;
                }
                phi[k] = 0;
            }
        }
        let rhs = big_or(&disjuncts)?;
        let opaque: Vec<Term> = matrix.concat();
        taut_prove_with(&equiv(&lhs, &rhs)?, &opaque)
    }

    /// `⊢ ↓τ(ab) ≐τ (↓στ a)(↓σ b)`
    pub fn prop_rei_derive(&mut self, sigma: &Type, tau: &Type, a: &Value, b: &Value) -> ProveResult<Derivation> {
        let key = (sigma.clone(), tau.clone(), a.index(), b.index());
        if let Some(d) = self.rei.get(&key) {
            return Ok(d.clone());
        }
        let g = self.guard;
        let st = Type::arrow(sigma.clone(), tau.clone());
        let ab = apply_value(a, b)?;
        let s = eq_apply(&quote(tau, &ab, g)?, &app(&quote(&st, a, g)?, &quote(sigma, b, g)?)?, g)?;
        let d = self.closed_prove(&s)?;
        self.rei.insert(key, d.clone());
        Ok(d)
    }

    /// `⊢ ⋁_a (↓σ a) ≐σ x`
    pub fn enum_derive(&mut self, sigma: &Type, x: &Var) -> ProveResult<Derivation> {
        let key = (sigma.clone(), x.clone());
        if let Some(d) = self.enums.get(&key) {
            return Ok(d.clone());
        }
        let d = self.enum_build(sigma, x)?;
        self.enums.insert(key, d.clone());
        Ok(d)
    }

    fn enum_target(&self, sigma: &Type, x: &Term) -> ProveResult<Term> {
        let g = self.guard;
        let items = enum_values(sigma, g)?
            .iter()
            .map(|a| Ok(eq_apply(&quote(sigma, a, g)?, x, g)?))
            .collect::<ProveResult<Vec<_>>>()?;
        Ok(big_or(&items)?)
    }

    fn enum_build(&mut self, sigma: &Type, x: &Var) -> ProveResult<Derivation> {
        let g = self.guard;
        let xt = Term::var(x);
        let target = self.enum_target(sigma, &xt)?;
        let Some((s1, s2)) = sigma.split() else {
            let d = taut_prove_with(&beta_normalize(&target), std::slice::from_ref(&xt))?;
            return lam(&target, &d);
        };
        let (s1, s2) = (s1.clone(), s2.clone());
        let z = Var::generated("z", &s2);
        let d_z = self.enum_derive(&s2, &z)?;
        let bs = enum_values(&s1, g)?;
        let cs = enum_values(&s2, g)?;
        let args: Vec<Term> = bs.iter().map(|b| app(&xt, &quote(&s1, b, g)?)).collect::<ProveResult<_>>()?;

        // ⊢ ⋀_b ⋁_c ↓c ≐ x(↓b)
        let mut rows = Vec::with_capacity(bs.len());
        for xb in &args {
            rows.push(sub_derive(&d_z, &z, xb)?);
        }
        let mut d = rows.pop().expect("types are inhabited");
        while let Some(r) = rows.pop() {
            d = and_intro(&r, &d)?;
        }

        // distribute, then instantiate the matrix
        let vars: Vec<Vec<Var>> = (0..bs.len())
            .map(|i| (0..cs.len()).map(|j| Var::generated(&format!("p{}_{}", i, j), &Type::Base)).collect())
            .collect();
        let mut d_dist = self.distrib_derive(&vars)?;
        for (i, xb) in args.iter().enumerate() {
            for (j, c) in cs.iter().enumerate() {
                let entry = eq_apply(&quote(&s2, c, g)?, xb, g)?;
                d_dist = sub_derive(&d_dist, &vars[i][j], &entry)?;
            }
        }
        let Some((lhs, rhs)) = crate::quote::as_equiv(goal(&d_dist)) else {
            return Err(ProveError::Internal("distribution lemma is not an equivalence".into()));
        };
        let (lhs, rhs) = (lhs.clone(), rhs.clone());
        d = br(&ContextPath::empty(), &lhs, &rhs, &d_dist, &d)?;

        // replace ↓(ab) by (↓a)(↓b) at every position
        let values = enum_values(sigma, g)?;
        let mut markers = Vec::new();
        let mut disjuncts = Vec::with_capacity(values.len());
        for (k, _) in values.iter().enumerate() {
            let mut conj = Vec::with_capacity(bs.len());
            for (i, xb) in args.iter().enumerate() {
                let m = Var::generated(&format!("m{}_{}", k, i), &s2);
                conj.push(eq_apply(&Term::var(&m), xb, g)?);
                markers.push((m, k, i));
            }
            disjuncts.push(big_and(&conj)?);
        }
        let marked = big_or(&disjuncts)?;
        for (m, k, i) in &markers {
            let d_rei = self.prop_rei_derive(&s1, &s2, &values[*k], &bs[*i])?;
            for dirs in ContextPath::positions_of(&marked, m) {
                let (c, _) = ContextPath::focus(goal(&d), &dirs, |_, _| unreachable!("no binders above a marker"))
                    .ok_or_else(|| ProveError::Internal("marker position not found".into()))?;
                d = self.rep_derive(&s2, &d_rei, &d, &c)?;
            }
        }
        lam(&target, &d)
    }

    /// From `A ⊢ s ≐σ t` and `A ⊢ C[s]` derive `A ⊢ C[t]`.
    pub fn rep_derive(&mut self, sigma: &Type, d_eq: &Derivation, d_body: &Derivation, c: &ContextPath) -> ProveResult<Derivation> {
        let g = self.guard;
        let e = goal(d_eq).clone();
        let (s, t) = as_eq(&e, sigma, g)?;
        let a: BTreeSet<Term> = assumptions(d_eq).union(assumptions(d_body)).cloned().collect();
        if !c.admissible(a.iter()) {
            return Err(ProveError::NotAdmissible);
        }
        let Some((s1, s2)) = sigma.split() else {
            let d_iff = lam(&equiv(&s, &t)?, d_eq)?;
            return br(c, &s, &t, &d_iff, d_body);
        };
        let (s1, s2) = (s1.clone(), s2.clone());

        let mut used = BTreeSet::new();
        e.collect_free(&mut used);
        for f in &a {
            f.collect_free(&mut used);
        }
        used.extend(c.binders());
        let names: BTreeSet<String> = used.iter().map(|v| v.name().to_string()).collect();
        let y = Var::new(fresh_name(Var::generated("y", &s1).name(), &names), s1.clone());
        let yt = Term::var(&y);
        let (sy, ty) = (app(&s, &yt)?, app(&t, &yt)?);
        let inner = eq_apply(&sy, &ty, g)?;
        let pred = Term::lam(&y, &inner);

        // s ≐ t ⊢ ∀y. s y ≐ t y
        let d_all = lam(&forall_apply(&y, &inner, g)?, &triv(&BTreeSet::new(), &e)?)?;
        // ∀y. s y ≐ t y ⊢ s y ≐ t y
        let (f, x, generic) = self.all_generic(&s1)?;
        let inst = sub_derive(&generic, &x, &yt)?;
        let inst = sub_derive(&inst, &f, &pred)?;
        let inst = lam(&inner, &inst)?;
        let d_point = cut_derive(&cut_derive(&inst, &[d_all])?, std::slice::from_ref(d_eq))?;

        // A ⊢ C[λy. s y], recurse under the new binder, then η back
        let d_eta = lam(&c.plug(&Term::lam(&y, &sy))?, d_body)?;
        let d_t = self.rep_derive(&s2, &d_point, &d_eta, &c.with(Step::UnderLam(y)))?;
        lam(&c.plug(&t)?, &d_t)
    }

    /// `{∀σ f'} ⊢ f' x'` for the generic variables of the type.
    fn all_generic(&mut self, sigma: &Type) -> ProveResult<(Var, Var, Derivation)> {
        let f = Var::generated("f", &Type::arrow(sigma.clone(), Type::Base));
        let x = Var::generated("x", sigma);
        if let Some(d) = self.all.get(sigma) {
            return Ok((f, x, d.clone()));
        }
        let g = self.guard;
        let (ft, xt) = (Term::var(&f), Term::var(&x));
        let q = app(&forall_term(sigma, g)?, &ft)?;
        let fx = app(&ft, &xt)?;
        let values = enum_values(sigma, g)?;
        let quotes: Vec<Term> = values.iter().map(|a| quote(sigma, a, g)).collect::<Result<_, _>>()?;
        let fa: Vec<Term> = quotes.iter().map(|qa| app(&ft, qa)).collect::<ProveResult<_>>()?;
        let all_fa = big_and(&fa)?;
        let q_imp = |t: &Term| Term::imp(&q, t);

        let mut items = Vec::with_capacity(values.len());
        let mut hyps = Vec::with_capacity(values.len());
        for (k, qa) in quotes.iter().enumerate() {
            let mut opaque = vec![fa[k].clone()];
            opaque.extend(fa.iter().cloned());
            let d = taut_prove_with(&Term::imp(&all_fa, &fa[k])?, &opaque)?;
            let d = lam(&q_imp(&fa[k])?, &d)?;
            let p = eq_apply(qa, &xt, g)?;
            let d = Derivation::weak(&p, &d)?;
            let path = ContextPath::new(vec![
                Step::IntoArg(app(&Term::imp_const(), &q)?),
                Step::IntoArg(ft.clone()),
            ]);
            let d = self.rep_derive(sigma, &triv(&BTreeSet::new(), &p)?, &d, &path)?;
            items.push(ded(&p, &d)?);
            hyps.push(p);
        }
        let mut d = items.pop().expect("types are inhabited");
        while let Some(r) = items.pop() {
            d = and_intro(&r, &d)?;
        }
        let conj = goal(&d).clone();
        let schema = Term::imp(&conj, &Term::imp(&big_or(&hyps)?, &q_imp(&fx)?)?)?;
        let mut opaque = vec![fx.clone(), q.clone()];
        opaque.extend(hyps.iter().cloned());
        let d_schema = taut_prove_with(&schema, &opaque)?;
        let d = mp(&d_schema, &d)?;
        let d = mp(&d, &self.enum_derive(sigma, &x)?)?;
        let qs: BTreeSet<Term> = [q.clone()].into();
        let d = mp(&weaken_to(&d, &qs)?, &triv(&qs, &q)?)?;
        self.all.insert(sigma.clone(), d.clone());
        Ok((f, x, d))
    }

    /// `{∀σ f} ⊢ f x`
    pub fn all_derive(&mut self, sigma: &Type, f: &Var, x: &Var) -> ProveResult<Derivation> {
        let (gf, gx, d) = self.all_generic(sigma)?;
        if f.ty() != gf.ty() || x.ty() != gx.ty() {
            return Err(crate::error::TypeError::Mismatch(gf.ty().clone(), f.ty().clone()).into());
        }
        let d = sub_derive(&d, &gx, &Term::var(x))?;
        sub_derive(&d, &gf, &Term::var(f))
    }

    /// A checked derivation of `∅ ⇒ s` for a valid formula `s`.
    pub fn prove(&mut self, s: &Term) -> ProveResult<Derivation> {
        if !s.is_formula() {
            return Err(crate::error::TypeError::NotAFormula(s.ty().clone()).into());
        }
        let vars: Vec<Var> = s.free_vars().into_iter().collect();
        if let Some(v) = vars.iter().find(|v| v.is_generated()) {
            return Err(ProveError::ReservedName(v.name().to_string()));
        }
        for v in &vars {
            value_count(v.ty(), self.guard)?;
        }
        if let Some(countermodel) = countermodel(s, self.guard)? {
            return Err(ProveError::NotValid { countermodel });
        }
        // substitution instances of tautologies need no quantifier reasoning
        if let Ok(d) = taut_prove(&beta_normalize(s)) {
            return self.certify(lam(s, &d)?);
        }
        // R[i] = ∀x_i ... ∀x_n. s
        let mut closures = vec![s.clone()];
        for v in vars.iter().rev() {
            let body = closures.last().unwrap();
            closures.push(forall_apply(v, body, self.guard)?);
        }
        closures.reverse();
        let mut d = self.closed_prove(&closures[0])?;
        for (i, v) in vars.iter().enumerate() {
            let body = &closures[i + 1];
            let (f, x, generic) = self.all_generic(v.ty())?;
            let inst = sub_derive(&generic, &f, &Term::lam(v, body))?;
            let inst = sub_derive(&inst, &x, &Term::var(v))?;
            let inst = lam(body, &inst)?;
            d = cut_derive(&inst, &[d])?;
        }
        if !assumptions(&d).is_empty() || goal(&d) != s {
            return Err(ProveError::Internal(format!("prover concluded {}", d.conclusion())));
        }
        self.certify(d)
    }

    /// A checked derivation of a valid sequent `A ⇒ s`, obtained from a proof
    /// of `a1 → ... → an → s`.
    pub fn prove_sequent(&mut self, q: &Sequent) -> ProveResult<Derivation> {
        let a = q.assumptions();
        let mut s = q.conclusion().clone();
        for h in a.iter().rev() {
            s = Term::imp(h, &s)?;
        }
        let mut d = match self.prove(&s) {
            Err(ProveError::NotValid { countermodel }) => return Err(ProveError::NotValid { countermodel }),
            other => other?,
        };
        for h in a {
            d = mp(&d, &triv(a, h)?)?;
        }
        let d = weaken_to(&d, a)?;
        self.certify(d)
    }
}
