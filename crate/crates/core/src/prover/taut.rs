//! Tautology proofs in the propositional subsystem.
//!
//! The engine splits on atoms (in a fixed order) until three-valued evaluation
//! decides the formula, derives `L ⊢ s` from the literals `L` of each branch by
//! structural recursion, and merges branches with a case-split derivation.
//! Defined connectives are treated as units: their children are proved
//! separately and combined through a small lemma about the connective.

use std::collections::{BTreeSet, HashMap};

use super::derived::{assumptions, cut_derive, ded, goal, mp, triv};
use super::{ProveError, ProveResult};
use crate::proofsys::Derivation;
use crate::quote::{neg, shape, Shape};
use crate::term::Term;

#[derive(Clone, Copy)]
enum Node<'a> {
    Atom(usize),
    Bot,
    Imp(&'a Term, &'a Term),
    Or(&'a Term, &'a Term),
    And(&'a Term, &'a Term),
    Equiv(&'a Term, &'a Term),
}

struct Engine {
    /// Recognise defined connectives.
    sugar: bool,
    index: HashMap<Term, usize>,
    atoms: Vec<Term>,
    values: Vec<Option<bool>>,
    kleene: HashMap<usize, Option<bool>>,
    derived: HashMap<usize, Derivation>,
}

fn not3(a: Option<bool>) -> Option<bool> {
    a.map(|b| !b)
}

fn imp3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(false), _) | (_, Some(true)) => Some(true),
        (Some(true), Some(false)) => Some(false),
        _ => None,
    }
}

fn or3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

fn and3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    not3(or3(not3(a), not3(b)))
}

fn iff3(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    Some(a? == b?)
}

impl Engine {
    fn new(sugar: bool) -> Engine {
        Engine {
            sugar,
            index: HashMap::new(),
            atoms: Vec::new(),
            values: Vec::new(),
            kleene: HashMap::new(),
            derived: HashMap::new(),
        }
    }

    fn add_atom(&mut self, t: &Term) {
        if !self.index.contains_key(t) {
            self.index.insert(t.clone(), self.atoms.len());
            self.atoms.push(t.clone());
            self.values.push(None);
        }
    }

    fn node<'a>(&self, u: &'a Term) -> Node<'a> {
        if let Some(&i) = self.index.get(u) {
            return Node::Atom(i);
        }
        if u.is_bot() {
            return Node::Bot;
        }
        if self.sugar {
            let n = match shape(u) {
                Shape::Or(a, b) => Some(Node::Or(a, b)),
                Shape::And(a, b) => Some(Node::And(a, b)),
                Shape::Equiv(a, b) => Some(Node::Equiv(a, b)),
                _ => None,
            };
            if let Some(n @ (Node::Or(a, b) | Node::And(a, b) | Node::Equiv(a, b))) = n {
                if !self.hides_atom(u, a, b) {
                    return n;
                }
            }
        }
        match u.as_imp() {
            Some((a, b)) => Node::Imp(a, b),
            None => Node::Atom(usize::MAX),
        }
    }

    /// Whether an implication node strictly between `u` and the children `a`,
    /// `b` of its connective is an atom, which the connective would skip.
    fn hides_atom(&self, u: &Term, a: &Term, b: &Term) -> bool {
        let mut stack: Vec<&Term> = match u.as_imp() {
            Some((l, r)) => vec![l, r],
            None => return false,
        };
        while let Some(t) = stack.pop() {
            if t == a || t == b {
                continue;
            }
            if let Some((l, r)) = t.as_imp() {
                if self.index.contains_key(t) {
                    return true;
                }
                stack.push(l);
                stack.push(r);
            }
        }
        false
    }

    /// Registers the maximal atomic subterms of `u`, left to right.
    fn collect_atoms(&mut self, u: &Term, seen: &mut std::collections::HashSet<usize>) {
        if !seen.insert(u.addr()) {
            return;
        }
        match self.node(u) {
            Node::Atom(usize::MAX) => self.add_atom(u),
            Node::Atom(_) | Node::Bot => {}
            Node::Imp(a, b) | Node::Or(a, b) | Node::And(a, b) | Node::Equiv(a, b) => {
                self.collect_atoms(a, seen);
                self.collect_atoms(b, seen);
            }
        }
    }

    fn eval(&mut self, u: &Term) -> Option<bool> {
        if let Some(v) = self.kleene.get(&u.addr()) {
            return *v;
        }
        let v = match self.node(u) {
            Node::Atom(i) => self.values.get(i).copied().flatten(),
            Node::Bot => Some(false),
            Node::Imp(a, b) => {
                let a = self.eval(a);
                let b = self.eval(b);
                imp3(a, b)
            }
            Node::Or(a, b) => {
                let a = self.eval(a);
                let b = self.eval(b);
                or3(a, b)
            }
            Node::And(a, b) => {
                let a = self.eval(a);
                let b = self.eval(b);
                and3(a, b)
            }
            Node::Equiv(a, b) => {
                let a = self.eval(a);
                let b = self.eval(b);
                iff3(a, b)
            }
        };
        self.kleene.insert(u.addr(), v);
        v
    }

    fn literal(u: &Term, value: bool) -> ProveResult<Term> {
        if value {
            Ok(u.clone())
        } else {
            Ok(neg(u)?)
        }
    }

    fn known(&mut self, u: &Term) -> ProveResult<bool> {
        self.eval(u).ok_or_else(|| ProveError::Internal(format!("value of {} is undetermined", u)))
    }

    /// `L ⊢ u` or `L ⊢ ¬u`, according to the current value of `u`, where `L`
    /// holds literals of the current assignment.
    fn derive(&mut self, u: &Term) -> ProveResult<Derivation> {
        if let Some(d) = self.derived.get(&u.addr()) {
            return Ok(d.clone());
        }
        let value = self.known(u)?;
        let d = match self.node(u) {
            Node::Atom(_) => {
                let l = Self::literal(u, value)?;
                triv(&BTreeSet::new(), &l)?
            }
            Node::Bot => ded(u, &triv(&BTreeSet::new(), u)?)?,
            Node::Imp(a, b) => self.derive_imp(u, a, b, value)?,
            Node::Or(a, b) | Node::And(a, b) | Node::Equiv(a, b) => self.derive_connective(u, a, b, value)?,
        };
        self.derived.insert(u.addr(), d.clone());
        Ok(d)
    }

    fn derive_imp(&mut self, u: &Term, a: &Term, b: &Term, value: bool) -> ProveResult<Derivation> {
        if value {
            if self.eval(b) == Some(true) {
                let d_b = self.derive(b)?;
                return ded(a, &d_b);
            }
            // a is false
            let d_na = self.derive(a)?;
            if b.is_bot() {
                return Ok(d_na);
            }
            let mut with_a = assumptions(&d_na).clone();
            with_a.insert(a.clone());
            let falsum = mp(&d_na, &triv(&with_a, a)?)?;
            let nnb = ded(&neg(b)?, &falsum)?;
            let d_b = Derivation::dn(&nnb)?;
            return ded(a, &d_b);
        }
        let d_a = self.derive(a)?;
        let d_nb = self.derive(b)?;
        let mut gamma: BTreeSet<Term> = assumptions(&d_a).union(assumptions(&d_nb)).cloned().collect();
        gamma.insert(u.clone());
        let d_b = mp(&triv(&gamma, u)?, &d_a)?;
        let falsum = if b.is_bot() { d_b } else { mp(&d_nb, &d_b)? };
        ded(u, &falsum)
    }

    /// Proves the connective over its children as opaque atoms, then cuts in
    /// the derivations of the children that the lemma relies on.
    fn derive_connective(&mut self, u: &Term, a: &Term, b: &Term, value: bool) -> ProveResult<Derivation> {
        let mut sub = Engine::new(false);
        sub.add_atom(a);
        sub.add_atom(b);
        let va = self.eval(a);
        let vb = self.eval(b);
        sub.values[0] = va;
        let ib = sub.index[b];
        sub.values[ib] = vb;
        let lemma = sub.split(u, value)?;
        let mut cuts = Vec::new();
        for (c, v) in [(a, va), (b, vb)] {
            if let Some(v) = v {
                let l = Self::literal(c, v)?;
                if assumptions(&lemma).contains(&l) {
                    cuts.push(self.derive(c)?);
                }
            }
        }
        cut_derive(&lemma, &cuts)
    }

    /// Derives `L ⊢ [v]u` where `L` contains only literals fixed before the
    /// call; atoms left open are eliminated by case splits.
    fn split(&mut self, u: &Term, target: bool) -> ProveResult<Derivation> {
        self.kleene.clear();
        match self.eval(u) {
            Some(v) if v == target => {
                self.derived.clear();
                return self.derive(u);
            }
            Some(_) => {
                let assignment = self
                    .atoms
                    .iter()
                    .zip(&self.values)
                    .map(|(t, v)| (t.clone(), v.unwrap_or(false)))
                    .collect();
                return Err(ProveError::NotTautologous { assignment });
            }
            None => {}
        }
        let i = self
            .values
            .iter()
            .position(|v| v.is_none())
            .ok_or_else(|| ProveError::Internal("no atom left to split on".into()))?;
        let p = self.atoms[i].clone();
        let np = neg(&p)?;
        self.values[i] = Some(true);
        let d1 = self.split(u, target);
        self.values[i] = None;
        let d1 = d1?;
        if !assumptions(&d1).contains(&p) {
            return Ok(d1);
        }
        self.values[i] = Some(false);
        let d0 = self.split(u, target);
        self.values[i] = None;
        let d0 = d0?;
        if !assumptions(&d0).contains(&np) {
            return Ok(d0);
        }
        let g = Self::literal(u, target)?;
        case_split(&p, &np, &g, &d1, &d0)
    }
}

/// From `Γ, p ⊢ g` and `Γ, ¬p ⊢ g` derive `Γ ⊢ g`.
fn case_split(p: &Term, np: &Term, g: &Term, d1: &Derivation, d0: &Derivation) -> ProveResult<Derivation> {
    let ng = neg(g)?;
    let not_g = triv(&BTreeSet::new(), &ng)?;
    // Γ, ¬g ⊢ ¬p
    let not_p = ded(p, &mp(&not_g, d1)?)?;
    // Γ, ¬g ⊢ g
    let g_again = mp(&ded(np, d0)?, &not_p)?;
    let falsum = mp(&not_g, &g_again)?;
    Ok(Derivation::dn(&ded(&ng, &falsum)?)?)
}

/// A derivation of `∅ ⇒ s` in the propositional subsystem.
pub fn taut_prove(s: &Term) -> ProveResult<Derivation> {
    taut_prove_with(s, &[])
}

/// Like [`taut_prove`], treating each term of `opaque` as an atom. Splits
/// happen in the order of `opaque`, then in the order atoms occur in `s`.
pub fn taut_prove_with(s: &Term, opaque: &[Term]) -> ProveResult<Derivation> {
    if !s.is_formula() {
        return Err(crate::error::TypeError::NotAFormula(s.ty().clone()).into());
    }
    let mut e = Engine::new(true);
    for t in opaque {
        e.add_atom(t);
    }
    e.collect_atoms(s, &mut Default::default());
    let d = e.split(s, true)?;
    if !assumptions(&d).is_empty() || goal(&d) != s {
        return Err(ProveError::Internal(format!("tautology engine produced {}", d.conclusion())));
    }
    Ok(d)
}
