//! Sequents, derivation trees for the seven rules and the proof checker.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::context::ContextPath;
use crate::error::TypeError;
use crate::normalize::lambda_equiv;
use crate::quote::{equiv, neg};
use crate::term::Term;

/// `A ⇒ s`: a finite set of formulas and a formula.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    assumptions: Arc<BTreeSet<Term>>,
    conclusion: Term,
}

impl Sequent {
    pub fn new(assumptions: impl IntoIterator<Item = Term>, conclusion: Term) -> Result<Sequent, TypeError> {
        let assumptions: BTreeSet<Term> = assumptions.into_iter().collect();
        for a in assumptions.iter().chain(std::iter::once(&conclusion)) {
            if !a.is_formula() {
                return Err(TypeError::NotAFormula(a.ty().clone()));
            }
        }
        Ok(Sequent { assumptions: Arc::new(assumptions), conclusion })
    }

    pub(crate) fn from_set(assumptions: Arc<BTreeSet<Term>>, conclusion: Term) -> Sequent {
        Sequent { assumptions, conclusion }
    }

    /// `∅ ⇒ s`
    pub fn goal(conclusion: Term) -> Result<Sequent, TypeError> {
        Sequent::new(std::iter::empty(), conclusion)
    }

    pub fn assumptions(&self) -> &BTreeSet<Term> {
        &self.assumptions
    }

    pub fn conclusion(&self) -> &Term {
        &self.conclusion
    }

    fn same_assumptions(&self, other: &Sequent) -> bool {
        Arc::ptr_eq(&self.assumptions, &other.assumptions) || self.assumptions == other.assumptions
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_sequent(self, true))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_sequent(self, f.alternate()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Triv,
    /// Adds the formula to the assumptions.
    Weak(Term),
    /// Discharges the formula.
    Ded(Term),
    Mp,
    Dn,
    Lam,
    /// Replaces `lhs` by `rhs` at the hole of the context.
    Br { path: ContextPath, lhs: Term, rhs: Term },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Triv => "triv",
            Rule::Weak(_) => "weak",
            Rule::Ded(_) => "ded",
            Rule::Mp => "mp",
            Rule::Dn => "dn",
            Rule::Lam => "lam",
            Rule::Br { .. } => "br",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Triv => 0,
            Rule::Weak(_) | Rule::Ded(_) | Rule::Dn | Rule::Lam => 1,
            Rule::Mp | Rule::Br { .. } => 2,
        }
    }

    /// One of the five rules of the propositional subsystem.
    pub fn is_propositional(&self) -> bool {
        !matches!(self, Rule::Lam | Rule::Br { .. })
    }
}

struct DNode {
    rule: Rule,
    conclusion: Sequent,
    premises: Vec<Derivation>,
}

/// A derivation tree. Subtrees are reference counted and may be shared.
#[derive(Clone)]
pub struct Derivation(Arc<DNode>);

/// Failure to build a node because a premise has the wrong shape.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("premise of {rule} must conclude {expected}")]
    Premise { rule: &'static str, expected: &'static str },
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl Derivation {
    /// A node with an explicitly given conclusion. Nothing is verified.
    pub fn from_parts(rule: Rule, conclusion: Sequent, premises: Vec<Derivation>) -> Derivation {
        Derivation(Arc::new(DNode { rule, conclusion, premises }))
    }

    /// `A, s ⇒ s`
    pub fn triv(assumptions: impl IntoIterator<Item = Term>, s: &Term) -> Result<Derivation, TypeError> {
        let mut set: BTreeSet<Term> = assumptions.into_iter().collect();
        set.insert(s.clone());
        Ok(Derivation::from_parts(Rule::Triv, Sequent::new(set, s.clone())?, vec![]))
    }

    /// From `A ⇒ t` conclude `A ∪ {s} ⇒ t`.
    pub fn weak(s: &Term, d: &Derivation) -> Result<Derivation, TypeError> {
        if !s.is_formula() {
            return Err(TypeError::NotAFormula(s.ty().clone()));
        }
        let prem = d.conclusion();
        let set = if prem.assumptions.contains(s) {
            prem.assumptions.clone()
        } else {
            let mut set = (*prem.assumptions).clone();
            set.insert(s.clone());
            Arc::new(set)
        };
        let c = Sequent::from_set(set, prem.conclusion.clone());
        Ok(Derivation::from_parts(Rule::Weak(s.clone()), c, vec![d.clone()]))
    }

    /// From `A ⇒ t` conclude `A \ {s} ⇒ s → t`.
    pub fn ded(s: &Term, d: &Derivation) -> Result<Derivation, TypeError> {
        let prem = d.conclusion();
        let imp = Term::imp(s, &prem.conclusion)?;
        let set = if prem.assumptions.contains(s) {
            let mut set = (*prem.assumptions).clone();
            set.remove(s);
            Arc::new(set)
        } else {
            prem.assumptions.clone()
        };
        Ok(Derivation::from_parts(Rule::Ded(s.clone()), Sequent::from_set(set, imp), vec![d.clone()]))
    }

    /// From `A ⇒ s → t` and `A ⇒ s` conclude `A ⇒ t`.
    pub fn mp(d1: &Derivation, d2: &Derivation) -> Result<Derivation, ShapeError> {
        let prem = d1.conclusion();
        let (_, t) = prem
            .conclusion
            .as_imp()
            .ok_or(ShapeError::Premise { rule: "mp", expected: "an implication" })?;
        let c = Sequent::from_set(prem.assumptions.clone(), t.clone());
        Ok(Derivation::from_parts(Rule::Mp, c, vec![d1.clone(), d2.clone()]))
    }

    /// From `A ⇒ ¬¬s` conclude `A ⇒ s`.
    pub fn dn(d: &Derivation) -> Result<Derivation, ShapeError> {
        let prem = d.conclusion();
        let shape = ShapeError::Premise { rule: "dn", expected: "a double negation" };
        let (inner, b) = prem.conclusion.as_imp().ok_or(shape.clone())?;
        let (s, b2) = inner.as_imp().ok_or(shape.clone())?;
        if !b.is_bot() || !b2.is_bot() {
            return Err(shape);
        }
        let c = Sequent::from_set(prem.assumptions.clone(), s.clone());
        Ok(Derivation::from_parts(Rule::Dn, c, vec![d.clone()]))
    }

    /// From `A ⇒ s` conclude `A ⇒ t`.
    pub fn lam(t: &Term, d: &Derivation) -> Result<Derivation, TypeError> {
        if !t.is_formula() {
            return Err(TypeError::NotAFormula(t.ty().clone()));
        }
        let c = Sequent::from_set(d.conclusion().assumptions.clone(), t.clone());
        Ok(Derivation::from_parts(Rule::Lam, c, vec![d.clone()]))
    }

    /// From `A ⇒ s ≡ t` and `A ⇒ C[s]` conclude `A ⇒ C[t]`.
    pub fn br(path: &ContextPath, s: &Term, t: &Term, d_eq: &Derivation, d_body: &Derivation) -> Result<Derivation, TypeError> {
        let target = path.plug(t)?;
        if !target.is_formula() {
            return Err(TypeError::NotAFormula(target.ty().clone()));
        }
        let c = Sequent::from_set(d_body.conclusion().assumptions.clone(), target);
        let rule = Rule::Br { path: path.clone(), lhs: s.clone(), rhs: t.clone() };
        Ok(Derivation::from_parts(rule, c, vec![d_eq.clone(), d_body.clone()]))
    }

    pub fn rule(&self) -> &Rule {
        &self.0.rule
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.0.conclusion
    }

    pub fn premises(&self) -> &[Derivation] {
        &self.0.premises
    }

    pub fn ptr_eq(&self, other: &Derivation) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Distinct nodes, counting shared subtrees once.
    pub fn dag_size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(d.addr()) {
                stack.extend(d.premises().iter().cloned());
            }
        }
        seen.len()
    }

    /// Nodes of the tree obtained by unsharing every subtree (saturating).
    pub fn tree_size(&self) -> u64 {
        fn go(d: &Derivation, memo: &mut HashMap<usize, u64>) -> u64 {
            if let Some(&n) = memo.get(&d.addr()) {
                return n;
            }
            let n = d.premises().iter().fold(1u64, |acc, p| acc.saturating_add(go(p, memo)));
            memo.insert(d.addr(), n);
            n
        }
        go(self, &mut HashMap::new())
    }

    /// Names of the rules occurring anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<&'static str> {
        let mut seen = HashSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(d.addr()) {
                out.insert(d.rule().name());
                stack.extend(d.premises().iter().cloned());
            }
        }
        out
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{:?}]", self.rule().name(), self.conclusion())
    }
}

pub fn conclusion(d: &Derivation) -> &Sequent {
    d.conclusion()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    ArityMismatch,
    RuleMismatch,
    AssumptionMismatch,
    NotLambdaEquivalent,
    AdmissibilityViolation,
    NotAFormula,
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorClass::ArityMismatch => "arity mismatch",
            ErrorClass::RuleMismatch => "rule mismatch",
            ErrorClass::AssumptionMismatch => "assumption mismatch",
            ErrorClass::NotLambdaEquivalent => "not lambda equivalent",
            ErrorClass::AdmissibilityViolation => "admissibility violation",
            ErrorClass::NotAFormula => "not a formula",
        };
        f.write_str(s)
    }
}

/// A rejected node: premise indices from the root, the failed condition and
/// a description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{class} at node {}: {detail}", display_path(.path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub class: ErrorClass,
    pub detail: String,
}

fn display_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn fail(class: ErrorClass, detail: impl Into<String>) -> Result<(), (ErrorClass, String)> {
    Err((class, detail.into()))
}

fn check_node(d: &Derivation) -> Result<(), (ErrorClass, String)> {
    use ErrorClass::*;
    let rule = d.rule();
    let ps = d.premises();
    if ps.len() != rule.arity() {
        return fail(ArityMismatch, format!("{} takes {} premises, found {}", rule.name(), rule.arity(), ps.len()));
    }
    let c = d.conclusion();
    let formula = |t: &Term| -> Result<(), (ErrorClass, String)> {
        if t.is_formula() {
            Ok(())
        } else {
            fail(NotAFormula, format!("payload has type {}", t.ty()))
        }
    };
    match rule {
        Rule::Triv => {
            if !c.assumptions.contains(&c.conclusion) {
                return fail(RuleMismatch, "conclusion is not an assumption");
            }
        }
        Rule::Weak(s) => {
            formula(s)?;
            let p = ps[0].conclusion();
            if p.conclusion != c.conclusion {
                return fail(RuleMismatch, "weakening changed the conclusion");
            }
            let mut expected = (*p.assumptions).clone();
            expected.insert(s.clone());
            if *c.assumptions != expected {
                return fail(AssumptionMismatch, "assumptions are not the premise's plus the payload");
            }
        }
        Rule::Ded(s) => {
            formula(s)?;
            let p = ps[0].conclusion();
            match c.conclusion.as_imp() {
                Some((a, t)) if a == s && *t == p.conclusion => {}
                _ => return fail(RuleMismatch, "conclusion is not the payload implying the premise's conclusion"),
            }
            let mut expected = (*c.assumptions).clone();
            expected.insert(s.clone());
            if *p.assumptions != expected {
                return fail(AssumptionMismatch, "premise assumptions are not the conclusion's plus the payload");
            }
        }
        Rule::Mp => {
            let (p1, p2) = (ps[0].conclusion(), ps[1].conclusion());
            match p1.conclusion.as_imp() {
                Some((s, t)) => {
                    if *s != p2.conclusion {
                        return fail(RuleMismatch, "second premise is not the antecedent of the first");
                    }
                    if *t != c.conclusion {
                        return fail(RuleMismatch, "conclusion is not the consequent of the first premise");
                    }
                }
                None => return fail(RuleMismatch, "first premise is not an implication"),
            }
            if !p1.same_assumptions(c) || !p2.same_assumptions(c) {
                return fail(AssumptionMismatch, "premises and conclusion have different assumptions");
            }
        }
        Rule::Dn => {
            let p = ps[0].conclusion();
            let nn = neg(&neg(&c.conclusion).expect("formula")).expect("formula");
            if p.conclusion != nn {
                return fail(RuleMismatch, "premise is not the double negation of the conclusion");
            }
            if !p.same_assumptions(c) {
                return fail(AssumptionMismatch, "premise and conclusion have different assumptions");
            }
        }
        Rule::Lam => {
            let p = ps[0].conclusion();
            if !p.same_assumptions(c) {
                return fail(AssumptionMismatch, "premise and conclusion have different assumptions");
            }
            if !lambda_equiv(&p.conclusion, &c.conclusion).unwrap_or(false) {
                return fail(NotLambdaEquivalent, "premise and conclusion are not lambda equivalent");
            }
        }
        Rule::Br { path, lhs, rhs } => {
            formula(lhs)?;
            formula(rhs)?;
            let (p1, p2) = (ps[0].conclusion(), ps[1].conclusion());
            if p1.conclusion != equiv(lhs, rhs).expect("formulas") {
                return fail(RuleMismatch, "first premise is not the equivalence of the payload terms");
            }
            match path.plug(lhs) {
                Ok(t) if t == p2.conclusion => {}
                Ok(_) => return fail(RuleMismatch, "second premise is not the context filled with the left side"),
                Err(e) => return fail(RuleMismatch, format!("context does not accept the left side: {}", e)),
            }
            match path.plug(rhs) {
                Ok(t) if t == c.conclusion => {}
                _ => return fail(RuleMismatch, "conclusion is not the context filled with the right side"),
            }
            if !p1.same_assumptions(c) || !p2.same_assumptions(c) {
                return fail(AssumptionMismatch, "premises and conclusion have different assumptions");
            }
            if !path.admissible(c.assumptions.iter()) {
                return fail(AdmissibilityViolation, "context captures a variable free in the assumptions");
            }
        }
    }
    Ok(())
}

/// A checker that remembers verified nodes. Verified nodes are kept alive, so
/// a remembered node is never confused with a later allocation.
#[derive(Default)]
pub struct Checker {
    verified: HashMap<usize, Derivation>,
}

impl Checker {
    pub fn new() -> Checker {
        Checker::default()
    }

    pub fn check(&mut self, d: &Derivation) -> Result<(), CheckError> {
        let mut local: HashMap<usize, Derivation> = HashMap::new();
        let mut stack = vec![(d.clone(), Vec::new())];
        while let Some((node, path)) = stack.pop() {
            let addr = node.addr();
            if self.verified.contains_key(&addr) || local.contains_key(&addr) {
                continue;
            }
            if let Err((class, detail)) = check_node(&node) {
                return Err(CheckError { path, class, detail });
            }
            for (i, p) in node.premises().iter().enumerate().rev() {
                let mut sub = path.clone();
                sub.push(i);
                stack.push((p.clone(), sub));
            }
            local.insert(addr, node);
        }
        self.verified.extend(local);
        Ok(())
    }
}

/// Checks every node of the derivation.
pub fn check(d: &Derivation) -> Result<(), CheckError> {
    Checker::new().check(d)
}
