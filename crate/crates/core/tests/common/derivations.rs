//! Random rule compositions and single-node corruptions of derivations.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ptt_core::context::{ContextPath, Dir};
use ptt_core::normalize::beta_normalize;
use ptt_core::proofsys::ErrorClass;
use ptt_core::prover::{ref_derive, taut_prove, taut_prove_with};
use ptt_core::quote::{conj, disj, equiv, neg};
use ptt_core::{Derivation, Prover, Rule, Sequent, Term, Var};

use super::{b, bb, TermGen};

fn weaken(d: &Derivation, set: &BTreeSet<Term>) -> Derivation {
    let mut cur = d.clone();
    for s in set {
        if !cur.conclusion().assumptions().contains(s) {
            cur = Derivation::weak(s, &cur).unwrap();
        }
    }
    cur
}

/// Positions of Boolean subterms, as direction lists.
fn formula_positions(t: &Term) -> Vec<Vec<Dir>> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<Vec<Dir>>) {
        if t.is_formula() {
            out.push(path.clone());
        }
        if let Some((f, a)) = t.as_app() {
            path.push(Dir::Fun);
            go(f, path, out);
            path.pop();
            path.push(Dir::Arg);
            go(a, path, out);
            path.pop();
        } else if let ptt_core::term::Kind::Lam { body, .. } = t.kind() {
            path.push(Dir::Lam);
            go(body, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Builds derivations by applying the seven primitive rules at random,
/// starting from Triv.
pub struct Composer {
    rng: StdRng,
    terms: TermGen,
}

impl Composer {
    pub fn new(seed: u64) -> Composer {
        Composer { rng: StdRng::seed_from_u64(seed), terms: TermGen::new(seed ^ 0x9e37_79b9_7f4a_7c15) }
    }

    fn formula(&mut self) -> Term {
        self.terms.term(&b(), 2)
    }

    pub fn derivation(&mut self, steps: usize) -> Derivation {
        let goal = self.formula();
        let n = self.rng.gen_range(0..3);
        let mut a: Vec<Term> = (0..n).map(|_| self.formula()).collect();
        a.push(goal.clone());
        let mut d = Derivation::triv(a, &goal).unwrap();
        for _ in 0..steps {
            d = self.step(&d);
        }
        d
    }

    fn step(&mut self, d: &Derivation) -> Derivation {
        let a = d.conclusion().assumptions().clone();
        let c = d.conclusion().conclusion().clone();
        match self.rng.gen_range(0..7) {
            0 => {
                let s = self.formula();
                Derivation::weak(&s, d).unwrap()
            }
            1 if !a.is_empty() => {
                let i = self.rng.gen_range(0..a.len());
                let s = a.iter().nth(i).unwrap().clone();
                Derivation::ded(&s, d).unwrap()
            }
            2 => match c.as_imp() {
                Some((s, _)) => {
                    let mut a2 = a.clone();
                    a2.insert(s.clone());
                    let d1 = weaken(d, &a2);
                    Derivation::mp(&d1, &Derivation::triv(a2.iter().cloned(), s).unwrap()).unwrap()
                }
                None => {
                    // A ⊢ c from A ⊢ ¬¬c
                    let nc = neg(&c).unwrap();
                    if a.contains(&nc) {
                        return Derivation::weak(&self.formula(), d).unwrap();
                    }
                    let mut a2 = a.clone();
                    a2.insert(nc.clone());
                    let bot = Derivation::mp(&Derivation::triv(a2.iter().cloned(), &nc).unwrap(), &weaken(d, &a2)).unwrap();
                    Derivation::dn(&Derivation::ded(&nc, &bot).unwrap()).unwrap()
                }
            },
            3 => {
                let z = Var::new("z0", b());
                let u = self.formula();
                let n = beta_normalize(&c);
                let t = if n != c && self.rng.gen_bool(0.5) { n } else { Term::app(&Term::lam(&z, &c), &u).unwrap() };
                Derivation::lam(&t, d).unwrap()
            }
            4 | 5 => {
                let positions = formula_positions(&c);
                let p = &positions[self.rng.gen_range(0..positions.len())];
                let (path, s) = ContextPath::focus(&c, p, |i, l| Var::new(format!("w{}", i), l.ty().domain().unwrap().clone())).unwrap();
                let t = match self.rng.gen_range(0..3) {
                    0 => neg(&neg(&s).unwrap()).unwrap(),
                    1 => conj(&s, &s).unwrap(),
                    _ => disj(&s, &Term::bot()).unwrap(),
                };
                let eq = taut_prove_with(&equiv(&s, &t).unwrap(), std::slice::from_ref(&s)).unwrap();
                Derivation::br(&path, &s, &t, &weaken(&eq, &a), d).unwrap()
            }
            _ => {
                let refl = ref_derive(&a, &c).unwrap();
                let m = Derivation::mp(
                    &weaken(&taut_prove_with(&Term::imp(&equiv(&c, &c).unwrap(), &Term::imp(&c, &c).unwrap()).unwrap(), std::slice::from_ref(&c)).unwrap(), &a),
                    &refl,
                )
                .unwrap();
                Derivation::mp(&m, d).unwrap()
            }
        }
    }
}

fn v(name: &str) -> Term {
    Term::var(&Var::new(name, b()))
}

fn seq(a: &[Term], c: &Term) -> Sequent {
    Sequent::new(a.iter().cloned(), c.clone()).unwrap()
}

fn node(rule: Rule, a: &[Term], c: &Term, premises: &[Derivation]) -> Derivation {
    Derivation::from_parts(rule, seq(a, c), premises.to_vec())
}

/// Replaces the node at `path` by `f(node)`, rebuilding the spine above it.
fn replace_at(d: &Derivation, path: &[usize], f: &dyn Fn(&Derivation) -> Derivation) -> Derivation {
    match path.split_first() {
        None => f(d),
        Some((&i, rest)) => {
            let mut ps = d.premises().to_vec();
            ps[i] = replace_at(&ps[i], rest, f);
            Derivation::from_parts(d.rule().clone(), d.conclusion().clone(), ps)
        }
    }
}

/// A path of the given length to a node satisfying `pred`.
fn find_path(d: &Derivation, depth: usize, pred: &dyn Fn(&Derivation) -> bool) -> Option<Vec<usize>> {
    if depth == 0 {
        return pred(d).then(Vec::new);
    }
    for (i, p) in d.premises().iter().enumerate() {
        if let Some(mut rest) = find_path(p, depth - 1, pred) {
            rest.insert(0, i);
            return Some(rest);
        }
    }
    None
}

/// One case of the mutation suite.
pub struct Mutation {
    pub name: &'static str,
    pub derivation: Derivation,
    pub class: ErrorClass,
    /// Node at which the rejection must be reported.
    pub path: Vec<usize>,
}

pub fn mutation_suite() -> Vec<Mutation> {
    use ErrorClass::*;
    let (x, y) = (v("x"), v("y"));
    let f = Term::var(&Var::new("f", bb()));
    let imp = |s: &Term, t: &Term| Term::imp(s, t).unwrap();
    let t_x = Derivation::triv([x.clone()], &x).unwrap();
    let xy = imp(&x, &y);
    let yx = imp(&y, &x);
    let nnx = neg(&neg(&x).unwrap()).unwrap();

    // ⊢ x ≡ x and ⊢ x → x with the context `x → []`
    let refl = ref_derive(&BTreeSet::new(), &x).unwrap();
    let body = taut_prove(&imp(&x, &x)).unwrap();
    let body_y = taut_prove(&imp(&y, &y)).unwrap();
    let hole = ContextPath::new(vec![ptt_core::context::Step::IntoArg(Term::app(&Term::imp_const(), &x).unwrap())]);
    let br_rule = |l: &Term, r: &Term| Rule::Br { path: hole.clone(), lhs: l.clone(), rhs: r.clone() };

    // {x, y → y} ⊢ (λx. x → x) y, with the context `(λx. []) y`
    let a_cap = [x.clone(), imp(&y, &y)];
    let xb = Var::new("x", b());
    let redex = Term::app(&Term::lam(&xb, &imp(&x, &x)), &y).unwrap();
    let cap_body = Derivation::lam(&redex, &Derivation::triv(a_cap.clone(), &imp(&y, &y)).unwrap()).unwrap();
    let cap_eq = weaken(&ref_derive(&BTreeSet::new(), &imp(&x, &x)).unwrap(), &a_cap.iter().cloned().collect());
    let cap_path = ContextPath::new(vec![ptt_core::context::Step::IntoFun(y.clone()), ptt_core::context::Step::UnderLam(xb.clone())]);

    let d_xy = Derivation::triv([x.clone(), xy.clone()], &xy).unwrap();
    let d_x2 = Derivation::triv([x.clone(), xy.clone()], &x).unwrap();
    let d_yx = Derivation::triv([x.clone(), yx.clone()], &yx).unwrap();
    let d_x3 = Derivation::triv([x.clone(), yx.clone()], &x).unwrap();

    let proved = std::thread::Builder::new()
        .stack_size(1 << 26)
        .spawn(|| Prover::default().prove(&ptt_core::syntax::parse_term("var f : B->B. f bot => f top => f (f bot)").unwrap()).unwrap())
        .unwrap()
        .join()
        .unwrap();
    let unassumed = |n: &Derivation| !n.premises().is_empty() && !n.conclusion().assumptions().contains(n.conclusion().conclusion());
    let deep = find_path(&proved, 12, &unassumed).expect("a deep node");
    let bogus = |n: &Derivation| Derivation::from_parts(Rule::Triv, n.conclusion().clone(), vec![]);
    let weak_deep = find_path(&proved, 7, &|n: &Derivation| !n.premises().is_empty()).expect("a deep node");

    let mut out = vec![
        Mutation { name: "triv with an unassumed conclusion", derivation: node(Rule::Triv, &[x.clone()], &y, &[]), class: RuleMismatch, path: vec![] },
        Mutation { name: "triv with a premise", derivation: node(Rule::Triv, &[x.clone()], &x, &[t_x.clone()]), class: ArityMismatch, path: vec![] },
        Mutation { name: "weak changing the conclusion", derivation: node(Rule::Weak(y.clone()), &[x.clone(), y.clone()], &y, &[t_x.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "weak dropping its payload", derivation: node(Rule::Weak(y.clone()), &[x.clone()], &x, &[t_x.clone()]), class: AssumptionMismatch, path: vec![] },
        Mutation { name: "weak by a non-formula", derivation: node(Rule::Weak(f.clone()), &[x.clone()], &x, &[t_x.clone()]), class: NotAFormula, path: vec![] },
        Mutation { name: "weak without premise", derivation: node(Rule::Weak(y.clone()), &[x.clone(), y.clone()], &x, &[]), class: ArityMismatch, path: vec![] },
        Mutation { name: "ded with the wrong antecedent", derivation: node(Rule::Ded(x.clone()), &[], &imp(&y, &x), &[t_x.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "ded with the wrong consequent", derivation: node(Rule::Ded(x.clone()), &[], &xy, &[t_x.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "ded adding an assumption", derivation: node(Rule::Ded(x.clone()), &[y.clone()], &imp(&x, &x), &[t_x.clone()]), class: AssumptionMismatch, path: vec![] },
        Mutation { name: "ded by a non-formula", derivation: node(Rule::Ded(f.clone()), &[], &imp(&x, &x), &[t_x.clone()]), class: NotAFormula, path: vec![] },
        Mutation { name: "ded with two premises", derivation: node(Rule::Ded(x.clone()), &[], &imp(&x, &x), &[t_x.clone(), t_x.clone()]), class: ArityMismatch, path: vec![] },
        Mutation { name: "mp on a non-implication", derivation: node(Rule::Mp, &[x.clone()], &x, &[t_x.clone(), t_x.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "mp with a mismatched antecedent", derivation: node(Rule::Mp, &[x.clone(), yx.clone()], &x, &[d_yx.clone(), d_x3.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "mp with the wrong consequent", derivation: node(Rule::Mp, &[x.clone(), xy.clone()], &x, &[d_xy.clone(), d_x2.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "mp across assumption sets", derivation: node(Rule::Mp, &[x.clone(), xy.clone()], &y, &[d_xy.clone(), t_x.clone()]), class: AssumptionMismatch, path: vec![] },
        Mutation { name: "mp with one premise", derivation: node(Rule::Mp, &[x.clone(), xy.clone()], &y, &[d_xy.clone()]), class: ArityMismatch, path: vec![] },
        Mutation { name: "dn without double negation", derivation: node(Rule::Dn, &[x.clone()], &x, &[t_x.clone()]), class: RuleMismatch, path: vec![] },
        Mutation {
            name: "dn changing assumptions",
            derivation: node(Rule::Dn, &[], &x, &[Derivation::triv([nnx.clone()], &nnx).unwrap()]),
            class: AssumptionMismatch,
            path: vec![],
        },
        Mutation { name: "lam to an inequivalent formula", derivation: node(Rule::Lam, &[x.clone()], &y, &[t_x.clone()]), class: NotLambdaEquivalent, path: vec![] },
        Mutation { name: "lam changing assumptions", derivation: node(Rule::Lam, &[x.clone(), y.clone()], &x, &[t_x.clone()]), class: AssumptionMismatch, path: vec![] },
        Mutation { name: "br without the equivalence", derivation: node(br_rule(&x, &y), &[], &imp(&x, &y), &[body.clone(), body.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "br on a body lacking the left side", derivation: node(br_rule(&x, &x), &[], &imp(&x, &x), &[refl.clone(), body_y.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "br with the wrong conclusion", derivation: node(br_rule(&x, &x), &[], &imp(&x, &y), &[refl.clone(), body.clone()]), class: RuleMismatch, path: vec![] },
        Mutation { name: "br by a non-formula", derivation: node(br_rule(&f, &f), &[], &imp(&x, &x), &[refl.clone(), body.clone()]), class: NotAFormula, path: vec![] },
        Mutation {
            name: "br across assumption sets",
            derivation: node(br_rule(&x, &x), &[y.clone()], &imp(&x, &x), &[refl.clone(), Derivation::weak(&y, &body).unwrap()]),
            class: AssumptionMismatch,
            path: vec![],
        },
        Mutation {
            name: "br capturing an assumption variable",
            derivation: Derivation::br(&cap_path, &imp(&x, &x), &imp(&x, &x), &cap_eq, &cap_body).unwrap(),
            class: AdmissibilityViolation,
            path: vec![],
        },
        Mutation { name: "unjustified step deep in a prover output", derivation: replace_at(&proved, &deep, &bogus), class: RuleMismatch, path: deep.clone() },
    ];
    // a corrupted inner node whose conclusion is kept: only that node is at fault
    let drop_premise = |n: &Derivation| Derivation::from_parts(n.rule().clone(), n.conclusion().clone(), n.premises()[..n.premises().len() - 1].to_vec());
    out.push(Mutation { name: "missing premise inside a prover output", derivation: replace_at(&proved, &weak_deep, &drop_premise), class: ArityMismatch, path: weak_deep });
    out
}
