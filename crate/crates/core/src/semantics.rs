//! The standard interpretation over `{0, 1}`: finite denotations of types,
//! evaluation of terms and validity by exhaustive enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::error::{TooLarge, TypeError};
use crate::term::{Kind, Term, Var};
use crate::types::Type;

/// Default bound on the number of values of any single type.
pub const DEFAULT_GUARD: u64 = 1 << 16;

/// Upper bound on `|𝓑σ|` for every type the evaluator is allowed to touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard(pub u64);

impl Default for Guard {
    fn default() -> Self {
        Guard(DEFAULT_GUARD)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("no value assigned to `{0}`")]
    Unbound(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// An element of the denotation of a type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bit(bool),
    /// A total function, listed in the canonical order of its domain.
    Table { domain: Type, entries: Arc<[Value]> },
}

pub type Assignment = BTreeMap<Var, Value>;

/// `|𝓑σ|`, or `TooLarge` when it exceeds the guard.
pub fn value_count(ty: &Type, guard: Guard) -> Result<u64, TooLarge> {
    let too_large = || TooLarge { ty: ty.clone(), limit: guard.0 };
    let n = match ty {
        Type::Base => 2,
        Type::Arrow(d, c) => {
            let nd = value_count(d, guard).map_err(|_| too_large())?;
            let nc = value_count(c, guard).map_err(|_| too_large())?;
            let exp = u32::try_from(nd).map_err(|_| too_large())?;
            nc.checked_pow(exp).ok_or_else(too_large)?
        }
    };
    if n > guard.0 {
        Err(too_large())
    } else {
        Ok(n)
    }
}

fn count_saturating(ty: &Type) -> u64 {
    match ty {
        Type::Base => 2,
        Type::Arrow(d, c) => {
            let nd = count_saturating(d);
            let nc = count_saturating(c);
            u32::try_from(nd).ok().and_then(|e| nc.checked_pow(e)).unwrap_or(u64::MAX)
        }
    }
}

impl Value {
    pub fn bit(b: bool) -> Value {
        Value::Bit(b)
    }

    pub fn as_bit(&self) -> Option<bool> {
        match self {
            Value::Bit(b) => Some(*b),
            _ => None,
        }
    }

    pub fn ty(&self) -> Type {
        match self {
            Value::Bit(_) => Type::Base,
            Value::Table { domain, entries } => Type::arrow(domain.clone(), entries[0].ty()),
        }
    }

    /// Position in the canonical enumeration of the value's type.
    pub fn index(&self) -> u64 {
        match self {
            Value::Bit(b) => *b as u64,
            Value::Table { entries, .. } => {
                let radix = count_saturating(&entries[0].ty());
                entries.iter().fold(0u64, |acc, e| acc.wrapping_mul(radix).wrapping_add(e.index()))
            }
        }
    }

    /// Inverse of [`Value::index`]. `index` must be below `|𝓑ty|`.
    pub fn from_index(ty: &Type, index: u64) -> Value {
        match ty {
            Type::Base => Value::Bit(index == 1),
            Type::Arrow(d, c) => {
                let n = count_saturating(d) as usize;
                let radix = count_saturating(c);
                let mut digits = vec![0u64; n];
                let mut rest = index;
                for slot in digits.iter_mut().rev() {
                    *slot = rest % radix;
                    rest /= radix;
                }
                let entries: Vec<Value> = digits.into_iter().map(|i| Value::from_index(c, i)).collect();
                Value::Table { domain: (**d).clone(), entries: entries.into() }
            }
        }
    }

    /// Parses `0`, `1` or a bracketed table literal against a type.
    pub fn parse(text: &str, ty: &Type) -> Result<Value, String> {
        let mut p = ValueParser { s: text.as_bytes(), pos: 0 };
        let v = p.value(ty)?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(format!("trailing input at offset {}", p.pos));
        }
        Ok(v)
    }
}

struct ValueParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ValueParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn value(&mut self, ty: &Type) -> Result<Value, String> {
        self.ws();
        match ty {
            Type::Base => match self.s.get(self.pos) {
                Some(b'0') => {
                    self.pos += 1;
                    Ok(Value::Bit(false))
                }
                Some(b'1') => {
                    self.pos += 1;
                    Ok(Value::Bit(true))
                }
                _ => Err(format!("expected 0 or 1 at offset {}", self.pos)),
            },
            Type::Arrow(d, c) => {
                if self.s.get(self.pos) != Some(&b'[') {
                    return Err(format!("expected `[` for a value of type {} at offset {}", ty, self.pos));
                }
                self.pos += 1;
                let n = count_saturating(d);
                let mut entries = Vec::new();
                loop {
                    entries.push(self.value(c)?);
                    self.ws();
                    match self.s.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(format!("expected `,` or `]` at offset {}", self.pos)),
                    }
                }
                if entries.len() as u64 != n {
                    return Err(format!("a value of type {} needs {} entries, got {}", ty, n, entries.len()));
                }
                Ok(Value::Table { domain: (**d).clone(), entries: entries.into() })
            }
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bit(b) => write!(f, "{}", *b as u8),
            Value::Table { entries, .. } => {
                f.write_str("[")?;
                for (i, e) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", e)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All values of a type in canonical order: `0` before `1`, tables
/// lexicographically by their entries.
pub fn enum_values(ty: &Type, guard: Guard) -> Result<Vec<Value>, TooLarge> {
    let n = value_count(ty, guard)?;
    Ok((0..n).map(|i| Value::from_index(ty, i)).collect())
}

/// Function application in the standard model.
pub fn apply_value(f: &Value, a: &Value) -> Result<Value, TypeError> {
    match f {
        Value::Table { domain, entries } => {
            let ok = match (domain, a) {
                (Type::Base, Value::Bit(_)) => true,
                (Type::Arrow(..), Value::Table { .. }) => *domain == a.ty(),
                _ => false,
            };
            if !ok {
                return Err(TypeError::ArgumentMismatch { expected: domain.clone(), found: a.ty() });
            }
            Ok(entries[a.index() as usize].clone())
        }
        Value::Bit(_) => Err(TypeError::NotAFunction(Type::Base)),
    }
}

fn implication_table() -> Value {
    let row = |a: bool, b: bool| Value::Bit(!a || b);
    let column = |a: bool| Value::Table { domain: Type::Base, entries: vec![row(a, false), row(a, true)].into() };
    Value::Table { domain: Type::Base, entries: vec![column(false), column(true)].into() }
}

/// `𝓘̂ s` for the interpretation that agrees with `assignment` on variables.
pub fn eval(s: &Term, assignment: &Assignment, guard: Guard) -> Result<Value, EvalError> {
    let mut stack = Vec::new();
    eval_in(s, assignment, guard, &mut stack)
}

fn eval_in(s: &Term, asg: &Assignment, guard: Guard, stack: &mut Vec<Value>) -> Result<Value, EvalError> {
    match s.kind() {
        Kind::Bot => Ok(Value::Bit(false)),
        Kind::Imp => Ok(implication_table()),
        Kind::Free(v) => asg.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.name().to_string())),
        Kind::Bound(i) => Ok(stack[stack.len() - 1 - *i as usize].clone()),
        Kind::App(f, a) => {
            // Fast path for `s → t` avoids materialising the implication table.
            if let Some((l, r)) = s.as_imp() {
                let l = eval_in(l, asg, guard, stack)?;
                if l == Value::Bit(false) {
                    return Ok(Value::Bit(true));
                }
                return eval_in(r, asg, guard, stack);
            }
            let fv = eval_in(f, asg, guard, stack)?;
            let av = eval_in(a, asg, guard, stack)?;
            Ok(apply_value(&fv, &av)?)
        }
        Kind::Lam { body, .. } => {
            let dom = s.ty().domain().unwrap();
            let n = value_count(dom, guard)?;
            let mut entries = Vec::with_capacity(n as usize);
            for i in 0..n {
                stack.push(Value::from_index(dom, i));
                let r = eval_in(body, asg, guard, stack);
                stack.pop();
                entries.push(r?);
            }
            Ok(Value::Table { domain: dom.clone(), entries: entries.into() })
        }
    }
}

/// Every assignment of the given variables, in canonical order (the first
/// variable varies slowest).
pub fn assignments(vars: &[Var], guard: Guard) -> Result<Vec<Assignment>, TooLarge> {
    let mut domains = Vec::with_capacity(vars.len());
    for v in vars {
        domains.push(enum_values(v.ty(), guard)?);
    }
    let mut out = vec![Assignment::new()];
    for (v, dom) in vars.iter().zip(&domains) {
        let mut next = Vec::with_capacity(out.len() * dom.len());
        for partial in &out {
            for val in dom {
                let mut a = partial.clone();
                a.insert(v.clone(), val.clone());
                next.push(a);
            }
        }
        out = next;
    }
    Ok(out)
}

fn eval_formula(s: &Term, asg: &Assignment, guard: Guard) -> Result<bool, EvalError> {
    match eval(s, asg, guard)? {
        Value::Bit(b) => Ok(b),
        _ => Err(TypeError::NotAFormula(s.ty().clone()).into()),
    }
}

/// The first assignment (canonical order) that satisfies every assumption and
/// falsifies the conclusion.
pub fn sequent_countermodel(
    assumptions: &[Term],
    conclusion: &Term,
    guard: Guard,
) -> Result<Option<Assignment>, EvalError> {
    for t in assumptions.iter().chain(std::iter::once(conclusion)) {
        if !t.is_formula() {
            return Err(TypeError::NotAFormula(t.ty().clone()).into());
        }
    }
    let mut vars = conclusion.free_vars();
    for a in assumptions {
        a.collect_free(&mut vars);
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    for asg in assignments(&vars, guard)? {
        let mut satisfied = true;
        for a in assumptions {
            if !eval_formula(a, &asg, guard)? {
                satisfied = false;
                break;
            }
        }
        if satisfied && !eval_formula(conclusion, &asg, guard)? {
            return Ok(Some(asg));
        }
    }
    Ok(None)
}

/// `None` iff `s` is valid; otherwise the first falsifying assignment of its
/// free variables.
pub fn countermodel(s: &Term, guard: Guard) -> Result<Option<Assignment>, EvalError> {
    sequent_countermodel(&[], s, guard)
}

pub fn is_valid(s: &Term, guard: Guard) -> Result<bool, EvalError> {
    Ok(countermodel(s, guard)?.is_none())
}

pub fn is_valid_sequent(assumptions: &[Term], conclusion: &Term, guard: Guard) -> Result<bool, EvalError> {
    Ok(sequent_countermodel(assumptions, conclusion, guard)?.is_none())
}

/// Renders an assignment as `x = 0`, `f = [1,0]` lines.
pub fn format_assignment(asg: &Assignment) -> String {
    asg.iter().map(|(v, val)| format!("{} = {}\n", v.name(), val)).collect()
}
