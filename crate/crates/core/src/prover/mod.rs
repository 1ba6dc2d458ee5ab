//! Construction of derivations: tautologies, the derived rules and the
//! completeness construction for arbitrary valid formulas.

mod complete;
mod derived;
mod taut;

use thiserror::Error;

use crate::error::{TooLarge, TypeError};
use crate::proofsys::{CheckError, ShapeError};
use crate::semantics::{Assignment, EvalError};
use crate::term::Term;

pub use complete::{is_propositional, Prover};
pub use derived::{and_intro, cut_derive, ref_derive, sub_derive, weaken_to};
pub use taut::{taut_prove, taut_prove_with};

#[derive(Debug, Clone, Error)]
pub enum ProveError {
    #[error("formula is not valid")]
    NotValid { countermodel: Assignment },
    /// A falsifying assignment of the atoms of the propositional skeleton.
    #[error("formula is not tautologous")]
    NotTautologous { assignment: Vec<(Term, bool)> },
    #[error("formula is not closed")]
    NotClosed,
    #[error("variable `{0}` uses the prime reserved for generated names")]
    ReservedName(String),
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("distributing a {rows}x{cols} matrix exceeds the guard {limit}")]
    TooWide { rows: usize, cols: usize, limit: u64 },
    #[error("replacement context binds a variable free in the assumptions")]
    NotAdmissible,
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("constructed derivation does not check: {0}")]
    Certificate(CheckError),
    #[error("{0}")]
    Internal(String),
}

impl From<EvalError> for ProveError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::TooLarge(t) => ProveError::TooLarge(t),
            EvalError::Type(t) => ProveError::Type(t),
            EvalError::Unbound(v) => ProveError::Internal(format!("unbound variable `{}`", v)),
        }
    }
}

pub type ProveResult<T> = Result<T, ProveError>;
