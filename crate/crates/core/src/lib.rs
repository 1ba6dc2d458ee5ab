//! Minimal propositional type theory: simply typed terms over `⊥` and `→`,
//! their standard semantics, quote terms, a sequent calculus with a proof
//! checker, and a prover that emits checkable derivations for every valid
//! formula.

pub mod context;
pub mod error;
pub mod normalize;
pub mod proofsys;
pub mod prover;
pub mod quote;
pub mod semantics;
pub mod syntax;
pub mod term;
pub mod types;

pub use error::{ParseError, SyntaxError, TooLarge, TypeError};
pub use prover::{ProveError, Prover};
pub use proofsys::{check, CheckError, Checker, Derivation, Rule, Sequent};
pub use semantics::Guard;
pub use term::{Term, Var};
pub use types::Type;
