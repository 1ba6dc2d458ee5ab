//! Concrete syntax: lexer, parser and printer for `.ptt` and `.pttp` files.

mod lexer;
mod parser;
mod printer;

pub use lexer::{tokenize, Spanned, Tok};
pub use parser::{
    parse_derivation, parse_derivation_with, parse_sequent, parse_source, parse_source_with, parse_term,
    parse_term_in, parse_type, Body, SourceUnit, RESERVED,
};
pub use printer::{
    derivation_vars, print_declarations, print_derivation, print_proof_file, print_sequent, print_term,
    print_type,
};
