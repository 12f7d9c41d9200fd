//! Regular languages tensored with the polycyclic (bracket) monoid.
//!
//! Expressions over letters and indexed bracket pairs `p_i`/`q_i` are evaluated
//! to sets of normal forms, compiled into split automata, brought into first,
//! reduced and second normal forms, and converted to and from context-free
//! grammars.

pub mod automaton;
pub mod braket;
pub mod bridge;
pub mod cli;
pub mod error;
pub mod expr;
pub mod gen;
pub mod grammar;
pub mod kleene;
pub mod normal;
pub mod tensor;
pub mod word;

pub use error::{Error, Result};
pub use expr::{parse_expr, Expr, Node};
pub use kleene::{matrix_star, Kleene, Matrix};
pub use tensor::{
    centralizer_check_bounded, enumerate_nf_image, enumerate_nf_image_with, equal_bounded, stack_recognize,
    ImageOptions, NfImage, RecognizerConfig, Verdict,
};
pub use word::{nf_reduce, parse_word, Nf, NfWord, Syntax, Token};
