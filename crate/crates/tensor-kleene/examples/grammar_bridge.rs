//! Context-free grammars to bracketed regular expressions and back.

use tensor_kleene::bridge::{cfg_to_expr, expr_to_cfg};
use tensor_kleene::grammar::Grammar;
use tensor_kleene::{stack_recognize, RecognizerConfig};

fn main() {
    let g = Grammar::parse("S -> a S a | b S b | a | b | ;").unwrap();
    let e = cfg_to_expr(&g).unwrap();
    println!("palindromes as p0 r q0:\n  {e}");

    for w in ["abba", "abab", "aba", ""] {
        let stack = stack_recognize(&e, w, RecognizerConfig::default()).unwrap();
        println!("{w:?}: recognizer {stack}, cyk {}", g.cyk(w));
    }

    let back = expr_to_cfg(&e).unwrap();
    let same = back.enumerate(8).unwrap() == g.enumerate(8).unwrap();
    println!("grammar read back from the expression has {} rules; same words up to length 8: {same}", back.rules.len());
}
