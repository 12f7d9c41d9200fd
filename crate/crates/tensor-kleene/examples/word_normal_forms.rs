//! Bracket cancellation on words, and recoding many bracket pairs into two.

use tensor_kleene::word::{encode_brackets, format_word, EncodeMode};
use tensor_kleene::{nf_reduce, parse_word, Syntax};

fn main() {
    let syn = Syntax { m: 3, aliases: false };
    for text in ["p1 a q1", "p0 q1", "q2 a p1 p2 b q2 q1", "p0 p1 q1 q0 a"] {
        let w = parse_word(text, syn).unwrap();
        println!("nf({text}) = {}", nf_reduce(&w));
    }

    // Three pairs coded with two: p_i -> p0 p1^(i+1), q_i -> q1^(i+1) q0.
    let w = parse_word("p2 a q2", syn).unwrap();
    let coded = encode_brackets(&w, 3, EncodeMode::Polycyclic).unwrap();
    println!("{} encodes to {} and reduces to {}", format_word(&w), format_word(&coded), nf_reduce(&coded));
    let w = parse_word("p2 a q1", syn).unwrap();
    let coded = encode_brackets(&w, 3, EncodeMode::Polycyclic).unwrap();
    println!("{} encodes to {} and reduces to {}", format_word(&w), format_word(&coded), nf_reduce(&coded));
}
