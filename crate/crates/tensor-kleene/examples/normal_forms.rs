//! Compile an expression into a split automaton and read off its centralizer
//! matrix and normal forms.

use tensor_kleene::automaton::{compile, compile_with_pi};
use tensor_kleene::normal::{first_normal_form, project_centralizer, reduced_normal_form};
use tensor_kleene::{enumerate_nf_image, equal_bounded, parse_expr, Syntax};

fn main() {
    let syn = Syntax::default();
    let phi = parse_expr("(a p1)* (q1 b)*", syn).unwrap();
    let a = compile(&phi);
    println!("{} states", a.n());

    let first = first_normal_form(&a).unwrap();
    let v = equal_bounded(&first.expr().unwrap(), &phi, 10).unwrap();
    println!("S (NV)* N (UN)* F against the expression: {v}");

    let wrapped = parse_expr("p0 (a p1)* (q1 b)* q0", syn).unwrap();
    let reduced = reduced_normal_form(&compile(&wrapped), 10).unwrap();
    println!("reduced form S N F at bound 14: {:?}", enumerate_nf_image(&reduced.expr().unwrap(), 14).unwrap().sorted_lines());

    // Two copies joined by π = q0 p0: the projection denotes a^n b^n a^m b^m.
    let joined = parse_expr("(a p1)* (q1 b)* q0 p0 (a p1)* (q1 b)*", syn).unwrap();
    let second = project_centralizer(&compile_with_pi(&joined)).unwrap();
    let img = enumerate_nf_image(&second.expr().unwrap(), 16).unwrap();
    println!("second normal form at bound 16: {:?}", img.letter_strings());
    println!("grammar of N:\n{}", second.n.grammar);
}
