//! Build normal forms bottom-up with the sum, product and closure combinators.

use tensor_kleene::automaton::compile;
use tensor_kleene::normal::{first_normal_form, nf_atom, nf_bracket, nf_combine, CombineOp};
use tensor_kleene::{equal_bounded, parse_expr, Expr, Syntax, Token};

fn main() {
    let a = nf_atom(Expr::letter('a')).unwrap();
    let b = nf_atom(Expr::letter('b')).unwrap();
    let p = nf_bracket(Token::Open(1)).unwrap();
    let q = nf_bracket(Token::Close(1)).unwrap();

    // (a p1)* (q1 b)*
    let ap = nf_combine(CombineOp::Concat, &a, Some(&p)).unwrap();
    let qb = nf_combine(CombineOp::Concat, &q, Some(&b)).unwrap();
    let left = nf_combine(CombineOp::Star, &ap, None).unwrap();
    let right = nf_combine(CombineOp::Star, &qb, None).unwrap();
    let whole = nf_combine(CombineOp::Concat, &left, Some(&right)).unwrap();
    println!("built a normal form with {} states", whole.dim());

    let direct = parse_expr("(a p1)* (q1 b)*", Syntax::default()).unwrap();
    println!("against the direct expression: {}", equal_bounded(&whole.expr().unwrap(), &direct, 10).unwrap());

    let compiled = first_normal_form(&compile(&direct)).unwrap();
    println!("compiled route uses {} states", compiled.dim());
}
