//! Enumerate what an expression denotes up to a source-length bound, compare
//! two expressions, and recognize words of a bracketed language.

use tensor_kleene::{enumerate_nf_image, equal_bounded, parse_expr, stack_recognize, RecognizerConfig, Syntax};

fn main() {
    let syn = Syntax::default();
    let e = parse_expr("p0 (a p1)* (q1 b)* q0", syn).unwrap();
    println!("image of {e} at bound 14:");
    for line in enumerate_nf_image(&e, 14).unwrap().sorted_lines() {
        println!("  {line}");
    }

    // letters commute with brackets, so the last pair is equal as well
    let pairs = [("(p1 q1)*", "1"), ("p1 (a + b) q1", "a + b"), ("p1 a", "a p1")];
    for (l, r) in pairs {
        let v = equal_bounded(&parse_expr(l, syn).unwrap(), &parse_expr(r, syn).unwrap(), 8).unwrap();
        println!("{l}  vs  {r}: {v}");
    }

    for w in ["", "ab", "aabb", "aab", "ba"] {
        let yes = stack_recognize(&e, w, RecognizerConfig::default()).unwrap();
        println!("{w:?} in language: {yes}");
    }
}
