//! Brackets as push and pop on an index stack coded by integers.

use tensor_kleene::braket::{check_map, completeness_sum, domain, hat_map, omega_model_eval, relative_completeness_check, IndexRelation};
use tensor_kleene::{parse_expr, Syntax};

fn main() {
    let (m, t) = (3u8, 24usize);
    let syn = Syntax { m, aliases: false };
    println!("p1 on 0..12 for m = 3:\n{}", omega_model_eval(&parse_expr("p1", syn).unwrap(), m, 12).unwrap());

    let sum = omega_model_eval(&completeness_sum(m), m, t).unwrap();
    println!("q0 p0 + q1 p1 + q2 p2 is the identity: {}", sum == IndexRelation::identity(t));

    let a = IndexRelation::from_pairs(t, [(0, 2), (1, 1), (5, 3)]);
    let hat = hat_map(&a, m, t).unwrap();
    println!("check(hat(A)) = A: {}", check_map(&hat, m, t).unwrap() == a);
    println!("stacks with room for one more push: {:?}", domain(m, t));

    let phi = parse_expr("(p1 x q1 + a) q0 p0 x", Syntax::default()).unwrap();
    let v = relative_completeness_check(&phi, 'x', 2, 10).unwrap();
    println!("p0 φ(e) q0 vs p0 φ(1) q0: {} (centralizer test {})", v.verdict, v.centralizer);
}
