//! Seeded random inputs for property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::SplitAutomaton;
use crate::braket::IndexRelation;
use crate::expr::Expr;
use crate::grammar::{Grammar, Sym};
use crate::kleene::Matrix;
use crate::word::Token;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random expression with about `size` leaves drawn from `leaves`.
pub fn expr_over(rng: &mut Rng8, leaves: &[Expr], size: usize) -> Expr {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => Expr::one(),
            _ => leaves.choose(rng).expect("leaves").clone(),
        };
    }
    match rng.gen_range(0..5) {
        0 | 1 => {
            let k = rng.gen_range(1..size);
            Expr::sum([expr_over(rng, leaves, k), expr_over(rng, leaves, size - k)])
        }
        2 | 3 => {
            let k = rng.gen_range(1..size);
            Expr::prod([expr_over(rng, leaves, k), expr_over(rng, leaves, size - k)])
        }
        _ => Expr::star_of(&expr_over(rng, leaves, size - 1)),
    }
}

/// Random bracket-free expression over the given letters.
pub fn letter_expr(rng: &mut Rng8, letters: &[char], size: usize) -> Expr {
    let leaves: Vec<Expr> = letters.iter().map(|&c| Expr::letter(c)).collect();
    expr_over(rng, &leaves, size)
}

/// Random expression over letters and the brackets `p0, p1, q0, q1`.
pub fn bracket_expr(rng: &mut Rng8, letters: &[char], size: usize) -> Expr {
    let mut leaves: Vec<Expr> = letters.iter().map(|&c| Expr::letter(c)).collect();
    for i in 0..2 {
        leaves.push(Expr::open(i));
        leaves.push(Expr::close(i));
    }
    expr_over(rng, &leaves, size)
}

/// Random `φ(x)` over `x`, `a`, `p1`, `q1` and `π = q0 p0`, so that `p0` and
/// `q0` occur only inside `π`.
pub fn slot_expr(rng: &mut Rng8, size: usize) -> Expr {
    let leaves = [Expr::letter('x'), Expr::letter('a'), Expr::open(1), Expr::close(1), Expr::pi()];
    let e = expr_over(rng, &leaves, size);
    if e.symbols().contains(&Token::Letter('x')) {
        e
    } else {
        Expr::prod([e, Expr::letter('x')])
    }
}

pub fn word(rng: &mut Rng8, alphabet: &[Token], len: usize) -> Vec<Token> {
    (0..len).map(|_| *alphabet.choose(rng).expect("alphabet")).collect()
}

/// Random relation with both ends below `support` inside `{0, …, t-1}`.
pub fn relation(rng: &mut Rng8, t: usize, support: usize, density: f64) -> IndexRelation {
    let mut pairs = Vec::new();
    for a in 0..support {
        for b in 0..support {
            if rng.gen_bool(density) {
                pairs.push((a, b));
            }
        }
    }
    IndexRelation::from_pairs(t, pairs)
}

/// Random split automaton with `n` states and a single bracket pair index `1`.
pub fn split_automaton(rng: &mut Rng8, n: usize, letters: &[char]) -> SplitAutomaton {
    let s: Vec<bool> = (0..n).map(|i| i == 0 || rng.gen_bool(0.2)).collect();
    let f: Vec<bool> = (0..n).map(|i| i == n - 1 || rng.gen_bool(0.2)).collect();
    let mut u = Matrix::filled(n, n, None);
    let mut v = Matrix::filled(n, n, None);
    let mut x = Matrix::filled(n, n, Expr::zero());
    for i in 0..n {
        for j in 0..n {
            match rng.gen_range(0..8) {
                0 => u.set(i, j, Some(rng.gen_range(0..2))),
                1 => v.set(i, j, Some(rng.gen_range(0..2))),
                2 | 3 => x.set(i, j, Expr::letter(*letters.choose(rng).expect("letters"))),
                4 => x.set(i, j, Expr::one()),
                _ => {}
            }
        }
    }
    SplitAutomaton::new(s, f, u, x, v, Matrix::filled(n, n, false)).expect("well-formed")
}

/// Random grammar with nonterminals `S, A, B, …` and short bodies.
pub fn grammar(rng: &mut Rng8, nonterminals: usize, letters: &[char]) -> Grammar {
    let names = ["S", "A", "B", "C", "D"];
    let mut g = Grammar::new("S");
    let ids: Vec<usize> = names[..nonterminals.clamp(1, names.len())].iter().map(|n| g.nonterminal(n)).collect();
    for &h in &ids {
        let alts = rng.gen_range(1..=3);
        for _ in 0..alts {
            let len = rng.gen_range(0..=3);
            let body = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Sym::T(*letters.choose(rng).expect("letters"))
                    } else {
                        Sym::N(*ids.choose(rng).expect("ids"))
                    }
                })
                .collect();
            g.add_rule(h, body);
        }
    }
    g
}
