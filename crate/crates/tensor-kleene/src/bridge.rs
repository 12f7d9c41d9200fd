//! Conversions between context-free grammars and expressions `p0 r q0`.
//!
//! Grammar to expression: `r` describes derivation traces of a finite automaton
//! with a state `Start(A)` per nonterminal plus one `Done` state. Descending into
//! a nonterminal that is not the last symbol of its production pushes a bracket
//! naming where to resume; finishing a nonterminal pops one. The outer `p0 ... q0`
//! keeps only traces with a balanced stack, whose letters are exactly the
//! derivable words. With more than one resume point the brackets are recoded
//! into two pairs.
//!
//! Expression to grammar: compile `r`, take the second normal form `S N (W N)* F`
//! and read a grammar off it.

use std::collections::HashMap;

use crate::automaton::{compile, compile_with_pi};
use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::grammar::{Grammar, Sym};
use crate::kleene::{matrix_star, Matrix};
use crate::normal::{project_centralizer, reduced_normal_form, CentralizerMatrix};
use crate::tensor::check_wrapped;
use crate::word::{encode_token, EncodeMode, Token};

/// The pieces of a production `A -> u0 B1 u1 ... Bk uk`.
fn split_body(body: &[Sym]) -> (Vec<Vec<char>>, Vec<usize>) {
    let mut words = vec![Vec::new()];
    let mut nts = Vec::new();
    for s in body {
        match s {
            Sym::T(c) => words.last_mut().expect("nonempty").push(*c),
            Sym::N(n) => {
                nts.push(*n);
                words.push(Vec::new());
            }
        }
    }
    (words, nts)
}

fn letters(w: &[char]) -> Vec<Expr> {
    w.iter().map(|&c| Expr::letter(c)).collect()
}

/// Regular trace expression `r`, with bracket indices from 1, and the number of
/// bracket pairs used including the outer one.
pub fn trace_expression(g: &Grammar) -> (Expr, u8) {
    let g = g.pruned();
    let k = g.names.len();
    let done = k;
    let mut m = Matrix::filled(k + 1, k + 1, Expr::zero());
    let mut next_index = 1u8;
    let add = |m: &mut Matrix<Expr>, from: usize, to: usize, label: Expr| {
        let e = Expr::sum([m.get(from, to).clone(), label]);
        m.set(from, to, e);
    };
    for r in &g.rules {
        let (words, nts) = split_body(&r.body);
        let kk = nts.len();
        if kk == 0 {
            add(&mut m, r.head, done, Expr::prod(letters(&words[0])));
            continue;
        }
        // resume point after nonterminal t (1-based), unless it is a tail call
        let push: Vec<Option<u8>> = (1..=kk)
            .map(|t| {
                if t == kk && words[kk].is_empty() {
                    None
                } else {
                    next_index += 1;
                    Some(next_index - 1)
                }
            })
            .collect();
        let mut first = letters(&words[0]);
        if let Some(i) = push[0] {
            first.push(Expr::open(i));
        }
        add(&mut m, r.head, nts[0], Expr::prod(first));
        for t in 1..kk {
            let mut label = vec![Expr::close(push[t - 1].expect("pushed before a later nonterminal"))];
            label.extend(letters(&words[t]));
            if let Some(i) = push[t] {
                label.push(Expr::open(i));
            }
            add(&mut m, done, nts[t], Expr::prod(label));
        }
        if let Some(i) = push[kk - 1] {
            let mut label = vec![Expr::close(i)];
            label.extend(letters(&words[kk]));
            add(&mut m, done, done, Expr::prod(label));
        }
    }
    let star = matrix_star(&m).expect("square");
    (star.get(g.start, done).clone(), next_index.max(2))
}

/// `p0 r q0` representing the language of `g`, over two bracket pairs.
pub fn cfg_to_expr(g: &Grammar) -> Result<Expr> {
    let (r, m) = trace_expression(g);
    let e = Expr::prod([Expr::open(0), r, Expr::close(0)]);
    if m <= 2 {
        return Ok(e);
    }
    let mut err = None;
    let out = e.map_syms(&mut |t, _| match encode_token(t, m, EncodeMode::Polycyclic) {
        Ok(ts) => Expr::word(&ts),
        Err(x) => {
            err = Some(x);
            Expr::zero()
        }
    });
    match err {
        Some(x) => Err(x),
        None => Ok(out),
    }
}

/// True if `p0` and `q0` occur in `r` only as adjacent `q0 p0` inside products.
pub fn outer_pair_only_in_pi(r: &Expr) -> bool {
    fn go(e: &Expr, memo: &mut HashMap<usize, bool>) -> bool {
        if let Some(&v) = memo.get(&e.key()) {
            return v;
        }
        let is = |x: &Expr, t: Token| matches!(x.node(), Node::Sym { tok, .. } if *tok == t);
        let v = match e.node() {
            Node::Sym { tok, .. } => !matches!(tok, Token::Open(0) | Token::Close(0)),
            Node::Zero | Node::One => true,
            Node::Sum(xs) => xs.iter().all(|x| go(x, memo)),
            Node::Star(x) => go(x, memo),
            Node::Prod(xs) => {
                let mut ok = true;
                let mut k = 0;
                while k < xs.len() {
                    if k + 1 < xs.len() && is(&xs[k], Token::Close(0)) && is(&xs[k + 1], Token::Open(0)) {
                        k += 2;
                        continue;
                    }
                    ok &= go(&xs[k], memo);
                    k += 1;
                }
                ok
            }
        };
        memo.insert(e.key(), v);
        v
    }
    go(r, &mut HashMap::new())
}

/// Inner part `r` of `p0 r q0`.
pub fn unwrap_outer(e: &Expr) -> Result<Expr> {
    check_wrapped(e)?;
    match e.node() {
        Node::Prod(xs) => Ok(Expr::prod(xs[1..xs.len() - 1].iter().cloned())),
        _ => unreachable!("checked above"),
    }
}

fn import_entries(g: &mut Grammar, n: &CentralizerMatrix) -> Matrix<Option<usize>> {
    let map = g.import(&n.grammar, "");
    n.entry.map(|e| e.map(|k| map[k]))
}

/// Grammar for the language represented by `p0 r q0`.
///
/// When `r` keeps `p0`/`q0` for `π` only, this reads the second normal form:
/// `T_i -> N_ij (F_j) | N_ij T_k (W_jk)`, `S -> T_i (S_i)`. Otherwise (for
/// instance after recoding brackets into two pairs) it compiles the whole
/// expression and reads the reduced normal form `S -> N_ij (S_i, F_j)`, which
/// needs the expression to lie in the centralizer.
pub fn expr_to_cfg(e: &Expr) -> Result<Grammar> {
    let r = unwrap_outer(e)?;
    let mut g = Grammar::new("S");
    if outer_pair_only_in_pi(&r) {
        let a = compile_with_pi(&r);
        let nf = project_centralizer(&a)?;
        let n = a.n();
        let entries = import_entries(&mut g, &nf.n);
        let t: Vec<usize> = (0..n).map(|i| g.fresh(&format!("T{}", i + 1))).collect();
        for i in 0..n {
            for j in 0..n {
                let Some(nij) = entries.get(i, j) else { continue };
                if a.f[j] {
                    g.add_rule(t[i], vec![Sym::N(*nij)]);
                }
                for k in 0..n {
                    if *a.w.get(j, k) {
                        g.add_rule(t[i], vec![Sym::N(*nij), Sym::N(t[k])]);
                    }
                }
            }
            if a.s[i] {
                g.add_rule(0, vec![Sym::N(t[i])]);
            }
        }
    } else {
        let a = compile(e);
        let nf = reduced_normal_form(&a, 8).map_err(|err| match err {
            Error::NotApplicable(msg) => Error::Precondition(format!("expression is not context-free: {msg}")),
            other => other,
        })?;
        let entries = import_entries(&mut g, &nf.n);
        for i in (0..a.n()).filter(|&i| a.s[i]) {
            for j in (0..a.n()).filter(|&j| a.f[j]) {
                if let Some(nij) = entries.get(i, j) {
                    g.add_rule(0, vec![Sym::N(*nij)]);
                }
            }
        }
    }
    Ok(g.pruned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::tensor::{enumerate_nf_image_with, equal_bounded, stack_recognize, ImageOptions, RecognizerConfig};
    use crate::word::Syntax;
    use std::collections::BTreeSet;

    fn parse(s: &str) -> Expr {
        parse_expr(s, Syntax::default()).unwrap()
    }

    fn set(ws: &[&str]) -> BTreeSet<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn matched_powers_trace_is_the_classic_expression() {
        let g = Grammar::parse("S -> a S b | ;").unwrap();
        let e = cfg_to_expr(&g).unwrap();
        assert!(equal_bounded(&e, &parse("p0 (a p1)* (q1 b)* q0"), 10).unwrap().is_equal());
        let cfg = RecognizerConfig::default();
        assert!(stack_recognize(&e, "aabb", cfg).unwrap());
        assert!(!stack_recognize(&e, "aab", cfg).unwrap());
    }

    #[test]
    fn empty_word_grammar_is_one() {
        let e = cfg_to_expr(&Grammar::parse("S -> ;").unwrap()).unwrap();
        assert!(equal_bounded(&e, &Expr::one(), 6).unwrap().is_equal());
    }

    #[test]
    fn recoded_grammar_keeps_its_language() {
        let g = Grammar::parse("S -> a S a | b S b | a | b | ;").unwrap();
        assert_eq!(trace_expression(&g).1, 3);
        let e = cfg_to_expr(&g).unwrap();
        let img = enumerate_nf_image_with(&e, &ImageOptions::new(60).letters(6).bracket_free()).unwrap();
        assert_eq!(img.letter_strings(), g.enumerate(6).unwrap());
    }

    #[test]
    fn expression_to_grammar_examples() {
        let g = expr_to_cfg(&parse("p0 (a p1)* (q1 b)* q0")).unwrap();
        assert_eq!(g.enumerate(6).unwrap(), set(&["", "ab", "aabb", "aaabbb"]));
        let g = expr_to_cfg(&parse("p0 q0")).unwrap();
        assert_eq!(g.enumerate(4).unwrap(), set(&[""]));
        let g = expr_to_cfg(&parse("p0 (a p1)* (q1 b)* q0 p0 (a p1)* (q1 b)* q0")).unwrap();
        let words = g.enumerate(4).unwrap();
        assert_eq!(words, set(&["", "ab", "abab", "aabb"]));
        assert!(expr_to_cfg(&parse("a")).is_err());
    }

    #[test]
    fn round_trip_through_recoding() {
        let g = Grammar::parse("S -> a S a | b S b | a | b | ;").unwrap();
        let g2 = expr_to_cfg(&cfg_to_expr(&g).unwrap()).unwrap();
        assert_eq!(g2.enumerate(6).unwrap(), g.enumerate(6).unwrap());
    }

    #[test]
    fn pi_detection() {
        assert!(outer_pair_only_in_pi(&parse("a q0 p0 b + p1")));
        assert!(!outer_pair_only_in_pi(&parse("p0 a")));
        assert!(!outer_pair_only_in_pi(&parse("(q0 + p0)")));
    }
}
