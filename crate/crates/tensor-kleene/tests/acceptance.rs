//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits non-zero on any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use tensor_kleene::automaton::{compile, SplitAutomaton};
use tensor_kleene::braket::{check_map, completeness_sum, domain, hat_map, omega_model_eval, relative_completeness_check, IndexRelation};
use tensor_kleene::bridge::cfg_to_expr;
use tensor_kleene::grammar::Grammar;
use tensor_kleene::kleene::{matrix_star, Matrix};
use tensor_kleene::normal::{compute_n, first_normal_form, nf_combine, project_centralizer, reduced_normal_form, CombineOp};
use tensor_kleene::tensor::{equal_bounded_with, image_contains};
use tensor_kleene::word::{encode_brackets, encode_token, reduce_all_orders, EncodeMode, NfWord};
use tensor_kleene::{cli, enumerate_nf_image, enumerate_nf_image_with, equal_bounded, gen, parse_expr, stack_recognize};
use tensor_kleene::{Expr, ImageOptions, Nf, RecognizerConfig, Syntax, Token};

// Pinned bounds and sizes.
const C1_BOUND: u32 = 14;
const C1_TIME: Duration = Duration::from_secs(1);
const C2_ENTRY_BOUND: u32 = 12;
const C2_STAR_BOUND: u32 = 10;
const C3_BOUND: u32 = 16;
const C4_CASES: usize = 200;
const C4_BOUND: u32 = 8;
const C5_CASES: usize = 100;
const C5_BOUND: u32 = 8;
const C6_BOUND: u32 = 10;
const C7_MAX_LEN: usize = 10;
const C7_EXHAUSTIVE_LEN: usize = 6;
const C7_SAMPLES: usize = 100_000;
const C8_T: usize = 24;
const C8_RELATIONS: usize = 100;
const C9_CASES: usize = 100;
const C9_BOUND: u32 = 10;
const C9_SIZE: usize = 6;
const C10_T: usize = 24;
const C11_MAX_LEN: usize = 10;
const SEED: u64 = 20240611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn parse(s: &str) -> Expr {
    parse_expr(s, Syntax::default()).expect("valid expression")
}

fn strings(ws: &[&str]) -> BTreeSet<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<(&'static str, Grammar)> {
    [
        ("anbn", include_str!("../corpus/anbn.cfg")),
        ("dyck", include_str!("../corpus/dyck.cfg")),
        ("palindromes", include_str!("../corpus/palindromes.cfg")),
        ("anbn_ambm", include_str!("../corpus/anbn_ambm.cfg")),
        ("epsilon", include_str!("../corpus/epsilon.cfg")),
        ("astar", include_str!("../corpus/astar.cfg")),
    ]
    .into_iter()
    .map(|(n, t)| (n, Grammar::parse(t).expect("corpus grammar")))
    .collect()
}

fn words_upto(alphabet: &[char], max: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max {
        layer = layer.iter().flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}"))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Four-state automaton for `(a p1)* (q1 b)*`, initial state 1, final state 3.
fn matched_powers_automaton() -> SplitAutomaton {
    let mut u = Matrix::filled(4, 4, None);
    u.set(1, 0, Some(1));
    let mut v = Matrix::filled(4, 4, None);
    v.set(2, 3, Some(1));
    let mut x = Matrix::filled(4, 4, Expr::zero());
    x.set(0, 1, Expr::letter('a'));
    x.set(0, 2, Expr::one());
    x.set(3, 2, Expr::letter('b'));
    let s = vec![true, false, false, false];
    let f = vec![false, false, true, false];
    SplitAutomaton::new(s, f, u, x, v, Matrix::filled(4, 4, false)).expect("well-formed")
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["tensor-kleene", "enum", "--bound", "14", "p0 (a p1)* (q1 b)* q0"], &mut out, &mut err);
    let elapsed = start.elapsed();
    let text = String::from_utf8(out).expect("utf8");
    let lines: BTreeSet<String> = text.lines().map(String::from).collect();
    ensure(code == 0, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    ensure(lines == strings(&["1", "a b", "a a b b", "a a a b b b"]), || format!("got {lines:?}"))?;
    ensure(elapsed < C1_TIME, || format!("took {elapsed:?}"))?;
    let direct = enumerate_nf_image(&parse("p0 (a p1)* (q1 b)* q0"), C1_BOUND).map_err(|e| e.to_string())?;
    ensure(direct.letter_strings() == strings(&["", "ab", "aabb", "aaabbb"]), || "library image differs".into())?;
    Ok(format!("4 words in {elapsed:?}"))
}

fn c2() -> Outcome {
    let a = matched_powers_automaton();
    let n = compute_n(&a.u, &a.x, &a.v).map_err(|e| e.to_string())?;
    let eq = |l: &Expr, r: &Expr, b: u32| equal_bounded(l, r, b).map(|v| v.is_equal()).map_err(|e| e.to_string());
    for i in 0..4 {
        ensure(eq(n.expr.get(i, i), &Expr::one(), C2_ENTRY_BOUND)?, || format!("N[{i}][{i}] is not 1"))?;
    }
    ensure(eq(n.expr.get(0, 1), &parse("a"), C2_ENTRY_BOUND)?, || "N[1][2] is not a".into())?;
    ensure(eq(n.expr.get(3, 2), &parse("b"), C2_ENTRY_BOUND)?, || "N[4][3] is not b".into())?;
    let img = enumerate_nf_image(n.expr.get(0, 2), C2_ENTRY_BOUND).map_err(|e| e.to_string())?;
    ensure(img.len() == img.letter_strings().len(), || "N[1][3] has bracketed members".into())?;
    ensure(img.letter_strings() == strings(&["", "ab", "aabb", "aaabbb"]), || format!("N[1][3] image {:?}", img.sorted_lines()))?;
    let star = matrix_star(&a.transition()).map_err(|e| e.to_string())?;
    let nf = first_normal_form(&a).map_err(|e| e.to_string())?.first_matrix().map_err(|e| e.to_string())?;
    for i in 0..4 {
        for j in 0..4 {
            ensure(eq(star.get(i, j), nf.get(i, j), C2_STAR_BOUND)?, || format!("A* differs from (NV)*N(UN)* at ({},{})", i + 1, j + 1))?;
        }
    }
    Ok("N entries and 16 entries of A* agree".into())
}

fn c3() -> Outcome {
    // two copies of the four-state automaton, joined by a π edge from 3 to 5
    let one = matched_powers_automaton();
    let u = Matrix::from_fn(8, 8, |i, j| if i / 4 == j / 4 { *one.u.get(i % 4, j % 4) } else { None });
    let v = Matrix::from_fn(8, 8, |i, j| if i / 4 == j / 4 { *one.v.get(i % 4, j % 4) } else { None });
    let x = Matrix::from_fn(8, 8, |i, j| if i / 4 == j / 4 { one.x.get(i % 4, j % 4).clone() } else { Expr::zero() });
    let w = Matrix::from_fn(8, 8, |i, j| (i, j) == (2, 4));
    let s = (0..8).map(|i| i == 0).collect();
    let f = (0..8).map(|i| i == 6).collect();
    let a = SplitAutomaton::new(s, f, u, x, v, w).map_err(|e| e.to_string())?;
    let nf = project_centralizer(&a).map_err(|e| e.to_string())?;
    let m = nf.second_matrix().map_err(|e| e.to_string())?;
    let entry = m.get(0, 6);
    let img = enumerate_nf_image(entry, C3_BOUND).map_err(|e| e.to_string())?;
    let g = Grammar::parse("S -> A B\nA -> a A b | ;\nB -> a B b | ;").expect("grammar");
    ensure(img.len() == img.letter_strings().len(), || "entry has bracketed members".into())?;
    let got = img.letter_strings();
    for w in &got {
        ensure(g.cyk(w), || format!("{w} is not in the grammar's language"))?;
    }
    // every word of the language short enough to be reached within the bound
    let complete_to = got.iter().map(String::len).max().unwrap_or(0);
    let mut reach = complete_to;
    while reach > 0 && !g.enumerate(reach).map_err(|e| e.to_string())?.is_subset(&got) {
        reach -= 1;
    }
    let want = g.enumerate(reach).map_err(|e| e.to_string())?;
    ensure(reach >= 6, || format!("image complete only up to length {reach}"))?;
    Ok(format!("{} words, matches the grammar up to length {reach} ({} words)", got.len(), want.len()))
}

fn c4() -> Outcome {
    let mut rng = gen::rng(SEED);
    let opts = ImageOptions::new(C4_BOUND);
    for case in 0..C4_CASES {
        let size = rng.gen_range(1..=4);
        let x = gen::letter_expr(&mut rng, &['a', 'b'], size);
        let (i, j) = (rng.gen_range(0..2u8), rng.gen_range(0..2u8));
        let n = compute_n(&Matrix::filled(1, 1, Some(i)), &Matrix::filled(1, 1, x.clone()), &Matrix::filled(1, 1, Some(j)))
            .map_err(|e| e.to_string())?;
        let nn = n.expr.get(0, 0).clone();
        let (u, v) = (Expr::open(i), Expr::close(j));
        let lhs = Expr::star_of(&Expr::sum([u.clone(), x.clone(), v.clone()]));
        let rhs = Expr::prod([Expr::star_of(&Expr::prod([nn.clone(), v])), nn.clone(), Expr::star_of(&Expr::prod([u, nn]))]);
        let verdict = equal_bounded_with(&lhs, &rhs, &opts).map_err(|e| e.to_string())?;
        ensure(verdict.is_equal(), || format!("case {case}: u = p{i}, v = q{j}, x = {x}: {verdict}"))?;
    }
    Ok(format!("{C4_CASES} instances equal"))
}

fn c5() -> Outcome {
    let mut rng = gen::rng(SEED + 5);
    let opts = ImageOptions::new(C5_BOUND);
    for case in 0..C5_CASES {
        let (sl, sr) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let l = gen::bracket_expr(&mut rng, &['a', 'b'], sl);
        let r = gen::bracket_expr(&mut rng, &['a', 'b'], sr);
        let nl = first_normal_form(&compile(&l)).map_err(|e| e.to_string())?;
        let nr = first_normal_form(&compile(&r)).map_err(|e| e.to_string())?;
        let cases = [
            (CombineOp::Plus, Some(&nr), Expr::sum([l.clone(), r.clone()])),
            (CombineOp::Concat, Some(&nr), Expr::prod([l.clone(), r.clone()])),
            (CombineOp::PlusClosure, None, Expr::plus_of(&l)),
        ];
        for (op, rhs, direct) in cases {
            let c = nf_combine(op, &nl, rhs).map_err(|e| e.to_string())?;
            let e = c.expr().map_err(|e| e.to_string())?;
            let verdict = equal_bounded_with(&e, &direct, &opts).map_err(|e| e.to_string())?;
            ensure(verdict.is_equal(), || format!("case {case} {op:?}: l = {l}, r = {r}: {verdict}"))?;
        }
    }
    Ok(format!("{} combinations equal", 3 * C5_CASES))
}

fn c6() -> Outcome {
    let mut done = Vec::new();
    for (name, g) in corpus() {
        let e = cfg_to_expr(&g).map_err(|e| e.to_string())?;
        let a = compile(&e);
        let nf = reduced_normal_form(&a, C6_BOUND).map_err(|e| format!("{name}: {e}"))?;
        let snf = nf.expr().map_err(|e| e.to_string())?;
        let verdict = equal_bounded(&a.language(), &snf, C6_BOUND).map_err(|e| e.to_string())?;
        ensure(verdict.is_equal(), || format!("{name}: {verdict}"))?;
        done.push(name);
    }
    Ok(format!("{} grammars", done.len()))
}

fn c7() -> Outcome {
    let alphabet = [Token::Letter('a'), Token::Open(0), Token::Open(1), Token::Close(0), Token::Close(1)];
    let agree = |w: &[Token]| {
        let all = reduce_all_orders(w);
        let det = tensor_kleene::nf_reduce(w);
        let expected = match &det {
            NfWord::Zero => vec![Token::Zero],
            NfWord::Word(nf) => nf.flatten(),
        };
        all.len() == 1 && all.contains(&expected)
    };
    let mut layer: Vec<Vec<Token>> = vec![Vec::new()];
    let mut checked = 1usize;
    for _ in 0..C7_EXHAUSTIVE_LEN {
        layer = layer.iter().flat_map(|w| alphabet.iter().map(move |&t| [w.clone(), vec![t]].concat())).collect();
        for w in &layer {
            ensure(agree(w), || format!("disagreement on {w:?}"))?;
        }
        checked += layer.len();
    }
    let mut rng = gen::rng(SEED + 7);
    for _ in 0..C7_SAMPLES {
        let len = rng.gen_range(C7_EXHAUSTIVE_LEN + 1..=C7_MAX_LEN);
        let w = gen::word(&mut rng, &alphabet, len);
        ensure(agree(&w), || format!("disagreement on {w:?}"))?;
    }
    checked += C7_SAMPLES;
    Ok(format!("{checked} words, zero disagreements"))
}

fn c8() -> Outcome {
    let mut rng = gen::rng(SEED + 8);
    for m in [2u8, 3] {
        let t = C8_T;
        let id = IndexRelation::identity(t);
        for i in 0..m {
            for j in 0..m {
                let r = omega_model_eval(&Expr::prod([Expr::open(i), Expr::close(j)]), m, t).map_err(|e| e.to_string())?;
                let want = if i == j { id.clone() } else { IndexRelation::empty(t) };
                ensure(r == want, || format!("m = {m}: p{i} q{j} is not exact"))?;
            }
        }
        let dom = domain(m, t);
        let comp = omega_model_eval(&completeness_sum(m), m, t).map_err(|e| e.to_string())?;
        ensure(comp.restrict(&dom).is_identity_on(&dom), || format!("m = {m}: completeness fails on the domain"))?;
        let hat_one = hat_map(&id, m, t).map_err(|e| e.to_string())?;
        let unit = Matrix::from_fn(m as usize, m as usize, |i, j| if i == j { id.clone() } else { IndexRelation::empty(t) });
        ensure(hat_one.map(|r| r.restrict(&dom)) == unit.map(|r| r.restrict(&dom)), || format!("m = {m}: hat(1) is not the unit"))?;
        let support = t / m as usize;
        for k in 0..C8_RELATIONS {
            let a = gen::relation(&mut rng, t, support, 0.15);
            let b = gen::relation(&mut rng, t, support, 0.15);
            let ha = hat_map(&a, m, t).map_err(|e| e.to_string())?;
            let hb = hat_map(&b, m, t).map_err(|e| e.to_string())?;
            let back = check_map(&ha, m, t).map_err(|e| e.to_string())?;
            ensure(back == a, || format!("m = {m}, relation {k}: check(hat(A)) != A"))?;
            let hab = hat_map(&a.compose(&b), m, t).map_err(|e| e.to_string())?;
            let prod = ha.mul(&hb).map_err(|e| e.to_string())?;
            ensure(hab == prod, || format!("m = {m}, relation {k}: hat(AB) != hat(A) hat(B)"))?;
            let hsum = hat_map(&a.union(&b), m, t).map_err(|e| e.to_string())?;
            ensure(hsum == ha.add(&hb).map_err(|e| e.to_string())?, || format!("m = {m}, relation {k}: hat(A+B) != hat(A)+hat(B)"))?;
        }
    }
    Ok(format!("m in {{2,3}}, T = {C8_T}, {C8_RELATIONS} relations each"))
}

fn c9() -> Outcome {
    let mut rng = gen::rng(SEED + 9);
    let mut bracketed = 0;
    for case in 0..C9_CASES {
        let size = rng.gen_range(1..=C9_SIZE);
        let phi = gen::slot_expr(&mut rng, size);
        let v = relative_completeness_check(&phi, 'x', 2, C9_BOUND).map_err(|e| e.to_string())?;
        ensure(v.verdict.is_equal(), || format!("case {case}: φ = {phi}: {}", v.verdict))?;
        ensure(v.centralizer, || format!("case {case}: p0 φ(1) q0 fails the centralizer test, φ = {phi}"))?;
        bracketed += usize::from(!phi.is_bracket_free());
    }
    Ok(format!("{C9_CASES} formulas, {bracketed} with brackets or π"))
}

fn c10() -> Outcome {
    let m = 3u8;
    let enc = |t: Token| encode_token(t, m, EncodeMode::Polycyclic).expect("in range");
    let nf = |w: Vec<Token>| tensor_kleene::nf_reduce(&w);
    for i in 0..m {
        for j in 0..m {
            let got = nf([enc(Token::Open(i)), enc(Token::Close(j))].concat());
            let want = if i == j { NfWord::one() } else { NfWord::Zero };
            ensure(got == want, || format!("p{i} q{j} encodes to {got}"))?;
        }
        let got = nf([vec![Token::Open(0)], enc(Token::Close(i))].concat());
        ensure(got == NfWord::Zero, || format!("b q{i} encodes to {got}"))?;
        let got = nf([enc(Token::Open(i)), vec![Token::Close(0)]].concat());
        ensure(got == NfWord::Zero, || format!("p{i} d encodes to {got}"))?;
    }
    let sum: Vec<Expr> = (0..m)
        .map(|i| {
            let w = encode_brackets(&[Token::Close(i), Token::Open(i)], m, EncodeMode::Braket).expect("in range");
            Expr::word(&w)
        })
        .collect();
    let r = omega_model_eval(&Expr::sum(sum), 2, C10_T).map_err(|e| e.to_string())?;
    let dom = domain(2, C10_T);
    ensure(r.restrict(&dom).is_identity_on(&dom), || "encoded completeness sum is not the identity".into())?;
    ensure(r == IndexRelation::identity(C10_T), || "encoded completeness sum is not exact on all indices".into())?;
    Ok("all encodings match".into())
}

fn c11() -> Outcome {
    let cfg = RecognizerConfig::default();
    let mut total = 0;
    for (name, g) in corpus() {
        let e = cfg_to_expr(&g).map_err(|e| e.to_string())?;
        let words = words_upto(&['a', 'b'], C11_MAX_LEN);
        let len_cap = C11_MAX_LEN as u32;
        let image = enumerate_nf_image_with(&e, &ImageOptions::new(u32::MAX / 8).letters(len_cap).bracket_free());
        for w in &words {
            let by_stack = stack_recognize(&e, w, cfg).map_err(|e| format!("{name}: {e}"))?;
            let by_cyk = g.cyk(w);
            let by_image = match &image {
                Ok(img) => img.contains(&Nf::from_letters(w)),
                Err(_) => image_contains(&e, &Nf::from_letters(w), u32::MAX / 8, &ImageOptions::new(u32::MAX / 8)).map_err(|e| e.to_string())?,
            };
            ensure(by_stack == by_cyk && by_cyk == by_image, || {
                format!("{name}, {w:?}: stack {by_stack}, cyk {by_cyk}, image {by_image}")
            })?;
        }
        total += words.len();
    }
    Ok(format!("{total} grammar/word pairs"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("matched powers enumeration", c1),
        ("centralizer matrix of the four-state automaton", c2),
        ("π-joined eight-state automaton", c3),
        ("star decomposition, single state", c4),
        ("normal-form combinators", c5),
        ("reduced normal form on the corpus", c6),
        ("confluence of bracket cancellation", c7),
        ("bra-ket index model", c8),
        ("relative completeness", c9),
        ("bracket recoding", c10),
        ("three-way membership agreement", c11),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = k + 1;
        if filter.is_some_and(|x| x != id) {
            continue;
        }
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} [{secs:.2}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
