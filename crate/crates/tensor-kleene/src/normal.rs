//! The centralizer matrix `N` and the normal forms built from it.
//!
//! For a split `A = U + X + V`, `N` is the least solution of `y >= (U y V + X)*`.
//! It is kept in two forms: bracket expressions `b·((U p + X + q V)*)_ij·d`, where
//! the extra pair `b p ... q d` (that is `p0 p1 ... q1 q0`) only tracks matched
//! brackets, and a context-free grammar read off `N >= 1 + X + U N V + N N`.
//! The tracking brackets are auxiliary symbols, so they do not count against
//! enumeration bounds.

use serde_json::{json, Value};

use crate::automaton::{bits, block_diag, bool_matrix, bool_rows, bracket_matrix, expr_rows, SplitAutomaton};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grammar::{Grammar, Sym};
use crate::kleene::{matrix_star, sandwich, Matrix};
use crate::tensor::centralizer_check_bounded;
use crate::word::Token;

fn b() -> Expr {
    Expr::aux(Token::Open(0))
}
fn p() -> Expr {
    Expr::aux(Token::Open(1))
}
fn q() -> Expr {
    Expr::aux(Token::Close(1))
}
fn d() -> Expr {
    Expr::aux(Token::Close(0))
}

fn wrap(e: &Expr) -> Expr {
    if e.is_zero() {
        e.clone()
    } else {
        Expr::prod([b(), e.clone(), d()])
    }
}

fn entry_name(i: usize, j: usize) -> String {
    format!("N{}_{}", i + 1, j + 1)
}

#[derive(Clone, Debug)]
pub struct CentralizerMatrix {
    pub expr: Matrix<Expr>,
    /// One grammar holding a nonterminal for every nonempty entry.
    pub grammar: Grammar,
    pub entry: Matrix<Option<usize>>,
}

impl CentralizerMatrix {
    pub fn n(&self) -> usize {
        self.expr.rows()
    }

    /// Grammar for entry `(i, j)` alone (0-based), pruned.
    pub fn entry_grammar(&self, i: usize, j: usize) -> Grammar {
        match self.entry.get(i, j) {
            Some(id) => {
                let mut g = self.grammar.clone();
                g.start = *id;
                g.pruned()
            }
            None => Grammar::new(&entry_name(i, j)),
        }
    }
}

/// Start a grammar with one nonterminal per entry.
fn entry_grammar(n: usize) -> (Grammar, Matrix<usize>) {
    let mut g = Grammar::new(&entry_name(0, 0));
    let ids = Matrix::from_fn(n, n, |i, j| g.nonterminal(&entry_name(i, j)));
    (g, ids)
}

/// Which entries of the least solution are nonempty, and the grammar pruned to them.
fn finish_grammar(mut g: Grammar, ids: &Matrix<usize>) -> (Grammar, Matrix<Option<usize>>) {
    let n = ids.rows();
    // All entry nonterminals stay reachable from a synthetic root while pruning.
    let root = g.fresh("ROOT");
    for i in 0..n {
        for j in 0..n {
            g.add_rule(root, vec![Sym::N(*ids.get(i, j))]);
        }
    }
    g.start = root;
    let pruned = g.pruned();
    let root = pruned.start;
    let mut g = pruned;
    let entry = Matrix::from_fn(n, n, |i, j| g.id(&entry_name(i, j)));
    g.rules.retain(|r| r.head != root);
    g.start = entry.get(0, 0).unwrap_or(0);
    (g, entry)
}

/// Nonemptiness of the least solution of `y >= 1 + X + U y V + y y`.
fn nonempty(n: usize, base: impl Fn(usize, usize) -> bool, matched: &[(usize, usize, usize, usize)]) -> Matrix<bool> {
    let mut e = Matrix::from_fn(n, n, |i, j| i == j || base(i, j));
    let mut changed = true;
    while changed {
        changed = false;
        for &(i, j, k, l) in matched {
            if *e.get(k, l) && !*e.get(i, j) {
                e.set(i, j, true);
                changed = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !*e.get(i, j) && (0..n).any(|k| *e.get(i, k) && *e.get(k, j)) {
                    e.set(i, j, true);
                    changed = true;
                }
            }
        }
    }
    e
}

/// Index quadruples `(i, j, k, l)` with `U[i][k]` and `V[l][j]` a matching pair.
fn matched_pairs(u: &Matrix<Option<u8>>, v: &Matrix<Option<u8>>) -> Vec<(usize, usize, usize, usize)> {
    let (n, m) = (u.rows(), v.rows());
    let mut out = Vec::new();
    for i in 0..u.rows() {
        for k in 0..n {
            let Some(a) = u.get(i, k) else { continue };
            for l in 0..m {
                for j in 0..v.cols() {
                    if *v.get(l, j) == Some(*a) {
                        out.push((i, j, k, l));
                    }
                }
            }
        }
    }
    out
}

/// Shared grammar rules `y_ij -> ε (i = j) | y_ik y_kj | y_kl (matched U, V)`.
fn add_closure_rules(g: &mut Grammar, ids: &Matrix<usize>, nonempty: &Matrix<bool>, matched: &[(usize, usize, usize, usize)]) {
    let n = ids.rows();
    for i in 0..n {
        g.add_rule(*ids.get(i, i), vec![]);
    }
    for &(i, j, k, l) in matched {
        if *nonempty.get(k, l) {
            g.add_rule(*ids.get(i, j), vec![Sym::N(*ids.get(k, l))]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if *nonempty.get(i, k) && *nonempty.get(k, j) {
                    g.add_rule(*ids.get(i, j), vec![Sym::N(*ids.get(i, k)), Sym::N(*ids.get(k, j))]);
                }
            }
        }
    }
}

/// The centralizer matrix of a split `U + X + V`.
pub fn compute_n(u: &Matrix<Option<u8>>, x: &Matrix<Expr>, v: &Matrix<Option<u8>>) -> Result<CentralizerMatrix> {
    let n = x.rows();
    if n == 0 || x.cols() != n || u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n {
        return Err(Error::Shape("U, X, V must be square of one size".into()));
    }
    let lifted = Matrix::from_fn(n, n, |i, j| {
        let mut parts = vec![x.get(i, j).clone()];
        if let Some(k) = u.get(i, j) {
            parts.push(Expr::prod([Expr::open(*k), p()]));
        }
        if let Some(k) = v.get(i, j) {
            parts.push(Expr::prod([q(), Expr::close(*k)]));
        }
        Expr::sum(parts)
    });
    let star = matrix_star(&lifted)?;
    let expr = star.map(wrap);

    let (mut g, ids) = entry_grammar(n);
    let matched = matched_pairs(u, v);
    let ne = nonempty(n, |i, j| !x.get(i, j).is_zero(), &matched);
    for i in 0..n {
        for j in 0..n {
            if let Some(body) = g.regex_body(x.get(i, j))? {
                g.add_rule(*ids.get(i, j), body);
            }
        }
    }
    add_closure_rules(&mut g, &ids, &ne, &matched);
    let (grammar, entry) = finish_grammar(g, &ids);
    Ok(CentralizerMatrix { expr, grammar, entry })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfKind {
    First,
    Reduced,
    Second,
}

impl NfKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NfKind::First => "first",
            NfKind::Reduced => "reduced",
            NfKind::Second => "second",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub kind: NfKind,
    pub s: Vec<bool>,
    pub f: Vec<bool>,
    pub u: Matrix<Option<u8>>,
    pub v: Matrix<Option<u8>>,
    pub w: Matrix<bool>,
    pub n: CentralizerMatrix,
}

impl NormalForm {
    pub fn dim(&self) -> usize {
        self.s.len()
    }

    /// `(N V)* N (U N)*`.
    pub fn first_matrix(&self) -> Result<Matrix<Expr>> {
        let nm = &self.n.expr;
        let nv = nm.mul(&bracket_matrix(&self.v, false))?;
        let un = bracket_matrix(&self.u, true).mul(nm)?;
        matrix_star(&nv)?.mul(nm)?.mul(&matrix_star(&un)?)
    }

    /// `N (W N)*`.
    pub fn second_matrix(&self) -> Result<Matrix<Expr>> {
        let nm = &self.n.expr;
        let wn = bool_matrix(&self.w).mul(nm)?;
        nm.mul(&matrix_star(&wn)?)
    }

    /// The element this normal form denotes.
    pub fn expr(&self) -> Result<Expr> {
        let m = match self.kind {
            NfKind::First => self.first_matrix()?,
            NfKind::Reduced => self.n.expr.clone(),
            NfKind::Second => self.second_matrix()?,
        };
        Ok(sandwich(&self.s, &m, &self.f))
    }

    pub fn to_json(&self) -> Value {
        let g = &self.n.grammar;
        json!({
            "kind": self.kind.as_str(),
            "n": self.dim(),
            "S": bits(&self.s),
            "F": bits(&self.f),
            "U": expr_rows(&bracket_matrix(&self.u, true)),
            "V": expr_rows(&bracket_matrix(&self.v, false)),
            "W": bool_rows(&self.w),
            "N_expr": expr_rows(&self.n.expr),
            "grammar": g.to_string().lines().collect::<Vec<_>>(),
        })
    }
}

fn zero_w(n: usize) -> Matrix<bool> {
    Matrix::filled(n, n, false)
}

/// `S (N V)* N (U N)* F` for an automaton without `π` edges.
pub fn first_normal_form(a: &SplitAutomaton) -> Result<NormalForm> {
    if a.has_pi() {
        return Err(Error::Precondition("first normal form needs W = 0".into()));
    }
    Ok(NormalForm {
        kind: NfKind::First,
        s: a.s.clone(),
        f: a.f.clone(),
        u: a.u.clone(),
        v: a.v.clone(),
        w: zero_w(a.n()),
        n: compute_n(&a.u, &a.x, &a.v)?,
    })
}

/// `S N F`, offered only when the language passes the bounded centralizer test
/// at `bound`. That test is a necessary condition checked on a finite sample,
/// not a proof of membership.
pub fn reduced_normal_form(a: &SplitAutomaton, bound: u32) -> Result<NormalForm> {
    if a.has_pi() {
        return Err(Error::Precondition("reduced normal form needs W = 0".into()));
    }
    if !centralizer_check_bounded(&a.language(), bound)? {
        return Err(Error::NotApplicable(format!("language has bracketed normal forms within bound {bound}")));
    }
    Ok(NormalForm { kind: NfKind::Reduced, ..first_normal_form(a)? })
}

/// `S N (W N)* F`, the projection `p0 φ q0` of `φ = S (U + X + V + W π)* F`.
pub fn project_centralizer(a: &SplitAutomaton) -> Result<NormalForm> {
    if a.uses_outer_pair() {
        return Err(Error::Precondition("U and V may not use p0 or q0".into()));
    }
    Ok(NormalForm {
        kind: NfKind::Second,
        s: a.s.clone(),
        f: a.f.clone(),
        u: a.u.clone(),
        v: a.v.clone(),
        w: a.w.clone(),
        n: compute_n(&a.u, &a.x, &a.v)?,
    })
}

// ---- combinators ------------------------------------------------------------

fn atom_nf(s: Vec<bool>, f: Vec<bool>, u: Matrix<Option<u8>>, v: Matrix<Option<u8>>, x: Matrix<Expr>) -> Result<NormalForm> {
    let n = s.len();
    Ok(NormalForm { kind: NfKind::First, s, f, u: u.clone(), v: v.clone(), w: zero_w(n), n: compute_n(&u, &x, &v)? })
}

/// Normal form of a bracket-free `k`: `N = [[1, k], [0, 1]]`.
pub fn nf_atom(k: Expr) -> Result<NormalForm> {
    if !k.is_bracket_free() {
        return Err(Error::Precondition("atom must be bracket-free".into()));
    }
    let x = Matrix::from_fn(2, 2, |i, j| if i == 0 && j == 1 { k.clone() } else { Expr::zero() });
    atom_nf(vec![true, false], vec![false, true], Matrix::filled(2, 2, None), Matrix::filled(2, 2, None), x)
}

pub fn nf_zero() -> Result<NormalForm> {
    atom_nf(vec![false], vec![false], Matrix::filled(1, 1, None), Matrix::filled(1, 1, None), Matrix::filled(1, 1, Expr::zero()))
}

pub fn nf_one() -> Result<NormalForm> {
    atom_nf(vec![true], vec![true], Matrix::filled(1, 1, None), Matrix::filled(1, 1, None), Matrix::filled(1, 1, Expr::zero()))
}

pub fn nf_bracket(t: Token) -> Result<NormalForm> {
    let mut u = Matrix::filled(2, 2, None);
    let mut v = Matrix::filled(2, 2, None);
    match t {
        Token::Open(i) => u.set(0, 1, Some(i)),
        Token::Close(i) => v.set(0, 1, Some(i)),
        _ => return Err(Error::Precondition(format!("{t} is not a bracket"))),
    }
    atom_nf(vec![true, false], vec![false, true], u, v, Matrix::filled(2, 2, Expr::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Plus,
    Concat,
    PlusClosure,
    Star,
}

impl std::str::FromStr for CombineOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(CombineOp::Plus),
            "concat" => Ok(CombineOp::Concat),
            "plusclosure" => Ok(CombineOp::PlusClosure),
            "star" => Ok(CombineOp::Star),
            _ => Err(Error::Precondition(format!("unknown operation '{s}'"))),
        }
    }
}

fn check_first(a: &NormalForm) -> Result<()> {
    if a.kind != NfKind::First {
        return Err(Error::Precondition("combinators take first normal forms".into()));
    }
    Ok(())
}

/// Combine first normal forms.
pub fn nf_combine(op: CombineOp, lhs: &NormalForm, rhs: Option<&NormalForm>) -> Result<NormalForm> {
    check_first(lhs)?;
    let need = || rhs.ok_or_else(|| Error::Precondition("operation needs two operands".into()));
    match op {
        CombineOp::Plus => {
            let r = need()?;
            check_first(r)?;
            Ok(nf_plus(lhs, r))
        }
        CombineOp::Concat => {
            let r = need()?;
            check_first(r)?;
            nf_concat(lhs, r)
        }
        CombineOp::PlusClosure => nf_plus_closure(lhs),
        CombineOp::Star => Ok(nf_plus(&nf_one()?, &nf_plus_closure(lhs)?)),
    }
}

/// Block-diagonal centralizer matrix with an off-diagonal block, grammars merged.
fn merge_n(
    a: &CentralizerMatrix,
    b: &CentralizerMatrix,
    alpha_expr: Matrix<Expr>,
    alpha: impl FnOnce(&mut Grammar, &Matrix<Option<usize>>, &Matrix<Option<usize>>, &Matrix<usize>),
) -> CentralizerMatrix {
    let (n1, n2) = (a.n(), b.n());
    let n = n1 + n2;
    let expr = Matrix::from_blocks(&a.expr, &alpha_expr, &Matrix::filled(n2, n1, Expr::zero()), &b.expr);
    let (mut g, ids) = entry_grammar(n);
    let ma = g.import(&a.grammar, "L");
    let mb = g.import(&b.grammar, "R");
    let lift = |m: &Matrix<Option<usize>>, map: &[usize]| m.map(|e| e.map(|k| map[k]));
    let (ea, eb) = (lift(&a.entry, &ma), lift(&b.entry, &mb));
    for i in 0..n1 {
        for j in 0..n1 {
            if let Some(k) = ea.get(i, j) {
                g.add_rule(*ids.get(i, j), vec![Sym::N(*k)]);
            }
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            if let Some(k) = eb.get(i, j) {
                g.add_rule(*ids.get(n1 + i, n1 + j), vec![Sym::N(*k)]);
            }
        }
    }
    let alpha_ids = ids.block(0, n1, n1, n);
    alpha(&mut g, &ea, &eb, &alpha_ids);
    let (grammar, entry) = finish_grammar(g, &ids);
    CentralizerMatrix { expr, grammar, entry }
}

fn nf_plus(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let (n1, n2) = (a.dim(), b.dim());
    let n = merge_n(&a.n, &b.n, Matrix::filled(n1, n2, Expr::zero()), |_, _, _, _| {});
    NormalForm {
        kind: NfKind::First,
        s: [a.s.clone(), b.s.clone()].concat(),
        f: [a.f.clone(), b.f.clone()].concat(),
        u: block_diag(&a.u, &b.u, None),
        v: block_diag(&a.v, &b.v, None),
        w: zero_w(n1 + n2),
        n,
    }
}

/// Product: `N = [[N1, α], [0, N2]]` with `α` least such that
/// `α >= N1 U1 α V2 N2 + N1 F1 S2 N2`.
fn nf_concat(a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
    let (n1, n2) = (a.dim(), b.dim());
    let (na, nb) = (&a.n.expr, &b.n.expr);
    let fs = Matrix::from_fn(n1, n2, |i, j| if a.f[i] && b.s[j] { Expr::one() } else { Expr::zero() });
    let core = na.mul(&fs)?.mul(nb)?;
    let left = matrix_star(&na.mul(&bracket_matrix(&a.u, true))?.scale(&Expr::one(), &p()))?;
    let right = matrix_star(&bracket_matrix(&b.v, false).mul(nb)?.scale(&q(), &Expr::one()))?;
    let alpha_expr = left.mul(&core)?.mul(&right)?.map(wrap);

    let (au, bv, af, bs) = (a.u.clone(), b.v.clone(), a.f.clone(), b.s.clone());
    let n = merge_n(&a.n, &b.n, alpha_expr, move |g, ea, eb, alpha| {
        // α_ij -> N1_ik' α_kl N2_l'j  when U1[k'][k] and V2[l][l'] match
        for k1 in 0..n1 {
            for k in 0..n1 {
                let Some(x) = au.get(k1, k) else { continue };
                for l in 0..n2 {
                    for l1 in 0..n2 {
                        if *bv.get(l, l1) != Some(*x) {
                            continue;
                        }
                        for i in 0..n1 {
                            let Some(left) = ea.get(i, k1) else { continue };
                            for j in 0..n2 {
                                let Some(right) = eb.get(l1, j) else { continue };
                                g.add_rule(*alpha.get(i, j), vec![Sym::N(*left), Sym::N(*alpha.get(k, l)), Sym::N(*right)]);
                            }
                        }
                    }
                }
            }
        }
        // α_ij -> N1_ik N2_lj  when F1[k] and S2[l]
        for k in (0..n1).filter(|&k| af[k]) {
            for l in (0..n2).filter(|&l| bs[l]) {
                for i in 0..n1 {
                    let Some(left) = ea.get(i, k) else { continue };
                    for j in 0..n2 {
                        let Some(right) = eb.get(l, j) else { continue };
                        g.add_rule(*alpha.get(i, j), vec![Sym::N(*left), Sym::N(*right)]);
                    }
                }
            }
        }
    });
    Ok(NormalForm {
        kind: NfKind::First,
        s: [a.s.clone(), vec![false; n2]].concat(),
        f: [vec![false; n1], b.f.clone()].concat(),
        u: block_diag(&a.u, &b.u, None),
        v: block_diag(&a.v, &b.v, None),
        w: zero_w(n1 + n2),
        n,
    })
}

/// `φ⁺`: same `S, U, V, F`, with `N` least such that `N >= (U N V + N1 + F S)*`.
fn nf_plus_closure(a: &NormalForm) -> Result<NormalForm> {
    let n = a.dim();
    let n1 = &a.n.expr;
    let lifted = Matrix::from_fn(n, n, |i, j| {
        let mut parts = vec![n1.get(i, j).clone()];
        if a.f[i] && a.s[j] {
            parts.push(Expr::one());
        }
        if let Some(k) = a.u.get(i, j) {
            parts.push(Expr::prod([Expr::open(*k), p()]));
        }
        if let Some(k) = a.v.get(i, j) {
            parts.push(Expr::prod([q(), Expr::close(*k)]));
        }
        Expr::sum(parts)
    });
    let expr = matrix_star(&lifted)?.map(wrap);

    let (mut g, ids) = entry_grammar(n);
    let map = g.import(&a.n.grammar, "L");
    let inner = a.n.entry.map(|e| e.map(|k| map[k]));
    let matched = matched_pairs(&a.u, &a.v);
    let ne = nonempty(n, |i, j| inner.get(i, j).is_some() || (a.f[i] && a.s[j]), &matched);
    for i in 0..n {
        for j in 0..n {
            if let Some(k) = inner.get(i, j) {
                g.add_rule(*ids.get(i, j), vec![Sym::N(*k)]);
            }
            if a.f[i] && a.s[j] {
                g.add_rule(*ids.get(i, j), vec![]);
            }
        }
    }
    add_closure_rules(&mut g, &ids, &ne, &matched);
    let (grammar, entry) = finish_grammar(g, &ids);
    Ok(NormalForm { n: CentralizerMatrix { expr, grammar, entry }, ..a.clone() })
}
