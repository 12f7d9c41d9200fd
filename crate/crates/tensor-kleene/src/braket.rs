//! Brackets as stack operations on `{0, …, T-1}`.
//!
//! A stack over `m` symbols is coded as a number in base `m` with the top digit
//! last, so pushing `i` maps `k` to `m·k + i` and popping `j` is the converse.
//! Pushes that would leave `{0, …, T-1}` are dropped. Relations computed by
//! composing truncated relations lose pairs whose intermediate stack overflows;
//! laws involving such compositions are checked on the domain
//! `{k : m·k + m - 1 < T}` of stacks that can take any push ([`domain`]).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::kleene::{Kleene, Matrix};
use crate::tensor::{centralizer_check_bounded, equal_bounded_with, ImageOptions, Verdict};
use crate::word::{nf_reduce, Nf, NfWord, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRelation {
    pub t: usize,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl IndexRelation {
    pub fn empty(t: usize) -> Self {
        IndexRelation { t, pairs: BTreeSet::new() }
    }

    pub fn identity(t: usize) -> Self {
        IndexRelation { t, pairs: (0..t).map(|k| (k, k)).collect() }
    }

    pub fn from_pairs(t: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        IndexRelation { t, pairs: pairs.into_iter().filter(|&(a, b)| a < t && b < t).collect() }
    }

    /// Push `i`: `{(k, m·k + i)}`.
    pub fn push(i: u8, m: u8, t: usize) -> Self {
        let (i, m) = (i as usize, m as usize);
        IndexRelation::from_pairs(t, (0..t).map(|k| (k, m * k + i)))
    }

    /// Pop `j`: the converse of a push.
    pub fn pop(j: u8, m: u8, t: usize) -> Self {
        IndexRelation::push(j, m, t).converse()
    }

    pub fn converse(&self) -> Self {
        IndexRelation { t: self.t, pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        IndexRelation { t: self.t.min(other.t), pairs: self.pairs.union(&other.pairs).copied().collect() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut pairs = BTreeSet::new();
        for &(a, b) in &self.pairs {
            for &(_, c) in other.pairs.range((b, 0)..=(b, usize::MAX)) {
                pairs.insert((a, c));
            }
        }
        IndexRelation { t: self.t.min(other.t), pairs }
    }

    /// Reflexive-transitive closure.
    pub fn closure(&self) -> Self {
        let mut r = IndexRelation::identity(self.t).union(self);
        loop {
            let next = r.union(&r.compose(&r));
            if next == r {
                return r;
            }
            r = next;
        }
    }

    /// Keep pairs with both ends in `dom`.
    pub fn restrict(&self, dom: &BTreeSet<usize>) -> Self {
        IndexRelation {
            t: self.t,
            pairs: self.pairs.iter().copied().filter(|(a, b)| dom.contains(a) && dom.contains(b)).collect(),
        }
    }

    /// Keep pairs whose source lies in `dom`.
    pub fn restrict_source(&self, dom: &BTreeSet<usize>) -> Self {
        IndexRelation { t: self.t, pairs: self.pairs.iter().copied().filter(|(a, _)| dom.contains(a)).collect() }
    }

    pub fn is_identity_on(&self, dom: &BTreeSet<usize>) -> bool {
        self.restrict_source(dom).pairs == dom.iter().map(|&k| (k, k)).collect()
    }
}

impl Kleene for IndexRelation {
    fn zero_like(&self) -> Self {
        IndexRelation::empty(self.t)
    }
    fn one_like(&self) -> Self {
        IndexRelation::identity(self.t)
    }
    fn add(&self, other: &Self) -> Self {
        self.union(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.compose(other)
    }
    fn star(&self) -> Self {
        self.closure()
    }
    fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for IndexRelation {
    /// Sorted pairs, one `row col` per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

fn check_t(m: u8, t: usize) -> Result<()> {
    if m < 2 || t < m as usize {
        return Err(Error::Precondition(format!("need m >= 2 and T >= m, got m = {m}, T = {t}")));
    }
    Ok(())
}

/// Relation of a normal-form bracket word: pops, then pushes. Intermediate
/// stacks never exceed the endpoints, so this is exact below `T`.
fn nf_relation(w: &Nf, m: u8, t: usize) -> IndexRelation {
    let m = m as usize;
    let mut pairs = BTreeSet::new();
    'src: for k0 in 0..t {
        let mut k = k0;
        for &j in &w.closes {
            if k % m != j as usize {
                continue 'src;
            }
            k /= m;
        }
        for &i in &w.opens {
            k = m * k + i as usize;
            if k >= t {
                continue 'src;
            }
        }
        pairs.insert((k0, k));
    }
    IndexRelation { t, pairs }
}

/// The finitely many words of a star-free expression, if there are at most `cap`.
fn words(e: &Expr, cap: usize) -> Option<BTreeSet<Vec<Token>>> {
    Some(match e.node() {
        Node::Zero => BTreeSet::new(),
        Node::One => BTreeSet::from([vec![]]),
        Node::Sym { tok, .. } => BTreeSet::from([vec![*tok]]),
        Node::Sum(xs) => {
            let mut out = BTreeSet::new();
            for x in xs {
                out.extend(words(x, cap)?);
                if out.len() > cap {
                    return None;
                }
            }
            out
        }
        Node::Prod(xs) => {
            let mut acc = BTreeSet::from([vec![]]);
            for x in xs {
                let ws = words(x, cap)?;
                let mut next = BTreeSet::new();
                for u in &acc {
                    for v in &ws {
                        next.insert([u.as_slice(), v.as_slice()].concat());
                    }
                }
                if next.len() > cap {
                    return None;
                }
                acc = next;
            }
            acc
        }
        Node::Star(_) => return None,
    })
}

/// Interpret a bracket expression as a relation on stacks below `T`.
///
/// Star-free expressions are expanded into words, each reduced to its normal
/// form and interpreted exactly, so the result is the restriction of the
/// unbounded model. Stars are closed within `{0, …, T-1}`.
pub fn omega_model_eval(e: &Expr, m: u8, t: usize) -> Result<IndexRelation> {
    check_t(m, t)?;
    if let Some(tok) = e.symbols().into_iter().find(|t| matches!(t, Token::Letter(_))) {
        return Err(Error::Precondition(format!("{tok} has no stack meaning")));
    }
    if let Some(bad) = e.symbols().into_iter().find_map(|t| match t {
        Token::Open(i) | Token::Close(i) if i >= m => Some(i),
        _ => None,
    }) {
        return Err(Error::BracketIndex { index: bad, m });
    }
    fn go(e: &Expr, m: u8, t: usize) -> IndexRelation {
        if let Some(ws) = words(e, 4096) {
            let mut acc = IndexRelation::empty(t);
            for w in ws {
                if let NfWord::Word(nf) = nf_reduce(&w) {
                    acc = acc.union(&nf_relation(&nf, m, t));
                }
            }
            return acc;
        }
        match e.node() {
            Node::Sum(xs) => xs.iter().fold(IndexRelation::empty(t), |acc, x| acc.union(&go(x, m, t))),
            Node::Prod(xs) => xs.iter().fold(IndexRelation::identity(t), |acc, x| acc.compose(&go(x, m, t))),
            Node::Star(x) => go(x, m, t).closure(),
            _ => unreachable!("leaves are star-free"),
        }
    }
    Ok(go(e, m, t))
}

/// Stacks that can take any push without leaving `{0, …, T-1}`.
pub fn domain(m: u8, t: usize) -> BTreeSet<usize> {
    let m = m as usize;
    (0..t).filter(|k| m * k + m - 1 < t).collect()
}

/// `Σ_{i<m} q_i p_i`.
pub fn completeness_sum(m: u8) -> Expr {
    Expr::sum((0..m).map(|i| Expr::prod([Expr::close(i), Expr::open(i)])))
}

/// `hat(a)_ij = p_i a q_j`.
pub fn hat_map(a: &IndexRelation, m: u8, t: usize) -> Result<Matrix<IndexRelation>> {
    check_t(m, t)?;
    let m_ = m as usize;
    Ok(Matrix::from_fn(m_, m_, |i, j| {
        IndexRelation::push(i as u8, m, t).compose(a).compose(&IndexRelation::pop(j as u8, m, t))
    }))
}

/// `check(A) = Σ_ij q_i A_ij p_j`.
pub fn check_map(a: &Matrix<IndexRelation>, m: u8, t: usize) -> Result<IndexRelation> {
    check_t(m, t)?;
    let m_ = m as usize;
    if a.rows() != m_ || a.cols() != m_ {
        return Err(Error::Shape(format!("check needs an {m_}x{m_} matrix")));
    }
    let mut acc = IndexRelation::empty(t);
    for i in 0..m_ {
        for j in 0..m_ {
            let term = IndexRelation::pop(i as u8, m, t).compose(a.get(i, j)).compose(&IndexRelation::push(j as u8, m, t));
            acc = acc.union(&term);
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelCompVerdict {
    pub verdict: Verdict,
    /// Whether `p0 φ(1) q0` passed the bounded centralizer test.
    pub centralizer: bool,
}

impl RelCompVerdict {
    pub fn holds(&self) -> bool {
        self.verdict.is_equal() && self.centralizer
    }
}

/// Compare `p0 φ(e) q0` with `p0 φ(1) q0`, where `e = Σ q_i p_i` is substituted
/// for the letter `slot`.
///
/// `φ` may use `p0` and `q0` only inside `π = q0 p0`. The substituted copies of
/// `e` are auxiliary, so both sides are measured by the source length of `φ`.
pub fn relative_completeness_check(phi: &Expr, slot: char, m: u8, bound: u32) -> Result<RelCompVerdict> {
    if !crate::bridge::outer_pair_only_in_pi(phi) {
        return Err(Error::Precondition("p0 and q0 may occur only inside q0 p0".into()));
    }
    let wrap = |e: Expr| Expr::prod([Expr::open(0), e, Expr::close(0)]);
    let with_e = wrap(phi.substitute(slot, &completeness_sum(m).as_aux()));
    let with_one = wrap(phi.substitute(slot, &Expr::one()));
    let verdict = equal_bounded_with(&with_e, &with_one, &ImageOptions::new(bound))?;
    let centralizer = centralizer_check_bounded(&with_one, bound)?;
    Ok(RelCompVerdict { verdict, centralizer })
}
