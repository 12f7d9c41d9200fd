//! Set-of-normal-forms semantics for bracket expressions.
//!
//! An expression denotes the set of normal forms of the words it generates,
//! zero dropped. Everything here is bounded by the length of *source* words;
//! auxiliary symbols (see [`crate::expr::Node::Sym`]) weigh nothing.
//!
//! Two independent evaluators compute the same bounded image:
//! a breadth-first search over the position automaton of the expression, and a
//! compositional evaluation into the semiring of bounded images, which is used
//! when unfolding shared sub-terms would make the position automaton too large.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::kleene::Kleene;
use crate::word::{Nf, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImageOptions {
    /// Largest source-word weight considered.
    pub max_src: u32,
    /// Drop words with more letters than this. Letters never cancel, so this is exact.
    pub max_letters: Option<u32>,
    /// Keep only bracket-free words. Lets the position-automaton search prune early.
    pub bracket_free_only: bool,
    /// Abort with [`Error::Overflow`] beyond this many distinct intermediate words.
    pub max_words: usize,
    /// Largest unfolded expression handed to the position automaton.
    pub max_positions: u64,
}

impl ImageOptions {
    pub fn new(max_src: u32) -> Self {
        ImageOptions { max_src, max_letters: None, bracket_free_only: false, max_words: 2_000_000, max_positions: 20_000 }
    }

    pub fn letters(mut self, n: u32) -> Self {
        self.max_letters = Some(n);
        self
    }

    pub fn bracket_free(mut self) -> Self {
        self.bracket_free_only = true;
        self
    }
}

/// A bounded image: normal forms with the least source weight producing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfImage {
    pub bound: u32,
    pub words: BTreeMap<Nf, u32>,
}

impl NfImage {
    pub fn contains(&self, w: &Nf) -> bool {
        self.words.contains_key(w)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn set(&self) -> BTreeSet<Nf> {
        self.words.keys().cloned().collect()
    }

    /// Letter strings of the bracket-free members.
    pub fn letter_strings(&self) -> BTreeSet<String> {
        self.words.keys().filter(|w| w.is_bracket_free()).map(|w| w.letter_string()).collect()
    }

    /// Printed members, sorted lexicographically.
    pub fn sorted_lines(&self) -> Vec<String> {
        let mut v: Vec<String> = self.words.keys().map(|w| w.to_string()).collect();
        v.sort();
        v
    }

    pub fn is_subset(&self, other: &NfImage) -> bool {
        self.words.keys().all(|w| other.words.contains_key(w))
    }
}

/// Element of the semiring of bounded images. This is the evaluation target for
/// the compositional route and a [`Kleene`] instance in its own right, so
/// matrices of images can be starred directly.
#[derive(Clone, Debug)]
pub struct Image {
    opts: ImageOptions,
    words: HashMap<Nf, u32>,
    overflow: bool,
}

impl PartialEq for Image {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words && self.overflow == other.overflow
    }
}

impl Image {
    pub fn empty(opts: ImageOptions) -> Image {
        Image { opts, words: HashMap::new(), overflow: false }
    }

    pub fn unit(opts: ImageOptions) -> Image {
        let mut words = HashMap::new();
        words.insert(Nf::empty(), 0);
        Image { opts, words, overflow: false }
    }

    pub fn token(opts: ImageOptions, t: Token, weight: u32) -> Image {
        let mut img = Image::empty(opts);
        let mut nf = Nf::empty();
        if nf.push(t) && weight <= opts.max_src && img.letters_ok(&nf) {
            img.words.insert(nf, weight);
        }
        img
    }

    fn letters_ok(&self, w: &Nf) -> bool {
        self.opts.max_letters.is_none_or(|m| w.letters.len() as u32 <= m)
    }

    fn insert(&mut self, w: Nf, len: u32) -> bool {
        match self.words.get_mut(&w) {
            Some(old) if *old <= len => false,
            Some(old) => {
                *old = len;
                true
            }
            None => {
                if self.words.len() >= self.opts.max_words {
                    self.overflow = true;
                    return false;
                }
                self.words.insert(w, len);
                true
            }
        }
    }

    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn to_nf_image(&self) -> Result<NfImage> {
        if self.overflow {
            return Err(Error::Overflow(self.opts.max_words));
        }
        let words = self
            .words
            .iter()
            .filter(|(w, _)| !self.opts.bracket_free_only || w.is_bracket_free())
            .map(|(w, &l)| (w.clone(), l))
            .collect();
        Ok(NfImage { bound: self.opts.max_src, words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Kleene for Image {
    fn zero_like(&self) -> Self {
        Image::empty(self.opts)
    }

    fn one_like(&self) -> Self {
        Image::unit(self.opts)
    }

    fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.words.len() >= other.words.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        out.overflow |= small.overflow;
        for (w, &l) in &small.words {
            out.insert(w.clone(), l);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Image::empty(self.opts);
        out.overflow = self.overflow || other.overflow;
        let bound = self.opts.max_src;
        for (u, &lu) in &self.words {
            for (v, &lv) in &other.words {
                let l = lu + lv;
                if l > bound {
                    continue;
                }
                if let Some(w) = u.mul(v) {
                    if out.letters_ok(&w) {
                        out.insert(w, l);
                    }
                }
            }
        }
        out
    }

    fn star(&self) -> Self {
        let mut out = Image::unit(self.opts);
        out.overflow = self.overflow;
        let items: Vec<(Nf, u32)> = self.words.iter().map(|(w, &l)| (w.clone(), l)).collect();
        let mut work = vec![(Nf::empty(), 0u32)];
        while let Some((w, l)) = work.pop() {
            if out.words.get(&w).is_some_and(|&best| best < l) {
                continue;
            }
            for (x, lx) in &items {
                let nl = l + lx;
                if nl > self.opts.max_src {
                    continue;
                }
                if let Some(y) = w.mul(x) {
                    if out.letters_ok(&y) && out.insert(y.clone(), nl) {
                        work.push((y, nl));
                    }
                }
            }
            if out.overflow {
                break;
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.words.is_empty() && !self.overflow
    }
}

/// Memoized evaluation of (shared) expressions into bounded images.
pub struct Evaluator {
    opts: ImageOptions,
    memo: HashMap<usize, Image>,
    // keep evaluated nodes alive so memo keys stay unique
    pinned: Vec<Expr>,
}

impl Evaluator {
    pub fn new(opts: ImageOptions) -> Self {
        Evaluator { opts, memo: HashMap::new(), pinned: Vec::new() }
    }

    pub fn options(&self) -> ImageOptions {
        self.opts
    }

    pub fn eval(&mut self, e: &Expr) -> Image {
        if let Some(v) = self.memo.get(&e.key()) {
            return v.clone();
        }
        let o = self.opts;
        let v = match e.node() {
            Node::Zero => Image::empty(o),
            Node::One => Image::unit(o),
            Node::Sym { tok, aux } => Image::token(o, *tok, if *aux { 0 } else { 1 }),
            Node::Sum(xs) => {
                let mut acc = Image::empty(o);
                for x in xs {
                    acc = acc.add(&self.eval(x));
                }
                acc
            }
            Node::Prod(xs) => {
                let mut acc = Image::unit(o);
                for x in xs {
                    if acc.is_zero() {
                        break;
                    }
                    acc = acc.mul(&self.eval(x));
                }
                acc
            }
            Node::Star(x) => self.eval(x).star(),
        };
        self.memo.insert(e.key(), v.clone());
        self.pinned.push(e.clone());
        v
    }

    pub fn image(&mut self, e: &Expr) -> Result<NfImage> {
        self.eval(e).to_nf_image()
    }
}

/// Position automaton of an expression, with every shared sub-term unfolded.
#[derive(Clone, Debug)]
pub struct Positions {
    pub toks: Vec<(Token, u32)>,
    pub first: Vec<usize>,
    pub last: Vec<bool>,
    pub nullable: bool,
    pub follow: Vec<Vec<usize>>,
}

impl Positions {
    pub fn build(e: &Expr) -> Positions {
        struct B {
            toks: Vec<(Token, u32)>,
            follow: Vec<Vec<usize>>,
        }
        fn go(e: &Expr, b: &mut B) -> (bool, Vec<usize>, Vec<usize>) {
            match e.node() {
                Node::Zero => (false, vec![], vec![]),
                Node::One => (true, vec![], vec![]),
                Node::Sym { tok, aux } => {
                    let k = b.toks.len();
                    b.toks.push((*tok, if *aux { 0 } else { 1 }));
                    b.follow.push(vec![]);
                    (false, vec![k], vec![k])
                }
                Node::Sum(xs) => {
                    let (mut n, mut f, mut l) = (false, vec![], vec![]);
                    for x in xs {
                        let (n1, f1, l1) = go(x, b);
                        n |= n1;
                        f.extend(f1);
                        l.extend(l1);
                    }
                    (n, f, l)
                }
                Node::Prod(xs) => {
                    let (mut n, mut f, mut l): (bool, Vec<usize>, Vec<usize>) = (true, vec![], vec![]);
                    for x in xs {
                        let (n2, f2, l2) = go(x, b);
                        for &p in &l {
                            b.follow[p].extend(f2.iter().copied());
                        }
                        if n {
                            f.extend(f2.iter().copied());
                        }
                        if n2 {
                            l.extend(l2);
                        } else {
                            l = l2;
                        }
                        n &= n2;
                    }
                    (n, f, l)
                }
                Node::Star(x) => {
                    let (_, f, l) = go(x, b);
                    for &p in &l {
                        b.follow[p].extend(f.iter().copied());
                    }
                    (true, f, l)
                }
            }
        }
        let mut b = B { toks: vec![], follow: vec![] };
        let (nullable, mut first, lasts) = go(e, &mut b);
        first.sort_unstable();
        first.dedup();
        for f in &mut b.follow {
            f.sort_unstable();
            f.dedup();
        }
        let mut last = vec![false; b.toks.len()];
        for p in lasts {
            last[p] = true;
        }
        Positions { toks: b.toks, first, last, nullable, follow: b.follow }
    }

    /// Successor positions of a state; state 0 is the start, state `k+1` is position `k`.
    pub fn next(&self, state: usize) -> &[usize] {
        if state == 0 {
            &self.first
        } else {
            &self.follow[state - 1]
        }
    }

    pub fn accepting(&self, state: usize) -> bool {
        if state == 0 {
            self.nullable
        } else {
            self.last[state - 1]
        }
    }
}

/// Breadth-first search over (position, normal form of the prefix).
fn positions_image(pos: &Positions, opts: &ImageOptions, target: Option<&Nf>) -> Result<NfImage> {
    let mut dist: HashMap<(usize, Nf), u32> = HashMap::new();
    let mut queue: VecDeque<(usize, Nf, u32)> = VecDeque::new();
    let mut out: BTreeMap<Nf, u32> = BTreeMap::new();
    dist.insert((0, Nf::empty()), 0);
    queue.push_back((0, Nf::empty(), 0));
    let compatible = |w: &Nf| -> bool {
        if let Some(t) = target {
            if !t.closes.starts_with(&w.closes) || !t.letters.starts_with(&w.letters) {
                return false;
            }
        }
        if opts.bracket_free_only && !w.closes.is_empty() {
            return false;
        }
        opts.max_letters.is_none_or(|m| w.letters.len() as u32 <= m)
    };
    // Opens that the result cannot keep must be cancelled later, each by a
    // close of at least this weight (`None`: nothing can close them).
    let close_cost = pos.toks.iter().filter(|(t, _)| matches!(t, Token::Close(_))).map(|&(_, w)| w).min();
    let final_opens: Option<&[u8]> = match target {
        Some(t) => Some(&t.opens),
        None if opts.bracket_free_only => Some(&[]),
        None => None,
    };
    let affordable = |w: &Nf, d: u32| -> bool {
        let Some(keep) = final_opens else { return true };
        let common = w.opens.iter().zip(keep).take_while(|(a, b)| a == b).count();
        let excess = (w.opens.len() - common) as u64;
        match close_cost {
            _ if excess == 0 => true,
            None => false,
            Some(c) => excess * c as u64 <= (opts.max_src - d) as u64,
        }
    };
    while let Some((state, w, d)) = queue.pop_front() {
        if dist.get(&(state, w.clone())).is_some_and(|&best| best < d) {
            continue;
        }
        if pos.accepting(state) && (!opts.bracket_free_only || w.is_bracket_free()) {
            let e = out.entry(w.clone()).or_insert(d);
            *e = (*e).min(d);
            if target == Some(&w) {
                break;
            }
        }
        for &y in pos.next(state) {
            let (t, wt) = pos.toks[y];
            let nd = d + wt;
            if nd > opts.max_src {
                continue;
            }
            let mut nw = w.clone();
            if !nw.push(t) || !compatible(&nw) || !affordable(&nw, nd) {
                continue;
            }
            let key = (y + 1, nw);
            match dist.get(&key) {
                Some(&best) if best <= nd => continue,
                _ => {}
            }
            if dist.len() >= opts.max_words {
                return Err(Error::Overflow(opts.max_words));
            }
            dist.insert(key.clone(), nd);
            if wt == 0 {
                queue.push_front((key.0, key.1, nd));
            } else {
                queue.push_back((key.0, key.1, nd));
            }
        }
    }
    if let Some(t) = target {
        out.retain(|w, _| w == t);
    }
    Ok(NfImage { bound: opts.max_src, words: out })
}

/// How many times larger than its DAG an expression may be when unfolded
/// into positions. Beyond that the memoized evaluator shares the work.
const SHARING_LIMIT: u64 = 16;

fn prefer_positions(e: &Expr, opts: &ImageOptions) -> bool {
    let size = e.expanded_size();
    size <= opts.max_positions && size <= SHARING_LIMIT * e.dag_size() as u64
}

/// Bounded image `{nf(w) : w generated by e, weight(w) <= max_src} \ {0}`.
pub fn enumerate_nf_image_with(e: &Expr, opts: &ImageOptions) -> Result<NfImage> {
    if prefer_positions(e, opts) {
        positions_image(&Positions::build(e), opts, None)
    } else {
        Evaluator::new(*opts).image(e)
    }
}

pub fn enumerate_nf_image(e: &Expr, max_src: u32) -> Result<NfImage> {
    enumerate_nf_image_with(e, &ImageOptions::new(max_src))
}

/// Same image through the compositional evaluator only.
pub fn compositional_image(e: &Expr, opts: &ImageOptions) -> Result<NfImage> {
    Evaluator::new(*opts).image(e)
}

/// Same image through the position automaton only, whatever its size.
pub fn positional_image(e: &Expr, opts: &ImageOptions) -> Result<NfImage> {
    positions_image(&Positions::build(e), opts, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    EqualUpToBound(u32),
    /// `witness` lies in the image of the left operand iff `in_left`.
    Distinct { witness: Nf, in_left: bool },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::EqualUpToBound(_))
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::EqualUpToBound(l) => write!(f, "equal-up-to-bound {l}"),
            Verdict::Distinct { witness, in_left } => {
                write!(f, "distinct {} ({})", witness, if *in_left { "left only" } else { "right only" })
            }
        }
    }
}

/// How much longer a source may be when re-checking a candidate witness.
const CONFIRM_FACTOR: u32 = 4;

/// Is `w` in the image of `e` for sources of weight at most `max_src`?
/// Searches only prefixes that can still reduce to `w`.
pub fn image_contains(e: &Expr, w: &Nf, max_src: u32, opts: &ImageOptions) -> Result<bool> {
    let o = ImageOptions { max_src, max_letters: Some(w.letters.len() as u32), bracket_free_only: false, ..*opts };
    if prefer_positions(e, opts) {
        Ok(positions_image(&Positions::build(e), &o, Some(w))?.contains(w))
    } else {
        Ok(Evaluator::new(o).image(e)?.contains(w))
    }
}

/// Compare two bounded images.
///
/// Candidates are normal forms of length at most `max_src / 2` found on one side
/// only. Each candidate is searched for again on the other side with a longer
/// source budget; it is reported only if still absent, so boundary effects
/// from one side needing longer sources for the same normal form do not show up
/// as differences. An equal verdict is still only a bounded one.
pub fn equal_bounded_with(e1: &Expr, e2: &Expr, opts: &ImageOptions) -> Result<Verdict> {
    let i1 = enumerate_nf_image_with(e1, opts)?;
    let i2 = enumerate_nf_image_with(e2, opts)?;
    let half = (opts.max_src / 2) as usize;
    let mut candidates: Vec<(&Nf, bool)> = i1
        .words
        .keys()
        .filter(|w| !i2.contains(w))
        .map(|w| (w, true))
        .chain(i2.words.keys().filter(|w| !i1.contains(w)).map(|w| (w, false)))
        .filter(|(w, _)| w.len() <= half)
        .collect();
    candidates.sort_by_key(|(w, _)| (w.len(), w.to_string()));
    let slack = opts.max_src.saturating_mul(CONFIRM_FACTOR);
    for (w, in_left) in candidates {
        let other = if in_left { e2 } else { e1 };
        if !image_contains(other, w, slack, opts)? {
            return Ok(Verdict::Distinct { witness: w.clone(), in_left });
        }
    }
    Ok(Verdict::EqualUpToBound(opts.max_src))
}

pub fn equal_bounded(e1: &Expr, e2: &Expr, max_src: u32) -> Result<Verdict> {
    equal_bounded_with(e1, e2, &ImageOptions::new(max_src))
}

/// True iff every member of the bounded image is bracket-free: a bounded,
/// necessary test for lying in the centralizer of the bracket monoid.
pub fn centralizer_check_bounded(e: &Expr, max_src: u32) -> Result<bool> {
    Ok(enumerate_nf_image(e, max_src)?.words.keys().all(Nf::is_bracket_free))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecognizerConfig {
    /// Summary facts recorded before giving up.
    pub node_cap: usize,
}

impl Default for RecognizerConfig {
    fn default() -> Self {
        RecognizerConfig { node_cap: 1_000_000 }
    }
}

/// Check that `e` is a product `p0 · r · q0`.
pub fn check_wrapped(e: &Expr) -> Result<()> {
    let ok = match e.node() {
        Node::Prod(xs) if xs.len() >= 2 => {
            matches!(xs[0].node(), Node::Sym { tok: Token::Open(0), .. })
                && matches!(xs[xs.len() - 1].node(), Node::Sym { tok: Token::Close(0), .. })
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition("expression must have the form p0 r q0".into()))
    }
}

/// Decide whether the letter word `w` lies in the language represented by
/// `p0 r q0`: a run of the position automaton is accepted when it reads `w`
/// and its brackets cancel completely, each close popping the open of the same
/// index.
///
/// Instead of carrying whole stacks, the search records which configurations
/// `(state, cursor)` are reachable from the configuration right after an open
/// through a balanced stretch; the open's index is the stack-top context. Each
/// such fact is derived once, so the search is exact and polynomial in the
/// number of positions and `|w|`.
///
/// The empty language has no `p0 r q0` shape left after simplification, so `0`
/// is accepted and rejects every word.
pub fn stack_recognize(e: &Expr, w: &str, cfg: RecognizerConfig) -> Result<bool> {
    if e.is_zero() {
        return Ok(false);
    }
    check_wrapped(e)?;
    let pos = Positions::build(e);
    let word: Vec<char> = w.chars().collect();
    type Conf = (usize, usize);
    // entry -> configurations reached from it with a balanced stack
    let mut reach: HashMap<Conf, HashSet<Conf>> = HashMap::new();
    // entry -> (caller entry, bracket index) waiting for the entry to return
    let mut callers: HashMap<Conf, Vec<(Conf, u8)>> = HashMap::new();
    // entry -> (bracket index, configuration after the close) it returns with
    let mut returns: HashMap<Conf, Vec<(u8, Conf)>> = HashMap::new();
    let mut work: Vec<(Conf, Conf)> = Vec::new();
    let mut facts = 0usize;
    let mut add = |entry: Conf, c: Conf, reach: &mut HashMap<Conf, HashSet<Conf>>, work: &mut Vec<(Conf, Conf)>| -> Result<()> {
        if reach.entry(entry).or_default().insert(c) {
            facts += 1;
            if facts > cfg.node_cap {
                return Err(Error::Budget(cfg.node_cap));
            }
            work.push((entry, c));
        }
        Ok(())
    };
    let root = (0, 0);
    add(root, root, &mut reach, &mut work)?;
    while let Some((entry, (state, cursor))) = work.pop() {
        if entry == root && cursor == word.len() && pos.accepting(state) {
            return Ok(true);
        }
        for &y in pos.next(state) {
            let to = y + 1;
            match pos.toks[y].0 {
                Token::Letter(c) => {
                    if word.get(cursor) == Some(&c) {
                        add(entry, (to, cursor + 1), &mut reach, &mut work)?;
                    }
                }
                Token::Open(i) => {
                    let callee = (to, cursor);
                    callers.entry(callee).or_default().push((entry, i));
                    let done: Vec<Conf> = returns.get(&callee).into_iter().flatten().filter(|(j, _)| *j == i).map(|&(_, c)| c).collect();
                    for c in done {
                        add(entry, c, &mut reach, &mut work)?;
                    }
                    add(callee, callee, &mut reach, &mut work)?;
                }
                Token::Close(j) => {
                    if entry == root {
                        continue;
                    }
                    let after = (to, cursor);
                    returns.entry(entry).or_default().push((j, after));
                    let waiting: Vec<Conf> = callers.get(&entry).into_iter().flatten().filter(|(_, i)| *i == j).map(|&(c, _)| c).collect();
                    for caller in waiting {
                        add(caller, after, &mut reach, &mut work)?;
                    }
                }
                Token::Zero => {}
            }
        }
    }
    Ok(false)
}
