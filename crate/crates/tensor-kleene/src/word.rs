//! Bracket words and their normal forms.
//!
//! Words are sequences over letters, opening brackets `p_i`, closing brackets
//! `q_i` and a zero marker. Every word reduces to a unique representative of
//! shape `q* x* p*` or to zero under the rules
//!
//! ```text
//! p_i x -> x p_i      x q_i -> q_i x      p_i q_i -> 1
//! p_i q_j -> 0 (i != j)                   u 0 v -> 0
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Letter(char),
    Open(u8),
    Close(u8),
    Zero,
}

impl Token {
    pub fn is_bracket(self) -> bool {
        matches!(self, Token::Open(_) | Token::Close(_))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Letter(c) => write!(f, "{c}"),
            Token::Open(i) => write!(f, "p{i}"),
            Token::Close(i) => write!(f, "q{i}"),
            Token::Zero => write!(f, "_0_"),
        }
    }
}

/// A nonzero normal form: closing brackets, then letters, then opening brackets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nf {
    pub closes: Vec<u8>,
    pub letters: Vec<char>,
    pub opens: Vec<u8>,
}

impl Nf {
    pub fn empty() -> Nf {
        Nf::default()
    }

    pub fn letter(c: char) -> Nf {
        Nf { letters: vec![c], ..Nf::default() }
    }

    pub fn open(i: u8) -> Nf {
        Nf { opens: vec![i], ..Nf::default() }
    }

    pub fn close(i: u8) -> Nf {
        Nf { closes: vec![i], ..Nf::default() }
    }

    pub fn from_letters(s: &str) -> Nf {
        Nf { letters: s.chars().collect(), ..Nf::default() }
    }

    pub fn len(&self) -> usize {
        self.closes.len() + self.letters.len() + self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_bracket_free(&self) -> bool {
        self.closes.is_empty() && self.opens.is_empty()
    }

    pub fn letter_string(&self) -> String {
        self.letters.iter().collect()
    }

    /// The word `closes · letters · opens` as a token sequence.
    pub fn flatten(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(self.len());
        out.extend(self.closes.iter().map(|&i| Token::Close(i)));
        out.extend(self.letters.iter().map(|&c| Token::Letter(c)));
        out.extend(self.opens.iter().map(|&i| Token::Open(i)));
        out
    }

    /// Product of normal forms; `None` is the zero word.
    pub fn mul(&self, other: &Nf) -> Option<Nf> {
        let mut opens = self.opens.as_slice();
        let mut closes = other.closes.as_slice();
        while let (Some((&o, o_rest)), Some((&c, c_rest))) = (opens.split_last(), closes.split_first()) {
            if o != c {
                return None;
            }
            opens = o_rest;
            closes = c_rest;
        }
        let mut out = Nf {
            closes: Vec::with_capacity(self.closes.len() + closes.len()),
            letters: Vec::with_capacity(self.letters.len() + other.letters.len()),
            opens: Vec::with_capacity(opens.len() + other.opens.len()),
        };
        out.closes.extend_from_slice(&self.closes);
        out.closes.extend_from_slice(closes);
        out.letters.extend_from_slice(&self.letters);
        out.letters.extend_from_slice(&other.letters);
        out.opens.extend_from_slice(opens);
        out.opens.extend_from_slice(&other.opens);
        Some(out)
    }

    /// Append one token in place. Returns false if the word became zero.
    pub fn push(&mut self, t: Token) -> bool {
        match t {
            Token::Letter(c) => self.letters.push(c),
            Token::Open(i) => self.opens.push(i),
            Token::Close(j) => match self.opens.last() {
                None => self.closes.push(j),
                Some(&i) if i == j => {
                    self.opens.pop();
                }
                Some(_) => return false,
            },
            Token::Zero => return false,
        }
        true
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.flatten().iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A normal form word, with zero as a distinguished value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NfWord {
    Zero,
    Word(Nf),
}

impl NfWord {
    pub fn one() -> NfWord {
        NfWord::Word(Nf::empty())
    }

    pub fn as_nf(&self) -> Option<&Nf> {
        match self {
            NfWord::Zero => None,
            NfWord::Word(w) => Some(w),
        }
    }

    pub fn flatten(&self) -> Vec<Token> {
        match self {
            NfWord::Zero => vec![Token::Zero],
            NfWord::Word(w) => w.flatten(),
        }
    }
}

impl From<Option<Nf>> for NfWord {
    fn from(o: Option<Nf>) -> Self {
        o.map_or(NfWord::Zero, NfWord::Word)
    }
}

impl fmt::Display for NfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NfWord::Zero => write!(f, "_0_"),
            NfWord::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Normal form of a word, by one left-to-right scan keeping pending opens on a stack.
pub fn nf_reduce(w: &[Token]) -> NfWord {
    let mut acc = Nf::empty();
    for &t in w {
        if !acc.push(t) {
            return NfWord::Zero;
        }
    }
    NfWord::Word(acc)
}

pub fn nf_mul(u: &NfWord, v: &NfWord) -> NfWord {
    match (u, v) {
        (NfWord::Word(a), NfWord::Word(b)) => a.mul(b).into(),
        _ => NfWord::Zero,
    }
}

fn is_irreducible(w: &[Token]) -> bool {
    if w == [Token::Zero] {
        return true;
    }
    if w.contains(&Token::Zero) {
        return false;
    }
    // shape q* x* p*
    let rank = |t: &Token| match t {
        Token::Close(_) => 0,
        Token::Letter(_) => 1,
        _ => 2,
    };
    w.windows(2).all(|p| rank(&p[0]) <= rank(&p[1]))
}

/// All one-step rewrites of `w`, one per redex.
fn rewrite_steps(w: &[Token]) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    if w.len() > 1 && w.contains(&Token::Zero) {
        out.push(vec![Token::Zero]);
    }
    for i in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[i], w[i + 1]);
        let replacement: Option<Vec<Token>> = match (a, b) {
            (Token::Open(_), Token::Letter(_)) => Some(vec![b, a]),
            (Token::Letter(_), Token::Close(_)) => Some(vec![b, a]),
            (Token::Open(x), Token::Close(y)) if x == y => Some(vec![]),
            (Token::Open(_), Token::Close(_)) => Some(vec![Token::Zero]),
            _ => None,
        };
        if let Some(r) = replacement {
            let mut next = Vec::with_capacity(w.len());
            next.extend_from_slice(&w[..i]);
            next.extend(r);
            next.extend_from_slice(&w[i + 2..]);
            out.push(next);
        }
    }
    out
}

/// Every irreducible word reachable from `w` by applying the rewrite rules in
/// any order. Confluence means the result always has exactly one element.
pub fn reduce_all_orders(w: &[Token]) -> BTreeSet<Vec<Token>> {
    let mut seen: HashSet<Vec<Token>> = HashSet::new();
    let mut stack = vec![w.to_vec()];
    let mut normal = BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        let steps = rewrite_steps(&cur);
        if steps.is_empty() {
            debug_assert!(is_irreducible(&cur));
            normal.insert(cur);
        } else {
            stack.extend(steps.into_iter().filter(|s| !seen.contains(s)));
        }
    }
    normal
}

/// How to recode `m` bracket pairs into two pairs `b = p0`, `p = p1`, `d = q0`, `q = q1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EncodeMode {
    /// `p_i -> b p^(i+1)`, `q_i -> q^(i+1) d`.
    Polycyclic,
    /// `p_i -> b p^i` for `i < m-1`, `p_(m-1) -> p^(m-1)`; closing brackets mirrored.
    Braket,
}

/// Two-pair code of a single bracket. Letters are returned unchanged.
pub fn encode_token(t: Token, m: u8, mode: EncodeMode) -> Result<Vec<Token>> {
    if m < 2 {
        return Err(Error::Precondition(format!("recoding needs m >= 2, got {m}")));
    }
    let check = |i: u8| {
        if i >= m {
            Err(Error::BracketIndex { index: i, m })
        } else {
            Ok(())
        }
    };
    let b = Token::Open(0);
    let p = Token::Open(1);
    let d = Token::Close(0);
    let q = Token::Close(1);
    Ok(match (t, mode) {
        (Token::Letter(_) | Token::Zero, _) => vec![t],
        (Token::Open(i), EncodeMode::Polycyclic) => {
            check(i)?;
            let mut v = vec![b];
            v.extend(std::iter::repeat_n(p, i as usize + 1));
            v
        }
        (Token::Close(i), EncodeMode::Polycyclic) => {
            check(i)?;
            let mut v: Vec<Token> = std::iter::repeat_n(q, i as usize + 1).collect();
            v.push(d);
            v
        }
        (Token::Open(i), EncodeMode::Braket) => {
            check(i)?;
            if i + 1 < m {
                let mut v = vec![b];
                v.extend(std::iter::repeat_n(p, i as usize));
                v
            } else {
                std::iter::repeat_n(p, i as usize).collect()
            }
        }
        (Token::Close(i), EncodeMode::Braket) => {
            check(i)?;
            if i + 1 < m {
                let mut v: Vec<Token> = std::iter::repeat_n(q, i as usize).collect();
                v.push(d);
                v
            } else {
                std::iter::repeat_n(q, i as usize).collect()
            }
        }
    })
}

/// Homomorphic recoding of a word over `m` bracket pairs into two pairs.
pub fn encode_brackets(w: &[Token], m: u8, mode: EncodeMode) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for &t in w {
        out.extend(encode_token(t, m, mode)?);
    }
    Ok(out)
}

/// Options for reading words and expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Syntax {
    /// Number of bracket pairs; indices must be below this.
    pub m: u8,
    /// Accept `b p d q` as `p0 p1 q0 q1`. Only meaningful for `m = 2`; when on,
    /// `b` and `d` stop being letters.
    pub aliases: bool,
}

impl Default for Syntax {
    fn default() -> Self {
        Syntax { m: 2, aliases: false }
    }
}

/// Split a symbol run such as `ap1q1b` into tokens. Shared with the expression lexer.
pub(crate) fn lex_symbol(chars: &[char], i: &mut usize, syn: Syntax) -> Result<Token> {
    let start = *i;
    let c = chars[*i];
    *i += 1;
    let digit = chars.get(*i).and_then(|d| d.to_digit(10));
    let bracket = |idx: u32, open: bool| -> Result<Token> {
        let idx = idx as u8;
        if idx >= syn.m {
            return Err(Error::BracketIndex { index: idx, m: syn.m });
        }
        Ok(if open { Token::Open(idx) } else { Token::Close(idx) })
    };
    match c {
        'p' | 'q' => {
            if let Some(dg) = digit {
                *i += 1;
                bracket(dg, c == 'p')
            } else if syn.aliases {
                bracket(1, c == 'p')
            } else {
                Err(Error::Syntax { pos: start, msg: format!("'{c}' must be followed by a bracket index") })
            }
        }
        'b' if syn.aliases => bracket(0, true),
        'd' if syn.aliases => bracket(0, false),
        'a'..='z' => Ok(Token::Letter(c)),
        _ => Err(Error::Syntax { pos: start, msg: format!("unexpected character '{c}'") }),
    }
}

/// Read a word: whitespace-separated tokens, `1` for the empty word, `_0_` for zero.
/// Runs of symbols without spaces (`aabb`, `p1aq1`) are split as well.
pub fn parse_word(text: &str, syn: Syntax) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split_whitespace() {
        let pos = text[offset..].find(part).map_or(offset, |p| p + offset);
        offset = pos + part.len();
        if part == "_0_" {
            out.push(Token::Zero);
            continue;
        }
        if part == "1" {
            continue;
        }
        let chars: Vec<char> = part.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let t = lex_symbol(&chars, &mut i, syn).map_err(|e| match e {
                Error::Syntax { pos: p, msg } => Error::Syntax { pos: pos + p, msg },
                other => other,
            })?;
            out.push(t);
        }
    }
    Ok(out)
}

pub fn format_word(w: &[Token]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}
