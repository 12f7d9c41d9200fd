//! Regular expressions over letters and brackets.
//!
//! Expressions are immutable and reference counted, so the large matrices
//! built by [`crate::kleene::matrix_star`] share sub-terms instead of copying
//! them. The smart constructors apply only light simplification: `0` and `1`
//! absorption, flattening of nested sums and products, and `x** = x*`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kleene::Kleene;
use crate::word::{lex_symbol, Syntax, Token};

#[derive(Debug)]
pub enum Node {
    Zero,
    One,
    /// A letter or bracket. Auxiliary symbols are bookkeeping brackets introduced
    /// by constructions; they denote the same element but add nothing to the
    /// source-length bound used by enumeration.
    Sym { tok: Token, aux: bool },
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    Star(Expr),
}

#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn zero() -> Expr {
        Expr(Arc::new(Node::Zero))
    }

    pub fn one() -> Expr {
        Expr(Arc::new(Node::One))
    }

    pub fn sym(tok: Token) -> Expr {
        match tok {
            Token::Zero => Expr::zero(),
            _ => Expr(Arc::new(Node::Sym { tok, aux: false })),
        }
    }

    pub fn aux(tok: Token) -> Expr {
        Expr(Arc::new(Node::Sym { tok, aux: true }))
    }

    pub fn letter(c: char) -> Expr {
        Expr::sym(Token::Letter(c))
    }

    pub fn open(i: u8) -> Expr {
        Expr::sym(Token::Open(i))
    }

    pub fn close(i: u8) -> Expr {
        Expr::sym(Token::Close(i))
    }

    /// `q0·p0`.
    pub fn pi() -> Expr {
        Expr::prod([Expr::close(0), Expr::open(0)])
    }

    pub fn word(tokens: &[Token]) -> Expr {
        Expr::prod(tokens.iter().map(|&t| Expr::sym(t)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::One)
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut out: Vec<Expr> = Vec::new();
        let push = |e: Expr, out: &mut Vec<Expr>| {
            if e.is_zero() {
                return;
            }
            if out.iter().any(|o| o.same_shallow(&e)) {
                return;
            }
            out.push(e);
        };
        for e in items {
            match e.node() {
                Node::Sum(xs) => {
                    for x in xs {
                        push(x.clone(), &mut out);
                    }
                }
                _ => push(e, &mut out),
            }
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr(Arc::new(Node::Sum(out))),
        }
    }

    pub fn prod<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut out: Vec<Expr> = Vec::new();
        for e in items {
            match e.node() {
                Node::Zero => return Expr::zero(),
                Node::One => {}
                Node::Prod(xs) => out.extend(xs.iter().cloned()),
                _ => out.push(e),
            }
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr(Arc::new(Node::Prod(out))),
        }
    }

    pub fn star_of(e: &Expr) -> Expr {
        match e.node() {
            Node::Zero | Node::One => Expr::one(),
            Node::Star(_) => e.clone(),
            _ => Expr(Arc::new(Node::Star(e.clone()))),
        }
    }

    pub fn plus_of(e: &Expr) -> Expr {
        Expr::prod([e.clone(), Expr::star_of(e)])
    }

    /// Pointer equality, or equality of leaves.
    fn same_shallow(&self, other: &Expr) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::Zero, Node::Zero) | (Node::One, Node::One) => true,
            (Node::Sym { tok: a, aux: x }, Node::Sym { tok: b, aux: y }) => a == b && x == y,
            _ => false,
        }
    }

    /// Number of symbol occurrences after unfolding all sharing (saturating).
    pub fn expanded_size(&self) -> u64 {
        fn go(e: &Expr, memo: &mut HashMap<usize, u64>) -> u64 {
            if let Some(&v) = memo.get(&e.key()) {
                return v;
            }
            let v = match e.node() {
                Node::Zero | Node::One => 0,
                Node::Sym { .. } => 1,
                Node::Sum(xs) | Node::Prod(xs) => {
                    xs.iter().fold(0u64, |acc, x| acc.saturating_add(go(x, memo)))
                }
                Node::Star(x) => go(x, memo),
            };
            memo.insert(e.key(), v);
            v
        }
        go(self, &mut HashMap::new())
    }

    /// Number of distinct shared nodes.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match e.node() {
                Node::Sum(xs) | Node::Prod(xs) => stack.extend(xs.iter().cloned()),
                Node::Star(x) => stack.push(x.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    /// All symbols occurring in the expression.
    pub fn symbols(&self) -> BTreeSet<Token> {
        let mut out = BTreeSet::new();
        self.visit_syms(&mut |t, _| {
            out.insert(t);
        });
        out
    }

    pub fn is_bracket_free(&self) -> bool {
        self.symbols().iter().all(|t| !t.is_bracket())
    }

    fn visit_syms(&self, f: &mut impl FnMut(Token, bool)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match e.node() {
                Node::Sym { tok, aux } => f(*tok, *aux),
                Node::Sum(xs) | Node::Prod(xs) => stack.extend(xs.iter().cloned()),
                Node::Star(x) => stack.push(x.clone()),
                _ => {}
            }
        }
    }

    /// Replace every symbol by an expression, sharing-aware.
    pub fn map_syms(&self, f: &mut impl FnMut(Token, bool) -> Expr) -> Expr {
        fn go(e: &Expr, f: &mut impl FnMut(Token, bool) -> Expr, memo: &mut HashMap<usize, Expr>) -> Expr {
            if let Some(v) = memo.get(&e.key()) {
                return v.clone();
            }
            let v = match e.node() {
                Node::Zero | Node::One => e.clone(),
                Node::Sym { tok, aux } => f(*tok, *aux),
                Node::Sum(xs) => Expr::sum(xs.iter().map(|x| go(x, f, memo)).collect::<Vec<_>>()),
                Node::Prod(xs) => Expr::prod(xs.iter().map(|x| go(x, f, memo)).collect::<Vec<_>>()),
                Node::Star(x) => Expr::star_of(&go(x, f, memo)),
            };
            memo.insert(e.key(), v.clone());
            v
        }
        go(self, f, &mut HashMap::new())
    }

    /// Substitute `value` for every occurrence of the letter `slot`.
    pub fn substitute(&self, slot: char, value: &Expr) -> Expr {
        self.map_syms(&mut |t, aux| {
            if t == Token::Letter(slot) {
                value.clone()
            } else if aux {
                Expr::aux(t)
            } else {
                Expr::sym(t)
            }
        })
    }

    /// Copy with every symbol marked auxiliary.
    pub fn as_aux(&self) -> Expr {
        self.map_syms(&mut |t, _| Expr::aux(t))
    }

    /// Structural equality, following sharing.
    pub fn structurally_eq(&self, other: &Expr) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.node(), other.node()) {
            (Node::Zero, Node::Zero) | (Node::One, Node::One) => true,
            (Node::Sym { tok: a, .. }, Node::Sym { tok: b, .. }) => a == b,
            (Node::Sum(xs), Node::Sum(ys)) | (Node::Prod(xs), Node::Prod(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.structurally_eq(y))
            }
            (Node::Star(x), Node::Star(y)) => x.structurally_eq(y),
            _ => false,
        }
    }
}

impl Kleene for Expr {
    fn zero_like(&self) -> Self {
        Expr::zero()
    }
    fn one_like(&self) -> Self {
        Expr::one()
    }
    fn add(&self, other: &Self) -> Self {
        Expr::sum([self.clone(), other.clone()])
    }
    fn mul(&self, other: &Self) -> Self {
        Expr::prod([self.clone(), other.clone()])
    }
    fn star(&self) -> Self {
        Expr::star_of(self)
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, out: &mut String) {
            match e.node() {
                Node::Zero => out.push('0'),
                Node::One => out.push('1'),
                Node::Sym { tok, .. } => out.push_str(&tok.to_string()),
                Node::Sum(xs) => {
                    for (k, x) in xs.iter().enumerate() {
                        if k > 0 {
                            out.push_str(" + ");
                        }
                        go(x, out);
                    }
                }
                Node::Prod(xs) => {
                    for (k, x) in xs.iter().enumerate() {
                        if k > 0 {
                            out.push(' ');
                        }
                        let wrap = matches!(x.node(), Node::Sum(_));
                        if wrap {
                            out.push('(');
                        }
                        go(x, out);
                        if wrap {
                            out.push(')');
                        }
                    }
                }
                Node::Star(x) => {
                    let wrap = matches!(x.node(), Node::Sum(_) | Node::Prod(_));
                    if wrap {
                        out.push('(');
                    }
                    go(x, out);
                    if wrap {
                        out.push(')');
                    }
                    out.push('*');
                }
            }
        }
        let mut s = String::new();
        go(self, &mut s);
        f.write_str(&s)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    syn: Syntax,
    _src: &'a str,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut items = vec![self.prod()?];
        while self.peek() == Some('+') {
            self.pos += 1;
            items.push(self.prod()?);
        }
        Ok(Expr::sum(items))
    }

    fn starts_atom(c: char) -> bool {
        c == '(' || c == '0' || c == '1' || c.is_ascii_lowercase()
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut items = vec![self.star()?];
        loop {
            match self.peek() {
                Some('.') => {
                    self.pos += 1;
                    items.push(self.star()?);
                }
                Some(c) if Self::starts_atom(c) => items.push(self.star()?),
                _ => break,
            }
        }
        Ok(Expr::prod(items))
    }

    fn star(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            e = Expr::star_of(&e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Expr::zero())
            }
            Some('1') => {
                self.pos += 1;
                Ok(Expr::one())
            }
            Some(c) if c.is_ascii_lowercase() => {
                let t = lex_symbol(&self.chars, &mut self.pos, self.syn)?;
                Ok(Expr::sym(t))
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
        }
    }
}

pub fn parse_expr(text: &str, syn: Syntax) -> Result<Expr> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, syn, _src: text };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}
