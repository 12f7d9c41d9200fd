//! Context-free grammars over single-letter terminals.
//!
//! Text format, one or more productions per line:
//!
//! ```text
//! S -> a S b | ;
//! ```
//!
//! A token made of lowercase letters is a sequence of terminals, `;` (or an
//! empty alternative) is the empty word, anything else is a nonterminal name.
//! The head of the first line is the start symbol.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::word::Token;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    T(char),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: usize,
    pub body: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub names: Vec<String>,
    pub start: usize,
    pub rules: Vec<Rule>,
}

impl Grammar {
    /// A grammar with a single nonterminal and no productions (empty language).
    pub fn new(start: &str) -> Grammar {
        Grammar { names: vec![start.to_string()], start: 0, rules: Vec::new() }
    }

    pub fn id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Get or create a nonterminal.
    pub fn nonterminal(&mut self, name: &str) -> usize {
        match self.id(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    /// Create a nonterminal with a name not used yet, derived from `base`.
    pub fn fresh(&mut self, base: &str) -> usize {
        if self.id(base).is_none() {
            return self.nonterminal(base);
        }
        let mut k = self.names.len();
        loop {
            let name = format!("{base}{k}");
            if self.id(&name).is_none() {
                return self.nonterminal(&name);
            }
            k += 1;
        }
    }

    /// Append a production. Duplicates are removed by [`Grammar::pruned`].
    pub fn add_rule(&mut self, head: usize, body: Vec<Sym>) {
        self.rules.push(Rule { head, body });
    }

    fn dedup_rules(&mut self) {
        let mut seen = HashSet::new();
        self.rules.retain(|r| seen.insert(r.clone()));
    }

    pub fn terminals(&self) -> BTreeSet<char> {
        self.rules
            .iter()
            .flat_map(|r| r.body.iter())
            .filter_map(|s| match s {
                Sym::T(c) => Some(*c),
                Sym::N(_) => None,
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Grammar> {
        let mut g: Option<Grammar> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Grammar(format!("line {}: missing '->'", lineno + 1)))?;
            let lhs = lhs.trim();
            if !is_nonterminal_name(lhs) {
                return Err(Error::Grammar(format!("line {}: bad nonterminal '{lhs}'", lineno + 1)));
            }
            let g = g.get_or_insert_with(|| Grammar::new(lhs));
            let head = g.nonterminal(lhs);
            for alt in rhs.split('|') {
                let mut body = Vec::new();
                for tok in alt.split_whitespace() {
                    if tok == ";" {
                        continue;
                    }
                    if tok.chars().all(|c| c.is_ascii_lowercase()) {
                        body.extend(tok.chars().map(Sym::T));
                    } else if is_nonterminal_name(tok) {
                        body.push(Sym::N(g.nonterminal(tok)));
                    } else {
                        return Err(Error::Grammar(format!("line {}: bad symbol '{tok}'", lineno + 1)));
                    }
                }
                g.add_rule(head, body);
            }
        }
        g.ok_or_else(|| Error::Grammar("no productions".into()))
    }

    fn productive(&self) -> Vec<bool> {
        let mut prod = vec![false; self.names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for r in &self.rules {
                if !prod[r.head]
                    && r.body.iter().all(|s| match s {
                        Sym::T(_) => true,
                        Sym::N(n) => prod[*n],
                    })
                {
                    prod[r.head] = true;
                    changed = true;
                }
            }
        }
        prod
    }

    pub fn nullable(&self) -> Vec<bool> {
        let mut null = vec![false; self.names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for r in &self.rules {
                if !null[r.head] && r.body.iter().all(|s| matches!(s, Sym::N(n) if null[*n])) {
                    null[r.head] = true;
                    changed = true;
                }
            }
        }
        null
    }

    /// Drop unproductive and unreachable nonterminals, renumbering the rest.
    /// The start symbol is always kept.
    pub fn pruned(&self) -> Grammar {
        let prod = self.productive();
        let rules: Vec<&Rule> = self
            .rules
            .iter()
            .filter(|r| prod[r.head] && r.body.iter().all(|s| !matches!(s, Sym::N(n) if !prod[*n])))
            .collect();
        let mut by_head: Vec<Vec<&Rule>> = vec![Vec::new(); self.names.len()];
        for r in &rules {
            by_head[r.head].push(r);
        }
        let mut reach = vec![false; self.names.len()];
        reach[self.start] = true;
        let mut stack = vec![self.start];
        while let Some(a) = stack.pop() {
            for r in &by_head[a] {
                for s in &r.body {
                    if let Sym::N(n) = s {
                        if !reach[*n] {
                            reach[*n] = true;
                            stack.push(*n);
                        }
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; self.names.len()];
        let mut names = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            if reach[i] {
                map[i] = names.len();
                names.push(name.clone());
            }
        }
        let rules = rules
            .into_iter()
            .filter(|r| reach[r.head])
            .map(|r| Rule {
                head: map[r.head],
                body: r
                    .body
                    .iter()
                    .map(|s| match s {
                        Sym::T(c) => Sym::T(*c),
                        Sym::N(n) => Sym::N(map[*n]),
                    })
                    .collect(),
            })
            .collect();
        let mut g = Grammar { names, start: map[self.start], rules };
        g.dedup_rules();
        g
    }

    /// Copy every nonterminal and rule of `other` into `self` with names
    /// prefixed by `prefix`. Returns the id map.
    pub fn import(&mut self, other: &Grammar, prefix: &str) -> Vec<usize> {
        let map: Vec<usize> = other.names.iter().map(|n| self.fresh(&format!("{prefix}{n}"))).collect();
        for r in &other.rules {
            let body = r
                .body
                .iter()
                .map(|s| match s {
                    Sym::T(c) => Sym::T(*c),
                    Sym::N(n) => Sym::N(map[*n]),
                })
                .collect();
            self.add_rule(map[r.head], body);
        }
        map
    }

    /// Add nonterminals deriving the language of a bracket-free expression and
    /// return the one for the whole expression.
    pub fn add_regex(&mut self, e: &Expr) -> Result<usize> {
        let mut memo = HashMap::new();
        self.regex_rec(e, &mut memo)
    }

    /// Rule body deriving the language of a letter-only `e`, with letters and
    /// products of letters written inline; `None` for the empty language.
    pub fn regex_body(&mut self, e: &Expr) -> Result<Option<Vec<Sym>>> {
        let mut memo = HashMap::new();
        self.inline(e, &mut memo)
    }

    fn inline(&mut self, e: &Expr, memo: &mut HashMap<usize, usize>) -> Result<Option<Vec<Sym>>> {
        Ok(match e.node() {
            Node::Zero => None,
            Node::One => Some(vec![]),
            Node::Sym { tok: Token::Letter(c), .. } => Some(vec![Sym::T(*c)]),
            Node::Prod(xs) => {
                let mut body = Vec::new();
                for x in xs {
                    match self.inline(x, memo)? {
                        Some(b) => body.extend(b),
                        None => return Ok(None),
                    }
                }
                Some(body)
            }
            _ => Some(vec![Sym::N(self.regex_rec(e, memo)?)]),
        })
    }

    fn regex_rec(&mut self, e: &Expr, memo: &mut HashMap<usize, usize>) -> Result<usize> {
        if let Some(id) = memo.get(&e.key()) {
            return Ok(*id);
        }
        if let Node::Sym { tok, .. } = e.node() {
            if !matches!(tok, Token::Letter(_)) {
                return Err(Error::Precondition(format!("bracket {tok} in a letter-only expression")));
            }
        }
        let id = self.fresh("R");
        memo.insert(e.key(), id);
        match e.node() {
            Node::Sum(xs) => {
                for x in xs {
                    if let Some(b) = self.inline(x, memo)? {
                        self.add_rule(id, b);
                    }
                }
            }
            Node::Star(x) => {
                self.add_rule(id, vec![]);
                if let Some(mut b) = self.inline(x, memo)? {
                    b.push(Sym::N(id));
                    self.add_rule(id, b);
                }
            }
            _ => {
                if let Some(b) = self.inline(e, memo)? {
                    self.add_rule(id, b);
                }
            }
        }
        Ok(id)
    }

    /// All words of length at most `maxlen` derivable from each nonterminal.
    fn yields(&self, maxlen: usize, cap: usize) -> Result<Vec<BTreeSet<String>>> {
        let mut y: Vec<BTreeSet<String>> = vec![BTreeSet::new(); self.names.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for r in &self.rules {
                let mut acc: BTreeSet<String> = BTreeSet::from([String::new()]);
                for s in &r.body {
                    let mut next = BTreeSet::new();
                    match s {
                        Sym::T(c) => {
                            for u in &acc {
                                if u.len() < maxlen {
                                    next.insert(format!("{u}{c}"));
                                }
                            }
                        }
                        Sym::N(n) => {
                            for u in &acc {
                                for v in &y[*n] {
                                    if u.len() + v.len() <= maxlen {
                                        next.insert(format!("{u}{v}"));
                                    }
                                }
                            }
                        }
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                for w in acc {
                    if y[r.head].insert(w) {
                        changed = true;
                    }
                }
                if y[r.head].len() > cap {
                    return Err(Error::Overflow(cap));
                }
            }
        }
        Ok(y)
    }

    /// Words of the language with at most `maxlen` letters.
    pub fn enumerate(&self, maxlen: usize) -> Result<BTreeSet<String>> {
        self.enumerate_capped(maxlen, 1_000_000)
    }

    pub fn enumerate_capped(&self, maxlen: usize, cap: usize) -> Result<BTreeSet<String>> {
        Ok(self.yields(maxlen, cap)?.swap_remove(self.start))
    }

    /// Chomsky normal form: rules `A -> B C` and `A -> a`, plus `S -> ε` when the
    /// language contains the empty word, with a start symbol never on a right side.
    pub fn to_cnf(&self) -> Grammar {
        let mut g = self.pruned();
        // START
        let s0 = g.fresh("S0");
        let old = g.start;
        g.start = s0;
        g.add_rule(s0, vec![Sym::N(old)]);
        // TERM
        let mut letters: BTreeSet<char> = BTreeSet::new();
        for r in g.rules.iter().filter(|r| r.body.len() >= 2) {
            for s in &r.body {
                if let Sym::T(c) = s {
                    letters.insert(*c);
                }
            }
        }
        let mut term: HashMap<char, usize> = HashMap::new();
        for c in letters {
            let t = g.fresh(&format!("T{}", c.to_ascii_uppercase()));
            term.insert(c, t);
        }
        let rules = std::mem::take(&mut g.rules);
        for r in rules {
            let body = if r.body.len() >= 2 {
                r.body
                    .iter()
                    .map(|s| match s {
                        Sym::T(c) => Sym::N(term[c]),
                        n => *n,
                    })
                    .collect()
            } else {
                r.body
            };
            g.add_rule(r.head, body);
        }
        for (&c, &t) in &term {
            g.add_rule(t, vec![Sym::T(c)]);
        }
        // BIN
        let rules = std::mem::take(&mut g.rules);
        for r in rules {
            if r.body.len() <= 2 {
                g.add_rule(r.head, r.body);
                continue;
            }
            let mut head = r.head;
            let n = r.body.len();
            for k in 0..n - 2 {
                let next = g.fresh(&format!("{}_", g.names[r.head]));
                g.add_rule(head, vec![r.body[k], Sym::N(next)]);
                head = next;
            }
            g.add_rule(head, vec![r.body[n - 2], r.body[n - 1]]);
        }
        // DEL
        let null = g.nullable();
        let rules = std::mem::take(&mut g.rules);
        for r in rules {
            match r.body.as_slice() {
                [] => {}
                [a, b] => {
                    g.add_rule(r.head, vec![*a, *b]);
                    if matches!(b, Sym::N(n) if null[*n]) {
                        g.add_rule(r.head, vec![*a]);
                    }
                    if matches!(a, Sym::N(n) if null[*n]) {
                        g.add_rule(r.head, vec![*b]);
                    }
                }
                _ => g.add_rule(r.head, r.body.clone()),
            }
        }
        // UNIT
        let n = g.names.len();
        let mut unit = vec![vec![false; n]; n];
        for (a, row) in unit.iter_mut().enumerate() {
            row[a] = true;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for r in &g.rules {
                if let [Sym::N(b)] = r.body.as_slice() {
                    for row in unit.iter_mut() {
                        if row[r.head] && !row[*b] {
                            row[*b] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        let rules = std::mem::take(&mut g.rules);
        let proper: Vec<&Rule> = rules.iter().filter(|r| !matches!(r.body.as_slice(), [Sym::N(_)])).collect();
        for (a, row) in unit.iter().enumerate() {
            for r in &proper {
                if row[r.head] {
                    g.add_rule(a, r.body.clone());
                }
            }
        }
        if null[old] {
            g.add_rule(s0, vec![]);
        }
        g.pruned()
    }

    /// Exact membership by the CYK algorithm on the Chomsky normal form.
    pub fn cyk(&self, w: &str) -> bool {
        cyk_cnf(&self.to_cnf(), w)
    }
}

/// CYK on a grammar already in Chomsky normal form.
pub fn cyk_cnf(g: &Grammar, w: &str) -> bool {
    let w: Vec<char> = w.chars().collect();
    let n = w.len();
    if n == 0 {
        return g.rules.iter().any(|r| r.head == g.start && r.body.is_empty());
    }
    let k = g.names.len();
    // table[i][l] = set of nonterminals deriving w[i..i+l+1]
    let mut table = vec![vec![vec![false; k]; n]; n];
    for (i, c) in w.iter().enumerate() {
        for r in &g.rules {
            if r.body.as_slice() == [Sym::T(*c)] {
                table[i][0][r.head] = true;
            }
        }
    }
    let bins: Vec<(usize, usize, usize)> = g
        .rules
        .iter()
        .filter_map(|r| match r.body.as_slice() {
            [Sym::N(b), Sym::N(c)] => Some((r.head, *b, *c)),
            _ => None,
        })
        .collect();
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for &(a, b, c) in &bins {
                    if table[i][split - 1][b] && table[i + split][len - split - 1][c] {
                        table[i][len - 1][a] = true;
                    }
                }
            }
        }
    }
    table[0][n - 1][g.start]
}

fn is_nonterminal_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = vec![self.start];
        let mut seen: HashSet<usize> = HashSet::from([self.start]);
        for r in &self.rules {
            if seen.insert(r.head) {
                order.push(r.head);
            }
        }
        for head in order {
            let alts: Vec<String> = self
                .rules
                .iter()
                .filter(|r| r.head == head)
                .map(|r| {
                    if r.body.is_empty() {
                        ";".to_string()
                    } else {
                        r.body
                            .iter()
                            .map(|s| match s {
                                Sym::T(c) => c.to_string(),
                                Sym::N(n) => self.names[*n].clone(),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            if alts.is_empty() {
                continue;
            }
            writeln!(f, "{} -> {}", self.names[head], alts.join(" | "))?;
        }
        Ok(())
    }
}
