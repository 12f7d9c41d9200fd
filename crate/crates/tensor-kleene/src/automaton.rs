//! Automata whose transition matrix splits as `U + X + V + W·π`: opening
//! brackets, bracket-free expressions, closing brackets, and `π = q0 p0` edges.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::{Expr, Node};
use crate::kleene::{matrix_star, sandwich, Matrix};
use crate::tensor::{Evaluator, ImageOptions, NfImage};
use crate::word::Token;

#[derive(Clone, Debug)]
pub struct SplitAutomaton {
    pub s: Vec<bool>,
    pub f: Vec<bool>,
    /// Opening bracket index on each edge, if any.
    pub u: Matrix<Option<u8>>,
    pub x: Matrix<Expr>,
    /// Closing bracket index on each edge, if any.
    pub v: Matrix<Option<u8>>,
    pub w: Matrix<bool>,
}

pub(crate) fn bracket_matrix(m: &Matrix<Option<u8>>, open: bool) -> Matrix<Expr> {
    m.map(|e| match e {
        Some(i) if open => Expr::open(*i),
        Some(i) => Expr::close(*i),
        None => Expr::zero(),
    })
}

pub(crate) fn bool_matrix(m: &Matrix<bool>) -> Matrix<Expr> {
    m.map(|&b| if b { Expr::one() } else { Expr::zero() })
}

pub(crate) fn bits(v: &[bool]) -> Value {
    json!(v.iter().map(|&b| b as u8).collect::<Vec<_>>())
}

pub(crate) fn expr_rows(m: &Matrix<Expr>) -> Value {
    json!(m.row_vecs().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub(crate) fn bool_rows(m: &Matrix<bool>) -> Value {
    json!(m.row_vecs().iter().map(|r| r.iter().map(|&b| b as u8).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub(crate) fn block_diag<T: Clone>(a: &Matrix<T>, b: &Matrix<T>, zero: T) -> Matrix<T> {
    let (n1, n2) = (a.rows(), b.rows());
    Matrix::from_blocks(a, &Matrix::filled(n1, n2, zero.clone()), &Matrix::filled(n2, n1, zero), b)
}

impl SplitAutomaton {
    pub fn new(
        s: Vec<bool>,
        f: Vec<bool>,
        u: Matrix<Option<u8>>,
        x: Matrix<Expr>,
        v: Matrix<Option<u8>>,
        w: Matrix<bool>,
    ) -> Result<Self> {
        let n = s.len();
        let square = |r: usize, c: usize| r == n && c == n;
        if n == 0
            || f.len() != n
            || !square(u.rows(), u.cols())
            || !square(x.rows(), x.cols())
            || !square(v.rows(), v.cols())
            || !square(w.rows(), w.cols())
        {
            return Err(Error::Shape(format!("split automaton parts disagree on n = {n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if !x.get(i, j).is_bracket_free() {
                    return Err(Error::Shape(format!("X[{i}][{j}] contains a bracket")));
                }
            }
        }
        Ok(SplitAutomaton { s, f, u, x, v, w })
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    fn empty(n: usize) -> SplitAutomaton {
        SplitAutomaton {
            s: vec![false; n],
            f: vec![false; n],
            u: Matrix::filled(n, n, None),
            x: Matrix::filled(n, n, Expr::zero()),
            v: Matrix::filled(n, n, None),
            w: Matrix::filled(n, n, false),
        }
    }

    fn two_state() -> SplitAutomaton {
        let mut a = SplitAutomaton::empty(2);
        a.s[0] = true;
        a.f[1] = true;
        a.x.set(0, 0, Expr::one());
        a.x.set(1, 1, Expr::one());
        a
    }

    /// One state, nothing accepted.
    pub fn zero() -> SplitAutomaton {
        SplitAutomaton::empty(1)
    }

    /// `S = (1,0)`, `X = [[1,k],[0,1]]`, `F = (0,1)ᵀ` for a bracket-free `k`.
    pub fn atom(k: Expr) -> SplitAutomaton {
        let mut a = SplitAutomaton::two_state();
        a.x.set(0, 1, k);
        a
    }

    pub fn open(i: u8) -> SplitAutomaton {
        let mut a = SplitAutomaton::two_state();
        a.u.set(0, 1, Some(i));
        a
    }

    pub fn close(i: u8) -> SplitAutomaton {
        let mut a = SplitAutomaton::two_state();
        a.v.set(0, 1, Some(i));
        a
    }

    /// A single `π` edge.
    pub fn pi() -> SplitAutomaton {
        let mut a = SplitAutomaton::two_state();
        a.w.set(0, 1, true);
        a
    }

    pub fn union(&self, other: &SplitAutomaton) -> SplitAutomaton {
        SplitAutomaton {
            s: [self.s.clone(), other.s.clone()].concat(),
            f: [self.f.clone(), other.f.clone()].concat(),
            u: block_diag(&self.u, &other.u, None),
            x: block_diag(&self.x, &other.x, Expr::zero()),
            v: block_diag(&self.v, &other.v, None),
            w: block_diag(&self.w, &other.w, false),
        }
    }

    /// Product, bridging final states of `self` to initial states of `other` in `X`.
    pub fn product(&self, other: &SplitAutomaton) -> SplitAutomaton {
        let (n1, n2) = (self.n(), other.n());
        let bridge = Matrix::from_fn(n1, n2, |i, j| if self.f[i] && other.s[j] { Expr::one() } else { Expr::zero() });
        SplitAutomaton {
            s: [self.s.clone(), vec![false; n2]].concat(),
            f: [vec![false; n1], other.f.clone()].concat(),
            u: block_diag(&self.u, &other.u, None),
            x: Matrix::from_blocks(&self.x, &bridge, &Matrix::filled(n2, n1, Expr::zero()), &other.x),
            v: block_diag(&self.v, &other.v, None),
            w: block_diag(&self.w, &other.w, false),
        }
    }

    /// `A + F·S`: loop back from final to initial states.
    pub fn plus(&self) -> SplitAutomaton {
        let mut a = self.clone();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.f[i] && self.s[j] {
                    let e = Expr::sum([a.x.get(i, j).clone(), Expr::one()]);
                    a.x.set(i, j, e);
                }
            }
        }
        a
    }

    pub fn star(&self) -> SplitAutomaton {
        SplitAutomaton::atom(Expr::one()).union(&self.plus())
    }

    /// Transition matrix `U + X + V + W·π`.
    pub fn transition(&self) -> Matrix<Expr> {
        let n = self.n();
        Matrix::from_fn(n, n, |i, j| {
            let mut parts = vec![self.x.get(i, j).clone()];
            if let Some(k) = self.u.get(i, j) {
                parts.push(Expr::open(*k));
            }
            if let Some(k) = self.v.get(i, j) {
                parts.push(Expr::close(*k));
            }
            if *self.w.get(i, j) {
                parts.push(Expr::pi());
            }
            Expr::sum(parts)
        })
    }

    /// `S·A*·F` as an expression.
    pub fn language(&self) -> Expr {
        let star = matrix_star(&self.transition()).expect("square transition matrix");
        sandwich(&self.s, &star, &self.f)
    }

    /// Bounded image of `S·A*·F`, computed in the semiring of bounded images.
    pub fn image(&self, opts: &ImageOptions) -> Result<NfImage> {
        let mut ev = Evaluator::new(*opts);
        let a = self.transition().map(|e| ev.eval(e));
        let star = matrix_star(&a)?;
        sandwich(&self.s, &star, &self.f).to_nf_image()
    }

    pub fn has_pi(&self) -> bool {
        self.w.row_vecs().iter().flatten().any(|&b| b)
    }

    /// True if `U` or `V` uses the outer pair `p0`/`q0`.
    pub fn uses_outer_pair(&self) -> bool {
        self.u.row_vecs().iter().flatten().any(|e| *e == Some(0))
            || self.v.row_vecs().iter().flatten().any(|e| *e == Some(0))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "S": bits(&self.s),
            "F": bits(&self.f),
            "U": expr_rows(&bracket_matrix(&self.u, true)),
            "X": expr_rows(&self.x),
            "V": expr_rows(&bracket_matrix(&self.v, false)),
            "W": bool_rows(&self.w),
        })
    }
}

/// Compile an expression by induction on its structure: singletons are two-state
/// automata, sums are disjoint unions, products bridge final to initial states,
/// and stars loop back.
pub fn compile(e: &Expr) -> SplitAutomaton {
    compile_rec(e, false)
}

/// As [`compile`], but an adjacent `q0 p0` inside a product becomes a `π` edge in `W`.
pub fn compile_with_pi(e: &Expr) -> SplitAutomaton {
    compile_rec(e, true)
}

fn compile_rec(e: &Expr, pi: bool) -> SplitAutomaton {
    match e.node() {
        Node::Zero => SplitAutomaton::zero(),
        Node::One => SplitAutomaton::atom(Expr::one()),
        Node::Sym { tok, .. } => match tok {
            Token::Letter(_) => SplitAutomaton::atom(e.clone()),
            Token::Open(i) => SplitAutomaton::open(*i),
            Token::Close(i) => SplitAutomaton::close(*i),
            Token::Zero => SplitAutomaton::zero(),
        },
        Node::Sum(xs) => {
            let mut it = xs.iter().map(|x| compile_rec(x, pi));
            let first = it.next().unwrap_or_else(SplitAutomaton::zero);
            it.fold(first, |acc, a| acc.union(&a))
        }
        Node::Prod(xs) => {
            let mut parts = Vec::new();
            let mut k = 0;
            while k < xs.len() {
                let is = |x: &Expr, t: Token| matches!(x.node(), Node::Sym { tok, .. } if *tok == t);
                if pi && k + 1 < xs.len() && is(&xs[k], Token::Close(0)) && is(&xs[k + 1], Token::Open(0)) {
                    parts.push(SplitAutomaton::pi());
                    k += 2;
                } else {
                    parts.push(compile_rec(&xs[k], pi));
                    k += 1;
                }
            }
            let mut it = parts.into_iter();
            let first = it.next().unwrap_or_else(|| SplitAutomaton::atom(Expr::one()));
            it.fold(first, |acc, a| acc.product(&a))
        }
        Node::Star(x) => compile_rec(x, pi).star(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::tensor::equal_bounded;
    use crate::word::Syntax;

    fn parse(s: &str) -> Expr {
        parse_expr(s, Syntax::default()).unwrap()
    }

    #[test]
    fn letter_atom_shape() {
        let a = compile(&parse("k"));
        assert_eq!(a.n(), 2);
        assert_eq!(a.s, [true, false]);
        assert_eq!(a.f, [false, true]);
        assert_eq!(a.x.to_string(), r#"[["1", "k"], ["0", "1"]]"#);
        assert!(equal_bounded(&a.language(), &parse("k"), 6).unwrap().is_equal());
    }

    #[test]
    fn zero_is_one_empty_state() {
        let a = compile(&parse("0"));
        assert_eq!(a.n(), 1);
        assert!(a.language().is_zero());
    }

    #[test]
    fn compiled_language_matches() {
        for src in ["(a p1)*(q1 b)*", "p0 (a + p1 b q1)* q0", "(p1 + q1 a)* + b", "1", "a 0"] {
            let e = parse(src);
            let a = compile(&e);
            assert!(equal_bounded(&a.language(), &e, 8).unwrap().is_equal(), "{src}");
            let o = ImageOptions::new(7);
            assert_eq!(a.image(&o).unwrap(), crate::tensor::enumerate_nf_image_with(&e, &o).unwrap(), "{src}");
        }
    }

    #[test]
    fn pi_edges_go_to_w() {
        let e = parse("p1 a q1 q0 p0 b");
        let a = compile_with_pi(&e);
        assert!(a.has_pi());
        assert!(!a.uses_outer_pair());
        assert!(equal_bounded(&a.language(), &e, 8).unwrap().is_equal());
        assert!(compile(&e).uses_outer_pair());
    }

    #[test]
    fn shape_errors() {
        let m = Matrix::filled(2, 2, None);
        let x = Matrix::filled(2, 2, Expr::open(1));
        let w = Matrix::filled(2, 2, false);
        assert!(SplitAutomaton::new(vec![true, false], vec![false, true], m.clone(), x, m.clone(), w.clone()).is_err());
        let x = Matrix::filled(1, 1, Expr::zero());
        assert!(SplitAutomaton::new(vec![true, false], vec![false, true], m.clone(), x, m, w).is_err());
    }
}
