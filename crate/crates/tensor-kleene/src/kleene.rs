//! Kleene algebras, square matrices over them, and automata `S·A*·F`.

use std::fmt;

use crate::error::{Error, Result};

/// An idempotent semiring with star.
///
/// Zero and one are produced from an existing value so that instances carrying
/// a parameter (a length bound, a truncation) can hand it on.
pub trait Kleene: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn star(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// The two-element Kleene algebra.
impl Kleene for bool {
    fn zero_like(&self) -> Self {
        false
    }
    fn one_like(&self) -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn star(&self) -> Self {
        true
    }
    fn is_zero(&self) -> bool {
        !*self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).take(self.rows).collect()
    }

    /// Sub-block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix<T> {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assemble `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, d: &Matrix<T>) -> Matrix<T> {
        let (n1, n2) = (a.rows, d.rows);
        let (m1, m2) = (a.cols, d.cols);
        Matrix::from_fn(n1 + n2, m1 + m2, |i, j| match (i < n1, j < m1) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - m1).clone(),
            (false, true) => c.get(i - n1, j).clone(),
            (false, false) => d.get(i - n1, j - m1).clone(),
        })
    }
}

impl<T: Kleene> Matrix<T> {
    pub fn zeros_like(proto: &T, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, proto.zero_like())
    }

    pub fn identity_like(proto: &T, n: usize) -> Self {
        let (z, o) = (proto.zero_like(), proto.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j))))
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let proto = self.data.first().or(other.data.first());
        let Some(proto) = proto else {
            return Err(Error::Shape("empty matrix product".into()));
        };
        let zero = proto.zero_like();
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        }))
    }

    /// Multiply every entry on the left and right by scalars.
    pub fn scale(&self, left: &T, right: &T) -> Matrix<T> {
        self.map(|x| if x.is_zero() { x.clone() } else { left.mul(x).mul(right) })
    }
}

/// Matrix star by the block recursion
///
/// ```text
/// [A B]*   [F*        F* B D*          ]
/// [C D]  = [D* C F*   D* C F* B D* + D*]     with F = A + B D* C
/// ```
///
/// splitting off the first row and column at every level.
pub fn matrix_star<T: Kleene>(m: &Matrix<T>) -> Result<Matrix<T>> {
    matrix_star_split(m, 1)
}

/// As [`matrix_star`], but the top-level block split puts the first `k` rows
/// in the upper block. Inner levels split at 1.
pub fn matrix_star_split<T: Kleene>(m: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    let n = m.rows();
    if n == 0 {
        return Err(Error::Shape("star of a 0x0 matrix".into()));
    }
    if m.cols() != n {
        return Err(Error::Shape(format!("star of a non-square {}x{} matrix", n, m.cols())));
    }
    if k == 0 || k > n {
        return Err(Error::Shape(format!("split {k} outside 1..={n}")));
    }
    if n == 1 {
        return Ok(Matrix::from_fn(1, 1, |_, _| m.get(0, 0).star()));
    }
    if k == n {
        return matrix_star_split(m, 1);
    }
    let a = m.block(0, k, 0, k);
    let b = m.block(0, k, k, n);
    let c = m.block(k, n, 0, k);
    let d = m.block(k, n, k, n);
    let ds = matrix_star_split(&d, 1)?;
    let b_ds = b.mul(&ds)?;
    let ds_c = ds.mul(&c)?;
    let f = a.add(&b_ds.mul(&c)?)?;
    let fs = matrix_star_split(&f, 1)?;
    let top_right = fs.mul(&b_ds)?;
    let bottom_left = ds_c.mul(&fs)?;
    let bottom_right = bottom_left.mul(&b_ds)?.add(&ds)?;
    Ok(Matrix::from_blocks(&fs, &top_right, &bottom_left, &bottom_right))
}

/// A finite automaton `<S, A, F>` with Boolean start and final vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Automaton<T> {
    pub s: Vec<bool>,
    pub a: Matrix<T>,
    pub f: Vec<bool>,
}

impl<T: Kleene> Automaton<T> {
    pub fn new(s: Vec<bool>, a: Matrix<T>, f: Vec<bool>) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n || s.len() != n || f.len() != n || n == 0 {
            return Err(Error::Shape(format!(
                "automaton with |S|={}, A {}x{}, |F|={}",
                s.len(),
                a.rows(),
                a.cols(),
                f.len()
            )));
        }
        Ok(Automaton { s, a, f })
    }

    /// `S·A*·F`.
    pub fn language(&self) -> Result<T> {
        let star = matrix_star(&self.a)?;
        Ok(sandwich(&self.s, &star, &self.f))
    }
}

/// `S·M·F` for Boolean vectors `S`, `F`.
pub fn sandwich<T: Kleene>(s: &[bool], m: &Matrix<T>, f: &[bool]) -> T {
    let mut acc = m.get(0, 0).zero_like();
    for (i, &si) in s.iter().enumerate() {
        if !si {
            continue;
        }
        for (j, &fj) in f.iter().enumerate() {
            if fj && !m.get(i, j).is_zero() {
                acc = acc.add(m.get(i, j));
            }
        }
    }
    acc
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Nested-array text form, entries quoted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "\"{}\"", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reflexive-transitive closure by repeated squaring; used to cross-check
/// [`matrix_star`] over the Boolean algebra.
pub fn bool_closure(m: &Matrix<bool>) -> Matrix<bool> {
    let n = m.rows();
    let mut r = Matrix::from_fn(n, n, |i, j| i == j || *m.get(i, j));
    loop {
        let next = r.mul(&r).expect("square");
        if next == r {
            return r;
        }
        r = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn star_of_one_by_one_is_scalar_star() {
        let m = Matrix::from_rows(vec![vec![false]]).unwrap();
        assert!(*matrix_star(&m).unwrap().get(0, 0));
    }

    #[test]
    fn star_of_zero_matrix_is_identity() {
        let m = Matrix::filled(2, 2, false);
        assert_eq!(matrix_star(&m).unwrap(), Matrix::identity_like(&false, 2));
    }

    #[test]
    fn empty_matrix_is_rejected() {
        let m: Matrix<bool> = Matrix::filled(0, 0, false);
        assert!(matrix_star(&m).is_err());
    }

    #[test]
    fn zero_start_vector_gives_zero_language() {
        let a = Matrix::filled(3, 3, true);
        let aut = Automaton::new(vec![false; 3], a, vec![true; 3]).unwrap();
        assert!(!aut.language().unwrap());
    }

    #[test]
    fn mismatched_automaton_is_rejected() {
        let a = Matrix::filled(2, 2, true);
        assert!(Automaton::new(vec![true], a, vec![true, true]).is_err());
    }

    fn bool_matrix(n: usize) -> impl Strategy<Value = Matrix<bool>> {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |v| {
            Matrix::from_fn(n, n, |i, j| v[i * n + j])
        })
    }

    proptest! {
        #[test]
        fn star_matches_closure_oracle(n in 1usize..=4, seed in any::<u64>()) {
            let v: Vec<bool> = (0..n * n).map(|k| (seed >> (k % 64)) & 1 == 1).collect();
            let m = Matrix::from_fn(n, n, |i, j| v[i * n + j]);
            prop_assert_eq!(matrix_star(&m).unwrap(), bool_closure(&m));
        }

        #[test]
        fn star_is_independent_of_split(m in (1usize..=5).prop_flat_map(bool_matrix)) {
            let n = m.rows();
            let mid = n.div_ceil(2);
            prop_assert_eq!(matrix_star_split(&m, 1).unwrap(), matrix_star_split(&m, mid).unwrap());
        }

        #[test]
        fn star_satisfies_unfolding(m in (1usize..=4).prop_flat_map(bool_matrix)) {
            let n = m.rows();
            let s = matrix_star(&m).unwrap();
            let unfold = m.mul(&s).unwrap().add(&Matrix::identity_like(&false, n)).unwrap();
            // M·M* + I <= M*
            prop_assert_eq!(unfold.add(&s).unwrap(), s);
        }
    }
}
