//! Square matrices over `F_q(t)` and over Laurent polynomials.

use std::fmt;

use super::expr::parse_entry;
use super::laurent::LaurentPoly;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// Ring operations needed by generic matrix code.
pub trait Entry: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(q: u8) -> Self;
    fn one(q: u8) -> Self;
    fn is_zero(&self) -> bool;
    fn modulus(&self) -> u8;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn valuation(&self) -> Option<i64>;
}

macro_rules! impl_entry {
    ($t:ty) => {
        impl Entry for $t {
            fn zero(q: u8) -> Self {
                <$t>::zero(q)
            }
            fn one(q: u8) -> Self {
                <$t>::one(q)
            }
            fn is_zero(&self) -> bool {
                <$t>::is_zero(self)
            }
            fn modulus(&self) -> u8 {
                <$t>::modulus(self)
            }
            fn add(&self, rhs: &Self) -> Self {
                <$t>::add(self, rhs)
            }
            fn sub(&self, rhs: &Self) -> Self {
                <$t>::sub(self, rhs)
            }
            fn mul(&self, rhs: &Self) -> Self {
                <$t>::mul(self, rhs)
            }
            fn valuation(&self) -> Option<i64> {
                <$t>::valuation(self)
            }
        }
    };
}

impl_entry!(RationalFunction);
impl_entry!(LaurentPoly);

/// Dense `n x n` matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    n: usize,
    q: u8,
    data: Vec<E>,
}

/// Group elements of `GL_n(F_q(t))`.
pub type RfMatrix = Matrix<RationalFunction>;
/// Matrices with Laurent-polynomial entries (vertex representatives).
pub type LaurentMatrix = Matrix<LaurentPoly>;

impl<E: Entry> Matrix<E> {
    pub fn zeros(n: usize, q: u8) -> Self {
        Self { n, q, data: vec![E::zero(q); n * n] }
    }

    pub fn identity(n: usize, q: u8) -> Self {
        let mut m = Self::zeros(n, q);
        for i in 0..n {
            m.data[i * n + i] = E::one(q);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<E>>, q: u8) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for e in row {
                if e.modulus() != q {
                    return Err(Error::FieldMismatch(q, e.modulus()));
                }
                data.push(e);
            }
        }
        Ok(Self { n, q, data })
    }

    pub fn from_fn(n: usize, q: u8, f: impl Fn(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, q, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<E>> {
        self.data.chunks(self.n).map(<[E]>::to_vec).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        let n = self.n;
        Self::from_fn(n, self.q, |i, j| {
            let mut acc = E::zero(self.q);
            for k in 0..n {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.q, |i, j| self.get(j, i).clone())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant of the submatrix on the given rows and columns, by
    /// cofactor expansion (division free; fine for the sizes used here).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> E {
        debug_assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => E::one(self.q),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => self
                .get(rows[0], cols[0])
                .mul(self.get(rows[1], cols[1]))
                .sub(&self.get(rows[0], cols[1]).mul(self.get(rows[1], cols[0]))),
            _ => {
                let mut acc = E::zero(self.q);
                let rest_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let a = self.get(rows[0], c);
                    if a.is_zero() {
                        continue;
                    }
                    let rest: Vec<usize> = cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
                    let term = a.mul(&self.minor(rest_rows, &rest));
                    acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    pub fn determinant_by_cofactors(&self) -> E {
        let all: Vec<usize> = (0..self.n).collect();
        self.minor(&all, &all)
    }

    pub fn map<F: Entry>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { n: self.n, q: self.q, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.n {
                self.data.swap(a * self.n + j, b * self.n + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.n {
                self.data.swap(i * self.n + a, i * self.n + b);
            }
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &E) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.n {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j).add(&c.mul(s));
                self.set(dst, j, v);
            }
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &E) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.n {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst).add(&s.mul(c));
                self.set(i, dst, v);
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &E) {
        for j in 0..self.n {
            let v = c.mul(self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &E) {
        for i in 0..self.n {
            let v = self.get(i, j).mul(c);
            self.set(i, j, v);
        }
    }
}

impl RfMatrix {
    /// `t_lambda = diag(t^{-lambda_1}, ..., t^{-lambda_n})`.
    pub fn t_lambda(lambda: &[i64], q: u8) -> Self {
        let n = lambda.len();
        Self::from_fn(n, q, |i, j| {
            if i == j {
                RationalFunction::t_power(-lambda[i], q)
            } else {
                RationalFunction::zero(q)
            }
        })
    }

    /// Parses a nested array of entry strings.
    pub fn parse(rows: &[Vec<String>], q: u8) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_entry(s, q)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed, q)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
    }

    pub fn determinant(&self) -> RationalFunction {
        let mut a = self.clone();
        let n = self.n;
        let mut det = RationalFunction::one(self.q);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return RationalFunction::zero(self.q);
            };
            if p != col {
                a.swap_rows(p, col);
                det = det.neg();
            }
            let pivot = a.get(col, col).clone();
            det = det.mul(&pivot);
            let pinv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !a.get(r, col).is_zero() {
                    let f = a.get(r, col).mul(&pinv).neg();
                    a.add_row_multiple(r, col, &f);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n, self.q);
        for col in 0..n {
            let p = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pinv = a.get(col, col).inv().expect("nonzero pivot");
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).neg();
                    a.add_row_multiple(r, col, &f);
                    inv.add_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    /// Entries with valuation `>= 0` and unit determinant: membership in `GL_n(o)`.
    pub fn is_in_gl_o(&self) -> bool {
        self.data.iter().all(RationalFunction::is_integral) && self.determinant().is_unit()
    }

    pub fn is_upper_unitriangular(&self) -> bool {
        self.is_upper_triangular() && (0..self.n).all(|i| self.get(i, i).is_one())
    }

    /// Exact Laurent form, if every denominator is a power of `t`.
    pub fn to_laurent(&self) -> Option<LaurentMatrix> {
        let data = self.data.iter().map(RationalFunction::to_laurent).collect::<Option<Vec<_>>>()?;
        Some(Matrix { n: self.n, q: self.q, data })
    }
}

impl LaurentMatrix {
    pub fn to_rf(&self) -> RfMatrix {
        self.map(RationalFunction::from_laurent)
    }
}

impl<E: Entry> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.data.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]], q: u8) -> RfMatrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        RfMatrix::parse(&rows, q).unwrap()
    }

    #[test]
    fn inverse_and_determinant() {
        let q = 2;
        let a = m(&[&["t", "1", "0"], &["1/t", "t+1", "t^2"], &["0", "1", "(t+1)/t"]], q);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RfMatrix::identity(3, q));
        assert_eq!(inv.mul(&a), RfMatrix::identity(3, q));
        assert_eq!(a.determinant(), a.determinant_by_cofactors());
        assert_eq!(a.determinant().mul(&inv.determinant()), RationalFunction::one(q));
    }

    #[test]
    fn t_lambda_inverse() {
        let q = 3;
        let t = RfMatrix::t_lambda(&[2, 0, -1], q);
        assert_eq!(t.inverse().unwrap(), RfMatrix::t_lambda(&[-2, 0, 1], q));
        assert_eq!(RfMatrix::identity(3, q).inverse().unwrap(), RfMatrix::identity(3, q));
    }

    #[test]
    fn singular_rejected() {
        let a = m(&[&["t", "1"], &["t^2", "t"]], 2);
        assert!(matches!(a.inverse(), Err(Error::SingularMatrix)));
        assert!(a.determinant().is_zero());
    }

    #[test]
    fn gl_o_membership() {
        let q = 2;
        assert!(m(&[&["1", "t"], &["0", "1/(t+1)"]], q).is_in_gl_o());
        assert!(!m(&[&["1", "1/t"], &["0", "1"]], q).is_in_gl_o());
        assert!(!m(&[&["t", "0"], &["0", "1"]], q).is_in_gl_o());
    }
}
