//! Cartan (`K t_lambda K`) and Iwasawa (`U t_mu K`) coordinates of elements of
//! `GL_n(F_q(t))`, by elimination with explicit transcripts, plus
//! determinantal-divisor formulas used as independent oracles.

use super::matrix::{Entry, Matrix, RfMatrix};
use super::rational::RationalFunction;
use crate::error::{Error, Result};

/// `M = k1 * t_lambda * k2` with `k1, k2 in GL_n(o)` and `lambda` decreasing.
#[derive(Clone, Debug)]
pub struct CartanDecomposition {
    pub lambda: Vec<i64>,
    pub k1: RfMatrix,
    pub k2: RfMatrix,
}

/// `M = u * t_mu * k` with `u` upper unitriangular over `F` and `k in GL_n(o)`.
#[derive(Clone, Debug)]
pub struct IwasawaDecomposition {
    pub mu: Vec<i64>,
    pub u: RfMatrix,
    pub k: RfMatrix,
}

impl CartanDecomposition {
    pub fn reassemble(&self) -> RfMatrix {
        let q = self.k1.modulus();
        self.k1.mul(&RfMatrix::t_lambda(&self.lambda, q)).mul(&self.k2)
    }
}

impl IwasawaDecomposition {
    pub fn reassemble(&self) -> RfMatrix {
        let q = self.u.modulus();
        self.u.mul(&RfMatrix::t_lambda(&self.mu, q)).mul(&self.k)
    }
}

/// Running factorization `M = left * work * right`.
struct Transcript {
    left: RfMatrix,
    work: RfMatrix,
    right: RfMatrix,
}

impl Transcript {
    fn new(m: &RfMatrix) -> Self {
        let (n, q) = (m.dim(), m.modulus());
        Self { left: RfMatrix::identity(n, q), work: m.clone(), right: RfMatrix::identity(n, q) }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.work.swap_rows(a, b);
        self.left.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.work.swap_cols(a, b);
        self.right.swap_rows(a, b);
    }

    /// `row[dst] -= c * row[src]` on the work matrix.
    fn eliminate_row(&mut self, dst: usize, src: usize, c: &RationalFunction) {
        self.work.add_row_multiple(dst, src, &c.neg());
        self.left.add_col_multiple(src, dst, c);
    }

    /// `col[dst] -= c * col[src]` on the work matrix.
    fn eliminate_col(&mut self, dst: usize, src: usize, c: &RationalFunction) {
        self.work.add_col_multiple(dst, src, &c.neg());
        self.right.add_row_multiple(src, dst, c);
    }

    /// Replaces the pivot `t^v * unit` at `(i, i)` by `t^v`, pushing the unit
    /// into `right`. Returns `v`.
    fn normalize_pivot(&mut self, i: usize) -> i64 {
        let (v, unit) = self.work.get(i, i).split_valuation().expect("nonzero pivot");
        let unit_inv = unit.inv().expect("unit");
        self.work.scale_col(i, &unit_inv);
        self.right.scale_row(i, &unit);
        v
    }
}

/// Cartan decomposition by global minimal-valuation pivoting (ties broken by
/// smallest `(row, col)`).
pub fn cartan_decomposition(m: &RfMatrix) -> Result<CartanDecomposition> {
    let n = m.dim();
    let mut tr = Transcript::new(m);
    let mut lambda = Vec::with_capacity(n);
    for s in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in s..n {
            for j in s..n {
                if let Some(v) = tr.work.get(i, j).valuation() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (_, pi, pj) = best.ok_or(Error::SingularMatrix)?;
        tr.swap_rows(s, pi);
        tr.swap_cols(s, pj);
        let pivot_inv = tr.work.get(s, s).inv().expect("nonzero pivot");
        for i in s + 1..n {
            if !tr.work.get(i, s).is_zero() {
                let c = tr.work.get(i, s).mul(&pivot_inv);
                tr.eliminate_row(i, s, &c);
            }
        }
        for j in s + 1..n {
            if !tr.work.get(s, j).is_zero() {
                let c = tr.work.get(s, j).mul(&pivot_inv);
                tr.eliminate_col(j, s, &c);
            }
        }
        lambda.push(-tr.normalize_pivot(s));
    }
    Ok(CartanDecomposition { lambda, k1: tr.left, k2: tr.right })
}

pub fn smith_valuations(m: &RfMatrix) -> Result<Vec<i64>> {
    Ok(cartan_decomposition(m)?.lambda)
}

/// Iwasawa decomposition by bottom-up elimination: pivot on a minimal
/// valuation entry of the current last row, clear the row with `o`-column
/// operations and the column above with upper unitriangular row operations.
pub fn iwasawa_decomposition(m: &RfMatrix) -> Result<IwasawaDecomposition> {
    let n = m.dim();
    let mut tr = Transcript::new(m);
    let mut mu = vec![0; n];
    for k in (0..n).rev() {
        let mut best: Option<(i64, usize)> = None;
        for j in 0..=k {
            if let Some(v) = tr.work.get(k, j).valuation() {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
        }
        let (_, pj) = best.ok_or(Error::SingularMatrix)?;
        tr.swap_cols(k, pj);
        let pivot_inv = tr.work.get(k, k).inv().expect("nonzero pivot");
        for j in 0..k {
            if !tr.work.get(k, j).is_zero() {
                let c = tr.work.get(k, j).mul(&pivot_inv);
                tr.eliminate_col(j, k, &c);
            }
        }
        for i in 0..k {
            if !tr.work.get(i, k).is_zero() {
                let c = tr.work.get(i, k).mul(&pivot_inv);
                tr.eliminate_row(i, k, &c);
            }
        }
        mu[k] = -tr.normalize_pivot(k);
    }
    Ok(IwasawaDecomposition { mu, u: tr.left, k: tr.right })
}

pub fn iwasawa_valuations(m: &RfMatrix) -> Result<Vec<i64>> {
    Ok(iwasawa_decomposition(m)?.mu)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn min_minor_valuation<E: Entry>(m: &Matrix<E>, row_sets: &[Vec<usize>], k: usize) -> Option<i64> {
    let col_sets = subsets(m.dim(), k);
    let mut best: Option<i64> = None;
    for rows in row_sets {
        for cols in &col_sets {
            if let Some(v) = m.minor(rows, cols).valuation() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
    }
    best
}

/// Cartan coordinate from determinantal divisors: with `delta_k` the minimal
/// valuation among `k x k` minors, the elementary divisors have valuations
/// `delta_k - delta_{k-1}`.
pub fn smith_valuations_by_minors<E: Entry>(m: &Matrix<E>) -> Result<Vec<i64>> {
    let n = m.dim();
    let mut prev = 0;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let d = min_minor_valuation(m, &subsets(n, k), k).ok_or(Error::SingularMatrix)?;
        out.push(-(d - prev));
        prev = d;
    }
    Ok(out)
}

/// Iwasawa coordinate from minors of the bottom rows: for `M = u t_mu k`,
/// the minimal valuation of `k x k` minors of the last `k` rows is
/// `-(mu_{n-k+1} + ... + mu_n)`.
pub fn iwasawa_valuations_by_minors<E: Entry>(m: &Matrix<E>) -> Result<Vec<i64>> {
    let n = m.dim();
    let mut mu = vec![0; n];
    let mut prev = 0;
    for k in 1..=n {
        let rows: Vec<usize> = (n - k..n).collect();
        let d = min_minor_valuation(m, &[rows], k).ok_or(Error::SingularMatrix)?;
        mu[n - k] = -(d - prev);
        prev = d;
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]], q: u8) -> RfMatrix {
        let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        RfMatrix::parse(&rows, q).unwrap()
    }

    #[test]
    fn diagonal_examples() {
        let q = 2;
        assert_eq!(smith_valuations(&RfMatrix::identity(3, q)).unwrap(), vec![0, 0, 0]);
        let d = m(&[&["t^-2", "0", "0"], &["0", "1", "0"], &["0", "0", "t"]], q);
        assert_eq!(smith_valuations(&d).unwrap(), vec![2, 0, -1]);
        let t = RfMatrix::t_lambda(&[1, 0, -1], q);
        assert_eq!(iwasawa_valuations(&t).unwrap(), vec![1, 0, -1]);
        let unsorted = RfMatrix::t_lambda(&[-1, 3, 0], q);
        assert_eq!(smith_valuations(&unsorted).unwrap(), vec![3, 0, -1]);
        assert_eq!(iwasawa_valuations(&unsorted).unwrap(), vec![-1, 3, 0]);
    }

    #[test]
    fn transcripts_reassemble() {
        let q = 3;
        let a = m(&[&["t", "1/t", "2"], &["(t+1)/t^2", "t+1", "t^2"], &["1", "1", "(t+2)/t"]], q);
        let c = cartan_decomposition(&a).unwrap();
        assert_eq!(c.reassemble(), a);
        assert!(c.k1.is_in_gl_o() && c.k2.is_in_gl_o());
        assert!(c.lambda.windows(2).all(|w| w[0] >= w[1]));
        let i = iwasawa_decomposition(&a).unwrap();
        assert_eq!(i.reassemble(), a);
        assert!(i.u.is_upper_unitriangular() && i.k.is_in_gl_o());
        assert_eq!(smith_valuations_by_minors(&a).unwrap(), c.lambda);
        assert_eq!(iwasawa_valuations_by_minors(&a).unwrap(), i.mu);
        let det_val = a.determinant().valuation().unwrap();
        assert_eq!(c.lambda.iter().sum::<i64>(), -det_val);
        assert_eq!(i.mu.iter().sum::<i64>(), -det_val);
    }

    #[test]
    fn singular_input() {
        let a = m(&[&["1", "t"], &["1", "t"]], 2);
        assert!(matches!(smith_valuations(&a), Err(Error::SingularMatrix)));
        assert!(matches!(iwasawa_valuations(&a), Err(Error::SingularMatrix)));
    }
}
