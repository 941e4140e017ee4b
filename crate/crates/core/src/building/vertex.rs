use std::fmt;

use super::coords::gl_to_coweight;
use crate::error::{Error, Result};
use crate::padic::{LaurentMatrix, LaurentPoly, RationalFunction, RfMatrix};
use crate::QVector;

/// A vertex of the building of `PGL_n(F_q((t)))`, i.e. a homothety class of
/// `o`-lattices, stored as its canonical basis matrix.
///
/// The canonical basis is upper triangular: column `j` is
/// `t^{-a_j} e_j + sum_{i<j} b_ij e_i` where each `b_ij` only has exponents
/// below `-a_i`, and the class representative is chosen so that
/// `sum a_j` lies in `0..n`. Upper (rather than lower) triangular is what
/// makes the Iwasawa coordinate a read-off of the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    q: u8,
    a: Vec<i64>,
    // Strictly upper entries, column by column: index j*(j-1)/2 + i for i < j.
    b: Vec<LaurentPoly>,
}

#[inline]
pub(crate) fn idx(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

impl Vertex {
    /// The base vertex `o = [o^n]`.
    pub fn origin(n: usize, q: u8) -> Self {
        Self { q, a: vec![0; n], b: vec![LaurentPoly::zero(q); n * (n - 1) / 2] }
    }

    /// `t_mu o` for a `GL`-level exponent vector `mu`.
    pub fn standard(mu: &[i64], q: u8) -> Self {
        let n = mu.len();
        let mut v = Self { q, a: mu.to_vec(), b: vec![LaurentPoly::zero(q); n * (n - 1) / 2] };
        v.normalize_shift();
        v
    }

    pub(crate) fn from_parts(q: u8, a: Vec<i64>, b: Vec<LaurentPoly>) -> Self {
        let mut v = Self { q, a, b };
        v.normalize_shift();
        v
    }

    /// Canonical form of the class of `m o^n`.
    pub fn from_matrix(m: &RfMatrix) -> Result<Self> {
        canonicalize(m)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    /// Diagonal exponents: the pivot of column `j` is `t^{-a_j}`.
    pub fn diagonal_exponents(&self) -> &[i64] {
        &self.a
    }

    pub fn upper_entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.b[idx(i, j)]
    }

    pub(crate) fn upper_entries(&self) -> &[LaurentPoly] {
        &self.b
    }

    /// `(-v(det)) mod n`; with the chosen normalization this is `sum a_j`.
    pub fn type_index(&self) -> usize {
        self.a.iter().sum::<i64>().rem_euclid(self.dim() as i64) as usize
    }

    /// Iwasawa coordinate at `GL` level (the diagonal exponents).
    pub fn busemann_gl(&self) -> &[i64] {
        &self.a
    }

    /// Vector Busemann value for the standard sector, in coweight coordinates.
    pub fn busemann(&self) -> QVector {
        gl_to_coweight(&self.a)
    }

    /// Whether the vertex lies in the standard apartment (diagonal basis).
    pub fn in_standard_apartment(&self) -> bool {
        self.b.iter().all(LaurentPoly::is_zero)
    }

    pub fn matrix(&self) -> LaurentMatrix {
        let n = self.dim();
        LaurentMatrix::from_fn(n, self.q, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => self.b[idx(i, j)].clone(),
            std::cmp::Ordering::Equal => LaurentPoly::monomial(-self.a[i], 1, self.q),
            std::cmp::Ordering::Greater => LaurentPoly::zero(self.q),
        })
    }

    pub fn to_rf(&self) -> RfMatrix {
        self.matrix().to_rf()
    }

    /// Inverse of the canonical basis matrix; Laurent since the determinant
    /// is a monomial.
    pub fn inverse_matrix(&self) -> LaurentMatrix {
        let n = self.dim();
        let q = self.q;
        let mut x = LaurentMatrix::zeros(n, q);
        for j in 0..n {
            x.set(j, j, LaurentPoly::monomial(self.a[j], 1, q));
            for i in (0..j).rev() {
                let mut acc = LaurentPoly::zero(q);
                for k in i + 1..=j {
                    let c = &self.b[idx(i, k)];
                    if !c.is_zero() && !x.get(k, j).is_zero() {
                        acc = acc.add(&c.mul(x.get(k, j)));
                    }
                }
                x.set(i, j, acc.neg().shift(self.a[i]));
            }
        }
        x
    }

    /// Multiply the representative by the scalar `t^s` chosen so that the
    /// exponent sum lands in `0..n`.
    pub(crate) fn normalize_shift(&mut self) {
        let n = self.dim() as i64;
        let s = self.a.iter().sum::<i64>().div_euclid(n);
        if s != 0 {
            for a in &mut self.a {
                *a -= s;
            }
            for b in &mut self.b {
                b.shift_in_place(s);
            }
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix())
    }
}

/// Column Hermite form over `o` of the lattice spanned by the columns of `m`.
pub fn canonicalize(m: &RfMatrix) -> Result<Vertex> {
    let n = m.dim();
    let q = m.modulus();
    let mut w = m.clone();
    let mut a = vec![0i64; n];
    for k in (0..n).rev() {
        let mut best: Option<(i64, usize)> = None;
        for j in 0..=k {
            if let Some(v) = w.get(k, j).valuation() {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, j));
                }
            }
        }
        let (_, pj) = best.ok_or(Error::SingularMatrix)?;
        w.swap_cols(k, pj);
        let pivot_inv = w.get(k, k).inv().expect("nonzero pivot");
        for j in 0..k {
            if !w.get(k, j).is_zero() {
                let c = w.get(k, j).mul(&pivot_inv).neg();
                w.add_col_multiple(j, k, &c);
            }
        }
        let (v, unit) = w.get(k, k).split_valuation().expect("nonzero pivot");
        w.scale_col(k, &unit.inv().expect("unit"));
        a[k] = -v;
    }
    // Reduce above-diagonal entries: column j against pivots i < j, bottom-up.
    for j in 1..n {
        for i in (0..j).rev() {
            let e = w.get(i, j).clone();
            let keep = e.expansion_below(-a[i]);
            let excess = e.sub(&RationalFunction::from_laurent(&keep));
            if !excess.is_zero() {
                let c = excess.mul(&RationalFunction::t_power(a[i], q)).neg();
                w.add_col_multiple(j, i, &c);
            }
        }
    }
    let mut b = vec![LaurentPoly::zero(q); n * (n - 1) / 2];
    for j in 1..n {
        for i in 0..j {
            b[idx(i, j)] = w.get(i, j).to_laurent().ok_or_else(|| {
                Error::InvalidState(format!("entry ({i},{j}) not Laurent after reduction"))
            })?;
        }
    }
    Ok(Vertex::from_parts(q, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::parse_entry;

    #[test]
    fn origin_from_integral_matrices() {
        let q = 2;
        let k = RfMatrix::from_rows(
            vec![
                vec![parse_entry("1", q).unwrap(), parse_entry("t/(t+1)", q).unwrap()],
                vec![parse_entry("t", q).unwrap(), parse_entry("1+t^3", q).unwrap()],
            ],
            q,
        )
        .unwrap();
        assert_eq!(canonicalize(&k).unwrap(), Vertex::origin(2, q));
        assert_eq!(canonicalize(&RfMatrix::identity(3, q)).unwrap(), Vertex::origin(3, q));
    }

    #[test]
    fn t_omega1_in_pgl2() {
        let q = 2;
        let v = canonicalize(&RfMatrix::t_lambda(&[1, 0], q)).unwrap();
        assert_eq!(v.diagonal_exponents(), &[1, 0]);
        assert_eq!(v.busemann().to_ints().unwrap(), vec![1]);
        // scalar multiples give the same class
        let w = canonicalize(&RfMatrix::t_lambda(&[4, 3], q)).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn inverse_matrix_is_inverse() {
        let q = 3;
        let m = RfMatrix::parse(
            &[
                vec!["t^-2".into(), "1/t".into(), "2".into()],
                vec!["0".into(), "t".into(), "(t+1)/t^3".into()],
                vec!["1".into(), "0".into(), "t^2".into()],
            ],
            q,
        )
        .unwrap();
        let v = canonicalize(&m).unwrap();
        let prod = v.matrix().mul(&v.inverse_matrix());
        assert_eq!(prod, LaurentMatrix::identity(3, q));
        assert_eq!(canonicalize(&v.to_rf()).unwrap(), v);
    }
}
