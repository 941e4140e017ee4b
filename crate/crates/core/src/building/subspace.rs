//! Subspaces of `F_q^n` in echelon form, indexing the neighbours of a vertex.

use rand::Rng;

use super::vertex::{idx, Vertex};
use crate::padic::LaurentPoly;

/// A `k`-dimensional subspace of `F_q^n`, in the echelon form where each
/// basis vector has coefficient 1 at its highest nonzero index (its pivot)
/// and 0 at every other pivot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    pivots: Vec<usize>,
    // For each pivot p (in order), coefficients at the free positions below p.
    coeffs: Vec<Vec<u8>>,
}

/// Positions `< p` that are not pivots.
fn free_positions(pivots: &[usize], p: usize) -> impl Iterator<Item = usize> + '_ {
    (0..p).filter(move |i| !pivots.contains(i))
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of subspaces with the given pivot set: `q^(free coefficients)`.
    pub fn cell_size(pivots: &[usize], q: u8) -> u64 {
        let free: usize = pivots.iter().map(|&p| free_positions(pivots, p).count()).sum();
        u64::from(q).pow(free as u32)
    }

    /// All pivot sets of size `k`, lexicographically.
    pub fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    /// Every subspace with the given pivot set.
    pub fn with_pivots(n: usize, pivots: &[usize], q: u8) -> Vec<Subspace> {
        let lens: Vec<usize> = pivots.iter().map(|&p| free_positions(pivots, p).count()).collect();
        let total: usize = lens.iter().sum();
        let count = u64::from(q).pow(total as u32);
        let mut out = Vec::with_capacity(count as usize);
        for mut code in 0..count {
            let coeffs = lens
                .iter()
                .map(|&l| {
                    (0..l)
                        .map(|_| {
                            let d = (code % u64::from(q)) as u8;
                            code /= u64::from(q);
                            d
                        })
                        .collect()
                })
                .collect();
            out.push(Subspace { n, pivots: pivots.to_vec(), coeffs });
        }
        out
    }

    /// Every `k`-dimensional subspace of `F_q^n`.
    pub fn all(n: usize, k: usize, q: u8) -> Vec<Subspace> {
        Self::pivot_sets(n, k).iter().flat_map(|s| Self::with_pivots(n, s, q)).collect()
    }

    /// Uniform subspace among those with the given pivot set.
    pub fn random_with_pivots<R: Rng + ?Sized>(rng: &mut R, n: usize, pivots: &[usize], q: u8) -> Subspace {
        let coeffs = pivots
            .iter()
            .map(|&p| free_positions(pivots, p).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        Subspace { n, pivots: pivots.to_vec(), coeffs }
    }

    /// Busemann offset (`GL` level) of the neighbour this subspace selects:
    /// `-1` on non-pivot positions, before the class normalization.
    pub fn gl_offset(n: usize, pivots: &[usize]) -> Vec<i64> {
        (0..n).map(|i| if pivots.contains(&i) { 0 } else { -1 }).collect()
    }

    /// The neighbour `L'` with `tL < L' < L` and `L'/tL` equal to this
    /// subspace in the basis given by the canonical columns of `v`.
    pub fn neighbor_of(&self, v: &Vertex) -> Vertex {
        debug_assert_eq!(self.n, v.dim());
        let n = self.n;
        let q = v.modulus();
        let a = v.diagonal_exponents();
        let b = v.upper_entries();
        let is_pivot: Vec<bool> = (0..n).map(|i| self.pivots.contains(&i)).collect();
        let mut new_b: Vec<LaurentPoly> = vec![LaurentPoly::zero(q); b.len()];
        let mut new_a = a.to_vec();

        for (pi, &p) in self.pivots.iter().enumerate() {
            // D_p = C_p + sum_i c_i C_i over free positions i < p.
            for r in 0..p {
                new_b[idx(r, p)] = b[idx(r, p)].clone();
            }
            for (&c, i) in self.coeffs[pi].iter().zip(free_positions(&self.pivots, p)) {
                if c == 0 {
                    continue;
                }
                // row i of C_i is the pivot t^{-a_i}
                let slot = &mut new_b[idx(i, p)];
                *slot = slot.add(&LaurentPoly::monomial(-a[i], i64::from(c), q));
                for r in 0..i {
                    let add = b[idx(r, i)].scale(c);
                    let slot = &mut new_b[idx(r, p)];
                    *slot = slot.add(&add);
                }
            }
        }
        for j in (0..n).filter(|&j| !is_pivot[j]) {
            // D_j = t C_j, then clear the t^{-a_i} term at each pivot row i < j.
            new_a[j] -= 1;
            for r in 0..j {
                new_b[idx(r, j)] = b[idx(r, j)].shift(1);
            }
            for i in (0..j).rev().filter(|&i| is_pivot[i]) {
                let c = new_b[idx(i, j)].coeff(-a[i]);
                if c == 0 {
                    continue;
                }
                let neg = crate::padic::field::Fq::new(-i64::from(c), q).value();
                let slot = &mut new_b[idx(i, j)];
                *slot = slot.add(&LaurentPoly::monomial(-a[i], i64::from(neg), q));
                for r in 0..i {
                    let add = new_b[idx(r, i)].scale(neg);
                    let slot = &mut new_b[idx(r, j)];
                    *slot = slot.add(&add);
                }
            }
        }
        Vertex::from_parts(q, new_a, new_b)
    }

    /// The matrix `D` with `D o^n` the neighbour of `o`; the neighbours of
    /// `g o` are then `g D o`.
    pub fn coset_representative(&self, q: u8) -> crate::padic::RfMatrix {
        use crate::padic::{RationalFunction, RfMatrix};
        let n = self.n;
        let mut m = RfMatrix::zeros(n, q);
        for j in 0..n {
            if !self.pivots.contains(&j) {
                m.set(j, j, RationalFunction::t_power(1, q));
            }
        }
        for (pi, &p) in self.pivots.iter().enumerate() {
            m.set(p, p, RationalFunction::one(q));
            for (&c, i) in self.coeffs[pi].iter().zip(free_positions(&self.pivots, p)) {
                m.set(i, p, RationalFunction::constant(i64::from(c), q));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomial_counts() {
        // [3 choose 1]_2 = 7, [3 choose 2]_2 = 7, [4 choose 2]_2 = 35, [4 choose 2]_3 = 130
        assert_eq!(Subspace::all(3, 1, 2).len(), 7);
        assert_eq!(Subspace::all(3, 2, 2).len(), 7);
        assert_eq!(Subspace::all(4, 2, 2).len(), 35);
        assert_eq!(Subspace::all(4, 2, 3).len(), 130);
        let total: u64 = Subspace::pivot_sets(4, 2).iter().map(|s| Subspace::cell_size(s, 3)).sum();
        assert_eq!(total, 130);
    }
}
