use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::vector::LatticeVector;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Irreducible (reduced, crystallographic) root system types handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RootKind {
    A,
    B,
    C,
}

impl RootKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(RootKind::A),
            "B" | "b" => Ok(RootKind::B),
            "C" | "c" => Ok(RootKind::C),
            other => Err(Error::UnsupportedRootSystem { kind: other.to_string(), rank: 0 }),
        }
    }

    /// Largest rank for which the Weyl group is enumerated eagerly.
    pub fn max_rank(self) -> usize {
        4
    }

    fn min_rank(self) -> usize {
        match self {
            RootKind::A => 1,
            RootKind::B | RootKind::C => 2,
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootKind::A => "A",
            RootKind::B => "B",
            RootKind::C => "C",
        };
        f.write_str(s)
    }
}

/// Small dense integer matrix (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    fn from_fn(n: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.n;
        IntMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn apply<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let m = self.get(i, j);
                    if m != 0 {
                        acc = acc + T::from_i64(m) * x.clone();
                    }
                }
                acc
            })
            .collect()
    }
}

/// An element of the finite Weyl group, carried with its shortlex-least
/// reduced word and its matrices on coweight (omega) and root (alpha)
/// coordinates.
#[derive(Clone, Debug)]
pub struct WeylWord {
    letters: Vec<u8>,
    coweight_action: IntMatrix,
    root_action: IntMatrix,
}

impl WeylWord {
    /// Letters are 1-based indices of simple reflections; the word
    /// `s_{i1} s_{i2} ... s_{ik}` acts as the composite (rightmost first).
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn coweight_matrix(&self) -> &IntMatrix {
        &self.coweight_action
    }

    pub fn root_matrix(&self) -> &IntMatrix {
        &self.root_action
    }

    pub fn act<T: Scalar>(&self, v: &LatticeVector<T>) -> LatticeVector<T> {
        LatticeVector::new(self.coweight_action.apply(v.coords()))
    }

    /// Action on a root given by its simple-root coefficients.
    pub fn act_on_root(&self, root: &[i64]) -> Vec<i64> {
        self.root_action.apply_ints(root)
    }
}

impl PartialEq for WeylWord {
    fn eq(&self, other: &Self) -> bool {
        self.coweight_action == other.coweight_action
    }
}

impl Eq for WeylWord {}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.letters.iter().map(|i| format!("s{i}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Immutable root-system table: simple roots, coroots, coweights, positive
/// roots and the eagerly enumerated finite Weyl group.
#[derive(Clone, Debug)]
pub struct RootSystem {
    kind: RootKind,
    rank: usize,
    ambient_simple_roots: Vec<Vec<Rational>>,
    gram: Vec<Vec<Rational>>,
    cartan: Vec<Vec<i64>>,
    coweight_gram: Vec<Vec<Rational>>,
    coroot_solve: Vec<Vec<Rational>>,
    positive_roots: Vec<Vec<i64>>,
    highest_root: Vec<i64>,
    weyl: Vec<WeylWord>,
    index: HashMap<IntMatrix, usize>,
    inverse: Vec<usize>,
    longest: usize,
}

fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

impl RootSystem {
    pub fn new(kind: RootKind, rank: usize) -> Result<Self> {
        if rank < kind.min_rank() || rank > kind.max_rank() {
            return Err(Error::UnsupportedRootSystem { kind: kind.to_string(), rank });
        }
        let ambient_dim = match kind {
            RootKind::A => rank + 1,
            _ => rank,
        };
        let e = |i: usize| -> Vec<Rational> {
            (0..ambient_dim).map(|k| Rational::from_integer(i64::from(k == i))).collect()
        };
        let sub = |u: Vec<Rational>, v: Vec<Rational>| -> Vec<Rational> {
            u.into_iter().zip(v).map(|(a, b)| a - b).collect()
        };
        let mut simple: Vec<Vec<Rational>> = (0..rank.saturating_sub(1)).map(|i| sub(e(i), e(i + 1))).collect();
        let last = match kind {
            RootKind::A => sub(e(rank - 1), e(rank)),
            RootKind::B => e(rank - 1),
            RootKind::C => e(rank - 1).into_iter().map(|x| x * 2).collect(),
        };
        simple.push(last);

        let gram: Vec<Vec<Rational>> =
            simple.iter().map(|a| simple.iter().map(|b| dot(a, b)).collect()).collect();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = gram[i][j] * 2 / gram[i][i];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let coweight_gram = invert_rational(&gram).expect("simple roots are linearly independent");
        let cartan_t: Vec<Vec<Rational>> = (0..rank)
            .map(|i| (0..rank).map(|j| Rational::from_integer(cartan[j][i])).collect())
            .collect();
        let coroot_solve = invert_rational(&cartan_t).expect("Cartan matrix is invertible");

        let simple_coweight: Vec<IntMatrix> = (0..rank)
            .map(|i| {
                IntMatrix::from_fn(rank, |j, k| i64::from(j == k) - if k == i { cartan[i][j] } else { 0 })
            })
            .collect();
        let simple_root: Vec<IntMatrix> = (0..rank)
            .map(|i| {
                IntMatrix::from_fn(rank, |j, k| i64::from(j == k) - if j == i { cartan[i][k] } else { 0 })
            })
            .collect();

        // Breadth-first closure in shortlex order: parents are visited in
        // shortlex order and letters ascending, so the first word reaching an
        // element is its shortlex-least reduced word.
        let mut weyl = vec![WeylWord {
            letters: Vec::new(),
            coweight_action: IntMatrix::identity(rank),
            root_action: IntMatrix::identity(rank),
        }];
        let mut index = HashMap::new();
        index.insert(IntMatrix::identity(rank), 0usize);
        let mut head = 0;
        while head < weyl.len() {
            for i in 0..rank {
                let cw = weyl[head].coweight_action.mul(&simple_coweight[i]);
                if index.contains_key(&cw) {
                    continue;
                }
                let mut letters = weyl[head].letters.clone();
                letters.push((i + 1) as u8);
                let rt = weyl[head].root_action.mul(&simple_root[i]);
                index.insert(cw.clone(), weyl.len());
                weyl.push(WeylWord { letters, coweight_action: cw, root_action: rt });
            }
            head += 1;
        }
        let longest = weyl.len() - 1;
        let inverse = weyl
            .iter()
            .map(|w| {
                let mut m = IntMatrix::identity(rank);
                for &l in w.letters.iter().rev() {
                    m = m.mul(&simple_coweight[l as usize - 1]);
                }
                index[&m]
            })
            .collect();

        // Positive roots: closure of the simple roots under simple reflections.
        let mut roots: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let mut k = 0;
        while k < roots.len() {
            for s in &simple_root {
                let img = s.apply_ints(&roots[k]);
                if img.iter().all(|&c| c >= 0) && !roots.contains(&img) {
                    roots.push(img);
                }
            }
            k += 1;
        }
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let highest_root = roots.last().cloned().expect("nonempty root system");

        Ok(Self {
            kind,
            rank,
            ambient_simple_roots: simple,
            gram,
            cartan,
            coweight_gram,
            coroot_solve,
            positive_roots: roots,
            highest_root,
            weyl,
            index,
            inverse,
            longest,
        })
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `<alpha_i^vee, alpha_j>`.
    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `<alpha_i, alpha_j>` in the ambient inner product.
    pub fn root_gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// `<omega_i, omega_j>`; the inner product used for norms.
    pub fn coweight_gram(&self) -> &[Vec<Rational>] {
        &self.coweight_gram
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_simple_roots[0].len()
    }

    pub fn simple_roots_ambient(&self) -> &[Vec<Rational>] {
        &self.ambient_simple_roots
    }

    pub fn simple_coroots_ambient(&self) -> Vec<Vec<Rational>> {
        self.ambient_simple_roots
            .iter()
            .enumerate()
            .map(|(i, a)| a.iter().map(|x| x * 2 / self.gram[i][i]).collect())
            .collect()
    }

    pub fn fundamental_coweights_ambient(&self) -> Vec<Vec<Rational>> {
        (0..self.rank).map(|i| self.to_ambient(&LatticeVector::fundamental(self.rank, i + 1))).collect()
    }

    /// Positive roots as simple-root coefficient vectors, sorted by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    pub fn is_root(&self, root: &[i64]) -> bool {
        let neg: Vec<i64> = root.iter().map(|c| -c).collect();
        self.positive_roots.iter().any(|r| r == root || *r == neg)
    }

    /// All elements of `W_0` in shortlex order of their reduced words.
    pub fn weyl_elements(&self) -> &[WeylWord] {
        &self.weyl
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn identity(&self) -> &WeylWord {
        &self.weyl[0]
    }

    pub fn longest_element(&self) -> &WeylWord {
        &self.weyl[self.longest]
    }

    pub fn simple_reflection(&self, i: usize) -> &WeylWord {
        assert!(i >= 1 && i <= self.rank);
        self.element_from_word(&[i as u8]).expect("valid letter")
    }

    /// Canonical element represented by an arbitrary word.
    pub fn element_from_word(&self, letters: &[u8]) -> Result<&WeylWord> {
        let mut m = IntMatrix::identity(self.rank);
        for &l in letters {
            let l = l as usize;
            if l == 0 || l > self.rank {
                return Err(Error::Domain(format!("letter s{l} out of range 1..={}", self.rank)));
            }
            m = m.mul(self.weyl[self.index_of_letter(l)].coweight_matrix());
        }
        Ok(&self.weyl[self.index[&m]])
    }

    fn index_of_letter(&self, l: usize) -> usize {
        // Layer one of the shortlex enumeration is s_1, ..., s_r in order.
        l
    }

    pub fn inverse(&self, w: &WeylWord) -> &WeylWord {
        &self.weyl[self.inverse[self.index[&w.coweight_action]]]
    }

    pub fn compose(&self, u: &WeylWord, v: &WeylWord) -> &WeylWord {
        &self.weyl[self.index[&u.coweight_action.mul(&v.coweight_action)]]
    }

    /// `<v, beta>` for a root `beta` given in simple-root coefficients.
    pub fn pairing<T: Scalar>(&self, v: &LatticeVector<T>, root: &[i64]) -> T {
        let mut acc = T::zero();
        for (c, x) in root.iter().zip(v.coords()) {
            if *c != 0 {
                acc = acc + T::from_i64(*c) * x.clone();
            }
        }
        acc
    }

    pub fn inner<T: Scalar>(&self, u: &LatticeVector<T>, v: &LatticeVector<T>) -> T {
        let mut acc = T::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                let g = T::from_rational(&self.coweight_gram[i][j]);
                acc = acc + g * u[i].clone() * v[j].clone();
            }
        }
        acc
    }

    pub fn norm_sq<T: Scalar>(&self, v: &LatticeVector<T>) -> T {
        self.inner(v, v)
    }

    pub fn distance_sq<T: Scalar>(&self, x: &LatticeVector<T>, y: &LatticeVector<T>) -> T {
        self.norm_sq(&(y - x))
    }

    /// Coroot `beta^vee = 2 beta / <beta, beta>` in coweight coordinates.
    pub fn coroot(&self, root: &[i64]) -> LatticeVector<Rational> {
        let r = self.rank;
        let pair_simple: Vec<Rational> =
            (0..r).map(|j| (0..r).map(|i| self.gram[i][j] * root[i]).sum()).collect();
        let len_sq: Rational = (0..r).map(|j| pair_simple[j] * root[j]).sum();
        LatticeVector::new(pair_simple.iter().map(|p| p * 2 / len_sq).collect())
    }

    pub fn to_ambient(&self, v: &LatticeVector<Rational>) -> Vec<Rational> {
        // omega_i = sum_k (G^{-1})_{ik} alpha_k with G the simple-root Gram matrix.
        let mut out = vec![Rational::zero(); self.ambient_dim()];
        for i in 0..self.rank {
            for k in 0..self.rank {
                let c = v[i] * self.coweight_gram[i][k];
                if c.is_zero() {
                    continue;
                }
                for (o, a) in out.iter_mut().zip(&self.ambient_simple_roots[k]) {
                    *o += c * a;
                }
            }
        }
        out
    }

    pub fn in_coweight_lattice(&self, v: &LatticeVector<Rational>) -> bool {
        v.coords().iter().all(|c| c.is_integer())
    }

    pub fn in_coroot_lattice(&self, v: &LatticeVector<Rational>) -> bool {
        self.in_coweight_lattice(v)
            && self
                .coroot_solve
                .iter()
                .all(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum::<Rational>().is_integer())
    }

    /// Indices `i` with `omega_i / m_i` special, i.e. coefficient of `alpha_i`
    /// in the highest root equal to one.
    pub fn minuscule_indices(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.highest_root[i] == 1).map(|i| i + 1).collect()
    }

    pub fn summary(&self) -> RootSystemSummary {
        let fmt_vecs = |vs: Vec<Vec<Rational>>| -> Vec<Vec<String>> {
            vs.into_iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
        };
        RootSystemSummary {
            schema: "weylwalk.rootsys.v1",
            kind: self.kind.to_string(),
            rank: self.rank,
            simple_roots: fmt_vecs(self.ambient_simple_roots.clone()),
            simple_coroots: fmt_vecs(self.simple_coroots_ambient()),
            fundamental_coweights: fmt_vecs(self.fundamental_coweights_ambient()),
            cartan_matrix: self.cartan.clone(),
            positive_roots: self.positive_roots.clone(),
            highest_root: self.highest_root.clone(),
            weyl_order: self.weyl.len(),
            longest_element: self.longest_element().to_string(),
            special_types: std::iter::once(0).chain(self.minuscule_indices()).collect(),
        }
    }
}

/// JSON-facing summary. Ambient vectors are in the standard basis
/// `e_1, e_2, ...`; roots are simple-root coefficient vectors.
#[derive(Clone, Debug, Serialize)]
pub struct RootSystemSummary {
    pub schema: &'static str,
    pub kind: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<String>>,
    pub simple_coroots: Vec<Vec<String>>,
    pub fundamental_coweights: Vec<Vec<String>>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
    pub weyl_order: usize,
    pub longest_element: String,
    pub special_types: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn weyl_orders_match_classification() {
        let expected = [
            (RootKind::A, 1, 2),
            (RootKind::A, 2, 6),
            (RootKind::A, 3, 24),
            (RootKind::A, 4, 120),
            (RootKind::B, 2, 8),
            (RootKind::B, 3, 48),
            (RootKind::C, 2, 8),
            (RootKind::C, 3, 48),
            (RootKind::C, 4, 384),
        ];
        for (kind, rank, order) in expected {
            let rs = RootSystem::new(kind, rank).unwrap();
            assert_eq!(rs.weyl_order(), order, "{kind}{rank}");
            assert_eq!(rs.longest_element().len(), rs.positive_roots().len());
        }
    }

    #[test]
    fn unsupported_ranks_rejected() {
        assert!(RootSystem::new(RootKind::A, 0).is_err());
        assert!(RootSystem::new(RootKind::C, 1).is_err());
        assert!(RootSystem::new(RootKind::A, 5).is_err());
        assert!(RootKind::parse("G").is_err());
    }

    #[test]
    fn c2_matches_reference_figure() {
        let rs = RootSystem::new(RootKind::C, 2).unwrap();
        let z = Rational::zero;
        let o = Rational::one;
        assert_eq!(rs.simple_roots_ambient(), &[vec![o(), -o()], vec![z(), r(2, 1)]]);
        assert_eq!(rs.simple_coroots_ambient(), vec![vec![o(), -o()], vec![z(), o()]]);
        assert_eq!(rs.fundamental_coweights_ambient(), vec![vec![o(), z()], vec![r(1, 2), r(1, 2)]]);
        assert_eq!(rs.highest_root(), &[2, 1]);
        assert_eq!(rs.positive_roots().len(), 4);
    }

    #[test]
    fn coweights_dual_to_simple_roots() {
        for (kind, rank) in [(RootKind::A, 3), (RootKind::B, 3), (RootKind::C, 3)] {
            let rs = RootSystem::new(kind, rank).unwrap();
            let omegas = rs.fundamental_coweights_ambient();
            for (i, w) in omegas.iter().enumerate() {
                for (j, a) in rs.simple_roots_ambient().iter().enumerate() {
                    assert_eq!(dot(w, a), Rational::from_integer(i64::from(i == j)));
                }
            }
        }
    }

    #[test]
    fn root_pairings_are_integral() {
        let rs = RootSystem::new(RootKind::B, 3).unwrap();
        for a in rs.positive_roots() {
            for b in rs.positive_roots() {
                let v = rs.coroot(b);
                assert!(rs.pairing(&v, a).is_integer());
            }
        }
    }

    #[test]
    fn shortlex_words_are_reduced_and_prefix_closed() {
        let rs = RootSystem::new(RootKind::A, 3).unwrap();
        for w in rs.weyl_elements() {
            if let Some((_, prefix)) = w.letters().split_last() {
                let p = rs.element_from_word(prefix).unwrap();
                assert_eq!(p.letters(), prefix);
            }
            let back = rs.compose(w, rs.inverse(w));
            assert!(back.is_identity());
        }
    }
}
