//! The affine building of `PGL_n(F_q((t)))`, `n = r + 1`: vertices, vector
//! distance, vector Busemann function, neighbours and spheres.

mod coords;
mod subspace;
mod vertex;

use std::collections::{BTreeMap, HashSet};

pub use coords::{coweight_to_gl, gl_to_coweight, opposition};
pub use subspace::Subspace;
pub use vertex::{canonicalize, Vertex};

use crate::coxeter::{RootKind, RootSystem};
use crate::error::{Error, Result};
use crate::padic::{check_modulus, smith_valuations_by_minors, LaurentMatrix, RfMatrix};
use crate::QVector;

/// Desk-scale guard on sphere enumeration: `nu` may be a sum of at most this
/// many fundamental coweights.
pub const SPHERE_GUARD: i64 = 4;

/// Building of type `A~_r` with residue field `F_q`; every panel lies in
/// `q + 1` chambers, so all residue parameters equal `q`.
#[derive(Clone, Debug)]
pub struct BuildingParams {
    rank: usize,
    q: u8,
    root_system: RootSystem,
}

impl BuildingParams {
    pub fn new(rank: usize, q: u32) -> Result<Self> {
        let q = check_modulus(q)?;
        let root_system = RootSystem::new(RootKind::A, rank)?;
        Ok(Self { rank, q, root_system })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Matrix size `n = r + 1`.
    pub fn n(&self) -> usize {
        self.rank + 1
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// `q_i` for `i = 0..=r`; all equal in type `A~_r`.
    pub fn residue_sizes(&self) -> Vec<u8> {
        vec![self.q; self.rank + 1]
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn origin(&self) -> Vertex {
        Vertex::origin(self.n(), self.q)
    }

    /// `t_lambda o` for `lambda` in coweight coordinates.
    pub fn apartment_vertex(&self, lambda: &QVector) -> Result<Vertex> {
        self.check_rank(lambda)?;
        Ok(Vertex::standard(&coweight_to_gl(lambda)?, self.q))
    }

    fn check_rank(&self, v: &QVector) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.rank() });
        }
        Ok(())
    }

    fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if v.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: v.dim() });
        }
        if v.modulus() != self.q {
            return Err(Error::FieldMismatch(self.q, v.modulus()));
        }
        Ok(())
    }

    pub fn canonicalize(&self, m: &RfMatrix) -> Result<Vertex> {
        if m.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: m.dim() });
        }
        if m.modulus() != self.q {
            return Err(Error::FieldMismatch(self.q, m.modulus()));
        }
        canonicalize(m)
    }

    /// `d(v, w)`: Cartan coordinate of `g^{-1} h` in coweight coordinates.
    pub fn vector_distance(&self, v: &Vertex, w: &Vertex) -> QVector {
        let rel: LaurentMatrix = if *v == self.origin() {
            w.matrix()
        } else {
            v.inverse_matrix().mul(&w.matrix())
        };
        let lambda = smith_valuations_by_minors(&rel).expect("vertex bases are invertible");
        gl_to_coweight(&lambda)
    }

    /// `d(o, w)`. For `n = 3` the extreme elementary divisors come from the
    /// entries of the basis matrix and of its inverse, avoiding 2x2 minors.
    pub fn distance_from_origin(&self, w: &Vertex) -> QVector {
        let n = self.n();
        if n != 3 {
            return self.vector_distance(&self.origin(), w);
        }
        let c = w.matrix();
        let min_val = |m: &LaurentMatrix| -> i64 {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter_map(|(i, j)| m.get(i, j).valuation())
                .min()
                .expect("invertible")
        };
        // Elementary divisor valuations e_1 <= ... <= e_n, lambda_i = -e_i.
        let det_val: i64 = -w.diagonal_exponents().iter().sum::<i64>();
        let e_first = min_val(&c);
        let e_last = -min_val(&w.inverse_matrix());
        gl_to_coweight(&[-e_first, -(det_val - e_first - e_last), -e_last])
    }

    /// Euclidean length squared of `d(v, w)`.
    pub fn distance_sq(&self, v: &Vertex, w: &Vertex) -> crate::Rational {
        self.root_system.norm_sq(&self.vector_distance(v, w))
    }

    pub fn busemann(&self, v: &Vertex) -> QVector {
        v.busemann()
    }

    /// Vertices at vector distance `omega_i` from `v`, one per `i`-dimensional
    /// subspace of `F_q^n`.
    pub fn neighbors(&self, v: &Vertex, i: usize) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        if i == 0 || i > self.rank {
            return Err(Error::Domain(format!("neighbour type {i} outside 1..={}", self.rank)));
        }
        Ok(Subspace::all(self.n(), i, self.q).iter().map(|s| s.neighbor_of(v)).collect())
    }

    /// All neighbours of every type.
    pub fn all_neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        (1..=self.rank).flat_map(|i| self.neighbors(v, i).expect("valid type")).collect()
    }

    /// The unique neighbour one step closer to the dominant end (rank 1:
    /// Busemann value increases by one).
    pub fn toward_end_neighbor(&self, v: &Vertex) -> Result<Vertex> {
        if self.rank != 1 {
            return Err(Error::Unsupported("toward-end step is defined for the tree only".into()));
        }
        Ok(Subspace::with_pivots(2, &[0], self.q)[0].neighbor_of(v))
    }

    /// Busemann level at which the ray from `v` to the dominant end enters the
    /// standard apartment (tree only).
    pub fn sector_entry_level(&self, v: &Vertex) -> Result<i64> {
        if self.rank != 1 {
            return Err(Error::Unsupported(
                "sector entry level needs apartment intersections beyond rank 1; use the reduced chain".into(),
            ));
        }
        self.check_vertex(v)?;
        let mut cur = v.clone();
        while !cur.in_standard_apartment() {
            cur = self.toward_end_neighbor(&cur)?;
        }
        Ok(tree_level(&cur))
    }

    /// Graph ball of the given radius around `v` (all neighbour types).
    pub fn ball(&self, v: &Vertex, radius: usize) -> Vec<Vertex> {
        let mut seen: HashSet<Vertex> = HashSet::from([v.clone()]);
        let mut order = vec![v.clone()];
        let mut frontier = vec![v.clone()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &frontier {
                for y in self.all_neighbors(x) {
                    if seen.insert(y.clone()) {
                        order.push(y.clone());
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        order
    }

    /// `{ y : d(v, y) = nu }`, by breadth-first expansion along neighbours
    /// that stay below `nu` coordinatewise.
    pub fn sphere(&self, v: &Vertex, nu: &QVector) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        self.check_rank(nu)?;
        let ints = nu.to_ints().ok_or_else(|| Error::NotACoweight(nu.to_string()))?;
        if ints.iter().any(|&c| c < 0) {
            return Err(Error::Domain(format!("{nu} is not dominant")));
        }
        let height: i64 = ints.iter().sum();
        if height > SPHERE_GUARD {
            return Err(Error::GuardExceeded(format!(
                "sphere for {nu} needs {height} fundamental steps, guard is {SPHERE_GUARD}"
            )));
        }
        let mut frontier = vec![v.clone()];
        let mut seen: HashSet<Vertex> = HashSet::from([v.clone()]);
        for _ in 0..height {
            let mut next = Vec::new();
            for x in &frontier {
                for y in self.all_neighbors(x) {
                    if seen.contains(&y) {
                        continue;
                    }
                    let d = self.vector_distance(v, &y);
                    let below = d.coords().iter().zip(nu.coords()).all(|(a, b)| a <= b);
                    seen.insert(y.clone());
                    if below {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        Ok(frontier.into_iter().filter(|y| self.vector_distance(v, y) == *nu).collect())
    }

    /// Histogram of Busemann offsets `h(y) - h(v)` over the sphere around `v`.
    pub fn sphere_offsets(&self, v: &Vertex, nu: &QVector) -> Result<BTreeMap<Vec<i64>, u64>> {
        let hv = v.busemann();
        let mut hist = BTreeMap::new();
        for y in self.sphere(v, nu)? {
            let off = (&y.busemann() - &hv).to_ints().expect("integral offset");
            *hist.entry(off).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

/// Busemann value of a tree vertex as an integer.
pub fn tree_level(v: &Vertex) -> i64 {
    let a = v.diagonal_exponents();
    a[0] - a[1]
}

/// Closed form of the tree entry level: the ray toward the end drops one
/// top term of the off-diagonal entry per step.
pub fn tree_entry_level_closed_form(v: &Vertex) -> i64 {
    let h = tree_level(v);
    match v.upper_entry(0, 1).valuation() {
        None => h,
        Some(low) => h + (-v.diagonal_exponents()[0] - low),
    }
}
