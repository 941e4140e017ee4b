use std::fmt;

use num_traits::Zero;

use super::root_system::{RootSystem, WeylWord};
use super::vector::LatticeVector;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Affine hyperplane `H_{alpha,k} = { x : <x, alpha> = k }`; `root` holds the
/// simple-root coefficients of `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Wall {
    pub root: Vec<i64>,
    pub level: i64,
}

impl Wall {
    pub fn new(root: Vec<i64>, level: i64) -> Self {
        Self { root, level }
    }

    pub fn contains<T: Scalar>(&self, rs: &RootSystem, x: &LatticeVector<T>) -> bool {
        rs.pairing(x, &self.root) == T::from_i64(self.level)
    }
}

/// Sector `base + w s_0` where `s_0` is the closed fundamental Weyl cone.
#[derive(Clone, Debug)]
pub struct Sector {
    pub base: LatticeVector<Rational>,
    pub direction: WeylWord,
}

impl Sector {
    /// Sectors are based at special vertices, i.e. points of the coweight lattice.
    pub fn new(rs: &RootSystem, base: LatticeVector<Rational>, direction: WeylWord) -> Result<Self> {
        if !rs.in_coweight_lattice(&base) {
            return Err(Error::Domain(format!("sector base {base} is not a special vertex")));
        }
        Ok(Self { base, direction })
    }

    pub fn fundamental(rs: &RootSystem) -> Self {
        Self { base: LatticeVector::zero(rs.rank()), direction: rs.identity().clone() }
    }

    pub fn contains(&self, rs: &RootSystem, x: &LatticeVector<Rational>) -> bool {
        let rel = x - &self.base;
        rs.inverse(&self.direction).act(&rel).is_dominant()
    }
}

/// Squared separation constant (exact) together with its square root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparationConstant {
    pub squared: Rational,
    pub value: f64,
}

impl fmt::Display for SeparationConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (squared {})", self.value, self.squared)
    }
}

impl RootSystem {
    /// `s_{alpha,k}(x) = x - (<x,alpha> - k) alpha^vee`.
    pub fn reflect<T: Scalar>(&self, wall: &Wall, x: &LatticeVector<T>) -> LatticeVector<T> {
        let c = self.pairing(x, &wall.root) - T::from_i64(wall.level);
        let coroot = self.coroot(&wall.root);
        let shift: Vec<T> = coroot.coords().iter().map(|a| T::from_rational(a) * c.clone()).collect();
        x - &LatticeVector::new(shift)
    }

    /// Returns `(mu_plus, w)` with `mu_plus` dominant and `w mu_plus = mu`,
    /// where `w` is the first such element in shortlex order (so of minimal
    /// length, ties broken by the lexicographically least reduced word).
    pub fn dominant_representative<T: Scalar>(&self, mu: &LatticeVector<T>) -> (LatticeVector<T>, &WeylWord) {
        self.dominant_representative_within(mu, &T::zero())
    }

    /// As [`RootSystem::dominant_representative`] but accepting coordinates
    /// down to `-tol` as nonnegative; for floating-point estimates.
    pub fn dominant_representative_within<T: Scalar>(
        &self,
        mu: &LatticeVector<T>,
        tol: &T,
    ) -> (LatticeVector<T>, &WeylWord) {
        for w in self.weyl_elements() {
            let cand = self.inverse(w).act(mu);
            if cand.is_dominant_within(tol) {
                return (cand, w);
            }
        }
        // Unreachable for tol >= 0: every W_0-orbit meets the closed chamber.
        unreachable!("no dominant element found in a Weyl orbit")
    }

    /// `(y - x)^+`.
    pub fn vector_distance_apartment<T: Scalar>(&self, x: &LatticeVector<T>, y: &LatticeVector<T>) -> LatticeVector<T> {
        self.dominant_representative(&(y - x)).0
    }

    /// `R(w) = { alpha in R+ : w^{-1} alpha in -R+ }`, listed in height order.
    pub fn inversion_set(&self, w: &WeylWord) -> Vec<Vec<i64>> {
        let winv = self.inverse(w);
        self.positive_roots()
            .iter()
            .filter(|a| winv.act_on_root(a).iter().all(|&c| c <= 0))
            .cloned()
            .collect()
    }

    /// Distinct points of `W_0 lambda`, in the order first reached by the
    /// shortlex enumeration.
    pub fn orbit<T: Scalar>(&self, lambda: &LatticeVector<T>) -> Vec<LatticeVector<T>> {
        let mut out: Vec<LatticeVector<T>> = Vec::new();
        for w in self.weyl_elements() {
            let p = w.act(lambda);
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// `C = min { d(w1 lambda, w2 lambda) : w1 lambda != w2 lambda } / |lambda|`.
    pub fn orbit_separation_constant(&self, lambda: &LatticeVector<Rational>) -> Result<SeparationConstant> {
        let norm_sq = self.norm_sq(lambda);
        if norm_sq.is_zero() {
            return Err(Error::Domain("separation constant undefined for lambda = 0".into()));
        }
        let orbit = self.orbit(lambda);
        let mut best: Option<Rational> = None;
        for (i, a) in orbit.iter().enumerate() {
            for b in &orbit[i + 1..] {
                let d = self.distance_sq(a, b);
                if best.is_none_or(|m| d < m) {
                    best = Some(d);
                }
            }
        }
        // A one-point orbit means lambda is W_0-fixed, which forces lambda = 0.
        let squared = best.ok_or_else(|| Error::Domain("orbit has a single point".into()))? / norm_sq;
        let value = Scalar::to_f64(&squared).sqrt();
        Ok(SeparationConstant { squared, value })
    }

    /// Euclidean comparison inequality for `p(t1) = o + t1 (a - o)` and
    /// `q(t2) = o + t2 (b - o)`:
    /// `d^2(p,q) <= t1(t1-t2) d^2(o,a) + t2(t2-t1) d^2(o,b) + t1 t2 d^2(a,b)`.
    pub fn cat0_comparison_holds<T: Scalar>(
        &self,
        o: &LatticeVector<T>,
        a: &LatticeVector<T>,
        b: &LatticeVector<T>,
        t1: &T,
        t2: &T,
    ) -> bool {
        let (lhs, rhs) = self.cat0_comparison_sides(o, a, b, t1, t2);
        lhs <= rhs
    }

    pub fn cat0_comparison_sides<T: Scalar>(
        &self,
        o: &LatticeVector<T>,
        a: &LatticeVector<T>,
        b: &LatticeVector<T>,
        t1: &T,
        t2: &T,
    ) -> (T, T) {
        let p = o + &(a - o).scale(t1);
        let q = o + &(b - o).scale(t2);
        let lhs = self.distance_sq(&p, &q);
        let rhs = t1.clone() * (t1.clone() - t2.clone()) * self.distance_sq(o, a)
            + t2.clone() * (t2.clone() - t1.clone()) * self.distance_sq(o, b)
            + t1.clone() * t2.clone() * self.distance_sq(a, b);
        (lhs, rhs)
    }

    /// Type of a coweight-lattice point: 0 on `Q`, otherwise the index `i` of
    /// the minuscule coweight `omega_i` with `lambda - omega_i in Q`.
    /// In type `A_r` this is `sum_i i * lambda_i mod (r+1)`.
    pub fn vertex_type(&self, lambda: &LatticeVector<Rational>) -> Result<usize> {
        if !self.in_coweight_lattice(lambda) {
            return Err(Error::NotACoweight(lambda.to_string()));
        }
        if self.in_coroot_lattice(lambda) {
            return Ok(0);
        }
        for i in self.minuscule_indices() {
            let shifted = lambda - &LatticeVector::fundamental(self.rank(), i);
            if self.in_coroot_lattice(&shifted) {
                return Ok(i);
            }
        }
        Err(Error::InvalidState(format!("no coset type found for {lambda}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::RootKind;

    fn c2() -> RootSystem {
        RootSystem::new(RootKind::C, 2).unwrap()
    }

    fn q(v: &[i64]) -> LatticeVector<Rational> {
        LatticeVector::from_ints(v)
    }

    #[test]
    fn reflection_through_affine_wall() {
        let rs = c2();
        let wall = Wall::new(vec![1, 0], 1);
        // s_{alpha_1,1}(0) = alpha_1^vee, which has omega-coordinates (2, -2).
        assert_eq!(rs.reflect(&wall, &q(&[0, 0])), q(&[2, -2]));
        let linear = Wall::new(vec![1, 0], 0);
        // alpha_1 = e1 - e2 pairs to (2, -2) with (alpha_1, alpha_2).
        let alpha1 = q(&[2, -2]);
        assert_eq!(rs.reflect(&linear, &alpha1), -alpha1.clone());
    }

    #[test]
    fn minus_omega1_in_c2_needs_three_letters() {
        let rs = c2();
        let (plus, w) = rs.dominant_representative(&q(&[-1, 0]));
        assert_eq!(plus, q(&[1, 0]));
        assert_eq!(w.letters(), &[1, 2, 1]);
        assert_eq!(w.act(&plus), q(&[-1, 0]));
        // brute force: no shorter element sends omega_1 to -omega_1
        let shortest = rs
            .weyl_elements()
            .iter()
            .filter(|u| u.act(&q(&[1, 0])) == q(&[-1, 0]))
            .map(|u| u.len())
            .min();
        assert_eq!(shortest, Some(3));
    }

    #[test]
    fn inversion_sets_match_lengths() {
        let rs = RootSystem::new(RootKind::B, 3).unwrap();
        for w in rs.weyl_elements() {
            assert_eq!(rs.inversion_set(w).len(), w.len());
        }
        assert_eq!(rs.inversion_set(rs.longest_element()).len(), rs.positive_roots().len());
        assert!(rs.inversion_set(rs.identity()).is_empty());
        assert_eq!(rs.inversion_set(rs.simple_reflection(2)), vec![vec![0, 1, 0]]);
    }

    #[test]
    fn separation_constant_a1_is_two() {
        let rs = RootSystem::new(RootKind::A, 1).unwrap();
        let c = rs.orbit_separation_constant(&q(&[1])).unwrap();
        assert_eq!(c.squared, Rational::from_integer(4));
        assert_eq!(c.value, 2.0);
        assert!(rs.orbit_separation_constant(&q(&[0])).is_err());
    }

    #[test]
    fn vertex_types() {
        let rs = c2();
        assert_eq!(rs.vertex_type(&q(&[0, 1])).unwrap(), 2);
        assert_eq!(rs.vertex_type(&q(&[1, 0])).unwrap(), 0);
        assert_eq!(rs.vertex_type(&q(&[2, -2])).unwrap(), 0);
        let a2 = RootSystem::new(RootKind::A, 2).unwrap();
        assert_eq!(a2.vertex_type(&q(&[1, 0])).unwrap(), 1);
        assert_eq!(a2.vertex_type(&q(&[0, 1])).unwrap(), 2);
        assert_eq!(a2.vertex_type(&q(&[1, 1])).unwrap(), 0);
        let half = LatticeVector::new(vec![Rational::new(1, 2), Rational::from_integer(0)]);
        assert!(a2.vertex_type(&half).is_err());
    }

    #[test]
    fn sector_membership() {
        let rs = c2();
        let s0 = Sector::fundamental(&rs);
        assert!(s0.contains(&rs, &q(&[1, 3])));
        assert!(!s0.contains(&rs, &q(&[-1, 3])));
        let opposite = Sector::new(&rs, q(&[1, 1]), rs.longest_element().clone()).unwrap();
        assert!(opposite.contains(&rs, &q(&[0, 0])));
    }
}
