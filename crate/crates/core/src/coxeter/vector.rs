use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use crate::scalar::{Rational, Scalar};

/// A point of the Euclidean model `E`, stored in the fundamental-coweight
/// basis: coordinate `i` is the pairing `<v, alpha_i>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> LatticeVector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coords: vec![T::zero(); rank] }
    }

    /// The fundamental coweight `omega_i` (1-based index).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= rank, "fundamental coweight index {i} out of 1..={rank}");
        let mut v = Self::zero(rank);
        v.coords[i - 1] = T::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|&c| T::from_i64(c)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Dominant means every pairing with a simple root is nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Dominance with slack, for estimated vectors.
    pub fn is_dominant_within(&self, tol: &T) -> bool {
        let neg_tol = -tol.clone();
        self.coords.iter().all(|c| *c >= neg_tol)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LatticeVector<U> {
        LatticeVector { coords: self.coords.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> LatticeVector<f64> {
        self.map(|c| c.to_f64())
    }
}

impl LatticeVector<Rational> {
    /// Integer coordinates, if the vector lies in the coweight lattice.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

impl<T> Index<usize> for LatticeVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T: Scalar> Add for &LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn add(self, rhs: &LatticeVector<T>) -> LatticeVector<T> {
        assert_eq!(self.rank(), rhs.rank());
        LatticeVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn sub(self, rhs: &LatticeVector<T>) -> LatticeVector<T> {
        assert_eq!(self.rank(), rhs.rank());
        LatticeVector {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Add for LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn add(self, rhs: LatticeVector<T>) -> LatticeVector<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn sub(self, rhs: LatticeVector<T>) -> LatticeVector<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for &LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn neg(self) -> LatticeVector<T> {
        LatticeVector { coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }
}

impl<T: Scalar> Neg for LatticeVector<T> {
    type Output = LatticeVector<T>;

    fn neg(self) -> LatticeVector<T> {
        -&self
    }
}

impl<T: fmt::Display> fmt::Display for LatticeVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
