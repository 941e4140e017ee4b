//! Laurent polynomials `sum_e c_e t^e` over `F_q` (finitely many terms,
//! exponents of either sign).

use std::fmt;

use super::field;
use super::poly::{convolve, fmt_terms, Poly};

/// Normalized so that both the first and the last stored coefficient are
/// nonzero; zero is the empty coefficient list with `low = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    q: u8,
    low: i64,
    c: Vec<u8>,
}

impl LaurentPoly {
    pub fn zero(q: u8) -> Self {
        Self { q, low: 0, c: Vec::new() }
    }

    pub fn one(q: u8) -> Self {
        Self::monomial(0, 1, q)
    }

    /// `coeff * t^e`.
    pub fn monomial(e: i64, coeff: i64, q: u8) -> Self {
        Self::from_raw(e, vec![field::reduce(coeff, q)], q)
    }

    pub(crate) fn from_raw(low: i64, mut c: Vec<u8>, q: u8) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        let lead = c.iter().position(|&x| x != 0);
        match lead {
            None => Self::zero(q),
            Some(k) => {
                c.drain(..k);
                Self { q, low: low + k as i64, c }
            }
        }
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::from_raw(0, p.coeffs().to_vec(), p.modulus())
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.c == [1]
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent, `None` for zero.
    pub fn max_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.c.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> u8 {
        if e < self.low {
            return 0;
        }
        self.c.get((e - self.low) as usize).copied().unwrap_or(0)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u8)> + '_ {
        self.c.iter().enumerate().filter(|(_, &c)| c != 0).map(move |(i, &c)| (self.low + i as i64, c))
    }

    pub fn num_coeffs(&self) -> usize {
        self.c.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.c.len() == 1
    }

    fn dense_add(&self, rhs: &LaurentPoly, negate: bool) -> LaurentPoly {
        debug_assert_eq!(self.q, rhs.q);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { rhs.neg() } else { rhs.clone() };
        }
        let low = self.low.min(rhs.low);
        let high = self.max_exponent().unwrap().max(rhs.max_exponent().unwrap());
        let mut c = vec![0u8; (high - low + 1) as usize];
        for (i, &x) in self.c.iter().enumerate() {
            c[(self.low - low) as usize + i] = x;
        }
        let off = (rhs.low - low) as usize;
        for (i, &y) in rhs.c.iter().enumerate() {
            let slot = &mut c[off + i];
            *slot = if negate { field::sub(*slot, y, self.q) } else { field::add(*slot, y, self.q) };
        }
        LaurentPoly::from_raw(low, c, self.q)
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.dense_add(rhs, false)
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.dense_add(rhs, true)
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { q: self.q, low: self.low, c: self.c.iter().map(|&x| field::neg(x, self.q)).collect() }
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.q, rhs.q);
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(self.q);
        }
        LaurentPoly::from_raw(self.low + rhs.low, convolve(&self.c, &rhs.c, self.q), self.q)
    }

    pub fn scale(&self, s: u8) -> LaurentPoly {
        LaurentPoly::from_raw(self.low, self.c.iter().map(|&x| field::mul(x, s, self.q)).collect(), self.q)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { q: self.q, low: self.low + k, c: self.c.clone() }
    }

    pub fn shift_in_place(&mut self, k: i64) {
        if !self.is_zero() {
            self.low += k;
        }
    }

    /// Terms with exponent strictly below `bound`.
    pub fn truncate_below(&self, bound: i64) -> LaurentPoly {
        if self.is_zero() || bound <= self.low {
            return LaurentPoly::zero(self.q);
        }
        let keep = ((bound - self.low) as usize).min(self.c.len());
        LaurentPoly::from_raw(self.low, self.c[..keep].to_vec(), self.q)
    }

    /// Inverse, when this is a monomial.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        self.is_monomial().then(|| LaurentPoly::monomial(-self.low, i64::from(field::inv(self.c[0], self.q)), self.q))
    }

    /// Splits as `t^low * p(t)` with `p(0) != 0`.
    pub fn to_shifted_poly(&self) -> (i64, Poly) {
        (self.low, Poly::from_raw(self.c.clone(), self.q))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms())
    }
}
