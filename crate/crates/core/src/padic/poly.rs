//! Dense univariate polynomials over `F_q`.

use std::fmt;

use super::field;

/// Polynomial in `t` over `F_q`; coefficients lowest degree first, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    q: u8,
    c: Vec<u8>,
}

impl Poly {
    pub fn zero(q: u8) -> Self {
        Self { q, c: Vec::new() }
    }

    pub fn one(q: u8) -> Self {
        Self::constant(1, q)
    }

    pub fn constant(v: i64, q: u8) -> Self {
        Self::from_raw(vec![field::reduce(v, q)], q)
    }

    /// `coeff * t^deg`.
    pub fn monomial(deg: usize, coeff: i64, q: u8) -> Self {
        let mut c = vec![0; deg + 1];
        c[deg] = field::reduce(coeff, q);
        Self::from_raw(c, q)
    }

    pub fn from_coeffs(coeffs: &[i64], q: u8) -> Self {
        Self::from_raw(coeffs.iter().map(|&v| field::reduce(v, q)).collect(), q)
    }

    pub(crate) fn from_raw(mut c: Vec<u8>, q: u8) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { q, c }
    }

    pub fn modulus(&self) -> u8 {
        self.q
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> u8 {
        self.c.last().copied().unwrap_or(0)
    }

    /// `t`-adic valuation: index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    /// Is this `c * t^k` for some constant `c`?
    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.c[..self.c.len() - 1].iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| field::add(self.coeff(i), rhs.coeff(i), self.q)).collect();
        Poly::from_raw(c, self.q)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n).map(|i| field::sub(self.coeff(i), rhs.coeff(i), self.q)).collect();
        Poly::from_raw(c, self.q)
    }

    pub fn neg(&self) -> Poly {
        Poly { q: self.q, c: self.c.iter().map(|&x| field::neg(x, self.q)).collect() }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.q, rhs.q);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.q);
        }
        Poly::from_raw(convolve(&self.c, &rhs.c, self.q), self.q)
    }

    pub fn scale(&self, s: u8) -> Poly {
        Poly::from_raw(self.c.iter().map(|&x| field::mul(x, s, self.q)).collect(), self.q)
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { q: self.q, c }
    }

    /// Divide by `t^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.c.iter().take(k).all(|&x| x == 0));
        Poly { q: self.q, c: self.c.get(k..).map(<[u8]>::to_vec).unwrap_or_default() }
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let q = self.q;
        if self.c.len() < d.c.len() {
            return (Poly::zero(q), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let lead_inv = field::inv(d.leading(), q);
        let mut quot = vec![0u8; r.len() - dl + 1];
        for k in (0..quot.len()).rev() {
            let coef = field::mul(r[k + dl - 1], lead_inv, q);
            if coef == 0 {
                continue;
            }
            quot[k] = coef;
            for (j, &dj) in d.c.iter().enumerate() {
                r[k + j] = field::sub(r[k + j], field::mul(coef, dj, q), q);
            }
        }
        (Poly::from_raw(quot, q), Poly::from_raw(r, q))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(field::inv(self.leading(), self.q))
    }
}

pub(crate) fn convolve(a: &[u8], b: &[u8], q: u8) -> Vec<u8> {
    // Accumulate in u32 and reduce once; 13*13*len stays far below u32::MAX
    // for any length we meet.
    let mut acc = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = u32::from(x);
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += x * u32::from(y);
        }
    }
    let q = u32::from(q);
    acc.into_iter().map(|v| (v % q) as u8).collect()
}

pub(crate) fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (i64, u8)>) -> fmt::Result {
    let mut first = true;
    // Highest degree first reads naturally.
    let mut terms: Vec<(i64, u8)> = terms.filter(|&(_, c)| c != 0).collect();
    terms.reverse();
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (e, c) in terms {
        if !first {
            f.write_str("+")?;
        }
        first = false;
        let body = match e {
            0 => String::new(),
            1 => "t".to_string(),
            e if e < 0 => format!("t^({e})"),
            e => format!("t^{e}"),
        };
        match (c, body.is_empty()) {
            (c, true) => write!(f, "{c}")?,
            (1, false) => f.write_str(&body)?,
            (c, false) => write!(f, "{c}*{body}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.c.iter().enumerate().map(|(i, &c)| (i as i64, c)))
    }
}
