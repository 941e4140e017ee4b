//! Prime fields `F_q` with `q <= 13`.

use std::fmt;

use crate::error::{Error, Result};

const SUPPORTED: [u8; 6] = [2, 3, 5, 7, 11, 13];

/// Validates a residue-field size.
pub fn check_modulus(q: u32) -> Result<u8> {
    match u8::try_from(q) {
        Ok(v) if SUPPORTED.contains(&v) => Ok(v),
        _ => Err(Error::UnsupportedField(q)),
    }
}

#[inline]
pub(crate) fn add(a: u8, b: u8, q: u8) -> u8 {
    ((u16::from(a) + u16::from(b)) % u16::from(q)) as u8
}

#[inline]
pub(crate) fn sub(a: u8, b: u8, q: u8) -> u8 {
    ((u16::from(a) + u16::from(q) - u16::from(b)) % u16::from(q)) as u8
}

#[inline]
pub(crate) fn mul(a: u8, b: u8, q: u8) -> u8 {
    ((u16::from(a) * u16::from(b)) % u16::from(q)) as u8
}

#[inline]
pub(crate) fn neg(a: u8, q: u8) -> u8 {
    if a == 0 {
        0
    } else {
        q - a
    }
}

/// Multiplicative inverse by Fermat; panics on zero.
pub(crate) fn inv(a: u8, q: u8) -> u8 {
    assert!(!a.is_multiple_of(q), "inverse of zero in F_{q}");
    let mut result = 1u8;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(result, base, q);
        }
        base = mul(base, base, q);
        e >>= 1;
    }
    result
}

pub(crate) fn reduce(v: i64, q: u8) -> u8 {
    v.rem_euclid(i64::from(q)) as u8
}

/// An element of `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fq {
    value: u8,
    q: u8,
}

impl Fq {
    pub fn new(value: i64, q: u8) -> Self {
        Self { value: reduce(value, q), q }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn modulus(self) -> u8 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// All elements in increasing order of representative.
    pub fn elements(q: u8) -> impl Iterator<Item = Fq> {
        (0..q).map(move |v| Fq { value: v, q })
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Fq { value: inv(self.value, self.q), q: self.q })
    }
}

impl std::ops::Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: add(self.value, rhs.value, self.q), q: self.q }
    }
}

impl std::ops::Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: sub(self.value, rhs.value, self.q), q: self.q }
    }
}

impl std::ops::Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        debug_assert_eq!(self.q, rhs.q);
        Fq { value: mul(self.value, rhs.value, self.q), q: self.q }
    }
}

impl std::ops::Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq { value: neg(self.value, self.q), q: self.q }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
