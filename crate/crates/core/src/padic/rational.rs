//! The function field `F_q(t)`, viewed inside `F_q((t))`.

use std::fmt;

use super::field;
use super::laurent::LaurentPoly;
use super::poly::Poly;

/// Reduced fraction `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn zero(q: u8) -> Self {
        Self { num: Poly::zero(q), den: Poly::one(q) }
    }

    pub fn one(q: u8) -> Self {
        Self { num: Poly::one(q), den: Poly::one(q) }
    }

    pub fn constant(v: i64, q: u8) -> Self {
        Self::from_poly(Poly::constant(v, q))
    }

    /// `t^e`, for any integer `e`.
    pub fn t_power(e: i64, q: u8) -> Self {
        Self::from_laurent(&LaurentPoly::monomial(e, 1, q))
    }

    pub fn from_poly(p: Poly) -> Self {
        let q = p.modulus();
        Self { num: p, den: Poly::one(q) }
    }

    pub fn from_laurent(l: &LaurentPoly) -> Self {
        let q = l.modulus();
        if l.is_zero() {
            return Self::zero(q);
        }
        let (low, p) = l.to_shifted_poly();
        if low >= 0 {
            Self::from_poly(p.shift_up(low as usize))
        } else {
            // p(0) != 0, so p and t^{-low} are already coprime.
            Self { num: p, den: Poly::monomial((-low) as usize, 1, q) }
        }
    }

    /// Builds `num / den` in lowest terms; `None` if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        let q = num.modulus();
        if num.is_zero() {
            return Self::zero(q);
        }
        if den.is_one() {
            return Self { num, den };
        }
        if den.is_monomial() {
            let lead_inv = field::inv(den.leading(), q);
            let k = den.degree().unwrap();
            let cancel = num.valuation().unwrap().min(k);
            return Self {
                num: num.scale(lead_inv).shift_down(cancel),
                den: Poly::monomial(k - cancel, 1, q),
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.divrem(&g).0, den.divrem(&g).0) };
        let lead = d.leading();
        if lead != 1 {
            let li = field::inv(lead, q);
            n = n.scale(li);
            d = d.scale(li);
        }
        Self { num: n, den: d }
    }

    pub fn modulus(&self) -> u8 {
        self.num.modulus()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `t`-adic valuation; `None` encodes `+infinity` for zero.
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    /// Nonzero with valuation zero, i.e. a unit of the valuation ring `o`.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Lies in the valuation ring `o` (valuation `>= 0`, zero included).
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Self::normalized(self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)), self.den.mul(&rhs.den))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.modulus());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self { num: self.num.mul(&rhs.num), den: self.den.clone() };
        }
        Self::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    /// Splits off the leading power: `self = t^v * u` with `u` a unit of `o`.
    /// Returns `(v, u)`; `None` for zero.
    pub fn split_valuation(&self) -> Option<(i64, Self)> {
        let v = self.valuation()?;
        Some((v, self.mul(&Self::t_power(-v, self.modulus()))))
    }

    /// The terms of the Laurent expansion at `t = 0` with exponent strictly
    /// below `bound` (a finite sum, since the expansion is bounded below).
    pub fn expansion_below(&self, bound: i64) -> LaurentPoly {
        let q = self.modulus();
        let Some(v) = self.valuation() else {
            return LaurentPoly::zero(q);
        };
        if v >= bound {
            return LaurentPoly::zero(q);
        }
        let vn = self.num.valuation().unwrap();
        let vd = self.den.valuation().unwrap();
        let n = self.num.shift_down(vn);
        let d = self.den.shift_down(vd);
        let terms = (bound - v) as usize;
        let series = power_series_quotient(&n, &d, terms);
        LaurentPoly::from_raw(v, series, q)
    }

    /// The exact Laurent polynomial, when the denominator is a power of `t`.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if !self.den.is_monomial() {
            return None;
        }
        let k = self.den.degree().unwrap() as i64;
        Some(LaurentPoly::from_poly(&self.num).shift(-k))
    }
}

/// First `terms` coefficients of `n / d` as a power series; needs `d(0) != 0`.
fn power_series_quotient(n: &Poly, d: &Poly, terms: usize) -> Vec<u8> {
    let q = n.modulus();
    let d0_inv = field::inv(d.coeff(0), q);
    let dc = d.coeffs();
    let mut s = vec![0u8; terms];
    for k in 0..terms {
        let mut acc = n.coeff(k);
        for j in 1..dc.len().min(k + 1) {
            acc = field::sub(acc, field::mul(dc[j], s[k - j], q), q);
        }
        s[k] = field::mul(acc, d0_inv, q);
    }
    s
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64], q: u8) -> Poly {
        Poly::from_coeffs(c, q)
    }

    #[test]
    fn valuations() {
        let q = 2;
        assert_eq!(RationalFunction::t_power(2, q).valuation(), Some(2));
        assert_eq!(RationalFunction::t_power(-1, q).valuation(), Some(-1));
        let f = RationalFunction::new(p(&[0, 1, 1], q), p(&[0, 0, 0, 1], q)).unwrap();
        assert_eq!(f.valuation(), Some(-2));
        assert_eq!(RationalFunction::zero(q).valuation(), None);
    }

    #[test]
    fn reduced_form_is_canonical() {
        let q = 3;
        let a = RationalFunction::new(p(&[1, 1], q).mul(&p(&[2, 1], q)), p(&[1, 1], q).scale(2)).unwrap();
        let b = RationalFunction::new(p(&[2, 1], q).scale(2), p(&[1], q)).unwrap();
        assert_eq!(a, b);
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn field_operations() {
        let q = 5;
        let f = RationalFunction::new(p(&[1, 2, 3], q), p(&[4, 0, 1], q)).unwrap();
        let g = RationalFunction::new(p(&[0, 1], q), p(&[1, 1], q)).unwrap();
        assert!(f.mul(&f.inv().unwrap()).is_one());
        assert_eq!(f.add(&g).sub(&g), f);
        assert_eq!(f.mul(&g).div(&g).unwrap(), f);
    }

    #[test]
    fn expansion_of_geometric_series() {
        // 1/(1 - t) = 1 + t + t^2 + ...
        let q = 7;
        let f = RationalFunction::new(p(&[1], q), p(&[1, -1], q)).unwrap();
        let e = f.expansion_below(4);
        assert_eq!(e.terms().collect::<Vec<_>>(), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        let g = f.mul(&RationalFunction::t_power(-2, q));
        assert_eq!(g.expansion_below(0).terms().collect::<Vec<_>>(), vec![(-2, 1), (-1, 1)]);
    }
}
