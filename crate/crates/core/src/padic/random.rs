//! Random elements of `F_q(t)`, `GL_n(o)` and the unipotent group `U`, for
//! fuzzing and for generator sets.

use rand::Rng;

use super::matrix::RfMatrix;
use super::poly::Poly;
use super::rational::RationalFunction;

fn random_poly<R: Rng + ?Sized>(rng: &mut R, q: u8, max_deg: usize) -> Poly {
    let c: Vec<i64> = (0..=max_deg).map(|_| i64::from(rng.gen_range(0..q))).collect();
    Poly::from_coeffs(&c, q)
}

/// Random element of the valuation ring `o`: a polynomial, sometimes divided
/// by a polynomial with nonzero constant term.
pub fn random_integral<R: Rng + ?Sized>(rng: &mut R, q: u8) -> RationalFunction {
    let num = random_poly(rng, q, 2);
    if rng.gen_bool(0.3) {
        let mut den = random_poly(rng, q, 1);
        if den.coeff(0) == 0 {
            den = den.add(&Poly::one(q));
        }
        RationalFunction::new(num, den).expect("nonzero denominator")
    } else {
        RationalFunction::from_poly(num)
    }
}

/// Random element of `F`, with pole order at most `max_pole` at `t = 0`.
pub fn random_field_element<R: Rng + ?Sized>(rng: &mut R, q: u8, max_pole: i64) -> RationalFunction {
    let shift = rng.gen_range(-max_pole..=0);
    random_integral(rng, q).mul(&RationalFunction::t_power(shift, q))
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, q: u8) -> RationalFunction {
    loop {
        let u = random_integral(rng, q);
        if u.is_unit() {
            return u;
        }
    }
}

/// Random element of `GL_n(o)`: permuted diagonal of units times a string of
/// elementary operations with coefficients in `o`.
pub fn random_gl_o<R: Rng + ?Sized>(rng: &mut R, n: usize, q: u8) -> RfMatrix {
    let mut m = RfMatrix::zeros(n, q);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    for (i, &p) in perm.iter().enumerate() {
        m.set(i, p, random_unit(rng, q));
    }
    for _ in 0..2 * n * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            let c = random_integral(rng, q);
            if rng.gen_bool(0.5) {
                m.add_row_multiple(a, b, &c);
            } else {
                m.add_col_multiple(a, b, &c);
            }
        }
    }
    m
}

/// Random upper unitriangular matrix over `F`.
pub fn random_unipotent<R: Rng + ?Sized>(rng: &mut R, n: usize, q: u8) -> RfMatrix {
    let mut m = RfMatrix::identity(n, q);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, random_field_element(rng, q, 3));
        }
    }
    m
}
