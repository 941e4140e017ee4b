//! Conversions between `GL_n`-level exponent vectors and coweight
//! coordinates of type `A_{n-1}`.

use crate::error::{Error, Result};
use crate::{QVector, Rational};

/// `(mu_1, ..., mu_n) -> (mu_1 - mu_2, ..., mu_{n-1} - mu_n)`; the all-ones
/// direction is forgotten.
pub fn gl_to_coweight(mu: &[i64]) -> QVector {
    QVector::new(mu.windows(2).map(|w| Rational::from_integer(w[0] - w[1])).collect())
}

/// Inverse of [`gl_to_coweight`] with last entry fixed to zero.
pub fn coweight_to_gl(lambda: &QVector) -> Result<Vec<i64>> {
    let ints = lambda.to_ints().ok_or_else(|| Error::NotACoweight(lambda.to_string()))?;
    let n = ints.len() + 1;
    let mut out = vec![0i64; n];
    for i in (0..n - 1).rev() {
        out[i] = out[i + 1] + ints[i];
    }
    Ok(out)
}

/// `-w_0` in type `A_r`: reverses coweight coordinates.
pub fn opposition(lambda: &QVector) -> QVector {
    QVector::new(lambda.coords().iter().rev().cloned().collect())
}
