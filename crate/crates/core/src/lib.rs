//! Random walks on affine buildings of type `A~_r`: exact root-system
//! geometry, `F_q(t)` linear algebra, building combinatorics, walk samplers
//! and the estimators that compare simulations against limit theorems.

pub mod analysis;
pub mod building;
pub mod coxeter;
pub mod error;
pub mod padic;
pub mod scalar;
pub mod walks;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};

/// Exact rational point of the Euclidean model.
pub type QVector = coxeter::LatticeVector<Rational>;
/// Floating-point point of the Euclidean model, for empirical estimates.
pub type FVector = coxeter::LatticeVector<f64>;
