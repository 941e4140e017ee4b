//! Linear algebra over `F = F_q(t)` inside `F_q((t))`: valuations, Cartan and
//! Iwasawa coordinates.

pub mod decompose;
pub mod expr;
pub mod field;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod random;
pub mod rational;

pub use decompose::{
    cartan_decomposition, iwasawa_decomposition, iwasawa_valuations, iwasawa_valuations_by_minors,
    smith_valuations, smith_valuations_by_minors, CartanDecomposition, IwasawaDecomposition,
};
pub use expr::parse_entry;
pub use field::{check_modulus, Fq};
pub use laurent::LaurentPoly;
pub use matrix::{Entry, LaurentMatrix, Matrix, RfMatrix};
pub use poly::Poly;
pub use rational::RationalFunction;
