//! Root systems, finite Weyl groups and the Euclidean apartment model.

mod geometry;
mod root_system;
mod vector;

pub use geometry::{SeparationConstant, Sector, Wall};
pub use root_system::{IntMatrix, RootKind, RootSystem, RootSystemSummary, WeylWord};
pub use vector::LatticeVector;
