//! Seeded simulation of walks on the building, on its Busemann factor and
//! of the reduced chain.

pub mod dataset;
pub mod kernel;
pub mod sampler;
pub mod simulate;

pub use dataset::{Dataset, ReducedRecord, Records, WalkKind, WalkRecord, CSV_MAGIC};
pub use kernel::{count_c, ClassTable, FactorKernel, NeighborClass, SemiIsotropicKernel};
pub use sampler::{trajectory_rng, ExactSampler};
pub use simulate::{
    factor_projection_returns, sample_trajectories, step_group_walk, step_reduced_chain, step_semi_isotropic,
    tree_pi_statistics, CheckpointSchedule, GroupWalkConfig, IsoSampler, ReducedChainConfig, ReducedState, RunParams,
    TreePiCounts, WalkSpec,
};
