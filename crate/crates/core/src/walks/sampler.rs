//! Exact sampling from finite laws with rational weights, and per-trajectory
//! random streams.

use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Rational;

/// Deterministic random stream for trajectory `traj` under `base_seed`.
/// ChaCha's stream parameter keeps trajectories independent without any
/// shared state, so any subset can be regenerated in isolation.
pub fn trajectory_rng(base_seed: u64, traj: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(traj);
    rng
}

/// Inverse-CDF sampler on integer weights with a common denominator, so a
/// draw is one uniform integer and no floating point is involved.
#[derive(Clone, Debug)]
pub struct ExactSampler {
    cumulative: Vec<u64>,
    total: u64,
}

impl ExactSampler {
    pub fn new(weights: &[Rational]) -> Result<Self> {
        let mut denom: i64 = 1;
        for w in weights {
            if *w < Rational::from_integer(0) {
                return Err(Error::InvalidConfig(format!("negative weight {w}")));
            }
            denom = denom.lcm(w.denom());
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc: u64 = 0;
        for w in weights {
            let scaled = (w * Rational::from_integer(denom)).to_integer();
            acc = acc
                .checked_add(u64::try_from(scaled).expect("nonnegative"))
                .ok_or_else(|| Error::InvalidConfig("weights too fine to sample exactly".into()))?;
            cumulative.push(acc);
        }
        if acc == 0 {
            return Err(Error::InvalidConfig("all weights are zero".into()));
        }
        Ok(Self { cumulative, total: acc })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen_range(0..self.total);
        self.cumulative.partition_point(|&c| c <= u)
    }
}
