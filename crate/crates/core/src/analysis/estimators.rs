//! Empirical speed and Busemann drift, their theoretical values, and the
//! Weyl-orbit relation between them.

use serde::Serialize;

use crate::coxeter::{RootKind, RootSystem, WeylWord};
use crate::error::{Error, Result};
use crate::walks::{Dataset, FactorKernel, WalkRecord};
use crate::{FVector, QVector, Scalar};

/// Per-coordinate mean over trajectories with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
    pub trajectories: usize,
}

impl Estimate {
    pub fn vector(&self) -> FVector {
        FVector::new(self.mean.clone())
    }

    /// `max(k * se_i, floor)` per coordinate.
    pub fn tolerance(&self, k: f64, floor: f64) -> Vec<f64> {
        self.se.iter().map(|s| (k * s).max(floor)).collect()
    }
}

/// Default band: four standard errors, never tighter than 0.02.
pub const SE_MULTIPLIER: f64 = 4.0;
pub const TOLERANCE_FLOOR: f64 = 0.02;

pub(crate) fn ratio_coords(v: &[crate::Rational]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

/// Mean and standard error of per-trajectory samples of equal length.
pub fn mean_and_se(samples: &[Vec<f64>]) -> Result<Estimate> {
    let m = samples.len();
    let dim = samples.first().ok_or_else(|| Error::Domain("no samples".into()))?.len();
    let mut mean = vec![0.0; dim];
    for s in samples {
        for (a, x) in mean.iter_mut().zip(s) {
            *a += x;
        }
    }
    mean.iter_mut().for_each(|a| *a /= m as f64);
    let se = (0..dim)
        .map(|i| {
            if m < 2 {
                return 0.0;
            }
            let ss: f64 = samples.iter().map(|s| (s[i] - mean[i]).powi(2)).sum();
            (ss / (m - 1) as f64 / m as f64).sqrt()
        })
        .collect();
    Ok(Estimate { mean, se, trajectories: m })
}

fn final_ratio(dataset: &Dataset, pick: impl Fn(&WalkRecord) -> &[crate::Rational]) -> Result<Estimate> {
    let finals = dataset.final_walk_records()?;
    let samples: Vec<Vec<f64>> = finals
        .iter()
        .filter(|r| r.n > 0)
        .map(|r| ratio_coords(pick(r)).into_iter().map(|x| x / r.n as f64).collect())
        .collect();
    if samples.is_empty() {
        return Err(Error::Domain("dataset has no trajectory with positive length".into()));
    }
    mean_and_se(&samples)
}

/// `d(o, X_N) / N` averaged over trajectories; dominant because every
/// sample is.
pub fn empirical_speed(dataset: &Dataset) -> Result<Estimate> {
    final_ratio(dataset, |r| &r.lam)
}

/// `h(X_N) / N` averaged over trajectories.
pub fn empirical_busemann_drift(dataset: &Dataset) -> Result<Estimate> {
    final_ratio(dataset, |r| &r.h)
}

/// Exact drift `mu = sum p-bar(0, nu) nu` of a factor walk and the rate of
/// escape `lambda`, the dominant element of its Weyl orbit.
pub fn theoretical_drift(factor: &FactorKernel) -> Result<(QVector, QVector)> {
    let rs = RootSystem::new(RootKind::A, factor.rank())?;
    let mu = factor.drift();
    let lambda = rs.dominant_representative(&mu).0;
    Ok((mu, lambda))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitCheck {
    pub pass: bool,
    #[serde(serialize_with = "serialize_word")]
    pub witness: WeylWord,
    pub distance: f64,
}

fn serialize_word<S: serde::Serializer>(w: &WeylWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// Finds `w` minimizing `|w lambda - mu|` (first in shortlex order among
/// ties) and passes iff that distance is at most `tol`.
pub fn check_orbit_relation(rs: &RootSystem, lambda: &FVector, mu: &FVector, tol: f64) -> OrbitCheck {
    let mut best: Option<(f64, &WeylWord)> = None;
    for w in rs.weyl_elements() {
        let d = rs.distance_sq(&w.act(lambda), mu).max(0.0).sqrt();
        if best.is_none_or(|(b, _)| d < b - 1e-12) {
            best = Some((d, w));
        }
    }
    let (distance, w) = best.expect("W0 is nonempty");
    OrbitCheck { pass: distance <= tol, witness: w.clone(), distance }
}
