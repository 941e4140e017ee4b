//! Finite-sample checkers for the two regularity criteria: Busemann drift
//! along a Weyl orbit, and vector distance growth, both together with
//! sublinear step sizes.

use std::collections::BTreeMap;

use serde::Serialize;

use super::estimators::{
    check_orbit_relation, empirical_busemann_drift, empirical_speed, mean_and_se, ratio_coords, Estimate,
    OrbitCheck, SE_MULTIPLIER, TOLERANCE_FLOOR,
};
use crate::coxeter::{RootKind, RootSystem};
use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::walks::{Dataset, WalkRecord};
use crate::{FVector, QVector, Rational, Scalar};

pub const REPORT_SCHEMA: &str = "weylwalk.report.v1";

/// Residual `|mean d(o, X_n) / n - lambda|_inf` of the trajectory mean, and
/// the worst single trajectory, at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub n: u64,
    pub residual: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepProbe {
    /// Number of consecutive checkpoint pairs `(n, n + 1)` examined.
    pub pairs: usize,
    /// Largest lower bound on `d(X_n, X_{n+1})` from the recorded
    /// observables (both are 1-Lipschitz).
    pub max_step_lower_bound: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub pass: bool,
    pub deviation: Vec<f64>,
    pub tolerance: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub schema: &'static str,
    pub kind: String,
    pub rank: usize,
    pub trajectories: usize,
    pub steps: u64,
    pub lambda_hat: Vec<f64>,
    pub lambda_se: Vec<f64>,
    pub mu_hat: Vec<f64>,
    pub mu_se: Vec<f64>,
    /// Reference rate of escape, exact.
    pub lambda_ref: Vec<String>,
    /// `theory` when the dataset header carries the factor-walk drift,
    /// otherwise `empirical`.
    pub lambda_ref_source: String,
    pub mu_theory: Option<Vec<String>>,
    pub orbit_witness_word: String,
    pub orbit: OrbitCheck,
    pub residuals: Vec<Residual>,
    pub step_probe: StepProbe,
    /// Busemann drift lies on the Weyl orbit of the reference speed.
    pub condition_busemann: ConditionCheck,
    /// Vector distance grows like `n` times the reference speed.
    pub condition_distance: ConditionCheck,
    pub conditions_agree: bool,
    pub pass: bool,
}

fn parse_vector(s: &str) -> Result<QVector> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).ok_or_else(|| Error::Parse(format!("bad rational {t:?}"))))
        .collect::<Result<Vec<_>>>()
        .map(QVector::new)
}

pub fn format_vector(v: &QVector) -> String {
    v.coords().iter().map(Rational::to_string).collect::<Vec<_>>().join(",")
}

/// `(mu, lambda)` stored in a dataset header by the walk writers.
pub fn theory_from_meta(dataset: &Dataset) -> Result<Option<(QVector, QVector)>> {
    match (dataset.meta_value("theory_mu"), dataset.meta_value("theory_lambda")) {
        (Some(m), Some(l)) => Ok(Some((parse_vector(m)?, parse_vector(l)?))),
        _ => Ok(None),
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn by_trajectory(records: &[WalkRecord]) -> BTreeMap<u64, Vec<&WalkRecord>> {
    let mut map: BTreeMap<u64, Vec<&WalkRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.traj).or_default().push(r);
    }
    for v in map.values_mut() {
        v.sort_by_key(|r| r.n);
    }
    map
}

/// Residuals of `d(o, X_n) / n` against `lambda` at every checkpoint `n > 0`.
pub fn regularity_residuals(dataset: &Dataset, lambda: &FVector) -> Result<Vec<Residual>> {
    let mut at: BTreeMap<u64, Vec<Vec<f64>>> = BTreeMap::new();
    for r in dataset.walk_records()? {
        if r.n > 0 {
            let v = ratio_coords(&r.lam).into_iter().zip(lambda.coords()).map(|(x, l)| x / r.n as f64 - l).collect();
            at.entry(r.n).or_default().push(v);
        }
    }
    at.into_iter()
        .map(|(n, devs)| {
            let mean = mean_and_se(&devs)?.mean;
            let max_residual = devs.iter().map(|d| inf_norm(d)).fold(0.0, f64::max);
            Ok(Residual { n, residual: inf_norm(&mean), max_residual })
        })
        .collect()
}

/// Largest admissible single-step distance: the header's `step_bound_sq`
/// when present, else the nearest-neighbour bound `max |omega_i|`.
pub fn step_bound(dataset: &Dataset, rs: &RootSystem) -> Result<f64> {
    if let Some(s) = dataset.meta_value("step_bound_sq") {
        let q = parse_rational(s).ok_or_else(|| Error::Parse(format!("bad step_bound_sq {s:?}")))?;
        return Ok(Scalar::to_f64(&q).sqrt());
    }
    Ok((1..=rs.rank())
        .map(|i| Scalar::to_f64(&rs.norm_sq(&QVector::fundamental(rs.rank(), i))).sqrt())
        .fold(0.0, f64::max))
}

/// Checks every recorded pair `(n, n + 1)` against the step bound. With no
/// pairs recorded the step sizes are not certified and the probe fails.
pub fn step_probe(dataset: &Dataset, rs: &RootSystem) -> Result<StepProbe> {
    let bound = step_bound(dataset, rs)?;
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    for recs in by_trajectory(dataset.walk_records()?).values() {
        for w in recs.windows(2) {
            if w[1].n != w[0].n + 1 {
                continue;
            }
            pairs += 1;
            let dh: Vec<Rational> = w[1].h.iter().zip(&w[0].h).map(|(a, b)| a - b).collect();
            let dh = Scalar::to_f64(&rs.norm_sq(&QVector::new(dh))).sqrt();
            let len = |v: &[Rational]| Scalar::to_f64(&rs.norm_sq(&QVector::new(v.to_vec()))).sqrt();
            let dd = (len(&w[1].lam) - len(&w[0].lam)).abs();
            worst = worst.max(dh).max(dd);
        }
    }
    Ok(StepProbe { pairs, max_step_lower_bound: worst, bound, pass: pairs > 0 && worst <= bound + 1e-9 })
}

fn condition(est: &Estimate, target: &FVector, steps_ok: bool) -> ConditionCheck {
    let deviation: Vec<f64> = est.mean.iter().zip(target.coords()).map(|(a, b)| (a - b).abs()).collect();
    let tolerance = est.tolerance(SE_MULTIPLIER, TOLERANCE_FLOOR);
    let within = deviation.iter().zip(&tolerance).all(|(d, t)| d <= t);
    ConditionCheck { pass: steps_ok && within, deviation, tolerance }
}

/// Runs both checkers on a walk dataset. The reference `(mu, lambda)` is
/// taken from `reference`, else from the dataset header, else the
/// empirical speed stands in for `lambda`.
pub fn regularity_report(dataset: &Dataset, reference: Option<(QVector, QVector)>) -> Result<RegularityReport> {
    let rs = RootSystem::new(RootKind::A, dataset.rank)?;
    let speed = empirical_speed(dataset)?;
    let drift = empirical_busemann_drift(dataset)?;
    let reference = match reference {
        Some(r) => Some(r),
        None => theory_from_meta(dataset)?,
    };
    let (lambda_ref, mu_theory, source) = match reference {
        Some((mu, lam)) => (lam, Some(mu), "theory"),
        None => (QVector::new(speed.mean.iter().map(|x| approx_rational(*x)).collect()), None, "empirical"),
    };
    let lam_f = lambda_ref.to_f64();
    let probe = step_probe(dataset, &rs)?;
    let orbit_tol = inf_norm(&drift.tolerance(SE_MULTIPLIER, TOLERANCE_FLOOR)) * (rs.rank() as f64).sqrt();
    let orbit = check_orbit_relation(&rs, &lam_f, &drift.vector(), orbit_tol);
    let busemann = condition(&drift, &orbit.witness.act(&lam_f), probe.pass);
    let distance = condition(&speed, &lam_f, probe.pass);
    let steps = dataset.final_walk_records()?.iter().map(|r| r.n).max().unwrap_or(0);
    Ok(RegularityReport {
        schema: REPORT_SCHEMA,
        kind: dataset.kind.to_string(),
        rank: dataset.rank,
        trajectories: speed.trajectories,
        steps,
        lambda_hat: speed.mean.clone(),
        lambda_se: speed.se.clone(),
        mu_hat: drift.mean.clone(),
        mu_se: drift.se.clone(),
        lambda_ref: lambda_ref.coords().iter().map(Rational::to_string).collect(),
        lambda_ref_source: source.to_string(),
        mu_theory: mu_theory.map(|m| m.coords().iter().map(Rational::to_string).collect()),
        orbit_witness_word: orbit.witness.to_string(),
        residuals: regularity_residuals(dataset, &lam_f)?,
        step_probe: probe,
        conditions_agree: busemann.pass == distance.pass,
        pass: busemann.pass && distance.pass,
        condition_busemann: busemann,
        condition_distance: distance,
        orbit,
    })
}

/// Nearest rational with denominator at most 10^6; only used to carry an
/// empirical reference through the exact-typed report fields.
fn approx_rational(x: f64) -> Rational {
    const DEN: i64 = 1_000_000;
    Rational::new((x * DEN as f64).round() as i64, DEN)
}

/// Ratio of the summed per-coordinate variances of `d(o, X_n) / n` across
/// trajectories at `n2` and at `n1`. For `n2 = 2 n1` the central limit
/// scaling predicts about one half.
pub fn clt_variance_ratio(dataset: &Dataset, n1: u64, n2: u64) -> Result<f64> {
    let var_at = |n: u64| -> Result<f64> {
        let samples: Vec<Vec<f64>> = dataset
            .walk_records()?
            .iter()
            .filter(|r| r.n == n)
            .map(|r| ratio_coords(&r.lam).into_iter().map(|x| x / n as f64).collect())
            .collect();
        if samples.len() < 2 || n == 0 {
            return Err(Error::Domain(format!("need two trajectories at checkpoint {n}")));
        }
        let e = mean_and_se(&samples)?;
        Ok(e.se.iter().map(|s| s * s * samples.len() as f64).sum())
    };
    let v1 = var_at(n1)?;
    if v1 == 0.0 {
        return Err(Error::Domain("zero variance at the first checkpoint".into()));
    }
    Ok(var_at(n2)? / v1)
}
