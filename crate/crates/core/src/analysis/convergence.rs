//! Statistics of the reduced chain and of the entry-level process in the
//! tree.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::parse_rational;
use crate::walks::{Dataset, TreePiCounts, WalkKind};
use crate::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndConvergenceReport {
    pub runs: usize,
    pub hits: u64,
    pub mean_z_at_hits: f64,
    pub se_z_at_hits: f64,
    /// `(1 - 1/q) P[+1]` from the header, when available.
    pub theoretical_e: Option<f64>,
    pub max_y: i64,
    pub threshold: i64,
    pub fraction_reaching_threshold: f64,
    /// Checkpoint records with `y < xbar`; always zero for valid data.
    pub order_violations: usize,
    pub final_y: Vec<i64>,
}

pub fn end_convergence_stats(dataset: &Dataset, threshold: i64) -> Result<EndConvergenceReport> {
    if dataset.kind != WalkKind::Reduced {
        return Err(Error::InvalidConfig(format!("expected a reduced-chain dataset, got {}", dataset.kind)));
    }
    let finals = dataset.final_reduced_records()?;
    if finals.is_empty() {
        return Err(Error::Domain("empty dataset".into()));
    }
    let (mut hits, mut up, mut down) = (0u64, 0u64, 0u64);
    for r in &finals {
        hits += r.hits;
        up += r.z_up;
        down += r.z_down;
    }
    let (mean, se) = if hits == 0 {
        (0.0, 0.0)
    } else {
        let h = hits as f64;
        let mean = (up as f64 - down as f64) / h;
        let second = (up + down) as f64 / h;
        (mean, ((second - mean * mean).max(0.0) / h).sqrt())
    };
    let theoretical_e = match (dataset.meta_value("q"), dataset.meta_value("p_up")) {
        (Some(q), Some(p)) => {
            let q: i64 = q.parse().map_err(|_| Error::Parse(format!("bad q {q:?}")))?;
            let p = parse_rational(p).ok_or_else(|| Error::Parse(format!("bad p_up {p:?}")))?;
            Some(Scalar::to_f64(&((Rational::from_integer(1) - Rational::new(1, q)) * p)))
        }
        _ => None,
    };
    let final_y: Vec<i64> = finals.iter().map(|r| r.y).collect();
    let reaching = final_y.iter().filter(|&&y| y >= threshold).count();
    Ok(EndConvergenceReport {
        runs: finals.len(),
        hits,
        mean_z_at_hits: mean,
        se_z_at_hits: se,
        theoretical_e,
        max_y: dataset.reduced_records()?.iter().map(|r| r.y).max().unwrap_or(0),
        threshold,
        fraction_reaching_threshold: reaching as f64 / finals.len() as f64,
        order_violations: dataset.reduced_records()?.iter().filter(|r| r.y < r.xbar).count(),
        final_y,
    })
}

/// Verdict on the joint `(h, pi)` increment law observed in the tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeClaimsReport {
    pub hit_steps: u64,
    /// Off the hitting set `pi` never moves.
    pub off_hit_moves: u64,
    /// On the hitting set an up-step of `h` drags `pi` up.
    pub up_mismatches: u64,
    pub stay_mismatches: u64,
    /// Down-steps of `h` from the hitting set whose `pi` leaves `{-1, 0}`.
    pub down_out_of_range: u64,
    pub down_steps: u64,
    pub down_catch_fraction: f64,
    pub expected_fraction: f64,
    pub pi_below_h: u64,
    pub pass: bool,
}

/// Compares counts against the claims, with `tol` on the down-catch
/// fraction.
pub fn check_tree_claims(counts: &TreePiCounts, q: u32, tol: f64) -> TreeClaimsReport {
    let mut off_hit_moves = 0;
    let (mut up_bad, mut stay_bad, mut down_bad) = (0, 0, 0);
    for (&(at_hit, dh, dpi), &c) in &counts.joint {
        if !at_hit {
            if dpi != 0 {
                off_hit_moves += c;
            }
            continue;
        }
        match dh {
            1 if dpi != 1 => up_bad += c,
            0 if dpi != 0 => stay_bad += c,
            -1 if dpi != -1 && dpi != 0 => down_bad += c,
            _ => {}
        }
    }
    let caught = counts.count(true, -1, -1);
    let down_steps = caught + counts.count(true, -1, 0);
    let frac = if down_steps == 0 { 0.0 } else { caught as f64 / down_steps as f64 };
    let expected = 1.0 / f64::from(q);
    TreeClaimsReport {
        hit_steps: counts.hit_steps,
        off_hit_moves,
        up_mismatches: up_bad,
        stay_mismatches: stay_bad,
        down_out_of_range: down_bad,
        down_steps,
        down_catch_fraction: frac,
        expected_fraction: expected,
        pi_below_h: counts.violations_pi_below_h,
        pass: off_hit_moves + up_bad + stay_bad + down_bad + counts.violations_pi_below_h == 0
            && down_steps > 0
            && (frac - expected).abs() <= tol,
    }
}
