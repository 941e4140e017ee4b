//! Walk samplers: right random walks on the group, semi-isotropic walks on
//! vertices, the reduced chain, and the trajectory harness.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::dataset::{Dataset, ReducedRecord, Records, WalkKind, WalkRecord};
use super::kernel::{ClassTable, FactorKernel, SemiIsotropicKernel};
use super::sampler::{trajectory_rng, ExactSampler};
use crate::building::{tree_entry_level_closed_form, tree_level, BuildingParams, Subspace, Vertex};
use crate::error::{Error, Result};
use crate::padic::{check_modulus, RfMatrix};
use crate::scalar::parse_rational;
use crate::Rational;

/// Which step indices get recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckpointSchedule {
    /// Record every `every` steps (0: only the endpoints).
    pub every: u64,
    /// Also record `n + 1` after each checkpoint `n`, so consecutive pairs
    /// are available to the step-size probe.
    pub pairs: bool,
}

impl CheckpointSchedule {
    pub fn new(every: u64, pairs: bool) -> Self {
        Self { every, pairs }
    }

    pub fn points(&self, steps: u64) -> Vec<u64> {
        let mut pts = vec![0, steps];
        if self.every > 0 {
            pts.extend((1..).map(|k| k * self.every).take_while(|&n| n < steps));
        }
        if self.pairs {
            let extra: Vec<u64> = pts.iter().filter(|&&n| n < steps).map(|n| n + 1).collect();
            pts.extend(extra);
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }
}

/// Shared run parameters of [`sample_trajectories`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunParams {
    pub steps: u64,
    pub trajectories: u64,
    pub base_seed: u64,
    /// Global index of the first trajectory; seeds depend on the global
    /// index, so disjoint ranges merge into one consistent dataset.
    pub first_traj: u64,
    pub schedule: CheckpointSchedule,
}

/// Finitely supported measure on `G` for the right random walk
/// `X_n = g_1 ... g_n o`.
#[derive(Clone, Debug)]
pub struct GroupWalkConfig {
    generators: Vec<RfMatrix>,
    probs: Vec<Rational>,
    sampler: ExactSampler,
}

impl GroupWalkConfig {
    pub fn new(params: &BuildingParams, measure: Vec<(RfMatrix, Rational)>) -> Result<Self> {
        if measure.is_empty() {
            return Err(Error::InvalidConfig("empty generator measure".into()));
        }
        let mut total = Rational::zero();
        for (g, p) in &measure {
            if *p <= Rational::zero() {
                return Err(Error::InvalidConfig(format!("generator probability {p} is not positive")));
            }
            if g.dim() != params.n() {
                return Err(Error::DimensionMismatch { expected: params.n(), got: g.dim() });
            }
            if g.modulus() != params.q() {
                return Err(Error::FieldMismatch(params.q(), g.modulus()));
            }
            if g.determinant().is_zero() {
                return Err(Error::SingularMatrix);
            }
            total += p;
        }
        if total != Rational::one() {
            return Err(Error::InvalidConfig(format!("generator probabilities sum to {total}")));
        }
        let (generators, probs): (Vec<_>, Vec<_>) = measure.into_iter().unzip();
        let sampler = ExactSampler::new(&probs)?;
        Ok(Self { generators, probs, sampler })
    }

    /// Uniform measure on one coset representative per neighbour of `o`;
    /// the induced walk on vertices is the isotropic nearest-neighbour walk.
    pub fn isotropic(params: &BuildingParams) -> Self {
        let reps: Vec<RfMatrix> = (1..=params.rank())
            .flat_map(|k| Subspace::all(params.n(), k, params.q()))
            .map(|s| s.coset_representative(params.q()))
            .collect();
        let p = Rational::new(1, reps.len() as i64);
        Self::new(params, reps.into_iter().map(|g| (g, p)).collect()).expect("valid by construction")
    }

    pub fn point_mass(params: &BuildingParams, g: RfMatrix) -> Result<Self> {
        Self::new(params, vec![(g, Rational::one())])
    }

    /// Parses lines `p=<rational> <json array of rows of entry strings>`.
    pub fn parse(text: &str, params: &BuildingParams) -> Result<Self> {
        let mut measure = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("generator line {}: {msg}", lineno + 1));
            let (ptok, rest) = line.split_once(char::is_whitespace).ok_or_else(|| err("expected p=.. [..]".into()))?;
            let p = ptok
                .strip_prefix("p=")
                .and_then(parse_rational)
                .ok_or_else(|| err(format!("bad probability {ptok:?}")))?;
            let rows: Vec<Vec<String>> = serde_json::from_str(rest.trim()).map_err(|e| err(e.to_string()))?;
            measure.push((RfMatrix::parse(&rows, params.q())?, p));
        }
        Self::new(params, measure)
    }

    pub fn generators(&self) -> &[RfMatrix] {
        &self.generators
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probs
    }
}

/// `g -> g * s` with `s` drawn from the generator measure.
pub fn step_group_walk<R: Rng + ?Sized>(g: &RfMatrix, config: &GroupWalkConfig, rng: &mut R) -> RfMatrix {
    g.mul(&config.generators[config.sampler.sample(rng)])
}

/// Class-then-uniform sampler for a semi-isotropic kernel.
#[derive(Clone, Debug)]
pub struct IsoSampler {
    params: BuildingParams,
    table: ClassTable,
    kernel: SemiIsotropicKernel,
    sampler: ExactSampler,
}

impl IsoSampler {
    pub fn new(params: &BuildingParams, kernel: SemiIsotropicKernel) -> Result<Self> {
        let table = ClassTable::new(params);
        if kernel.rank() != params.rank() {
            return Err(Error::DimensionMismatch { expected: params.rank(), got: kernel.rank() });
        }
        let sampler = ExactSampler::new(&kernel.class_masses(&table))?;
        Ok(Self { params: params.clone(), table, kernel, sampler })
    }

    pub fn params(&self) -> &BuildingParams {
        &self.params
    }

    pub fn table(&self) -> &ClassTable {
        &self.table
    }

    pub fn kernel(&self) -> &SemiIsotropicKernel {
        &self.kernel
    }

    pub fn factor_kernel(&self) -> FactorKernel {
        self.kernel.factor_kernel(&self.table)
    }
}

/// One step of the semi-isotropic walk; returns the new vertex and the index
/// of the class used (into [`ClassTable::classes`]).
pub fn step_semi_isotropic<R: Rng + ?Sized>(x: &Vertex, sampler: &IsoSampler, rng: &mut R) -> (Vertex, usize) {
    let ci = sampler.sampler.sample(rng);
    let class = &sampler.table.classes()[ci];
    if class.nu == 0 {
        return (x.clone(), ci);
    }
    let s = Subspace::random_with_pivots(rng, sampler.params.n(), class.pivots(), sampler.params.q());
    (s.neighbor_of(x), ci)
}

/// Single-coordinate reduced chain: increment law of `xbar` on `{-1, 0, 1}`
/// and the residue parameter governing down-catches.
#[derive(Clone, Debug)]
pub struct ReducedChainConfig {
    q: u8,
    p_up: Rational,
    p_down: Rational,
    sampler: ExactSampler,
}

/// State `(xbar, y)` with cumulative hit statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReducedState {
    pub xbar: i64,
    pub y: i64,
    pub hits: u64,
    pub z_up: u64,
    pub z_zero: u64,
    pub z_down: u64,
}

impl ReducedChainConfig {
    pub fn new(q: u32, p_up: Rational, p_down: Rational) -> Result<Self> {
        let q = check_modulus(q)?;
        let zero = Rational::zero();
        if p_up < zero || p_down < zero || p_up + p_down > Rational::one() {
            return Err(Error::InvalidConfig(format!("increment law p_up={p_up} p_down={p_down} is not a distribution")));
        }
        let sampler = ExactSampler::new(&[p_up, Rational::one() - p_up - p_down, p_down])?;
        Ok(Self { q, p_up, p_down, sampler })
    }

    /// Symmetric increments with `P[+1] = P[-1] = p`.
    pub fn drift_free(q: u32, p: Rational) -> Result<Self> {
        Self::new(q, p, p)
    }

    /// Increment law of coordinate `i` (1-based) of a factor walk.
    pub fn from_factor(factor: &FactorKernel, i: usize, q: u32) -> Result<Self> {
        if i == 0 || i > factor.rank() {
            return Err(Error::Domain(format!("coordinate {i} outside 1..={}", factor.rank())));
        }
        let law = factor.coordinate_law(i);
        if law.keys().any(|k| k.abs() > 1) {
            return Err(Error::InvalidConfig("factor increments leave {-1,0,1}".into()));
        }
        let get = |k: i64| law.get(&k).copied().unwrap_or_else(Rational::zero);
        Self::new(q, get(1), get(-1))
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn p_up(&self) -> Rational {
        self.p_up
    }

    pub fn p_down(&self) -> Rational {
        self.p_down
    }

    pub fn is_drift_free(&self) -> bool {
        self.p_up == self.p_down
    }

    /// `e = (1 - 1/q) P[+1]`, the mean of `Z` at hitting times.
    pub fn expected_z_at_hits(&self) -> Rational {
        (Rational::one() - Rational::new(1, i64::from(self.q))) * self.p_up
    }
}

/// Advances `xbar` by its own law; `y` moves only when it is caught.
pub fn step_reduced_chain<R: Rng + ?Sized>(
    state: &ReducedState,
    config: &ReducedChainConfig,
    rng: &mut R,
) -> Result<ReducedState> {
    if state.y < state.xbar {
        return Err(Error::InvalidState(format!("y = {} below xbar = {}", state.y, state.xbar)));
    }
    let inc: i64 = match config.sampler.sample(rng) {
        0 => 1,
        1 => 0,
        _ => -1,
    };
    let mut next = *state;
    if state.xbar == state.y {
        let z = match inc {
            1 => 1,
            0 => 0,
            _ => {
                if rng.gen_range(0..config.q) == 0 {
                    -1
                } else {
                    0
                }
            }
        };
        next.hits += 1;
        match z {
            1 => next.z_up += 1,
            0 => next.z_zero += 1,
            _ => next.z_down += 1,
        }
        next.y += z;
    }
    next.xbar += inc;
    Ok(next)
}

/// Walk family handled by [`sample_trajectories`].
#[derive(Clone, Debug)]
pub enum WalkSpec {
    Group(BuildingParams, GroupWalkConfig),
    Iso(IsoSampler),
    Reduced { rank: usize, config: ReducedChainConfig },
}

impl WalkSpec {
    pub fn kind(&self) -> WalkKind {
        match self {
            WalkSpec::Group(..) => WalkKind::Group,
            WalkSpec::Iso(_) => WalkKind::Iso,
            WalkSpec::Reduced { .. } => WalkKind::Reduced,
        }
    }

    /// Squared length of the longest possible single step.
    pub fn step_bound_sq(&self) -> Result<Option<Rational>> {
        match self {
            WalkSpec::Group(p, cfg) => {
                let o = p.origin();
                let mut best = Rational::zero();
                for g in cfg.generators() {
                    best = best.max(p.distance_sq(&o, &p.canonicalize(g)?));
                }
                Ok(Some(best))
            }
            WalkSpec::Iso(s) => {
                let rs = s.params().root_system();
                let best = s
                    .table()
                    .classes()
                    .iter()
                    .zip(s.kernel().class_masses(s.table()))
                    .filter(|(c, m)| c.nu > 0 && !m.is_zero())
                    .map(|(c, _)| rs.norm_sq(&crate::QVector::fundamental(rs.rank(), c.nu)))
                    .max()
                    .unwrap_or_else(Rational::zero);
                Ok(Some(best))
            }
            WalkSpec::Reduced { .. } => Ok(None),
        }
    }

    fn rank(&self) -> usize {
        match self {
            WalkSpec::Group(p, _) => p.rank(),
            WalkSpec::Iso(s) => s.params().rank(),
            WalkSpec::Reduced { rank, .. } => *rank,
        }
    }
}

fn observe(params: &BuildingParams, traj: u64, n: u64, v: &Vertex) -> WalkRecord {
    WalkRecord {
        traj,
        n,
        h: v.busemann().into_coords(),
        lam: params.distance_from_origin(v).into_coords(),
    }
}

fn run_group(params: &BuildingParams, cfg: &GroupWalkConfig, run: &RunParams, traj: u64) -> Result<Vec<WalkRecord>> {
    let mut rng = trajectory_rng(run.base_seed, traj);
    let pts = run.schedule.points(run.steps);
    let mut g = RfMatrix::identity(params.n(), params.q());
    let mut out = Vec::with_capacity(pts.len());
    let mut n = 0;
    for &p in &pts {
        while n < p {
            g = step_group_walk(&g, cfg, &mut rng);
            n += 1;
        }
        out.push(observe(params, traj, n, &params.canonicalize(&g)?));
    }
    Ok(out)
}

fn run_iso(s: &IsoSampler, run: &RunParams, traj: u64) -> Vec<WalkRecord> {
    let mut rng = trajectory_rng(run.base_seed, traj);
    let pts = run.schedule.points(run.steps);
    let mut x = s.params().origin();
    let mut out = Vec::with_capacity(pts.len());
    let mut n = 0;
    for &p in &pts {
        while n < p {
            x = step_semi_isotropic(&x, s, &mut rng).0;
            n += 1;
        }
        out.push(observe(s.params(), traj, n, &x));
    }
    out
}

fn run_reduced(cfg: &ReducedChainConfig, run: &RunParams, traj: u64) -> Result<Vec<ReducedRecord>> {
    let mut rng = trajectory_rng(run.base_seed, traj);
    let pts = run.schedule.points(run.steps);
    let mut st = ReducedState::default();
    let mut out = Vec::with_capacity(pts.len());
    let mut n = 0;
    let rec = |n: u64, st: &ReducedState| ReducedRecord {
        traj,
        n,
        xbar: st.xbar,
        y: st.y,
        hits: st.hits,
        z_up: st.z_up,
        z_zero: st.z_zero,
        z_down: st.z_down,
    };
    for &p in &pts {
        while n < p {
            st = step_reduced_chain(&st, cfg, &mut rng)?;
            n += 1;
        }
        out.push(rec(n, &st));
    }
    if st.y < st.xbar {
        return Err(Error::InvalidState(format!("y = {} below xbar = {}", st.y, st.xbar)));
    }
    Ok(out)
}

/// Runs `run.trajectories` independent trajectories (in parallel on the
/// current rayon pool) and assembles them in trajectory order.
pub fn sample_trajectories(spec: &WalkSpec, run: &RunParams) -> Result<Dataset> {
    if run.trajectories == 0 {
        return Err(Error::InvalidConfig("need at least one trajectory".into()));
    }
    let ids: Vec<u64> = (run.first_traj..run.first_traj + run.trajectories).collect();
    let records = match spec {
        WalkSpec::Group(params, cfg) => {
            let parts: Vec<Vec<WalkRecord>> =
                ids.par_iter().map(|&j| run_group(params, cfg, run, j)).collect::<Result<_>>()?;
            Records::Walk(parts.concat())
        }
        WalkSpec::Iso(s) => Records::Walk(ids.par_iter().map(|&j| run_iso(s, run, j)).collect::<Vec<_>>().concat()),
        WalkSpec::Reduced { config, .. } => {
            let parts: Vec<Vec<ReducedRecord>> =
                ids.par_iter().map(|&j| run_reduced(config, run, j)).collect::<Result<_>>()?;
            Records::Reduced(parts.concat())
        }
    };
    let mut meta = Vec::new();
    if let WalkSpec::Group(p, _) | WalkSpec::Iso(IsoSampler { params: p, .. }) = spec {
        meta.push(("q".to_string(), p.q().to_string()));
    }
    if let WalkSpec::Iso(s) = spec {
        let mu = s.factor_kernel().drift();
        let lambda = s.params().root_system().dominant_representative(&mu).0;
        let fmt = |v: &crate::QVector| v.coords().iter().map(Rational::to_string).collect::<Vec<_>>().join(",");
        meta.push(("theory_mu".to_string(), fmt(&mu)));
        meta.push(("theory_lambda".to_string(), fmt(&lambda)));
    }
    if let Some(b) = spec.step_bound_sq()? {
        meta.push(("step_bound_sq".to_string(), b.to_string()));
    }
    if let WalkSpec::Reduced { config, .. } = spec {
        meta.push(("q".to_string(), config.q().to_string()));
        meta.push(("p_up".to_string(), config.p_up().to_string()));
        meta.push(("p_down".to_string(), config.p_down().to_string()));
    }
    meta.push(("steps".to_string(), run.steps.to_string()));
    meta.push(("trajectories".to_string(), run.trajectories.to_string()));
    meta.push(("seed".to_string(), run.base_seed.to_string()));
    meta.push(("first_traj".to_string(), run.first_traj.to_string()));
    meta.push(("checkpoint_every".to_string(), run.schedule.every.to_string()));
    meta.push(("checkpoint_pairs".to_string(), run.schedule.pairs.to_string()));
    Ok(Dataset { kind: spec.kind(), rank: spec.rank(), meta, records })
}

/// Joint counts of `(at hitting set, h increment, pi increment)` from a full
/// tree simulation, where the hitting set is `{ x : h(x) = pi(x) }`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreePiCounts {
    pub joint: BTreeMap<(bool, i64, i64), u64>,
    pub hit_steps: u64,
    pub total_steps: u64,
    pub violations_pi_below_h: u64,
}

impl TreePiCounts {
    pub fn count(&self, at_hit: bool, dh: i64, dpi: i64) -> u64 {
        self.joint.get(&(at_hit, dh, dpi)).copied().unwrap_or(0)
    }

    fn absorb(&mut self, other: &TreePiCounts) {
        for (k, v) in &other.joint {
            *self.joint.entry(*k).or_insert(0) += v;
        }
        self.hit_steps += other.hit_steps;
        self.total_steps += other.total_steps;
        self.violations_pi_below_h += other.violations_pi_below_h;
    }
}

/// Simulates the walk on the tree, tracking `h` and the sector entry level
/// `pi` at every step. Trajectories of `steps` steps are added in batches
/// until at least `min_hit_steps` steps have started on the hitting set.
pub fn tree_pi_statistics(sampler: &IsoSampler, steps: u64, min_hit_steps: u64, base_seed: u64) -> Result<TreePiCounts> {
    if sampler.params().rank() != 1 {
        return Err(Error::Unsupported("entry levels are tracked on the tree only".into()));
    }
    let one = |traj: u64| -> TreePiCounts {
        let mut rng = trajectory_rng(base_seed, traj);
        let mut c = TreePiCounts::default();
        let mut x = sampler.params().origin();
        let (mut h, mut pi) = (tree_level(&x), tree_entry_level_closed_form(&x));
        for _ in 0..steps {
            let y = step_semi_isotropic(&x, sampler, &mut rng).0;
            let (h2, pi2) = (tree_level(&y), tree_entry_level_closed_form(&y));
            let at_hit = h == pi;
            if at_hit {
                c.hit_steps += 1;
            }
            if pi2 < h2 {
                c.violations_pi_below_h += 1;
            }
            *c.joint.entry((at_hit, h2 - h, pi2 - pi)).or_insert(0) += 1;
            c.total_steps += 1;
            x = y;
            h = h2;
            pi = pi2;
        }
        c
    };
    let mut total = TreePiCounts::default();
    let batch = (rayon::current_num_threads() as u64).max(1) * 8;
    let mut next = 0u64;
    while total.hit_steps < min_hit_steps {
        let parts: Vec<TreePiCounts> = (next..next + batch).into_par_iter().map(one).collect();
        for p in &parts {
            total.absorb(p);
        }
        next += batch;
        if steps == 0 {
            break;
        }
    }
    Ok(total)
}

/// Number of times `1 <= n <= steps` at which `<X_n, root> = 0` for the
/// factor walk started at 0; `root` is given in simple-root coefficients.
pub fn factor_projection_returns(factor: &FactorKernel, root: &[i64], steps: u64, base_seed: u64, traj: u64) -> Result<u64> {
    let offsets: Vec<i64> = factor.masses().keys().map(|k| k.iter().zip(root).map(|(a, b)| a * b).sum()).collect();
    let masses: Vec<Rational> = factor.masses().values().copied().collect();
    let sampler = ExactSampler::new(&masses)?;
    let mut rng = trajectory_rng(base_seed, traj);
    let mut pos = 0i64;
    let mut returns = 0;
    for _ in 0..steps {
        pos += offsets[sampler.sample(&mut rng)];
        if pos == 0 {
            returns += 1;
        }
    }
    Ok(returns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_points() {
        assert_eq!(CheckpointSchedule::new(0, false).points(0), vec![0]);
        assert_eq!(CheckpointSchedule::new(4, false).points(10), vec![0, 4, 8, 10]);
        assert_eq!(CheckpointSchedule::new(4, true).points(10), vec![0, 1, 4, 5, 8, 9, 10]);
    }

    #[test]
    fn reduced_chain_rules() {
        let cfg = ReducedChainConfig::new(2, Rational::one(), Rational::zero()).unwrap();
        let mut rng = trajectory_rng(0, 0);
        let mut st = ReducedState::default();
        for _ in 0..10 {
            st = step_reduced_chain(&st, &cfg, &mut rng).unwrap();
            assert_eq!(st.y, st.xbar);
        }
        assert_eq!((st.hits, st.z_up), (10, 10));
        let bad = ReducedState { xbar: 1, y: 0, ..Default::default() };
        assert!(step_reduced_chain(&bad, &cfg, &mut rng).is_err());
        // strictly below y: Z = 0 whatever the increment
        let below = ReducedState { xbar: -3, y: 0, ..Default::default() };
        let next = step_reduced_chain(&below, &cfg, &mut rng).unwrap();
        assert_eq!((next.y, next.hits), (0, 0));
    }
}
