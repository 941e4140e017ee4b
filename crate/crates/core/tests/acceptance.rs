//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Run with `cargo test -p weylwalk-core --test acceptance`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weylwalk::analysis::*;
use weylwalk::building::{BuildingParams, Subspace, Vertex};
use weylwalk::coxeter::{RootKind, RootSystem};
use weylwalk::padic::random::{random_field_element, random_gl_o, random_unipotent};
use weylwalk::padic::{cartan_decomposition, iwasawa_decomposition, iwasawa_valuations, smith_valuations, RfMatrix};
use weylwalk::walks::*;
use weylwalk::{QVector, Rational};

const SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn ambient(v: &[Rational]) -> Vec<Rational> {
    v.to_vec()
}

fn c1_figure_data() -> Outcome {
    let rs = RootSystem::new(RootKind::C, 2).unwrap();
    let (z, o, h) = (q(0, 1), q(1, 1), q(1, 2));
    let checks = [
        ("alpha1", ambient(&rs.simple_roots_ambient()[0]), vec![o, -o]),
        ("alpha2", ambient(&rs.simple_roots_ambient()[1]), vec![z, q(2, 1)]),
        ("alpha1^vee", rs.simple_coroots_ambient()[0].clone(), vec![o, -o]),
        ("alpha2^vee", rs.simple_coroots_ambient()[1].clone(), vec![z, o]),
        ("omega1", rs.fundamental_coweights_ambient()[0].clone(), vec![o, z]),
        ("omega2", rs.fundamental_coweights_ambient()[1].clone(), vec![h, h]),
    ];
    let bad: Vec<&str> = checks.iter().filter(|(_, got, want)| got != want).map(|(n, _, _)| *n).collect();
    let phi_ok = rs.highest_root() == [2, 1];
    outcome(bad.is_empty() && phi_ok, format!("mismatches={bad:?} phi=2a1+a2:{phi_ok}"))
}

fn random_lambda(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-3..=3)).collect()
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RfMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| random_field_element(rng, 2, 2)).collect()).collect();
        let m = RfMatrix::from_rows(rows, 2).unwrap();
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn c2_decomposition_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    for i in 0..500 {
        let n = 2 + i % 2;
        let lam = random_lambda(&mut rng, n);
        let m = random_gl_o(&mut rng, n, 2).mul(&RfMatrix::t_lambda(&lam, 2)).mul(&random_gl_o(&mut rng, n, 2));
        let mut sorted = lam.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let c = cartan_decomposition(&m).unwrap();
        failures += usize::from(c.lambda != sorted || c.reassemble() != m);

        let mu = random_lambda(&mut rng, n);
        let m = random_unipotent(&mut rng, n, 2).mul(&RfMatrix::t_lambda(&mu, 2)).mul(&random_gl_o(&mut rng, n, 2));
        let d = iwasawa_decomposition(&m).unwrap();
        failures += usize::from(d.mu != mu || d.reassemble() != m);
    }
    let mut fuzz_failures = 0;
    for i in 0..200 {
        let n = 2 + i % 2;
        let m = random_invertible(&mut rng, n);
        let k = random_gl_o(&mut rng, n, 2).mul(&m).mul(&random_gl_o(&mut rng, n, 2));
        fuzz_failures += usize::from(smith_valuations(&k).unwrap() != smith_valuations(&m).unwrap());
        let u = random_unipotent(&mut rng, n, 2).mul(&m).mul(&random_gl_o(&mut rng, n, 2));
        fuzz_failures += usize::from(iwasawa_valuations(&u).unwrap() != iwasawa_valuations(&m).unwrap());
    }
    outcome(failures + fuzz_failures == 0, format!("round-trip failures={failures}/1000 fuzz failures={fuzz_failures}/400"))
}

fn c3_busemann_limit() -> Outcome {
    let b = BuildingParams::new(2, 2).unwrap();
    let ball = b.ball(&b.origin(), 4);
    let fars: Vec<(QVector, Vertex)> = (5..=8)
        .map(|m| {
            let lam = QVector::from_ints(&[m, m]);
            let v = b.apartment_vertex(&lam).unwrap();
            (lam, v)
        })
        .collect();
    let mut unstable = 0;
    let mut wrong = 0;
    for x in &ball {
        let vals: Vec<QVector> = fars.iter().map(|(lam, far)| lam - &b.vector_distance(x, far)).collect();
        unstable += usize::from(vals.windows(2).any(|w| w[0] != w[1]));
        wrong += usize::from(vals[0] != x.busemann());
    }
    outcome(unstable + wrong == 0, format!("ball size={} unstable={unstable} mismatched={wrong}", ball.len()))
}

fn random_vertex(b: &BuildingParams, rng: &mut ChaCha8Rng, steps: usize) -> Vertex {
    let mut v = b.origin();
    for _ in 0..steps {
        let k = rng.gen_range(1..=b.rank());
        let subs = Subspace::all(b.n(), k, b.q());
        v = subs[rng.gen_range(0..subs.len())].neighbor_of(&v);
    }
    v
}

fn c4_c_counts() -> Outcome {
    let b = BuildingParams::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let nu = QVector::fundamental(2, 1);
    let mut histograms = Vec::new();
    for _ in 0..20 {
        let steps = rng.gen_range(0..8);
        let x = random_vertex(&b, &mut rng, steps);
        histograms.push(b.sphere_offsets(&x, &nu).unwrap());
    }
    let agree = histograms.windows(2).all(|w| w[0] == w[1]);
    let h = &histograms[0];
    let order = [vec![0, -1], vec![-1, 1], vec![1, 0]];
    let counts: Vec<u64> = order.iter().map(|k| h.get(k).copied().unwrap_or(0)).collect();
    let total: u64 = h.values().sum();
    outcome(
        agree && counts == [4, 2, 1] && total == 7 && h.len() == 3,
        format!("basepoints agree={agree}; counts on (-w2, w2-w1, w1) = {counts:?}, sum {total}"),
    )
}

fn iso_sampler(rank: usize, kernel: impl Fn(&ClassTable) -> SemiIsotropicKernel) -> IsoSampler {
    let b = BuildingParams::new(rank, 2).unwrap();
    let k = kernel(&ClassTable::new(&b));
    IsoSampler::new(&b, k).unwrap()
}

fn run(steps: u64, trajectories: u64, every: u64, pairs: bool) -> RunParams {
    RunParams { steps, trajectories, base_seed: SEED, first_traj: 0, schedule: CheckpointSchedule::new(every, pairs) }
}

fn c5_tree_escape(reports: &mut Vec<(String, RegularityReport)>) -> Outcome {
    let s = iso_sampler(1, SemiIsotropicKernel::isotropic);
    let ds = sample_trajectories(&WalkSpec::Iso(s), &run(20_000, 50, 5_000, true)).unwrap();
    let rep = regularity_report(&ds, None).unwrap();
    let dev = (rep.lambda_hat[0] - 1.0 / 3.0).abs();
    let pass = dev <= 0.03 && rep.orbit.pass;
    let detail = format!(
        "speed={:.4} (|dev|={dev:.4}) mu_hat={:.4} witness={} orbit_pass={}",
        rep.lambda_hat[0], rep.mu_hat[0], rep.orbit_witness_word, rep.orbit.pass
    );
    reports.push(("tree isotropic".into(), rep));
    outcome(pass, detail)
}

fn c6_a2_escape(reports: &mut Vec<(String, RegularityReport)>) -> Outcome {
    let s = iso_sampler(2, SemiIsotropicKernel::isotropic);
    let (mu, lam) = theoretical_drift(&s.factor_kernel()).unwrap();
    let ds = sample_trajectories(&WalkSpec::Iso(s), &run(5_000, 20, 1_000, true)).unwrap();
    let rep = regularity_report(&ds, Some((mu.clone(), lam.clone()))).unwrap();
    let target = 3.0 / 14.0;
    let speed_ok = rep.lambda_hat.iter().all(|x| (x - target).abs() <= 0.03);
    let rs = RootSystem::new(RootKind::A, 2).unwrap();
    let witness = rs.weyl_elements().iter().find(|w| w.to_string() == rep.orbit_witness_word).unwrap();
    let mu_ok = witness.act(&lam) == mu && rep.condition_busemann.pass;
    let detail = format!(
        "speed=({:.4},{:.4}) mu_hat=({:.4},{:.4}) witness={} maps lambda to theory mu={}",
        rep.lambda_hat[0], rep.lambda_hat[1], rep.mu_hat[0], rep.mu_hat[1], rep.orbit_witness_word, mu_ok
    );
    reports.push(("A2 isotropic".into(), rep));
    outcome(speed_ok && mu_ok, detail)
}

fn c7_equivalence(reports: &mut Vec<(String, RegularityReport)>) -> Outcome {
    // one more family: the isotropic group walk on the tree
    let b = BuildingParams::new(1, 2).unwrap();
    let theory = {
        let s = iso_sampler(1, SemiIsotropicKernel::isotropic);
        theoretical_drift(&s.factor_kernel()).unwrap()
    };
    let ds = sample_trajectories(&WalkSpec::Group(b.clone(), GroupWalkConfig::isotropic(&b)), &run(5_000, 20, 1_000, true))
        .unwrap();
    reports.push(("tree group".into(), regularity_report(&ds, Some(theory.clone())).unwrap()));

    let mut lines = Vec::new();
    let mut all = true;
    for (name, r) in reports.iter() {
        let ok = r.conditions_agree && r.condition_busemann.pass && r.condition_distance.pass;
        all &= ok;
        lines.push(format!("{name}:{}", if ok { "both" } else { "DISAGREE/FAIL" }));
    }
    let mut bad = ds.clone();
    if let Records::Walk(rs) = &mut bad.records {
        let r = rs.iter_mut().find(|r| r.n == 4_001).expect("pair checkpoint");
        r.lam[0] += Rational::from_integer(1_000);
    }
    let flagged = !regularity_report(&bad, Some(theory)).unwrap().step_probe.pass;
    outcome(all && flagged, format!("{} ; adversarial flagged={flagged}", lines.join(" ")))
}

fn c8_reduced_chain() -> Outcome {
    let cfg = ReducedChainConfig::drift_free(2, q(1, 2)).unwrap();
    let spec = WalkSpec::Reduced { rank: 1, config: cfg };
    match sample_trajectories(&spec, &run(1_000_000, 50, 10_000, false)) {
        Err(e) => outcome(false, format!("simulation failed: {e}")),
        Ok(ds) => {
            let e = end_convergence_stats(&ds, 50).unwrap();
            let mean_ok = (e.mean_z_at_hits - 0.25).abs() <= 0.02;
            let frac_ok = e.fraction_reaching_threshold >= 0.95;
            outcome(
                mean_ok && frac_ok && e.order_violations == 0,
                format!(
                    "E[Z at hits]={:.4} over {} hits; Y>=Xbar held at every step; runs with Y_N>=50: {:.2}",
                    e.mean_z_at_hits, e.hits, e.fraction_reaching_threshold
                ),
            )
        }
    }
}

fn c9_tree_claims() -> Outcome {
    let s = iso_sampler(1, SemiIsotropicKernel::drift_free);
    let counts = tree_pi_statistics(&s, 1_000, 100_000, SEED).unwrap();
    let r = check_tree_claims(&counts, 2, 0.02);
    outcome(
        r.pass,
        format!(
            "hit steps={} off-hit pi moves={} claim violations={} down-catch fraction={:.4}",
            r.hit_steps,
            r.off_hit_moves,
            r.up_mismatches + r.stay_mismatches + r.down_out_of_range + r.pi_below_h,
            r.down_catch_fraction
        ),
    )
}

fn c10_cat0() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let systems: Vec<RootSystem> = [(RootKind::A, 2), (RootKind::C, 2), (RootKind::B, 3), (RootKind::A, 3)]
        .into_iter()
        .map(|(k, r)| RootSystem::new(k, r).unwrap())
        .collect();
    let grid = [q(0, 1), q(1, 4), q(1, 2), q(3, 4), q(1, 1)];
    let mut violations = 0;
    let mut evaluations = 0;
    for i in 0..1000 {
        let rs = &systems[i % systems.len()];
        let mut v = || QVector::new((0..rs.rank()).map(|_| q(rng.gen_range(-30..=30), rng.gen_range(1..=7))).collect());
        let (o, a, b) = (v(), v(), v());
        for t1 in &grid {
            for t2 in &grid {
                evaluations += 1;
                violations += usize::from(!rs.cat0_comparison_holds(&o, &a, &b, t1, t2));
            }
        }
    }
    outcome(violations == 0, format!("{evaluations} evaluations on 1000 triples, violations={violations}"))
}

fn c11_recurrence() -> Outcome {
    let s = iso_sampler(2, SemiIsotropicKernel::drift_free);
    let factor = s.factor_kernel();
    let rs = RootSystem::new(RootKind::A, 2).unwrap();
    let mut parts = Vec::new();
    let mut all = true;
    for root in rs.positive_roots() {
        let ok_runs = (0..50)
            .filter(|&j| factor_projection_returns(&factor, root, 1_000_000, SEED, j).unwrap() >= 10)
            .count();
        all &= ok_runs * 100 >= 95 * 50;
        parts.push(format!("{root:?}:{ok_runs}/50"));
    }
    outcome(all, format!("runs with >=10 returns per positive root {}", parts.join(" ")))
}

fn main() {
    type Check<'a> = (u32, &'a str, Option<Duration>, Box<dyn FnOnce() -> Outcome + 'a>);
    let mut reports = Vec::new();
    let mut results: BTreeMap<u32, (String, bool)> = BTreeMap::new();
    {
        let reports = std::cell::RefCell::new(&mut reports);
        let checks: Vec<Check> = vec![
            (1, "C2 reference data", Some(Duration::from_secs(1)), Box::new(c1_figure_data)),
            (2, "decomposition oracles", Some(Duration::from_secs(30)), Box::new(c2_decomposition_oracles)),
            (3, "Busemann limit on radius-4 ball", Some(Duration::from_secs(120)), Box::new(c3_busemann_limit)),
            (4, "c-count basepoint independence", Some(Duration::from_secs(60)), Box::new(c4_c_counts)),
            (5, "tree rate of escape", Some(Duration::from_secs(60)), Box::new(|| c5_tree_escape(&mut reports.borrow_mut()))),
            (6, "A2 rate of escape", Some(Duration::from_secs(600)), Box::new(|| c6_a2_escape(&mut reports.borrow_mut()))),
            (7, "regularity conditions agree", None, Box::new(|| c7_equivalence(&mut reports.borrow_mut()))),
            (8, "reduced chain end convergence", None, Box::new(c8_reduced_chain)),
            (9, "tree entry-level claims", None, Box::new(c9_tree_claims)),
            (10, "CAT(0) comparison fuzz", None, Box::new(c10_cat0)),
            (11, "projection recurrence", None, Box::new(c11_recurrence)),
        ];
        for (id, name, limit, check) in checks {
            let start = Instant::now();
            let out = check();
            let elapsed = start.elapsed();
            let in_time = limit.is_none_or(|l| elapsed < l);
            let pass = out.pass && in_time;
            let budget = limit.map(|l| format!(" < {}s", l.as_secs())).unwrap_or_default();
            println!(
                "criterion {id:>2} {} {name}: {} [{:.2}s{budget}]",
                if pass { "PASS" } else { "FAIL" },
                out.detail,
                elapsed.as_secs_f64()
            );
            results.insert(id, (name.to_string(), pass));
        }
    }
    let failed: Vec<u32> = results.iter().filter(|(_, (_, p))| !p).map(|(id, _)| *id).collect();
    println!("acceptance: {}/{} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
