//! `weylwalk`: root-system tables, decomposition oracles, sphere counts,
//! walk simulation and dataset analysis.

mod format;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use weylwalk::analysis::{end_convergence_stats, regularity_report, theory_from_meta, EndConvergenceReport};
use weylwalk::building::{gl_to_coweight, BuildingParams};
use weylwalk::coxeter::{RootKind, RootSystem};
use weylwalk::padic::{check_modulus, iwasawa_valuations, smith_valuations, RfMatrix};
use weylwalk::scalar::parse_rational;
use weylwalk::walks::{
    sample_trajectories, step_semi_isotropic, trajectory_rng, CheckpointSchedule, ClassTable, Dataset,
    GroupWalkConfig, IsoSampler, ReducedChainConfig, RunParams, SemiIsotropicKernel, WalkKind, WalkSpec,
};
use weylwalk::{Error, Rational};

use crate::format::{join_coords, parse_coweight, root_system_table, sorted_offsets};

const THREADS_ENV: &str = "WEYLWALK_THREADS";

#[derive(Parser)]
#[command(name = "weylwalk", version, about = "Random walks on affine buildings of type A~")]
struct Cli {
    /// File of `key=value` lines supplying flags not given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Record a generation timestamp in output headers.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root-system data.
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Exact oracles over F_q(t).
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Building combinatorics.
    #[command(subcommand)]
    Building(BuildingCmd),
    /// Simulate trajectories and write a CSV dataset.
    #[command(subcommand)]
    Walk(WalkCmd),
    /// Regularity or end-convergence report for a dataset.
    Analyze(AnalyzeArgs),
}

#[derive(Subcommand)]
enum RootsysCmd {
    /// Print roots, coroots, fundamental coweights and Weyl group data.
    Show {
        #[arg(long = "type", value_name = "A|B|C")]
        kind: String,
        #[arg(long)]
        rank: usize,
        /// Emit the JSON summary instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Cartan and Iwasawa valuations of a matrix over F_q(t).
    Decompose {
        #[arg(long)]
        q: u32,
        /// JSON array of rows of entry strings, e.g. '[["t","1"],["0","1/t"]]'.
        #[arg(long, required_unless_present = "matrix_file", conflicts_with = "matrix_file")]
        matrix: Option<String>,
        #[arg(long, value_name = "FILE")]
        matrix_file: Option<PathBuf>,
    },
    /// Histogram of Busemann offsets over the sphere of radius nu.
    CCount(SphereArgs),
}

#[derive(Subcommand)]
enum BuildingCmd {
    /// Sphere size and Busemann-offset histogram around the origin.
    Sphere(SphereArgs),
}

#[derive(Args)]
struct SphereArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    q: u32,
    /// Dominant coweight: `w1`, `2w1+w2`, `0` or `1,0`.
    #[arg(long)]
    nu: String,
    /// Only report this offset.
    #[arg(long)]
    mu: Option<String>,
    /// Centre the sphere at the endpoint of a seeded isotropic walk of this length.
    #[arg(long, default_value_t = 0)]
    basepoint_steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    rank: usize,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    #[arg(long, default_value_t = 10)]
    trajectories: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Checkpoint spacing; defaults to a tenth of the run.
    #[arg(long)]
    checkpoint_every: Option<u64>,
    /// Global index of the first trajectory.
    #[arg(long, default_value_t = 0)]
    first_traj: u64,
    /// Do not record step n+1 after each checkpoint n.
    #[arg(long)]
    no_pairs: bool,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn params(&self) -> RunParams {
        let every = self.checkpoint_every.unwrap_or((self.steps / 10).max(1));
        RunParams {
            steps: self.steps,
            trajectories: self.trajectories,
            base_seed: self.seed,
            first_traj: self.first_traj,
            schedule: CheckpointSchedule::new(every, !self.no_pairs),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Isotropic,
    DriftFree,
    StayPut,
}

#[derive(Subcommand)]
enum WalkCmd {
    /// Right random walk g_1 ... g_n o.
    Group {
        #[command(flatten)]
        run: RunArgs,
        /// Lines `p=<rational> <json rows>`; isotropic generators when absent.
        #[arg(long, value_name = "FILE")]
        generators: Option<PathBuf>,
    },
    /// Semi-isotropic nearest-neighbour walk.
    Iso {
        #[command(flatten)]
        run: RunArgs,
        /// Lines `nu=<i> mu=<coords> p=<rational>`.
        #[arg(long, value_name = "FILE", conflicts_with = "preset")]
        kernel: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "isotropic")]
        preset: Preset,
    },
    /// Single-coordinate reduced chain (xbar, y).
    Reduced {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "1/2")]
        p_up: String,
        #[arg(long, default_value = "1/2")]
        p_down: String,
        /// Take the increment law from coordinate `--coordinate` of this kernel's factor walk.
        #[arg(long, value_name = "FILE", requires = "coordinate")]
        kernel: Option<PathBuf>,
        #[arg(long)]
        coordinate: Option<usize>,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long = "in", value_name = "CSV")]
    input: PathBuf,
    /// JSON report path (stdout when absent).
    #[arg(long, value_name = "JSON")]
    report: Option<PathBuf>,
    /// Y level counted as reached, for reduced-chain datasets.
    #[arg(long, default_value_t = 50)]
    threshold: i64,
    /// Compare against the empirical speed even when the header carries theory values.
    #[arg(long)]
    empirical: bool,
}

/// Validation failures exit 1, runtime failures exit 2.
#[derive(Debug)]
enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::InvalidState(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    let res = match out {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout().lock().write_all(bytes).map_err(|e| format!("stdout: {e}")),
    };
    res.map_err(Failure::Runtime)
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    secs.to_string()
}

fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn parse_rat(s: &str, what: &str) -> CliResult<Rational> {
    parse_rational(s).ok_or_else(|| Failure::Validation(format!("{what}: {s:?} is not a rational")))
}

/// Appends `--key=value` for every config entry whose flag is not already
/// on the command line. `true` becomes a bare flag and `false` is dropped.
fn expand_config(mut args: Vec<String>) -> CliResult<Vec<String>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = args.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = read_input(Path::new(&path))?;
    let mut extra = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::Validation(format!("{path} line {}: expected key=value", lineno + 1)))?;
        let flag = format!("--{}", k.trim().trim_start_matches("--"));
        let given = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match v.trim() {
            "true" => extra.push(flag),
            "false" => {}
            v => extra.push(format!("{flag}={v}")),
        }
    }
    args.extend(extra);
    Ok(args)
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Validation(format!("{THREADS_ENV}={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Runtime(e.to_string()))
}

fn main() -> ExitCode {
    let code = match run(std::env::args().collect()) {
        Ok(code) => code,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    };
    code
}

fn run(args: Vec<String>) -> CliResult<ExitCode> {
    let args = expand_config(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return Ok(if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    };
    configure_threads()?;
    let stamp = cli.stamp.then(timestamp);
    match cli.command {
        Command::Rootsys(RootsysCmd::Show { kind, rank, json }) => {
            let rs = RootSystem::new(RootKind::parse(&kind)?, rank)?;
            if json {
                emit(None, &to_json(&Stamped { inner: &rs.summary(), generated_at: stamp })?)?;
            } else {
                let mut text = root_system_table(&rs);
                if let Some(t) = stamp {
                    text.insert_str(text.find('\n').map_or(0, |i| i + 1), &format!("# generated_at={t}\n"));
                }
                emit(None, text.as_bytes())?;
            }
        }
        Command::Oracle(OracleCmd::Decompose { q, matrix, matrix_file }) => {
            let text = match (matrix, matrix_file) {
                (Some(m), _) => m,
                (None, Some(p)) => read_input(&p)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            emit(None, &to_json(&decompose(q, &text, stamp)?)?)?;
        }
        Command::Oracle(OracleCmd::CCount(a)) => emit(None, sphere_csv("ccount", &a, stamp)?.as_bytes())?,
        Command::Building(BuildingCmd::Sphere(a)) => emit(None, sphere_csv("sphere", &a, stamp)?.as_bytes())?,
        Command::Walk(cmd) => walk(cmd, stamp)?,
        Command::Analyze(a) => analyze(&a, stamp)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    #[serde(flatten)]
    inner: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<String>,
}

#[derive(Serialize)]
struct DecomposeReport {
    schema: &'static str,
    q: u8,
    n: usize,
    /// `lambda` with `M = k1 t_lambda k2`, where `t_lambda = diag(t^-lambda_i)`.
    smith_valuations: Vec<i64>,
    /// `mu` with `M = u t_mu k`.
    iwasawa_valuations: Vec<i64>,
    /// The same data as coweights of `PGL_n`.
    distance_coweight: Vec<String>,
    busemann_coweight: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<String>,
}

fn decompose(q: u32, text: &str, stamp: Option<String>) -> CliResult<DecomposeReport> {
    let q = check_modulus(q)?;
    let rows: Vec<Vec<String>> =
        serde_json::from_str(text).map_err(|e| Failure::Validation(format!("matrix JSON: {e}")))?;
    let m = RfMatrix::parse(&rows, q)?;
    let smith = smith_valuations(&m)?;
    let iwasawa = iwasawa_valuations(&m)?;
    let strs = |v: &[i64]| gl_to_coweight(v).coords().iter().map(Rational::to_string).collect();
    Ok(DecomposeReport {
        schema: "weylwalk.decompose.v1",
        q,
        n: m.dim(),
        distance_coweight: strs(&smith),
        busemann_coweight: strs(&iwasawa),
        smith_valuations: smith,
        iwasawa_valuations: iwasawa,
        generated_at: stamp,
    })
}

fn sphere_csv(tag: &str, a: &SphereArgs, stamp: Option<String>) -> CliResult<String> {
    let b = BuildingParams::new(a.rank, a.q)?;
    let nu = parse_coweight(&a.nu, a.rank)?;
    let mut x = b.origin();
    if a.basepoint_steps > 0 {
        let table = ClassTable::new(&b);
        let sampler = IsoSampler::new(&b, SemiIsotropicKernel::isotropic(&table))?;
        let mut rng = trajectory_rng(a.seed, 0);
        for _ in 0..a.basepoint_steps {
            x = step_semi_isotropic(&x, &sampler, &mut rng).0;
        }
    }
    let hist = b.sphere_offsets(&x, &nu)?;
    let only = a.mu.as_deref().map(|m| parse_coweight(m, a.rank)).transpose()?;
    let only = only
        .map(|m| m.to_ints().ok_or_else(|| Failure::from(Error::NotACoweight(m.to_string()))))
        .transpose()?;

    let mut out = format!("# weylwalk-{tag} v1\n# rank={}\n# q={}\n# nu={}\n", a.rank, a.q, join_coords(nu.coords()));
    if a.basepoint_steps > 0 {
        out.push_str(&format!("# basepoint_steps={}\n# seed={}\n", a.basepoint_steps, a.seed));
    }
    out.push_str(&format!("# sphere_size={}\n", hist.values().sum::<u64>()));
    if let Some(t) = stamp {
        out.push_str(&format!("# generated_at={t}\n"));
    }
    let prefix = if tag == "sphere" { "mu_offset" } else { "mu" };
    let cols: Vec<String> = (1..=a.rank).map(|i| format!("{prefix}_{i}")).collect();
    out.push_str(&format!("{},count\n", cols.join(",")));
    match only {
        Some(mu) => {
            let c = hist.get(&mu).copied().unwrap_or(0);
            out.push_str(&format!("{},{c}\n", join_coords(&mu)));
        }
        None => {
            for (mu, c) in sorted_offsets(&hist) {
                out.push_str(&format!("{},{c}\n", join_coords(mu)));
            }
        }
    }
    Ok(out)
}

fn iso_kernel(table: &ClassTable, kernel: Option<&Path>, preset: Preset) -> CliResult<(SemiIsotropicKernel, String)> {
    Ok(match kernel {
        Some(p) => (SemiIsotropicKernel::parse(&read_input(p)?, table)?, p.display().to_string()),
        None => match preset {
            Preset::Isotropic => (SemiIsotropicKernel::isotropic(table), "isotropic".into()),
            Preset::DriftFree => (SemiIsotropicKernel::drift_free(table), "drift-free".into()),
            Preset::StayPut => (SemiIsotropicKernel::stay_put(table), "stay-put".into()),
        },
    })
}

fn law_line(k: &SemiIsotropicKernel) -> String {
    k.to_text().lines().collect::<Vec<_>>().join("; ")
}

fn walk(cmd: WalkCmd, stamp: Option<String>) -> CliResult<()> {
    let (spec, run, extra): (WalkSpec, &RunArgs, Vec<(&str, String)>) = match &cmd {
        WalkCmd::Group { run, generators } => {
            let b = BuildingParams::new(run.rank, run.q)?;
            let (cfg, src) = match generators {
                Some(p) => (GroupWalkConfig::parse(&read_input(p)?, &b)?, p.display().to_string()),
                None => (GroupWalkConfig::isotropic(&b), "isotropic".to_string()),
            };
            (WalkSpec::Group(b, cfg), run, vec![("generators", src)])
        }
        WalkCmd::Iso { run, kernel, preset } => {
            let b = BuildingParams::new(run.rank, run.q)?;
            let table = ClassTable::new(&b);
            let (k, src) = iso_kernel(&table, kernel.as_deref(), *preset)?;
            let law = law_line(&k);
            (WalkSpec::Iso(IsoSampler::new(&b, k)?), run, vec![("kernel", src), ("kernel_law", law)])
        }
        WalkCmd::Reduced { run, p_up, p_down, kernel, coordinate } => match (kernel, coordinate) {
            (Some(p), Some(i)) => {
                let b = BuildingParams::new(run.rank, run.q)?;
                let table = ClassTable::new(&b);
                let k = SemiIsotropicKernel::parse(&read_input(p)?, &table)?;
                let config = ReducedChainConfig::from_factor(&k.factor_kernel(&table), *i, run.q)?;
                let extra = vec![("kernel", p.display().to_string()), ("coordinate", i.to_string())];
                (WalkSpec::Reduced { rank: run.rank, config }, run, extra)
            }
            _ => {
                let config = ReducedChainConfig::new(run.q, parse_rat(p_up, "--p-up")?, parse_rat(p_down, "--p-down")?)?;
                (WalkSpec::Reduced { rank: run.rank, config }, run, Vec::new())
            }
        },
    };
    let mut ds = sample_trajectories(&spec, &run.params())?;
    ds.set_meta("command", format!("walk {}", spec.kind()));
    for (k, v) in extra {
        ds.set_meta(k, v);
    }
    if let Some(t) = stamp {
        ds.set_meta("generated_at", t);
    }
    emit(run.out.as_deref(), ds.to_csv_string().as_bytes())
}

#[derive(Serialize)]
struct EndConvergenceOutput<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a EndConvergenceReport,
}

fn analyze(a: &AnalyzeArgs, stamp: Option<String>) -> CliResult<()> {
    let text = read_input(&a.input)?;
    let ds = Dataset::read_csv(text.as_bytes())?;
    let (json, summary) = if ds.kind == WalkKind::Reduced {
        let r = end_convergence_stats(&ds, a.threshold)?;
        let wrapped = EndConvergenceOutput { schema: "weylwalk.endconv.v1", report: &r };
        let theory = r.theoretical_e.map_or_else(|| "n/a".to_string(), |e| format!("{e:.4}"));
        let summary = format!(
            "runs={} hits={}\nE[Z at hits]={:.4} (se {:.4}, theory {theory})\nY_N >= {}: {:.3} of runs, max Y {}\norder violations: {}\n",
            r.runs,
            r.hits,
            r.mean_z_at_hits,
            r.se_z_at_hits,
            r.threshold,
            r.fraction_reaching_threshold,
            r.max_y,
            r.order_violations
        );
        (to_json(&Stamped { inner: &wrapped, generated_at: stamp })?, summary)
    } else {
        let reference = if a.empirical { None } else { theory_from_meta(&ds)? };
        let r = regularity_report(&ds, reference)?;
        let f = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
        let verdict = |p: bool| if p { "pass" } else { "FAIL" };
        let summary = format!(
            "kind={} rank={} trajectories={} steps={}\nlambda_hat=({}) reference=({}) [{}]\nmu_hat=({})\norbit witness {} distance {:.4}: {}\nstep probe: {}\nbusemann condition: {}\ndistance condition: {}\nconditions agree: {}\noverall: {}\n",
            r.kind,
            r.rank,
            r.trajectories,
            r.steps,
            f(&r.lambda_hat),
            r.lambda_ref.join(", "),
            r.lambda_ref_source,
            f(&r.mu_hat),
            r.orbit_witness_word,
            r.orbit.distance,
            verdict(r.orbit.pass),
            verdict(r.step_probe.pass),
            verdict(r.condition_busemann.pass),
            verdict(r.condition_distance.pass),
            r.conditions_agree,
            verdict(r.pass)
        );
        (to_json(&Stamped { inner: &r, generated_at: stamp })?, summary)
    };
    match &a.report {
        Some(p) => {
            emit(Some(p), &json)?;
            emit(None, summary.as_bytes())
        }
        None => emit(None, &json),
    }
}
