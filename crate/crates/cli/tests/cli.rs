//! End-to-end checks of the `weylwalk` binary: golden outputs, schema
//! fields, determinism and exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_weylwalk"));
    c.env_remove("WEYLWALK_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn weylwalk")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weylwalk-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn rootsys_c2_table_matches_golden() {
    let out = stdout(&["rootsys", "show", "--type", "C", "--rank", "2"]);
    assert_eq!(out, golden("rootsys_c2.txt"));
    assert!(out.contains("omega_1         e1\n"));
    assert!(out.contains("alpha_2         2e2\n"));
}

#[test]
fn rootsys_json_schema() {
    let v = json(&stdout(&["rootsys", "show", "--type", "C", "--rank", "2", "--json"]));
    assert_eq!(v["schema"], "weylwalk.rootsys.v1");
    assert_eq!(v["simple_roots"], json(r#"[["1","-1"],["0","2"]]"#));
    assert_eq!(v["fundamental_coweights"], json(r#"[["1","0"],["1/2","1/2"]]"#));
    assert_eq!(v["highest_root"], json("[2,1]"));
    assert_eq!(v["weyl_order"], 8);
}

#[test]
fn c_count_prints_four_two_one() {
    let out = stdout(&["oracle", "c-count", "--rank", "2", "--q", "2", "--nu", "w1"]);
    assert_eq!(out, golden("ccount_a2_w1.csv"));
    let counts: Vec<u64> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, vec![4, 2, 1]);
}

#[test]
fn c_count_does_not_depend_on_the_basepoint() {
    let at_origin = stdout(&["oracle", "c-count", "--rank", "2", "--q", "2", "--nu", "w2"]);
    let body = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    for seed in ["1", "2", "3"] {
        let moved = stdout(&[
            "oracle", "c-count", "--rank", "2", "--q", "2", "--nu", "w2", "--basepoint-steps", "5", "--seed", seed,
        ]);
        assert_eq!(body(&moved), body(&at_origin));
    }
    let single = stdout(&["oracle", "c-count", "--rank", "2", "--q", "2", "--nu", "w1", "--mu", "0,-1"]);
    assert!(single.ends_with("mu_1,mu_2,count\n0,-1,4\n"));
}

#[test]
fn sphere_and_decompose_golden() {
    assert_eq!(stdout(&["building", "sphere", "--rank", "1", "--q", "2", "--nu", "2w1"]), golden("sphere_a1_2w1.csv"));
    let out = stdout(&["oracle", "decompose", "--q", "2", "--matrix", r#"[["t","1"],["0","1/t"]]"#]);
    assert_eq!(out, golden("decompose.json"));
    assert_eq!(json(&out)["schema"], "weylwalk.decompose.v1");
}

#[test]
fn zero_steps_gives_one_checkpoint_at_the_origin() {
    let out = stdout(&["walk", "iso", "--rank", "1", "--q", "2", "--steps", "0", "--trajectories", "1"]);
    assert_eq!(out, golden("walk_iso_steps0.csv"));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, vec!["traj,n,h_1,lam_1", "0,0,0,0"]);
}

#[test]
fn reduced_chain_golden() {
    let args = ["walk", "reduced", "--steps", "20", "--trajectories", "2", "--seed", "5", "--checkpoint-every", "5"];
    assert_eq!(stdout(&args), golden("walk_reduced_small.csv"));
}

#[test]
fn identical_flags_give_identical_bytes() {
    let args = ["walk", "iso", "--rank", "2", "--steps", "60", "--trajectories", "4", "--seed", "3"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let threaded = bin().args(args).env("WEYLWALK_THREADS", "3").output().unwrap();
    assert_eq!(String::from_utf8(threaded.stdout).unwrap(), a);
    assert!(!a.contains("generated_at"));
    let mut stamped = args.to_vec();
    stamped.push("--stamp");
    assert!(stdout(&stamped).contains("# generated_at="));
}

#[test]
fn walk_then_analyze() {
    let dir = scratch("analyze");
    let csv = dir.join("tree.csv");
    let report = dir.join("tree.json");
    stdout(&[
        "walk", "iso", "--steps", "4000", "--trajectories", "20", "--seed", "7", "--out", csv.to_str().unwrap(),
    ]);
    let summary = stdout(&["analyze", "--in", csv.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert!(summary.contains("overall: pass"), "{summary}");
    let v = json(&fs::read_to_string(&report).unwrap());
    assert_eq!(v["schema"], "weylwalk.report.v1");
    for key in ["lambda_hat", "mu_hat", "orbit_witness_word", "residuals", "step_probe", "conditions_agree", "pass"] {
        assert!(v.get(key).is_some(), "report lacks {key}");
    }
    assert_eq!(v["lambda_ref"], json(r#"["1/3"]"#));

    let reduced = dir.join("reduced.csv");
    stdout(&["walk", "reduced", "--steps", "2000", "--trajectories", "5", "--out", reduced.to_str().unwrap()]);
    let v = json(&stdout(&["analyze", "--in", reduced.to_str().unwrap()]));
    assert_eq!(v["schema"], "weylwalk.endconv.v1");
    assert_eq!(v["theoretical_e"], 0.25);
    assert_eq!(v["order_violations"], 0);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn kernel_and_generator_files() {
    let dir = scratch("files");
    let kernel = dir.join("k.txt");
    fs::write(&kernel, "# toward the end only\nnu=1 mu=1 p=1\n").unwrap();
    let out = stdout(&["walk", "iso", "--steps", "5", "--trajectories", "1", "--kernel", kernel.to_str().unwrap()]);
    assert!(out.lines().any(|l| l == "0,5,5,5"), "{out}");

    let gens = dir.join("g.txt");
    fs::write(&gens, "p=1 [[\"1/t\",\"0\"],[\"0\",\"1\"]]\n").unwrap();
    let out = stdout(&["walk", "group", "--steps", "3", "--trajectories", "1", "--generators", gens.to_str().unwrap()]);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("0,3,"), "{out}");

    let bad = dir.join("bad.txt");
    fs::write(&bad, "nu=1 mu=1 p=2\n").unwrap();
    let out = run(&["walk", "iso", "--kernel", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_supplies_missing_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "steps=0\ntrajectories=1\nrank=1\n").unwrap();
    let out = stdout(&["walk", "iso", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out, golden("walk_iso_steps0.csv"));
    let out = stdout(&["walk", "iso", "--config", cfg.to_str().unwrap(), "--steps", "4"]);
    assert!(out.contains("# steps=4\n"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["walk", "iso", "--bogus"]), Some(1));
    assert_eq!(code(&["rootsys", "show", "--type", "G", "--rank", "2"]), Some(1));
    assert_eq!(code(&["walk", "iso", "--q", "4"]), Some(1));
    assert_eq!(code(&["building", "sphere", "--rank", "2", "--q", "2", "--nu", "5w1"]), Some(1));
    assert_eq!(code(&["oracle", "decompose", "--q", "2", "--matrix", r#"[["0"]]"#]), Some(1));
    assert_eq!(code(&["walk", "reduced", "--p-up", "3/4", "--p-down", "1/2"]), Some(1));
    assert_eq!(code(&["analyze", "--in", "/definitely/missing.csv"]), Some(1));
    assert_eq!(code(&["walk", "iso", "--steps", "1", "--out", "/definitely/missing/out.csv"]), Some(2));
    let bad_threads = bin().args(["rootsys", "show", "--type", "A", "--rank", "1"]).env("WEYLWALK_THREADS", "0").output();
    assert_eq!(bad_threads.unwrap().status.code(), Some(1));

    let distinct = |args: &[&str]| String::from_utf8(run(args).stderr).unwrap();
    let guard = distinct(&["building", "sphere", "--rank", "2", "--q", "2", "--nu", "5w1"]);
    let field = distinct(&["walk", "iso", "--q", "4"]);
    assert!(guard.contains("guard") && field.contains("q=4") && guard != field);
}
