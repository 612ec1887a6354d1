//! End-to-end checks of the command-line surface: file formats, exit codes,
//! schedule-invariant digests, and report schemas.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bucketgraph"))
}

fn work_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir()
        .join("bucketgraph-cli-tests")
        .join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn CLI");
    assert!(
        out.status.success(),
        "command failed: {:?}\nstdout: {}\nstderr: {}",
        cmd,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn gen_run_produces_canonical_distances() {
    let dir = work_dir("gen_run");
    let wel = dir.join("p3.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "path",
        "--n",
        "3",
        "--weight",
        "1",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let out_file = dir.join("p3.out");
    run_ok(bin().args([
        "run",
        "--algo",
        "sssp",
        "--graph",
        wel.to_str().unwrap(),
        "--source",
        "0",
        "--out",
        out_file.to_str().unwrap(),
        "--report",
        dir.join("p3.json").to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&out_file).unwrap();
    assert_eq!(text, "0 0\n1 1\n2 2\n");
}

#[test]
fn eager_and_lazy_runs_share_a_digest() {
    let dir = work_dir("digest");
    let wel = dir.join("r.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "uniform_random",
        "--n",
        "64",
        "--m",
        "512",
        "--seed",
        "7",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let digest_of = |schedule: &str, name: &str| -> String {
        let rep = dir.join(name);
        run_ok(bin().args([
            "run",
            "--algo",
            "sssp",
            "--graph",
            wel.to_str().unwrap(),
            "--schedule",
            schedule,
            "--delta",
            "64",
            "--threads",
            "4",
            "--report",
            rep.to_str().unwrap(),
        ]));
        let json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        assert_eq!(json["schema"], 1);
        json["digest"].as_str().unwrap().to_string()
    };
    let eager = digest_of("eager_with_fusion", "eager.json");
    let lazy = digest_of("lazy", "lazy.json");
    assert_eq!(eager, lazy);
}

#[test]
fn kcore_with_coarsening_exits_2() {
    let dir = work_dir("kcore_delta");
    let wel = dir.join("g.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "uniform_random",
        "--n",
        "16",
        "--m",
        "64",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let out = bin()
        .args([
            "run",
            "--algo",
            "kcore",
            "--graph",
            wel.to_str().unwrap(),
            "--delta",
            "4",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("coarsening"), "diagnostic was: {err}");
}

#[test]
fn missing_graph_file_exits_1() {
    let out = bin()
        .args([
            "run",
            "--algo",
            "sssp",
            "--graph",
            "/definitely/not/here.wel",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_edge_line_exits_1_with_line_number() {
    let dir = work_dir("malformed");
    let wel = dir.join("bad.wel");
    std::fs::write(&wel, "0 1 5\n0 -1 5\n").unwrap();
    let out = bin()
        .args(["run", "--algo", "sssp", "--graph", wel.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2"));
}

#[test]
fn verify_passes_on_random_graph() {
    let dir = work_dir("verify");
    let wel = dir.join("g.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "uniform_random",
        "--n",
        "48",
        "--m",
        "256",
        "--seed",
        "3",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let out = run_ok(bin().args([
        "verify",
        "--algo",
        "sssp",
        "--graph",
        wel.to_str().unwrap(),
        "--source",
        "5",
        "--threads",
        "2",
    ]));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_covers_kcore_and_setcover() {
    let dir = work_dir("verify_more");
    let wel = dir.join("g.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "uniform_random",
        "--n",
        "32",
        "--m",
        "160",
        "--seed",
        "9",
        "--out",
        wel.to_str().unwrap(),
    ]));
    run_ok(bin().args([
        "verify",
        "--algo",
        "kcore",
        "--graph",
        wel.to_str().unwrap(),
    ]));

    // Bipartite incidence: sets 0..8 cover elements 8..40.
    let bip = dir.join("bip.wel");
    let mut text = String::from("# n 40\n");
    for e in 8u32..40 {
        text.push_str(&format!("{} {} 1\n", e % 8, e));
        text.push_str(&format!("{} {} 1\n", (e + 3) % 8, e));
    }
    std::fs::write(&bip, text).unwrap();
    run_ok(bin().args([
        "verify",
        "--algo",
        "setcover",
        "--graph",
        bip.to_str().unwrap(),
        "--num-sets",
        "8",
    ]));
}

#[test]
fn grid_gen_writes_coords_and_astar_runs() {
    let dir = work_dir("astar");
    let wel = dir.join("grid.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "grid",
        "--rows",
        "8",
        "--cols",
        "8",
        "--wlo",
        "1",
        "--whi",
        "10",
        "--seed",
        "2",
        "--out",
        wel.to_str().unwrap(),
    ]));
    assert!(dir.join("grid.coords").exists());
    let rep = dir.join("astar.json");
    run_ok(bin().args([
        "run",
        "--algo",
        "astar",
        "--graph",
        wel.to_str().unwrap(),
        "--coords",
        dir.join("grid.coords").to_str().unwrap(),
        "--source",
        "0",
        "--target",
        "63",
        "--report",
        rep.to_str().unwrap(),
    ]));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(json["algorithm"], "astar");
}

#[test]
fn tune_reports_trials_and_best() {
    let dir = work_dir("tune");
    let wel = dir.join("p.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "path",
        "--n",
        "2000",
        "--weight",
        "1",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let rep = dir.join("tune.json");
    run_ok(bin().args([
        "tune",
        "--algo",
        "sssp",
        "--graph",
        wel.to_str().unwrap(),
        "--budget",
        "4",
        "--tune-seed",
        "1",
        "--report",
        rep.to_str().unwrap(),
    ]));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(json["algo"], "sssp");
    assert_eq!(json["trials"].as_array().unwrap().len(), 4);
    let best = json["best"].as_u64().unwrap() as usize;
    assert!(json["trials"][best]["valid"].as_bool().unwrap());
}

#[test]
fn bench_prints_matrix_rows() {
    let dir = work_dir("bench");
    let wel = dir.join("p.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "path",
        "--n",
        "5000",
        "--weight",
        "1",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let out = run_ok(bin().args([
        "bench",
        "--algo",
        "sssp",
        "--graph",
        wel.to_str().unwrap(),
        "--delta",
        "256",
        "--runs",
        "1",
    ]));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("eager_with_fusion"));
    assert!(text.contains("rounds"));
    assert!(text.contains("p.wel"));
}

#[test]
fn run_covers_every_algorithm() {
    let dir = work_dir("all_algos");
    let wel = dir.join("g.wel");
    run_ok(bin().args([
        "gen", "--kind", "uniform_random", "--n", "40", "--m", "200",
        "--seed", "11", "--out", wel.to_str().unwrap(),
    ]));

    run_ok(bin().args([
        "run", "--algo", "wbfs", "--graph", wel.to_str().unwrap(),
        "--source", "1", "--out", dir.join("wbfs.out").to_str().unwrap(),
    ]));
    let wbfs_text = std::fs::read_to_string(dir.join("wbfs.out")).unwrap();
    assert_eq!(wbfs_text.lines().count(), 40);

    run_ok(bin().args([
        "run", "--algo", "ppsp", "--graph", wel.to_str().unwrap(),
        "--source", "1", "--target", "30",
        "--out", dir.join("ppsp.out").to_str().unwrap(),
    ]));
    let ppsp_text = std::fs::read_to_string(dir.join("ppsp.out")).unwrap();
    assert!(ppsp_text.starts_with("30 "));

    run_ok(bin().args([
        "run", "--algo", "kcore", "--graph", wel.to_str().unwrap(),
        "--out", dir.join("kcore.out").to_str().unwrap(),
    ]));
    let kcore_text = std::fs::read_to_string(dir.join("kcore.out")).unwrap();
    assert_eq!(kcore_text.lines().count(), 40);

    // Bipartite instance for set cover: sets 0..6, elements 6..30.
    let bip = dir.join("bip.wel");
    let mut text = String::from("# n 30\n");
    for e in 6u32..30 {
        text.push_str(&format!("{} {} 1\n", e % 6, e));
    }
    std::fs::write(&bip, text).unwrap();
    run_ok(bin().args([
        "run", "--algo", "setcover", "--graph", bip.to_str().unwrap(),
        "--num-sets", "6", "--out", dir.join("cover.out").to_str().unwrap(),
    ]));
    let cover_text = std::fs::read_to_string(dir.join("cover.out")).unwrap();
    assert!(!cover_text.trim().is_empty());
}

#[test]
fn sources_file_averages_timing() {
    let dir = work_dir("sources");
    let wel = dir.join("g.wel");
    run_ok(bin().args([
        "gen",
        "--kind",
        "uniform_random",
        "--n",
        "64",
        "--m",
        "512",
        "--seed",
        "4",
        "--out",
        wel.to_str().unwrap(),
    ]));
    let sources = dir.join("sources.txt");
    std::fs::write(&sources, "0\n7\n13\n").unwrap();
    let rep = dir.join("rep.json");
    run_ok(bin().args([
        "run",
        "--algo",
        "sssp",
        "--graph",
        wel.to_str().unwrap(),
        "--sources-file",
        sources.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(json["time_ms"].as_f64().unwrap() >= 0.0);
}
