//! End-to-end runs of the `gsbm` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gsbm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsbm")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn ring_generation_and_detection_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let echo = json(&gsbm(dir.path(), &["gen", "ring", "--cliques", "8", "--size", "4", "--output", "g.txt", "--partition", "p.txt"]));
    assert_eq!((echo["n"].as_u64(), echo["edges"].as_u64(), echo["communities"].as_u64()), (Some(32), Some(56), Some(8)));
    let summary = json(&gsbm(dir.path(), &["detect", "--input", "g.txt", "--output", "d.txt", "--seed", "2"]));
    assert_eq!(summary["communities"], 8);
    assert_eq!(summary["objective"], 72.0);
    let report = json(&gsbm(dir.path(), &["eval", "--truth", "p.txt", "--pred", "d.txt", "--metric", "rrnmi"]));
    assert_eq!(report["value"], 1.0);
}

#[test]
fn karate_detection_beats_the_true_split() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "karate.txt", gsbm::datasets::karate_edge_list());
    let (g, factions) = gsbm::datasets::karate::<f64>();
    let q_true = gsbm::gsbm_objective(&g, &factions, 1e-12).unwrap();
    let summary = json(&gsbm(dir.path(), &["detect", "--algo", "gsbm-p", "--input", "karate.txt", "--seed", "7", "--restarts", "20"]));
    assert!(summary["communities"].as_u64().unwrap() >= 2);
    assert!(summary["objective"].as_f64().unwrap() >= q_true);
    assert_eq!(summary["n"], 34);
    assert_eq!(summary["edges"], 78);
}

#[test]
fn every_algorithm_runs_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    json(&gsbm(dir.path(), &["gen", "ring", "--cliques", "5", "--output", "g.txt"]));
    for algo in ["gsbm-p", "gsbm-c", "lpa", "lpa-p"] {
        let s = json(&gsbm(dir.path(), &["detect", "--algo", algo, "--input", "g.txt", "--pref-update", "per-sweep"]));
        assert_eq!(s["algo"], algo);
        assert!(s["communities"].as_u64().unwrap() >= 1);
        assert_eq!(s["sigma2"].is_null(), algo.starts_with("lpa"));
    }
    let cpm = json(&gsbm(dir.path(), &["detect", "--algo", "cpm", "--mu", "3", "--input", "g.txt"]));
    assert_eq!(cpm["communities"], 20);
}

#[test]
fn lfr_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "network.dat", "1 2 1\n2 1 1\n2 3 1\n3 2 1\n1 3 1\n3 1 1\n3 4 0.1\n4 3 0.1\n4 5 1\n5 4 1\n");
    write(dir.path(), "community.dat", "1 1\n2 1\n3 1\n4 2\n5 2\n");
    let s = json(&gsbm(dir.path(), &["detect", "--lfr-net", "network.dat", "--lfr-comm", "community.dat"]));
    assert_eq!(s["n"], 5);
    assert_eq!(s["edges"], 5);
}

#[test]
fn exit_codes_follow_the_failure_class() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "neg.txt", "0 2 5\n1 2 5\n0 1 -1\n");
    let out = gsbm(dir.path(), &["detect", "--algo", "gsbm-p", "--input", "neg.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));

    write(dir.path(), "bad.txt", "0 1 x\n");
    assert_eq!(gsbm(dir.path(), &["detect", "--input", "bad.txt"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["detect", "--input", "missing.txt"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["detect", "--bogus"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["detect", "--algo", "cpm", "--input", "neg.txt"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["gen", "ring", "--cliques", "2", "--output", "r.txt"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["gen", "er", "--n", "10", "--avg-degree", "2", "--output", "e.txt"]).status.code(), Some(1));
    assert_eq!(gsbm(dir.path(), &["--help"]).status.code(), Some(0));

    write(dir.path(), "three.txt", "0 0\n1 1\n2 1\n");
    write(dir.path(), "four.txt", "0 0\n1 1\n2 1\n3 0\n");
    assert_eq!(gsbm(dir.path(), &["eval", "--truth", "three.txt", "--pred", "four.txt"]).status.code(), Some(1));
    write(dir.path(), "one.txt", "0 0\n1 0\n2 0\n");
    assert_eq!(gsbm(dir.path(), &["eval", "--truth", "one.txt", "--pred", "three.txt"]).status.code(), Some(3));
}

#[test]
fn eval_examples_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.txt", "0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n");
    write(dir.path(), "b.txt", "0 0\n1 0\n2 1\n3 1\n4 1\n5 1\n");
    write(dir.path(), "one.txt", "0 7\n1 7\n2 7\n3 7\n4 7\n5 7\n");
    assert_eq!(json(&gsbm(dir.path(), &["eval", "--truth", "a.txt", "--pred", "a.txt", "--metric", "rrnmi"]))["value"], 1.0);
    assert_eq!(json(&gsbm(dir.path(), &["eval", "--truth", "a.txt", "--pred", "one.txt", "--metric", "nmi"]))["value"], 0.0);
    let args = ["eval", "--truth", "a.txt", "--pred", "b.txt", "--metric", "rnmi", "--seed", "9", "--samples", "50"];
    let first = gsbm(dir.path(), &args);
    let second = gsbm(dir.path(), &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let report = json(&first);
    assert_eq!((report["samples"].as_u64(), report["seed"].as_u64()), (Some(50), Some(9)));
}

#[test]
fn generators_write_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let er = json(&gsbm(dir.path(), &["gen", "er", "--n", "1000", "--avg-degree", "100", "--seed", "1", "--output", "er.txt"]));
    let m = er["edges"].as_f64().unwrap();
    // Binomial(499500, 100/999): sd about 212.
    assert!((m - 50_000.0).abs() < 4.0 * 212.0, "{m}");
    let planted = json(&gsbm(
        dir.path(),
        &["gen", "planted", "--n", "60", "--k", "3", "--win", "1", "--wout", "0.1", "--sigma", "0.05", "--seed", "2", "--output", "pl.txt", "--partition", "pl.part"],
    ));
    assert_eq!((planted["n"].as_u64(), planted["communities"].as_u64()), (Some(60), Some(3)));
    assert_eq!(planted["params"]["wout"], 0.1);
    let text = std::fs::read_to_string(dir.path().join("pl.txt")).unwrap();
    let g: gsbm::Graph = gsbm::parse_edge_list(&text).unwrap();
    assert_eq!(g.edge_count() as u64, planted["edges"].as_u64().unwrap());
    let sample = json(&gsbm(dir.path(), &["gen", "gsbm", "--sizes", "10,10,10", "--sigma", "0", "--seed", "0", "--output", "s.txt", "--partition", "s.part"]));
    assert_eq!(sample["edges"], 3 * 45);
    let again = gsbm(dir.path(), &["gen", "planted", "--n", "60", "--k", "3", "--win", "1", "--wout", "0.1", "--sigma", "0.05", "--seed", "2", "--output", "pl2.txt"]);
    assert!(again.status.success());
    assert_eq!(text, std::fs::read_to_string(dir.path().join("pl2.txt")).unwrap());
}

fn bench_csv(dir: &Path, config: &str, extra: &[&str]) -> Vec<csv::StringRecord> {
    write(dir, "bench.toml", config);
    let mut args = vec!["bench", "--config", "bench.toml"];
    args.extend_from_slice(extra);
    let out = gsbm(dir, &args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["kind", "n", "param_name", "param_value", "graph_index", "algo", "seed", "communities", "objective", "metric_name", "metric_value", "wall_time_ms", "error"]
    );
    reader.records().map(Result::unwrap).collect()
}

#[test]
fn ring_sweep_recovers_every_clique_count() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        seed = 11
        graphs_per_point = 3
        algos = ["gsbm-p", "lpa"]
        [generator]
        kind = "ring"
        size = 4
        [sweep]
        param = "cliques"
        values = [8, 12, 16, 20, 24]
    "#;
    let rows = bench_csv(dir.path(), config, &["--threads", "2"]);
    assert_eq!(rows.len(), 5 * (3 * 2 + 2));
    for r in rows.iter().filter(|r| &r[5] == "gsbm-p") {
        assert_eq!(&r[7], &r[3], "{r:?}");
        assert_eq!(&r[9], "rrnmi");
        assert!(!r[11].is_empty());
    }
}

#[test]
fn bench_means_match_their_rows_and_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        seed = 5
        graphs_per_point = 4
        restarts = 2
        algos = ["gsbm-p", "gsbm-c", "lpa"]
        metric = "nmi"
        [generator]
        kind = "planted"
        n = 30
        k = 3
        w_in = 1.0
        sigma = 0.05
        [sweep]
        param = "w_out"
        values = [0.0, 0.3, 0.6]
    "#;
    let rows = bench_csv(dir.path(), config, &["--no-timing"]);
    let again = bench_csv(dir.path(), config, &["--no-timing", "--threads", "1"]);
    assert_eq!(rows, again);
    for mean in rows.iter().filter(|r| &r[4] == "mean") {
        let members: Vec<&csv::StringRecord> =
            rows.iter().filter(|r| &r[4] != "mean" && r[3] == mean[3] && r[5] == mean[5]).collect();
        assert_eq!(members.len(), 4);
        for col in [7, 8, 10] {
            let sum: f64 = members.iter().map(|r| r[col].parse::<f64>().unwrap()).sum();
            assert_eq!(mean[col].parse::<f64>().unwrap(), sum / 4.0, "column {col} of {mean:?}");
        }
        assert!(mean[11].is_empty());
    }
}

#[test]
fn planted_sweep_quality_falls_with_background_weight() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        seed = 2
        graphs_per_point = 5
        restarts = 3
        algos = ["gsbm-p"]
        [generator]
        kind = "planted"
        n = 60
        k = 3
        w_in = 1.0
        sigma = 0.05
        [sweep]
        param = "w_out"
        values = [0.0, 0.5, 0.95]
    "#;
    let rows = bench_csv(dir.path(), config, &["--no-timing"]);
    let means: Vec<f64> = rows.iter().filter(|r| &r[4] == "mean").map(|r| r[10].parse().unwrap()).collect();
    assert_eq!(means[0], 1.0);
    assert!(means.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{means:?}");
    assert!(means[2] < means[0]);
}

#[test]
fn er_sweep_shrinks_toward_one_community() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        seed = 1
        graphs_per_point = 2
        algos = ["gsbm-p"]
        [generator]
        kind = "er"
        n = 1000
        [sweep]
        param = "avg_degree"
        values = [10, 40, 100]
    "#;
    let rows = bench_csv(dir.path(), config, &["--no-timing"]);
    assert!(rows.iter().all(|r| r[9].is_empty() && r[10].is_empty() && r[12].is_empty()));
    let means: Vec<f64> = rows.iter().filter(|r| &r[4] == "mean").map(|r| r[7].parse().unwrap()).collect();
    assert!(means.windows(2).all(|w| w[1] < w[0]), "{means:?}");
    assert_eq!(means[2], 1.0);
}

#[test]
fn bench_records_row_failures_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"
        algos = ["gsbm-p", "lpa"]
        [generator]
        kind = "ring"
        [sweep]
        param = "cliques"
        values = [2, 4]
    "#;
    let rows = bench_csv(dir.path(), config, &["--no-timing"]);
    let failed: Vec<_> = rows.iter().filter(|r| &r[3] == "2").collect();
    assert!(failed.iter().all(|r| !r[12].is_empty()));
    assert!(rows.iter().filter(|r| &r[3] == "4").all(|r| r[12].is_empty()));
    assert!(rows.iter().any(|r| &r[3] == "4" && &r[5] == "gsbm-p" && &r[7] == "4"));

    // LPA-P needs nonnegative weights; planted graphs keep negative noise draws.
    let planted = r#"
        algos = ["lpa-p", "lpa"]
        [generator]
        kind = "planted"
        n = 12
        k = 2
        w_in = 1.0
        sigma = 0.5
        [sweep]
        param = "w_out"
        values = [0.0]
    "#;
    let rows = bench_csv(dir.path(), planted, &["--no-timing"]);
    assert!(rows.iter().filter(|r| &r[5] == "lpa-p" && &r[4] != "mean").all(|r| r[12].contains("negative")));
    assert!(rows.iter().filter(|r| &r[5] == "lpa").all(|r| r[12].is_empty()));

    write(dir.path(), "broken.toml", "algos = [\"nope\"]\n");
    assert_eq!(gsbm(dir.path(), &["bench", "--config", "broken.toml"]).status.code(), Some(1));
}
