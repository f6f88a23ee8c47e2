//! File formats, sweep determinism and the command-line surface.

use std::process::Command;

use hierpin::error::Error;
use hierpin::experiments::checkpoint::{read_pool, write_pool};
use hierpin::experiments::csv::{columns, write_csv};
use hierpin::experiments::{checkpoint_pool, restore_pool, run_sweep, RunRecord, SweepSpec, Task};
use hierpin::pool::Pool;
use hierpin::rng::Lineage;
use hierpin::{DisorderModel, ModelParams};

fn spec(task: &str, extra: &str) -> SweepSpec {
    SweepSpec::from_json(&format!(
        r#"{{"model": {{"s": 4, "b": "sqrt(s)"}}, "task": "{task}", "beta_grid": [0.5, 1.0],
            "h_grid": [0.001, 0.4], "n": 4, "seed": 3 {extra}}}"#
    ))
    .unwrap()
}

fn csv_bytes(rec: &RunRecord) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(rec, &mut out).unwrap();
    out
}

const SMALL: &str = r#", "mc": {"pool_size": 500, "replicas": 3, "max_level": 5},
    "certificates": {"deloc": {"thetas": [0.9, 0.95], "marginal_etas": [0.1, 0.2],
                               "homogeneous_deltas": [0.05], "levels": [2, 4, 8], "refine_rounds": 2},
                     "lemma22": {"c5_grid": [0.05, 0.1]}}"#;

#[test]
fn csv_rows_match_schema_for_every_task() {
    for task in ["annealed", "variance", "mc", "certify_deloc", "certify_loc", "bracket", "green", "lemma22"] {
        let s = spec(task, SMALL);
        let rec = run_sweep(&s).unwrap();
        let bytes = csv_bytes(&rec);
        let mut rd = csv::Reader::from_reader(&bytes[..]);
        let width = rd.headers().unwrap().len();
        assert_eq!(width, columns(s.task).len());
        let rows: Vec<_> = rd.records().map(|r| r.unwrap()).collect();
        assert!(!rows.is_empty(), "{task}");
        assert!(rows.iter().all(|r| r.len() == width), "{task}");
    }
}

#[test]
fn identical_specs_give_identical_csv() {
    let s = spec("mc", SMALL);
    let a = csv_bytes(&run_sweep(&s).unwrap());
    let b = csv_bytes(&run_sweep(&s).unwrap());
    assert_eq!(a, b);
    let other = spec("mc", &SMALL.replace("\"pool_size\": 500", "\"pool_size\": 501"));
    assert_ne!(a, csv_bytes(&run_sweep(&other).unwrap()));
}

#[test]
fn record_serializes_to_json() {
    let rec = run_sweep(&spec("certify_loc", "")).unwrap();
    let text = serde_json::to_string(&rec).unwrap();
    let back: RunRecord = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn sqrt_keyword_at_full_precision() {
    for s in [2u32, 3, 4, 7] {
        let spec = SweepSpec::from_json(&format!(
            r#"{{"model": {{"s": {s}, "b": "sqrt(s)"}}, "task": "annealed", "h_grid": [0]}}"#
        ))
        .unwrap();
        assert_eq!(spec.model.b, (s as f64).sqrt());
        assert_eq!(spec.task, Task::Annealed);
    }
}

#[test]
fn malformed_config_points_at_line() {
    let err = SweepSpec::from_json("{\n \"model\": {\"s\": 4,\n \"b\": 2},\n \"task\": \"annealed\",,\n}").unwrap_err();
    let Error::Validation(msgs) = err else { panic!("{err:?}") };
    assert!(msgs[0].contains("line 4"), "{msgs:?}");
}

#[test]
fn checkpoint_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pool.bin");
    let p = ModelParams::new(4, 2.0, 0.7, 0.02).unwrap();
    for d in [DisorderModel::Gaussian, DisorderModel::BinaryPm1] {
        let pool = Pool::new(p, d, 1000, Lineage::new(4, 1)).unwrap().advance_to(4).unwrap();
        checkpoint_pool(&pool, &path).unwrap();
        let back = restore_pool(&path).unwrap();
        assert_eq!(back, pool);
        assert!(back.log_samples.iter().zip(&pool.log_samples).all(|(a, b)| a.to_bits() == b.to_bits()));
        let (x, y) = (back.advance_to(6).unwrap(), pool.advance_to(6).unwrap());
        assert_eq!(x.log_samples, y.log_samples);
    }
}

#[test]
fn table_disorder_survives_checkpoint_bytes() {
    let tab = hierpin::disorder::TableMgf::from_fn(3.0, 30, |t| 0.5 * t * t).unwrap();
    let pool = Pool {
        level: 2,
        log_samples: vec![0.25, -0.5],
        params: ModelParams::new(3, 2.0, 0.4, 0.0).unwrap(),
        disorder: DisorderModel::Table(tab),
        lineage: Lineage::new(1, 2),
    };
    let mut buf = Vec::new();
    write_pool(&pool, &mut buf).unwrap();
    assert_eq!(read_pool(&buf[..]).unwrap(), pool);
}

#[test]
fn corrupt_checkpoint_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.bin");
    std::fs::write(&path, b"HPINPOOL\x01\x00\x00\x00\x04").unwrap();
    assert!(matches!(restore_pool(&path), Err(Error::Parse { .. })));
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hierpin"))
}

#[test]
fn cli_exit_codes_and_output() {
    let out = cli().args(["annealed", "--h", "0.01,0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("h,status,levels"));

    let out = cli().args(["mc", "--beta", "0.3", "--h", "0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed is mandatory"));

    let out = cli().args(["lemma22", "--b", "3", "--beta", "0.1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_writes_files_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("f.csv");
    let status = cli()
        .args(["annealed", "--h", "1e-6,1e-5,1e-4,1e-3", "--out"])
        .arg(&csv_path)
        .status()
        .unwrap();
    assert!(status.success());
    let out = cli().args(["fit", "--kind", "power-law", "--x", "h", "--y", "free_energy"]).arg(&csv_path).output().unwrap();
    assert!(out.status.success());
    let fit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((fit["exponent"].as_f64().unwrap() - 2.0).abs() < 0.05);

    let json_path = dir.path().join("r.json");
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"model": {"s": 4, "b": 2}, "task": "green", "n": 3}"#).unwrap();
    let status = cli().arg("--config").arg(&cfg).arg("--out").arg(&json_path).arg("green").status().unwrap();
    assert!(status.success());
    let rec: RunRecord = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(rec.points.len(), 4);
}
