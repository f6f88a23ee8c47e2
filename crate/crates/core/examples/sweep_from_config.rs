//! Drives a sweep from a JSON configuration and writes the CSV table.
//!
//! ```text
//! cargo run --release --example sweep_from_config -- [config.json] [out.csv]
//! ```

use std::path::PathBuf;

use hierpin::experiments::{emit_csv, load_config, run_sweep, SweepSpec};

const DEMO: &str = r#"{
  "model": { "s": 4, "b": "sqrt(s)" },
  "disorder": { "kind": "gaussian" },
  "task": "certify_loc",
  "beta_grid": [0.1, 0.3, 0.5],
  "h_grid": { "from": 0.05, "to": 0.5, "points": 4, "scale": "log" },
  "seed": 7
}"#;

fn main() -> hierpin::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = match args.next() {
        Some(path) => load_config(&PathBuf::from(path))?,
        None => SweepSpec::from_json(DEMO)?,
    };
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep.csv".into()));
    let record = run_sweep(&spec)?;
    emit_csv(&record, &out)?;
    println!(
        "{} rows for task {:?} in {:.2}s, spec {} -> {}",
        record.points.len(),
        spec.task,
        record.wall_time_secs,
        &record.spec_hash[..12],
        out.display()
    );
    Ok(())
}
