use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hierpin::error::Error;
use hierpin::experiments::csv::write_csv;
use hierpin::experiments::{fit_double_log, fit_power_law, load_config, run_sweep, SweepSpec, Task};

#[derive(Parser)]
#[command(name = "hierpin", version, about = "Hierarchical pinning model: recursions, pool Monte Carlo and certificates")]
struct Cli {
    /// JSON sweep configuration; inline flags override its grids.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (`.json` for the full record, CSV otherwise; default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Replay certified inequality chains in double-double precision.
    #[arg(long, global = true)]
    strict_certificates: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Inline {
    #[arg(long)]
    s: Option<u32>,
    /// Number or keyword such as `sqrt(s)`.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Vec<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    h: Vec<String>,
    /// System level (for `s^-n` and the green task).
    #[arg(long)]
    n: Option<u32>,
    /// `gaussian` or `binary`.
    #[arg(long)]
    disorder: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Deloc,
    Loc,
}

#[derive(Clone, Copy, ValueEnum)]
enum FitKind {
    PowerLaw,
    DoubleLog,
}

#[derive(Subcommand)]
enum Cmd {
    Annealed(Inline),
    Variance(Inline),
    Mc(Inline),
    Certify {
        #[arg(long, value_enum)]
        kind: CertKind,
        #[command(flatten)]
        inline: Inline,
    },
    Bracket(Inline),
    Green(Inline),
    Lemma22(Inline),
    /// Fit two columns of a CSV file.
    Fit {
        #[arg(long, value_enum)]
        kind: FitKind,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        file: PathBuf,
    },
}

fn number(text: &str) -> Value {
    text.parse::<f64>().map(|x| json!(x)).unwrap_or_else(|_| json!(text))
}

fn build_spec(cli: &Cli, task: Task, inline: &Inline) -> hierpin::Result<SweepSpec> {
    let mut v = match &cli.config {
        Some(path) => {
            let spec = load_config(path)?;
            serde_json::to_value(&spec).expect("specs serialize")
        }
        None => json!({ "model": { "s": 4, "b": 2 } }),
    };
    let obj = v.as_object_mut().expect("object");
    obj.insert("task".into(), json!(task));
    if let Some(s) = inline.s {
        obj["model"]["s"] = json!(s);
    }
    if let Some(b) = &inline.b {
        obj["model"]["b"] = number(b);
    }
    if !inline.beta.is_empty() {
        obj.insert("beta_grid".into(), inline.beta.iter().map(|x| number(x)).collect());
    }
    if !inline.h.is_empty() {
        obj.insert("h_grid".into(), inline.h.iter().map(|x| number(x)).collect());
    }
    if let Some(n) = inline.n {
        obj.insert("n".into(), json!(n));
    }
    if let Some(d) = &inline.disorder {
        obj.insert("disorder".into(), json!({ "kind": d }));
    }
    if let Some(seed) = cli.seed {
        obj.insert("seed".into(), json!(seed));
    }
    if cli.strict_certificates {
        let certs = obj.entry("certificates").or_insert_with(|| json!({}));
        certs["deloc"]["strict"] = json!(true);
        certs["loc"]["strict"] = json!(true);
    }
    if obj.get("seed").is_some_and(Value::is_null) {
        obj.remove("seed");
    }
    if obj.get("n").is_some_and(Value::is_null) {
        obj.remove("n");
    }
    SweepSpec::from_json(&v.to_string())
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        Error::Cap { .. } => ExitCode::from(3),
        Error::Io { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run_fit(kind: FitKind, x: &str, y: &str, file: &PathBuf) -> Result<String, String> {
    let mut rd = csv::Reader::from_path(file).map_err(|e| e.to_string())?;
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or(format!("no column {name}"));
    let (ix, iy) = (col(x)?, col(y)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let get = |i: usize| -> Result<f64, String> {
            rec[i].parse().map_err(|_| format!("row {}: bad number {:?}", line + 2, &rec[i]))
        };
        xs.push(get(ix)?);
        ys.push(get(iy)?);
    }
    let out = match kind {
        FitKind::PowerLaw => serde_json::to_string_pretty(&fit_power_law(&xs, &ys).map_err(|e| e.to_string())?),
        FitKind::DoubleLog => serde_json::to_string_pretty(&fit_double_log(&xs, &ys).map_err(|e| e.to_string())?),
    };
    out.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (task, inline) = match &cli.cmd {
        Cmd::Annealed(i) => (Task::Annealed, i),
        Cmd::Variance(i) => (Task::Variance, i),
        Cmd::Mc(i) => (Task::Mc, i),
        Cmd::Certify { kind: CertKind::Deloc, inline } => (Task::CertifyDeloc, inline),
        Cmd::Certify { kind: CertKind::Loc, inline } => (Task::CertifyLoc, inline),
        Cmd::Bracket(i) => (Task::Bracket, i),
        Cmd::Green(i) => (Task::Green, i),
        Cmd::Lemma22(i) => (Task::Lemma22, i),
        Cmd::Fit { kind, x, y, file } => {
            return match run_fit(*kind, x, y, file) {
                Ok(s) => {
                    println!("{s}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    let spec = match build_spec(&cli, task, inline) {
        Ok(s) => s,
        Err(e) => return exit_for(&e),
    };
    let record = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return exit_for(&e),
    };
    let written = match &cli.out {
        Some(p) if p.extension().is_some_and(|e| e == "json") => std::fs::write(
            p,
            serde_json::to_string_pretty(&record).expect("records serialize"),
        )
        .map_err(|e| e.to_string()),
        Some(p) => std::fs::File::create(p)
            .map_err(|e| e.to_string())
            .and_then(|f| write_csv(&record, f).map_err(|e| e.to_string())),
        None => write_csv(&record, std::io::stdout().lock()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let alarms = record.soundness_alarms();
    if !alarms.is_empty() {
        for a in &alarms {
            eprintln!("soundness alarm: {a}");
        }
        return ExitCode::from(4);
    }
    if record.budget_exhausted() {
        eprintln!("budget exhausted: at least one bracket side is missing or unconverged");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
