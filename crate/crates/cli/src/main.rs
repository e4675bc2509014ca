use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use impactlab::experiments::{
    batch::write_metrics_csv, run_batch, run_regression_study, run_sweep, run_table2, sample_paths,
    write_paths_csv,
};
use impactlab::ingest::{metrics_from_records, read_fill_records, IngestParams};
use impactlab::{analytics, Error, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "impactlab",
    version,
    about = "Execution-cost simulation and broker TCA"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export sample cumulative-quantity paths, unconditional and conditional.
    Paths {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Simulate a batch of orders and summarize every metric.
    Batch(CommonArgs),
    /// Compare closed-form, simulated and published moments.
    Table2(CommonArgs),
    /// Signal-to-noise as both timescales are scaled together.
    Sweep(CommonArgs),
    /// Recover the spread and impact constants from orders of varying size.
    Regress(CommonArgs),
    /// Evaluate one observed order from a fill report CSV.
    Tca {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        fills: PathBuf,
    },
    /// Print the closed-form cost and impact moments.
    Analytic(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config; missing keys take the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    conditioned: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(n) = self.paths {
            cfg.n_paths = n;
        }
        if self.conditioned {
            cfg.conditioned = true;
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        cfg.validate()?;
        for w in cfg.params.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(cfg)
    }
}

/// Output files are rendered in memory first so a failed run leaves nothing behind.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    fn add_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), Error> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        self.add(name, bytes);
        Ok(())
    }

    fn write(self) -> Result<(), Error> {
        fs::create_dir_all(&self.dir)?;
        for (name, bytes) in self.files {
            let path = self.dir.join(&name);
            fs::write(&path, bytes)?;
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn csv_bytes<F>(f: F) -> Result<Vec<u8>, Error>
where
    F: FnOnce(&mut Vec<u8>) -> Result<(), Error>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("IMPACTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "IMPACTLAB_THREADS must be a positive integer, got {value:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidConfig(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Error> {
    configure_threads()?;
    match cli.command {
        Command::Paths { common, samples } => {
            let cfg = common.load()?;
            let s = sample_paths(&cfg, samples)?;
            let mut out = Outputs::new(&cfg.output_dir);
            out.add(
                "paths_unconditional.csv",
                csv_bytes(|b| write_paths_csv(b, &cfg.grid, &s.unconditional))?,
            );
            out.add(
                "paths_conditional.csv",
                csv_bytes(|b| write_paths_csv(b, &cfg.grid, &s.conditional))?,
            );
            out.write()
        }
        Command::Batch(common) => {
            let cfg = common.load()?;
            let run = run_batch(&cfg)?;
            let mut out = Outputs::new(&cfg.output_dir);
            out.add_json("batch_report.json", &run.report)?;
            out.add(
                "metrics.csv",
                csv_bytes(|b| write_metrics_csv(b, &run.metrics))?,
            );
            out.write()
        }
        Command::Table2(common) => {
            let cfg = common.load()?;
            let report = run_table2(&cfg)?;
            for d in report.flagged() {
                eprintln!(
                    "discrepancy: {} quoted {} implied {:.3} measured {}: {}",
                    d.name,
                    d.quoted,
                    d.implied,
                    d.measured.map_or("n/a".to_string(), |m| format!("{m:.3}")),
                    d.note
                );
            }
            let mut out = Outputs::new(&cfg.output_dir);
            out.add("table2.csv", csv_bytes(|b| report.write_csv(b))?);
            out.add_json("table2.json", &report)?;
            out.write()
        }
        Command::Sweep(common) => {
            let cfg = common.load()?;
            let report = run_sweep(&cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let mut out = Outputs::new(&cfg.output_dir);
            out.add("sweep.csv", csv_bytes(|b| report.write_csv(b))?);
            out.add_json("sweep.json", &report)?;
            out.write()
        }
        Command::Regress(common) => {
            let cfg = common.load()?;
            let study = run_regression_study(&cfg)?;
            let mut out = Outputs::new(&cfg.output_dir);
            out.add_json("regression.json", &study)?;
            out.write()
        }
        Command::Tca { common, fills } => {
            let cfg = common.load()?;
            let file = fs::File::open(&fills)?;
            let records = read_fill_records(file)?;
            let ingest = IngestParams {
                q_total: cfg.params.q_total,
                horizon: cfg.params.horizon,
                tau_m: cfg.params.tau_m,
                point_value: cfg.params.point_value,
            };
            let metrics = metrics_from_records(&records, &ingest, &cfg.grid)?;
            let mut out = Outputs::new(&cfg.output_dir);
            out.add_json("tca.json", &metrics)?;
            print_json(&metrics)?;
            out.write()
        }
        Command::Analytic(common) => {
            let cfg = common.load()?;
            let report = serde_json::json!({
                "cost": analytics::cost_moments(&cfg.params),
                "impact": analytics::impact_moments(&cfg.params),
            });
            print_json(&report)
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

/// I/O failures exit with 1; everything else is a usage or input problem.
fn exit_code(err: &Error) -> u8 {
    if err.is_io() {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
