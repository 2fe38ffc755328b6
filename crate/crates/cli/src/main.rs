//! `schiffer run` and `schiffer sweep`.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 bad configuration or I/O.

use clap::{Args, Parser, Subcommand};
use schiffer_cli::config::{with_param, ConfigError, ExperimentConfig};
use schiffer_cli::output::{self, SweepRow};
use schiffer_cli::suites;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "schiffer", version, about = "Verify Schiffer operators and the jump decomposition numerically")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the selected suites once.
    Run(Common),
    /// Re-run the suites while varying one parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// One of c, N, rho, tau_im, eps.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Suite or group to run; repeatable, replaces the config's list.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
}

enum Fail {
    Config(String),
    Checks,
}

impl From<ConfigError> for Fail {
    fn from(e: ConfigError) -> Self {
        Fail::Config(e.0)
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Config(format!("i/o: {e}"))
    }
}

fn load(c: &Common) -> Result<(ExperimentConfig, PathBuf), Fail> {
    let text = fs::read_to_string(&c.config).map_err(|e| Fail::Config(format!("{}: {e}", c.config.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if !c.suites.is_empty() {
        cfg.suites = c.suites.clone();
        cfg.validate()?;
    }
    let out = c.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("schiffer-out"));
    if let Some(t) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Fail::Config(format!("threads: {e}")))?;
    }
    Ok((cfg, out))
}

fn print_outcome(label: &str, out: &suites::RunOutcome) {
    for s in &out.suites {
        let status = if let Some(r) = &s.skipped {
            format!("skipped ({r})")
        } else if let Some(e) = &s.error {
            format!("ERROR {e}")
        } else if s.pass() {
            format!("pass  worst {:.2e}", s.worst())
        } else {
            format!("FAIL  worst {:.2e}", s.worst())
        };
        println!("{label}{:<18} {status}", s.name);
        for r in s.records.iter().filter(|r| !r.pass) {
            println!("{label}    {} residual {:.3e} > {:.1e}", r.name, r.residual, r.tolerance);
        }
    }
}

fn run(c: Common) -> Result<(), Fail> {
    let (cfg, dir) = load(&c)?;
    let out = suites::run(&cfg, &[])?;
    output::write_run(&dir, &cfg, &out)?;
    print_outcome("", &out);
    if out.pass() {
        Ok(())
    } else {
        Err(Fail::Checks)
    }
}

fn sweep(c: Common, param: &str, values: &[f64]) -> Result<(), Fail> {
    let (cfg, dir) = load(&c)?;
    let configs = values
        .iter()
        .map(|v| with_param(&cfg, param, *v).map(|c| (*v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = vec![];
    for (v, vc) in &configs {
        let out = suites::run(vc, &[])?;
        output::write_run(&dir.join(format!("{param}={v}")), vc, &out)?;
        print_outcome(&format!("[{param}={v}] "), &out);
        rows.push(SweepRow::from_outcome(*v, &out));
    }
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(format!("sweep_{param}.csv")), output::sweep_csv(param, &rows)?)?;
    for (k, ok) in output::monotone_flags(param, &rows) {
        println!("{k}: {ok}");
    }
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Fail::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Run(c) => run(c),
        Cmd::Sweep { common, param, values } => sweep(common, &param, &values),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Checks) => ExitCode::from(1),
        Err(Fail::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
