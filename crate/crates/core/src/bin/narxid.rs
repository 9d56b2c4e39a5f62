use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use narx_select::data::{load_csv, Dataset};
use narx_select::dictionary::{Dictionary, DictionarySpec};
use narx_select::report::{fmt_float, search_space, Report};
use narx_select::run::{replay_report, run_baseline, run_identify, RunConfig};
use narx_select::{Error, Result};

#[derive(Parser)]
#[command(name = "narxid", version, about = "NARX structure selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search the structure space with the hybrid swarm
    Identify(IdentifyArgs),
    /// Select a structure by forward orthogonal least squares
    Baseline(BaselineArgs),
    /// Free-run a saved report on a dataset
    Simulate(SimulateArgs),
    /// Print the candidate universe
    Dictionary(DictArgs),
}

#[derive(Args)]
struct DictArgs {
    #[arg(long, default_value_t = 2)]
    ny: usize,
    #[arg(long, default_value_t = 2)]
    nu: usize,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    dead_time: usize,
}

impl DictArgs {
    fn spec(&self) -> DictionarySpec {
        DictionarySpec { n_y: self.ny, n_u: self.nu, dead_time: self.dead_time, ell: self.ell, include_constant: true }
    }
}

#[derive(Args)]
struct DataArgs {
    /// CSV with columns u,y
    #[arg(long)]
    data: PathBuf,
    /// The CSV has no header row
    #[arg(long)]
    no_header: bool,
    #[arg(long, default_value_t = 0.05)]
    p_value: f64,
    /// Fraction of samples used for identification
    #[arg(long, default_value_t = 0.5)]
    split: f64,
    #[arg(long)]
    no_normalize: bool,
    /// Directory for report.toml (and convergence.csv)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    dict: DictArgs,
}

#[derive(Args)]
struct IdentifyArgs {
    #[command(flatten)]
    common: DataArgs,
    #[arg(long, default_value_t = 10)]
    agents: usize,
    #[arg(long, default_value_t = 30)]
    iters: usize,
    #[arg(long, default_value_t = 100.0)]
    g0: f64,
    #[arg(long, default_value_t = 23.0)]
    alpha_decay: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: DataArgs,
    /// Stop after this many terms
    #[arg(long)]
    n_terms: Option<usize>,
    /// Stop when the unexplained ratio drops below this value
    #[arg(long, default_value_t = 1e-4)]
    err_threshold: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Report written by identify or baseline
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    no_header: bool,
    /// Directory for simulation.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

impl DataArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            p_value: self.p_value,
            split: self.split,
            normalize: !self.no_normalize,
            dictionary: self.dict.spec(),
            ..RunConfig::default()
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dictionary(args) => {
            let dict = Dictionary::build(args.spec())?;
            println!("noV = {}", dict.len());
            println!("search space = {}", search_space(dict.len()));
            for (i, term) in dict.terms().iter().enumerate() {
                println!("{i:4}  {term}");
            }
            Ok(())
        }
        Command::Identify(args) => {
            let mut config = args.common.config();
            config.optimizer.n_agents = args.agents;
            config.optimizer.max_iter = args.iters;
            config.optimizer.g0 = args.g0;
            config.optimizer.alpha_decay = args.alpha_decay;
            config.optimizer.seed = args.seed;
            let data = load(&args.common, &config)?;
            let report = run_identify(&config, &data)?;
            emit(&report, args.common.out.as_deref())
        }
        Command::Baseline(args) => {
            let mut config = args.common.config();
            config.frols.max_terms = args.n_terms;
            config.frols.err_threshold = args.err_threshold;
            let data = load(&args.common, &config)?;
            let report = run_baseline(&config, &data)?;
            emit(&report, args.common.out.as_deref())
        }
        Command::Simulate(args) => {
            let report = Report::load(&args.report)?;
            let samples = load_csv(&args.data, !args.no_header)?;
            let replay = replay_report(&report, samples)?;
            println!("mse_identification = {}", fmt_float(replay.mse_identification));
            println!("mse_validation = {}", fmt_float(replay.mse_validation));
            if let Some(dir) = args.out {
                create_dir(&dir)?;
                let path = dir.join("simulation.csv");
                let mut text = String::from("k,y_hat\n");
                let predicted = replay.identification.predicted.iter().chain(&replay.validation.predicted);
                for (k, v) in predicted.enumerate() {
                    text.push_str(&format!("{k},{}\n", fmt_float(*v)));
                }
                std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?;
            }
            Ok(())
        }
    }
}

fn load(args: &DataArgs, config: &RunConfig) -> Result<Dataset> {
    let samples = load_csv(&args.data, !args.no_header)?;
    Dataset::prepare(samples, config)
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            create_dir(dir)?;
            report.save(dir.join("report.toml"))?;
            if !report.convergence.is_empty() {
                report.save_convergence(dir.join("convergence.csv"))?;
            }
            eprintln!("wrote {}", dir.display());
        }
        None => print!("{}", report.to_toml_string()),
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })
}
