use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nids_cli::config::{parse_scope, Config, Overrides};
use nids_cli::error::CliError;
use nids_cli::pipeline::{self, DirLock};
use nids_cli::synth::{self, SynthSpec};
use nids_core::preprocess::SmoteScope;

#[derive(Parser)]
#[command(
    name = "nids",
    version,
    about = "network intrusion detection over paired UNSW and KDD style datasets"
)]
struct Cli {
    /// Run configuration file (key = value lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory holding caches, models, and reports.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,
    /// UNSW-style CSV input; overrides the unsw_csv file key.
    #[arg(long, global = true, value_name = "PATH")]
    unsw: Option<PathBuf>,
    /// KDD-style CSV input; overrides the kdd_csv file key.
    #[arg(long, global = true, value_name = "PATH")]
    kdd: Option<PathBuf>,
    /// Master seed behind every random choice.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Stratified per-dataset row cap applied before splitting; 0 keeps all.
    #[arg(long, global = true, value_name = "N")]
    sample_per_dataset: Option<usize>,
    /// Where oversampling applies: train (default) or whole.
    #[arg(long, global = true, value_name = "SCOPE", value_parser = scope_parser)]
    smote_scope: Option<SmoteScope>,
    /// Skip the parameter search and use the known-good settings.
    #[arg(long, global = true)]
    fixed_params: bool,
    /// Print the effective configuration and planned outputs, touch nothing.
    #[arg(long, global = true)]
    dry_run: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest both CSVs, encode, select, split, oversample, cache matrices.
    Preprocess,
    /// Randomized parameter search with stratified cross-validation.
    Tune,
    /// Fit the configured models with the chosen parameters.
    Train,
    /// Score the held-out rows; write metrics, curves, and charts.
    Evaluate,
    /// All four stages in order, with timings.
    Run,
    /// Generate a synthetic pair of input CSVs for trying the pipeline.
    SynthData {
        /// Rows per dataset.
        #[arg(long, default_value_t = 20000, value_name = "N")]
        rows: usize,
        /// Directory for unsw.csv and kdd.csv.
        #[arg(long, default_value = "data", value_name = "DIR")]
        dir: PathBuf,
    },
}

fn scope_parser(s: &str) -> Result<SmoteScope, String> {
    parse_scope(s).ok_or_else(|| format!("expected train or whole, got {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        unsw_csv: cli.unsw.clone(),
        kdd_csv: cli.kdd.clone(),
        seed: cli.seed,
        sample_per_dataset: cli.sample_per_dataset,
        smote_scope: cli.smote_scope,
        fixed_params: cli.fixed_params,
    };
    let cfg = Config::load(cli.config.as_deref(), &overrides)?;

    if let Command::SynthData { rows, dir } = &cli.command {
        if cli.dry_run {
            println!(
                "dry run: would write {rows} rows each to {} and {}",
                dir.join(synth::UNSW_FILE).display(),
                dir.join(synth::KDD_FILE).display()
            );
            return Ok(());
        }
        let spec = SynthSpec {
            rows_per_dataset: *rows,
            seed: cfg.seed,
        };
        let paths = synth::generate(dir, &spec)?;
        println!("wrote {} and {}", paths.unsw.display(), paths.kdd.display());
        return Ok(());
    }

    if cli.dry_run {
        print!("{}", pipeline::dry_run_plan(&cfg, &cli.out));
        return Ok(());
    }

    let _lock = DirLock::acquire(&cli.out)?;
    match cli.command {
        Command::Preprocess => pipeline::stage_preprocess(&cfg, &cli.out).map(|_| ()),
        Command::Tune => pipeline::stage_tune(&cfg, &cli.out),
        Command::Train => pipeline::stage_train(&cfg, &cli.out),
        Command::Evaluate => pipeline::stage_evaluate(&cfg, &cli.out),
        Command::Run => pipeline::run_all(&cfg, &cli.out),
        Command::SynthData { .. } => unreachable!("handled above"),
    }
}
