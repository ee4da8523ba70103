use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use hetboost::config::{GridSettings, RunConfig};
use hetboost::error::{exit, Error, Result};
use hetboost::manifest::{Manifest, MANIFEST_FILE};
use hetboost::{commands, pipeline, report};
use hetboost_core::prep::DEFAULT_MIN_TRIPS;
use hetboost_core::synth::SyntheticSpec;
use hetboost_core::ShapBackend;

#[derive(Parser)]
#[command(name = "hetboost", version, about = "Boosted trees with group-conditional explanations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Exact,
    Tree,
}

#[derive(Subcommand)]
enum Command {
    /// Filter, tune, fit, explain and export artifacts with a manifest.
    Run(RunArgs),
    /// Generate a synthetic grouped dataset with known responses.
    Synth(SynthArgs),
    /// Render importance tables from an artifacts directory.
    Report(ReportArgs),
    /// Aggregate trip records to origin-destination pairs.
    AggregateOd(OdArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Start from a saved run configuration or a manifest; other flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Column holding group labels, overriding the schema.
    #[arg(long = "groups", value_name = "COLUMN")]
    group_column: Option<String>,
    /// Select tree count and learning rate by grid search (the default).
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "no_tune")]
    tune: bool,
    #[arg(long, action = ArgAction::SetTrue)]
    no_tune: bool,
    /// Tree count; overrides the cross-validation winner.
    #[arg(long)]
    trees: Option<usize>,
    /// Learning rate; overrides the cross-validation winner.
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    shap: Option<Backend>,
    /// Comma-separated features to draw dependence curves for (default: all).
    #[arg(long, value_delimiter = ',')]
    pdp_features: Option<Vec<String>>,
    /// Grid strategy and size, e.g. `quantile:50` or `uniform:25`.
    #[arg(long)]
    grid: Option<GridSettings>,
    /// Maximum background rows for attributions.
    #[arg(long)]
    background: Option<usize>,
    #[arg(long)]
    vif_threshold: Option<f64>,
    #[arg(long)]
    folds: Option<usize>,
    /// Also export per-row ICE curves.
    #[arg(long)]
    ice: bool,
}

#[derive(clap::Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON generator spec; without it a demo spec is built from the flags below.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Comma-separated group labels for the demo spec.
    #[arg(long, value_delimiter = ',', default_values_t = ["A".to_string(), "B".to_string()])]
    groups: Vec<String>,
    /// Rows per group for the demo spec.
    #[arg(long, default_value_t = 2000)]
    rows: usize,
    /// Noise standard deviation for the demo spec.
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
}

#[derive(clap::Args)]
struct ReportArgs {
    /// Directory written by `hetboost run`.
    #[arg(long)]
    artifacts: PathBuf,
    /// Variables per scope in the top-k tables.
    #[arg(long, default_value_t = 15)]
    top: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct OdArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Number of study days the trips span.
    #[arg(long)]
    study_days: usize,
    /// Pairs with fewer trips are dropped.
    #[arg(long, default_value_t = DEFAULT_MIN_TRIPS)]
    min_trips: usize,
}

fn run_config(args: RunArgs) -> Result<RunConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            if text.contains("[config]") || path.file_name().is_some_and(|n| n == MANIFEST_FILE) {
                Manifest::parse(&text, path)?.config
            } else {
                RunConfig::from_toml(&text)?
            }
        }
        None => {
            let need = |v: &Option<PathBuf>, flag: &str| {
                v.clone().ok_or_else(|| Error::Config(format!("--{flag} is required without --config")))
            };
            RunConfig::new(need(&args.input, "input")?, need(&args.schema, "schema")?, need(&args.out, "out")?)
        }
    };
    if let Some(v) = args.input {
        config.input = v;
    }
    if let Some(v) = args.schema {
        config.schema = v;
    }
    if let Some(v) = args.out {
        config.out = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if args.group_column.is_some() {
        config.group_column = args.group_column;
    }
    if args.tune {
        config.tune = true;
    }
    if args.no_tune {
        config.tune = false;
    }
    if args.trees.is_some() {
        config.train.n_trees = args.trees;
    }
    if args.lr.is_some() {
        config.train.learning_rate = args.lr;
    }
    if let Some(v) = args.depth {
        config.train.max_depth = v;
    }
    if let Some(b) = args.shap {
        config.shap = match b {
            Backend::Exact => ShapBackend::Exact,
            Backend::Tree => ShapBackend::Tree,
        };
    }
    if let Some(v) = args.pdp_features {
        config.pdp_features = v.into_iter().filter(|s| !s.is_empty()).collect();
    }
    if let Some(v) = args.grid {
        config.grid = v;
    }
    if let Some(v) = args.background {
        config.background_rows = v;
    }
    if let Some(v) = args.vif_threshold {
        config.vif_threshold = v;
    }
    if let Some(v) = args.folds {
        config.tuning.folds = v;
    }
    if args.ice {
        config.keep_ice = true;
    }
    Ok(config)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => {
            let config = run_config(args)?;
            let manifest = pipeline::run(&config)?;
            println!(
                "wrote {} artifacts to {} ({} trees, learning rate {})",
                manifest.artifacts.len(),
                config.out.display(),
                manifest.model.n_trees,
                manifest.model.learning_rate
            );
        }
        Command::Synth(args) => {
            let spec = match &args.spec {
                Some(path) => commands::load_synth_spec(path)?,
                None => {
                    let labels: Vec<&str> = args.groups.iter().map(String::as_str).collect();
                    SyntheticSpec::demo(&labels, args.rows, args.noise, 0)
                }
            };
            let (paths, _) = commands::synth(&spec, args.seed, &args.out)?;
            println!("wrote {}, {} and {}", paths.data.display(), paths.schema.display(), paths.truth.display());
        }
        Command::Report(args) => {
            let text = report::render_report(&args.artifacts, args.top)?;
            match &args.output {
                Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e))?,
                None => print!("{text}"),
            }
        }
        Command::AggregateOd(args) => {
            let kept = commands::aggregate_od_file(&args.input, &args.out, args.study_days, args.min_trips)?;
            println!("wrote {kept} OD pairs to {}", args.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::OK as u8 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
