use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wqed_core::cli::{self, CliError, Experiment, ExperimentConfig, RunOptions};

/// Few-photon waveguide QED experiments.
///
/// `wqed list` prints the catalog; `wqed <experiment> --config <path>` runs one.
#[derive(Debug, Parser)]
#[command(name = "wqed", version, about, long_about = None)]
struct Args {
    /// Experiment name, or `list`.
    experiment: String,

    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (default: config `output_dir`, then $WQED_OUT, then ./wqed-out).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads; 1 gives the reference deterministic mode.
    #[arg(long)]
    threads: Option<usize>,

    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
}

fn load(args: &Args, experiment: Experiment) -> Result<(ExperimentConfig, String), CliError> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let raw = fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
    let cfg = ExperimentConfig::from_json(&raw)?;
    if cfg.experiment != experiment {
        return Err(CliError::Config(format!(
            "config is for `{}` but `{}` was requested",
            cfg.experiment, experiment
        )));
    }
    Ok((cfg, raw))
}

fn execute(args: Args) -> Result<(), CliError> {
    let experiment: Experiment = args.experiment.parse()?;
    let (cfg, raw) = load(&args, experiment)?;
    let opts = RunOptions {
        out_dir: cli::resolve_out_dir(args.out.clone(), &cfg),
        threads: args.threads,
        svg: args.svg,
        config_path: args.config.clone(),
    };
    let manifest = cli::run(&cfg, &raw, &opts)?;
    for f in &manifest.outputs {
        println!("{}", opts.out_dir.join(&f.path).display());
    }
    println!(
        "{}",
        opts.out_dir
            .join(cli::Manifest::file_name(&manifest.experiment))
            .display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if args.experiment == "list" {
        print!("{}", cli::render_catalog());
        return ExitCode::SUCCESS;
    }
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wqed: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
