//! Experiment runner behind the `wqed` binary: strict JSON configs, CSV
//! tables, optional SVG plots and a JSON manifest per run.

mod catalog;
mod config;
mod experiments;
mod output;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;
use thiserror::Error;

pub use catalog::{catalog, entry, render_catalog, CatalogEntry};
pub use config::{Experiment, ExperimentConfig};
pub use experiments::{detuned_model, run_experiment, Outcome};
pub use output::{format_number, render_csv, sha256_hex, Column, Manifest, OutputFile, Status, Table, Versions};
pub use svg::render_svg;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "WQED_OUT";
pub const DEFAULT_OUT_DIR: &str = "wqed-out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] crate::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    pub(crate) fn io(context: String, source: std::io::Error) -> Self {
        CliError::Io { context, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_VALIDATION,
            CliError::Model(e) if e.is_validation() => EXIT_VALIDATION,
            _ => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub svg: bool,
    pub config_path: Option<PathBuf>,
}

/// `--out`, then the config's `output_dir`, then `$WQED_OUT`, then
/// [`DEFAULT_OUT_DIR`].
pub fn resolve_out_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or_else(|| cfg.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

/// Runs one experiment and writes its artifacts into `opts.out_dir`.
///
/// Validation failures write nothing. Runtime aborts still write a manifest
/// with `status = "aborted"` and the failure in `diagnostics`, then return
/// the error.
pub fn run(cfg: &ExperimentConfig, raw_config: &str, opts: &RunOptions) -> Result<Manifest, CliError> {
    let start = Instant::now();
    if opts.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let name = cfg.experiment.name();
    log::info!("running {name} with {threads} thread(s)");
    let result = pool.install(|| run_experiment(cfg));
    if let Err(e) = &result {
        if e.exit_code() == EXIT_VALIDATION {
            return Err(result.unwrap_err());
        }
    }

    fs::create_dir_all(&opts.out_dir).map_err(|e| CliError::io(format!("creating {}", opts.out_dir.display()), e))?;
    let mut manifest = Manifest {
        experiment: name.to_string(),
        status: Status::Ok,
        versions: Versions::default(),
        config_path: opts.config_path.clone(),
        config_sha256: sha256_hex(raw_config.as_bytes()),
        config: serde_json::to_value(cfg).map_err(|e| CliError::Config(e.to_string()))?,
        seed: cfg.seed,
        threads,
        knobs: serde_json::Value::Null,
        outputs: Vec::new(),
        diagnostics: serde_json::Value::Null,
        error: None,
        wall_time_s: 0.0,
    };
    match result {
        Ok(outcome) => {
            manifest.outputs = write_tables(name, &outcome.tables, &opts.out_dir, opts.svg || cfg.emit_svg)?;
            manifest.knobs = outcome.knobs;
            manifest.diagnostics = outcome.diagnostics;
            manifest.wall_time_s = start.elapsed().as_secs_f64();
            manifest.write(&opts.out_dir)?;
            Ok(manifest)
        }
        Err(e) => {
            manifest.status = Status::Aborted;
            manifest.error = Some(e.to_string());
            manifest.diagnostics = match &e {
                CliError::Model(m) => json!({ "abort": format!("{m:?}") }),
                other => json!({ "abort": other.to_string() }),
            };
            manifest.wall_time_s = start.elapsed().as_secs_f64();
            manifest.write(&opts.out_dir)?;
            Err(e)
        }
    }
}

fn write_tables(experiment: &str, tables: &[Table], dir: &Path, svg: bool) -> Result<Vec<OutputFile>, CliError> {
    let mut out = Vec::new();
    for t in tables {
        let csv = render_csv(experiment, t);
        out.push(output::write_file(
            dir,
            &format!("{}.csv", t.stem),
            &csv,
            Some(t.rows.len()),
        )?);
        if svg {
            if let Some(plot) = render_svg(experiment, t) {
                out.push(output::write_file(dir, &format!("{}.svg", t.stem), &plot, None)?);
            }
        }
    }
    Ok(out)
}
