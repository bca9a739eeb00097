//! Command-line front end: JSON run configs in, CSV/JSON tables and SVG
//! plots out.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::{Map, Value};

pub use commands::{execute, CommandKind, Product};
pub use config::{
    apply_override, EmbedConfig, Format, GeometryConfig, GridConfig, LineConfig, OutputConfig, PotentialConfig,
    RunConfig, SeedConfig, Spacing,
};
pub use output::{format_float, render_csv, render_json, render_svg, PlotSpec, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numeric(_) => EXIT_NUMERIC,
            Self::Config(_) | Self::Io(_) => EXIT_CONFIG,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Domain(msg) => Self::Config(msg),
            other => Self::Numeric(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "geodual", version, about = "Potentials, superpotentials, geometries and wormhole scattering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Potential → superpotential → metric radius.
    P2g(RunArgs),
    /// Metric radius → effective potential, one column per ℓ.
    G2p(RunArgs),
    /// Isotropic coordinates and the Lorentzian embedding of the Coulomb geometry.
    Embed(RunArgs),
    /// Effective line potential of a wormhole.
    WormholePotential(RunArgs),
    /// Amplitudes at one energy.
    Scatter(RunArgs),
    /// Inelasticity, phase shift and Argand trace over an energy grid.
    Sweep(RunArgs),
}

impl Command {
    fn split(&self) -> (CommandKind, &RunArgs) {
        match self {
            Self::P2g(a) => (CommandKind::P2g, a),
            Self::G2p(a) => (CommandKind::G2p, a),
            Self::Embed(a) => (CommandKind::Embed, a),
            Self::WormholePotential(a) => (CommandKind::WormholePotential, a),
            Self::Scatter(a) => (CommandKind::Scatter, a),
            Self::Sweep(a) => (CommandKind::Sweep, a),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Override a scalar config field, e.g. `--set model.ell=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory (default: `output.dir` or the current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (kind, args) = cli.command.split();
    match run_command(kind, args) {
        Ok(files) => {
            for f in files {
                info!("wrote {}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("geodual {}: {e}", kind.name());
            e.exit_code()
        }
    }
}

fn run_command(kind: CommandKind, args: &RunArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = RunConfig::load(&args.config, &args.set)?;
    if let Some(dir) = &args.out {
        cfg.output.dir = Some(dir.clone());
    }
    if let Some(f) = args.format {
        cfg.output.format = f;
    }
    if args.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    if kind == CommandKind::Scatter && cfg.output.format == Format::Svg {
        return Err(CliError::Config("scatter produces a single row; use csv or json".into()));
    }
    let product = execute(kind, &cfg, args.jobs)?;
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    write_product(kind, &cfg, &product, &dir)
}

/// Header metadata: tool version, command, resolved config and extras.
pub fn metadata(kind: CommandKind, cfg: &RunConfig, product: &Product) -> Map<String, Value> {
    let mut meta = Map::new();
    meta.insert("tool".into(), "geodual".into());
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert("command".into(), kind.name().into());
    meta.insert("config".into(), cfg.resolved());
    for (k, v) in &product.extra {
        meta.insert(k.clone(), v.clone());
    }
    meta
}

/// Write the product in the configured format; returns the files written.
pub fn write_product(kind: CommandKind, cfg: &RunConfig, product: &Product, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir)?;
    let meta = metadata(kind, cfg, product);
    let stem = kind.file_stem();
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<(), CliError> {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    match cfg.output.format {
        Format::Csv => put(format!("{stem}.csv"), render_csv(&product.table, &meta))?,
        Format::Json => put(format!("{stem}.json"), render_json(&product.table, &meta))?,
        Format::Svg => {
            put(format!("{stem}.csv"), render_csv(&product.table, &meta))?;
            let plot = product
                .plot
                .as_ref()
                .ok_or_else(|| CliError::Config(format!("{} has no plot", kind.name())))?;
            put(format!("{stem}.svg"), render_svg(&product.table, plot))?;
        }
    }
    Ok(written)
}
