mod commands;
mod config;
mod csvio;

use clap::{Args, Parser};
use config::{Command, CurveKind, Format, GridSpec, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Core(&'static str, curveforge::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use curveforge::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(_, e) if e.is_validation() => 2,
            CliError::Core(_, E::Domain { .. } | E::InsufficientData(_)) => 2,
            CliError::Core(..) | CliError::Failed(_) => 3,
        }
    }
}

/// Plane curves under central and parallel power-law forces.
#[derive(Debug, Parser)]
#[command(name = "curveforge", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Args)]
struct Opts {
    /// JSON file with any of the options below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Family tag, e.g. maclaurin_cos, conic_focal, sec_sq.
    #[arg(long)]
    family: Option<String>,
    /// Family parameters as k=v,k=v; values may use pi.
    #[arg(long)]
    params: Option<String>,
    /// Point selecting the domain component.
    #[arg(long, allow_hyphen_values = true)]
    anchor: Option<String>,
    #[arg(long, value_enum)]
    kind: Option<CurveKind>,
    /// Apply the d-transformation f(d t)^(1/d) first.
    #[arg(long, allow_hyphen_values = true)]
    transform_d: Option<String>,
    /// CSV samples (theta,r), (t,x,y) or (s,x,y) instead of a family.
    #[arg(long)]
    input: Option<PathBuf>,
    /// a:b[:n[:open]]
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Force field for simulate without a family.
    #[arg(long, value_enum)]
    field: Option<CurveKind>,
    #[arg(long, allow_hyphen_values = true)]
    coefficient: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    exponent: Option<String>,
    /// Initial state x,y,vx,vy.
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
}

fn real(s: &Option<String>) -> Result<Option<f64>, CliError> {
    s.as_deref().map(config::parse_real).transpose()
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let o = &cli.opts;
    let mut cfg = match &o.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cfg.command {
        if c != cli.command {
            return Err(CliError::Usage(format!("config is for {c:?}, not {:?}", cli.command)));
        }
    }
    cfg.command = Some(cli.command);
    if o.family.is_some() {
        cfg.family = o.family.clone();
        cfg.input = None;
    }
    if let Some(p) = &o.params {
        cfg.params = config::parse_params(p)?;
    }
    if o.input.is_some() {
        cfg.input = o.input.clone();
        cfg.family = None;
    }
    if let Some(g) = &o.grid {
        cfg.grid = Some(GridSpec::parse(g)?);
    }
    if let Some(i) = &o.init {
        cfg.init = Some(config::parse_init(i)?);
    }
    macro_rules! overlay {
        ($($field:ident),*) => { $( if let Some(v) = real(&o.$field)? { cfg.$field = Some(v); } )* };
    }
    overlay!(anchor, transform_d, coefficient, exponent, t_end);
    cfg.kind = o.kind.unwrap_or(cfg.kind);
    cfg.tol = o.tol.or(cfg.tol);
    cfg.out = o.out.clone().or(cfg.out);
    cfg.format = o.format.or(cfg.format);
    cfg.field = o.field.or(cfg.field);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match build_config(&cli).and_then(|cfg| commands::run(cli.command, &cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
