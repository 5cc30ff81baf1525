use std::fs;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::control::SeriesControl;
use crate::error::{Error, Result};
use crate::processes::{FractionalParams, Variant};

/// Environment variable naming a JSON configuration file.
pub const CONFIG_ENV: &str = "FRACPOIS_CONFIG";

const DEFAULT_N_MAX: u32 = 50;
const DEFAULT_SAMPLES: u64 = 100_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_GRID_COUNT: usize = 11;

#[derive(Debug, Clone, Parser)]
#[command(name = "fracpois", version, about = "Fractional Poisson process distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// State probabilities p(n, t) with the tail mass above n_max.
    Pmf(ParamArgs),
    /// Probability generating function G(u, t).
    Pgf(ParamArgs),
    /// First waiting-time survival Pr{X > t}.
    Survival(ParamArgs),
    /// Residual checks of the closed forms, ADM route and operators.
    Verify(ParamArgs),
    /// Monte-Carlo histogram against the closed-form pmf.
    Simulate(ParamArgs),
}

impl Command {
    pub fn args(&self) -> &ParamArgs {
        match self {
            Command::Pmf(a) | Command::Pgf(a) | Command::Survival(a) | Command::Verify(a) | Command::Simulate(a) => a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Pmf(_) => "pmf",
            Command::Pgf(_) => "pgf",
            Command::Survival(_) => "survival",
            Command::Verify(_) => "verify",
            Command::Simulate(_) => "simulate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Classical,
    Tfpp,
    Sfpp,
    Stfpp,
    Sstfpp,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Classical => Variant::Classical,
            VariantArg::Tfpp => Variant::Tfpp,
            VariantArg::Sfpp => Variant::Sfpp,
            VariantArg::Stfpp => Variant::Stfpp,
            VariantArg::Sstfpp => Variant::Sstfpp,
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Intensity λ > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Time order α ∈ (0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Space order ν ∈ (0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Saigo β < 0 (defaults to −α).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Saigo γ.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Explicit comma-separated times; overrides the grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_stop: Option<f64>,
    #[arg(long)]
    pub t_count: Option<usize>,
    /// Largest state n reported.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Comma-separated pgf arguments u with |u| < 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
    #[arg(long)]
    pub max_k: Option<usize>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub term_cap: Option<usize>,
    #[arg(long)]
    pub max_rounding: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    pub samples: Option<u64>,
}

/// Contents of the `FRACPOIS_CONFIG` file; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub variant: Option<Variant>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub nu: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub t: Option<Vec<f64>>,
    pub t_start: Option<f64>,
    pub t_stop: Option<f64>,
    pub t_count: Option<usize>,
    pub n_max: Option<u32>,
    pub u: Option<Vec<f64>>,
    pub max_k: Option<usize>,
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
    pub term_cap: Option<usize>,
    pub max_rounding: Option<f64>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParams(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidParams(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: FractionalParams,
    pub times: Vec<f64>,
    pub n_max: u32,
    pub u: Vec<f64>,
    pub control: SeriesControl,
    pub format: OutputFormat,
    pub seed: u64,
    pub samples: u64,
}

impl RunConfig {
    pub fn resolve(cli: &Cli, file: &FileConfig) -> Result<Self> {
        let a = cli.command.args();
        let variant = a.variant.map(Variant::from).or(file.variant).unwrap_or(Variant::Stfpp);
        let lambda = a.lambda.or(file.lambda).unwrap_or(1.0);
        let unit_alpha = matches!(variant, Variant::Classical | Variant::Sfpp);
        let unit_nu = matches!(variant, Variant::Classical | Variant::Tfpp);
        let alpha = a.alpha.or(file.alpha).unwrap_or(if unit_alpha { 1.0 } else { 0.7 });
        let nu = a.nu.or(file.nu).unwrap_or(if unit_nu { 1.0 } else { 0.6 });
        let beta = a.beta.or(file.beta).unwrap_or(-alpha);
        let gamma = a.gamma.or(file.gamma).unwrap_or(0.0);
        let params = FractionalParams::new(variant, lambda, alpha, nu, beta, gamma)?;

        let defaults = SeriesControl::default();
        let control = SeriesControl {
            max_k: a.max_k.or(file.max_k).unwrap_or(defaults.max_k),
            tol_abs: a.tol_abs.or(file.tol_abs).unwrap_or(defaults.tol_abs),
            tol_rel: a.tol_rel.or(file.tol_rel).unwrap_or(defaults.tol_rel),
            term_cap: a.term_cap.or(file.term_cap).unwrap_or(defaults.term_cap),
            max_rounding: a.max_rounding.or(file.max_rounding).unwrap_or(defaults.max_rounding),
        };
        control.validate()?;

        let times = resolve_times(a, file)?;
        let u =
            a.u.clone()
                .or_else(|| file.u.clone())
                .unwrap_or_else(|| vec![0.0, 0.3, 0.7]);
        if u.is_empty() || u.iter().any(|x| !(x.abs() < 1.0)) {
            return Err(Error::InvalidParams("pgf arguments must satisfy |u| < 1".into()));
        }
        let samples = a.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples < 1 {
            return Err(Error::InvalidParams("samples must be at least 1".into()));
        }
        if matches!(cli.command, Command::Simulate(_)) && times.len() != 1 {
            return Err(Error::InvalidParams("simulate takes exactly one time".into()));
        }
        Ok(RunConfig {
            command: cli.command.clone(),
            params,
            times,
            n_max: a.n_max.or(file.n_max).unwrap_or(DEFAULT_N_MAX),
            u,
            control,
            format: a.format.or(file.format).unwrap_or(OutputFormat::Csv),
            seed: a.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples,
        })
    }
}

// the time specification is taken as a unit: any time flag on the command
// line shadows the whole time specification in the file
fn resolve_times(a: &ParamArgs, file: &FileConfig) -> Result<Vec<f64>> {
    let from_flags = a.t.is_some() || a.t_start.is_some() || a.t_stop.is_some() || a.t_count.is_some();
    let (list, start, stop, count) = if from_flags {
        (a.t.clone(), a.t_start, a.t_stop, a.t_count)
    } else {
        (file.t.clone(), file.t_start, file.t_stop, file.t_count)
    };
    let times = match list {
        Some(list) => list,
        None => {
            let start = start.unwrap_or(1.0);
            let stop = stop.unwrap_or(start);
            let count = count.unwrap_or(if stop == start { 1 } else { DEFAULT_GRID_COUNT });
            if count == 0 {
                return Err(Error::InvalidParams("t_count must be at least 1".into()));
            }
            if count == 1 {
                vec![start]
            } else {
                let step = (stop - start) / (count - 1) as f64;
                (0..count)
                    .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                    .collect()
            }
        }
    };
    if times.is_empty() {
        return Err(Error::InvalidParams("no evaluation times given".into()));
    }
    if let Some(bad) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParams(format!(
            "times must be finite and non-negative, got {bad}"
        )));
    }
    Ok(times)
}
