//! Run configuration: TOML file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use loopfact::solver::SolveOptions;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with any of the settings below; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Truncation degree N.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    /// Toeplitz section size M (default 2N + 8).
    #[arg(long, global = true)]
    pub toeplitz_size: Option<usize>,
    /// Sample points on the circle (default max(8N, 64)).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Unitarity tolerance of the χ stage (default 1e-8).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Arithmetic: float, or exact rationals (verify only).
    #[arg(long, value_enum, global = true)]
    pub mode: Option<Mode>,
    /// RNG seed for sampled coordinates (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of round-trip trials (default 100).
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Coefficient decay of sampled coordinates.
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Solve for ζ from g₊ alone.
    #[arg(long, global = true)]
    pub zeta_only: bool,
}

/// Contents of a config file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    degree: Option<usize>,
    toeplitz_size: Option<usize>,
    #[serde(alias = "grid_size")]
    grid: Option<usize>,
    tol: Option<f64>,
    mode: Option<Mode>,
    seed: Option<u64>,
    trials: Option<u64>,
    rho: Option<f64>,
    zeta_only: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub degree: usize,
    pub toeplitz_size: usize,
    pub grid_size: usize,
    pub tol: f64,
    pub mode: Mode,
    pub seed: u64,
    pub trials: u64,
    pub rho: f64,
    pub zeta_only: bool,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
}

impl RunConfig {
    /// Merges defaults, the config file and flags, then checks the
    /// invariants `M ≥ N`, `grid ≥ 4N`, `tol > 0`.
    pub fn resolve(args: &ConfigArgs, default_mode: Mode, degree_hint: Option<usize>) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let degree = args.degree.or(file.degree).or(degree_hint).unwrap_or(8);
        let defaults = SolveOptions::for_degree(degree);
        let cfg = RunConfig {
            degree,
            toeplitz_size: args.toeplitz_size.or(file.toeplitz_size).unwrap_or(defaults.toeplitz_size),
            grid_size: args.grid.or(file.grid).unwrap_or(defaults.grid_size),
            tol: args.tol.or(file.tol).unwrap_or(defaults.tol),
            mode: args.mode.or(file.mode).unwrap_or(default_mode),
            seed: args.seed.or(file.seed).unwrap_or(0),
            trials: args.trials.or(file.trials).unwrap_or(100),
            rho: args.rho.or(file.rho).unwrap_or(0.6),
            zeta_only: args.zeta_only || file.zeta_only.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.toeplitz_size < self.degree {
            return Err(CliError::input(format!(
                "toeplitz size {} is below the degree {}",
                self.toeplitz_size, self.degree
            )));
        }
        if self.grid_size < 4 * self.degree {
            return Err(CliError::input(format!("grid {} is below 4N = {}", self.grid_size, 4 * self.degree)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::input(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(CliError::input(format!("rho must be nonnegative, got {}", self.rho)));
        }
        Ok(())
    }

    pub fn require_float(&self, command: &str) -> Result<(), CliError> {
        match self.mode {
            Mode::Float => Ok(()),
            Mode::Exact => Err(CliError::input(format!("{command} runs in float mode only"))),
        }
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            toeplitz_size: self.toeplitz_size,
            grid_size: self.grid_size,
            tol: self.tol,
            zeta_only: self.zeta_only,
            ..SolveOptions::for_degree(self.degree)
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "toeplitz_size": self.toeplitz_size,
            "grid": self.grid_size,
            "tol": self.tol,
            "mode": match self.mode { Mode::Float => "float", Mode::Exact => "exact" },
            "seed": self.seed,
            "trials": self.trials,
            "rho": self.rho,
            "zeta_only": self.zeta_only,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("loopfact-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "degree = 4\nrho = 0.3\nmode = \"float\"\n").unwrap();
        let args = ConfigArgs { config: Some(path.clone()), rho: Some(0.5), ..Default::default() };
        let c = RunConfig::resolve(&args, Mode::Float, None).unwrap();
        assert_eq!((c.degree, c.toeplitz_size, c.grid_size), (4, 16, 64));
        assert_eq!(c.rho, 0.5);
        std::fs::write(&path, "degre = 4\n").unwrap();
        assert!(RunConfig::resolve(&args, Mode::Float, None).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn invariants_are_enforced() {
        let bad = ConfigArgs { degree: Some(10), toeplitz_size: Some(5), ..Default::default() };
        assert!(RunConfig::resolve(&bad, Mode::Float, None).is_err());
        let bad = ConfigArgs { degree: Some(20), grid: Some(64), ..Default::default() };
        assert!(RunConfig::resolve(&bad, Mode::Float, None).is_err());
        let bad = ConfigArgs { tol: Some(0.0), ..Default::default() };
        assert!(RunConfig::resolve(&bad, Mode::Float, None).is_err());
    }
}
