use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use nkpolicy::{ModelParamsF64, ShockConvention, Variant};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    /// Ramsey policy from the optimal initial anchor.
    Ramsey,
    /// Taylor rule on its minimal-state-variable path.
    TaylorMsv,
    /// Taylor rule iterated forward from `--x0`, `--pi0`; only for non-explosive rules.
    TaylorForward,
}

/// Values read from `--config`. Every field is optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gamma: Option<f64>,
    pub kappa: Option<f64>,
    pub beta: Option<f64>,
    pub rho_z: Option<f64>,
    pub rho_u: Option<f64>,
    pub variant: Option<Variant>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,

    pub f_pi: Option<f64>,
    pub f_x: Option<f64>,
    pub f_z: Option<f64>,
    pub f_u: Option<f64>,
    pub mu_pi: Option<f64>,
    pub mu_x: Option<f64>,
    pub mu_i: Option<f64>,
    pub convention: Option<ShockConvention>,

    pub f_pi_min: Option<f64>,
    pub f_pi_max: Option<f64>,
    pub f_x_min: Option<f64>,
    pub f_x_max: Option<f64>,
    pub n_pi: Option<usize>,
    pub n_x: Option<usize>,
    pub step: Option<f64>,
    pub tol: Option<f64>,

    pub regime: Option<RegimeArg>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub z0: Option<f64>,
    pub u0: Option<f64>,
    pub x0: Option<f64>,
    pub pi0: Option<f64>,
    pub sd_z: Option<f64>,
    pub sd_u: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct ModelArgs {
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho_z: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho_u: Option<f64>,
    /// `text` or `appendix-a`. Commands that solve the Ramsey problem default
    /// to `appendix-a`, the others to `text`.
    #[arg(long, global = true, value_parser = parse_variant)]
    pub variant: Option<Variant>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: nkpolicy::Error| e.to_string())
}

pub fn parse_convention(s: &str) -> Result<ShockConvention, String> {
    s.parse().map_err(|e: nkpolicy::Error| e.to_string())
}

impl ModelArgs {
    pub fn resolve(&self, file: &RunConfig, default_variant: Variant) -> Result<ModelParamsF64, CliError> {
        let base = ModelParamsF64::baseline();
        let p = nkpolicy::ModelParams {
            gamma: self.gamma.or(file.gamma).unwrap_or(base.gamma),
            kappa: self.kappa.or(file.kappa).unwrap_or(base.kappa),
            beta: self.beta.or(file.beta).unwrap_or(base.beta),
            rho_z: self.rho_z.or(file.rho_z).unwrap_or(base.rho_z),
            rho_u: self.rho_u.or(file.rho_u).unwrap_or(base.rho_u),
            variant: self.variant.or(file.variant).unwrap_or(default_variant),
        };
        p.validate()?;
        Ok(p)
    }
}
