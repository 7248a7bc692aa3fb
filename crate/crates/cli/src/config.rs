//! Scenario settings from a flat TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use qdmf_core::dynamics::TimeGrid;
use qdmf_core::scenario::{ScenarioConfig, ScenarioKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Keys accepted in a `--config` file. Names match the long flags with
/// hyphens replaced by underscores.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub epsilon_m: Option<f64>,
    pub epsilon_c: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(rename = "T", alias = "tunnel")]
    pub tunnel: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub dt: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Majorana overlap energy ε_m (units of λ)
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_m: Option<f64>,
    /// Regular fermion level ε_c (units of λ)
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_c: Option<f64>,
    /// Lead tunneling rate Γ; positive values switch to Lindblad evolution
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Auxiliary-dot tunnel coupling T of the readout protocol
    #[arg(long, visible_alias = "T")]
    pub tunnel: Option<f64>,
    /// End of the time grid (units of 1/λ)
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
    /// Integrator substep for open-system runs
    #[arg(long)]
    pub dt: Option<f64>,
    /// Flat TOML file with default values for any of these settings
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: ScenarioConfig,
    pub output_path: Option<PathBuf>,
    pub output_format: Format,
}

fn parse_kind(name: &str) -> Result<ScenarioKind> {
    Ok(name.parse::<ScenarioKind>()?)
}

impl ModelArgs {
    pub fn resolve(
        &self,
        scenario: Option<&str>,
        output: Option<&Path>,
        format: Option<Format>,
    ) -> Result<Resolved> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let kind = match (scenario, file.scenario.as_deref()) {
            (Some(s), _) | (None, Some(s)) => parse_kind(s)?,
            (None, None) => bail!("no scenario given on the command line or in the config file"),
        };

        let mut cfg = ScenarioConfig::new(kind);
        let pick = |flag: Option<f64>, from_file: Option<f64>, default: f64| flag.or(from_file).unwrap_or(default);
        cfg.epsilon_m = pick(self.epsilon_m, file.epsilon_m, cfg.epsilon_m);
        cfg.epsilon_c = pick(self.epsilon_c, file.epsilon_c, cfg.epsilon_c);
        cfg.gamma = pick(self.gamma, file.gamma, cfg.gamma);
        cfg.tunnel = pick(self.tunnel, file.tunnel, cfg.tunnel);

        let t_max = pick(self.t_max, file.t_max, cfg.grid.t_end());
        let points = self.points.or(file.points).unwrap_or(cfg.grid.n_points());
        cfg.grid = match self.dt.or(file.dt) {
            Some(dt) => TimeGrid::with_dt(0.0, t_max, points, dt)?,
            None => TimeGrid::new(0.0, t_max, points)?,
        };
        cfg.validate()?;

        Ok(Resolved {
            scenario: cfg,
            output_path: output.map(Path::to_path_buf).or(file.output_path),
            output_format: format.or(file.output_format).unwrap_or(Format::Csv),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_override_file_values() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "scenario = \"open_system\"\ngamma = 0.1\nT = 2.0\npoints = 11\noutput_format = \"json\"").unwrap();
        let args = ModelArgs {
            gamma: Some(0.2),
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        let r = args.resolve(None, None, None).unwrap();
        assert_eq!(r.scenario.kind, ScenarioKind::OpenSystem);
        assert_eq!(r.scenario.gamma, 0.2);
        assert_eq!(r.scenario.tunnel, 2.0);
        assert_eq!(r.scenario.grid.n_points(), 11);
        assert_eq!(r.output_format, Format::Json);
        let r = args.resolve(Some("mf_coupled"), None, Some(Format::Csv)).unwrap();
        assert_eq!(r.scenario.kind, ScenarioKind::MfCoupled);
        assert_eq!(r.output_format, Format::Csv);
    }

    #[test]
    fn unknown_keys_and_missing_scenario_are_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "lambda = 2.0").unwrap();
        let args = ModelArgs {
            config: Some(f.path().to_path_buf()),
            ..Default::default()
        };
        assert!(args.resolve(Some("mf_coupled"), None, None).is_err());
        assert!(ModelArgs::default().resolve(None, None, None).is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        let args = ModelArgs {
            gamma: Some(-1.0),
            ..Default::default()
        };
        assert!(args.resolve(Some("open_system"), None, None).is_err());
        let args = ModelArgs {
            points: Some(1),
            ..Default::default()
        };
        assert!(args.resolve(Some("mf_coupled"), None, None).is_err());
    }
}
