//! `qdmf`: runs the dot–Majorana scenarios and writes correlation series.

mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use qdmf_core::scenario::{run_scenario, run_tomography_check, ScenarioKind, SweepParameter};

use config::{Format, ModelArgs};

#[derive(Parser)]
#[command(version, about = "Quantum correlations of two quantum dots coupled through Majorana or regular fermions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its correlation series
    Simulate {
        /// mf_coupled, mf_uncoupled, single_fermion, fermion_pair, open_system or tomography
        scenario: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output file; standard output if omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a scenario once per parameter value, one file per value
    Sweep {
        /// Scenario to sweep (default mf_coupled)
        scenario: Option<String>,
        /// epsilon_m, epsilon_c, gamma or T
        #[arg(long)]
        param: String,
        /// Comma-separated values; an empty list does nothing
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, default_value = ".")]
        output_dir: PathBuf,
    },
    /// Simulate the auxiliary-dot readout along a trajectory and check the reconstruction
    Tomography {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print `t` and one measure from a series file as two-column CSV
    Extract {
        #[arg(long)]
        measure: String,
        file: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_values(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("invalid sweep value '{s}'")))
        .collect()
}

fn simulate(scenario: Option<String>, model: ModelArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<()> {
    let r = model.resolve(scenario.as_deref(), output.as_deref(), format)?;
    let series = run_scenario(&r.scenario).with_context(|| format!("running {}", r.scenario.kind))?;
    let mut out = open_output(r.output_path.as_deref())?;
    output::write_series(&mut out, &series, r.output_format)?;
    out.flush()?;
    Ok(())
}

fn sweep(
    scenario: Option<String>,
    param: &str,
    values: &str,
    model: ModelArgs,
    format: Option<Format>,
    output_dir: &Path,
) -> Result<()> {
    let parameter: SweepParameter = param.parse()?;
    let values = parse_values(values)?;
    let r = model.resolve(Some(scenario.as_deref().unwrap_or("mf_coupled")), None, format)?;
    let configs = values
        .iter()
        .map(|&v| r.scenario.with_parameter(parameter, v))
        .collect::<Result<Vec<_>, _>>()?;
    if configs.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(output_dir).with_context(|| format!("creating {}", output_dir.display()))?;

    let written = configs
        .par_iter()
        .zip(values.par_iter())
        .map(|(cfg, value)| -> Result<PathBuf> {
            let series = run_scenario(cfg).with_context(|| format!("running {} at {parameter} = {value}", cfg.kind))?;
            let name = format!("{}_{}={}.{}", cfg.kind, parameter, value, r.output_format.extension());
            let path = output_dir.join(name);
            let mut out = open_output(Some(&path))?;
            output::write_series(&mut out, &series, r.output_format)?;
            out.flush()?;
            Ok(path)
        })
        .collect::<Result<Vec<_>>>()?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn tomography(model: ModelArgs, format: Option<Format>, output: Option<PathBuf>) -> Result<()> {
    let r = model.resolve(Some(ScenarioKind::Tomography.name()), output.as_deref(), format)?;
    let check = run_tomography_check(&r.scenario)?;
    let mut out = open_output(r.output_path.as_deref())?;
    output::write_tomography(&mut out, &check, r.output_format)?;
    out.flush()?;
    let s = check.summary;
    eprintln!(
        "points {}  min fidelity (b1*b3 >= 1e-3) {}  max readout residual {}  phase-unrecoverable {}",
        s.points,
        output::fmt_number(s.min_fidelity),
        output::fmt_number(s.max_residual),
        s.unrecoverable
    );
    Ok(())
}

fn extract(measure: &str, file: &Path, output: Option<PathBuf>) -> Result<()> {
    let text = output::read_input(file)?;
    let pairs = output::extract_column(&text, measure)?;
    let mut out = open_output(output.as_deref())?;
    output::write_extraction(&mut out, measure, &pairs)?;
    out.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            scenario,
            model,
            format,
            output,
        } => simulate(scenario, model, format, output),
        Command::Sweep {
            scenario,
            param,
            values,
            model,
            format,
            output_dir,
        } => sweep(scenario, &param, &values, model, format, &output_dir),
        Command::Tomography { model, format, output } => tomography(model, format, output),
        Command::Extract { measure, file, output } => extract(&measure, &file, output),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_value_lists() {
        assert_eq!(parse_values("0, 0.5,-1").unwrap(), vec![0.0, 0.5, -1.0]);
        assert!(parse_values("").unwrap().is_empty());
        assert!(parse_values("0,x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
