mod args;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use jcm_wehrl::jcm::{uniform_grid, ModelConfig};
use jcm_wehrl::scenario::{
    figure_preset, gnuplot_script, parse_quantities, run_sweep, write_output, OutputFormat,
    Quantity, SweepConfig, SweepResult,
};
use jcm_wehrl::{Constants, Error};

use args::{config_file_args, Cli, Format};

const THREADS_VAR: &str = "WEHRL_JCM_THREADS";

enum Failure {
    /// Bad flags, configuration or destination: exit 1.
    Usage(String),
    /// The numerics could not deliver: exit 2.
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Domain { .. } | Error::Io { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cli = match cli.config.clone() {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let file_args = config_file_args(&text, &path).map_err(Failure::Usage)?;
            let file = Cli::try_parse_from(file_args)
                .map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e.kind())))?;
            cli.merge(file)
        }
        None => cli,
    };
    let pool = thread_pool()?;
    let format = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let constants = if cli.paper_literal_constants {
        Constants::PaperLiteral
    } else {
        Constants::Exact
    };

    if let Some(name) = cli.preset.clone() {
        return run_preset(&cli, &name, format, constants, &pool);
    }
    if cli.gnuplot {
        return Err(Failure::Usage("--gnuplot needs --preset".into()));
    }

    let model = model_builder(&cli, cli.alpha.unwrap_or(5.0), cli.vartheta.unwrap_or(0.0))
        .t_grid(uniform_grid(cli.t_max.unwrap_or(50.0), cli.t_steps.unwrap_or(2000)))
        .build()?;
    let quantities = match &cli.quantities {
        Some(list) => parse_quantities(list)?,
        None => {
            let mut q = vec![
                Quantity::Bloch,
                Quantity::Gamma,
                Quantity::Info,
                Quantity::Wehrl,
                Quantity::Rescaled,
                Quantity::ZHalfPi,
            ];
            if !cli.theta.is_empty() {
                q.push(Quantity::ZTheta);
            }
            if !cli.phi.is_empty() {
                q.push(Quantity::ZPhi);
            }
            q
        }
    };
    let config = SweepConfig::new(model, quantities)?
        .with_theta_pi(cli.theta.clone())?
        .with_phi_pi(cli.phi.clone())?
        .with_constants(constants);
    let result = pool.install(|| run_sweep(&config))?;
    match &cli.output {
        Some(path) => {
            write_output(&result, format, path)?;
            eprintln!("wrote {} ({} records)", path.display(), result.records.len());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(result.render(format).as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Usage(format!("stdout: {e}")))?;
        }
    }
    check_records(&result, "output")
}

fn model_builder(cli: &Cli, alpha: f64, vartheta: f64) -> jcm_wehrl::jcm::ModelConfigBuilder<f64> {
    let mut b = ModelConfig::builder(alpha, vartheta);
    if let Some(n) = cli.n_max {
        b = b.n_max(n);
    }
    if let Some(tol) = cli.tol {
        b = b.series_tol(tol).quad_tol(tol);
    }
    b
}

fn run_preset(
    cli: &Cli,
    name: &str,
    format: OutputFormat,
    constants: Constants,
    pool: &rayon::ThreadPool,
) -> Result<(), Failure> {
    let fixed = [
        ("--alpha", cli.alpha.is_some()),
        ("--vartheta", cli.vartheta.is_some()),
        ("--t-max", cli.t_max.is_some()),
        ("--t-steps", cli.t_steps.is_some()),
        ("--theta", !cli.theta.is_empty()),
        ("--phi", !cli.phi.is_empty()),
        ("--quantities", cli.quantities.is_some()),
    ];
    if let Some((flag, _)) = fixed.iter().find(|(_, set)| *set) {
        return Err(Failure::Usage(format!("{flag} cannot be combined with --preset")));
    }
    let preset = figure_preset(name)?;
    let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;

    let mut failed = Vec::new();
    for panel in &preset.panels {
        let model = panel.config.model();
        let rebuilt = model_builder(cli, model.alpha(), model.vartheta())
            .t_grid(model.t_grid().to_vec())
            .build()?;
        let config = SweepConfig::new(rebuilt, panel.config.quantities().iter().copied())?
            .with_theta_pi(panel.config.theta_pi().to_vec())?
            .with_phi_pi(panel.config.phi_pi().to_vec())?
            .with_constants(constants);
        let result = pool.install(|| run_sweep(&config))?;
        let path = dir.join(format!("{}.{}", panel.stem(preset.name), format.extension()));
        write_output(&result, format, &path)?;
        eprintln!("wrote {} ({} records)", path.display(), result.records.len());
        if let Err(Failure::Numerical(msg)) = check_records(&result, &path.display().to_string()) {
            failed.push(msg);
        }
    }
    if cli.gnuplot {
        let path = dir.join(format!("{}.gp", preset.name));
        write_text(&path, &gnuplot_script(&preset, format.extension()))?;
        eprintln!("wrote {}", path.display());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(failed.join("\n")))
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn check_records(result: &SweepResult, target: &str) -> Result<(), Failure> {
    let bad: Vec<_> = result.records.iter().filter(|r| !r.is_clean()).collect();
    match bad.first() {
        None => Ok(()),
        Some(first) => Err(Failure::Numerical(format!(
            "{target}: {} of {} records have failed cells; first at t = {}: {}",
            bad.len(),
            result.records.len(),
            first.t,
            first.errors.join("; ")
        ))),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_VAR) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{value}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}
