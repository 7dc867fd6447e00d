use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Jaynes-Cummings atomic entropies over a time grid, written as CSV or JSON.
#[derive(Debug, Default, Parser)]
#[command(name = "jcm-wehrl", version, about)]
pub struct Cli {
    /// Coherent field amplitude (real, >= 0).
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Atomic preparation angle, `cos v |e> + sin v |g>`; radians or e.g. `0.25pi`.
    #[arg(long, value_parser = parse_radians, allow_hyphen_values = true)]
    pub vartheta: Option<f64>,

    /// End of the scaled-time grid.
    #[arg(long)]
    pub t_max: Option<f64>,

    /// Number of grid points, both ends included.
    #[arg(long)]
    pub t_steps: Option<usize>,

    /// Polar angle for a Z_theta column; repeatable.
    #[arg(long, value_parser = parse_fraction_of_pi)]
    pub theta: Vec<f64>,

    /// Azimuth for a Z_phi column; repeatable.
    #[arg(long, value_parser = parse_fraction_of_pi, allow_hyphen_values = true)]
    pub phi: Vec<f64>,

    /// Comma-separated: bloch, gamma, H, W, rescaled, zhat, Z_theta, Z_phi, Z.
    #[arg(long)]
    pub quantities: Option<String>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Output file; with --preset, the directory the panel files go to.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Reproduce a figure: fig1, fig2 or fig3.
    #[arg(long)]
    pub preset: Option<String>,

    /// Series and quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Fock-space cutoff.
    #[arg(long)]
    pub n_max: Option<usize>,

    /// Use the rounded offsets 0.17 and 0.15 in the rescaled entropies.
    #[arg(long)]
    pub paper_literal_constants: bool,

    /// With --preset, also write a gnuplot script next to the data.
    #[arg(long)]
    pub gnuplot: bool,

    /// key=value file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    /// Fill every unset option from `file`.
    pub fn merge(mut self, file: Cli) -> Cli {
        self.alpha = self.alpha.or(file.alpha);
        self.vartheta = self.vartheta.or(file.vartheta);
        self.t_max = self.t_max.or(file.t_max);
        self.t_steps = self.t_steps.or(file.t_steps);
        if self.theta.is_empty() {
            self.theta = file.theta;
        }
        if self.phi.is_empty() {
            self.phi = file.phi;
        }
        self.quantities = self.quantities.or(file.quantities);
        self.format = self.format.or(file.format);
        self.output = self.output.or(file.output);
        self.preset = self.preset.or(file.preset);
        self.tol = self.tol.or(file.tol);
        self.n_max = self.n_max.or(file.n_max);
        self.paper_literal_constants |= file.paper_literal_constants;
        self.gnuplot |= file.gnuplot;
        self
    }
}

/// Turn a key=value file into long-flag arguments. Blank lines and lines
/// starting with `#` are skipped; list keys may repeat or hold commas.
pub fn config_file_args(text: &str, origin: &Path) -> Result<Vec<String>, String> {
    let mut args = vec!["jcm-wehrl".to_string()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", origin.display(), lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        match key.as_str() {
            "config" => return Err(format!("{}:{}: config files cannot nest", origin.display(), lineno + 1)),
            "paper-literal-constants" | "gnuplot" => match value {
                "true" | "yes" | "1" => args.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => return Err(format!("{}:{}: `{key}` expects true or false", origin.display(), lineno + 1)),
            },
            "theta" | "phi" => {
                args.extend(value.split(',').map(|v| format!("--{key}={}", v.trim())));
            }
            _ => args.push(format!("--{key}={value}")),
        }
    }
    Ok(args)
}

/// `<x>pi`, `pi`, or a plain number of radians, returned in radians.
pub fn parse_radians(s: &str) -> Result<f64, String> {
    parse_fraction_of_pi(s).map(|f| f * PI)
}

/// The same syntax as [`parse_radians`], returned as a multiple of `π`.
pub fn parse_fraction_of_pi(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.strip_suffix("pi") {
        Some("") => Ok(1.0),
        Some("-") => Ok(-1.0),
        Some(head) => head.trim_end_matches('*').parse::<f64>(),
        None => s.parse::<f64>().map(|r| r / PI),
    };
    match value {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not an angle; use radians or a multiple of pi such as 0.25pi")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_syntax() {
        assert_eq!(parse_fraction_of_pi("0.25pi").unwrap(), 0.25);
        assert_eq!(parse_fraction_of_pi("pi").unwrap(), 1.0);
        assert_eq!(parse_fraction_of_pi("0.5*pi").unwrap(), 0.5);
        assert_eq!(parse_fraction_of_pi("0").unwrap(), 0.0);
        assert_eq!(parse_radians("0.25pi").unwrap(), 0.25 * PI);
        assert!((parse_fraction_of_pi("3.141592653589793").unwrap() - 1.0).abs() < 1e-15);
        assert!(parse_fraction_of_pi("quarter").is_err());
        assert!(parse_fraction_of_pi("inf").is_err());
    }

    #[test]
    fn config_file_maps_to_flags() {
        let text = "# sweep\nalpha = 3\nt_steps=11\ntheta = 0.25pi, 0.5pi\npaper-literal-constants = true\ngnuplot = false\n";
        let args = config_file_args(text, Path::new("run.cfg")).unwrap();
        assert_eq!(
            args[1..],
            ["--alpha=3", "--t-steps=11", "--theta=0.25pi", "--theta=0.5pi", "--paper-literal-constants"]
        );
        let file = Cli::try_parse_from(&args).unwrap();
        let cli = Cli::try_parse_from(["jcm-wehrl", "--alpha", "4"]).unwrap().merge(file);
        assert_eq!(cli.alpha, Some(4.0));
        assert_eq!(cli.t_steps, Some(11));
        assert_eq!(cli.theta, vec![0.25, 0.5]);
        assert!(cli.paper_literal_constants);
    }

    #[test]
    fn config_file_errors_name_the_line() {
        let err = config_file_args("alpha 3\n", Path::new("bad.cfg")).unwrap_err();
        assert!(err.starts_with("bad.cfg:1"));
        assert!(config_file_args("gnuplot = maybe\n", Path::new("x")).is_err());
    }
}
