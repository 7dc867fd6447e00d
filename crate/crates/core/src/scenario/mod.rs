//! Time sweeps over the model, figure presets, and tabular output.
//!
//! Everything here is `f64`. Grid points are evaluated in parallel and
//! collected in grid order, so the output does not depend on the thread
//! count. A quantity that fails at one time point is recorded in that
//! record's error list and leaves `NaN` in its cells; neighbouring records
//! are unaffected.

mod output;
mod preset;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use output::{read_table, write_output, OutputFormat, Table};
pub use preset::{figure_preset, gnuplot_script, FigurePreset, Panel, PRESET_NAMES};

use crate::entropy::{info_entropies, von_neumann_of};
use crate::error::{Error, Result};
use crate::jcm::{bloch_vector, evolve, BlochVector, ModelConfig};
use crate::wehrl::{
    rescale_w_theta, rescaled_w_phi, rescaled_z_half_pi, w_phi, w_theta, z_phi, z_theta,
    Constants, SeriesPolicy, WehrlMethod,
};

/// A group of output columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    /// `b, c, h, eta`
    Bloch,
    /// `gamma`
    Gamma,
    /// `H_b, H_c, H_h`
    Info,
    /// `W_theta, W_phi`
    Wehrl,
    /// `W_theta_hat, W_rescaled`
    Rescaled,
    /// `Z_half_pi_hat`
    ZHalfPi,
    /// `Z_theta@<angle>` per polar angle
    ZTheta,
    /// `Z_phi@<angle>` per azimuth
    ZPhi,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Bloch,
        Quantity::Gamma,
        Quantity::Info,
        Quantity::Wehrl,
        Quantity::Rescaled,
        Quantity::ZHalfPi,
        Quantity::ZTheta,
        Quantity::ZPhi,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Quantity::Bloch => "bloch",
            Quantity::Gamma => "gamma",
            Quantity::Info => "H",
            Quantity::Wehrl => "W",
            Quantity::Rescaled => "rescaled",
            Quantity::ZHalfPi => "zhat",
            Quantity::ZTheta => "Z_theta",
            Quantity::ZPhi => "Z_phi",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.token() == s)
            .ok_or_else(|| Error::Config(format!("unknown quantity `{s}`; expected one of {}", token_list())))
    }
}

fn token_list() -> String {
    let mut names: Vec<&str> = Quantity::ALL.iter().map(|q| q.token()).collect();
    names.push("Z");
    names.join(", ")
}

/// Comma-separated quantity tokens; `Z` stands for both `Z_theta` and `Z_phi`.
/// The result is in column order with duplicates removed.
pub fn parse_quantities(list: &str) -> Result<Vec<Quantity>> {
    let mut out = Vec::new();
    for token in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if token == "Z" {
            out.extend([Quantity::ZTheta, Quantity::ZPhi]);
        } else {
            out.push(token.parse()?);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no quantities requested".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Angle in units of `π` as written in column headers, e.g. `0.25pi`.
pub fn angle_label(fraction_of_pi: f64) -> String {
    format!("{fraction_of_pi}pi")
}

/// Everything a sweep needs: the model with its time grid, the requested
/// quantities, the fixed angles for `Z`, and the numerical policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    model: ModelConfig<f64>,
    quantities: Vec<Quantity>,
    theta_pi: Vec<f64>,
    phi_pi: Vec<f64>,
    constants: Constants,
    policy: SeriesPolicy<f64>,
}

impl SweepConfig {
    pub fn new(model: ModelConfig<f64>, quantities: impl IntoIterator<Item = Quantity>) -> Result<Self> {
        let d = SeriesPolicy::<f64>::default();
        let policy = SeriesPolicy::new(model.series_tol(), d.max_terms(), d.fallback_threshold(), model.quad_tol())?;
        let mut quantities: Vec<Quantity> = quantities.into_iter().collect();
        quantities.sort();
        quantities.dedup();
        Ok(SweepConfig {
            model,
            quantities,
            theta_pi: Vec::new(),
            phi_pi: Vec::new(),
            constants: Constants::Exact,
            policy,
        })
    }

    /// Polar angles for `Z_theta`, as fractions of `π` in `[0, 1]`.
    pub fn with_theta_pi(mut self, angles: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = angles.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::Config(format!("theta must lie in [0, pi], got {bad}pi")));
        }
        self.theta_pi = angles;
        Ok(self)
    }

    /// Azimuths for `Z_phi`, as fractions of `π`.
    pub fn with_phi_pi(mut self, angles: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::Config(format!("phi must be finite, got {bad}")));
        }
        self.phi_pi = angles;
        Ok(self)
    }

    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = constants;
        self
    }

    pub fn with_policy(mut self, policy: SeriesPolicy<f64>) -> Self {
        self.policy = policy;
        self
    }

    pub fn model(&self) -> &ModelConfig<f64> {
        &self.model
    }

    pub fn quantities(&self) -> &[Quantity] {
        &self.quantities
    }

    pub fn theta_pi(&self) -> &[f64] {
        &self.theta_pi
    }

    pub fn phi_pi(&self) -> &[f64] {
        &self.phi_pi
    }

    pub fn constants(&self) -> Constants {
        self.constants
    }

    pub fn policy(&self) -> &SeriesPolicy<f64> {
        &self.policy
    }

    fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q)
    }

    /// Column names in output order, `t` first; the `error` column is not included.
    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string()];
        for &q in &self.quantities {
            match q {
                Quantity::Bloch => cols.extend(["b", "c", "h", "eta"].map(String::from)),
                Quantity::Gamma => cols.push("gamma".into()),
                Quantity::Info => cols.extend(["H_b", "H_c", "H_h"].map(String::from)),
                Quantity::Wehrl => cols.extend(["W_theta", "W_phi"].map(String::from)),
                Quantity::Rescaled => cols.extend(["W_theta_hat", "W_rescaled"].map(String::from)),
                Quantity::ZHalfPi => cols.push("Z_half_pi_hat".into()),
                Quantity::ZTheta => cols.extend(self.theta_pi.iter().map(|&a| format!("Z_theta@{}", angle_label(a)))),
                Quantity::ZPhi => cols.extend(self.phi_pi.iter().map(|&a| format!("Z_phi@{}", angle_label(a)))),
            }
        }
        cols
    }

    fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            return Err(Error::Config("no quantities requested".into()));
        }
        if self.wants(Quantity::ZTheta) && self.theta_pi.is_empty() {
            return Err(Error::Config("Z_theta needs at least one --theta".into()));
        }
        if self.wants(Quantity::ZPhi) && self.phi_pi.is_empty() {
            return Err(Error::Config("Z_phi needs at least one --phi".into()));
        }
        if self.model.t_grid().windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Config("time grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// All scalar quantities at one time point. Fields not requested stay `None`;
/// so do requested ones that failed, with the reason in `errors`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntropyRecord {
    pub t: f64,
    pub bloch: Option<BlochVector<f64>>,
    pub gamma: Option<f64>,
    /// `[H_b, H_c, H_h]`
    pub info: Option<[f64; 3]>,
    pub w_theta: Option<f64>,
    pub w_phi: Option<f64>,
    pub w_theta_hat: Option<f64>,
    pub w_rescaled: Option<f64>,
    pub z_half_pi_hat: Option<f64>,
    /// Aligned with [`SweepConfig::theta_pi`].
    pub z_theta: Vec<Option<f64>>,
    /// Aligned with [`SweepConfig::phi_pi`].
    pub z_phi: Vec<Option<f64>>,
    pub errors: Vec<String>,
}

impl EntropyRecord {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }

    /// Cells in [`SweepConfig::columns`] order, `NaN` where a value is missing.
    pub fn row(&self, config: &SweepConfig) -> Vec<f64> {
        let nan = f64::NAN;
        let get = |x: Option<f64>| x.unwrap_or(nan);
        let mut row = vec![self.t];
        for &q in config.quantities() {
            match q {
                Quantity::Bloch => match &self.bloch {
                    Some(v) => row.extend([v.b(), v.c(), v.h(), v.eta()]),
                    None => row.extend([nan; 4]),
                },
                Quantity::Gamma => row.push(get(self.gamma)),
                Quantity::Info => row.extend(self.info.unwrap_or([nan; 3])),
                Quantity::Wehrl => row.extend([get(self.w_theta), get(self.w_phi)]),
                Quantity::Rescaled => row.extend([get(self.w_theta_hat), get(self.w_rescaled)]),
                Quantity::ZHalfPi => row.push(get(self.z_half_pi_hat)),
                Quantity::ZTheta => row.extend(self.z_theta.iter().map(|&z| get(z))),
                Quantity::ZPhi => row.extend(self.z_phi.iter().map(|&z| get(z))),
            }
        }
        row
    }
}

/// Provenance of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepMeta {
    pub version: &'static str,
    pub constants: Constants,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub records: Vec<EntropyRecord>,
    pub meta: SweepMeta,
}

impl SweepResult {
    pub fn columns(&self) -> Vec<String> {
        self.config.columns()
    }

    pub fn has_errors(&self) -> bool {
        self.records.iter().any(|r| !r.is_clean())
    }

    pub fn table(&self) -> Table {
        Table {
            columns: self.columns(),
            rows: self.records.iter().map(|r| r.row(&self.config)).collect(),
            errors: self.records.iter().map(|r| r.errors.join("; ")).collect(),
        }
    }
}

/// Evaluate the requested quantities at every grid time.
///
/// Runs on the current rayon pool. Only an invalid configuration is an
/// error; numerical failures are kept per record.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let start = Instant::now();
    let records = config
        .model()
        .t_grid()
        .par_iter()
        .map(|&t| evaluate(config, t))
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        records,
        meta: SweepMeta {
            version: env!("CARGO_PKG_VERSION"),
            constants: config.constants(),
            wall_time: start.elapsed(),
        },
    })
}

fn keep<T>(errors: &mut Vec<String>, label: &str, r: Result<T>) -> Option<T> {
    r.map_err(|e| errors.push(format!("{label}: {e}"))).ok()
}

/// Closed form where one exists, then the series, then quadrature once the
/// series refuses (outside its guard or over its term budget).
fn auto<F>(eval: F) -> Result<f64>
where
    F: Fn(WehrlMethod) -> Result<f64>,
{
    match eval(WehrlMethod::ClosedForm) {
        Err(Error::NoClosedForm(_)) => match eval(WehrlMethod::Series) {
            Err(Error::SeriesDomain { .. } | Error::SeriesNonConvergence { .. }) => {
                eval(WehrlMethod::Quadrature)
            }
            other => other,
        },
        other => other,
    }
}

fn evaluate(config: &SweepConfig, t: f64) -> EntropyRecord {
    let mut rec = EntropyRecord {
        t,
        z_theta: vec![None; config.theta_pi().len()],
        z_phi: vec![None; config.phi_pi().len()],
        ..Default::default()
    };
    let errors = &mut rec.errors;
    let v = match evolve(config.model(), t) {
        Ok(amps) => bloch_vector(&amps),
        Err(e) => {
            errors.push(format!("evolve: {e}"));
            return rec;
        }
    };
    let policy = config.policy();
    let constants = config.constants();

    if config.wants(Quantity::Bloch) {
        rec.bloch = Some(v);
    }
    if config.wants(Quantity::Gamma) {
        rec.gamma = keep(errors, "gamma", von_neumann_of(&v));
    }
    if config.wants(Quantity::Info) {
        rec.info = keep(errors, "H", info_entropies(&v));
    }
    if config.wants(Quantity::Wehrl) || config.wants(Quantity::Rescaled) {
        let wt = keep(errors, "W_theta", w_theta(v.h()));
        let wp = keep(errors, "W_phi", w_phi(v.b(), v.c(), WehrlMethod::ClosedForm, policy));
        if config.wants(Quantity::Rescaled) {
            rec.w_theta_hat = wt.and_then(|w| keep(errors, "W_theta_hat", rescale_w_theta(w)));
            rec.w_rescaled = keep(errors, "W_rescaled", rescaled_w_phi(v.b(), v.c(), constants));
        }
        if config.wants(Quantity::Wehrl) {
            rec.w_theta = wt;
            rec.w_phi = wp;
        }
    }
    if config.wants(Quantity::ZHalfPi) {
        rec.z_half_pi_hat = keep(errors, "Z_half_pi_hat", rescaled_z_half_pi(v.b(), v.c(), constants));
    }
    if config.wants(Quantity::ZTheta) {
        for (slot, &a) in rec.z_theta.iter_mut().zip(config.theta_pi()) {
            let theta = a * std::f64::consts::PI;
            let label = format!("Z_theta@{}", angle_label(a));
            *slot = keep(errors, &label, auto(|m| z_theta(&v, theta, m, policy)));
        }
    }
    if config.wants(Quantity::ZPhi) {
        for (slot, &a) in rec.z_phi.iter_mut().zip(config.phi_pi()) {
            let phi = a * std::f64::consts::PI;
            let label = format!("Z_phi@{}", angle_label(a));
            *slot = keep(errors, &label, auto(|m| z_phi(&v, phi, m, policy)));
        }
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jcm::uniform_grid;
    use std::f64::consts::LN_2;

    fn model(alpha: f64, vartheta: f64, grid: Vec<f64>) -> ModelConfig<f64> {
        ModelConfig::builder(alpha, vartheta).t_grid(grid).build().unwrap()
    }

    #[test]
    fn quantity_tokens() {
        assert_eq!(
            parse_quantities("W, gamma,bloch,Z").unwrap(),
            vec![Quantity::Bloch, Quantity::Gamma, Quantity::Wehrl, Quantity::ZTheta, Quantity::ZPhi]
        );
        assert_eq!(parse_quantities("H,H").unwrap(), vec![Quantity::Info]);
        let err = parse_quantities("gamma,entropy").unwrap_err().to_string();
        assert!(err.contains("entropy") && err.contains("rescaled"));
        assert!(parse_quantities(" , ").is_err());
    }

    #[test]
    fn column_order_is_fixed() {
        let cfg = SweepConfig::new(model(1.0, 0.0, vec![0.0]), Quantity::ALL)
            .unwrap()
            .with_theta_pi(vec![0.25, 0.5])
            .unwrap()
            .with_phi_pi(vec![0.25])
            .unwrap();
        assert_eq!(
            cfg.columns().join(","),
            "t,b,c,h,eta,gamma,H_b,H_c,H_h,W_theta,W_phi,W_theta_hat,W_rescaled,\
             Z_half_pi_hat,Z_theta@0.25pi,Z_theta@0.5pi,Z_phi@0.25pi"
        );
        assert!(cfg.clone().with_theta_pi(vec![1.5]).is_err());
    }

    #[test]
    fn trivial_sweep() {
        let cfg = SweepConfig::new(model(0.0, 0.0, vec![0.0]), [Quantity::Bloch, Quantity::Gamma, Quantity::Info, Quantity::Wehrl])
            .unwrap();
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.records.len(), 1);
        let r = &res.records[0];
        assert!(r.is_clean());
        let v = r.bloch.unwrap();
        assert_eq!((v.b(), v.c(), v.h()), (0.0, 0.0, 1.0));
        assert_eq!(r.gamma, Some(0.0));
        assert_eq!(r.info.unwrap()[2], 0.0);
        assert!((r.w_theta.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn information_entropy_of_sigma_x_is_maximal_without_initial_coherence() {
        let cfg = SweepConfig::new(model(5.0, 0.0, uniform_grid(50.0, 200)), [Quantity::Info]).unwrap();
        let res = run_sweep(&cfg).unwrap();
        for r in &res.records {
            assert!((r.info.unwrap()[0] - LN_2).abs() < 1e-12);
        }
    }

    #[test]
    fn fallback_order_and_error_reporting() {
        let calls = std::cell::RefCell::new(Vec::new());
        let r = auto(|m| {
            calls.borrow_mut().push(m);
            match m {
                WehrlMethod::ClosedForm => Err(Error::NoClosedForm("test")),
                WehrlMethod::Series => Err(Error::SeriesDomain { max_beta: 0.95, threshold: 0.9 }),
                WehrlMethod::Quadrature => Err(Error::QuadratureNonConvergence {
                    estimate: 1.0,
                    change: 1e-3,
                    evaluations: 8,
                }),
            }
        });
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
        assert_eq!(*calls.borrow(), [WehrlMethod::ClosedForm, WehrlMethod::Series, WehrlMethod::Quadrature]);
        // Other errors are final.
        assert!(matches!(auto(|_| Err(Error::Config("x".into()))), Err(Error::Config(_))));

        let mut errors = Vec::new();
        assert_eq!(keep(&mut errors, "Z_theta@0.25pi", r), None);
        assert!(errors[0].starts_with("Z_theta@0.25pi: quadrature did not converge"));
    }

    #[test]
    fn failed_cells_are_nan_and_neighbours_untouched() {
        let cfg = SweepConfig::new(model(5.0, 0.0, vec![0.0, 1.0]), [Quantity::Gamma, Quantity::ZTheta])
            .unwrap()
            .with_theta_pi(vec![0.25, 0.5])
            .unwrap();
        let mut res = run_sweep(&cfg).unwrap();
        let clean = res.records[1].row(&cfg);
        res.records[0].z_theta[0] = None;
        res.records[0].errors.push("Z_theta@0.25pi: failed".into());
        let row = res.records[0].row(&cfg);
        assert!(row[1].is_finite() && row[2].is_nan() && row[3].is_finite());
        let table = res.table();
        assert_eq!(table.errors, vec!["Z_theta@0.25pi: failed".to_string(), String::new()]);
        assert_eq!(table.rows[1], clean);
    }

    #[test]
    fn missing_angles_are_a_config_error() {
        let cfg = SweepConfig::new(model(1.0, 0.0, vec![0.0]), [Quantity::ZPhi]).unwrap();
        assert!(matches!(run_sweep(&cfg), Err(Error::Config(_))));
    }
}
