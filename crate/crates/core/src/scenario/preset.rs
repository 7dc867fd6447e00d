use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{angle_label, Quantity, SweepConfig};
use crate::error::{Error, Result};
use crate::jcm::{uniform_grid, ModelConfig};

pub const PRESET_NAMES: [&str; 3] = ["fig1", "fig2", "fig3"];

const FIGURE_ALPHA: f64 = 5.0;
const FIGURE_T_MAX: f64 = 50.0;
const FIGURE_T_POINTS: usize = 2000;

/// One curve family of a figure: a fixed atomic preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// `ϑ` as a fraction of `π`.
    pub vartheta_pi: f64,
    pub config: SweepConfig,
}

impl Panel {
    /// `<figure>_vartheta<angle>`, the file stem this panel is written to.
    pub fn stem(&self, figure: &str) -> String {
        format!("{figure}_vartheta{}", angle_label(self.vartheta_pi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub panels: Vec<Panel>,
}

fn panel(vartheta_pi: f64, quantities: &[Quantity]) -> Result<Panel> {
    let model = ModelConfig::builder(FIGURE_ALPHA, vartheta_pi * PI)
        .t_grid(uniform_grid(FIGURE_T_MAX, FIGURE_T_POINTS))
        .build()?;
    Ok(Panel {
        vartheta_pi,
        config: SweepConfig::new(model, quantities.iter().copied())?,
    })
}

/// Parameters of the three figures: `α = 5`, `T ∈ [0, 50]` at 2000 points.
///
/// * `fig1`: `γ` and `H(b), H(c), H(h)` for `ϑ ∈ {0, π/4}`.
/// * `fig2`: `W_θ, W_φ` and their rescaled forms for `ϑ ∈ {0, π/4}`.
/// * `fig3`: `Z_θ` and `Z_φ` at `θ = φ = π/4` for `ϑ = 0`.
pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    let (name, panels) = match name {
        "fig1" => ("fig1", vec![panel(0.0, &[Quantity::Gamma, Quantity::Info])?, panel(0.25, &[Quantity::Gamma, Quantity::Info])?]),
        "fig2" => ("fig2", vec![panel(0.0, &[Quantity::Wehrl, Quantity::Rescaled])?, panel(0.25, &[Quantity::Wehrl, Quantity::Rescaled])?]),
        "fig3" => {
            let mut p = panel(0.0, &[Quantity::ZTheta, Quantity::ZPhi])?;
            p.config = p.config.with_theta_pi(vec![0.25])?.with_phi_pi(vec![0.25])?;
            ("fig3", vec![p])
        }
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}`; valid presets are {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(FigurePreset { name, panels })
}

/// A gnuplot script drawing every numeric column of each panel file against
/// `T`, one panel per plot, into `<name>.png`.
pub fn gnuplot_script(preset: &FigurePreset, extension: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set xlabel 'T'");
    let _ = writeln!(s, "set terminal pngcairo size {},500", 700 * preset.panels.len());
    let _ = writeln!(s, "set output '{}.png'", preset.name);
    let _ = writeln!(s, "set multiplot layout 1,{}", preset.panels.len());
    for p in &preset.panels {
        let last = p.config.columns().len();
        let _ = writeln!(s, "set title 'vartheta = {}'", angle_label(p.vartheta_pi));
        let _ = writeln!(
            s,
            "plot for [i=2:{last}] '{}.{extension}' using 1:i with lines",
            p.stem(preset.name)
        );
    }
    let _ = writeln!(s, "unset multiplot");
    s
}
