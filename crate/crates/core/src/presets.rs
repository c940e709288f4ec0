//! Parameter sets of the reference figures, with plotting windows.
//!
//! Order-1 sets without explicit b, d use b = conj(a), d = conj(c). Sets that
//! list k₂ = −k₁ duplicate the automatically generated mirror pole and are
//! served as the equivalent one-pole configuration.

use crate::grid::GridSpec;
use crate::spectral::{PoleDatum, SpectralConfiguration};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresetError {
    #[error("unknown preset {0:?}; expected one of fig1..fig15")]
    UnknownPreset(String),
}

pub const PRESET_NAMES: [&str; 15] =
    ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15"];

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub config: SpectralConfiguration,
    pub grid: GridSpec,
    /// How the parameter set was completed, when it was.
    pub note: &'static str,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn r(re: f64) -> Complex64 {
    c(re, 0.0)
}

/// Order-1 pole with b = conj(a), d = conj(c).
fn conv(k: Complex64, a: Complex64, cc: Complex64) -> PoleDatum {
    PoleDatum::raw(k, a, a.conj(), cc, cc.conj())
}

/// Pole in exponent encoding with the same coefficient list for a, b, c, d.
fn expo(k: Complex64, coeffs: &[Complex64]) -> PoleDatum {
    expo4(k, coeffs, coeffs, coeffs, coeffs)
}

fn expo4(k: Complex64, a: &[Complex64], b: &[Complex64], cc: &[Complex64], d: &[Complex64]) -> PoleDatum {
    PoleDatum { k, order: a.len(), a: a.to_vec(), b: b.to_vec(), c: cc.to_vec(), d: d.to_vec() }
}

fn window(t: f64) -> GridSpec {
    GridSpec { x_min: -10.0, x_max: 10.0, t_min: -t, t_max: t, nx: 201, nt: 101 }
}

pub fn figure_preset(name: &str) -> Result<Preset, PresetError> {
    let idx = PRESET_NAMES.iter().position(|&n| n == name).ok_or_else(|| PresetError::UnknownPreset(name.to_string()))?;
    let name = PRESET_NAMES[idx];
    let conv_note = "b = conj(a), d = conj(c)";
    let mirror_note = "listed second pole equals the mirror of the first; served as one pole";
    let (raw, poles, t, note) = match name {
        "fig1" => (true, vec![conv(c(0.01, 0.5), r(0.0), r(1.0))], 5.0, conv_note),
        "fig2" => (true, vec![conv(c(1.6, 1.0), r(1.0), r(0.0))], 0.5, conv_note),
        "fig3" => (true, vec![conv(c(0.1, 1.0), c(0.0, 0.5), c(0.0, 0.75f64.sqrt()))], 5.0, conv_note),
        "fig4" => (true, vec![conv(c(0.5, 0.5), c(0.0, 0.5), c(0.0, 0.75f64.sqrt()))], 5.0, conv_note),
        "fig5" => (true, vec![conv(c(0.5, 0.5), r(1.0), r(1.0))], 5.0, conv_note),
        "fig6" => (true, vec![PoleDatum::raw(c(0.5, 0.5), r(1.0), r(0.0), r(0.0), r(0.0))], 2.0, mirror_note),
        "fig7" => (
            true,
            vec![
                PoleDatum::raw(c(0.4, 0.5), r(1.0), r(0.0), r(0.0), r(0.0)),
                PoleDatum::raw(c(0.7, 0.8), r(1.0), r(0.0), r(1.0), r(0.0)),
            ],
            5.0,
            "",
        ),
        "fig8" => (true, vec![PoleDatum::raw(c(0.5, 0.5), r(1.0), r(1.0), r(1.0), r(1.0))], 2.0, mirror_note),
        "fig9" => (true, vec![conv(c(0.3, 0.4), r(1.0), c(1.0, 1.0)), conv(c(0.5, 0.5), c(0.0, 1.0), c(0.0, 0.5))], 5.0, ""),
        "fig10" => (
            true,
            vec![conv(c(1.2, 0.4), r(2f64.sqrt()), c(0.0, 2f64.sqrt())), conv(c(0.5, 0.5), c(0.0, 1.0), r(1.0))],
            5.0,
            "",
        ),
        "fig11" => (false, vec![expo(c(0.3, 1.0), &[r(0.0), r(0.0)])], 5.0, "first-order exponents 0"),
        "fig12" => (false, vec![expo(c(0.3, 1.0), &[r(-1.5), r(0.0)])], 5.0, "first-order exponents 0"),
        "fig13" => {
            let ac = [c(-1.0, 1.0), r(0.0)];
            let bd = [r(-1.0), r(0.0)];
            (false, vec![expo4(c(0.4, 1.0), &ac, &bd, &ac, &bd)], 5.0, "first-order exponents 0")
        }
        "fig14" => (false, vec![expo(c(0.3, 1.0), &[r(-1.0), r(0.0)]), expo(c(1.0, 1.0), &[r(0.0)])], 5.0, ""),
        "fig15" => (false, vec![expo(c(0.5, 1.2), &[r(-1.0), r(0.0)]), expo(c(0.6, 1.2), &[r(-1.0)])], 5.0, ""),
        _ => unreachable!(),
    };
    Ok(Preset { name, config: SpectralConfiguration::new(raw, poles), grid: window(t), note })
}
