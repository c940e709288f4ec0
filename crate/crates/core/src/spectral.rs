//! Discrete scattering data: poles in the open quadrants D₊ = {Re k · Im k > 0},
//! their orders and coefficient sequences, plus the JSON spec-file schema.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("pole {index} at {k} is not in D+ (needs re*im > 0)")]
    PoleOutsideDPlus { index: usize, k: Complex64 },
    #[error("poles {i} and {j} coincide up to sign")]
    DuplicatePole { i: usize, j: usize },
    #[error("pole {index}: coefficient sequence '{component}' has {len} entries, order is {order}")]
    ShortCoefficients { index: usize, component: char, len: usize, order: usize },
    #[error("pole {index} contains a non-finite value")]
    NonFinite { index: usize },
    #[error("pole {index} has order 0")]
    ZeroOrder { index: usize },
    #[error("sigma must be 1, got {0}")]
    UnsupportedSigma(i32),
    #[error("raw amplitude mode requires every pole to have order 1")]
    RawModeNeedsSimplePoles,
    #[error("configuration has no poles")]
    Empty,
    #[error("malformed spec file: {0}")]
    Parse(String),
}

/// One pole k in D₊ with its order and coefficient sequences.
///
/// In exponent mode `a[i]` is the Taylor exponent a^[i]; in raw amplitude
/// mode `a[0]` is the amplitude itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleDatum {
    pub k: Complex64,
    pub order: usize,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

impl PoleDatum {
    /// Order-1 pole given by raw amplitudes.
    pub fn raw(k: Complex64, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        PoleDatum { k, order: 1, a: vec![a], b: vec![b], c: vec![c], d: vec![d] }
    }

    pub fn components(&self) -> [&[Complex64]; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfiguration {
    pub sigma: i32,
    pub raw_amplitudes: bool,
    pub poles: Vec<PoleDatum>,
}

impl SpectralConfiguration {
    pub fn new(raw_amplitudes: bool, poles: Vec<PoleDatum>) -> Self {
        SpectralConfiguration { sigma: 1, raw_amplitudes, poles }
    }

    pub fn validate(self) -> Result<ValidatedConfiguration, ConfigError> {
        validate_config(self)
    }
}

/// A configuration whose invariants have been checked. Immutable.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfiguration(SpectralConfiguration);

impl ValidatedConfiguration {
    pub fn config(&self) -> &SpectralConfiguration {
        &self.0
    }

    pub fn into_inner(self) -> SpectralConfiguration {
        self.0
    }

    pub fn poles(&self) -> &[PoleDatum] {
        &self.0.poles
    }

    pub fn raw_amplitudes(&self) -> bool {
        self.0.raw_amplitudes
    }

    /// Number of base poles N.
    pub fn n(&self) -> usize {
        self.0.poles.len()
    }

    /// Total multiplicity N₀ = Σ nᵢ.
    pub fn total_order(&self) -> usize {
        self.0.poles.iter().map(|p| p.order).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.0.poles.iter().all(|p| p.order == 1)
    }

    /// Amplitudes (a, b, c, d) of an order-1 pole, decoding exponent mode.
    pub fn amplitudes(&self, i: usize) -> [Complex64; 4] {
        let p = &self.0.poles[i];
        let comps = p.components();
        std::array::from_fn(|c| if self.0.raw_amplitudes { comps[c][0] } else { comps[c][0].exp() })
    }

    pub fn full_pole_set(&self) -> FullPoleSet {
        derive_full_pole_set(self)
    }
}

pub fn validate_config(raw: SpectralConfiguration) -> Result<ValidatedConfiguration, ConfigError> {
    if raw.sigma != 1 {
        return Err(ConfigError::UnsupportedSigma(raw.sigma));
    }
    if raw.poles.is_empty() {
        return Err(ConfigError::Empty);
    }
    for (index, p) in raw.poles.iter().enumerate() {
        if !(p.k.re.is_finite() && p.k.im.is_finite()) {
            return Err(ConfigError::NonFinite { index });
        }
        if p.order == 0 {
            return Err(ConfigError::ZeroOrder { index });
        }
        if p.k.re * p.k.im <= 0.0 {
            return Err(ConfigError::PoleOutsideDPlus { index, k: p.k });
        }
        for (component, seq) in ['a', 'b', 'c', 'd'].into_iter().zip(p.components()) {
            if seq.len() < p.order {
                return Err(ConfigError::ShortCoefficients { index, component, len: seq.len(), order: p.order });
            }
            if seq.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(ConfigError::NonFinite { index });
            }
        }
    }
    if raw.raw_amplitudes && raw.poles.iter().any(|p| p.order != 1) {
        return Err(ConfigError::RawModeNeedsSimplePoles);
    }
    for i in 0..raw.poles.len() {
        for j in i + 1..raw.poles.len() {
            let (ki, kj) = (raw.poles[i].k, raw.poles[j].k);
            if ki == kj || ki == -kj {
                return Err(ConfigError::DuplicatePole { i, j });
            }
        }
    }
    Ok(ValidatedConfiguration(raw))
}

/// The 2N poles k₁..k_N, −k₁..−k_N, their conjugates and orders.
#[derive(Debug, Clone, PartialEq)]
pub struct FullPoleSet {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
    pub orders: Vec<usize>,
}

pub fn derive_full_pole_set(cfg: &ValidatedConfiguration) -> FullPoleSet {
    let poles = cfg.poles();
    let upper: Vec<Complex64> = poles.iter().map(|p| p.k).chain(poles.iter().map(|p| -p.k)).collect();
    let lower = upper.iter().map(|k| k.conj()).collect();
    let orders = poles.iter().map(|p| p.order).chain(poles.iter().map(|p| p.order)).collect();
    FullPoleSet { upper, lower, orders }
}

/// On-disk JSON layout of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub sigma: i32,
    pub raw_amplitudes: bool,
    pub poles: Vec<SpecPole>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecPole {
    pub k: [f64; 2],
    pub order: usize,
    pub a: Vec<[f64; 2]>,
    pub b: Vec<[f64; 2]>,
    pub c: Vec<[f64; 2]>,
    pub d: Vec<[f64; 2]>,
}

fn to_c(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|p| Complex64::new(p[0], p[1])).collect()
}

fn from_c(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl From<&SpectralConfiguration> for SpecFile {
    fn from(cfg: &SpectralConfiguration) -> Self {
        SpecFile {
            sigma: cfg.sigma,
            raw_amplitudes: cfg.raw_amplitudes,
            poles: cfg
                .poles
                .iter()
                .map(|p| SpecPole {
                    k: [p.k.re, p.k.im],
                    order: p.order,
                    a: from_c(&p.a),
                    b: from_c(&p.b),
                    c: from_c(&p.c),
                    d: from_c(&p.d),
                })
                .collect(),
        }
    }
}

impl From<&SpecFile> for SpectralConfiguration {
    fn from(f: &SpecFile) -> Self {
        SpectralConfiguration {
            sigma: f.sigma,
            raw_amplitudes: f.raw_amplitudes,
            poles: f
                .poles
                .iter()
                .map(|p| PoleDatum {
                    k: Complex64::new(p.k[0], p.k[1]),
                    order: p.order,
                    a: to_c(&p.a),
                    b: to_c(&p.b),
                    c: to_c(&p.c),
                    d: to_c(&p.d),
                })
                .collect(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<ValidatedConfiguration, ConfigError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    validate_config(SpectralConfiguration::from(&file))
}

pub fn spec_to_json(cfg: &SpectralConfiguration) -> String {
    serde_json::to_string_pretty(&SpecFile::from(cfg)).expect("spec serialization cannot fail")
}
