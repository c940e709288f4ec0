//! Lattice sampling of q(x, t) and deterministic CSV / JSON / SVG export.

use crate::engine::{Field, FieldSample, Soliton};
use crate::spectral::{spec_to_json, ValidatedConfiguration};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{Read, Write};
use thiserror::Error;

/// Environment variable capping the number of sampling threads.
pub const THREADS_ENV: &str = "NGSS_THREADS";

#[derive(Debug, Error)]
pub enum GridError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
    #[error("malformed grid json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Uniform lattice with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self, GridError> {
        let g = GridSpec { x_min, x_max, t_min, t_max, nx, nt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        let finite = [self.x_min, self.x_max, self.t_min, self.t_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err(GridError::InvalidGrid("bounds must be finite".into()));
        }
        if self.x_min.partial_cmp(&self.x_max) != Some(std::cmp::Ordering::Less) || self.t_min.partial_cmp(&self.t_max) != Some(std::cmp::Ordering::Less) {
            return Err(GridError::InvalidGrid("need x_min < x_max and t_min < t_max".into()));
        }
        if self.nx < 2 || self.nt < 2 {
            return Err(GridError::InvalidGrid("need nx >= 2 and nt >= 2".into()));
        }
        Ok(())
    }

    /// Parses `X0,X1,NX,T0,T1,NT`.
    pub fn parse(text: &str) -> Result<Self, GridError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(GridError::InvalidGrid(format!("expected X0,X1,NX,T0,T1,NT, got {text:?}")));
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| GridError::InvalidGrid(format!("{s:?}: {e}")));
        let count = |s: &str| s.parse::<usize>().map_err(|e| GridError::InvalidGrid(format!("{s:?}: {e}")));
        GridSpec::new(real(parts[0])?, real(parts[1])?, count(parts[2])?, real(parts[3])?, real(parts[4])?, count(parts[5])?)
    }

    pub fn x(&self, i: usize) -> f64 {
        lattice(self.x_min, self.x_max, self.nx, i)
    }

    pub fn t(&self, j: usize) -> f64 {
        lattice(self.t_min, self.t_max, self.nt, j)
    }

    pub fn len(&self) -> usize {
        self.nx * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn lattice(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Samples in t-outer, x-inner order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub grid: GridSpec,
    pub values: Vec<FieldSample>,
    pub config_digest: String,
}

impl GridSample {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().filter(|s| !s.singular).map(|s| s.q.norm()).fold(0.0, f64::max)
    }
}

/// Hex SHA-256 of the canonical JSON form of the configuration.
pub fn config_digest(cfg: &ValidatedConfiguration) -> String {
    hex::encode(Sha256::digest(spec_to_json(cfg.config()).as_bytes()))
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}

/// Evaluates any field on the lattice. Points are independent, so the result
/// does not depend on the number of threads. Singular points keep their flag;
/// a non-finite q there is stored as 0 so every export stays parseable.
pub fn sample_field(field: &dyn Field, grid: &GridSpec, config_digest: String) -> GridSample {
    let point = |idx: usize| {
        let mut s = field.sample(grid.x(idx % grid.nx), grid.t(idx / grid.nx));
        if !(s.q.re.is_finite() && s.q.im.is_finite()) {
            s.singular = true;
            s.q = Complex64::new(0.0, 0.0);
        }
        if !s.abs_det_m.is_finite() {
            s.abs_det_m = 0.0;
        }
        s
    };
    let eval = || -> Vec<FieldSample> { (0..grid.len()).into_par_iter().map(point).collect() };
    let values = match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(eval),
        None => eval(),
    };
    GridSample { grid: *grid, values, config_digest }
}

pub fn sample_grid(cfg: &ValidatedConfiguration, grid: &GridSpec) -> GridSample {
    sample_field(&Soliton::new(cfg.clone()), grid, config_digest(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub const CSV_HEADER: &str = "x,t,re_q,im_q,abs_q,singular";

pub fn export_csv(s: &GridSample, out: &mut dyn Write) -> Result<(), GridError> {
    writeln!(out, "{CSV_HEADER}")?;
    for v in &s.values {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}", v.x, v.t, v.q.re, v.q.im, v.q.norm(), v.singular)?;
    }
    Ok(())
}

pub fn export_json(s: &GridSample, out: &mut dyn Write) -> Result<(), GridError> {
    serde_json::to_writer_pretty(&mut *out, s)?;
    writeln!(out)?;
    Ok(())
}

pub fn export_grid(s: &GridSample, format: ExportFormat, out: &mut dyn Write) -> Result<(), GridError> {
    match format {
        ExportFormat::Csv => export_csv(s, out),
        ExportFormat::Json => export_json(s, out),
    }
}

pub fn import_json(input: &mut dyn Read) -> Result<GridSample, GridError> {
    let s: GridSample = serde_json::from_reader(input)?;
    s.grid.validate()?;
    if s.values.len() != s.grid.len() {
        return Err(GridError::InvalidGrid(format!("{} values for a {}x{} grid", s.values.len(), s.grid.nx, s.grid.nt)));
    }
    Ok(s)
}

/// Stops of the fixed colormap (dark blue to yellow), |q| normalized to [0, 1].
const COLORMAP: [[u8; 3]; 5] = [[13, 8, 135], [126, 3, 168], [204, 71, 120], [248, 149, 64], [240, 249, 33]];
const SINGULAR_COLOR: [u8; 3] = [255, 255, 255];

fn colormap(v: f64) -> [u8; 3] {
    let v = v.clamp(0.0, 1.0) * (COLORMAP.len() - 1) as f64;
    let i = (v.floor() as usize).min(COLORMAP.len() - 2);
    let f = v - i as f64;
    let mut rgb = [0u8; 3];
    for (c, out) in rgb.iter_mut().enumerate() {
        *out = (COLORMAP[i][c] as f64 * (1.0 - f) + COLORMAP[i + 1][c] as f64 * f).round() as u8;
    }
    rgb
}

/// Heatmap of |q| with x to the right and t upward, one cell per sample.
pub fn export_svg(s: &GridSample, out: &mut dyn Write) -> Result<(), GridError> {
    const CELL: usize = 4;
    let (w, h) = (s.grid.nx * CELL, s.grid.nt * CELL);
    let peak = s.max_abs();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#)?;
    for (idx, v) in s.values.iter().enumerate() {
        let (i, j) = (idx % s.grid.nx, idx / s.grid.nx);
        let [r, g, b] = if v.singular { SINGULAR_COLOR } else { colormap(if peak > 0.0 { v.q.norm() / peak } else { 0.0 }) };
        let y = (s.grid.nt - 1 - j) * CELL;
        writeln!(out, r##"<rect x="{}" y="{y}" width="{CELL}" height="{CELL}" fill="#{r:02x}{g:02x}{b:02x}"/>"##, i * CELL)?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
