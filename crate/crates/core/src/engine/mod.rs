//! Soliton construction: phases, eigenvectors, the kernel matrix M (or its
//! high-order block analogue) and the reconstructed field q(x, t).
//!
//! Every eigenvector U_l is stored scaled by e^{−|Re θ_l|}. The scaling is a
//! diagonal congruence on M, so q, the dressing matrices and the
//! anti-Hermitian structure are unchanged while the entries stay bounded.

mod closed;
mod dressing;
mod highorder;
mod phase;
mod simple;

use crate::linalg::{bordered_det_leading, bordered_det_trailing, CMatrix, Lu};
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closed::q_one_soliton_closed;
pub use dressing::{dressing_p1, dressing_p2, residue_p1, residue_p1_from_parts};
pub use highorder::{assemble_highorder, kernel_series, kernel_series_to, perturbed_vectors, q_highorder, PerturbedVectors};
pub use phase::{phase, phase_series};
pub use simple::{assemble_m_simple, eigenvectors_scaled, eigenvectors_simple, kernel_from_vectors, q_simple, EigenvectorPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("operation needs every pole to have order 1")]
    NotSimple,
    #[error("operation needs exactly one pole, got {0}")]
    NotSinglePole(usize),
    #[error("closed form needs b = conj(a) and d = conj(c)")]
    ConventionViolation,
    #[error("spectral parameter {k} coincides with a pole of the dressing matrix")]
    PoleEvaluation { k: Complex64 },
    #[error("kernel matrix is singular at (x, t) = ({x}, {t})")]
    SingularAssembly { x: f64, t: f64 },
    #[error("index {index} out of range for {len} poles")]
    IndexOutOfRange { index: usize, len: usize },
}

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
const SINGULAR_RATIO: f64 = 1e-30;

/// σ₃ = diag(1, 1, 1, 1, −1).
pub const SIGMA3: [f64; 5] = [1.0, 1.0, 1.0, 1.0, -1.0];

/// The involution Λ: swaps components 1↔3 and 2↔4, negates component 5.
pub fn lambda(v: [Complex64; 5]) -> [Complex64; 5] {
    [v[2], v[3], v[0], v[1], -v[4]]
}

pub fn lambda_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(5, 5);
    let one = Complex64::new(1.0, 0.0);
    m[(0, 2)] = one;
    m[(1, 3)] = one;
    m[(2, 0)] = one;
    m[(3, 1)] = one;
    m[(4, 4)] = -one;
    m
}

/// Value of q at one space-time point.
///
/// `abs_det_m` is the modulus of the determinant of the equilibrated kernel
/// matrix, the quantity the singularity test is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub t: f64,
    pub q: Complex64,
    pub abs_det_m: f64,
    pub singular: bool,
}

/// Kernel matrix plus borders, ready for evaluation of q.
#[derive(Debug, Clone)]
pub struct SolitonAssembly {
    pub m: CMatrix,
    /// First components of the U vectors (scaled).
    pub border_row: Vec<Complex64>,
    /// Fifth components of the Û vectors (scaled).
    pub border_col: Vec<Complex64>,
    /// Determinant of the equilibrated matrix.
    pub det_m: Complex64,
    /// log|det M| of the unscaled matrix.
    pub log_abs_det_m: f64,
    pub cond_estimate: f64,
    pub singular: bool,
    lu: Lu,
}

impl SolitonAssembly {
    pub(crate) fn new(m: CMatrix, border_row: Vec<Complex64>, border_col: Vec<Complex64>, log_scale: f64) -> Self {
        let lu = Lu::new(&m);
        let det_m = lu.det();
        let cond_estimate = match lu.inverse() {
            Some(inv) => m.norm_one() * inv.norm_one(),
            None => f64::INFINITY,
        };
        let singular = lu.is_singular() || det_m.norm().partial_cmp(&(SINGULAR_RATIO * m.hadamard_bound())).is_none_or(|o| o.is_lt());
        SolitonAssembly { log_abs_det_m: det_m.norm().ln() + log_scale, m, border_row, border_col, det_m, cond_estimate, singular, lu }
    }

    pub fn lu(&self) -> &Lu {
        &self.lu
    }

    pub fn inverse(&self) -> Option<CMatrix> {
        self.lu.inverse()
    }

    /// row · M⁻¹ · col; NaN when M is exactly singular.
    pub fn border_form(&self) -> Complex64 {
        match self.lu.solve(&self.border_col) {
            Some(y) => self.border_row.iter().zip(&y).map(|(a, b)| a * b).sum(),
            None => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    /// q = 2i · row · M⁻¹ · col.
    pub fn q(&self) -> Complex64 {
        2.0 * I * self.border_form()
    }

    /// det of [[0, row], [col, M]], the layout of the simple-pole theorem.
    pub fn det_h_leading(&self) -> Complex64 {
        bordered_det_leading(&self.m, &self.border_row, &self.border_col)
    }

    /// det of [[M, col], [row, 0]], the layout of the high-order theorem.
    pub fn det_h_trailing(&self) -> Complex64 {
        bordered_det_trailing(&self.m, &self.border_row, &self.border_col)
    }

    /// q = −2i det H / det M with the leading border.
    pub fn q_from_leading_det(&self) -> Complex64 {
        -2.0 * I * self.det_h_leading() / self.det_m
    }

    /// q = −2i det 𝓗 / det 𝓜 with the trailing border. The bordered-determinant
    /// identity makes this equal to [`Self::q`]; the printed +2i prefactor of the
    /// high-order theorem would flip the sign.
    pub fn q_from_trailing_det(&self) -> Complex64 {
        -2.0 * I * self.det_h_trailing() / self.det_m
    }

    pub(crate) fn sample(&self, x: f64, t: f64) -> FieldSample {
        FieldSample { x, t, q: self.q(), abs_det_m: self.det_m.norm(), singular: self.singular }
    }
}

/// Anything that can be evaluated pointwise as a field q(x, t).
pub trait Field: Sync {
    fn sample(&self, x: f64, t: f64) -> FieldSample;

    fn q(&self, x: f64, t: f64) -> Complex64 {
        self.sample(x, t).q
    }
}

impl<F> Field for F
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    fn sample(&self, x: f64, t: f64) -> FieldSample {
        let q = self(x, t);
        FieldSample { x, t, q, abs_det_m: 1.0, singular: !(q.re.is_finite() && q.im.is_finite()) }
    }
}

/// The solution attached to a configuration; dispatches on pole orders.
#[derive(Debug, Clone)]
pub struct Soliton {
    cfg: ValidatedConfiguration,
}

impl Soliton {
    pub fn new(cfg: ValidatedConfiguration) -> Self {
        Soliton { cfg }
    }

    pub fn config(&self) -> &ValidatedConfiguration {
        &self.cfg
    }
}

impl Field for Soliton {
    fn sample(&self, x: f64, t: f64) -> FieldSample {
        if self.cfg.is_simple() {
            q_simple(&self.cfg, x, t).expect("order-1 configuration")
        } else {
            q_highorder(&self.cfg, x, t)
        }
    }
}
