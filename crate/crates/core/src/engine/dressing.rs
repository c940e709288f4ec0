//! Explicit reflectionless dressing matrices
//! P₁(k) = I − Σ U_i Û_l (M⁻¹)_il / (k − k̂_l) and
//! P₂(k) = I + Σ U_i Û_l (M⁻¹)_il / (k − k_i).

use super::{assemble_m_simple, eigenvectors_scaled, EigenvectorPair, EngineError};
use crate::linalg::CMatrix;
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;

struct Parts {
    pair: EigenvectorPair,
    inv: CMatrix,
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
}

fn parts(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<Parts, EngineError> {
    let a = assemble_m_simple(cfg, x, t)?;
    let inv = a.inverse().ok_or(EngineError::SingularAssembly { x, t })?;
    let set = cfg.full_pole_set();
    Ok(Parts { pair: eigenvectors_scaled(cfg, x, t)?, inv, upper: set.upper, lower: set.lower })
}

fn check_pole(k: Complex64, poles: &[Complex64]) -> Result<(), EngineError> {
    if poles.iter().any(|p| (k - p).norm() <= 1e-12 * k.norm().max(1.0)) {
        return Err(EngineError::PoleEvaluation { k });
    }
    Ok(())
}

/// I + Σ_il U_i Û_l (M⁻¹)_il · w(i, l).
fn rank_sum(p: &EigenvectorPair, inv: &CMatrix, w: impl Fn(usize, usize) -> Complex64) -> CMatrix {
    let mut out = CMatrix::identity(5);
    for i in 0..p.u.len() {
        for l in 0..p.u.len() {
            let f = inv[(i, l)] * w(i, l);
            for r in 0..5 {
                for s in 0..5 {
                    out[(r, s)] += p.u[i][r] * p.u_hat[l][s] * f;
                }
            }
        }
    }
    out
}

pub fn dressing_p1(cfg: &ValidatedConfiguration, x: f64, t: f64, k: Complex64) -> Result<CMatrix, EngineError> {
    let p = parts(cfg, x, t)?;
    check_pole(k, &p.lower)?;
    Ok(rank_sum(&p.pair, &p.inv, |_, l| -1.0 / (k - p.lower[l])))
}

pub fn dressing_p2(cfg: &ValidatedConfiguration, x: f64, t: f64, k: Complex64) -> Result<CMatrix, EngineError> {
    let p = parts(cfg, x, t)?;
    check_pole(k, &p.upper)?;
    Ok(rank_sum(&p.pair, &p.inv, |i, _| 1.0 / (k - p.upper[i])))
}

/// Coefficient of 1/k in P₁: −Σ U_i Û_l (M⁻¹)_il, from given parts.
pub fn residue_p1_from_parts(pair: &EigenvectorPair, m_inv: &CMatrix) -> CMatrix {
    let mut out = rank_sum(pair, m_inv, |_, _| Complex64::new(-1.0, 0.0));
    for d in 0..5 {
        out[(d, d)] -= 1.0;
    }
    out
}

pub fn residue_p1(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<CMatrix, EngineError> {
    let p = parts(cfg, x, t)?;
    Ok(residue_p1_from_parts(&p.pair, &p.inv))
}
