//! Independent numerical checks: PDE residual, convergence order, and the
//! structural identities of the reconstruction.

mod checks;
mod residual;

use crate::engine::{EngineError, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use checks::{
    check_dressing, check_reconstruction_consistency, check_reduction_highorder, consistency_from_residue, random_k_samples,
    ConsistencyReport, DressingReport, ReductionReport, RelationCheck,
};
pub use residual::{
    coupled_residual, loglog_slope, pde_residual, residual_convergence, residual_convergence_against, ConvergenceReport, Reflected, ResidualReport, STENCIL_ORDER,
};

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("singular sample on the stencil at ({x}, {t})")]
    SingularOnStencil { x: f64, t: f64 },
    #[error("reconstruction relations violated: {}", entries.join(", "))]
    ConsistencyFailure { entries: Vec<String> },
    #[error("high-order reduction deviates by {max_deviation:e} (tolerance {tol:e})")]
    ReductionFailure { max_deviation: f64, tol: f64 },
    #[error("dressing checks failed: {}", items.join(", "))]
    DressingFailure { items: Vec<String> },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Draws `count` points uniformly from the window at which the field is not
/// flagged singular, using a fixed-seed generator.
pub fn random_points(field: &dyn Field, seed: u64, count: usize, x: (f64, f64), t: (f64, f64)) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let p = (rng.gen_range(x.0..x.1), rng.gen_range(t.0..t.1));
        let s = field.sample(p.0, p.1);
        if !s.singular && s.q.re.is_finite() && s.q.im.is_finite() {
            out.push(p);
        }
    }
    out
}
