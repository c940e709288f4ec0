use super::VerifyError;
use crate::engine::{
    dressing_p1, dressing_p2, eigenvectors_scaled, lambda_matrix, q_highorder, q_simple, residue_p1, EngineError, I,
};
use crate::linalg::CMatrix;
use crate::spectral::{SpectralConfiguration, ValidatedConfiguration};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    /// 1-based matrix entry of the residue coefficient.
    pub entry: (usize, usize),
    pub reconstructed: Complex64,
    pub expected: Complex64,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub point: (f64, f64),
    pub tol: f64,
    pub relations: Vec<RelationCheck>,
    pub passed: bool,
}

impl ConsistencyReport {
    pub fn violated(&self) -> Vec<String> {
        self.relations.iter().filter(|r| !r.passed).map(|r| format!("({},{})", r.entry.0, r.entry.1)).collect()
    }

    pub fn ensure(self) -> Result<Self, VerifyError> {
        if self.passed {
            Ok(self)
        } else {
            Err(VerifyError::ConsistencyFailure { entries: self.violated() })
        }
    }
}

/// Compares the eight field reconstructions read off the residue matrix with
/// q(x, t) and q(−x, t).
pub fn consistency_from_residue(
    res: &CMatrix,
    q: Complex64,
    q_mirror: Complex64,
    point: (f64, f64),
    tol: f64,
) -> ConsistencyReport {
    let m2i = -2.0 * I;
    let p2i = 2.0 * I;
    let table = [
        ((1, 5), m2i * res[(0, 4)], q),
        ((2, 5), m2i * res[(1, 4)], q.conj()),
        ((3, 5), m2i * res[(2, 4)], q_mirror),
        ((4, 5), m2i * res[(3, 4)], q_mirror.conj()),
        ((5, 1), p2i * res[(4, 0)], -q.conj()),
        ((5, 2), p2i * res[(4, 1)], -q),
        ((5, 3), p2i * res[(4, 2)], -q_mirror.conj()),
        ((5, 4), p2i * res[(4, 3)], -q_mirror),
    ];
    let scale = q.norm().max(q_mirror.norm()).max(1.0);
    let relations: Vec<RelationCheck> = table
        .into_iter()
        .map(|(entry, reconstructed, expected)| {
            let deviation = (reconstructed - expected).norm() / scale;
            RelationCheck { entry, reconstructed, expected, deviation, passed: deviation <= tol }
        })
        .collect();
    let passed = relations.iter().all(|r| r.passed);
    ConsistencyReport { point, tol, relations, passed }
}

/// Evaluates every reconstruction relation at (x, t). The report is returned
/// whether or not the relations hold; use [`ConsistencyReport::ensure`] to
/// turn violations into an error.
pub fn check_reconstruction_consistency(
    cfg: &ValidatedConfiguration,
    x: f64,
    t: f64,
    tol: f64,
) -> Result<ConsistencyReport, VerifyError> {
    let res = residue_p1(cfg, x, t)?;
    let q = q_simple(cfg, x, t)?.q;
    let qm = q_simple(cfg, -x, t)?.q;
    Ok(consistency_from_residue(&res, q, qm, (x, t), tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub points: usize,
    pub max_deviation: f64,
    pub tol: f64,
    /// True when a raw amplitude is zero and has no exponent encoding.
    pub skipped: bool,
    pub passed: bool,
}

impl ReductionReport {
    pub fn ensure(self) -> Result<Self, VerifyError> {
        if self.passed {
            Ok(self)
        } else {
            Err(VerifyError::ReductionFailure { max_deviation: self.max_deviation, tol: self.tol })
        }
    }
}

fn truncated_to_order_one(cfg: &ValidatedConfiguration) -> ValidatedConfiguration {
    let mut raw = cfg.config().clone();
    for p in &mut raw.poles {
        p.order = 1;
        for seq in [&mut p.a, &mut p.b, &mut p.c, &mut p.d] {
            seq.truncate(1);
        }
    }
    raw.validate().expect("truncation keeps validity")
}

fn exponent_encoded(cfg: &ValidatedConfiguration) -> Option<ValidatedConfiguration> {
    if !cfg.raw_amplitudes() {
        return Some(cfg.clone());
    }
    let mut poles = cfg.poles().to_vec();
    for p in &mut poles {
        for seq in [&mut p.a, &mut p.b, &mut p.c, &mut p.d] {
            if seq[0] == Complex64::new(0.0, 0.0) {
                return None;
            }
            seq[0] = seq[0].ln();
        }
    }
    SpectralConfiguration::new(false, poles).validate().ok()
}

/// Compares the high-order evaluation of `cfg` with the simple-pole evaluation
/// of its order-one truncation.
pub fn check_reduction_highorder(
    cfg: &ValidatedConfiguration,
    points: &[(f64, f64)],
    tol: f64,
) -> Result<ReductionReport, VerifyError> {
    let simple_cfg = truncated_to_order_one(cfg);
    let Some(high_cfg) = exponent_encoded(cfg) else {
        return Ok(ReductionReport { points: 0, max_deviation: 0.0, tol, skipped: true, passed: true });
    };
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for &(x, t) in points {
        let s = q_simple(&simple_cfg, x, t)?;
        let h = q_highorder(&high_cfg, x, t);
        if s.singular || h.singular {
            continue;
        }
        used += 1;
        worst = worst.max((h.q - s.q).norm() / s.q.norm().max(1.0));
    }
    Ok(ReductionReport { points: used, max_deviation: worst, tol, skipped: false, passed: worst <= tol })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DressingReport {
    pub point: (f64, f64),
    pub tol: f64,
    /// max_l ‖P₁(k_l) U_l‖ / ‖U_l‖ together with the Û_l P₂(k̂_l) analogue.
    pub kernel_max: f64,
    pub inverse_max: f64,
    pub reflection_symmetry_max: f64,
    pub adjoint_symmetry_max: f64,
    pub decay_ratio: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl DressingReport {
    pub fn ensure(self) -> Result<Self, VerifyError> {
        if self.passed {
            Ok(self)
        } else {
            Err(VerifyError::DressingFailure { items: self.failures })
        }
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kernel conditions, P₁P₂ = I, both symmetry reductions and 1/k decay.
pub fn check_dressing(
    cfg: &ValidatedConfiguration,
    x: f64,
    t: f64,
    k_samples: &[Complex64],
    tol: f64,
) -> Result<DressingReport, VerifyError> {
    let set = cfg.full_pole_set();
    let pair = eigenvectors_scaled(cfg, x, t)?;
    let mut kernel_max: f64 = 0.0;
    for l in 0..set.upper.len() {
        let p1 = dressing_p1(cfg, x, t, set.upper[l])?;
        kernel_max = kernel_max.max(vec_norm(&p1.matvec(&pair.u[l])) / vec_norm(&pair.u[l]));
        let p2 = dressing_p2(cfg, x, t, set.lower[l])?;
        let row: Vec<Complex64> = (0..5).map(|s| (0..5).map(|r| pair.u_hat[l][r] * p2[(r, s)]).sum()).collect();
        kernel_max = kernel_max.max(vec_norm(&row) / vec_norm(&pair.u_hat[l]));
    }

    let lam = lambda_matrix();
    let (mut inverse_max, mut reflection_symmetry_max, mut adjoint_symmetry_max) = (0.0f64, 0.0f64, 0.0f64);
    for &k in k_samples {
        let p1 = dressing_p1(cfg, x, t, k)?;
        let p2 = dressing_p2(cfg, x, t, k)?;
        inverse_max = inverse_max.max(p1.matmul(&p2).sub(&CMatrix::identity(5)).max_abs());
        let mirrored = lam.matmul(&dressing_p1(cfg, -x, t, -k)?).matmul(&lam);
        reflection_symmetry_max = reflection_symmetry_max.max(p1.sub(&mirrored).max_abs());
        let adj = dressing_p1(cfg, x, t, k.conj())?.adjoint();
        adjoint_symmetry_max = adjoint_symmetry_max.max(p2.sub(&adj).max_abs());
    }

    let dev = |k: Complex64| -> Result<f64, EngineError> { Ok(dressing_p1(cfg, x, t, k)?.sub(&CMatrix::identity(5)).max_abs()) };
    let decay_ratio = dev(Complex64::new(1e3, 1e3))? / dev(Complex64::new(1e4, 1e4))?;

    let mut failures = Vec::new();
    for (name, value) in [
        ("kernel", kernel_max),
        ("inverse", inverse_max),
        ("reflection_symmetry", reflection_symmetry_max),
        ("adjoint_symmetry", adjoint_symmetry_max),
    ] {
        if value.is_nan() || value > tol {
            failures.push(format!("{name}={value:e}"));
        }
    }
    if decay_ratio.is_nan() || (decay_ratio - 10.0).abs() > 1.0 {
        failures.push(format!("decay_ratio={decay_ratio}"));
    }
    Ok(DressingReport {
        point: (x, t),
        tol,
        kernel_max,
        inverse_max,
        reflection_symmetry_max,
        adjoint_symmetry_max,
        decay_ratio,
        passed: failures.is_empty(),
        failures,
    })
}

/// Fixed-seed spectral parameters with 0.5 ≤ |k| ≤ 3, at least 0.1 away from
/// every pole and conjugate pole.
pub fn random_k_samples(cfg: &ValidatedConfiguration, seed: u64, count: usize) -> Vec<Complex64> {
    let set = cfg.full_pole_set();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = Complex64::from_polar(rng.gen_range(0.5..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
        if set.upper.iter().chain(&set.lower).all(|p| (k - p).norm() > 0.1) {
            out.push(k);
        }
    }
    out
}
