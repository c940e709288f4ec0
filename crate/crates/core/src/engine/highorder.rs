//! High-order poles by perturbation: each pole k_l is moved to k_l + s_l ε,
//! every quantity is expanded in (ε, ε̂), and the Taylor coefficients of the
//! kernel fill the block matrix 𝓜.
//!
//! Direct poles use s = +1 and mirror poles s = −1, so that the mirror vector,
//! which carries the phase θ(−x, t, k_l + ε), sits at the pole −(k_l + ε) it
//! annihilates. This makes the result the confluent limit of the simple-pole
//! formula.

use super::{phase_series, simple::index_phase, EngineError, FieldSample, SolitonAssembly, SIGMA3};
use crate::linalg::CMatrix;
use crate::series::BivariateSeries;
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;

/// Taylor coefficients (in ε) of the five components of every U_l(ε).
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedVectors {
    /// `u[l][c][m]` = coefficient of ε^m in component c of U_l.
    pub u: Vec<[Vec<Complex64>; 5]>,
    /// Stored coefficients equal the true ones times e^{−log_scale[l]}.
    pub log_scale: Vec<f64>,
}

impl PerturbedVectors {
    /// Coefficient of ε̂^m in component c of Û_l(ε̂) = U_l(conj ε̂)†.
    pub fn hat(&self, l: usize, c: usize, m: usize) -> Complex64 {
        self.u[l][c][m].conj()
    }
}

fn sign_of(cfg: &ValidatedConfiguration, l: usize) -> f64 {
    if l < cfg.n() {
        1.0
    } else {
        -1.0
    }
}

/// Coefficients of U_l(ε) up to ε^max_order, scaled by e^{−r}.
fn vector_coefficients(cfg: &ValidatedConfiguration, l: usize, x: f64, t: f64, max_order: usize, r: f64) -> [Vec<Complex64>; 5] {
    let n = cfg.n();
    let pole = &cfg.poles()[l % n];
    let xs = if l < n { x } else { -x };
    let th = phase_series(xs, t, pole.k, max_order);
    let shift = BivariateSeries::constant(Complex64::new(r, 0.0), max_order, 0);
    let comps = pole.components();
    let v: [BivariateSeries; 5] = std::array::from_fn(|c| {
        let phase_part = &th.scale(Complex64::new(SIGMA3[c], 0.0)) - &shift;
        if c == 4 {
            phase_part.exp()
        } else if cfg.raw_amplitudes() {
            phase_part.exp().scale(comps[c][0])
        } else {
            let upto = pole.order.min(max_order + 1);
            (&BivariateSeries::in_eps(&comps[c][..upto], max_order, 0) + &phase_part).exp()
        }
    });
    let coeffs: [Vec<Complex64>; 5] = std::array::from_fn(|c| (0..=max_order).map(|m| v[c].coeff(m, 0).unwrap()).collect());
    if l >= n {
        // Λ: swap 1↔3, 2↔4, negate 5
        let [a, b, c, d, e] = coeffs;
        [c, d, a, b, e.into_iter().map(|z| -z).collect()]
    } else {
        coeffs
    }
}

/// Perturbed eigenvectors to each pole's own order. With `scaled`, each U_l is
/// multiplied by e^{−|Re θ_l|}.
pub fn perturbed_vectors(cfg: &ValidatedConfiguration, x: f64, t: f64, scaled: bool) -> PerturbedVectors {
    let set = cfg.full_pole_set();
    let mut out = PerturbedVectors { u: Vec::new(), log_scale: Vec::new() };
    for l in 0..2 * cfg.n() {
        let r = if scaled { index_phase(cfg, l, x, t).re.abs() } else { 0.0 };
        out.u.push(vector_coefficients(cfg, l, x, t, set.orders[l] - 1, r));
        out.log_scale.push(r);
    }
    out
}

fn kernel_from_coefficients(
    cfg: &ValidatedConfiguration,
    i: usize,
    j: usize,
    ui: &[Vec<Complex64>; 5],
    uj: &[Vec<Complex64>; 5],
    max_eps: usize,
    max_hat: usize,
) -> BivariateSeries {
    let set = cfg.full_pole_set();
    let mut dot = BivariateSeries::zero(max_eps, max_hat);
    for c in 0..5 {
        let hat_c: Vec<Complex64> = ui[c].iter().map(|z| z.conj()).collect();
        let prod = &BivariateSeries::in_hat(&hat_c, max_eps, max_hat) * &BivariateSeries::in_eps(&uj[c], max_eps, max_hat);
        dot = &dot + &prod;
    }
    let alpha = Complex64::new(sign_of(cfg, j), 0.0);
    let beta = Complex64::new(-sign_of(cfg, i), 0.0);
    let recip = BivariateSeries::recip_linear(set.upper[j] - set.lower[i], alpha, beta, max_eps, max_hat)
        .expect("D+ and D- are disjoint");
    &dot * &recip
}

/// Kernel Û_i(ε̂) U_j(ε) / ((k_j + s_j ε) − (k̂_i + s_i ε̂)) expanded to orders
/// (max_eps, max_hat). Indices are 0-based over the 2N poles; unscaled.
pub fn kernel_series_to(
    i: usize,
    j: usize,
    cfg: &ValidatedConfiguration,
    x: f64,
    t: f64,
    max_eps: usize,
    max_hat: usize,
) -> Result<BivariateSeries, EngineError> {
    let len = 2 * cfg.n();
    for index in [i, j] {
        if index >= len {
            return Err(EngineError::IndexOutOfRange { index, len });
        }
    }
    let ui = vector_coefficients(cfg, i, x, t, max_hat, 0.0);
    let uj = vector_coefficients(cfg, j, x, t, max_eps, 0.0);
    Ok(kernel_from_coefficients(cfg, i, j, &ui, &uj, max_eps, max_hat))
}

/// Kernel series truncated at the pole orders (n_j − 1, n_i − 1).
pub fn kernel_series(i: usize, j: usize, cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<BivariateSeries, EngineError> {
    let set = cfg.full_pole_set();
    let len = set.orders.len();
    if i >= len || j >= len {
        return Err(EngineError::IndexOutOfRange { index: i.max(j), len });
    }
    kernel_series_to(i, j, cfg, x, t, set.orders[j] - 1, set.orders[i] - 1)
}

/// Block matrix 𝓜 with rows indexed by (i, ε̂-power) and columns by
/// (j, ε-power); the row border holds first components of U, the column
/// border fifth components of Û.
pub fn assemble_highorder(cfg: &ValidatedConfiguration, x: f64, t: f64) -> SolitonAssembly {
    let set = cfg.full_pole_set();
    let pv = perturbed_vectors(cfg, x, t, true);
    let offsets: Vec<usize> = set.orders.iter().scan(0, |acc, &n| {
        let o = *acc;
        *acc += n;
        Some(o)
    }).collect();
    let dim: usize = set.orders.iter().sum();
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..set.orders.len() {
        for j in 0..set.orders.len() {
            let (ni, nj) = (set.orders[i], set.orders[j]);
            let k = kernel_from_coefficients(cfg, i, j, &pv.u[i], &pv.u[j], nj - 1, ni - 1);
            for l1 in 0..ni {
                for l2 in 0..nj {
                    m[(offsets[i] + l1, offsets[j] + l2)] = k.coeff(l2, l1).unwrap();
                }
            }
        }
    }
    let mut row = Vec::with_capacity(dim);
    let mut col = Vec::with_capacity(dim);
    for l in 0..set.orders.len() {
        for p in 0..set.orders[l] {
            row.push(pv.u[l][0][p]);
            col.push(pv.hat(l, 4, p));
        }
    }
    let log_scale = 2.0 * pv.log_scale.iter().zip(&set.orders).map(|(r, &n)| r * n as f64).sum::<f64>();
    SolitonAssembly::new(m, row, col, log_scale)
}

/// q(x, t) for arbitrary pole orders.
pub fn q_highorder(cfg: &ValidatedConfiguration, x: f64, t: f64) -> FieldSample {
    assemble_highorder(cfg, x, t).sample(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{phase, q_simple, I};
    use crate::spectral::{PoleDatum, SpectralConfiguration};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn second_order(k: Complex64, zeroth: [Complex64; 4], first: [Complex64; 4]) -> PoleDatum {
        let seq = |i: usize| vec![zeroth[i], first[i]];
        PoleDatum { k, order: 2, a: seq(0), b: seq(1), c: seq(2), d: seq(3) }
    }

    fn exp_simple(k: Complex64, e: [Complex64; 4]) -> PoleDatum {
        PoleDatum { k, order: 1, a: vec![e[0]], b: vec![e[1]], c: vec![e[2]], d: vec![e[3]] }
    }

    #[test]
    fn order_one_kernel_constant_is_simple_entry() {
        let cfg = SpectralConfiguration::new(
            false,
            vec![exp_simple(c(0.5, 0.5), [c(0.1, 0.0), c(0.0, 0.3), c(-0.2, 0.1), c(0.0, 0.0)]), exp_simple(c(0.2, 0.9), [c(0.0, 0.0); 4])],
        )
        .validate()
        .unwrap();
        let (x, t) = (0.4, -0.3);
        let m = crate::engine::kernel_from_vectors(&cfg, &crate::engine::eigenvectors_simple(&cfg, x, t).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let k = kernel_series(i, j, &cfg, x, t).unwrap();
                assert_eq!((k.max_eps(), k.max_hat()), (0, 0));
                assert!((k.coeff(0, 0).unwrap() - m[(i, j)]).norm() < 1e-13 * m.max_abs());
            }
        }
    }

    #[test]
    fn origin_kernel_constant_by_hand() {
        let cfg = SpectralConfiguration::new(false, vec![second_order(c(0.3, 1.0), [c(0.0, 0.0); 4], [c(0.0, 0.0); 4])]).validate().unwrap();
        let k = kernel_series(0, 1, &cfg, 0.0, 0.0).unwrap();
        // U₁₀ = (1,1,1,1,1), U₂₀ = Λ U₁₀ = (1,1,1,1,−1): dot = 4 − 1 = 3
        let want = c(3.0, 0.0) / (c(-0.3, -1.0) - c(0.3, -1.0));
        assert!((k.coeff(0, 0).unwrap() - want).norm() < 1e-14);
        assert!(matches!(kernel_series(2, 0, &cfg, 0.0, 0.0), Err(EngineError::IndexOutOfRange { .. })));
    }

    #[test]
    fn reduces_to_simple_formula_for_order_one() {
        let cfg = SpectralConfiguration::new(
            false,
            vec![exp_simple(c(0.4, 0.5), [c(0.0, 0.0), c(0.2, 0.1), c(0.5, -0.4), c(0.0, 1.0)]), exp_simple(c(0.7, 0.8), [c(-0.3, 0.0); 4])],
        )
        .validate()
        .unwrap();
        for &(x, t) in &[(0.0, 0.0), (2.5, -1.0), (-7.0, 3.0)] {
            let s = q_simple(&cfg, x, t).unwrap().q;
            let h = q_highorder(&cfg, x, t).q;
            assert!((s - h).norm() <= 1e-9 * s.norm().max(1.0));
        }
    }

    #[test]
    fn determinant_forms_agree_for_high_order() {
        let cfg = SpectralConfiguration::new(false, vec![second_order(c(0.3, 1.0), [c(0.0, 0.0); 4], [c(0.0, 0.0); 4])]).validate().unwrap();
        let a = assemble_highorder(&cfg, 0.7, 0.2);
        assert_eq!(a.m.rows(), 4);
        assert!((a.q_from_trailing_det() - a.q()).norm() < 1e-10 * a.q().norm());
        assert!((a.q_from_leading_det() - a.q()).norm() < 1e-10 * a.q().norm());
    }

    #[test]
    fn block_matrix_is_anti_hermitian() {
        let cfg = SpectralConfiguration::new(
            false,
            vec![second_order(c(0.3, 1.0), [c(-1.0, 0.0); 4], [c(0.2, 0.1), c(0.0, 0.0), c(0.4, 0.0), c(0.0, -0.3)]), exp_simple(c(1.0, 1.0), [c(0.0, 0.0); 4])],
        )
        .validate()
        .unwrap();
        let a = assemble_highorder(&cfg, 1.3, -0.4);
        let adj = a.m.adjoint();
        let sum = CMatrix::from_fn(6, 6, |i, j| adj[(i, j)] + a.m[(i, j)]);
        assert!(sum.max_abs() < 1e-12 * a.m.max_abs());
    }

    #[test]
    fn second_order_borders_follow_printed_pattern() {
        // printed borders replace e^φ by 1 + φ in zeroth entries and by 1 in
        // derivative entries; compare the exact coefficients against that
        let k = c(0.3, 1.0);
        let cfg = SpectralConfiguration::new(false, vec![second_order(k, [c(0.0, 0.0); 4], [c(0.0, 0.0); 4])]).validate().unwrap();
        let (x, t) = (0.6, -0.25);
        let pv = perturbed_vectors(&cfg, x, t, false);
        let th = phase(x, t, k);
        let ph = phase(-x, t, k);
        let kc = k.conj();
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-12 * (1.0 + b.norm());

        assert!(close(pv.u[0][0][0], th.exp()));
        assert!(close(pv.u[0][0][1] / th.exp(), I * x + 12.0 * I * k * k * t));
        assert!(close(pv.u[1][0][0], ph.exp()));
        assert!(close(pv.u[1][0][1] / ph.exp(), -I * x + 12.0 * I * k * k * t));

        assert!(close(pv.hat(0, 4, 0), (-th.conj()).exp()));
        assert!(close(pv.hat(0, 4, 1) / (-th.conj()).exp(), I * x + 12.0 * I * kc * kc * t));
        assert!(close(pv.hat(1, 4, 0), -(-ph.conj()).exp()));
        assert!(close(pv.hat(1, 4, 1) / (-ph.conj()).exp(), I * x - 12.0 * I * kc * kc * t));
    }
}
