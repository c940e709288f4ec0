use super::{lambda, phase, EngineError, FieldSample, SolitonAssembly, SIGMA3};
use crate::linalg::CMatrix;
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;

/// The 2N column vectors U_l and row vectors Û_l = U_l†.
///
/// Stored vectors equal the true ones times e^{−log_scale[l]}.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorPair {
    pub u: Vec<[Complex64; 5]>,
    pub u_hat: Vec<[Complex64; 5]>,
    pub log_scale: Vec<f64>,
}

/// Phase of index l: θ(x,t,k_l) for l < N, θ(−x,t,k_{l−N}) otherwise.
pub(crate) fn index_phase(cfg: &ValidatedConfiguration, l: usize, x: f64, t: f64) -> Complex64 {
    let n = cfg.n();
    let xs = if l < n { x } else { -x };
    phase(xs, t, cfg.poles()[l % n].k)
}

fn build(cfg: &ValidatedConfiguration, x: f64, t: f64, scaled: bool) -> Result<EigenvectorPair, EngineError> {
    if !cfg.is_simple() {
        return Err(EngineError::NotSimple);
    }
    let n = cfg.n();
    let mut pair = EigenvectorPair { u: Vec::with_capacity(2 * n), u_hat: Vec::with_capacity(2 * n), log_scale: Vec::with_capacity(2 * n) };
    for l in 0..2 * n {
        let th = index_phase(cfg, l, x, t);
        let r = if scaled { th.re.abs() } else { 0.0 };
        let amp = cfg.amplitudes(l % n);
        let mut v: [Complex64; 5] = std::array::from_fn(|c| {
            let base = if c < 4 { amp[c] } else { Complex64::new(1.0, 0.0) };
            base * (SIGMA3[c] * th - r).exp()
        });
        if l >= n {
            v = lambda(v);
        }
        pair.u_hat.push(v.map(|z| z.conj()));
        pair.u.push(v);
        pair.log_scale.push(r);
    }
    Ok(pair)
}

/// Eigenvectors of the simple-pole problem, unscaled.
pub fn eigenvectors_simple(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<EigenvectorPair, EngineError> {
    build(cfg, x, t, false)
}

/// Eigenvectors scaled by e^{−|Re θ_l|}.
pub fn eigenvectors_scaled(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<EigenvectorPair, EngineError> {
    build(cfg, x, t, true)
}

/// Generic kernel matrix m_il = Û_i U_l / (k_l − k̂_i) from any eigenvector set.
pub fn kernel_from_vectors(cfg: &ValidatedConfiguration, pair: &EigenvectorPair) -> CMatrix {
    let set = cfg.full_pole_set();
    let dim = pair.u.len();
    CMatrix::from_fn(dim, dim, |i, l| {
        let dot: Complex64 = pair.u_hat[i].iter().zip(&pair.u[l]).map(|(a, b)| a * b).sum();
        dot / (set.upper[l] - set.lower[i])
    })
}

/// Kernel matrix from the four explicit block formulas, with the borders.
pub fn assemble_m_simple(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<SolitonAssembly, EngineError> {
    if !cfg.is_simple() {
        return Err(EngineError::NotSimple);
    }
    let n = cfg.n();
    let poles = cfg.poles();
    let amps: Vec<[Complex64; 4]> = (0..n).map(|i| cfg.amplitudes(i)).collect();
    let th: Vec<Complex64> = (0..2 * n).map(|l| index_phase(cfg, l, x, t)).collect();
    let r: Vec<f64> = th.iter().map(|z| z.re.abs()).collect();

    let m = CMatrix::from_fn(2 * n, 2 * n, |i, l| {
        let (pi, pl) = (i % n, l % n);
        let [ai, bi, ci, di] = amps[pi].map(|z| z.conj());
        let [al, bl, cl, dl] = amps[pl];
        let (si, sl) = (i >= n, l >= n);
        let (amp, sign, den) = match (si, sl) {
            (false, false) => (ai * al + bi * bl + ci * cl + di * dl, 1.0, poles[pl].k - poles[pi].k.conj()),
            (false, true) => (ai * cl + bi * dl + ci * al + di * bl, -1.0, -poles[pl].k - poles[pi].k.conj()),
            (true, false) => (ci * al + di * bl + ai * cl + bi * dl, -1.0, poles[pl].k + poles[pi].k.conj()),
            (true, true) => (ci * cl + di * dl + ai * al + bi * bl, 1.0, -poles[pl].k + poles[pi].k.conj()),
        };
        let e = th[i].conj() + th[l];
        let s = r[i] + r[l];
        (amp * (e - s).exp() + sign * (-e - s).exp()) / den
    });
    let row = (0..2 * n)
        .map(|l| {
            let a = if l < n { amps[l][0] } else { amps[l - n][2] };
            a * (th[l] - r[l]).exp()
        })
        .collect();
    let col = (0..2 * n)
        .map(|i| {
            let sign = if i < n { 1.0 } else { -1.0 };
            sign * (-th[i].conj() - r[i]).exp()
        })
        .collect();
    Ok(SolitonAssembly::new(m, row, col, 2.0 * r.iter().sum::<f64>()))
}

/// q(x, t) from the simple-pole determinant formula.
pub fn q_simple(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<FieldSample, EngineError> {
    Ok(assemble_m_simple(cfg, x, t)?.sample(x, t))
}
