use super::{phase, EngineError, I};
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;

/// Explicit one-soliton formula for b = a*, d = c*, evaluated from the 2×2
/// entries without general linear algebra.
pub fn q_one_soliton_closed(cfg: &ValidatedConfiguration, x: f64, t: f64) -> Result<Complex64, EngineError> {
    if cfg.n() != 1 {
        return Err(EngineError::NotSinglePole(cfg.n()));
    }
    if !cfg.is_simple() {
        return Err(EngineError::NotSimple);
    }
    let [a, b, c, d] = cfg.amplitudes(0);
    let tol = 1e-14 * (1.0 + a.norm() + c.norm());
    if (b - a.conj()).norm() > tol || (d - c.conj()).norm() > tol {
        return Err(EngineError::ConventionViolation);
    }
    let k = cfg.poles()[0].k;
    let th = phase(x, t, k);
    let ph = phase(-x, t, k);
    let delta1 = a.norm_sqr() + c.norm_sqr();
    let delta2 = a.conj() * c + c.conj() * a;
    // every exponential is divided by its dominant growth so that far from
    // the core the entries stay finite; numerator and determinant carry the
    // same factor exp(-2|Re θ(x)| - 2|Re θ(-x)|)
    let (r1, r2) = (th.re.abs(), ph.re.abs());
    let ex = |z: Complex64, shift: f64| (z - shift).exp();

    let x1 = 2.0 * delta1 * ex(th.conj() + th, 2.0 * r1) + ex(-(th.conj() + th), 2.0 * r1);
    let y1 = 2.0 * delta1 * ex(ph.conj() + ph, 2.0 * r2) + ex(-(ph.conj() + ph), 2.0 * r2);
    let z = 2.0 * delta2 * ex(th.conj() + ph, r1 + r2) - ex(-(th.conj() + ph), r1 + r2);
    let w = 2.0 * delta2 * ex(ph.conj() + th, r1 + r2) - ex(-(ph.conj() + th), r1 + r2);

    let m11 = x1 / (k - k.conj());
    let m12 = z / (-k - k.conj());
    let m21 = w / (k + k.conj());
    let m22 = y1 / (-k + k.conj());
    let det = x1 * y1 / (4.0 * k.im * k.im) + z.norm_sqr() / (4.0 * k.re * k.re);

    let num = a * (m22 * ex(th - th.conj(), 2.0 * r1) + m12 * ex(th - ph.conj(), r1 + r2))
        - c * (m21 * ex(ph - th.conj(), r1 + r2) + m11 * ex(ph - ph.conj(), 2.0 * r2));
    Ok(2.0 * I * num / det)
}
