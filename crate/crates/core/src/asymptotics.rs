//! Long-time behaviour of the one-soliton solution.
//!
//! For N = 1 the field splits into two sech-shaped waves travelling along the
//! frame x = −4(3k_R² − k_I²)t. Which of the two asymptotic shapes is seen in
//! the past and which in the future is decided by the sign of
//! k_I·(3k_R² − k_I²): the shape with the mirror exponential e^{θ(−x,t,k)}
//! switched off (`Regime::MirrorDecayed`) appears at t → +∞ when the sign is
//! positive, and at t → −∞ otherwise.
//!
//! The amplitude formulas are written with D₁ = |a|²+|b|²+|c|²+|d|² and
//! D₂ = a*c + b*d + c*a + d*b, the coefficients that appear in the kernel
//! entries; long-time fits of the exact solution confirm this normalization.

use crate::engine::Field;
use crate::spectral::ValidatedConfiguration;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("a1 and c1 are both zero")]
    BothZero,
    #[error("asymptotic analysis needs exactly one order-1 pole")]
    NotSinglePole,
    #[error("asymptotic analysis needs b = conj(a) and d = conj(c)")]
    ConventionViolation,
    #[error("frame velocity vanishes (3 kR^2 = kI^2); the two waves never separate")]
    StationaryFrame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    /// a₁ = 0, c₁ ≠ 0
    Case1,
    /// a₁ ≠ 0, c₁ = 0
    Case2,
    /// both nonzero
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Past,
    Future,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    MirrorDecayed,
    MirrorDominant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub amplitude: f64,
    /// dx/dt of the frame.
    pub velocity: f64,
    pub width_rate: f64,
    /// Centre at t = 0 extrapolated along the frame: δ / (2 k_I).
    pub position_offset: f64,
    /// Phase δ in sech(−2k_I(x − velocity·t) + δ).
    pub delta: f64,
    pub direction: Direction,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    /// Amplitude as t → −∞.
    pub b: f64,
    /// Amplitude as t → +∞.
    pub a: f64,
    pub equal: bool,
    /// Δ₂(|a₁|² − |c₁|²) k_I
    pub criterion_left: Complex64,
    /// i(a₁*c₁ − a₁c₁*) Δ₁ k_R
    pub criterion_right: Complex64,
    /// Δ₁ = |a₁|² + |c₁|²
    pub delta1: f64,
    /// Δ₂ = a₁*c₁ + c₁*a₁
    pub delta2: f64,
    /// δ(mirror-dominated) − δ(mirror-decayed).
    pub position_shift: f64,
}

pub fn classify_case(a1: Complex64, c1: Complex64) -> Result<CaseTag, AsymptoticsError> {
    let zero = Complex64::new(0.0, 0.0);
    match (a1 == zero, c1 == zero) {
        (true, true) => Err(AsymptoticsError::BothZero),
        (true, false) => Ok(CaseTag::Case1),
        (false, true) => Ok(CaseTag::Case2),
        (false, false) => Ok(CaseTag::Case3),
    }
}

struct OnePole {
    k: Complex64,
    a: Complex64,
    c: Complex64,
    d1: f64,
    d2: f64,
}

fn one_pole(cfg: &ValidatedConfiguration) -> Result<OnePole, AsymptoticsError> {
    if cfg.n() != 1 || !cfg.is_simple() {
        return Err(AsymptoticsError::NotSinglePole);
    }
    let [a, b, c, d] = cfg.amplitudes(0);
    let tol = 1e-14 * (1.0 + a.norm() + c.norm());
    if (b - a.conj()).norm() > tol || (d - c.conj()).norm() > tol {
        return Err(AsymptoticsError::ConventionViolation);
    }
    classify_case(a, c)?;
    let d1 = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let d2 = (a.conj() * c + b.conj() * d + c.conj() * a + d.conj() * b).re;
    Ok(OnePole { k: cfg.poles()[0].k, a, c, d1, d2 })
}

/// dx/dt of the soliton frame, −4(3k_R² − k_I²).
pub fn frame_velocity(k: Complex64) -> f64 {
    -4.0 * (3.0 * k.re * k.re - k.im * k.im)
}

fn regime_for(k: Complex64, direction: Direction) -> Result<Regime, AsymptoticsError> {
    let v = frame_velocity(k);
    if v.abs() <= 1e-12 * k.norm_sqr() {
        return Err(AsymptoticsError::StationaryFrame);
    }
    // mirror exponential decays along the frame when k_I · v · t < 0
    let decayed_in_future = k.im * v < 0.0;
    Ok(match (direction, decayed_in_future) {
        (Direction::Future, true) | (Direction::Past, false) => Regime::MirrorDecayed,
        _ => Regime::MirrorDominant,
    })
}

fn profile_in(p: &OnePole, regime: Regime, direction: Direction) -> AsymptoticProfile {
    let k = p.k;
    let (kr, ki) = (k.re, k.im);
    let (amplitude, delta) = match regime {
        Regime::MirrorDecayed => (2.0 * ki.abs() * p.a.norm() / p.d1.sqrt(), (p.d1.sqrt() * kr.abs() / k.norm()).ln()),
        Regime::MirrorDominant => {
            let num = p.d1 * p.a * kr + Complex64::new(0.0, 1.0) * p.d2 * p.c * ki;
            let den = (p.d1 * p.d1 * kr * kr + p.d2 * p.d2 * ki * ki).sqrt() * p.d1.sqrt();
            (2.0 * ki.abs() * num.norm() / den, 0.5 * (p.d1 + ki * ki / (kr * kr) * p.d2 * p.d2 / p.d1).ln())
        }
    };
    AsymptoticProfile {
        amplitude,
        velocity: frame_velocity(k),
        width_rate: 2.0 * ki.abs(),
        position_offset: delta / (2.0 * ki),
        delta,
        direction,
        regime,
    }
}

/// Sech profile seen along the frame in the given time direction. For
/// a₁ = 0 the amplitude is 0 in both directions.
pub fn asymptotic_profile(cfg: &ValidatedConfiguration, direction: Direction) -> Result<AsymptoticProfile, AsymptoticsError> {
    let p = one_pole(cfg)?;
    Ok(profile_in(&p, regime_for(p.k, direction)?, direction))
}

/// Amplitudes before and after the collision and the equality criterion.
pub fn collision_amplitudes(cfg: &ValidatedConfiguration) -> Result<CollisionReport, AsymptoticsError> {
    let p = one_pole(cfg)?;
    let past = profile_in(&p, regime_for(p.k, Direction::Past)?, Direction::Past);
    let future = profile_in(&p, regime_for(p.k, Direction::Future)?, Direction::Future);
    let (dominant, decayed) = if past.regime == Regime::MirrorDominant { (&past, &future) } else { (&future, &past) };

    let delta1 = p.a.norm_sqr() + p.c.norm_sqr();
    let delta2 = (p.a.conj() * p.c + p.c.conj() * p.a).re;
    let (kr, ki) = (p.k.re, p.k.im);
    let criterion_left = Complex64::new(delta2 * (p.a.norm_sqr() - p.c.norm_sqr()) * ki, 0.0);
    let criterion_right = Complex64::new(0.0, 1.0) * (p.a.conj() * p.c - p.a * p.c.conj()) * delta1 * kr;
    let orthogonal = (p.a.conj() * p.c).re.abs() <= 1e-12 * delta1;
    let balanced = (criterion_left - criterion_right).norm() <= 1e-12 * delta1 * delta1 * p.k.norm();

    Ok(CollisionReport {
        b: past.amplitude,
        a: future.amplitude,
        equal: orthogonal || balanced,
        criterion_left,
        criterion_right,
        delta1,
        delta2,
        position_shift: dominant.delta - decayed.delta,
    })
}

/// Peak of |q| found by the standard frame fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePeak {
    pub t: f64,
    pub x_peak: f64,
    pub amplitude: f64,
    /// 2 k_I (x_peak − velocity·t), the fitted sech phase.
    pub delta: f64,
}

const FIT_SAMPLES: usize = 801;

/// Samples |q| on a window of width 40/(2|k_I|) centred on the frame position
/// at time t, takes the maximum and refines it by golden-section search.
pub fn fit_frame_peak(field: &dyn Field, k: Complex64, t: f64) -> FramePeak {
    let v = frame_velocity(k);
    let centre = v * t;
    let half = 10.0 / k.im.abs();
    let dx = 2.0 * half / (FIT_SAMPLES - 1) as f64;
    let xs: Vec<f64> = (0..FIT_SAMPLES).map(|i| centre - half + i as f64 * dx).collect();
    let f = |x: f64| {
        let s = field.sample(x, t);
        if s.singular {
            0.0
        } else {
            s.q.norm()
        }
    };
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let best = (0..FIT_SAMPLES).fold(0, |b, i| if vals[i] > vals[b] { i } else { b });
    let (mut lo, mut hi) = (xs[best] - dx, xs[best] + dx);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let x_peak = 0.5 * (lo + hi);
    let amplitude = f(x_peak).max(vals[best]);
    FramePeak { t, x_peak, amplitude, delta: 2.0 * k.im * (x_peak - centre) }
}
