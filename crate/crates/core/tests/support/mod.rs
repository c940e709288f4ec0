//! Test-only oracles: double-double complex arithmetic, nested central
//! differences, and a from-scratch evaluation of the perturbed kernel.
#![allow(dead_code)]

use ngss::spectral::ValidatedConfiguration;
use ngss::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2, about 32 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
const HALF_PI: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123233995736766e-17 };

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn ldexp(self, e: i32) -> Dd {
        let s = 2f64.powi(e);
        Dd { hi: self.hi * s, lo: self.lo * s }
    }

    pub fn exp(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let m = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Dd::new(m)).ldexp(-10);
        // expm1 by Taylor, then expm1(2r) = 2e + e² ten times
        let mut term = r;
        let mut e = r;
        for n in 2..=16 {
            term = term * r / Dd::new(n as f64);
            e = e + term;
        }
        for _ in 0..10 {
            e = e.ldexp(1) + e * e;
        }
        (e + Dd::ONE).ldexp(m as i32)
    }

    /// (sin, cos)
    pub fn sin_cos(self) -> (Dd, Dd) {
        let n = (self.hi / HALF_PI.hi).round();
        let r = self - HALF_PI * Dd::new(n);
        let r2 = r * r;
        let (mut s, mut c) = (r, Dd::ONE);
        let (mut ts, mut tc) = (r, Dd::ONE);
        for k in 1..=14 {
            let k = k as f64;
            ts = -(ts * r2) / Dd::new((2.0 * k) * (2.0 * k + 1.0));
            tc = -(tc * r2) / Dd::new((2.0 * k - 1.0) * (2.0 * k));
            s = s + ts;
            c = c + tc;
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let p = self.hi * b.hi;
        let e = self.hi.mul_add(b.hi, -p);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };
    pub const I: Cdd = Cdd { re: Dd::ZERO, im: Dd::ONE };

    pub fn new(re: f64, im: f64) -> Cdd {
        Cdd { re: Dd::new(re), im: Dd::new(im) }
    }

    pub fn from_c(z: Complex64) -> Cdd {
        Cdd::new(z.re, z.im)
    }

    pub fn real(v: f64) -> Cdd {
        Cdd::new(v, 0.0)
    }

    pub fn to_c(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(self) -> Cdd {
        Cdd { re: self.re, im: -self.im }
    }

    pub fn exp(self) -> Cdd {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cdd { re: m * c, im: m * s }
    }

    pub fn scale(self, v: f64) -> Cdd {
        Cdd { re: self.re * Dd::new(v), im: self.im * Dd::new(v) }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, b: Cdd) -> Cdd {
        Cdd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, b: Cdd) -> Cdd {
        let den = b.re * b.re + b.im * b.im;
        Cdd { re: (self.re * b.re + self.im * b.im) / den, im: (self.im * b.re - self.re * b.im) / den }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Coefficient of ε^p ε̂^q of f by nested central differences of step h:
/// Σ (−1)^{j+m} C(p,j) C(q,m) f((p/2 − j)h, (q/2 − m)h) / (h^{p+q} p! q!).
pub fn fd_coefficient(f: &dyn Fn(Dd, Dd) -> Cdd, p: usize, q: usize, h: f64) -> Complex64 {
    let mut acc = Cdd::ZERO;
    for j in 0..=p {
        for m in 0..=q {
            let e = Dd::new(h) * (Dd::new(p as f64 / 2.0) - Dd::new(j as f64));
            let eh = Dd::new(h) * (Dd::new(q as f64 / 2.0) - Dd::new(m as f64));
            let w = if (j + m) % 2 == 0 { 1.0 } else { -1.0 } * binomial(p, j) * binomial(q, m);
            acc = acc + f(e, eh).scale(w);
        }
    }
    let denom = Dd::new(h);
    let mut hpow = Dd::ONE;
    for _ in 0..p + q {
        hpow = hpow * denom;
    }
    let norm = hpow * Dd::new(factorial(p) * factorial(q));
    Cdd { re: acc.re / norm, im: acc.im / norm }.to_c()
}

/// θ(x, t, k) = i k x + 4 i k³ t.
pub fn phase_dd(x: f64, t: f64, k: Cdd) -> Cdd {
    let k3 = k * k * k;
    Cdd::I * (k.scale(x) + k3.scale(4.0 * t))
}

/// U_l(ε) for real ε, built directly from the definition: direct poles use
/// e^{θσ₃}(A, B, C, D, 1) at k + ε; mirror poles apply Λ to the same vector
/// evaluated at −x.
pub fn eigenvector_dd(cfg: &ValidatedConfiguration, l: usize, x: f64, t: f64, eps: Dd) -> [Cdd; 5] {
    let n = cfg.n();
    let pole = &cfg.poles()[l % n];
    let xs = if l < n { x } else { -x };
    let k = Cdd::from_c(pole.k) + Cdd { re: eps, im: Dd::ZERO };
    let th = phase_dd(xs, t, k);
    let comps = pole.components();
    let mut v = [Cdd::ZERO; 5];
    for c in 0..4 {
        let amp = if cfg.raw_amplitudes() {
            Cdd::from_c(comps[c][0])
        } else {
            let mut s = Cdd::ZERO;
            let mut p = Cdd::ONE;
            for coef in &comps[c][..pole.order] {
                s = s + Cdd::from_c(*coef) * p;
                p = p * Cdd { re: eps, im: Dd::ZERO };
            }
            s.exp()
        };
        v[c] = amp * th.exp();
    }
    v[4] = (-th).exp();
    if l >= n {
        [v[2], v[3], v[0], v[1], -v[4]]
    } else {
        v
    }
}

/// Kernel Û_i(ε̂) U_j(ε) / ((k_j + s_j ε) − (k̂_i + s_i ε̂)) at real ε, ε̂,
/// with s = +1 on direct poles and −1 on mirror poles.
pub fn kernel_dd(cfg: &ValidatedConfiguration, i: usize, j: usize, x: f64, t: f64, eps: Dd, hat: Dd) -> Cdd {
    let n = cfg.n();
    let s = |l: usize| if l < n { Dd::ONE } else { -Dd::ONE };
    let upper = |l: usize| if l < n { cfg.poles()[l].k } else { -cfg.poles()[l - n].k };
    let ui = eigenvector_dd(cfg, i, x, t, hat);
    let uj = eigenvector_dd(cfg, j, x, t, eps);
    let mut dot = Cdd::ZERO;
    for c in 0..5 {
        dot = dot + ui[c].conj() * uj[c];
    }
    let kj = Cdd::from_c(upper(j)) + Cdd { re: s(j) * eps, im: Dd::ZERO };
    let ki = Cdd::from_c(upper(i).conj()) + Cdd { re: s(i) * hat, im: Dd::ZERO };
    dot / (kj - ki)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
