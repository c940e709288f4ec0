//! Truncated Taylor series in two independent complex variables ε and ε̂.
//!
//! Binary operations truncate to the componentwise minimum of the operand
//! orders, so series of different per-pole orders can be mixed freely.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("affine denominator constant is zero")]
    ZeroDenominator,
    #[error("coefficient ({i}, {j}) is outside truncation orders ({max_eps}, {max_hat})")]
    OrderOutOfRange { i: usize, j: usize, max_eps: usize, max_hat: usize },
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct BivariateSeries {
    max_eps: usize,
    max_hat: usize,
    coeffs: Vec<Complex64>,
}

impl BivariateSeries {
    pub fn zero(max_eps: usize, max_hat: usize) -> Self {
        BivariateSeries { max_eps, max_hat, coeffs: vec![ZERO; (max_eps + 1) * (max_hat + 1)] }
    }

    pub fn constant(c: Complex64, max_eps: usize, max_hat: usize) -> Self {
        let mut s = Self::zero(max_eps, max_hat);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from `f(i, j)` = coefficient of ε^i ε̂^j.
    pub fn from_fn(max_eps: usize, max_hat: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut s = Self::zero(max_eps, max_hat);
        for i in 0..=max_eps {
            for j in 0..=max_hat {
                s.coeffs[i * (max_hat + 1) + j] = f(i, j);
            }
        }
        s
    }

    /// Polynomial Σ p[i] ε^i; terms beyond `max_eps` are dropped.
    pub fn in_eps(p: &[Complex64], max_eps: usize, max_hat: usize) -> Self {
        Self::from_fn(max_eps, max_hat, |i, j| if j == 0 { p.get(i).copied().unwrap_or(ZERO) } else { ZERO })
    }

    /// Polynomial Σ p[j] ε̂^j; terms beyond `max_hat` are dropped.
    pub fn in_hat(p: &[Complex64], max_eps: usize, max_hat: usize) -> Self {
        Self::from_fn(max_eps, max_hat, |i, j| if i == 0 { p.get(j).copied().unwrap_or(ZERO) } else { ZERO })
    }

    pub fn max_eps(&self) -> usize {
        self.max_eps
    }

    pub fn max_hat(&self) -> usize {
        self.max_hat
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs[i * (self.max_hat + 1) + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        let w = self.max_hat + 1;
        &mut self.coeffs[i * w + j]
    }

    pub fn coeff(&self, i: usize, j: usize) -> Result<Complex64, SeriesError> {
        if i > self.max_eps || j > self.max_hat {
            return Err(SeriesError::OrderOutOfRange { i, j, max_eps: self.max_eps, max_hat: self.max_hat });
        }
        Ok(self.at(i, j))
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn truncate(&self, max_eps: usize, max_hat: usize) -> Self {
        let (me, mh) = (max_eps.min(self.max_eps), max_hat.min(self.max_hat));
        Self::from_fn(me, mh, |i, j| self.at(i, j))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BivariateSeries { max_eps: self.max_eps, max_hat: self.max_hat, coeffs: self.coeffs.iter().map(|z| z * c).collect() }
    }

    /// Swaps the roles of ε and ε̂ and conjugates every coefficient, so that
    /// `s.conj_swap()(ε, ε̂) = conj(s(conj ε̂, conj ε))`.
    pub fn conj_swap(&self) -> Self {
        Self::from_fn(self.max_hat, self.max_eps, |i, j| self.at(j, i).conj())
    }

    /// Evaluates the truncated polynomial at a point.
    pub fn eval(&self, eps: Complex64, hat: Complex64) -> Complex64 {
        let mut acc = ZERO;
        let mut pe = ONE;
        for i in 0..=self.max_eps {
            let mut ph = ONE;
            for j in 0..=self.max_hat {
                acc += self.at(i, j) * pe * ph;
                ph *= hat;
            }
            pe *= eps;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let c0 = self.coeffs[0];
        let mut nil = self.clone();
        nil.coeffs[0] = ZERO;
        let mut term = Self::constant(ONE, self.max_eps, self.max_hat);
        let mut sum = term.clone();
        for m in 1..=(self.max_eps + self.max_hat) {
            term = (&term * &nil).scale(Complex64::new(1.0 / m as f64, 0.0));
            sum = &sum + &term;
        }
        sum.scale(c0.exp())
    }

    /// Taylor coefficients of 1/(c + ε − ε̂).
    pub fn recip_affine(c: Complex64, max_eps: usize, max_hat: usize) -> Result<Self, SeriesError> {
        Self::recip_linear(c, ONE, -ONE, max_eps, max_hat)
    }

    /// Taylor coefficients of 1/(c + α ε + β ε̂).
    pub fn recip_linear(
        c: Complex64,
        alpha: Complex64,
        beta: Complex64,
        max_eps: usize,
        max_hat: usize,
    ) -> Result<Self, SeriesError> {
        if c == ZERO {
            return Err(SeriesError::ZeroDenominator);
        }
        let inv = c.inv();
        Ok(Self::from_fn(max_eps, max_hat, |i, j| {
            let n = i + j;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, i) * alpha.powu(i as u32) * beta.powu(j as u32) * inv.powu(n as u32 + 1)
        }))
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (n - m) as f64 / (m + 1) as f64)
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        let (me, mh) = (self.max_eps.min(rhs.max_eps), self.max_hat.min(rhs.max_hat));
        BivariateSeries::from_fn(me, mh, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;
    fn sub(self, rhs: &BivariateSeries) -> BivariateSeries {
        let (me, mh) = (self.max_eps.min(rhs.max_eps), self.max_hat.min(rhs.max_hat));
        BivariateSeries::from_fn(me, mh, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Neg for &BivariateSeries {
    type Output = BivariateSeries;
    fn neg(self) -> BivariateSeries {
        self.scale(-ONE)
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        let (me, mh) = (self.max_eps.min(rhs.max_eps), self.max_hat.min(rhs.max_hat));
        let mut out = BivariateSeries::zero(me, mh);
        for i1 in 0..=me {
            for j1 in 0..=mh {
                let a = self.at(i1, j1);
                if a == ZERO {
                    continue;
                }
                for i2 in 0..=me - i1 {
                    for j2 in 0..=mh - j1 {
                        *out.at_mut(i1 + i2, j1 + j2) += a * rhs.at(i2, j2);
                    }
                }
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for BivariateSeries {
            type Output = BivariateSeries;
            fn $m(self, rhs: BivariateSeries) -> BivariateSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
