use super::I;
use crate::series::BivariateSeries;
use num_complex::Complex64;

/// θ(x, t, k) = i k x + 4 i k³ t.
pub fn phase(x: f64, t: f64, k: Complex64) -> Complex64 {
    I * k * x + 4.0 * I * k * k * k * t
}

/// θ(x, t, k + ε) expanded in ε (ε̂ order 0), truncated at `max_eps`.
pub fn phase_series(x: f64, t: f64, k: Complex64, max_eps: usize) -> BivariateSeries {
    let p = [phase(x, t, k), I * x + 12.0 * I * k * k * t, 12.0 * I * k * t, 4.0 * I * t];
    BivariateSeries::in_eps(&p, max_eps, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase(0.0, 0.0, c(0.7, -2.0)), c(0.0, 0.0));
        assert!((phase(1.0, 0.0, I) - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((phase(0.0, 1.0, c(1.0, 0.0)) - c(0.0, 4.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_of_real_k_is_imaginary() {
        for &(x, t, k) in &[(1.3, -0.4, 0.8), (-5.0, 2.0, -1.7), (0.1, 9.0, 3.0)] {
            assert!(phase(x, t, c(k, 0.0)).re.abs() < 1e-12);
        }
    }

    #[test]
    fn phase_series_examples() {
        let s = phase_series(0.0, 0.0, c(0.3, 1.0), 3);
        assert!((0..=3).all(|i| s.coeff(i, 0).unwrap() == c(0.0, 0.0)));
        let k = c(0.3, 1.0);
        let s = phase_series(2.0, 0.0, k, 3);
        assert!((s.coeff(0, 0).unwrap() - I * k * 2.0).norm() < 1e-15);
        assert!((s.coeff(1, 0).unwrap() - I * 2.0).norm() < 1e-15);
        assert_eq!(s.coeff(2, 0).unwrap(), c(0.0, 0.0));
        assert_eq!(s.coeff(3, 0).unwrap(), c(0.0, 0.0));
        assert_eq!(phase_series(1.0, 1.0, k, 1).max_eps(), 1);
    }

    #[test]
    fn phase_series_matches_finite_differences() {
        let (x, t, k) = (1.0, 1.0, c(0.3, 1.0));
        let s = phase_series(x, t, k, 3);
        let h = 1e-2;
        let f = |e: f64| phase(x, t, k + e);
        // θ is a cubic polynomial in ε, so these stencils are exact up to roundoff
        let d1 = (f(h) - f(-h)) / (2.0 * h) - (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (12.0 * h);
        let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let d3 = (f(2.0 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2.0 * h)) / (2.0 * h * h * h);
        assert!((s.coeff(1, 0).unwrap() - d1).norm() < 1e-6);
        assert!((s.coeff(2, 0).unwrap() - d2 / 2.0).norm() < 1e-6);
        assert!((s.coeff(3, 0).unwrap() - d3 / 6.0).norm() < 1e-6);
    }
}
