//! Multi-soliton solutions of the nonlocal generalized Sasa-Satsuma equation
//!
//! q_t + q_xxx + 6(|q(x,t)|² + |q(−x,t)|²) q_x + 3 q (|q(x,t)|² + |q(−x,t)|²)_x = 0
//!
//! built from discrete scattering data by Riemann-Hilbert dressing, with
//! independent numerical checks and grid export.

pub mod asymptotics;
pub mod cli;
pub mod engine;
pub mod grid;
pub mod linalg;
pub mod presets;
pub mod series;
pub mod spectral;
pub mod verification;

pub use num_complex::Complex64;
