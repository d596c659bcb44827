//! Numerical building blocks: compensated summation, trapezoid rule,
//! Gauss-Legendre nodes, and adaptive Gauss-Kronrod quadrature.

mod gauss;
mod quad;
mod sum;

pub use gauss::gauss_legendre_01;
pub use quad::{integrate_adaptive, integrate_peak, QuadOptions, QuadResult};
pub use sum::{trapezoid_uniform, NeumaierSum};
