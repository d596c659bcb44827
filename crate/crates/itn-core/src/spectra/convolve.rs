//! Numerical self-convolution (S * S)(omega) on a uniform symmetric grid.
//!
//! This is the independent oracle for the closed-form torsion-noise
//! spectrum: it never touches the printed formula, only grid values of
//! the velocity spectrum.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Discrete linear convolution of the spectrum with itself, scaled by the
/// grid step (uniform-grid quadrature of `int S(u) S(omega - u) du`; with
/// the required sub-1e-6 tails the end corrections of the trapezoid rule
/// are negligible and the sum is evaluated with an FFT).
///
/// Preconditions: odd-length uniform grid symmetric about zero, and edge
/// values below 1e-6 of the peak so the truncated tail cannot bias the
/// result. Output is on the same grid.
pub fn self_convolve(spectrum: &Spectrum) -> Result<Spectrum> {
    let n = spectrum.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::Config(format!(
            "self-convolution needs an odd-length grid of at least 3 points, got {n}"
        )));
    }
    let du = spectrum.omega[1] - spectrum.omega[0];
    for w in spectrum.omega.windows(2) {
        if ((w[1] - w[0]) - du).abs() > 1e-9 * du {
            return Err(Error::Config("self-convolution requires a uniform grid".into()));
        }
    }
    if (spectrum.omega[0] + spectrum.omega[n - 1]).abs() > 1e-6 * du {
        return Err(Error::Config("self-convolution grid must be symmetric about zero".into()));
    }
    let peak = spectrum.values.iter().cloned().fold(0.0_f64, f64::max);
    let edge = spectrum.values[0].max(spectrum.values[n - 1]);
    if peak > 0.0 && edge > 1e-6 * peak {
        return Err(Error::TailCoverage { truncation_bound: edge / peak });
    }

    // Zero-padded FFT convolution.
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = spectrum
        .values
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(m)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for z in buf.iter_mut() {
        *z = *z * *z;
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = du / m as f64;

    // conv[k] lives at omega = (k - (n - 1)) * du; the input grid is
    // omega_j = (j - (n - 1)/2) * du, so j maps to k = j + (n - 1)/2.
    let half = (n - 1) / 2;
    let values: Vec<f64> = (0..n)
        .map(|j| (buf[j + half].re * scale).max(0.0))
        .collect();
    Spectrum::new(spectrum.omega.clone(), values, spectrum.convention, spectrum.sidedness)
}
