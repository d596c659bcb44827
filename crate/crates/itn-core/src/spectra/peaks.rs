//! Peak location, FWHM, and Q-factor of a sampled spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakReport {
    /// Peak position from a parabola through the three samples around the
    /// maximum bin [rad/s].
    pub peak_omega: f64,
    pub peak_value: f64,
    /// Full width at half maximum from linear interpolation of the
    /// half-maximum crossings [rad/s].
    pub fwhm: f64,
    /// peak_omega / fwhm.
    pub q_factor: f64,
}

/// Locate the unique interior global maximum and measure it.
pub fn peak_metrics(spectrum: &Spectrum) -> Result<PeakReport> {
    let v = &spectrum.values;
    let w = &spectrum.omega;
    let (imax, &vmax) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("spectrum is non-empty by construction");
    if imax == 0 || imax == v.len() - 1 {
        return Err(Error::InconclusivePeak(format!(
            "global maximum sits on the grid edge (index {imax})"
        )));
    }
    if vmax <= 0.0 {
        return Err(Error::InconclusivePeak("spectrum is identically zero".into()));
    }

    // Parabola through (w_{i-1}, v_{i-1}), (w_i, v_i), (w_{i+1}, v_{i+1}).
    let (x0, x1, x2) = (w[imax - 1], w[imax], w[imax + 1]);
    let (y0, y1, y2) = (v[imax - 1], v[imax], v[imax + 1]);
    let d0 = (y1 - y0) / (x1 - x0);
    let d1 = (y2 - y1) / (x2 - x1);
    let curv = (d1 - d0) / (x2 - x0);
    let (peak_omega, peak_value) = if curv < 0.0 {
        let xv = 0.5 * (x0 + x1) - 0.5 * d0 / curv;
        let xv = xv.clamp(x0, x2);
        // Newton form evaluated at the vertex
        let yv = y0 + d0 * (xv - x0) + curv * (xv - x0) * (xv - x1);
        (xv, yv.max(vmax))
    } else {
        (x1, y1)
    };

    let half = peak_value / 2.0;
    let left = crossing(w, v, imax, half, true).ok_or_else(|| {
        Error::InconclusivePeak("no half-maximum crossing left of the peak inside the grid".into())
    })?;
    let right = crossing(w, v, imax, half, false).ok_or_else(|| {
        Error::InconclusivePeak("no half-maximum crossing right of the peak inside the grid".into())
    })?;
    let fwhm = right - left;
    if !(fwhm > 0.0) {
        return Err(Error::InconclusivePeak("degenerate half-maximum width".into()));
    }
    Ok(PeakReport { peak_omega, peak_value, fwhm, q_factor: peak_omega / fwhm })
}

fn crossing(w: &[f64], v: &[f64], imax: usize, half: f64, leftward: bool) -> Option<f64> {
    let mut i = imax;
    loop {
        let j = if leftward {
            if i == 0 {
                return None;
            }
            i - 1
        } else {
            if i + 1 >= v.len() {
                return None;
            }
            i + 1
        };
        if v[j] <= half {
            // interpolate between j and i
            let t = (half - v[j]) / (v[i] - v[j]);
            return Some(w[j] + t * (w[i] - w[j]));
        }
        i = j;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{Convention, Sidedness};
    use approx::assert_relative_eq;

    fn lorentzian_spectrum(center: f64, half_width: f64, n: usize, span: f64) -> Spectrum {
        let omega: Vec<f64> = (0..n)
            .map(|i| center - span / 2.0 + span * i as f64 / (n - 1) as f64)
            .collect();
        let values: Vec<f64> = omega
            .iter()
            .map(|&w| half_width * half_width / ((w - center).powi(2) + half_width * half_width))
            .collect();
        Spectrum::new(omega, values, Convention::Calibrated, Sidedness::TwoSided).unwrap()
    }

    #[test]
    fn synthetic_lorentzian_metrics_are_exact_within_grid_tolerance() {
        let s = lorentzian_spectrum(10.0, 0.5, 20_001, 8.0);
        let r = peak_metrics(&s).unwrap();
        assert_relative_eq!(r.peak_omega, 10.0, max_relative = 1e-6);
        assert_relative_eq!(r.peak_value, 1.0, max_relative = 1e-6);
        assert_relative_eq!(r.fwhm, 1.0, max_relative = 1e-4);
        assert_relative_eq!(r.q_factor, 10.0, max_relative = 1e-4);
    }

    #[test]
    fn peak_on_edge_is_inconclusive() {
        let s = lorentzian_spectrum(10.0, 0.5, 101, 4.0);
        // truncate so the maximum is the first bin
        let omega = s.omega[50..].to_vec();
        let values = s.values[50..].to_vec();
        let s = Spectrum::new(omega, values, Convention::Calibrated, Sidedness::TwoSided).unwrap();
        assert!(matches!(peak_metrics(&s), Err(Error::InconclusivePeak(_))));
    }

    #[test]
    fn off_grid_peak_recovered_by_interpolation() {
        // center deliberately between grid points
        let s = lorentzian_spectrum(10.0 + 0.37e-3, 0.2, 4001, 4.0);
        let r = peak_metrics(&s).unwrap();
        assert_relative_eq!(r.peak_omega, 10.00037, max_relative = 1e-5);
    }
}
