//! Power spectral densities: analytic forms for the torsion angle, its
//! velocity, and the squared-velocity (torsion-noise) spectrum, a
//! Welch estimator for simulated trajectories, a numerical
//! self-convolution oracle, and peak diagnostics.
//!
//! # Normalization conventions
//!
//! Every [`Spectrum`] carries a [`Convention`] tag because the source
//! formulas are written with a Wiener-Khinchin relation that omits the
//! 1/(2 pi):
//!
//! * [`Convention::PaperLiteral`] — formula values exactly as printed,
//!   to be read with `E[x^2] = integral S domega`. Figure reproduction
//!   uses this tag.
//! * [`Convention::Calibrated`] — the standard two-sided angular-frequency
//!   density with `E[x^2] = integral S domega / (2 pi)`. Simulated
//!   trajectories match this reading; the Welch estimator produces it.
//!
//! For the angle spectrum the two tags share the same numbers (the printed
//! Lorentzian happens to be the correct calibrated density); they differ
//! for the squared-velocity spectrum, where the calibrated density is half
//! the printed form. The numerical self-convolution oracle pins these
//! factors; see [`analytic::s_itn_analytic`].

pub mod analytic;
pub mod convolve;
pub mod peaks;
pub mod welch;

pub use analytic::{psd_poles, s_itn_analytic, s_theta_analytic, s_theta_dot, PoleSet};
pub use convolve::self_convolve;
pub use peaks::{peak_metrics, PeakReport};
pub use welch::{estimate_psd, WelchField};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::NeumaierSum;

/// Normalization convention of a PSD, see module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Convention {
    PaperLiteral,
    Calibrated,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::PaperLiteral => "paper-literal",
            Convention::Calibrated => "calibrated",
        }
    }
}

/// Whether values are the two-sided density S(omega) (even in omega, may
/// be stored on a non-negative grid) or the one-sided density 2 S(omega).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sidedness {
    TwoSided,
    OneSided,
}

impl Sidedness {
    pub fn label(self) -> &'static str {
        match self {
            Sidedness::TwoSided => "two-sided",
            Sidedness::OneSided => "one-sided",
        }
    }
}

/// A sampled power spectral density on an ascending angular-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub omega: Vec<f64>,
    pub values: Vec<f64>,
    pub convention: Convention,
    pub sidedness: Sidedness,
}

impl Spectrum {
    pub fn new(
        omega: Vec<f64>,
        values: Vec<f64>,
        convention: Convention,
        sidedness: Sidedness,
    ) -> Result<Self> {
        if omega.len() != values.len() || omega.len() < 2 {
            return Err(Error::Config(format!(
                "spectrum grids must match and hold at least 2 points (got {} and {})",
                omega.len(),
                values.len()
            )));
        }
        if omega.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("omega grid must be strictly ascending".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config(format!(
                "PSD values must be finite and non-negative; index {i} is {}",
                values[i]
            )));
        }
        Ok(Self { omega, values, convention, sidedness })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Trapezoid integral of the values over the stored grid.
    pub fn raw_integral(&self) -> f64 {
        let mut acc = NeumaierSum::new();
        for i in 1..self.omega.len() {
            acc.add(0.5 * (self.values[i] + self.values[i - 1]) * (self.omega[i] - self.omega[i - 1]));
        }
        acc.total()
    }

    /// The variance this spectrum represents: full-line integral under its
    /// convention, doubling a two-sided density stored on omega >= 0.
    pub fn integrated_power(&self) -> f64 {
        let raw = self.raw_integral();
        let full_line = match self.sidedness {
            Sidedness::OneSided => raw,
            Sidedness::TwoSided => {
                if self.omega[0] >= 0.0 {
                    2.0 * raw
                } else {
                    raw
                }
            }
        };
        match self.convention {
            Convention::PaperLiteral => full_line,
            Convention::Calibrated => full_line / (2.0 * std::f64::consts::PI),
        }
    }

    /// Error unless `other` carries the same tags; guards arithmetic that
    /// would silently mix normalizations.
    pub fn check_compatible(&self, other: &Spectrum) -> Result<()> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch(
                self.convention.label().into(),
                other.convention.label().into(),
            ));
        }
        if self.sidedness != other.sidedness {
            return Err(Error::ConventionMismatch(
                self.sidedness.label().into(),
                other.sidedness.label().into(),
            ));
        }
        Ok(())
    }

    /// CSV with `omega_rad_per_s,value,convention,sidedness` header and
    /// 17-significant-digit floats.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "omega_rad_per_s,value,convention,sidedness")?;
        for (o, v) in self.omega.iter().zip(&self.values) {
            writeln!(w, "{:.16e},{:.16e},{},{}", o, v, self.convention.label(), self.sidedness.label())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Spectrum::new(vec![0.0, 1.0], vec![1.0], Convention::Calibrated, Sidedness::TwoSided).is_err());
        assert!(Spectrum::new(vec![1.0, 0.5], vec![1.0, 1.0], Convention::Calibrated, Sidedness::TwoSided).is_err());
        assert!(Spectrum::new(vec![0.0, 1.0], vec![1.0, -2.0], Convention::Calibrated, Sidedness::TwoSided).is_err());
        assert!(Spectrum::new(vec![0.0, 1.0], vec![1.0, f64::NAN], Convention::Calibrated, Sidedness::TwoSided).is_err());
    }

    #[test]
    fn convention_mismatch_is_checked() {
        let a = Spectrum::new(vec![0.0, 1.0], vec![1.0, 1.0], Convention::Calibrated, Sidedness::TwoSided).unwrap();
        let b = Spectrum::new(vec![0.0, 1.0], vec![1.0, 1.0], Convention::PaperLiteral, Sidedness::TwoSided).unwrap();
        assert!(a.check_compatible(&b).is_err());
        assert!(a.check_compatible(&a).is_ok());
    }

    #[test]
    fn integrated_power_honors_tags() {
        // flat S = 1 on [0, 1]: full-line integral 2, calibrated variance 2/(2 pi)
        let s = Spectrum::new(vec![0.0, 0.5, 1.0], vec![1.0; 3], Convention::Calibrated, Sidedness::TwoSided).unwrap();
        assert!((s.integrated_power() - 1.0 / std::f64::consts::PI).abs() < 1e-14);
        let pl = Spectrum::new(vec![0.0, 0.5, 1.0], vec![1.0; 3], Convention::PaperLiteral, Sidedness::TwoSided).unwrap();
        assert!((pl.integrated_power() - 2.0).abs() < 1e-14);
    }
}
