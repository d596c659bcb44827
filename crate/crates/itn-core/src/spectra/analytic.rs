//! Closed-form spectra of the torsion Langevin process and the pole
//! quartet of the angle spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::langevin::LangevinParams;
use crate::spectra::{Convention, Sidedness, Spectrum};

/// Angle PSD value S_theta(omega) = A / ((Omega^2 - omega^2)^2 + gamma^2 omega^2).
///
/// The printed Lorentzian is simultaneously the correct calibrated
/// two-sided density of the simulated process, so both convention tags
/// share these numbers.
#[inline]
pub fn s_theta_value(params: &LangevinParams, omega: f64) -> f64 {
    let d = params.omega_rot * params.omega_rot - omega * omega;
    params.amplitude_a / (d * d + params.gamma * params.gamma * omega * omega)
}

/// Squared-velocity (torsion noise) PSD value.
///
/// `PaperLiteral` is the printed closed form
///
/// ```text
/// S(omega) = A^2 (4 w^4 + 4 (g^2 - 3 O^2) w^2 + 16 O^4)
///            / (g (w^2 + g^2) (4 g^2 w^2 + (w^2 - 4 O^2)^2))
/// ```
///
/// `Calibrated` is half of it: the numerical self-convolution oracle
/// measures (S_v * S_v)(omega) = (pi/2) x printed form across all damping
/// regimes (see `tests/spectra_oracle.rs`), and for a squared Gaussian
/// process the calibrated density is (1/pi) x the self-convolution of the
/// calibrated velocity density, hence printed/2. That factor also makes
/// the integrated power equal Var(theta_dot^2) = A^2/(2 gamma^2) exactly.
#[inline]
pub fn s_itn_value(params: &LangevinParams, omega: f64, convention: Convention) -> f64 {
    let (o2, g, a) = (params.omega_rot * params.omega_rot, params.gamma, params.amplitude_a);
    let w2 = omega * omega;
    let num = 4.0 * w2 * w2 + 4.0 * (g * g - 3.0 * o2) * w2 + 16.0 * o2 * o2;
    let den = g * (w2 + g * g) * (4.0 * g * g * w2 + (w2 - 4.0 * o2).powi(2));
    let literal = a * a * num / den;
    match convention {
        Convention::PaperLiteral => literal,
        Convention::Calibrated => 0.5 * literal,
    }
}

/// Torsion-noise PSD at omega = 2 Omega_rot + delta, with the
/// (omega^2 - 4 Omega^2) factor expanded as delta (4 Omega + delta) so
/// that offsets far below the float spacing of 2 Omega stay exact.
#[inline]
pub(crate) fn s_itn_value_near_double_peak(
    params: &LangevinParams,
    delta: f64,
    convention: Convention,
) -> f64 {
    let (o, g, a) = (params.omega_rot, params.gamma, params.amplitude_a);
    let o2 = o * o;
    let w2 = 4.0 * o2 + delta * (4.0 * o + delta); // omega^2, exact in delta
    let resonant = delta * (4.0 * o + delta); // omega^2 - 4 Omega^2
    let num = 4.0 * w2 * w2 + 4.0 * (g * g - 3.0 * o2) * w2 + 16.0 * o2 * o2;
    let den = g * (w2 + g * g) * (4.0 * g * g * w2 + resonant * resonant);
    let literal = a * a * num / den;
    match convention {
        Convention::PaperLiteral => literal,
        Convention::Calibrated => 0.5 * literal,
    }
}

/// Angle spectrum on a grid.
pub fn s_theta_analytic(params: &LangevinParams, omega_grid: &[f64], convention: Convention) -> Result<Spectrum> {
    if params.gamma == 0.0 {
        if let Some(index) = omega_grid
            .iter()
            .position(|w| w.abs() == params.omega_rot)
        {
            return Err(Error::Singular {
                index,
                omega: omega_grid[index],
                reason: "undamped resonance omega = +/- Omega_rot".into(),
            });
        }
    }
    let values = omega_grid.iter().map(|&w| s_theta_value(params, w)).collect();
    Spectrum::new(omega_grid.to_vec(), values, convention, Sidedness::TwoSided)
}

/// Velocity spectrum from an angle spectrum: multiply by omega^2 pointwise.
pub fn s_theta_dot(spectrum: &Spectrum) -> Result<Spectrum> {
    let values = spectrum
        .omega
        .iter()
        .zip(&spectrum.values)
        .map(|(w, v)| w * w * v)
        .collect();
    Spectrum::new(spectrum.omega.clone(), values, spectrum.convention, spectrum.sidedness)
}

/// Torsion-noise spectrum on a grid; gamma = 0 makes the closed form
/// divide by zero and is rejected.
pub fn s_itn_analytic(params: &LangevinParams, omega_grid: &[f64], convention: Convention) -> Result<Spectrum> {
    if params.gamma <= 0.0 {
        return Err(Error::Domain(
            "torsion-noise spectrum requires gamma > 0 (closed form divides by gamma)".into(),
        ));
    }
    let values = omega_grid.iter().map(|&w| s_itn_value(params, w, convention)).collect();
    Spectrum::new(omega_grid.to_vec(), values, convention, Sidedness::TwoSided)
}

/// One pole of the angle spectrum in the complex omega plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub re: f64,
    pub im: f64,
}

/// The pole quartet of S_theta(omega): +/- sqrt(Omega^2 - gamma^2/4) +/- i gamma/2,
/// degenerating to a purely imaginary quartet past critical damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleSet {
    pub poles: [Pole; 4],
}

impl PoleSet {
    /// The quartet is closed under omega -> -conj(omega).
    pub fn is_reflection_closed(&self, tol: f64) -> bool {
        self.poles.iter().all(|p| {
            self.poles
                .iter()
                .any(|q| (q.re + p.re).abs() <= tol && (q.im - p.im).abs() <= tol)
        })
    }
}

pub fn psd_poles(params: &LangevinParams) -> PoleSet {
    let half_gamma = params.gamma / 2.0;
    let disc = params.omega_rot * params.omega_rot - half_gamma * half_gamma;
    if disc >= 0.0 {
        let re = disc.sqrt();
        PoleSet {
            poles: [
                Pole { re, im: half_gamma },
                Pole { re, im: -half_gamma },
                Pole { re: -re, im: half_gamma },
                Pole { re: -re, im: -half_gamma },
            ],
        }
    } else {
        let mu = (-disc).sqrt();
        PoleSet {
            poles: [
                Pole { re: 0.0, im: half_gamma + mu },
                Pole { re: 0.0, im: half_gamma - mu },
                Pole { re: 0.0, im: -(half_gamma - mu) },
                Pole { re: 0.0, im: -(half_gamma + mu) },
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn params(omega: f64, gamma: f64, a: f64) -> LangevinParams {
        LangevinParams::new(omega, gamma, a).unwrap()
    }

    #[test]
    fn s_theta_special_points() {
        let p = params(2.0, 0.1, 3.0);
        // omega = 0: A / Omega^4
        assert_relative_eq!(s_theta_value(&p, 0.0), 3.0 / 16.0, max_relative = 1e-14);
        // omega = Omega: A / (gamma^2 Omega^2)
        assert_relative_eq!(s_theta_value(&p, 2.0), 3.0 / (0.01 * 4.0), max_relative = 1e-14);
    }

    #[test]
    fn s_theta_lorentzian_shape_near_resonance() {
        // half-maximum at omega ~ Omega +/- gamma/2 for weak damping
        let p = params(TWO_PI, 1e-3, 1.0);
        let peak = s_theta_value(&p, TWO_PI);
        let half = s_theta_value(&p, TWO_PI + 5e-4);
        assert_relative_eq!(half / peak, 0.5, max_relative = 2e-3);
    }

    #[test]
    fn singular_point_reported_with_index() {
        let p = LangevinParams::new(2.0, 0.0, 1.0).unwrap();
        let err = s_theta_analytic(&p, &[0.0, 1.0, 2.0, 3.0], Convention::PaperLiteral).unwrap_err();
        match err {
            Error::Singular { index, .. } => assert_eq!(index, 2),
            other => panic!("expected Singular, got {other:?}"),
        }
    }

    #[test]
    fn s_theta_dot_zero_at_dc_and_linear_in_a() {
        let p = params(2.0, 0.1, 3.0);
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let s = s_theta_analytic(&p, &grid, Convention::Calibrated).unwrap();
        let sd = s_theta_dot(&s).unwrap();
        assert_eq!(sd.values[0], 0.0);
        let p2 = params(2.0, 0.1, 6.0);
        let sd2 = s_theta_dot(&s_theta_analytic(&p2, &grid, Convention::Calibrated).unwrap()).unwrap();
        for (a, b) in sd.values.iter().zip(&sd2.values) {
            if *a > 0.0 {
                assert_relative_eq!(b / a, 2.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn velocity_peak_sits_at_omega_above_the_angle_peak() {
        // S_theta peaks at sqrt(Omega^2 - gamma^2/2), omega^2 S_theta at
        // exactly Omega: the velocity peak is shifted slightly up.
        let p = params(1.0, 0.3, 1.0);
        let grid: Vec<f64> = (1..100_000).map(|i| i as f64 * 2e-5).collect();
        let s = s_theta_analytic(&p, &grid, Convention::Calibrated).unwrap();
        let sd = s_theta_dot(&s).unwrap();
        let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let w_angle = grid[argmax(&s.values)];
        let w_vel = grid[argmax(&sd.values)];
        assert_relative_eq!(w_angle, (1.0f64 - 0.09 / 2.0).sqrt(), max_relative = 1e-3);
        assert_relative_eq!(w_vel, 1.0, max_relative = 1e-3);
        assert!(w_vel > w_angle);
    }

    #[test]
    fn itn_special_points() {
        let (g, a) = (1e-3, 2.0);
        let p = params(TWO_PI, g, a);
        // omega = 0: A^2/gamma^3 in the printed form
        assert_relative_eq!(
            s_itn_value(&p, 0.0, Convention::PaperLiteral),
            a * a / g.powi(3),
            max_relative = 1e-12
        );
        // peak region for weak damping: S(2 Omega) ~ A^2/(2 gamma^3)
        assert_relative_eq!(
            s_itn_value(&p, 2.0 * TWO_PI, Convention::PaperLiteral),
            a * a / (2.0 * g.powi(3)),
            max_relative = 1e-4
        );
        // half-maximum at 2 Omega +/- gamma
        assert_relative_eq!(
            s_itn_value(&p, 2.0 * TWO_PI + g, Convention::PaperLiteral),
            a * a / (4.0 * g.powi(3)),
            max_relative = 1e-3
        );
        assert_relative_eq!(
            s_itn_value(&p, 2.0 * TWO_PI - g, Convention::PaperLiteral),
            a * a / (4.0 * g.powi(3)),
            max_relative = 1e-3
        );
    }

    #[test]
    fn itn_calibrated_integrates_to_squared_process_variance() {
        // Var(theta_dot^2) = 2 Var(theta_dot)^2 = A^2/(2 gamma^2)
        let p = params(1.0, 0.5, 1.0);
        let n = 400_001;
        let w_max = 400.0;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 * w_max / (n - 1) as f64).collect();
        let s = s_itn_analytic(&p, &grid, Convention::Calibrated).unwrap();
        let var = s.integrated_power();
        let want = 1.0 / (2.0 * 0.25);
        assert_relative_eq!(var, want, max_relative = 2e-3);
    }

    #[test]
    fn itn_rejects_zero_damping() {
        let p = LangevinParams::new(1.0, 0.0, 1.0).unwrap();
        assert!(s_itn_analytic(&p, &[0.0, 1.0], Convention::PaperLiteral).is_err());
    }

    #[test]
    fn pole_quartet_both_discriminants() {
        // undamped limit: real poles at +/- Omega
        let p0 = psd_poles(&LangevinParams::new(2.0, 0.0, 1.0).unwrap());
        assert!(p0.poles.iter().all(|p| p.im == 0.0));
        assert!(p0.poles.iter().any(|p| (p.re - 2.0).abs() < 1e-14));

        // worked point: +/- 6.28319 +/- 0.005 i
        let p = psd_poles(&params(TWO_PI, 1e-2, 1.0));
        assert!(p.is_reflection_closed(1e-12));
        let found = p
            .poles
            .iter()
            .find(|q| q.re > 0.0 && q.im > 0.0)
            .unwrap();
        assert_relative_eq!(found.re, 6.28319, max_relative = 1e-5);
        assert_relative_eq!(found.im, 0.005, max_relative = 1e-12);

        // critical damping: degenerate +/- i Omega
        let pc = psd_poles(&params(1.0, 2.0, 1.0));
        assert!(pc.poles.iter().all(|q| q.re == 0.0));
        assert!(pc.poles.iter().any(|q| (q.im - 1.0).abs() < 1e-12));

        // overdamped: purely imaginary quartet
        let po = psd_poles(&params(1.0, 10.0, 1.0));
        assert!(po.poles.iter().all(|q| q.re == 0.0));
        assert!(po.is_reflection_closed(1e-12));
    }

    proptest! {
        // every analytic spectrum is exactly even in omega
        #[test]
        fn spectra_are_even(
            omega in 0.1f64..100.0,
            gamma in 1e-6f64..100.0,
            a in 1e-6f64..10.0,
            w in 0.0f64..500.0,
        ) {
            let p = params(omega, gamma, a);
            prop_assert_eq!(s_theta_value(&p, w), s_theta_value(&p, -w));
            prop_assert_eq!(
                s_itn_value(&p, w, Convention::PaperLiteral),
                s_itn_value(&p, -w, Convention::PaperLiteral)
            );
        }

        // pole imaginary parts are +/- gamma/2 below critical damping
        #[test]
        fn pole_imaginary_parts(omega in 0.1f64..10.0, ratio in 1e-4f64..1.9) {
            let gamma = ratio * omega;
            let ps = psd_poles(&params(omega, gamma, 1.0));
            for q in ps.poles {
                prop_assert!((q.im.abs() - gamma / 2.0).abs() < 1e-12 * gamma.max(1.0));
            }
            prop_assert!(ps.is_reflection_closed(1e-9));
        }
    }
}
