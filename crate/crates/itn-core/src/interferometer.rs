//! Stern-Gerlach arm trajectories and the interferometer transfer
//! function F(omega) = |integral (x_R^2 - x_L^2) e^{i omega t} dt|^2.
//!
//! Three routes are provided and cross-checked: the closed form
//! ([`transfer_exact`]), direct piecewise-polynomial integration of the
//! trajectory ([`transfer_numeric`], the independent oracle), and the
//! plateau/rolloff step approximation ([`transfer_approx`]).

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::constants::{BOHR_MAGNETON, LANDE_G};
use crate::error::{Error, Result};

/// Interferometer drive parameters. The left arm is static; the right arm
/// is accelerated at +/- a_m with a_m = g mu_B eta / m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferometerGeometry {
    /// Particle mass [kg].
    pub particle_mass: f64,
    /// Magnetic field gradient eta [T/m].
    pub magnetic_gradient: f64,
    /// Acceleration segment duration t_a [s].
    pub t_accel: f64,
    /// Free-flight duration t_e [s].
    pub t_free: f64,
    /// Lande g-factor.
    pub lande_g: f64,
    /// Bohr magneton [J/T].
    pub bohr_magneton: f64,
}

impl InterferometerGeometry {
    pub fn new(particle_mass: f64, magnetic_gradient: f64, t_accel: f64, t_free: f64) -> Result<Self> {
        if !(particle_mass > 0.0 && t_accel > 0.0) || t_free < 0.0 || magnetic_gradient < 0.0 {
            return Err(Error::Domain(format!(
                "geometry out of domain (m={particle_mass}, eta={magnetic_gradient}, t_a={t_accel}, t_e={t_free})"
            )));
        }
        Ok(Self {
            particle_mass,
            magnetic_gradient,
            t_accel,
            t_free,
            lande_g: LANDE_G,
            bohr_magneton: BOHR_MAGNETON,
        })
    }

    /// Magnetic acceleration a_m = g mu_B eta / m [m/s^2].
    pub fn acceleration(&self) -> f64 {
        self.lande_g * self.bohr_magneton * self.magnetic_gradient / self.particle_mass
    }

    /// Maximum superposition size Delta x = a_m t_a^2 [m].
    pub fn delta_x(&self) -> f64 {
        self.acceleration() * self.t_accel * self.t_accel
    }

    /// Total loop time T = 4 t_a + t_e [s].
    pub fn total_time(&self) -> f64 {
        4.0 * self.t_accel + self.t_free
    }
}

/// One constant-acceleration segment of the right arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub t_start: f64,
    pub duration: f64,
    /// Position, velocity, acceleration at the segment start.
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
}

/// Piecewise-quadratic arm trajectories; the left arm is identically zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmTrajectories {
    pub segments: Vec<Segment>,
    pub total_time: f64,
    pub max_displacement: f64,
}

impl ArmTrajectories {
    pub fn x_left(&self, _t: f64) -> f64 {
        0.0
    }

    pub fn x_right(&self, t: f64) -> f64 {
        let Some(seg) = self.segment_at(t) else { return 0.0 };
        let tau = t - seg.t_start;
        seg.position + seg.velocity * tau + 0.5 * seg.acceleration * tau * tau
    }

    pub fn v_right(&self, t: f64) -> f64 {
        let Some(seg) = self.segment_at(t) else { return 0.0 };
        let tau = t - seg.t_start;
        seg.velocity + seg.acceleration * tau
    }

    fn segment_at(&self, t: f64) -> Option<&Segment> {
        if t < 0.0 || t > self.total_time {
            return None;
        }
        self.segments
            .iter()
            .rev()
            .find(|s| t >= s.t_start)
            .or(self.segments.first())
    }
}

/// Five-segment loop: accelerate, decelerate, coast at Delta x, then the
/// mirrored pair closing the loop at rest.
pub fn build_trajectories(geom: &InterferometerGeometry) -> ArmTrajectories {
    let a = geom.acceleration();
    let ta = geom.t_accel;
    let te = geom.t_free;
    let dx = geom.delta_x();
    let segments = vec![
        Segment { t_start: 0.0, duration: ta, position: 0.0, velocity: 0.0, acceleration: a },
        Segment {
            t_start: ta,
            duration: ta,
            position: 0.5 * a * ta * ta,
            velocity: a * ta,
            acceleration: -a,
        },
        Segment { t_start: 2.0 * ta, duration: te, position: dx, velocity: 0.0, acceleration: 0.0 },
        Segment {
            t_start: 2.0 * ta + te,
            duration: ta,
            position: dx,
            velocity: 0.0,
            acceleration: -a,
        },
        Segment {
            t_start: 3.0 * ta + te,
            duration: ta,
            position: dx - 0.5 * a * ta * ta,
            velocity: -a * ta,
            acceleration: a,
        },
    ];
    ArmTrajectories { segments, total_time: geom.total_time(), max_displacement: dx }
}

// ---------------------------------------------------------------------------
// closed form

/// Bracket of the closed-form transfer function; F = 16 a^4 b^2 / omega^10.
fn bracket_direct(ta: f64, te: f64, w: f64) -> f64 {
    6.0 * w * ta * (w * (ta + te / 2.0)).cos() + (w * w * ta * ta + 3.0) * (w * te / 2.0).sin()
        - 3.0 * (w * (2.0 * ta + te / 2.0)).sin()
        - w * w * ta * ta * (w * (ta + te / 2.0)).sin()
}

/// Maclaurin coefficients of the bracket: b = sum_{j>=2} c_{2j+1} w^{2j+1}.
/// The j = 0, 1 coefficients vanish identically; evaluating through them
/// numerically is what destroys the direct form at small omega.
fn bracket_series_coeffs(ta: f64, te: f64, n_terms: usize) -> Vec<f64> {
    let p = ta + te / 2.0;
    let q = te / 2.0;
    let r = 2.0 * ta + te / 2.0;
    let mut coeffs = Vec::with_capacity(n_terms);
    // running factorials and powers
    let mut fact = vec![1.0f64; 2 * (n_terms + 3) + 2];
    for i in 1..fact.len() {
        fact[i] = fact[i - 1] * i as f64;
    }
    for j in 2..(2 + n_terms) {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = 6.0 * ta * p.powi(2 * j as i32) / fact[2 * j]
            + 3.0 * (q.powi(2 * j as i32 + 1) - r.powi(2 * j as i32 + 1)) / fact[2 * j + 1]
            + ta * ta * (p.powi(2 * j as i32 - 1) - q.powi(2 * j as i32 - 1)) / fact[2 * j - 1];
        coeffs.push(sign * c);
    }
    coeffs
}

/// Closed-form transfer function, series-evaluated below omega T = 0.5
/// where the direct bracket cancels catastrophically. Valid at omega = 0
/// (the low-frequency plateau) and even in omega.
pub fn transfer_exact(geom: &InterferometerGeometry, omega: f64) -> f64 {
    let w = omega.abs();
    let a = geom.acceleration();
    let (ta, te) = (geom.t_accel, geom.t_free);
    if w * geom.total_time() <= 0.5 {
        // b = w^5 P(w^2); F = 16 a^4 P^2
        let coeffs = bracket_series_coeffs(ta, te, 12);
        let w2 = w * w;
        let mut poly = 0.0;
        for &c in coeffs.iter().rev() {
            poly = poly * w2 + c;
        }
        16.0 * a.powi(4) * poly * poly
    } else {
        let b = bracket_direct(ta, te, w);
        16.0 * a.powi(4) / w.powi(10) * b * b
    }
}

// ---------------------------------------------------------------------------
// independent numeric route

/// int_0^d tau^k e^{i w tau} d tau for k = 0..=4, series-evaluated when
/// |w| d < 0.5 to keep every segment accurate at machine precision.
fn moment_integrals(w: f64, d: f64) -> [Complex64; 5] {
    let mut out = [Complex64::new(0.0, 0.0); 5];
    if w.abs() * d < 0.5 {
        for (k, slot) in out.iter_mut().enumerate() {
            let mut term = Complex64::new(d.powi(k as i32 + 1), 0.0);
            let mut sum = term / (k as f64 + 1.0);
            let iw = Complex64::new(0.0, w);
            for m in 1..40 {
                term = term * iw * d / m as f64;
                let contrib = term / (k as f64 + m as f64 + 1.0);
                sum += contrib;
                if contrib.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            *slot = sum;
        }
    } else {
        let iw = Complex64::new(0.0, w);
        let e = (iw * d).exp();
        out[0] = (e - 1.0) / iw;
        for k in 1..5 {
            out[k] = (e * d.powi(k as i32) - k as f64 * out[k - 1]) / iw;
        }
    }
    out
}

/// Transfer function from the trajectory itself: exact per-segment
/// integration of the quartic x_R^2(t) against e^{i omega t}. Shares no
/// algebra with [`transfer_exact`] beyond the trajectory definition.
pub fn transfer_numeric(traj: &ArmTrajectories, omega: f64) -> f64 {
    let mut total = Complex64::new(0.0, 0.0);
    for seg in &traj.segments {
        if seg.duration <= 0.0 {
            continue;
        }
        // x(tau) = p + v tau + a tau^2 / 2; square it
        let (p, v, a) = (seg.position, seg.velocity, seg.acceleration);
        let quartic = [
            p * p,
            2.0 * p * v,
            v * v + p * a,
            v * a,
            a * a / 4.0,
        ];
        let moments = moment_integrals(omega, seg.duration);
        let mut seg_sum = Complex64::new(0.0, 0.0);
        for (c, m) in quartic.iter().zip(moments.iter()) {
            seg_sum += *m * *c;
        }
        let phase = Complex64::new(0.0, omega * seg.t_start).exp();
        total += phase * seg_sum;
    }
    total.norm_sqr()
}

// ---------------------------------------------------------------------------
// step approximation

/// Plateau/rolloff approximation
/// (Delta x)^4 T^2 [theta(2 pi/T - w) + (2 pi/(T w))^6 theta(w - 2 pi/T)],
/// with the boundary w = 2 pi/T assigned to the plateau.
pub fn transfer_approx(geom: &InterferometerGeometry, omega: f64) -> f64 {
    let w = omega.abs();
    let t = geom.total_time();
    let plateau = geom.delta_x().powi(4) * t * t;
    let knee = 2.0 * std::f64::consts::PI / t;
    if w <= knee {
        plateau
    } else {
        plateau * (knee / w).powi(6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fig2_geometry() -> InterferometerGeometry {
        InterferometerGeometry::new(1e-15, 1e4, 0.25, 0.0).unwrap()
    }

    #[test]
    fn superposition_size_and_acceleration() {
        let g = fig2_geometry();
        assert_relative_eq!(g.acceleration(), 1.854e-4, max_relative = 1e-12);
        // quoted as 11.2 um with the acceleration rounded to 1.8e-4
        assert_relative_eq!(g.delta_x(), 11.2e-6, max_relative = 0.05);
        assert_relative_eq!(g.total_time(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn trajectory_reaches_delta_x_and_closes() {
        let g = InterferometerGeometry::new(1e-15, 1e4, 0.25, 0.3).unwrap();
        let traj = build_trajectories(&g);
        let dx = g.delta_x();
        let ta = g.t_accel;
        assert_relative_eq!(traj.x_right(2.0 * ta), dx, max_relative = 1e-12);
        // constant during the coast
        assert_relative_eq!(traj.x_right(2.0 * ta + 0.15), dx, max_relative = 1e-12);
        assert_eq!(traj.v_right(2.0 * ta + 0.15), 0.0);
        // closed loop at rest
        let t_end = g.total_time();
        assert!(traj.x_right(t_end).abs() < 1e-18);
        assert!(traj.v_right(t_end).abs() < 1e-18);
        assert!(traj.x_right(0.0).abs() < 1e-18);
        // peak displacement is the plateau value
        assert_relative_eq!(traj.max_displacement, dx, max_relative = 1e-12);
    }

    #[test]
    fn trajectory_is_continuous_with_continuous_velocity() {
        let g = InterferometerGeometry::new(1e-15, 1e4, 0.25, 0.3).unwrap();
        let traj = build_trajectories(&g);
        for seg in traj.segments.windows(2) {
            let t = seg[1].t_start;
            let eps = 1e-9;
            assert_relative_eq!(
                traj.x_right(t - eps),
                traj.x_right(t + eps),
                epsilon = 1e-12 * traj.max_displacement.max(1e-30)
            );
            assert!((traj.v_right(t - eps) - traj.v_right(t + eps)).abs() < 1e-6 * g.acceleration());
        }
    }

    #[test]
    fn low_frequency_plateau_matches_closed_form_time_integral() {
        // F(0) = (23/15)^2 a^4 t_a^10 for t_e = 0
        let g = fig2_geometry();
        let a = g.acceleration();
        let want = (23.0f64 / 15.0).powi(2) * a.powi(4) * g.t_accel.powi(10);
        assert_relative_eq!(transfer_exact(&g, 0.0), want, max_relative = 1e-12);
        assert_relative_eq!(transfer_exact(&g, 1e-4), want, max_relative = 1e-6);
        // plateau sits below the (Delta x)^4 T^2 bound
        assert!(transfer_exact(&g, 0.0) <= g.delta_x().powi(4) * g.total_time().powi(2) * 1.1);
    }

    #[test]
    fn exact_and_numeric_agree_at_spot_frequencies() {
        let g = fig2_geometry();
        let traj = build_trajectories(&g);
        for w in [1e-2, 0.3, 1.0, 2.0 * std::f64::consts::PI, 40.0, 311.0, 1e4] {
            let fe = transfer_exact(&g, w);
            let fnm = transfer_numeric(&traj, w);
            assert!(
                (fe - fnm).abs() <= 1e-9 * fnm.max(fe),
                "w={w}: exact {fe} vs numeric {fnm}"
            );
        }
        // and at omega = 0 the numeric route reproduces the plateau
        assert_relative_eq!(transfer_numeric(&traj, 0.0), transfer_exact(&g, 0.0), max_relative = 1e-12);
    }

    #[test]
    fn exact_and_numeric_agree_with_free_flight() {
        let g = InterferometerGeometry::new(1e-15, 1e4, 0.25, 0.4).unwrap();
        let traj = build_trajectories(&g);
        for w in [1e-2, 0.7, 5.0, 60.0, 900.0] {
            let fe = transfer_exact(&g, w);
            let fnm = transfer_numeric(&traj, w);
            assert!(
                (fe - fnm).abs() <= 1e-9 * fnm.max(fe),
                "w={w}: exact {fe} vs numeric {fnm}"
            );
        }
    }

    #[test]
    fn symmetric_interferometer_has_no_response() {
        let g = InterferometerGeometry::new(1e-15, 0.0, 0.25, 0.0).unwrap();
        let traj = build_trajectories(&g);
        for w in [0.0, 1.0, 10.0] {
            assert_eq!(transfer_numeric(&traj, w), 0.0);
            assert_eq!(transfer_exact(&g, w), 0.0);
        }
    }

    #[test]
    fn approx_form_boundary_and_rolloff() {
        let g = fig2_geometry();
        let t = g.total_time();
        let plateau = g.delta_x().powi(4) * t * t;
        let knee = 2.0 * std::f64::consts::PI / t;
        assert_eq!(transfer_approx(&g, knee), plateau);
        assert_relative_eq!(transfer_approx(&g, 2.0 * knee), plateau / 64.0, max_relative = 1e-12);
        assert_eq!(transfer_approx(&g, 0.1 * knee), plateau);
    }

    #[test]
    fn approx_tracks_exact_within_an_order_of_magnitude() {
        // over f in [0.1, 100] Hz the step form captures the envelope
        let g = fig2_geometry();
        let mut worst: f64 = 0.0;
        let mut f = 0.1;
        while f <= 100.0 {
            let w = 2.0 * std::f64::consts::PI * f;
            let exact = transfer_exact(&g, w);
            let approx = transfer_approx(&g, w);
            if exact > 0.0 {
                // compare against the local envelope: take the max of exact
                // over a small neighbourhood to skip interference zeros
                let env = (0..=20)
                    .map(|i| transfer_exact(&g, w * (0.95 + 0.005 * i as f64)))
                    .fold(0.0f64, f64::max);
                worst = worst.max((approx / env).max(env / approx));
            }
            f *= 1.15;
        }
        assert!(worst <= 10.0, "worst envelope ratio {worst}");
    }

    proptest! {
        #[test]
        fn transfer_is_even_and_non_negative(w in -1e3f64..1e3) {
            let g = fig2_geometry();
            prop_assert!(transfer_exact(&g, w) >= 0.0);
            prop_assert_eq!(transfer_exact(&g, w), transfer_exact(&g, -w));
            let traj = build_trajectories(&g);
            let fa = transfer_numeric(&traj, w);
            let fb = transfer_numeric(&traj, -w);
            prop_assert!(fa >= 0.0);
            prop_assert!((fa - fb).abs() <= 1e-12 * fa.max(fb).max(1e-300));
        }
    }
}
