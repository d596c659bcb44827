//! The dephasing factor Gamma: spectral integral of the torsion-noise PSD
//! against the transfer function, a time-domain Monte Carlo estimator
//! certifying it end to end, and the visibility/witness interpretation
//! layer with experiment thresholds.

use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::interferometer::{build_trajectories, transfer_exact, InterferometerGeometry};
use crate::langevin::{simulate, LangevinParams, SimulationGrid};
use crate::math::{integrate_adaptive, integrate_peak, NeumaierSum, QuadOptions, QuadResult};
use crate::spectra::analytic::{s_itn_value, s_itn_value_near_double_peak};
use crate::spectra::Convention;

/// Half-widths of the doubled-frequency resonance window that gets the
/// flattening substitution.
const PEAK_WINDOW_HALFWIDTHS: f64 = 50.0;

/// Accepted results must have quadrature error below this fraction of the
/// value.
const ERROR_FRACTION_GATE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DephasingMethod {
    Spectral,
    MonteCarlo,
}

/// Monte Carlo specific diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McDiagnostics {
    pub n_trajectories: usize,
    /// Standard error of the variance estimate.
    pub statistical_error: f64,
    /// E[(dphi - mean)^2]: the fluctuation variance.
    pub gamma_variance: f64,
    /// Var/2: the Gaussian characteristic-function exponent.
    pub gamma_half_variance: f64,
    /// E[dphi]: deterministic phase offset, reported but not part of the
    /// dephasing (a constant phase rotates the fringe without damping it).
    pub mean_phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DephasingResult {
    pub gamma: f64,
    pub method: DephasingMethod,
    pub convention: Convention,
    pub omega_min: f64,
    pub omega_max: f64,
    /// Absolute quadrature error estimate (integration panels plus the
    /// analytic tail bound); zero for Monte Carlo results.
    pub quadrature_error: f64,
    pub monte_carlo: Option<McDiagnostics>,
}

/// Spectral dephasing factor over the band |omega| in [2 pi / total_time,
/// omega_max], with omega_max extended until the analytic tail bound is
/// negligible.
///
/// * `PaperLiteral`: Gamma = (m^2/4 hbar^2) int S_itn(omega) F(omega) domega
///   with the printed spectrum, the figure-reproduction reading.
/// * `Calibrated`: the band-limited physical variance E[(dphi)^2], which is
///   the paper-literal number divided by 4 pi (one 2 pi from the
///   Wiener-Khinchin normalization, one 2 from the printed spectrum being
///   twice the calibrated density).
pub fn gamma_spectral(
    geom: &InterferometerGeometry,
    params: &LangevinParams,
    total_time: f64,
    convention: Convention,
) -> Result<DephasingResult> {
    if !(total_time > 0.0) {
        return Err(Error::Domain(format!("total_time must be positive, got {total_time}")));
    }
    if params.gamma <= 0.0 {
        return Err(Error::Domain(
            "spectral dephasing needs gamma > 0 (torsion-noise spectrum diverges)".into(),
        ));
    }
    let omega_min = 2.0 * std::f64::consts::PI / total_time;
    let prefactor =
        geom.particle_mass * geom.particle_mass / (4.0 * HBAR * HBAR);

    let integrand = |w: f64| s_itn_value(params, w, Convention::PaperLiteral) * transfer_exact(geom, w);

    let omega = params.omega_rot;
    let gamma = params.gamma;
    let peak_center = 2.0 * omega;
    let peak_half = PEAK_WINDOW_HALFWIDTHS * gamma;
    let narrow_peak = gamma < omega / PEAK_WINDOW_HALFWIDTHS;

    let knee = 2.0 * std::f64::consts::PI / geom.total_time();
    let tail_start = 10.0 * (peak_center.max(knee).max(gamma).max(omega_min));

    let mut value = NeumaierSum::new();
    let mut err_abs = 0.0f64;
    let mut n_bad: Vec<crate::error::BadInterval> = Vec::new();

    let opts = QuadOptions::default();
    let mut push = |r: std::result::Result<QuadResult, Error>| -> Result<(f64, f64)> {
        match r {
            Ok(q) => Ok((q.value, q.error_estimate)),
            Err(e) => Err(e),
        }
    };

    // Panels up to the start of the analytic tail.
    if narrow_peak && peak_center + peak_half > omega_min {
        let lo = peak_center - peak_half;
        let hi = peak_center + peak_half;
        if lo > omega_min {
            let (v, e) = push(integrate_adaptive(integrand, omega_min, lo, opts))?;
            value.add(v);
            err_abs += e;
        }
        // offset form keeps delta exact deep inside the peak
        let peak_integrand = |w: f64| {
            s_itn_value_near_double_peak(params, w - peak_center, Convention::PaperLiteral)
                * transfer_exact(geom, w)
        };
        let plo = lo.max(omega_min);
        let (v, e) = push(integrate_peak(peak_integrand, peak_center, gamma, plo, hi, opts))?;
        value.add(v);
        err_abs += e;
        if hi < tail_start {
            let (v, e) = push(integrate_adaptive(integrand, hi, tail_start, opts))?;
            value.add(v);
            err_abs += e;
        }
    } else if omega_min < tail_start {
        // no narrow structure inside the band; knot at the doubled
        // frequency if it lies inside
        if peak_center > omega_min && peak_center < tail_start {
            let (v1, e1) = push(integrate_adaptive(integrand, omega_min, peak_center, opts))?;
            let (v2, e2) = push(integrate_adaptive(integrand, peak_center, tail_start, opts))?;
            value.add(v1);
            value.add(v2);
            err_abs += e1 + e2;
        } else {
            let (v, e) = push(integrate_adaptive(integrand, omega_min, tail_start, opts))?;
            value.add(v);
            err_abs += e;
        }
    }

    // Extend by octaves until the analytic tail bound is negligible.
    let a_m = geom.acceleration();
    let ta = geom.t_accel;
    let strip_opts = QuadOptions { rel_tol: 1e-3, ..opts };
    let mut omega_max = tail_start.max(omega_min);
    for _ in 0..24 {
        let tail_bound = {
            // S <= 4.5 A^2/(gamma w^2), F <= 16 a^4 (2 t_a^2 + 6 t_a/w + 6/w^2)^2 / w^6
            let c_s = 4.5 * params.amplitude_a * params.amplitude_a / gamma;
            let poly = 2.0 * ta * ta + 6.0 * ta / omega_max + 6.0 / (omega_max * omega_max);
            let c_f = 16.0 * a_m.powi(4) * poly * poly;
            c_s * c_f / (7.0 * omega_max.powi(7))
        };
        let total_so_far = value.total().abs();
        if tail_bound <= 1e-6 * total_so_far.max(f64::MIN_POSITIVE) {
            err_abs += tail_bound;
            break;
        }
        let next = omega_max * 4.0;
        match integrate_adaptive(integrand, omega_max, next, strip_opts) {
            Ok(q) => {
                value.add(q.value);
                err_abs += q.error_estimate;
            }
            Err(Error::Unconverged { value: v, error_estimate, worst, .. }) => {
                value.add(v);
                err_abs += error_estimate;
                n_bad.extend(worst);
            }
            Err(e) => return Err(e),
        }
        omega_max = next;
    }

    // evenness: both half-lines
    let gamma_pl = 2.0 * prefactor * value.total();
    let err_pl = 2.0 * prefactor * err_abs;
    if gamma_pl > 0.0 && err_pl >= ERROR_FRACTION_GATE * gamma_pl {
        return Err(Error::Unconverged {
            value: gamma_pl,
            error_estimate: err_pl,
            tolerance: ERROR_FRACTION_GATE * gamma_pl,
            worst: n_bad,
        });
    }

    let (gamma_out, err_out) = match convention {
        Convention::PaperLiteral => (gamma_pl, err_pl),
        Convention::Calibrated => {
            let s = 4.0 * std::f64::consts::PI;
            (gamma_pl / s, err_pl / s)
        }
    };
    Ok(DephasingResult {
        gamma: gamma_out,
        method: DephasingMethod::Spectral,
        convention,
        omega_min,
        omega_max,
        quadrature_error: err_out,
        monte_carlo: None,
    })
}

/// Time-domain Monte Carlo dephasing: per-trajectory phase
/// dphi = (m / 2 hbar) int theta_dot^2 (x_R^2 - x_L^2) dt
/// by trapezoid integration, fluctuation variance across the ensemble.
///
/// Returns gamma = E[(dphi - mean)^2] tagged `Calibrated` (it is a direct
/// physical variance; no spectral convention enters), with the
/// characteristic-function exponent Var/2 and the deterministic mean phase
/// in the diagnostics.
pub fn gamma_montecarlo(
    geom: &InterferometerGeometry,
    params: &LangevinParams,
    grid: &SimulationGrid,
    n_trajectories: usize,
    exec: Execution,
) -> Result<DephasingResult> {
    if n_trajectories < 100 {
        return Err(Error::Config(format!(
            "Monte Carlo dephasing needs at least 100 trajectories, got {n_trajectories}"
        )));
    }
    let total_time = geom.total_time();
    if grid.total_duration() + 1e-12 < total_time {
        return Err(Error::Config(format!(
            "simulation span {} shorter than the interferometer loop {}",
            grid.total_duration(),
            total_time
        )));
    }
    // 2 pi / T must be resolved by the record length as well
    if grid.dt * 20.0 > total_time {
        return Err(Error::Config(format!(
            "dt = {} too coarse for the loop time {total_time}",
            grid.dt
        )));
    }

    let traj_shape = build_trajectories(geom);
    let n_time = grid.n_steps;
    let weights: Vec<f64> = (0..n_time)
        .map(|i| {
            let t = i as f64 * grid.dt;
            let x = traj_shape.x_right(t);
            x * x
        })
        .collect();
    let scale = geom.particle_mass / (2.0 * HBAR);

    let phases: Result<Vec<f64>> = map_indexed(exec, n_trajectories, |k| {
        let traj = simulate(params, grid, k as u64)?;
        let mut acc = NeumaierSum::new();
        for i in 0..n_time {
            let td = traj.theta_dot[i];
            let w = if i == 0 || i == n_time - 1 { 0.5 } else { 1.0 };
            acc.add(w * td * td * weights[i]);
        }
        Ok(scale * acc.total() * grid.dt)
    })
    .into_iter()
    .collect();
    let phases = phases?;

    let n = phases.len() as f64;
    let mean = phases.iter().collect::<NeumaierSum>().total() / n;
    let mut m2 = NeumaierSum::new();
    let mut m4 = NeumaierSum::new();
    for &p in &phases {
        let d = p - mean;
        m2.add(d * d);
        m4.add(d.powi(4));
    }
    let variance = m2.total() / (n - 1.0);
    let fourth = m4.total() / n;
    // SE of the sample variance
    let se = ((fourth - variance * variance).max(0.0) / n).sqrt();
    if variance > 0.0 && se > 0.2 * variance {
        return Err(Error::InsufficientSamples {
            estimate: variance,
            statistical_error: se,
            fraction: 100.0 * se / variance,
        });
    }

    Ok(DephasingResult {
        gamma: variance,
        method: DephasingMethod::MonteCarlo,
        convention: Convention::Calibrated,
        omega_min: 0.0,
        omega_max: std::f64::consts::PI / grid.dt,
        quadrature_error: 0.0,
        monte_carlo: Some(McDiagnostics {
            n_trajectories,
            statistical_error: se,
            gamma_variance: variance,
            gamma_half_variance: variance / 2.0,
            mean_phase: mean,
        }),
    })
}

// ---------------------------------------------------------------------------
// interpretation layer

/// Fringe visibility E[e^{i dphi}] = e^{-Gamma}.
pub fn visibility_loss(gamma: f64) -> f64 {
    (-gamma).exp()
}

/// Purity of the ensemble-averaged qubit state: (1 + e^{-2 Gamma}) / 2.
pub fn purity(gamma: f64) -> f64 {
    (1.0 + (-2.0 * gamma).exp()) / 2.0
}

/// Entanglement-witness expectation under dephasing:
/// (1 - e^{-2 Gamma})/4 - e^{-Gamma/2} sin(phi_g). Negative means the
/// entanglement is still witnessed.
pub fn qgem_witness(gamma: f64, phi_g: f64) -> f64 {
    (1.0 - (-2.0 * gamma).exp()) / 4.0 - (-gamma / 2.0).exp() * phi_g.sin()
}

/// Gravimeter sensitivity bound: Gamma = (16 pi m sigma_g dz / (hbar w0))^2.
pub fn gravimeter_gamma_bound(sigma_g: f64, mass: f64, delta_z: f64, trap_omega: f64) -> f64 {
    let root = 16.0 * std::f64::consts::PI * mass * sigma_g * delta_z / (HBAR * trap_omega);
    root * root
}

/// Which experiment sets the dephasing budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Application {
    /// Gravimeter sensitivity budget, Gamma < 1e-6.
    Gravimeter,
    /// Entanglement-witness budget, Gamma < 0.01.
    Qgem,
    Custom(f64),
}

impl Application {
    pub fn threshold(self) -> f64 {
        match self {
            Application::Gravimeter => 1e-6,
            Application::Qgem => 0.01,
            Application::Custom(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdVerdict {
    pub threshold: f64,
    pub passes: bool,
    pub application: Application,
}

pub fn check_threshold(gamma: f64, application: Application) -> ThresholdVerdict {
    let threshold = application.threshold();
    ThresholdVerdict { threshold, passes: gamma < threshold, application }
}
