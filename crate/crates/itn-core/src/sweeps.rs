//! Parameter-scan engine: dephasing versus intrinsic frequency, damping,
//! and noise amplitude, threshold contours, and amplitude upper bounds.
//!
//! Every scan records one row per grid point; points whose quadrature
//! fails carry an error marker instead of being dropped or interpolated.

use std::time::Instant;

use serde::Serialize;

use crate::constants::BOLTZMANN;
use crate::dephasing::gamma_spectral;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::interferometer::InterferometerGeometry;
use crate::langevin::LangevinParams;
use crate::spectra::Convention;

/// Product Delta_x * A tying the noise amplitude to the superposition
/// size, from simulation studies of comparable drives [m/s^3 * m].
pub const SUPERPOSITION_NOISE_PRODUCT: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweptParameter {
    OmegaRot,
    Gamma,
    AmplitudeA,
    Pressure,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridScale {
    Log,
    Linear,
}

/// One scan axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub scale: GridScale,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Self { scale: GridScale::Log, min, max, count }
    }

    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self { scale: GridScale::Linear, min, max, count }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Config("axis grid must be non-empty".into()));
        }
        if self.max < self.min {
            return Err(Error::Config(format!("axis bounds out of order: {} > {}", self.min, self.max)));
        }
        if matches!(self.scale, GridScale::Log) && self.min <= 0.0 {
            return Err(Error::Config("log axis requires positive bounds".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        let n = self.count as f64 - 1.0;
        Ok((0..self.count)
            .map(|i| match self.scale {
                GridScale::Linear => self.min + (self.max - self.min) * i as f64 / n,
                GridScale::Log => self.min * (self.max / self.min).powf(i as f64 / n),
            })
            .collect())
    }
}

/// Thermal substitution A = 2 gamma k_B T / I applied per sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalSubstitution {
    pub temperature: f64,
    pub moment_of_inertia: f64,
}

/// Everything held fixed during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedParams {
    pub geometry: InterferometerGeometry,
    pub langevin: LangevinParams,
    /// Cutoff time binding omega_min = 2 pi / total_time.
    pub total_time: f64,
    pub thermal: Option<ThermalSubstitution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub swept: SweptParameter,
    pub axis: AxisSpec,
    pub fixed: FixedParams,
    pub threshold: Option<f64>,
}

/// One grid point. `values` parallels `SweepResult::columns`; a failed
/// quadrature keeps its coordinates and carries the error text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub values: Vec<f64>,
    pub error: Option<String>,
}

/// A local maximum refined by repeated grid halving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakAnnotation {
    pub omega_rot: f64,
    pub gamma_dephasing: f64,
    /// Grid step after refinement; the peak position is converged to
    /// roughly this resolution.
    pub resolved_step: f64,
    /// Nearest harmonic 2 n pi / T of the loop time.
    pub nearest_harmonic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourLine {
    pub threshold: f64,
    /// (gamma, critical amplitude) pairs along the lattice.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SweepMetadata {
    pub code_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub wall_time_s: f64,
    pub n_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub peaks: Vec<PeakAnnotation>,
    pub contours: Vec<ContourLine>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    fn new(columns: Vec<&str>, rows: Vec<SweepRow>, started: Instant) -> Self {
        let n_failed = rows.iter().filter(|r| r.error.is_some()).count();
        Self {
            columns: columns.into_iter().map(String::from).collect(),
            rows,
            peaks: Vec::new(),
            contours: Vec::new(),
            metadata: SweepMetadata {
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                config_hash: String::new(),
                seed: 0,
                wall_time_s: started.elapsed().as_secs_f64(),
                n_failed,
            },
        }
    }

    /// CSV with one row per lattice point and a trailing error column.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{},error", self.columns.join(","))?;
        for row in &self.rows {
            let vals: Vec<String> = row.values.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{},{}", vals.join(","), row.error.as_deref().unwrap_or(""))?;
        }
        Ok(())
    }
}

fn gamma_at(fixed: &FixedParams, params: &LangevinParams) -> std::result::Result<f64, String> {
    gamma_spectral(&fixed.geometry, params, fixed.total_time, Convention::PaperLiteral)
        .map(|r| r.gamma)
        .map_err(|e| e.to_string())
}

fn thermal_amplitude_at(thermal: &ThermalSubstitution, gamma: f64) -> f64 {
    2.0 * gamma * BOLTZMANN * thermal.temperature / thermal.moment_of_inertia
}

/// Dephasing versus intrinsic torsion frequency, with local maxima
/// annotated after a three-level grid-halving refinement.
pub fn sweep_gamma_vs_omega(spec: &SweepSpec, exec: Execution) -> Result<SweepResult> {
    let started = Instant::now();
    let omegas = spec.axis.values()?;
    let fixed = spec.fixed;
    let rows: Vec<SweepRow> = map_indexed(exec, omegas.len(), |i| {
        let omega = omegas[i];
        let params = LangevinParams {
            omega_rot: omega,
            ..fixed.langevin
        };
        match gamma_at(&fixed, &params) {
            Ok(g) => SweepRow { values: vec![omega, g], error: None },
            Err(e) => SweepRow { values: vec![omega, f64::NAN], error: Some(e) },
        }
    });

    let mut result = SweepResult::new(vec!["omega_rot_rad_per_s", "gamma_dephasing"], rows, started);
    result.peaks = annotate_peaks(&omegas, &result.rows, &fixed, exec);
    Ok(result)
}

/// Local maxima of the scanned curve, each refined by halving the local
/// grid step three times so the position is grid-converged.
fn annotate_peaks(
    omegas: &[f64],
    rows: &[SweepRow],
    fixed: &FixedParams,
    _exec: Execution,
) -> Vec<PeakAnnotation> {
    let vals: Vec<f64> = rows.iter().map(|r| if r.error.is_none() { r.values[1] } else { f64::NAN }).collect();
    let eval = |omega: f64| -> f64 {
        let params = LangevinParams { omega_rot: omega, ..fixed.langevin };
        gamma_at(fixed, &params).unwrap_or(f64::NAN)
    };
    let mut peaks = Vec::new();
    for i in 1..omegas.len().saturating_sub(1) {
        if !(vals[i].is_finite() && vals[i] > vals[i - 1] && vals[i] > vals[i + 1]) {
            continue;
        }
        // three levels of local grid halving around the detected maximum
        let (mut lo, mut mid, mut hi) = (omegas[i - 1], omegas[i], omegas[i + 1]);
        let (mut flo, mut fmid, mut fhi) = (vals[i - 1], vals[i], vals[i + 1]);
        for _ in 0..3 {
            let l = 0.5 * (lo + mid);
            let r = 0.5 * (mid + hi);
            let fl = eval(l);
            let fr = eval(r);
            // keep the best bracketing triple
            if fl >= fmid && fl >= fr {
                (hi, fhi) = (mid, fmid);
                (mid, fmid) = (l, fl);
            } else if fr >= fmid && fr >= fl {
                (lo, flo) = (mid, fmid);
                (mid, fmid) = (r, fr);
            } else {
                (lo, flo) = (l, fl);
                (hi, fhi) = (r, fr);
            }
        }
        let _ = (flo, fhi);
        let t = fixed.geometry.total_time();
        let harmonic_unit = 2.0 * std::f64::consts::PI / t;
        let n = (mid / harmonic_unit).round().max(1.0);
        peaks.push(PeakAnnotation {
            omega_rot: mid,
            gamma_dephasing: fmid,
            resolved_step: 0.5 * (hi - lo),
            nearest_harmonic: n * harmonic_unit,
        });
    }
    peaks
}

/// Dephasing versus damping rate. With `thermal` the amplitude follows
/// A = 2 gamma k_B T / I at every point; otherwise A stays fixed.
pub fn sweep_gamma_vs_damping(spec: &SweepSpec, thermal: bool, exec: Execution) -> Result<SweepResult> {
    let started = Instant::now();
    let gammas = spec.axis.values()?;
    let fixed = spec.fixed;
    if thermal && fixed.thermal.is_none() {
        return Err(Error::Config(
            "thermal damping sweep needs temperature and moment of inertia".into(),
        ));
    }
    let rows: Vec<SweepRow> = map_indexed(exec, gammas.len(), |i| {
        let gamma = gammas[i];
        let amplitude = if thermal {
            thermal_amplitude_at(&fixed.thermal.unwrap(), gamma)
        } else {
            fixed.langevin.amplitude_a
        };
        let params = LangevinParams { gamma, amplitude_a: amplitude, ..fixed.langevin };
        match gamma_at(&fixed, &params) {
            Ok(g) => SweepRow { values: vec![gamma, amplitude, g], error: None },
            Err(e) => SweepRow { values: vec![gamma, amplitude, f64::NAN], error: Some(e) },
        }
    });
    Ok(SweepResult::new(
        vec!["gamma_per_s", "amplitude_a_per_s3", "gamma_dephasing"],
        rows,
        started,
    ))
}

/// Dephasing over an (A, gamma) lattice with iso-threshold contours.
///
/// Gamma is exactly proportional to A^2, so each gamma column needs one
/// quadrature at A = 1 and the lattice follows by scaling; the contour
/// march in log-log space is then exact rather than interpolated.
pub fn sweep_gamma_grid(
    spec_a: &AxisSpec,
    spec_gamma: &AxisSpec,
    fixed: &FixedParams,
    thresholds: &[f64],
    exec: Execution,
) -> Result<SweepResult> {
    let started = Instant::now();
    let amps = spec_a.values()?;
    let gammas = spec_gamma.values()?;
    let unit: Vec<std::result::Result<f64, String>> = map_indexed(exec, gammas.len(), |j| {
        let params = LangevinParams { gamma: gammas[j], amplitude_a: 1.0, ..fixed.langevin };
        gamma_at(fixed, &params)
    });

    let mut rows = Vec::with_capacity(amps.len() * gammas.len());
    for &a in &amps {
        for (j, &g) in gammas.iter().enumerate() {
            match &unit[j] {
                Ok(g1) => rows.push(SweepRow { values: vec![a, g, g1 * a * a], error: None }),
                Err(e) => rows.push(SweepRow { values: vec![a, g, f64::NAN], error: Some(e.clone()) }),
            }
        }
    }

    let mut result = SweepResult::new(
        vec!["amplitude_a_per_s3", "gamma_per_s", "gamma_dephasing"],
        rows,
        started,
    );
    for &threshold in thresholds {
        let mut points = Vec::new();
        for (j, &g) in gammas.iter().enumerate() {
            if let Ok(g1) = unit[j] {
                if g1 > 0.0 {
                    points.push((g, (threshold / g1).sqrt()));
                }
            }
        }
        result.contours.push(ContourLine { threshold, points });
    }
    Ok(result)
}

/// Upper bound on the noise amplitude for Gamma below `threshold`, per
/// (Omega_rot, gamma) lattice point: one quadrature at A = 1, then the
/// exact square-root rescale.
pub fn amplitude_bound(
    omega_axis: &AxisSpec,
    gamma_axis: &AxisSpec,
    threshold: f64,
    fixed: &FixedParams,
    exec: Execution,
) -> Result<SweepResult> {
    if !(threshold > 0.0) {
        return Err(Error::Config(format!("threshold must be positive, got {threshold}")));
    }
    let started = Instant::now();
    let omegas = omega_axis.values()?;
    let gammas = gamma_axis.values()?;
    let n = omegas.len() * gammas.len();
    let rows: Vec<SweepRow> = map_indexed(exec, n, |idx| {
        let omega = omegas[idx / gammas.len()];
        let gamma = gammas[idx % gammas.len()];
        let params = LangevinParams { omega_rot: omega, gamma, amplitude_a: 1.0, ..fixed.langevin };
        match gamma_at(fixed, &params) {
            Ok(g1) if g1 > 0.0 => SweepRow {
                values: vec![omega, gamma, (threshold / g1).sqrt()],
                error: None,
            },
            Ok(_) => SweepRow {
                values: vec![omega, gamma, f64::INFINITY],
                error: Some("zero response at this point".into()),
            },
            Err(e) => SweepRow { values: vec![omega, gamma, f64::NAN], error: Some(e) },
        }
    });
    Ok(SweepResult::new(
        vec!["omega_rot_rad_per_s", "gamma_per_s", "a_bound_per_s3"],
        rows,
        started,
    ))
}

/// Feasibility of a superposition size against an amplitude bound:
/// the required amplitude A = (1e-11 m/s^3 m) / Delta_x must stay below
/// the bound at the operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub a_required: f64,
    pub a_bound: f64,
    pub passes: bool,
}

pub fn feasibility_check(delta_x: f64, a_bound: f64) -> Result<FeasibilityReport> {
    if !(delta_x > 0.0) {
        return Err(Error::Domain(format!("superposition size must be positive, got {delta_x}")));
    }
    let a_required = SUPERPOSITION_NOISE_PRODUCT / delta_x;
    Ok(FeasibilityReport { a_required, a_bound, passes: a_required < a_bound })
}
