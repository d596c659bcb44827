//! Seeded stochastic simulation of the box torsion dynamics
//! theta'' = -Omega_rot^2 theta - gamma theta' + sqrt(A) xi(t),
//! with xi a unit delta-correlated Gaussian white noise.

mod propagator;

pub use propagator::{euler_maruyama_step, StepPropagator};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::spectra::Convention;

/// Phenomenological parameters of the torsion Langevin equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LangevinParams {
    /// Intrinsic angular frequency Omega_rot [rad/s].
    pub omega_rot: f64,
    /// Damping rate gamma [1/s].
    pub gamma: f64,
    /// White-noise power A [1/s^3].
    pub amplitude_a: f64,
}

impl LangevinParams {
    pub fn new(omega_rot: f64, gamma: f64, amplitude_a: f64) -> Result<Self> {
        if omega_rot < 0.0 || gamma < 0.0 || amplitude_a < 0.0 {
            return Err(Error::Domain(format!(
                "Langevin parameters must be non-negative (omega={omega_rot}, gamma={gamma}, A={amplitude_a})"
            )));
        }
        if omega_rot == 0.0 && gamma == 0.0 {
            return Err(Error::Domain(
                "at least one of omega_rot, gamma must be positive".into(),
            ));
        }
        Ok(Self { omega_rot, gamma, amplitude_a })
    }

    /// True when gamma > 0 and omega_rot > 0 so a stationary state exists.
    pub fn has_stationary_state(&self) -> bool {
        self.gamma > 0.0 && self.omega_rot > 0.0
    }
}

/// How a trajectory starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub enum InitialState {
    /// Draw (theta, theta_dot) from the stationary Gaussian, so the
    /// trajectory is unbiased from the first sample. Default.
    #[default]
    Stationary,
    /// Start at rest at zero.
    Zero,
    /// Explicit initial (theta, theta_dot).
    Fixed(f64, f64),
}

/// Time stepper choice; the exact Gaussian propagator is the production
/// path, Euler-Maruyama exists only to cross-check it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Integrator {
    #[default]
    ExactGaussian,
    EulerMaruyama,
}

/// Discretization and seeding of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationGrid {
    /// Step size [s].
    pub dt: f64,
    /// Number of recorded samples (t = 0, dt, ..., (n_steps-1) dt).
    pub n_steps: usize,
    /// Steps advanced and discarded before recording.
    pub burn_in_steps: usize,
    /// Master seed; trajectory k uses an independent stream derived from
    /// (master_seed, k).
    pub master_seed: u64,
    pub initial: InitialState,
    pub integrator: Integrator,
}

impl SimulationGrid {
    pub fn new(dt: f64, n_steps: usize, master_seed: u64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {dt}")));
        }
        if n_steps < 2 {
            return Err(Error::Config(format!("n_steps must exceed 1, got {n_steps}")));
        }
        Ok(Self {
            dt,
            n_steps,
            burn_in_steps: 0,
            master_seed,
            initial: InitialState::default(),
            integrator: Integrator::default(),
        })
    }

    /// Equilibration burn-in max(10/gamma, 100/Omega) expressed in steps
    /// and clipped at `wall_limit_steps`. Unnecessary when the initial
    /// state is drawn stationary; kept for zero-start runs.
    pub fn default_burn_in_steps(params: &LangevinParams, dt: f64, wall_limit_steps: usize) -> usize {
        let mut t: f64 = 0.0;
        if params.gamma > 0.0 {
            t = t.max(10.0 / params.gamma);
        }
        if params.omega_rot > 0.0 {
            t = t.max(100.0 / params.omega_rot);
        }
        ((t / dt).ceil() as usize).min(wall_limit_steps)
    }

    pub fn total_duration(&self) -> f64 {
        self.dt * (self.n_steps - 1) as f64
    }
}

/// One realization of (theta, theta_dot) on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseTrajectory {
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
    pub theta_dot: Vec<f64>,
    pub params: LangevinParams,
    pub seed: u64,
    pub trajectory_index: u64,
}

impl NoiseTrajectory {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// CSV with a `t,theta,theta_dot` header at 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,theta,theta_dot")?;
        for i in 0..self.times.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.times[i], self.theta[i], self.theta_dot[i]
            )?;
        }
        Ok(())
    }
}

fn rng_for(master_seed: u64, trajectory_index: u64) -> ChaCha12Rng {
    // Independent, reproducible stream per trajectory regardless of how
    // trajectories are scheduled across threads.
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trajectory_index);
    rng
}

fn initial_state<R: Rng>(params: &LangevinParams, initial: InitialState, rng: &mut R) -> Result<(f64, f64)> {
    match initial {
        InitialState::Zero => Ok((0.0, 0.0)),
        InitialState::Fixed(th, td) => Ok((th, td)),
        InitialState::Stationary => {
            if params.amplitude_a == 0.0 {
                return Ok((0.0, 0.0));
            }
            if !params.has_stationary_state() {
                return Err(Error::Domain(
                    "stationary initial state undefined for gamma = 0 or omega_rot = 0".into(),
                ));
            }
            let sd_theta = (params.amplitude_a
                / (2.0 * params.gamma * params.omega_rot * params.omega_rot))
                .sqrt();
            let sd_theta_dot = (params.amplitude_a / (2.0 * params.gamma)).sqrt();
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            Ok((sd_theta * z1, sd_theta_dot * z2))
        }
    }
}

/// Simulate one trajectory. Deterministic in
/// (master_seed, trajectory_index, grid, params).
pub fn simulate(params: &LangevinParams, grid: &SimulationGrid, trajectory_index: u64) -> Result<NoiseTrajectory> {
    // Resolution guard: the recorded series must resolve the oscillation.
    if params.omega_rot * grid.dt >= 0.1 {
        return Err(Error::Config(format!(
            "dt = {} too coarse for omega_rot = {} (need dt*omega < 0.1)",
            grid.dt, params.omega_rot
        )));
    }
    let mut rng = rng_for(grid.master_seed, trajectory_index);
    let mut state = initial_state(params, grid.initial, &mut rng)?;

    let n = grid.n_steps;
    let mut theta = Vec::with_capacity(n);
    let mut theta_dot = Vec::with_capacity(n);

    match grid.integrator {
        Integrator::ExactGaussian => {
            let prop = StepPropagator::new(params, grid.dt);
            for _ in 0..grid.burn_in_steps {
                state = prop.step(state, &mut rng);
            }
            theta.push(state.0);
            theta_dot.push(state.1);
            for _ in 1..n {
                state = prop.step(state, &mut rng);
                theta.push(state.0);
                theta_dot.push(state.1);
            }
        }
        Integrator::EulerMaruyama => {
            for _ in 0..grid.burn_in_steps {
                state = euler_maruyama_step(params, grid.dt, state, &mut rng);
            }
            theta.push(state.0);
            theta_dot.push(state.1);
            for _ in 1..n {
                state = euler_maruyama_step(params, grid.dt, state, &mut rng);
                theta.push(state.0);
                theta_dot.push(state.1);
            }
        }
    }

    let times = (0..n).map(|i| i as f64 * grid.dt).collect();
    Ok(NoiseTrajectory {
        times,
        theta,
        theta_dot,
        params: *params,
        seed: grid.master_seed,
        trajectory_index,
    })
}

/// Simulate `n_trajectories` independent realizations. The result is
/// bitwise independent of execution order and thread count.
pub fn ensemble(
    params: &LangevinParams,
    grid: &SimulationGrid,
    n_trajectories: usize,
    exec: Execution,
) -> Result<Vec<NoiseTrajectory>> {
    if n_trajectories == 0 {
        return Err(Error::Config("n_trajectories must be at least 1".into()));
    }
    map_indexed(exec, n_trajectories, |k| simulate(params, grid, k as u64))
        .into_iter()
        .collect()
}

/// Stationary second moments of (theta, theta_dot), tagged by convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryMoments {
    pub var_theta: f64,
    pub var_theta_dot: f64,
    pub convention: Convention,
}

/// Analytic stationary moments.
///
/// * [`Convention::Calibrated`]: the actual process variances
///   A/(2 gamma Omega^2) and A/(2 gamma); these are what ensemble
///   statistics of [`simulate`] converge to.
/// * [`Convention::PaperLiteral`]: the raw integrals of the angle and
///   velocity spectra over the full line, pi A/(gamma Omega^2) and
///   pi A/gamma, i.e. 2 pi times the calibrated values. See
///   [`crate::spectra`] for the convention semantics.
pub fn stationary_moments(params: &LangevinParams, convention: Convention) -> Result<StationaryMoments> {
    if !params.has_stationary_state() {
        return Err(Error::Domain(
            "no stationary state: gamma and omega_rot must both be positive".into(),
        ));
    }
    let (omega, gamma, a) = (params.omega_rot, params.gamma, params.amplitude_a);
    let (var_theta, var_theta_dot) = match convention {
        Convention::Calibrated => (a / (2.0 * gamma * omega * omega), a / (2.0 * gamma)),
        Convention::PaperLiteral => {
            (std::f64::consts::PI * a / (gamma * omega * omega), std::f64::consts::PI * a / gamma)
        }
    };
    Ok(StationaryMoments { var_theta, var_theta_dot, convention })
}
