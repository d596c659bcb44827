//! Dephasing of a suspended-box matter-wave interferometer driven by
//! inertial torsion noise.
//!
//! The experiment box hangs from a torsion wire and is rattled by random
//! torques; the box angle `Θ(t)` follows a damped, noise-driven oscillator.
//! A Stern-Gerlach interferometer inside the box picks up a random phase
//! quadratic in the angular velocity, and the ensemble average of that
//! phase damps interferometric visibility by `exp(-Γ)`.
//!
//! The crate computes `Γ` two independent ways and cross-checks them:
//!
//! * spectrally, as a frequency integral of the torsion-noise power
//!   spectrum against the interferometer transfer function
//!   ([`dephasing::gamma_spectral`]);
//! * by time-domain Monte Carlo over simulated box trajectories
//!   ([`dephasing::gamma_montecarlo`]).
//!
//! Supporting modules map hardware parameters to oscillator parameters
//! ([`pendulum`], [`environment`]), simulate the Langevin dynamics with an
//! exact one-step propagator ([`langevin`]), and provide analytic and
//! estimated power spectral densities with explicit normalization tags
//! ([`spectra`]). [`sweeps`] scans parameter space and extracts
//! threshold contours.
//!
//! With the default `parallel` feature, ensembles and sweeps fan out over
//! a rayon pool; results are bit-identical to the sequential fallback.

pub mod constants;
pub mod dephasing;
pub mod environment;
pub mod error;
pub mod exec;
pub mod interferometer;
pub mod langevin;
pub mod math;
pub mod pendulum;
pub mod spectra;
pub mod sweeps;

pub use error::{Error, Result};
pub use exec::Execution;
pub use spectra::{Convention, Sidedness, Spectrum};
