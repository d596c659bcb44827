//! Physical constants used across the crate (SI units).

/// Boltzmann constant [J/K], exact by SI definition.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Reduced Planck constant [J·s].
pub const HBAR: f64 = 1.054_571_817e-34;

/// Bohr magneton [J/T], rounded to the precision used by the
/// interferometer defaults.
pub const BOHR_MAGNETON: f64 = 9.27e-24;

/// Mass of an N₂ molecule [kg], the default residual-gas species.
pub const N2_MOLECULE_MASS: f64 = 4.65e-26;

/// Landé g-factor of the interferometric spin state.
pub const LANDE_G: f64 = 2.0;
