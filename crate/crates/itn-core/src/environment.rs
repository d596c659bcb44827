//! Residual-gas thermal model: free-molecular damping of the box rotation
//! and the matching fluctuation amplitude from the fluctuation-dissipation
//! theorem.

use serde::Serialize;

use crate::constants::{BOLTZMANN, N2_MOLECULE_MASS};
use crate::error::{Error, Result};

/// Ambient gas around the experiment box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasEnvironment {
    /// Gas pressure [Pa].
    pub pressure: f64,
    /// Gas temperature [K].
    pub temperature: f64,
    /// Mass of one gas molecule [kg].
    pub molecule_mass: f64,
}

impl GasEnvironment {
    pub fn new(pressure: f64, temperature: f64, molecule_mass: f64) -> Result<Self> {
        if !(pressure > 0.0 && temperature > 0.0 && molecule_mass > 0.0) {
            return Err(Error::Domain(format!(
                "gas environment fields must be positive (P={pressure}, T={temperature}, m={molecule_mass})"
            )));
        }
        Ok(Self { pressure, temperature, molecule_mass })
    }

    /// N2 at the given pressure and 300 K.
    pub fn nitrogen(pressure: f64) -> Result<Self> {
        Self::new(pressure, 300.0, N2_MOLECULE_MASS)
    }
}

/// Langevin parameters derived from a thermal environment.
///
/// `amplitude_a == 2 * gamma_rot * k_B * T / I` holds exactly by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalLangevinParams {
    /// Gas damping rate [1/s].
    pub gamma_rot: f64,
    /// Noise amplitude A [1/s^3].
    pub amplitude_a: f64,
    /// Intrinsic torsion frequency [rad/s].
    pub omega_rot: f64,
    /// Moment of inertia [kg m^2].
    pub moment_of_inertia: f64,
}

/// Free-molecular rotational damping rate of a cube of side `box_side`:
///
/// gamma = (L^4 / I) (1 + pi/12) P sqrt(2 m_gas / (pi k_B T))
pub fn gas_damping(env: &GasEnvironment, box_side: f64, inertia: f64) -> Result<f64> {
    if !(box_side > 0.0 && inertia > 0.0) {
        return Err(Error::Domain(format!(
            "box side and inertia must be positive (L={box_side}, I={inertia})"
        )));
    }
    let factor = box_side.powi(4) / inertia * (1.0 + std::f64::consts::PI / 12.0);
    let speed = (2.0 * env.molecule_mass / (std::f64::consts::PI * BOLTZMANN * env.temperature)).sqrt();
    Ok(factor * env.pressure * speed)
}

/// Fluctuation-dissipation amplitude: A = 2 gamma k_B T / I.
pub fn thermal_amplitude(gamma: f64, temperature: f64, inertia: f64) -> Result<f64> {
    if !(gamma > 0.0 && temperature >= 0.0 && inertia > 0.0) {
        return Err(Error::Domain(format!(
            "thermal amplitude inputs out of domain (gamma={gamma}, T={temperature}, I={inertia})"
        )));
    }
    Ok(2.0 * gamma * BOLTZMANN * temperature / inertia)
}

/// Order-of-magnitude shortcut gamma[Hz] ~ 1e-4 * P[Pa]; bundles the
/// geometry- and gas-dependent prefactor of [`gas_damping`] into a single
/// round constant. Estimation only, never used in quantitative paths.
pub fn pressure_rule_of_thumb(pressure: f64) -> f64 {
    1e-4 * pressure.max(0.0)
}

/// Full thermal chain: gas state + oscillator -> Langevin parameters.
pub fn thermal_params(
    env: &GasEnvironment,
    box_side: f64,
    inertia: f64,
    omega_rot: f64,
) -> Result<ThermalLangevinParams> {
    let gamma_rot = gas_damping(env, box_side, inertia)?;
    let amplitude_a = thermal_amplitude(gamma_rot, env.temperature, inertia)?;
    Ok(ThermalLangevinParams { gamma_rot, amplitude_a, omega_rot, moment_of_inertia: inertia })
}
