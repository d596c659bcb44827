//! Run configuration: TOML with unit-suffixed keys, unknown keys rejected.
//!
//! Exactly one of `[environment]` (thermal gas chain, needs `[suspension]`)
//! or `[langevin]` (explicit oscillator parameters) must be present.

use serde::{Deserialize, Serialize};

use itn_core::constants::N2_MOLECULE_MASS;
use itn_core::environment::{gas_damping, thermal_amplitude, GasEnvironment};
use itn_core::interferometer::InterferometerGeometry;
use itn_core::langevin::LangevinParams;
use itn_core::pendulum::{box_inertia, intrinsic_frequency, is_degenerate_box, SuspensionWire};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub interferometer: InterferometerBlock,
    pub suspension: Option<SuspensionBlock>,
    pub environment: Option<EnvironmentBlock>,
    pub langevin: Option<LangevinBlock>,
    pub simulation: Option<SimulationBlock>,
    pub transfer: Option<TransferBlock>,
    pub dephasing: Option<DephasingBlock>,
    pub output: Option<OutputBlock>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerBlock {
    pub mass_kg: f64,
    pub eta_t_per_m: f64,
    pub t_a_s: f64,
    pub t_e_s: f64,
    pub lande_g: Option<f64>,
    pub bohr_magneton_j_per_t: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SuspensionBlock {
    pub wire_diameter_m: f64,
    pub wire_length_m: f64,
    pub shear_modulus_pa: f64,
    pub box_mass_kg: f64,
    pub box_side_m: f64,
    /// Direct moment of inertia; derived from the cube when absent.
    pub moment_of_inertia_kg_m2: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentBlock {
    pub pressure_pa: f64,
    pub temperature_k: f64,
    pub gas_molecule_mass_kg: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LangevinBlock {
    pub omega_rot_rad_per_s: f64,
    pub gamma_per_s: f64,
    pub amplitude_a_per_s3: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationBlock {
    pub dt_s: f64,
    pub duration_s: f64,
    pub n_trajectories: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_segment_length")]
    pub segment_length: usize,
    #[serde(default)]
    pub burn_in_steps: usize,
}

fn default_segment_length() -> usize {
    1024
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TransferBlock {
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    #[serde(default = "default_points_per_decade")]
    pub points_per_decade: usize,
}

fn default_points_per_decade() -> usize {
    60
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DephasingBlock {
    /// Cutoff time for omega_min = 2 pi / T; defaults to the loop time.
    pub total_time_s: Option<f64>,
    /// "qgem" or "gravimeter".
    pub application: Option<String>,
    pub custom_threshold: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub directory: Option<String>,
}

/// Everything derived from a valid config, units resolved.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub geometry: InterferometerGeometry,
    pub params: LangevinParams,
    pub acceleration_m_per_s2: f64,
    pub delta_x_m: f64,
    pub loop_time_s: f64,
    pub cutoff_time_s: f64,
    pub moment_of_inertia_kg_m2: Option<f64>,
    pub gas_damping_per_s: Option<f64>,
    pub warnings: Vec<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| err(e.to_string()))
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let ib = &self.interferometer;
        let mut geometry = InterferometerGeometry::new(ib.mass_kg, ib.eta_t_per_m, ib.t_a_s, ib.t_e_s)
            .map_err(|e| err(format!("[interferometer]: {e}")))?;
        if let Some(g) = ib.lande_g {
            geometry.lande_g = g;
        }
        if let Some(mu) = ib.bohr_magneton_j_per_t {
            geometry.bohr_magneton = mu;
        }

        let mut warnings = Vec::new();
        let suspension = match &self.suspension {
            Some(sb) => {
                let wire = SuspensionWire::new(sb.wire_diameter_m, sb.wire_length_m, sb.shear_modulus_pa)
                    .map_err(|e| err(format!("[suspension]: {e}")))?;
                if wire.is_stubby() {
                    warnings.push(format!(
                        "[suspension]: wire diameter {} exceeds length/10; thin-wire formula is unreliable",
                        sb.wire_diameter_m
                    ));
                }
                if is_degenerate_box(sb.box_side_m) {
                    warnings.push("[suspension]: zero box side, degenerate geometry".into());
                }
                let inertia = match sb.moment_of_inertia_kg_m2 {
                    Some(i) => i,
                    None => box_inertia(sb.box_mass_kg, sb.box_side_m)
                        .map_err(|e| err(format!("[suspension]: {e}")))?,
                };
                let osc = intrinsic_frequency(&wire, inertia)
                    .map_err(|e| err(format!("[suspension]: {e}")))?;
                Some((osc, sb.box_side_m, inertia))
            }
            None => None,
        };

        let (params, inertia_out, gas_gamma) = match (&self.environment, &self.langevin) {
            (Some(_), Some(_)) => {
                return Err(err(
                    "[environment] and [langevin] are mutually exclusive; keep exactly one",
                ));
            }
            (None, None) => {
                return Err(err("one of [environment] or [langevin] is required"));
            }
            (None, Some(lb)) => {
                let params =
                    LangevinParams::new(lb.omega_rot_rad_per_s, lb.gamma_per_s, lb.amplitude_a_per_s3)
                        .map_err(|e| err(format!("[langevin]: {e}")))?;
                (params, suspension.as_ref().map(|s| s.2), None)
            }
            (Some(eb), None) => {
                let (osc, side, inertia) = suspension.as_ref().ok_or_else(|| {
                    err("[environment] needs [suspension] to derive the oscillator")
                })?;
                let gas = GasEnvironment::new(
                    eb.pressure_pa,
                    eb.temperature_k,
                    eb.gas_molecule_mass_kg.unwrap_or(N2_MOLECULE_MASS),
                )
                .map_err(|e| err(format!("[environment]: {e}")))?;
                let gamma = gas_damping(&gas, *side, *inertia)
                    .map_err(|e| err(format!("[environment]: {e}")))?;
                let amplitude = thermal_amplitude(gamma, gas.temperature, *inertia)
                    .map_err(|e| err(format!("[environment]: {e}")))?;
                let params = LangevinParams::new(osc.omega_rot, gamma, amplitude)
                    .map_err(|e| err(format!("[environment]: {e}")))?;
                (params, Some(*inertia), Some(gamma))
            }
        };

        let cutoff_time_s = self
            .dephasing
            .as_ref()
            .and_then(|d| d.total_time_s)
            .unwrap_or_else(|| geometry.total_time());
        if !(cutoff_time_s > 0.0) {
            return Err(err("[dephasing].total_time_s must be positive"));
        }

        Ok(Resolved {
            geometry,
            params,
            acceleration_m_per_s2: geometry.acceleration(),
            delta_x_m: geometry.delta_x(),
            loop_time_s: geometry.total_time(),
            cutoff_time_s,
            moment_of_inertia_kg_m2: inertia_out,
            gas_damping_per_s: gas_gamma,
            warnings,
        })
    }

    pub fn simulation(&self) -> Result<&SimulationBlock, ConfigError> {
        self.simulation
            .as_ref()
            .ok_or_else(|| err("[simulation] block is required for this command"))
    }
}

/// Sweep description, a separate TOML file.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    /// gamma_vs_omega | gamma_vs_damping | gamma_grid | amplitude_bound
    pub kind: String,
    #[serde(default)]
    pub thermal: bool,
    pub threshold: Option<f64>,
    pub axis: AxisBlock,
    pub axis2: Option<AxisBlock>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AxisBlock {
    /// log | linear
    pub scale: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisBlock {
    pub fn to_axis(&self) -> Result<itn_core::sweeps::AxisSpec, ConfigError> {
        let scale = match self.scale.as_str() {
            "log" => itn_core::sweeps::GridScale::Log,
            "linear" => itn_core::sweeps::GridScale::Linear,
            other => return Err(err(format!("axis.scale must be log or linear, got {other}"))),
        };
        Ok(itn_core::sweeps::AxisSpec { scale, min: self.min, max: self.max, count: self.count })
    }
}

impl SweepFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| err(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[interferometer]
mass_kg = 1e-15
eta_t_per_m = 1e4
t_a_s = 0.25
t_e_s = 0.0

[langevin]
omega_rot_rad_per_s = 6.283185307179586
gamma_per_s = 1e-2
amplitude_a_per_s3 = 1e-10
"#;

    #[test]
    fn minimal_config_resolves() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        let r = cfg.resolve().unwrap();
        assert!((r.delta_x_m - 1.158750e-5).abs() < 1e-12);
        assert_eq!(r.loop_time_s, 1.0);
        assert_eq!(r.cutoff_time_s, 1.0);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected_with_the_key_name() {
        let bad = MINIMAL.replace("t_a_s", "t_a_sec");
        let e = RunConfig::parse(&bad).unwrap_err();
        assert!(e.to_string().contains("t_a_sec"), "{e}");
    }

    #[test]
    fn environment_and_langevin_are_exclusive() {
        let both = format!(
            "{MINIMAL}\n[environment]\npressure_pa = 1e2\ntemperature_k = 300.0\n"
        );
        let cfg = RunConfig::parse(&both).unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn environment_chain_needs_suspension() {
        let env_only = r#"
[interferometer]
mass_kg = 1e-15
eta_t_per_m = 1e4
t_a_s = 0.25
t_e_s = 0.0

[environment]
pressure_pa = 1e2
temperature_k = 300.0
"#;
        let cfg = RunConfig::parse(env_only).unwrap();
        assert!(cfg.resolve().is_err());
    }

    #[test]
    fn gas_chain_resolves_to_thermal_parameters() {
        let full = r#"
[interferometer]
mass_kg = 1e-15
eta_t_per_m = 1e4
t_a_s = 0.25
t_e_s = 0.0

[suspension]
wire_diameter_m = 5e-3
wire_length_m = 5.0
shear_modulus_pa = 7.93e10
box_mass_kg = 30.0
box_side_m = 0.6

[environment]
pressure_pa = 1e2
temperature_k = 300.0
"#;
        let cfg = RunConfig::parse(full).unwrap();
        let r = cfg.resolve().unwrap();
        assert!((r.params.omega_rot - 0.735).abs() / 0.735 < 0.01);
        let gamma = r.params.gamma;
        assert!((1e-3..1e-1).contains(&gamma), "gamma {gamma}");
        // fluctuation-dissipation tie-in
        let want_a = 2.0 * gamma * itn_core::constants::BOLTZMANN * 300.0 / 1.8;
        assert!((r.params.amplitude_a - want_a).abs() < 1e-9 * want_a);
    }

    #[test]
    fn manifest_round_trip_of_resolved_parameters() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        let r = cfg.resolve().unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["params"]["gamma"], serde_json::json!(1e-2));
        assert_eq!(back["loop_time_s"], serde_json::json!(1.0));
    }
}
