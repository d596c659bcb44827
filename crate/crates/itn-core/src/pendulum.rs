//! Torsion-pendulum parameters of the suspended experiment box: maps wire
//! and box geometry to the effective oscillator (I, kappa, Omega_rot).

use serde::Serialize;

use crate::error::{Error, Result};

/// Suspension wire geometry and material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuspensionWire {
    /// Wire diameter [m].
    pub diameter: f64,
    /// Wire length [m].
    pub length: f64,
    /// Shear modulus of the wire material [Pa].
    pub shear_modulus: f64,
}

impl SuspensionWire {
    pub fn new(diameter: f64, length: f64, shear_modulus: f64) -> Result<Self> {
        if !(diameter > 0.0 && length > 0.0 && shear_modulus > 0.0) {
            return Err(Error::Domain(format!(
                "suspension wire fields must be positive (d={diameter}, l={length}, G={shear_modulus})"
            )));
        }
        Ok(Self { diameter, length, shear_modulus })
    }

    /// The thin-wire torsion formula assumes diameter << length; true when
    /// the wire is too stubby for it to be trustworthy.
    pub fn is_stubby(&self) -> bool {
        self.diameter > self.length / 10.0
    }
}

/// Suspended experiment box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentBox {
    /// Cube side [m].
    pub side_length: f64,
    /// Box mass [kg].
    pub mass: f64,
    /// Moment of inertia about the wire axis [kg m^2].
    pub moment_of_inertia: f64,
}

impl ExperimentBox {
    /// Uniform cube rotating about a central axis: I = M L^2 / 6.
    pub fn cube(mass: f64, side_length: f64) -> Result<Self> {
        let moment_of_inertia = box_inertia(mass, side_length)?;
        Ok(Self { side_length, mass, moment_of_inertia })
    }

    /// Box with an explicitly supplied moment of inertia.
    pub fn with_inertia(mass: f64, side_length: f64, moment_of_inertia: f64) -> Result<Self> {
        if !(mass > 0.0) || !(moment_of_inertia > 0.0) || side_length < 0.0 {
            return Err(Error::Domain(format!(
                "box fields out of domain (M={mass}, L={side_length}, I={moment_of_inertia})"
            )));
        }
        Ok(Self { side_length, mass, moment_of_inertia })
    }
}

/// Effective torsion oscillator of the suspension.
///
/// `omega_rot = sqrt(torsion_constant / moment_of_inertia)` holds exactly
/// by construction; `torsion_constant` is carried through unmodified from
/// [`torsion_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionOscillator {
    /// Intrinsic angular frequency [rad/s].
    pub omega_rot: f64,
    /// Torsion spring constant [N m/rad].
    pub torsion_constant: f64,
    /// Moment of inertia [kg m^2].
    pub moment_of_inertia: f64,
}

/// Torsion constant of a cylindrical wire: kappa = pi G d^4 / (32 l).
///
/// The radical in some write-ups of this formula belongs over kappa/I,
/// not over kappa itself; the worked value Omega_rot ~ 0.735 rad/s for
/// steel (d = 5 mm, l = 5 m, I = 1.8 kg m^2) pins the convention used here.
pub fn torsion_constant(wire: &SuspensionWire) -> f64 {
    std::f64::consts::PI * wire.shear_modulus * wire.diameter.powi(4) / (32.0 * wire.length)
}

/// Moment of inertia of a uniform cube about its central axis: M L^2 / 6.
///
/// A zero side length is accepted (degenerate point mass, I = 0) so that
/// limiting-case scans do not error; callers can flag it with
/// [`is_degenerate_box`].
pub fn box_inertia(mass: f64, side: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("box mass must be positive, got {mass}")));
    }
    if side < 0.0 || !side.is_finite() {
        return Err(Error::Domain(format!("box side must be non-negative, got {side}")));
    }
    Ok(mass * side * side / 6.0)
}

/// Degenerate zero-size geometry, worth a warning at config time.
pub fn is_degenerate_box(side: f64) -> bool {
    side == 0.0
}

/// Combine wire and inertia into the effective oscillator:
/// Omega_rot = sqrt(pi G d^4 / (32 l I)).
pub fn intrinsic_frequency(wire: &SuspensionWire, moment_of_inertia: f64) -> Result<TorsionOscillator> {
    if !(moment_of_inertia > 0.0) {
        return Err(Error::Domain(format!(
            "moment of inertia must be positive, got {moment_of_inertia}"
        )));
    }
    let kappa = torsion_constant(wire);
    Ok(TorsionOscillator {
        omega_rot: (kappa / moment_of_inertia).sqrt(),
        torsion_constant: kappa,
        moment_of_inertia,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn steel_wire() -> SuspensionWire {
        SuspensionWire::new(5e-3, 5.0, 7.93e10).unwrap()
    }

    #[test]
    fn torsion_constant_worked_example() {
        // pi * 7.93e10 * (5e-3)^4 / (32 * 5)
        let kappa = torsion_constant(&steel_wire());
        assert_relative_eq!(kappa, 0.9732, max_relative = 1e-3);
    }

    #[test]
    fn torsion_constant_scaling() {
        let base = torsion_constant(&steel_wire());
        let fat = torsion_constant(&SuspensionWire::new(1e-2, 5.0, 7.93e10).unwrap());
        assert_relative_eq!(fat / base, 16.0, max_relative = 1e-12);
        let long = torsion_constant(&SuspensionWire::new(5e-3, 10.0, 7.93e10).unwrap());
        assert_relative_eq!(long / base, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn box_inertia_worked_example() {
        assert_relative_eq!(box_inertia(30.0, 0.6).unwrap(), 1.8, max_relative = 1e-12);
        assert_relative_eq!(box_inertia(6.0, 1.0).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn box_inertia_degenerate_and_invalid() {
        let i = box_inertia(1.0, 0.0).unwrap();
        assert_eq!(i, 0.0);
        assert!(is_degenerate_box(0.0));
        assert!(!is_degenerate_box(0.6));
        assert!(box_inertia(-1.0, 0.5).is_err());
        assert!(box_inertia(1.0, -0.5).is_err());
        assert!(box_inertia(0.0, 0.5).is_err());
    }

    #[test]
    fn intrinsic_frequency_worked_example() {
        let osc = intrinsic_frequency(&steel_wire(), 1.8).unwrap();
        assert_relative_eq!(osc.omega_rot, 0.735, max_relative = 0.01);
    }

    #[test]
    fn intrinsic_frequency_definition_and_scaling() {
        // kappa == I numerically gives omega = 1 rad/s.
        let wire = steel_wire();
        let kappa = torsion_constant(&wire);
        let osc = intrinsic_frequency(&wire, kappa).unwrap();
        assert_relative_eq!(osc.omega_rot, 1.0, max_relative = 1e-12);

        let o1 = intrinsic_frequency(&wire, 1.8).unwrap().omega_rot;
        let o4 = intrinsic_frequency(&wire, 4.0 * 1.8).unwrap().omega_rot;
        assert_relative_eq!(o1 / o4, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn torsion_constant_round_trips_bit_for_bit() {
        let wire = steel_wire();
        let osc = intrinsic_frequency(&wire, 1.8).unwrap();
        assert_eq!(osc.torsion_constant.to_bits(), torsion_constant(&wire).to_bits());
        // omega^2 * I reproduces kappa and the defining identity holds exactly.
        assert_eq!(
            osc.omega_rot.to_bits(),
            (osc.torsion_constant / osc.moment_of_inertia).sqrt().to_bits()
        );
    }

    #[test]
    fn stubby_wire_flagged() {
        assert!(SuspensionWire::new(0.2, 1.0, 1e10).unwrap().is_stubby());
        assert!(!steel_wire().is_stubby());
    }

    #[test]
    fn non_positive_inputs_rejected() {
        assert!(SuspensionWire::new(0.0, 5.0, 7.93e10).is_err());
        assert!(SuspensionWire::new(5e-3, -1.0, 7.93e10).is_err());
        assert!(SuspensionWire::new(5e-3, 5.0, 0.0).is_err());
        assert!(intrinsic_frequency(&steel_wire(), 0.0).is_err());
    }

    proptest! {
        // Omega_rot strictly increases in d and G, strictly decreases in l and I.
        #[test]
        fn frequency_monotonicity(
            d in 1e-4f64..1e-1,
            l in 1e-1f64..1e2,
            g in 1e9f64..1e12,
            i in 1e-2f64..1e3,
            factor in 1.01f64..10.0,
        ) {
            let base = intrinsic_frequency(&SuspensionWire::new(d, l, g).unwrap(), i).unwrap().omega_rot;
            let dd = intrinsic_frequency(&SuspensionWire::new(d * factor, l, g).unwrap(), i).unwrap().omega_rot;
            let dg = intrinsic_frequency(&SuspensionWire::new(d, l, g * factor).unwrap(), i).unwrap().omega_rot;
            let dl = intrinsic_frequency(&SuspensionWire::new(d, l * factor, g).unwrap(), i).unwrap().omega_rot;
            let di = intrinsic_frequency(&SuspensionWire::new(d, l, g).unwrap(), i * factor).unwrap().omega_rot;
            prop_assert!(dd > base);
            prop_assert!(dg > base);
            prop_assert!(dl < base);
            prop_assert!(di < base);
        }

        // kappa / I carries units of s^-2: scaling inputs as pure numbers
        // must scale omega^2 consistently (dimensional consistency proxy).
        #[test]
        fn omega_squared_tracks_kappa_over_i(
            d in 1e-4f64..1e-1,
            l in 1e-1f64..1e2,
            g in 1e9f64..1e12,
            i in 1e-2f64..1e3,
        ) {
            let wire = SuspensionWire::new(d, l, g).unwrap();
            let osc = intrinsic_frequency(&wire, i).unwrap();
            let ratio = torsion_constant(&wire) / i;
            prop_assert!((osc.omega_rot * osc.omega_rot - ratio).abs() <= 1e-12 * ratio);
        }
    }
}
