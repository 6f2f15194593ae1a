use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One sinusoidal torque-ripple component, `amplitude * sin(harmonic * y + phase)`.
///
/// `harmonic` counts cycles per mechanical revolution, so every component is
/// 2π-periodic in the rotor angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RippleTerm {
    pub harmonic: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Parasitic torques acting on the rotor in addition to viscous friction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParasiticParams {
    /// Coulomb friction level in N·m.
    pub coulomb_level: f64,
    /// Velocity scale (rad/s) of the tanh that smooths the Coulomb sign.
    pub coulomb_smoothing: f64,
    #[serde(default)]
    pub ripple: Vec<RippleTerm>,
}

impl ParasiticParams {
    pub fn none() -> Self {
        ParasiticParams {
            coulomb_level: 0.0,
            coulomb_smoothing: 1.0,
            ripple: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        nonneg("parasitic.coulomb_level", self.coulomb_level)?;
        positive("parasitic.coulomb_smoothing", self.coulomb_smoothing)?;
        for (i, r) in self.ripple.iter().enumerate() {
            nonneg(&format!("parasitic.ripple[{i}].amplitude"), r.amplitude)?;
            if !r.phase.is_finite() {
                return Err(Error::invalid(
                    format!("parasitic.ripple[{i}].phase"),
                    "must be finite",
                ));
            }
        }
        Ok(())
    }
}

impl Default for ParasiticParams {
    fn default() -> Self {
        ParasiticParams {
            coulomb_level: 0.03,
            coulomb_smoothing: 0.2,
            ripple: vec![
                RippleTerm {
                    harmonic: 1,
                    amplitude: 0.02,
                    phase: 2.0,
                },
                RippleTerm {
                    harmonic: 2,
                    amplitude: 0.01,
                    phase: 0.8,
                },
            ],
        }
    }
}

/// Physical constants of the hybrid stepper motor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MotorParams {
    /// Rotor plus load inertia J, kg·m².
    pub inertia: f64,
    /// Viscous friction f_v, N·m·s/rad.
    pub viscous_friction: f64,
    /// Motor constant k_m, N·m/A.
    pub motor_constant: f64,
    /// Number of rotor teeth N.
    pub rotor_teeth: u32,
    /// Coil inductance L, H.
    pub inductance: f64,
    /// Coil resistance R, Ω.
    pub resistance: f64,
    pub parasitic: ParasiticParams,
}

impl MotorParams {
    /// Default constants with parasitic torques switched off.
    pub fn ideal() -> Self {
        MotorParams {
            parasitic: ParasiticParams::none(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("motor.inertia", self.inertia)?;
        positive("motor.viscous_friction", self.viscous_friction)?;
        positive("motor.motor_constant", self.motor_constant)?;
        positive("motor.inductance", self.inductance)?;
        positive("motor.resistance", self.resistance)?;
        if self.rotor_teeth == 0 {
            return Err(Error::invalid("motor.rotor_teeth", "must be at least 1"));
        }
        self.parasitic.validate()
    }
}

impl Default for MotorParams {
    fn default() -> Self {
        MotorParams {
            inertia: 5.7e-5,
            viscous_friction: 1.0e-2,
            motor_constant: 0.1,
            rotor_teeth: 50,
            inductance: 1.5e-3,
            resistance: 0.55,
            parasitic: ParasiticParams::default(),
        }
    }
}

/// Discrete-time controller gains of the cascaded loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControllerGains {
    /// Controller sample time T_s, s.
    pub sample_time: f64,
    pub current_kp: f64,
    pub current_ki: f64,
    /// Proportional position feedback gain, N·m/rad.
    pub position_kp: f64,
}

impl ControllerGains {
    pub fn validate(&self) -> Result<()> {
        positive("gains.sample_time", self.sample_time)?;
        for (key, v) in [
            ("gains.current_kp", self.current_kp),
            ("gains.current_ki", self.current_ki),
            ("gains.position_kp", self.position_kp),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(key, "must be finite"));
            }
        }
        Ok(())
    }
}

impl Default for ControllerGains {
    fn default() -> Self {
        ControllerGains {
            sample_time: 1e-4,
            current_kp: 6.6,
            current_ki: 4.0e4,
            position_kp: 5.0,
        }
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be strictly positive, got {v}")))
    }
}

fn nonneg(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be non-negative, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        MotorParams::default().validate().unwrap();
        MotorParams::ideal().validate().unwrap();
        ControllerGains::default().validate().unwrap();
    }

    #[test]
    fn nonpositive_inertia_names_the_key() {
        let p = MotorParams {
            inertia: 0.0,
            ..MotorParams::default()
        };
        let msg = p.validate().unwrap_err().to_string();
        assert!(msg.contains("inertia"), "{msg}");
    }

    #[test]
    fn zero_teeth_rejected() {
        let p = MotorParams {
            rotor_teeth: 0,
            ..MotorParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn negative_ripple_amplitude_rejected() {
        let mut p = ParasiticParams::default();
        p.ripple[0].amplitude = -1.0;
        assert!(p.validate().is_err());
    }
}
