use super::params::{MotorParams, ParasiticParams};

/// Continuous-time plant state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotorState {
    /// Rotor angle, rad.
    pub y: f64,
    /// Rotor velocity, rad/s.
    pub omega: f64,
    pub i_a: f64,
    pub i_b: f64,
}

impl MotorState {
    pub fn at_rest(y: f64) -> Self {
        MotorState {
            y,
            ..Default::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.y.is_finite() && self.omega.is_finite() && self.i_a.is_finite() && self.i_b.is_finite()
    }

    fn axpy(&self, h: f64, d: &MotorState) -> MotorState {
        MotorState {
            y: self.y + h * d.y,
            omega: self.omega + h * d.omega,
            i_a: self.i_a + h * d.i_a,
            i_b: self.i_b + h * d.i_b,
        }
    }
}

/// Parasitic torque on the rotor: smoothed Coulomb friction opposing motion
/// plus position-periodic ripple.
pub fn parasitic_torque(y: f64, omega: f64, p: &ParasiticParams) -> f64 {
    let coulomb = -p.coulomb_level * (omega / p.coulomb_smoothing).tanh();
    let ripple: f64 = p
        .ripple
        .iter()
        .map(|r| r.amplitude * (f64::from(r.harmonic) * y + r.phase).sin())
        .sum();
    coulomb + ripple
}

/// Electromagnetic driving torque produced by the coil currents.
#[inline]
pub fn driving_torque(y: f64, i_a: f64, i_b: f64, params: &MotorParams) -> f64 {
    let (s, c) = (f64::from(params.rotor_teeth) * y).sin_cos();
    params.motor_constant * (-i_a * s + i_b * c)
}

/// Time derivative of the plant state for coil voltages `v_a`, `v_b`.
pub fn hsm_derivative(s: &MotorState, v_a: f64, v_b: f64, params: &MotorParams) -> MotorState {
    let (sin, cos) = (f64::from(params.rotor_teeth) * s.y).sin_cos();
    let k_m = params.motor_constant;
    let torque = k_m * (-s.i_a * sin + s.i_b * cos);
    let load = parasitic_torque(s.y, s.omega, &params.parasitic);
    MotorState {
        y: s.omega,
        omega: (torque + load - params.viscous_friction * s.omega) / params.inertia,
        i_a: (v_a - params.resistance * s.i_a + k_m * s.omega * sin) / params.inductance,
        i_b: (v_b - params.resistance * s.i_b - k_m * s.omega * cos) / params.inductance,
    }
}

/// One classical fourth-order Runge–Kutta step with the voltages held
/// constant over `dt`.
pub fn rk4_step(s: &MotorState, v_a: f64, v_b: f64, dt: f64, params: &MotorParams) -> MotorState {
    let k1 = hsm_derivative(s, v_a, v_b, params);
    let k2 = hsm_derivative(&s.axpy(0.5 * dt, &k1), v_a, v_b, params);
    let k3 = hsm_derivative(&s.axpy(0.5 * dt, &k2), v_a, v_b, params);
    let k4 = hsm_derivative(&s.axpy(dt, &k3), v_a, v_b, params);
    let w = dt / 6.0;
    MotorState {
        y: s.y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        omega: s.omega + w * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega),
        i_a: s.i_a + w * (k1.i_a + 2.0 * k2.i_a + 2.0 * k3.i_a + k4.i_a),
        i_b: s.i_b + w * (k1.i_b + 2.0 * k2.i_b + 2.0 * k3.i_b + k4.i_b),
    }
}
