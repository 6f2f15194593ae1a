use super::control::{current_control_step, CurrentControlState};
use super::dq::{dq_transform, inverse_dq_transform};
use super::params::{ControllerGains, MotorParams};
use super::plant::{rk4_step, MotorState};
use super::trace::{SimTrace, TraceSample};
use crate::error::{Error, Result};
use crate::feedforward::FeedforwardEvaluator;
use crate::trajectory::ReferenceProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    /// RK4 steps per controller period.
    pub substeps: usize,
    /// Initial plant state; `None` starts at rest on the first reference sample.
    pub initial: Option<MotorState>,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            substeps: 10,
            initial: None,
        }
    }
}

/// Runs the cascaded loop over the whole profile.
///
/// At each sample `k`: `u = u_fb + u_ff` with `u_fb = K_p (y*(k) − y(k))`,
/// `i_q* = u / k_m`, `i_d* = 0`; the dq current controller produces the
/// voltages, which are held while the plant is integrated to `k + 1`.
pub fn closed_loop_simulate(
    profile: &ReferenceProfile,
    mut ff: Option<&mut FeedforwardEvaluator<'_>>,
    params: &MotorParams,
    gains: &ControllerGains,
    opts: SimOptions,
) -> Result<SimTrace> {
    params.validate()?;
    gains.validate()?;
    if opts.substeps == 0 {
        return Err(Error::invalid("substeps", "must be at least 1"));
    }
    let ts = gains.sample_time;
    let dt = ts / opts.substeps as f64;
    let teeth = params.rotor_teeth;
    let mut state = opts.initial.unwrap_or_else(|| MotorState::at_rest(profile.at(0)));
    let mut ctrl = CurrentControlState::default();
    let n = profile.len();
    let mut trace = SimTrace::with_capacity(n);

    for k in 0..n {
        if !state.is_finite() {
            return Err(Error::NonFiniteState { sample: k });
        }
        let y_star = profile.at(k as isize);
        let u_ff = match ff.as_deref_mut() {
            Some(ev) => ev.ff_step(k)?,
            None => 0.0,
        };
        let u_fb = gains.position_kp * (y_star - state.y);
        let u = u_fb + u_ff;
        let i_q_star = u / params.motor_constant;

        let (i_d, i_q) = dq_transform(state.y, state.i_a, state.i_b, teeth);
        let (v_d, v_q, next_ctrl) = current_control_step(i_d, i_q, i_q_star, ctrl, gains);
        ctrl = next_ctrl;
        let (v_a, v_b) = inverse_dq_transform(state.y, v_d, v_q, teeth);

        trace.push(TraceSample {
            t: k as f64 * ts,
            y_star,
            y: state.y,
            u,
            u_ff,
            u_fb,
            i_d,
            i_q,
            i_a: state.i_a,
            i_b: state.i_b,
            v_d,
            v_q,
        });

        for _ in 0..opts.substeps {
            state = rk4_step(&state, v_a, v_b, dt, params);
        }
    }
    if !state.is_finite() {
        return Err(Error::NonFiniteState { sample: n });
    }
    Ok(trace)
}
