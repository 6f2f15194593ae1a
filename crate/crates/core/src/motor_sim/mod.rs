//! Hybrid stepper motor under cascaded field-oriented control.

mod control;
mod dq;
mod params;
mod plant;
mod simulate;
mod trace;

pub use control::{current_control_step, CurrentControlState};
pub use dq::{dq_transform, inverse_dq_transform};
pub use params::{ControllerGains, MotorParams, ParasiticParams, RippleTerm};
pub use plant::{driving_torque, hsm_derivative, parasitic_torque, rk4_step, MotorState};
pub use simulate::{closed_loop_simulate, SimOptions};
pub use trace::{format_f64, SimTrace, TraceSample, TRACE_HEADER};
