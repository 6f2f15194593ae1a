//! Simulation and identification of physics-guided neural network
//! feedforward for hybrid stepper motors.
//!
//! The pipeline: simulate the closed loop ([`motor_sim`]) on a jerk-limited
//! reference ([`trajectory`]), fit inverse models on the recorded data
//! ([`inverse_model`]), run them as feedforward ([`feedforward`]) and compare
//! tracking errors ([`experiments`]).

pub mod config;
pub mod error;
pub mod experiments;
pub mod feedforward;
pub mod inverse_model;
pub mod motor_sim;
pub mod trajectory;

pub use error::{Error, Result};
