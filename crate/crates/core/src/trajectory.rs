//! Jerk-limited (third-order) point-to-point references.
//!
//! A move between two rest positions uses the seven-segment double-S
//! profile: jerk ramps acceleration up, holds it, ramps it down, cruises,
//! and mirrors the same pattern while braking. Segments collapse when the
//! move is too short to reach the acceleration or velocity limit.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lookahead that generated profiles guarantee by default, in samples.
pub const DEFAULT_MAX_LOOKAHEAD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MotionLimits {
    pub v_max: f64,
    pub a_max: f64,
    pub j_max: f64,
}

impl MotionLimits {
    pub fn new(v_max: f64, a_max: f64, j_max: f64) -> Result<Self> {
        let l = MotionLimits { v_max, a_max, j_max };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("v_max", self.v_max), ("a_max", self.a_max), ("j_max", self.j_max)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidLimits(format!("{name} must be strictly positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for MotionLimits {
    fn default() -> Self {
        MotionLimits {
            v_max: 15.0,
            a_max: 80.0,
            j_max: 1000.0,
        }
    }
}

/// Continuous-time seven-segment move from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdOrderMove {
    start: f64,
    end: f64,
    distance: f64,
    direction: f64,
    jerk: f64,
    /// duration of each jerk ramp
    t_jerk: f64,
    /// duration of the whole acceleration phase
    t_accel: f64,
    /// cruise duration
    t_cruise: f64,
    a_peak: f64,
    v_peak: f64,
}

impl ThirdOrderMove {
    pub fn new(start: f64, end: f64, limits: &MotionLimits) -> Result<Self> {
        limits.validate()?;
        if !(start.is_finite() && end.is_finite()) {
            return Err(Error::InvalidLimits("move endpoints must be finite".into()));
        }
        let d = (end - start).abs();
        let MotionLimits { v_max: v, a_max: a, j_max: j } = *limits;

        let (mut tj, mut ta) = if v * j >= a * a {
            (a / j, a / j + v / a)
        } else {
            let tj = (v / j).sqrt();
            (tj, 2.0 * tj)
        };
        let mut tv = if d > 0.0 { d / v - ta } else { 0.0 };
        if d == 0.0 {
            tj = 0.0;
            ta = 0.0;
        } else if tv < 0.0 {
            // velocity limit not reached
            tv = 0.0;
            tj = a / j;
            ta = (a * a / j + (a.powi(4) / (j * j) + 4.0 * d * a).sqrt()) / (2.0 * a);
            if ta < 2.0 * tj {
                // acceleration limit not reached either
                tj = (d / (2.0 * j)).cbrt();
                ta = 2.0 * tj;
            }
        }
        let a_peak = (j * tj).min(a);
        let v_peak = a_peak * (ta - tj);
        Ok(ThirdOrderMove {
            start,
            end,
            distance: d,
            direction: if end >= start { 1.0 } else { -1.0 },
            jerk: j,
            t_jerk: tj,
            t_accel: ta,
            t_cruise: tv,
            a_peak,
            v_peak,
        })
    }

    pub fn duration(&self) -> f64 {
        2.0 * self.t_accel + self.t_cruise
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn peak_velocity(&self) -> f64 {
        self.v_peak
    }

    pub fn peak_acceleration(&self) -> f64 {
        self.a_peak
    }

    /// Displacement, velocity and acceleration magnitudes of the first half
    /// (acceleration + half the cruise), `t` measured from the start.
    fn first_half(&self, t: f64) -> (f64, f64, f64) {
        let (j, tj, ta, a) = (self.jerk, self.t_jerk, self.t_accel, self.a_peak);
        let t_hold = ta - 2.0 * tj;
        if t <= tj {
            return (j * t * t * t / 6.0, 0.5 * j * t * t, j * t);
        }
        let s1 = j * tj * tj * tj / 6.0;
        let v1 = 0.5 * j * tj * tj;
        if t <= tj + t_hold {
            let t1 = t - tj;
            return (s1 + v1 * t1 + 0.5 * a * t1 * t1, v1 + a * t1, a);
        }
        let s2 = s1 + v1 * t_hold + 0.5 * a * t_hold * t_hold;
        let v2 = v1 + a * t_hold;
        if t <= ta {
            let t3 = t - tj - t_hold;
            return (
                s2 + v2 * t3 + 0.5 * a * t3 * t3 - j * t3 * t3 * t3 / 6.0,
                v2 + a * t3 - 0.5 * j * t3 * t3,
                a - j * t3,
            );
        }
        let s3 = 0.5 * self.v_peak * ta;
        (s3 + self.v_peak * (t - ta), self.v_peak, 0.0)
    }

    /// Signed (position, velocity, acceleration) at time `t`; clamped outside
    /// `[0, duration]`.
    pub fn state(&self, t: f64) -> (f64, f64, f64) {
        let total = self.duration();
        let t = t.clamp(0.0, total);
        let sgn = self.direction;
        if t >= total {
            return (self.end(), 0.0, 0.0);
        }
        if t <= 0.5 * total {
            let (s, v, a) = self.first_half(t);
            (self.start + sgn * s, sgn * v, sgn * a)
        } else {
            // braking mirrors the acceleration phase; evaluating from the end
            // keeps the rounding error near the target small
            let (s, v, a) = self.first_half(total - t);
            (self.end() - sgn * s, sgn * v, -sgn * a)
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        self.state(t).0
    }

    /// Samples at `k * sample_time` until the move has finished; the last
    /// sample is exactly the end position.
    pub fn sample(&self, sample_time: f64) -> Vec<f64> {
        let total = self.duration();
        if total == 0.0 {
            return vec![self.start];
        }
        let n = (total / sample_time).ceil() as usize;
        (0..=n).map(|k| self.position(k as f64 * sample_time)).collect()
    }
}

/// Densely sampled position reference with bounded lookahead.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProfile {
    samples: Vec<f64>,
    sample_time: f64,
    max_lookahead: usize,
}

impl ReferenceProfile {
    pub fn new(samples: Vec<f64>, sample_time: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTrace);
        }
        if !(sample_time.is_finite() && sample_time > 0.0) {
            return Err(Error::invalid("sample_time", "must be strictly positive"));
        }
        Ok(ReferenceProfile {
            samples,
            sample_time,
            max_lookahead: DEFAULT_MAX_LOOKAHEAD,
        })
    }

    pub fn with_max_lookahead(mut self, m: usize) -> Self {
        self.max_lookahead = m;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_time(&self) -> f64 {
        self.sample_time
    }

    pub fn max_lookahead(&self) -> usize {
        self.max_lookahead
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.sample_time
    }

    pub fn positions(&self) -> &[f64] {
        &self.samples
    }

    /// Position at a possibly out-of-range index: the first sample is held
    /// before the start and the final sample after the end.
    pub fn at(&self, index: isize) -> f64 {
        let last = self.samples.len() - 1;
        let i = if index < 0 { 0 } else { (index as usize).min(last) };
        self.samples[i]
    }

    /// `y*(k + m)` for `m` up to the guaranteed lookahead.
    pub fn lookahead(&self, k: usize, m: usize) -> Result<f64> {
        if m > self.max_lookahead {
            return Err(Error::LookaheadUnavailable {
                requested: m,
                available: self.max_lookahead,
            });
        }
        Ok(self.at((k + m) as isize))
    }

    /// Profile shifted by a constant angle.
    pub fn shifted(&self, offset: f64) -> ReferenceProfile {
        ReferenceProfile {
            samples: self.samples.iter().map(|y| y + offset).collect(),
            ..self.clone()
        }
    }

    pub fn truncated(mut self, len: usize) -> ReferenceProfile {
        self.samples.truncate(len.max(1));
        self
    }
}

/// Sample-accurate concatenation of dwells and moves.
#[derive(Debug, Clone)]
pub struct ProfileBuilder {
    samples: Vec<f64>,
    sample_time: f64,
    limits: MotionLimits,
}

impl ProfileBuilder {
    pub fn new(start: f64, sample_time: f64, limits: MotionLimits) -> Result<Self> {
        limits.validate()?;
        if !(sample_time.is_finite() && sample_time > 0.0) {
            return Err(Error::invalid("sample_time", "must be strictly positive"));
        }
        Ok(ProfileBuilder {
            samples: vec![start],
            sample_time,
            limits,
        })
    }

    pub fn position(&self) -> f64 {
        *self.samples.last().expect("builder always holds the start sample")
    }

    /// Number of samples emitted so far.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dwell(&mut self, seconds: f64) -> &mut Self {
        let n = (seconds.max(0.0) / self.sample_time).round() as usize;
        let p = self.position();
        self.samples.extend(std::iter::repeat_n(p, n));
        self
    }

    pub fn move_to(&mut self, end: f64) -> Result<&mut Self> {
        let mv = ThirdOrderMove::new(self.position(), end, &self.limits)?;
        // sample 0 of the move coincides with the current last sample
        self.samples.extend(mv.sample(self.sample_time).into_iter().skip(1));
        Ok(self)
    }

    pub fn build(self) -> ReferenceProfile {
        ReferenceProfile {
            samples: self.samples,
            sample_time: self.sample_time,
            max_lookahead: DEFAULT_MAX_LOOKAHEAD,
        }
    }
}

/// Single rest-to-rest move sampled at `sample_time`.
pub fn third_order_move(start: f64, end: f64, limits: &MotionLimits, sample_time: f64) -> Result<ReferenceProfile> {
    let mv = ThirdOrderMove::new(start, end, limits)?;
    ReferenceProfile::new(mv.sample(sample_time), sample_time)
}

/// Cycles between `-rotations` and `+rotations` full turns, starting at the
/// lower end. Each stroke is followed by `dwell` seconds at rest; an initial
/// dwell precedes the first stroke.
pub fn back_and_forth(
    rotations: f64,
    limits: &MotionLimits,
    sample_time: f64,
    dwell: f64,
    repetitions: usize,
) -> Result<ReferenceProfile> {
    let lo = -rotations * TAU;
    let hi = rotations * TAU;
    let mut b = ProfileBuilder::new(lo, sample_time, *limits)?;
    b.dwell(dwell);
    for _ in 0..repetitions {
        b.move_to(hi)?.dwell(dwell);
        b.move_to(lo)?.dwell(dwell);
    }
    Ok(b.build())
}

/// Duration of one full back-and-forth cycle including both dwells.
pub fn cycle_duration(rotations: f64, limits: &MotionLimits, dwell: f64) -> Result<f64> {
    let mv = ThirdOrderMove::new(-rotations * TAU, rotations * TAU, limits)?;
    Ok(2.0 * (mv.duration() + dwell))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TS: f64 = 1e-4;

    fn standard_limits() -> MotionLimits {
        MotionLimits::default()
    }

    #[test]
    fn zero_length_move_is_single_sample() {
        let p = third_order_move(1.5, 1.5, &standard_limits(), TS).unwrap();
        assert_eq!(p.positions(), &[1.5]);
    }

    #[test]
    fn invalid_limits_rejected() {
        let bad = MotionLimits { v_max: 1.0, a_max: 0.0, j_max: 1.0 };
        assert!(matches!(third_order_move(0.0, 1.0, &bad, TS), Err(Error::InvalidLimits(_))));
        assert!(MotionLimits::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn three_rotation_move_respects_limits() {
        let p = third_order_move(0.0, 3.0 * TAU, &standard_limits(), TS).unwrap();
        let y = p.positions();
        let vmax = y.windows(2).map(|w| (w[1] - w[0]) / TS).fold(0.0f64, |m, v| m.max(v.abs()));
        let amax = y
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]) / (TS * TS))
            .fold(0.0f64, |m, a| m.max(a.abs()));
        assert!(vmax <= 15.0 + 1e-9, "{vmax}");
        assert!(amax <= 80.0 + 1e-6, "{amax}");
        assert!(vmax > 14.99);
        assert!(amax > 79.9);
    }

    #[test]
    fn total_displacement_telescopes() {
        for (s, e) in [(0.0, 3.0 * TAU), (2.0, -7.3), (0.0, 0.01), (-1.0, -0.9999)] {
            let p = third_order_move(s, e, &standard_limits(), TS).unwrap();
            let y = p.positions();
            let sum: f64 = y.windows(2).map(|w| w[1] - w[0]).sum();
            assert!((sum - (e - s)).abs() < 1e-9);
            assert_eq!(*y.last().unwrap(), e);
            assert_eq!(y[0], s);
        }
    }

    #[test]
    fn move_is_monotone() {
        for (s, e) in [(0.0, 20.0), (3.0, -1.0), (0.0, 1e-3)] {
            let p = third_order_move(s, e, &standard_limits(), TS).unwrap();
            let sgn = (e - s).signum();
            assert!(p.positions().windows(2).all(|w| sgn * (w[1] - w[0]) >= 0.0));
        }
    }

    #[test]
    fn short_moves_collapse_segments() {
        let l = standard_limits();
        // accel limit reached, velocity not
        let m = ThirdOrderMove::new(0.0, 2.0, &l).unwrap();
        assert!(m.peak_velocity() < 15.0);
        assert!((m.peak_acceleration() - 80.0).abs() < 1e-12);
        // neither reached
        let m = ThirdOrderMove::new(0.0, 1e-3, &l).unwrap();
        assert!(m.peak_acceleration() < 80.0);
        assert!((m.position(m.duration()) - 1e-3).abs() < 1e-18);
        // continuity at the midpoint
        let t = 0.5 * m.duration();
        assert!((m.position(t - 1e-12) - m.position(t + 1e-12)).abs() < 1e-12);
    }

    #[test]
    fn continuous_profile_is_time_reversal_symmetric() {
        let m = ThirdOrderMove::new(-2.0, 5.0, &standard_limits()).unwrap();
        let total = m.duration();
        for i in 0..=100 {
            let t = total * i as f64 / 100.0;
            let fwd = m.position(t) - (-2.0);
            let bwd = 5.0 - m.position(total - t);
            assert!((fwd - bwd).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_is_continuous_across_segments() {
        let m = ThirdOrderMove::new(0.0, 30.0, &standard_limits()).unwrap();
        let total = m.duration();
        let mut prev = m.state(0.0);
        let dt = total / 20000.0;
        for i in 1..=20000 {
            let s = m.state(i as f64 * dt);
            assert!((s.1 - prev.1).abs() <= 80.0 * dt + 1e-9);
            assert!((s.2 - prev.2).abs() <= 1000.0 * dt + 1e-9);
            prev = s;
        }
    }

    #[test]
    fn back_and_forth_returns_home() {
        let p = back_and_forth(3.0, &standard_limits(), TS, 0.2, 1).unwrap();
        let y = p.positions();
        assert_eq!(y[0], -3.0 * TAU);
        assert!((y.last().unwrap() - y[0]).abs() < 1e-9);
        assert!(y.iter().any(|v| (v - 3.0 * TAU).abs() < 1e-12));
    }

    #[test]
    fn zero_repetitions_is_constant() {
        let p = back_and_forth(3.0, &standard_limits(), TS, 0.2, 0).unwrap();
        assert!(p.positions().iter().all(|&v| v == -3.0 * TAU));
    }

    #[test]
    fn eighty_seconds_of_cycling_has_enough_samples() {
        let l = standard_limits();
        let cyc = cycle_duration(3.0, &l, 0.2).unwrap();
        let reps = (80.0 / cyc).ceil() as usize;
        let p = back_and_forth(3.0, &l, TS, 0.2, reps).unwrap();
        assert!(p.len() >= 800_000, "{}", p.len());
    }

    #[test]
    fn lookahead_holds_final_value() {
        let p = ReferenceProfile::new(vec![0.0, 1.0, 2.0], TS).unwrap();
        assert_eq!(p.lookahead(2, 5).unwrap(), 2.0);
        assert_eq!(p.at(-3), 0.0);
        assert!(matches!(p.lookahead(0, 9), Err(Error::LookaheadUnavailable { .. })));
        let q = p.clone().with_max_lookahead(100);
        assert_eq!(q.lookahead(0, 99).unwrap(), 2.0);
    }
}
