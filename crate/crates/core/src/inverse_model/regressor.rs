use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motor_sim::SimTrace;

/// Orders of the inverse-dynamics regressor.
///
/// The regressor at time `k` is
/// `[y(k+n_k+1), …, y(k+n_k−n_a+1), u(k−1), …, u(k−n_b+1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressorSpec {
    pub n_a: usize,
    pub n_b: usize,
    pub n_k: usize,
    pub sample_time: f64,
}

impl RegressorSpec {
    /// `n_k = 1, n_a = 4, n_b = 0`: the window `y(k+2) … y(k−2)`.
    pub fn centered(sample_time: f64) -> Self {
        RegressorSpec {
            n_a: 4,
            n_b: 0,
            n_k: 1,
            sample_time,
        }
    }

    pub fn output_len(&self) -> usize {
        self.n_a + 1
    }

    pub fn input_len(&self) -> usize {
        self.n_b.saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.output_len() + self.input_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest future offset the regressor reads.
    pub fn lookahead(&self) -> usize {
        self.n_k + 1
    }

    /// Smallest `k` for which the whole regressor lies inside a record.
    pub fn first_index(&self) -> usize {
        (self.n_a as isize - self.n_k as isize - 1)
            .max(self.n_b as isize - 1)
            .max(0) as usize
    }

    /// Whether the output part covers `y(k−2) … y(k+2)`, as the difference
    /// operators require.
    pub fn has_centered_window(&self) -> bool {
        self.n_k + 1 >= 2 && self.n_a >= self.n_k + 3
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_time.is_finite() && self.sample_time > 0.0) {
            return Err(Error::invalid("regressor.sample_time", "must be strictly positive"));
        }
        Ok(())
    }

    /// `y(k+m)` read out of a regressor built at `k`.
    #[inline]
    pub fn output_at(&self, phi: &[f64], m: isize) -> f64 {
        phi[(self.n_k as isize + 1 - m) as usize]
    }

    /// `[y(k+2), y(k+1), y(k), y(k−1), y(k−2)]`.
    pub fn centered_window(&self, phi: &[f64]) -> Result<[f64; 5]> {
        if !self.has_centered_window() {
            return Err(Error::Shape(format!(
                "regressor (n_a={}, n_k={}) does not contain y(k-2)..y(k+2)",
                self.n_a, self.n_k
            )));
        }
        if phi.len() != self.len() {
            return Err(Error::Shape(format!("regressor has length {}, expected {}", phi.len(), self.len())));
        }
        Ok([
            self.output_at(phi, 2),
            self.output_at(phi, 1),
            self.output_at(phi, 0),
            self.output_at(phi, -1),
            self.output_at(phi, -2),
        ])
    }

    /// Mask of the position entries: ones on outputs, zeros on past inputs.
    pub fn position_mask(&self) -> Vec<f64> {
        let mut m = vec![1.0; self.output_len()];
        m.resize(self.len(), 0.0);
        m
    }
}

/// Central difference `δy(k) = (y(k+1) − y(k−1)) / 2T_s` over a window
/// `[y(k+2), …, y(k−2)]`.
#[inline]
pub fn delta(window: &[f64; 5], sample_time: f64) -> f64 {
    (window[1] - window[3]) / (2.0 * sample_time)
}

/// `δ²y(k) = (y(k+2) − 2y(k) + y(k−2)) / 4T_s²`.
#[inline]
pub fn delta2(window: &[f64; 5], sample_time: f64) -> f64 {
    ((window[0] - window[2]) - (window[2] - window[4])) / (4.0 * sample_time * sample_time)
}

/// Regressor/target pairs stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Regressors {
    pub spec: RegressorSpec,
    phis: Vec<f64>,
    targets: Vec<f64>,
}

impl Regressors {
    pub fn new(spec: RegressorSpec) -> Self {
        Regressors {
            spec,
            phis: Vec::new(),
            targets: Vec::new(),
        }
    }

    pub fn push(&mut self, phi: &[f64], target: f64) -> Result<()> {
        if phi.len() != self.spec.len() {
            return Err(Error::Shape(format!("regressor has length {}, expected {}", phi.len(), self.spec.len())));
        }
        self.phis.extend_from_slice(phi);
        self.targets.push(target);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn phi(&self, i: usize) -> &[f64] {
        let d = self.spec.len();
        &self.phis[i * d..(i + 1) * d]
    }

    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn targets_mut(&mut self) -> &mut [f64] {
        &mut self.targets
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.phis.chunks_exact(self.spec.len().max(1)).zip(self.targets.iter().copied())
    }

    /// Every `stride`-th pair.
    pub fn subsample(&self, stride: usize) -> Regressors {
        let stride = stride.max(1);
        let mut out = Regressors::new(self.spec);
        for i in (0..self.len()).step_by(stride) {
            out.phis.extend_from_slice(self.phi(i));
            out.targets.push(self.targets[i]);
        }
        out
    }
}

/// Regressors from aligned output/input sequences. The target of the pair
/// built at `k` is `u(k)`; indices without a complete window are dropped.
pub fn build_regressors_from(y: &[f64], u: &[f64], spec: &RegressorSpec) -> Result<Regressors> {
    spec.validate()?;
    if y.len() != u.len() {
        return Err(Error::LengthMismatch {
            what: "output and input sequences",
            left: y.len(),
            right: u.len(),
        });
    }
    let n = y.len();
    let first = spec.first_index();
    let required = first + spec.n_k + 2;
    if n < required {
        return Err(Error::TraceTooShort { len: n, required });
    }
    let last = n - spec.n_k - 2;
    let mut out = Regressors::new(*spec);
    out.phis.reserve((last + 1 - first) * spec.len());
    out.targets.reserve(last + 1 - first);
    for k in first..=last {
        for i in 0..=spec.n_a {
            out.phis.push(y[k + spec.n_k + 1 - i]);
        }
        for i in 1..spec.n_b {
            out.phis.push(u[k - i]);
        }
        out.targets.push(u[k]);
    }
    Ok(out)
}

pub fn build_regressors(trace: &SimTrace, spec: &RegressorSpec) -> Result<Regressors> {
    build_regressors_from(&trace.y, &trace.u, spec)
}
