//! Single-hidden-layer tanh network `W₂ tanh(W₁x + B₁) + B₂`.
//!
//! Parameters live in one flat vector laid out as
//! `[W₁ (row-major, n₁×n₀), B₁ (n₁), W₂ (n₁), B₂]` so that optimizers can
//! treat them uniformly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NNParams {
    n_in: usize,
    n_hidden: usize,
    theta: Vec<f64>,
}

/// Gradient of the network output, laid out like [`NNParams::as_slice`],
/// plus the gradient with respect to the input.
#[derive(Debug, Clone, PartialEq)]
pub struct NNGradient {
    pub params: Vec<f64>,
    pub input: Vec<f64>,
}

pub fn param_count(n_in: usize, n_hidden: usize) -> usize {
    n_hidden * n_in + 2 * n_hidden + 1
}

impl NNParams {
    pub fn zeros(n_in: usize, n_hidden: usize) -> Self {
        NNParams {
            n_in,
            n_hidden,
            theta: vec![0.0; param_count(n_in, n_hidden)],
        }
    }

    pub fn from_parts(w1: &[f64], b1: &[f64], w2: &[f64], b2: f64) -> Result<Self> {
        let n_hidden = b1.len();
        if n_hidden == 0 || w2.len() != n_hidden || w1.len() % n_hidden != 0 || w1.is_empty() {
            return Err(Error::Shape(format!(
                "inconsistent layer sizes: |W1|={}, |B1|={}, |W2|={}",
                w1.len(),
                b1.len(),
                w2.len()
            )));
        }
        let mut theta = Vec::with_capacity(param_count(w1.len() / n_hidden, n_hidden));
        theta.extend_from_slice(w1);
        theta.extend_from_slice(b1);
        theta.extend_from_slice(w2);
        theta.push(b2);
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("network parameters must be finite".into()));
        }
        Ok(NNParams {
            n_in: w1.len() / n_hidden,
            n_hidden,
            theta,
        })
    }

    /// Hidden layer drawn uniformly from `±1/√n₀`; output layer starts at
    /// zero so the untrained network predicts exactly 0.
    pub fn init(n_in: usize, n_hidden: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = NNParams::zeros(n_in, n_hidden);
        let a = 1.0 / (n_in as f64).sqrt();
        let hidden = n_hidden * n_in + n_hidden;
        for v in &mut p.theta[..hidden] {
            *v = rng.random_range(-a..=a);
        }
        p
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    pub fn w1(&self) -> &[f64] {
        &self.theta[..self.n_hidden * self.n_in]
    }

    pub fn b1(&self) -> &[f64] {
        let o = self.n_hidden * self.n_in;
        &self.theta[o..o + self.n_hidden]
    }

    pub fn w2(&self) -> &[f64] {
        let o = self.n_hidden * self.n_in + self.n_hidden;
        &self.theta[o..o + self.n_hidden]
    }

    pub fn b2(&self) -> f64 {
        *self.theta.last().expect("parameter vector is never empty")
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n_in);
        let (w1, b1, w2) = (self.w1(), self.b1(), self.w2());
        let mut out = self.b2();
        for j in 0..self.n_hidden {
            let row = &w1[j * self.n_in..(j + 1) * self.n_in];
            let z = row.iter().zip(x).fold(b1[j], |acc, (w, xi)| acc + w * xi);
            out += w2[j] * z.tanh();
        }
        out
    }

    /// Forward pass that keeps the hidden activations in `h`.
    pub fn forward_cached(&self, x: &[f64], h: &mut [f64]) -> f64 {
        let (w1, b1, w2) = (self.w1(), self.b1(), self.w2());
        let mut out = self.b2();
        for j in 0..self.n_hidden {
            let row = &w1[j * self.n_in..(j + 1) * self.n_in];
            let z = row.iter().zip(x).fold(b1[j], |acc, (w, xi)| acc + w * xi);
            h[j] = z.tanh();
            out += w2[j] * h[j];
        }
        out
    }

    /// Adds `upstream · ∂out/∂θ` into `grad` given activations from
    /// [`NNParams::forward_cached`].
    pub fn backprop_cached(&self, x: &[f64], h: &[f64], upstream: f64, grad: &mut [f64]) {
        let (n_in, n_h) = (self.n_in, self.n_hidden);
        let w2 = self.w2();
        let (gw1, rest) = grad.split_at_mut(n_h * n_in);
        let (gb1, rest) = rest.split_at_mut(n_h);
        let (gw2, gb2) = rest.split_at_mut(n_h);
        for j in 0..n_h {
            gw2[j] += upstream * h[j];
            let dz = upstream * w2[j] * (1.0 - h[j] * h[j]);
            gb1[j] += dz;
            for (g, xi) in gw1[j * n_in..(j + 1) * n_in].iter_mut().zip(x) {
                *g += dz * xi;
            }
        }
        gb2[0] += upstream;
    }

    /// Adds `upstream · ∂out/∂θ` into `grad` and returns the output.
    pub fn accumulate_gradient(&self, x: &[f64], upstream: f64, grad: &mut [f64]) -> f64 {
        let mut h = vec![0.0; self.n_hidden];
        let out = self.forward_cached(x, &mut h);
        self.backprop_cached(x, &h, upstream, grad);
        out
    }

    /// Backpropagation of `upstream · out(x)` to the parameters and input.
    pub fn gradient(&self, x: &[f64], upstream: f64) -> NNGradient {
        let mut params = vec![0.0; self.theta.len()];
        self.accumulate_gradient(x, upstream, &mut params);
        let (w1, b1, w2) = (self.w1(), self.b1(), self.w2());
        let mut input = vec![0.0; self.n_in];
        for j in 0..self.n_hidden {
            let row = &w1[j * self.n_in..(j + 1) * self.n_in];
            let z = row.iter().zip(x).fold(b1[j], |acc, (w, xi)| acc + w * xi);
            let h = z.tanh();
            let dz = upstream * w2[j] * (1.0 - h * h);
            for (g, w) in input.iter_mut().zip(row) {
                *g += dz * w;
            }
        }
        NNGradient { params, input }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_output_bias() {
        let mut p = NNParams::zeros(3, 4);
        *p.as_mut_slice().last_mut().unwrap() = 0.75;
        assert_eq!(p.forward(&[1.0, -2.0, 3.0]), 0.75);
    }

    #[test]
    fn single_neuron_is_tanh() {
        let p = NNParams::from_parts(&[1.0, 0.0, 0.0], &[0.0], &[1.0], 0.0).unwrap();
        for x in [-2.0, -0.1, 0.0, 0.5, 3.0] {
            assert_eq!(p.forward(&[x, 9.0, -9.0]), f64::tanh(x));
        }
    }

    #[test]
    fn gradient_at_zero_input_and_weights() {
        let p = NNParams::zeros(2, 3);
        let g = p.gradient(&[0.0, 0.0], 1.0);
        let n = g.params.len();
        assert_eq!(g.params[n - 1], 1.0);
        assert!(g.params[..n - 1].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn input_gradient_of_single_neuron_at_origin() {
        let p = NNParams::from_parts(&[0.7, -1.3], &[0.0], &[2.0], 0.1).unwrap();
        let g = p.gradient(&[0.0, 0.0], 1.0);
        assert!((g.input[0] - 2.0 * 0.7).abs() < 1e-15);
        assert!((g.input[1] - 2.0 * -1.3).abs() < 1e-15);
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = NNParams::init(3, 16, 7);
        let b = NNParams::init(3, 16, 7);
        let c = NNParams::init(3, 16, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let bound = 1.0 / 3f64.sqrt();
        assert!(a.w1().iter().chain(a.b1()).all(|v| v.abs() <= bound));
        assert!(a.w2().iter().all(|&v| v == 0.0));
        assert_eq!(a.forward(&[1.0, 2.0, 3.0]), 0.0);
    }

    #[test]
    fn from_parts_rejects_bad_shapes() {
        assert!(NNParams::from_parts(&[1.0, 2.0, 3.0], &[0.0, 0.0], &[1.0, 1.0], 0.0).is_err());
        assert!(NNParams::from_parts(&[1.0, 2.0], &[0.0, 0.0], &[1.0], 0.0).is_err());
        assert!(NNParams::from_parts(&[f64::NAN], &[0.0], &[1.0], 0.0).is_err());
    }
}
