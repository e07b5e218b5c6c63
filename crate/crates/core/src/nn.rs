//! Minimal dense feedforward networks with exact reverse-mode gradients.
//!
//! Parameters live in one flat `Vec<f64>` per network (row-major weight
//! matrices followed by the bias vector, layer by layer), which keeps the
//! optimizer and the checkpoint codec trivial.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::Rng;

/// Activation applied to the network output; hidden layers are always ReLU.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputActivation {
    Tanh,
    Identity,
    Relu,
}

#[derive(Debug, Clone, Copy)]
struct LayerLayout {
    w_off: usize,
    b_off: usize,
    rows: usize, // outputs
    cols: usize, // inputs
}

/// Fully connected network: affine layers with ReLU hidden activations.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
    output_activation: OutputActivation,
}

fn layouts(sizes: &[usize]) -> Vec<LayerLayout> {
    let mut out = Vec::with_capacity(sizes.len() - 1);
    let mut off = 0;
    for w in sizes.windows(2) {
        let (cols, rows) = (w[0], w[1]);
        out.push(LayerLayout {
            w_off: off,
            b_off: off + rows * cols,
            rows,
            cols,
        });
        off += rows * cols + rows;
    }
    out
}

fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

impl Mlp {
    /// Zero-initialized network; mostly useful in tests.
    pub fn zeros(sizes: &[usize], output_activation: OutputActivation) -> Mlp {
        assert!(sizes.len() >= 2, "need at least input and output layers");
        let len = layouts(sizes)
            .iter()
            .map(|l| l.rows * l.cols + l.rows)
            .sum();
        Mlp {
            sizes: sizes.to_vec(),
            params: vec![0.0; len],
            output_activation,
        }
    }

    /// Weights and biases uniform in `±1/sqrt(fan_in)` per layer.
    pub fn random(sizes: &[usize], output_activation: OutputActivation, rng: &mut Rng) -> Mlp {
        let mut net = Mlp::zeros(sizes, output_activation);
        for layout in layouts(sizes) {
            let bound = 1.0 / libm::sqrt(layout.cols as f64);
            for i in 0..layout.rows * layout.cols + layout.rows {
                net.params[layout.w_off + i] = rng.gen_range(-bound..bound);
            }
        }
        net
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn output_activation(&self) -> OutputActivation {
        self.output_activation
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    /// Replace all parameters; length must match.
    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::DimensionMismatch {
                expected: self.params.len(),
                got: params.len(),
            });
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    /// Forward pass returning only the output vector.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_trace(input)?.output().to_vec())
    }

    /// Forward pass keeping every layer's pre- and post-activation values for
    /// a later backward pass.
    pub fn forward_trace(&self, input: &[f64]) -> Result<Trace> {
        if input.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: input.len(),
            });
        }
        let lays = layouts(&self.sizes);
        let n_layers = lays.len();
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(n_layers + 1);
        activations.push(input.to_vec());
        let mut pre_acts: Vec<Vec<f64>> = Vec::with_capacity(n_layers);
        for (li, lay) in lays.iter().enumerate() {
            let x = &activations[li];
            let mut z = vec![0.0; lay.rows];
            for r in 0..lay.rows {
                let mut acc = self.params[lay.b_off + r];
                let row = &self.params[lay.w_off + r * lay.cols..lay.w_off + (r + 1) * lay.cols];
                for (w, xi) in row.iter().zip(x.iter()) {
                    acc += w * xi;
                }
                z[r] = acc;
            }
            let last = li == n_layers - 1;
            let a: Vec<f64> = if last {
                match self.output_activation {
                    OutputActivation::Tanh => z.iter().map(|&v| libm::tanh(v)).collect(),
                    OutputActivation::Identity => z.clone(),
                    OutputActivation::Relu => z.iter().map(|&v| relu(v)).collect(),
                }
            } else {
                z.iter().map(|&v| relu(v)).collect()
            };
            pre_acts.push(z);
            activations.push(a);
        }
        Ok(Trace {
            activations,
            pre_acts,
        })
    }

    /// Exact reverse-mode gradients of `upstream · output` with respect to all
    /// parameters (flat, matching `params()` layout) and to the input.
    pub fn backward(&self, input: &[f64], upstream: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let trace = self.forward_trace(input)?;
        self.backward_from_trace(&trace, upstream)
    }

    /// Backward pass reusing a stored forward trace.
    pub fn backward_from_trace(
        &self,
        trace: &Trace,
        upstream: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        if upstream.len() != self.output_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.output_dim(),
                got: upstream.len(),
            });
        }
        let lays = layouts(&self.sizes);
        let n_layers = lays.len();
        let mut grads = vec![0.0; self.params.len()];
        let mut delta: Vec<f64> = upstream.to_vec();
        for li in (0..n_layers).rev() {
            let lay = &lays[li];
            let last = li == n_layers - 1;
            // d(activation)/d(pre-activation)
            for r in 0..lay.rows {
                let dz = if last {
                    match self.output_activation {
                        OutputActivation::Tanh => {
                            let a = trace.activations[li + 1][r];
                            1.0 - a * a
                        }
                        OutputActivation::Identity => 1.0,
                        OutputActivation::Relu => {
                            if trace.pre_acts[li][r] > 0.0 {
                                1.0
                            } else {
                                0.0
                            }
                        }
                    }
                } else if trace.pre_acts[li][r] > 0.0 {
                    1.0
                } else {
                    0.0
                };
                delta[r] *= dz;
            }
            let x = &trace.activations[li];
            for r in 0..lay.rows {
                grads[lay.b_off + r] = delta[r];
                let row = &mut grads[lay.w_off + r * lay.cols..lay.w_off + (r + 1) * lay.cols];
                for (g, xi) in row.iter_mut().zip(x.iter()) {
                    *g = delta[r] * xi;
                }
            }
            // Propagate to the previous layer's activations.
            let mut prev = vec![0.0; lay.cols];
            for r in 0..lay.rows {
                let row = &self.params[lay.w_off + r * lay.cols..lay.w_off + (r + 1) * lay.cols];
                for (c, w) in row.iter().enumerate() {
                    prev[c] += delta[r] * w;
                }
            }
            delta = prev;
        }
        Ok((grads, delta))
    }
}

/// Cached layer values from one forward pass.
#[derive(Debug, Clone)]
pub struct Trace {
    activations: Vec<Vec<f64>>, // input plus each layer's post-activation
    pre_acts: Vec<Vec<f64>>,
}

impl Trace {
    pub fn output(&self) -> &[f64] {
        self.activations.last().unwrap()
    }
}
