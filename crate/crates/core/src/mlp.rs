//! Small fully-connected networks with `tanh` hidden units and explicit backprop.
//!
//! Parameters are addressed as one flat vector laid out layer by layer, weights
//! (row-major, `outputs × inputs`) before biases. Gradients use the same layout.

use serde::Serialize;

use crate::math::sigmoid;
use crate::rng::Rng;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMap {
    Identity,
    Sigmoid,
}

impl OutputMap {
    fn apply(self, x: f64) -> f64 {
        match self {
            Self::Identity => x,
            Self::Sigmoid => sigmoid(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    fn affine(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| b + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>())
            .collect()
    }

    fn num_params(&self) -> usize {
        self.weights.len() + self.bias.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MlpModel {
    layers: Vec<Layer>,
    output: OutputMap,
}

/// Intermediate values of one forward pass, needed by [`MlpModel::backward`].
#[derive(Debug, Clone)]
pub struct Tape {
    /// Input of every layer; `acts[0]` is the network input.
    acts: Vec<Vec<f64>>,
    /// Output of the last affine map, before the output map.
    pub pre_output: Vec<f64>,
}

impl MlpModel {
    pub fn from_layers(layers: Vec<Layer>, output: OutputMap) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument("network has no layers".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].outputs != pair[1].inputs {
                return Err(Error::DimensionMismatch {
                    expected: pair[0].outputs,
                    got: pair[1].inputs,
                });
            }
        }
        for l in &layers {
            if l.inputs == 0 || l.outputs == 0 {
                return Err(Error::InvalidArgument("zero-width layer".into()));
            }
            if l.weights.len() != l.inputs * l.outputs || l.bias.len() != l.outputs {
                return Err(Error::DimensionMismatch {
                    expected: l.inputs * l.outputs + l.outputs,
                    got: l.weights.len() + l.bias.len(),
                });
            }
            if l.weights.iter().chain(&l.bias).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("network parameter".into()));
            }
        }
        Ok(Self { layers, output })
    }

    pub fn zeros(dims: &[usize], output: OutputMap) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::InvalidArgument("need at least input and output width".into()));
        }
        Self::from_layers(dims.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect(), output)
    }

    /// Gaussian weights with variance `1 / fan_in`, zero biases.
    pub fn init(dims: &[usize], output: OutputMap, rng: &mut Rng) -> Result<Self> {
        let mut model = Self::zeros(dims, output)?;
        for l in &mut model.layers {
            let scale = 1.0 / (l.inputs as f64).sqrt();
            l.weights.iter_mut().for_each(|w| *w = scale * rng.normal());
        }
        Ok(model)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn output_map(&self) -> OutputMap {
        self.output
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].inputs)
            .chain(self.layers.iter().map(|l| l.outputs))
            .collect()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(Layer::num_params).sum()
    }

    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_params());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.bias);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::DimensionMismatch {
                expected: self.num_params(),
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("network parameters".into()));
        }
        let mut rest = params;
        for l in &mut self.layers {
            let (w, tail) = rest.split_at(l.weights.len());
            let (b, tail) = tail.split_at(l.bias.len());
            l.weights.copy_from_slice(w);
            l.bias.copy_from_slice(b);
            rest = tail;
        }
        Ok(())
    }

    /// `params += scale · direction`.
    pub fn add_scaled(&mut self, direction: &[f64], scale: f64) -> Result<()> {
        let mut p = self.params();
        if direction.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                got: direction.len(),
            });
        }
        p.iter_mut().zip(direction).for_each(|(x, d)| *x += scale * d);
        self.set_params(&p)
    }

    fn check_input(&self, input: &[f64]) -> Result<()> {
        if input.len() == self.input_dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: input.len(),
            })
        }
    }

    pub fn forward_tape(&self, input: &[f64]) -> Result<Tape> {
        self.check_input(input)?;
        let mut acts = Vec::with_capacity(self.layers.len());
        acts.push(input.to_vec());
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            let z = layer.affine(&acts[i]);
            if i == last {
                return Ok(Tape {
                    acts,
                    pre_output: z,
                });
            }
            acts.push(z.into_iter().map(f64::tanh).collect());
        }
        unreachable!("loop returns on the last layer")
    }

    /// Output before the output map (the logit for a discriminator).
    pub fn forward_pre(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_tape(input)?.pre_output)
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .forward_pre(input)?
            .into_iter()
            .map(|z| self.output.apply(z))
            .collect())
    }

    /// Backpropagates `grad_pre = ∂L/∂pre_output`, accumulating parameter
    /// gradients into `grad_params` and returning `∂L/∂input`.
    pub fn backward(&self, tape: &Tape, grad_pre: &[f64], grad_params: &mut [f64]) -> Vec<f64> {
        debug_assert_eq!(grad_params.len(), self.num_params());
        let mut offsets = Vec::with_capacity(self.layers.len());
        let mut off = 0;
        for l in &self.layers {
            offsets.push(off);
            off += l.num_params();
        }
        let mut delta = grad_pre.to_vec();
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let x = &tape.acts[i];
            let base = offsets[i];
            let (gw, gb) = grad_params[base..base + layer.num_params()].split_at_mut(layer.weights.len());
            for (o, d) in delta.iter().enumerate() {
                gb[o] += d;
                for (g, xi) in gw[o * layer.inputs..(o + 1) * layer.inputs].iter_mut().zip(x) {
                    *g += d * xi;
                }
            }
            let mut grad_in = vec![0.0; layer.inputs];
            for (row, d) in layer.weights.chunks_exact(layer.inputs).zip(&delta) {
                for (g, w) in grad_in.iter_mut().zip(row) {
                    *g += w * d;
                }
            }
            if i > 0 {
                // x = tanh(z) so dx/dz = 1 - x²
                for (g, xi) in grad_in.iter_mut().zip(x) {
                    *g *= 1.0 - xi * xi;
                }
            }
            delta = grad_in;
        }
        delta
    }
}
