use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{gemm, Matrix};
use super::NnError;

/// Hidden-layer nonlinearity. The output layer is always linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Tanh => x.tanh(),
        }
    }

    /// Derivative expressed through the activation output.
    #[inline]
    fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct LayerOffsets {
    weights: usize,
    bias: usize,
    fan_in: usize,
    fan_out: usize,
}

/// Dense feed-forward network.
///
/// All parameters live in one flat buffer: for every layer a row-major
/// `(fan_out, fan_in)` weight block followed by its bias vector. Gradients and
/// optimizer moments use the same layout, so they can be handled as plain slices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    layer_sizes: Vec<usize>,
    activation: Activation,
    layers: Vec<LayerOffsets>,
    params: Vec<f64>,
}

/// Activations recorded by a batched forward pass, consumed by [`Mlp::backward_batch`].
#[derive(Debug, Clone)]
pub struct Tape {
    /// `inputs[l]` is the input of layer `l`; the last entry is the network output.
    values: Vec<Matrix>,
}

impl Tape {
    pub fn output(&self) -> &Matrix {
        self.values.last().expect("tape always holds the input")
    }

    pub fn input(&self) -> &Matrix {
        &self.values[0]
    }
}

impl Mlp {
    /// Builds a network with Glorot-uniform weights and zero biases.
    pub fn new<R: Rng + ?Sized>(
        layer_sizes: &[usize],
        activation: Activation,
        rng: &mut R,
    ) -> Result<Self, NnError> {
        let mut net = Self::zeros(layer_sizes, activation)?;
        for layer in net.layers.clone() {
            let limit = (6.0 / (layer.fan_in + layer.fan_out) as f64).sqrt();
            let n = layer.fan_in * layer.fan_out;
            for w in &mut net.params[layer.weights..layer.weights + n] {
                *w = rng.random_range(-limit..=limit);
            }
        }
        Ok(net)
    }

    /// Builds a network with every parameter set to zero.
    pub fn zeros(layer_sizes: &[usize], activation: Activation) -> Result<Self, NnError> {
        if layer_sizes.len() < 2 {
            return Err(NnError::Config(format!(
                "an MLP needs at least input and output sizes, got {layer_sizes:?}"
            )));
        }
        if layer_sizes.contains(&0) {
            return Err(NnError::Config(format!(
                "layer sizes must be positive, got {layer_sizes:?}"
            )));
        }
        let mut layers = Vec::with_capacity(layer_sizes.len() - 1);
        let mut offset = 0;
        for pair in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let weights = offset;
            let bias = weights + fan_in * fan_out;
            offset = bias + fan_out;
            layers.push(LayerOffsets {
                weights,
                bias,
                fan_in,
                fan_out,
            });
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            activation,
            layers,
            params: vec![0.0; offset],
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn input_dim(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Weight block of `layer`, row-major `(fan_out, fan_in)`.
    pub fn weights(&self, layer: usize) -> &[f64] {
        let l = self.layers[layer];
        &self.params[l.weights..l.weights + l.fan_in * l.fan_out]
    }

    pub fn weights_mut(&mut self, layer: usize) -> &mut [f64] {
        let l = self.layers[layer];
        &mut self.params[l.weights..l.weights + l.fan_in * l.fan_out]
    }

    pub fn bias(&self, layer: usize) -> &[f64] {
        let l = self.layers[layer];
        &self.params[l.bias..l.bias + l.fan_out]
    }

    pub fn bias_mut(&mut self, layer: usize) -> &mut [f64] {
        let l = self.layers[layer];
        &mut self.params[l.bias..l.bias + l.fan_out]
    }

    /// A zero buffer shaped like the parameters.
    pub fn zero_grads(&self) -> Vec<f64> {
        vec![0.0; self.params.len()]
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>, NnError> {
        self.check_input(input.len())?;
        Ok(self
            .forward_batch(&Matrix::from_row(input))
            .output()
            .row(0)
            .to_vec())
    }

    /// Gradients of `output · output_grad` with respect to the parameters and the input.
    pub fn backward(
        &self,
        input: &[f64],
        output_grad: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), NnError> {
        self.check_input(input.len())?;
        if output_grad.len() != self.output_dim() {
            return Err(NnError::Shape {
                expected: self.output_dim(),
                got: output_grad.len(),
            });
        }
        let tape = self.forward_batch(&Matrix::from_row(input));
        let mut grads = self.zero_grads();
        let input_grad = self.backward_batch(&tape, &Matrix::from_row(output_grad), &mut grads);
        Ok((grads, input_grad.into_vec()))
    }

    fn check_input(&self, len: usize) -> Result<(), NnError> {
        if len != self.input_dim() {
            return Err(NnError::Shape {
                expected: self.input_dim(),
                got: len,
            });
        }
        Ok(())
    }

    /// Forward pass over a batch (one sample per row). Panics on shape mismatch.
    pub fn forward_batch(&self, input: &Matrix) -> Tape {
        assert_eq!(
            input.cols(),
            self.input_dim(),
            "MLP input width {} does not match layer size {}",
            input.cols(),
            self.input_dim()
        );
        let batch = input.rows();
        let mut values = Vec::with_capacity(self.layers.len() + 1);
        values.push(input.clone());
        let last = self.layers.len() - 1;
        for (idx, layer) in self.layers.iter().enumerate() {
            let x = values.last().unwrap();
            let bias = &self.params[layer.bias..layer.bias + layer.fan_out];
            let mut out = Matrix::zeros(batch, layer.fan_out);
            for r in 0..batch {
                out.row_mut(r).copy_from_slice(bias);
            }
            gemm(
                batch,
                layer.fan_in,
                layer.fan_out,
                x.as_slice(),
                false,
                &self.params[layer.weights..layer.weights + layer.fan_in * layer.fan_out],
                true,
                1.0,
                out.as_mut_slice(),
            );
            if idx != last {
                let act = self.activation;
                out.as_mut_slice()
                    .iter_mut()
                    .for_each(|v| *v = act.apply(*v));
            }
            values.push(out);
        }
        Tape { values }
    }

    /// Reverse pass for a recorded batch. Parameter gradients are *accumulated*
    /// into `grads`; the gradient with respect to the batch input is returned.
    pub fn backward_batch(&self, tape: &Tape, output_grad: &Matrix, grads: &mut [f64]) -> Matrix {
        assert_eq!(
            grads.len(),
            self.params.len(),
            "gradient buffer has wrong size"
        );
        assert_eq!(
            output_grad.cols(),
            self.output_dim(),
            "output gradient width mismatch"
        );
        assert_eq!(
            output_grad.rows(),
            tape.output().rows(),
            "output gradient batch mismatch"
        );
        let batch = output_grad.rows();
        let mut delta = output_grad.clone();
        for idx in (0..self.layers.len()).rev() {
            let layer = self.layers[idx];
            let x = &tape.values[idx];
            // dW += deltaᵀ · x
            gemm(
                layer.fan_out,
                batch,
                layer.fan_in,
                delta.as_slice(),
                true,
                x.as_slice(),
                false,
                1.0,
                &mut grads[layer.weights..layer.weights + layer.fan_in * layer.fan_out],
            );
            let gb = &mut grads[layer.bias..layer.bias + layer.fan_out];
            for r in 0..batch {
                for (g, d) in gb.iter_mut().zip(delta.row(r)) {
                    *g += d;
                }
            }
            // dx = delta · W
            let mut dx = Matrix::zeros(batch, layer.fan_in);
            gemm(
                batch,
                layer.fan_out,
                layer.fan_in,
                delta.as_slice(),
                false,
                &self.params[layer.weights..layer.weights + layer.fan_in * layer.fan_out],
                false,
                0.0,
                dx.as_mut_slice(),
            );
            if idx > 0 {
                let act = self.activation;
                for (d, y) in dx.as_mut_slice().iter_mut().zip(x.as_slice()) {
                    *d *= act.derivative_from_output(*y);
                }
            }
            delta = dx;
        }
        delta
    }

    /// `self ← tau · online + (1 − tau) · self`, elementwise.
    pub fn soft_update_from(&mut self, online: &Mlp, tau: f64) {
        assert_eq!(
            self.params.len(),
            online.params.len(),
            "soft update shape mismatch"
        );
        for (t, o) in self.params.iter_mut().zip(&online.params) {
            *t = tau * o + (1.0 - tau) * *t;
        }
    }
}
