//! Link-state classification network.
//!
//! Two fully connected stages: stage 1 embeds the strongest path's
//! `(tau, theta, phi)`; stage 2 consumes the remaining `K - 1` triplets
//! concatenated with that embedding and ends in three logits
//! (LOS, first-order NLOS, higher-order NLOS) fed to a softmax.

mod dataset;
mod train;

pub use dataset::Dataset;
pub use train::{evaluate, k_sweep, train, Adam, EpochStats, Evaluation, KSweepRow, TrainConfig, TrainHistory};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{FeatureScaler, LinkState, Snapshot};

pub const NUM_CLASSES: usize = 3;

/// Log-probabilities are clamped at `ln(PROB_FLOOR)` in the loss.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Linear,
}

/// `y = act(W x + b)` with `W` stored row-major, `outputs x inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLayer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl DenseLayer {
    pub fn zeros(inputs: usize, outputs: usize, activation: Activation) -> Self {
        DenseLayer {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
            activation,
        }
    }

    /// He-style uniform initialisation, `U(-sqrt(6/fan_in), sqrt(6/fan_in))`,
    /// zero bias.
    pub fn he_uniform(inputs: usize, outputs: usize, activation: Activation, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / inputs as f64).sqrt();
        let mut layer = DenseLayer::zeros(inputs, outputs, activation);
        for w in &mut layer.weights {
            *w = rng.random_range(-limit..limit);
        }
        layer
    }

    fn pre_activation(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(x).fold(*b, |acc, (w, xi)| acc + w * xi))
            .collect()
    }

    fn activate(&self, z: &[f64]) -> Vec<f64> {
        match self.activation {
            Activation::Relu => z.iter().map(|v| v.max(0.0)).collect(),
            Activation::Linear => z.to_vec(),
        }
    }

    fn parameter_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    fn is_consistent(&self) -> bool {
        self.weights.len() == self.inputs * self.outputs && self.bias.len() == self.outputs
    }
}

/// Hidden widths of both stages; the 3-unit output layer is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub stage1: Vec<usize>,
    pub stage2: Vec<usize>,
}

impl Default for Architecture {
    fn default() -> Self {
        Architecture {
            stage1: vec![10],
            stage2: vec![50, 100],
        }
    }
}

impl Architecture {
    pub fn validate(&self) -> Result<()> {
        if self.stage1.is_empty() {
            return Err(Error::InvalidConfig("stage 1 needs at least one layer".into()));
        }
        if self.stage1.iter().chain(&self.stage2).any(|&w| w == 0) {
            return Err(Error::InvalidConfig("layer widths must be positive".into()));
        }
        Ok(())
    }

    pub fn embedding_width(&self) -> usize {
        *self.stage1.last().unwrap_or(&3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LscnModel {
    pub k: usize,
    pub architecture: Architecture,
    pub stage1: Vec<DenseLayer>,
    pub stage2: Vec<DenseLayer>,
    pub scaler: FeatureScaler,
}

/// Per-layer gradients in the order stage 1 then stage 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<DenseLayer>,
}

impl Gradients {
    pub fn zeros_like(model: &LscnModel) -> Self {
        Gradients {
            layers: model
                .layers()
                .map(|l| DenseLayer::zeros(l.inputs, l.outputs, l.activation))
                .collect(),
        }
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
            .collect()
    }

    fn scale(&mut self, s: f64) {
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|g| *g *= s);
        }
    }

    fn clear(&mut self) {
        self.scale(0.0);
    }
}

struct LayerTrace {
    input: Vec<f64>,
    pre: Vec<f64>,
}

struct ForwardTrace {
    stage1: Vec<LayerTrace>,
    stage2: Vec<LayerTrace>,
    probs: [f64; NUM_CLASSES],
}

/// Max-shifted softmax.
pub fn softmax(logits: &[f64]) -> [f64; NUM_CLASSES] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0; NUM_CLASSES];
    let mut sum = 0.0;
    for (o, &z) in out.iter_mut().zip(logits) {
        *o = (z - max).exp();
        sum += *o;
    }
    out.iter_mut().for_each(|o| *o /= sum);
    out
}

/// Cross-entropy of a one-hot label: `-ln p[label]`.
pub fn loss(probs: &[f64; NUM_CLASSES], label: LinkState) -> f64 {
    -probs[label.index()].max(PROB_FLOOR).ln()
}

/// Most probable class; ties go to the lower index.
pub fn argmax_state(probs: &[f64; NUM_CLASSES]) -> LinkState {
    let mut best = 0;
    for i in 1..NUM_CLASSES {
        if probs[i] > probs[best] {
            best = i;
        }
    }
    LinkState::from_index(best).expect("index < 3")
}

impl LscnModel {
    pub fn new(k: usize, architecture: Architecture, scaler: FeatureScaler, rng: &mut ChaCha8Rng) -> Result<Self> {
        Self::build(k, architecture, scaler, |i, o, a| DenseLayer::he_uniform(i, o, a, rng))
    }

    /// Model with every weight and bias set to zero.
    pub fn zeros(k: usize, architecture: Architecture) -> Result<Self> {
        let scaler = FeatureScaler {
            mins: vec![-1.0; 3 * k],
            maxs: vec![1.0; 3 * k],
        };
        Self::build(k, architecture, scaler, DenseLayer::zeros)
    }

    fn build(
        k: usize,
        architecture: Architecture,
        scaler: FeatureScaler,
        mut make: impl FnMut(usize, usize, Activation) -> DenseLayer,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("K must be at least 1".into()));
        }
        architecture.validate()?;
        if scaler.width() != 3 * k {
            return Err(Error::ShapeMismatch {
                expected: 3 * k,
                got: scaler.width(),
            });
        }
        let mut stage1 = Vec::new();
        let mut width = 3;
        for &w in &architecture.stage1 {
            stage1.push(make(width, w, Activation::Relu));
            width = w;
        }
        let mut stage2 = Vec::new();
        let mut width = 3 * (k - 1) + architecture.embedding_width();
        for &w in &architecture.stage2 {
            stage2.push(make(width, w, Activation::Relu));
            width = w;
        }
        stage2.push(make(width, NUM_CLASSES, Activation::Linear));
        Ok(LscnModel {
            k,
            architecture,
            stage1,
            stage2,
            scaler,
        })
    }

    pub fn input_width(&self) -> usize {
        3 * self.k
    }

    pub fn layers(&self) -> impl Iterator<Item = &DenseLayer> {
        self.stage1.iter().chain(self.stage2.iter())
    }

    pub fn layers_mut(&mut self) -> impl Iterator<Item = &mut DenseLayer> {
        self.stage1.iter_mut().chain(self.stage2.iter_mut())
    }

    pub fn parameter_count(&self) -> usize {
        self.layers().map(DenseLayer::parameter_count).sum()
    }

    /// Parameters in the same order as [`Gradients::flatten`].
    pub fn parameters_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    /// Checks internal shape consistency (e.g. after deserialisation).
    pub fn validate(&self) -> Result<()> {
        let expected = LscnModel::zeros(self.k, self.architecture.clone())?;
        let same_shape = self.stage1.len() == expected.stage1.len()
            && self.stage2.len() == expected.stage2.len()
            && self.layers().zip(expected.layers()).all(|(a, b)| {
                a.inputs == b.inputs && a.outputs == b.outputs && a.activation == b.activation && a.is_consistent()
            });
        if !same_shape {
            return Err(Error::InvalidConfig("layer shapes do not match the architecture".into()));
        }
        if self.scaler.width() != self.input_width() || self.scaler.maxs.len() != self.scaler.mins.len() {
            return Err(Error::ShapeMismatch {
                expected: self.input_width(),
                got: self.scaler.width(),
            });
        }
        Ok(())
    }

    fn trace(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.input_width() {
            return Err(Error::ShapeMismatch {
                expected: self.input_width(),
                got: x.len(),
            });
        }
        let mut stage1 = Vec::with_capacity(self.stage1.len());
        let mut h = x[..3].to_vec();
        for layer in &self.stage1 {
            let pre = layer.pre_activation(&h);
            let next = layer.activate(&pre);
            stage1.push(LayerTrace { input: h, pre });
            h = next;
        }
        let mut a = Vec::with_capacity(x.len() - 3 + h.len());
        a.extend_from_slice(&x[3..]);
        a.extend_from_slice(&h);
        let mut stage2 = Vec::with_capacity(self.stage2.len());
        for layer in &self.stage2 {
            let pre = layer.pre_activation(&a);
            let next = layer.activate(&pre);
            stage2.push(LayerTrace { input: a, pre });
            a = next;
        }
        Ok(ForwardTrace {
            stage1,
            stage2,
            probs: softmax(&a),
        })
    }

    /// Class probabilities for an already normalised feature vector.
    pub fn forward(&self, features: &[f64]) -> Result<[f64; NUM_CLASSES]> {
        Ok(self.trace(features)?.probs)
    }

    /// Adds the gradient of the cross-entropy at one sample into `grads`
    /// and returns the sample loss.
    pub fn accumulate_gradients(&self, features: &[f64], label: LinkState, grads: &mut Gradients) -> Result<f64> {
        let trace = self.trace(features)?;
        let n1 = self.stage1.len();

        let mut delta: Vec<f64> = trace.probs.to_vec();
        delta[label.index()] -= 1.0;

        let mut upstream = Vec::new();
        for (li, layer) in self.stage2.iter().enumerate().rev() {
            let t = &trace.stage2[li];
            upstream = backprop_layer(layer, t, &delta, &mut grads.layers[n1 + li]);
            if li > 0 {
                delta = relu_gate(&upstream, &trace.stage2[li - 1].pre, self.stage2[li - 1].activation);
            }
        }
        // stage-1 embedding occupies the tail of stage 2's input
        let embed = &upstream[upstream.len() - self.architecture.embedding_width()..];
        delta = relu_gate(embed, &trace.stage1[n1 - 1].pre, self.stage1[n1 - 1].activation);
        for (li, layer) in self.stage1.iter().enumerate().rev() {
            let t = &trace.stage1[li];
            let up = backprop_layer(layer, t, &delta, &mut grads.layers[li]);
            if li > 0 {
                delta = relu_gate(&up, &trace.stage1[li - 1].pre, self.stage1[li - 1].activation);
            }
        }
        Ok(loss(&trace.probs, label))
    }

    /// Loss and exact gradients at one sample.
    pub fn backward(&self, features: &[f64], label: LinkState) -> Result<(f64, Gradients)> {
        let mut g = Gradients::zeros_like(self);
        let l = self.accumulate_gradients(features, label, &mut g)?;
        Ok((l, g))
    }

    /// Normalises a raw snapshot with the stored scaler and classifies it.
    pub fn predict_state(&self, snapshot: &Snapshot) -> Result<LinkState> {
        if snapshot.k() != self.k {
            return Err(Error::ShapeMismatch {
                expected: self.k,
                got: snapshot.k(),
            });
        }
        let x = self.scaler.transform(&snapshot.features())?;
        Ok(argmax_state(&self.forward(&x)?))
    }
}

/// Accumulates `dW += delta x^T`, `db += delta` and returns `W^T delta`.
fn backprop_layer(layer: &DenseLayer, t: &LayerTrace, delta: &[f64], g: &mut DenseLayer) -> Vec<f64> {
    let mut upstream = vec![0.0; layer.inputs];
    for (o, &d) in delta.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        let row = &layer.weights[o * layer.inputs..(o + 1) * layer.inputs];
        let grow = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
        for i in 0..layer.inputs {
            grow[i] += d * t.input[i];
            upstream[i] += row[i] * d;
        }
        g.bias[o] += d;
    }
    upstream
}

fn relu_gate(upstream: &[f64], pre: &[f64], activation: Activation) -> Vec<f64> {
    match activation {
        Activation::Relu => upstream
            .iter()
            .zip(pre)
            .map(|(&u, &z)| if z > 0.0 { u } else { 0.0 })
            .collect(),
        Activation::Linear => upstream.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn random_model(k: usize, arch: Architecture, seed: u64) -> LscnModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scaler = FeatureScaler {
            mins: vec![-1.0; 3 * k],
            maxs: vec![1.0; 3 * k],
        };
        let mut m = LscnModel::new(k, arch, scaler, &mut rng).unwrap();
        for b in m.layers_mut().flat_map(|l| l.bias.iter_mut()) {
            *b = rng.random_range(-0.5..0.5);
        }
        m
    }

    #[test]
    fn zero_model_is_uniform() {
        let m = LscnModel::zeros(4, Architecture::default()).unwrap();
        let p = m.forward(&[0.3; 12]).unwrap();
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn softmax_reference_values() {
        // oracle: exp(10) / (exp(10) + 2)
        let p = softmax(&[10.0, 0.0, 0.0]);
        let e = 10f64.exp();
        assert!((p[0] - e / (e + 2.0)).abs() < 1e-15);
        assert!((p[0] - 0.99991).abs() < 1e-5);
        assert!((p[1] - 4.54e-5).abs() < 1e-7);
        let big = softmax(&[500.0, -500.0, 0.0]);
        assert!(big.iter().all(|v| v.is_finite()));
        assert!((big.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bias_shift_invariance() {
        let mut m = random_model(3, Architecture::default(), 3);
        let x = vec![0.1, -0.4, 0.7, 0.2, 0.0, -0.9, 0.5, 0.5, -0.5];
        let before = m.forward(&x).unwrap();
        m.stage2.last_mut().unwrap().bias.iter_mut().for_each(|b| *b += 7.5);
        let after = m.forward(&x).unwrap();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((after.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_width() {
        let m = LscnModel::zeros(2, Architecture::default()).unwrap();
        assert!(matches!(m.forward(&[0.0; 5]), Err(Error::ShapeMismatch { expected: 6, got: 5 })));
    }

    #[test]
    fn loss_values() {
        assert!(loss(&[1.0, 0.0, 0.0], LinkState::Los) <= 1e-12);
        let third = [1.0 / 3.0; 3];
        assert!((loss(&third, LinkState::HigherOrderNlos) - 3f64.ln()).abs() < 1e-12);
        assert!((loss(&[0.7, 0.2, 0.1], LinkState::FirstOrderNlos) - 1.609_437_912_434_100_3).abs() < 1e-12);
        // clamped, finite
        assert!((loss(&[1.0, 0.0, 0.0], LinkState::FirstOrderNlos) - (-(1e-12f64).ln())).abs() < 1e-9);
    }

    #[test]
    fn argmax_tie_break() {
        assert_eq!(argmax_state(&[0.9, 0.05, 0.05]), LinkState::Los);
        assert_eq!(argmax_state(&[1.0 / 3.0; 3]), LinkState::Los);
        assert_eq!(argmax_state(&[0.2, 0.4, 0.4]), LinkState::FirstOrderNlos);
    }

    #[test]
    fn zero_model_bias_gradient() {
        let m = LscnModel::zeros(3, Architecture::default()).unwrap();
        let (_, g) = m.backward(&[0.2; 9], LinkState::FirstOrderNlos).unwrap();
        let out = g.layers.last().unwrap();
        let expect = [1.0 / 3.0, 1.0 / 3.0 - 1.0, 1.0 / 3.0];
        for (a, b) in out.bias.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn dead_relu_has_zero_incoming_gradient() {
        let mut m = random_model(2, Architecture { stage1: vec![4], stage2: vec![5] }, 11);
        // unit 2 of the first stage-2 layer can never fire
        let layer = &mut m.stage2[0];
        let inputs = layer.inputs;
        layer.weights[2 * inputs..3 * inputs].iter_mut().for_each(|w| *w = 0.0);
        layer.bias[2] = -1.0;
        let (_, g) = m.backward(&[0.3, -0.2, 0.9, 0.1, 0.5, -0.7], LinkState::HigherOrderNlos).unwrap();
        let gl = &g.layers[1];
        assert!(gl.weights[2 * inputs..3 * inputs].iter().all(|&w| w == 0.0));
        assert_eq!(gl.bias[2], 0.0);
    }

    #[test]
    fn gradients_match_finite_differences() {
        // oracle: central differences on the scalar loss, h = 1e-5
        let arch = Architecture { stage1: vec![3], stage2: vec![3] };
        for seed in 0..5 {
            let m = random_model(2, arch.clone(), seed);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let x: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            let label = LinkState::from_index(seed as usize % 3).unwrap();
            let (_, g) = m.backward(&x, label).unwrap();
            let analytic = g.flatten();
            let h = 1e-5;
            for (i, &a) in analytic.iter().enumerate() {
                let mut plus = m.clone();
                *plus.parameters_mut().nth(i).unwrap() += h;
                let mut minus = m.clone();
                *minus.parameters_mut().nth(i).unwrap() -= h;
                let lp = loss(&plus.forward(&x).unwrap(), label);
                let lm = loss(&minus.forward(&x).unwrap(), label);
                let numeric = (lp - lm) / (2.0 * h);
                let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
                assert!(rel < 1e-4, "param {i}: analytic {a} numeric {numeric}");
            }
        }
    }

    #[test]
    fn stage_widths() {
        let m = LscnModel::zeros(9, Architecture::default()).unwrap();
        assert_eq!(m.stage1[0].inputs, 3);
        assert_eq!(m.stage2[0].inputs, 3 * 8 + 10);
        assert_eq!(m.stage2.last().unwrap().outputs, 3);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn input_order_matters() {
        let m = random_model(3, Architecture::default(), 21);
        let x = vec![0.1, 0.2, 0.3, -0.8, 0.6, 0.1, 0.9, -0.4, -0.2];
        let mut swapped = x.clone();
        swapped[3..6].copy_from_slice(&x[6..9]);
        swapped[6..9].copy_from_slice(&x[3..6]);
        assert_ne!(m.forward(&x).unwrap(), m.forward(&swapped).unwrap());
    }
}
