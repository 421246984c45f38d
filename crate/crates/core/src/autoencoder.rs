//! Reference feedforward autoencoder trained by backpropagation.
//!
//! Loss per pattern is `E = ½ Σ_k (y_k − t_k)²`. Output deltas are
//! `δ_k = (y_k − t_k) h'(a_k)`, which is just `y_k − t_k` for a linear
//! output layer; hidden deltas are `δ_j = h'(a_j) Σ_k w_kj δ_k` and
//! `∂E/∂w_ji = δ_j z_i`. Each layer learns with rates scaled by the
//! square root of its fan-in, the bias rate ten times smaller.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::{seeded_rng, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Sigmoid,
    Tanh,
    Linear,
}

impl Activation {
    pub fn apply(self, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => 1.0 / (1.0 + (-a).exp()),
            Activation::Tanh => a.tanh(),
            Activation::Linear => a,
        }
    }

    /// `h'(a)`.
    pub fn derivative(self, a: f64) -> f64 {
        match self {
            Activation::Sigmoid => {
                let s = self.apply(a);
                s * (1.0 - s)
            }
            Activation::Tanh => {
                let t = a.tanh();
                1.0 - t * t
            }
            Activation::Linear => 1.0,
        }
    }
}

pub fn activation(kind: Activation, a: f64) -> f64 {
    kind.apply(a)
}

/// One fully connected layer: `z = h(W x + b)` with `W` sized out × in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Matrix,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn inputs(&self) -> usize {
        self.weights.cols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedforwardNet {
    layers: Vec<Layer>,
}

/// Everything the forward pass computed, kept for backpropagation.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass {
    /// Weighted input sums `a` of each layer.
    pub pre_activations: Vec<Vec<f64>>,
    /// Unit outputs `z`; entry 0 is the input itself, the last is `y`.
    pub activations: Vec<Vec<f64>>,
}

impl ForwardPass {
    pub fn output(&self) -> &[f64] {
        self.activations.last().expect("input is always present")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
    pub loss: f64,
}

impl FeedforwardNet {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("a network needs at least one layer"));
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.biases.len() != layer.outputs() {
                return Err(Error::DimensionMismatch {
                    expected: layer.outputs(),
                    actual: layer.biases.len(),
                });
            }
            if i > 0 && layers[i - 1].outputs() != layer.inputs() {
                return Err(Error::DimensionMismatch {
                    expected: layers[i - 1].outputs(),
                    actual: layer.inputs(),
                });
            }
        }
        Ok(FeedforwardNet { layers })
    }

    /// Weights and biases drawn uniformly from `[-init_scale, init_scale]`.
    pub fn random(
        sizes: &[usize],
        activations: &[Activation],
        init_scale: f64,
        rng: &mut Rng,
    ) -> Result<Self> {
        if sizes.len() < 2 || activations.len() != sizes.len() - 1 {
            return Err(Error::invalid(
                "need one activation per layer and at least two layer sizes",
            ));
        }
        if sizes.contains(&0) {
            return Err(Error::invalid("layer sizes must be positive"));
        }
        let mut draw = || {
            if init_scale > 0.0 {
                rng.random_range(-init_scale..=init_scale)
            } else {
                0.0
            }
        };
        let layers = sizes
            .windows(2)
            .zip(activations)
            .map(|(w, &activation)| {
                let (n_in, n_out) = (w[0], w[1]);
                let weights = (0..n_in * n_out).map(|_| draw()).collect();
                Layer {
                    weights: Matrix::from_vec(n_out, n_in, weights).expect("sized"),
                    biases: (0..n_out).map(|_| draw()).collect(),
                    activation,
                }
            })
            .collect();
        FeedforwardNet::new(layers)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_size(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn output_size(&self) -> usize {
        self.layers.last().expect("non-empty").outputs()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        std::iter::once(self.input_size())
            .chain(self.layers.iter().map(Layer::outputs))
            .collect()
    }

    pub fn forward(&self, x: &[f64]) -> Result<ForwardPass> {
        if x.len() != self.input_size() {
            return Err(Error::DimensionMismatch {
                expected: self.input_size(),
                actual: x.len(),
            });
        }
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post = Vec::with_capacity(self.layers.len() + 1);
        post.push(x.to_vec());
        for layer in &self.layers {
            let input = post.last().expect("pushed");
            let a: Vec<f64> = (0..layer.outputs())
                .map(|j| dot(layer.weights.row(j), input) + layer.biases[j])
                .collect();
            let z = a.iter().map(|&v| layer.activation.apply(v)).collect();
            pre.push(a);
            post.push(z);
        }
        Ok(ForwardPass {
            pre_activations: pre,
            activations: post,
        })
    }

    pub fn output(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(x)?.output().to_vec())
    }

    /// `½ Σ (y − t)²` for one pattern.
    pub fn loss(&self, x: &[f64], target: &[f64]) -> Result<f64> {
        let y = self.output(x)?;
        check_target(&y, target)?;
        Ok(half_squared_error(&y, target))
    }

    pub fn backprop(&self, x: &[f64], target: &[f64]) -> Result<Gradients> {
        let pass = self.forward(x)?;
        let y = pass.output();
        check_target(y, target)?;

        let n_layers = self.layers.len();
        let mut weights = Vec::with_capacity(n_layers);
        let mut biases = Vec::with_capacity(n_layers);

        let last = &self.layers[n_layers - 1];
        let mut delta: Vec<f64> = y
            .iter()
            .zip(target)
            .zip(&pass.pre_activations[n_layers - 1])
            .map(|((y, t), &a)| (y - t) * last.activation.derivative(a))
            .collect();

        for l in (0..n_layers).rev() {
            let layer = &self.layers[l];
            let z_in = &pass.activations[l];
            let mut gw = Matrix::zeros(layer.outputs(), layer.inputs());
            for (j, &d) in delta.iter().enumerate() {
                for (g, &z) in gw.row_mut(j).iter_mut().zip(z_in) {
                    *g = d * z;
                }
            }
            weights.push(gw);
            biases.push(delta.clone());

            if l > 0 {
                let below = &self.layers[l - 1];
                delta = (0..layer.inputs())
                    .map(|i| {
                        let back: f64 = delta
                            .iter()
                            .enumerate()
                            .map(|(k, d)| layer.weights.get(k, i) * d)
                            .sum();
                        below.activation.derivative(pass.pre_activations[l - 1][i]) * back
                    })
                    .collect();
            }
        }
        weights.reverse();
        biases.reverse();
        Ok(Gradients {
            weights,
            biases,
            loss: half_squared_error(y, target),
        })
    }

    /// Index of the narrowest hidden layer.
    pub fn bottleneck_layer(&self) -> Option<usize> {
        let hidden = self.layers.len().checked_sub(1)?;
        (0..hidden).min_by_key(|&l| self.layers[l].outputs())
    }

    /// Activations of the bottleneck layer for input `x`.
    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>> {
        let l = self
            .bottleneck_layer()
            .ok_or_else(|| Error::invalid("network has no hidden layer to encode with"))?;
        let mut pass = self.forward(x)?;
        Ok(pass.activations.swap_remove(l + 1))
    }

    /// One gradient-descent step with fan-in scaled learning rates.
    pub fn apply_gradients(&mut self, grads: &Gradients, lambda_factor: f64) {
        for (l, layer) in self.layers.iter_mut().enumerate() {
            let (lw, lb) = layer_learning_rates(lambda_factor, layer.inputs());
            layer
                .weights
                .as_mut_slice()
                .iter_mut()
                .zip(grads.weights[l].as_slice())
                .for_each(|(w, g)| *w -= lw * g);
            layer
                .biases
                .iter_mut()
                .zip(&grads.biases[l])
                .for_each(|(b, g)| *b -= lb * g);
        }
    }
}

fn check_target(y: &[f64], target: &[f64]) -> Result<()> {
    if y.len() != target.len() {
        return Err(Error::DimensionMismatch {
            expected: y.len(),
            actual: target.len(),
        });
    }
    Ok(())
}

fn half_squared_error(y: &[f64], t: &[f64]) -> f64 {
    0.5 * y.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
}

/// `(λ_factor / √n, λ_factor / (10 √n))` for a layer with `n` inputs.
pub fn layer_learning_rates(lambda_factor: f64, n_inputs: usize) -> (f64, f64) {
    let weight = lambda_factor / (n_inputs.max(1) as f64).sqrt();
    // dividing the weight rate keeps the ratio at exactly 10.0 in floating point
    (weight, weight / 10.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetTrainConfig {
    pub lambda_factor: f64,
    pub epochs: usize,
    pub seed: u64,
    pub init_scale: f64,
    pub hidden_activation: Activation,
    pub output_activation: Activation,
}

impl Default for NetTrainConfig {
    fn default() -> Self {
        NetTrainConfig {
            lambda_factor: 0.5,
            epochs: 1000,
            seed: 0,
            init_scale: 0.1,
            hidden_activation: Activation::Sigmoid,
            output_activation: Activation::Linear,
        }
    }
}

/// The untrained `n-p-n` network that [`train_autoencoder`] starts from.
pub fn init_autoencoder(n: usize, p: usize, cfg: &NetTrainConfig) -> Result<FeedforwardNet> {
    FeedforwardNet::random(
        &[n, p, n],
        &[cfg.hidden_activation, cfg.output_activation],
        cfg.init_scale,
        &mut seeded_rng(cfg.seed),
    )
}

/// Mean of the per-pattern reconstruction error `½‖f(x) − x‖²`.
pub fn mean_reconstruction_error(net: &FeedforwardNet, data: &[Vec<f64>]) -> Result<f64> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for x in data {
        total += net.loss(x, x)?;
    }
    Ok(total / data.len() as f64)
}

/// Trains an `n-p-n` autoencoder by per-pattern gradient descent,
/// visiting the patterns in a freshly shuffled order every epoch.
pub fn train_autoencoder(
    data: &[Vec<f64>],
    bottleneck: usize,
    cfg: &NetTrainConfig,
) -> Result<FeedforwardNet> {
    let n = data
        .first()
        .ok_or_else(|| Error::invalid("autoencoder needs at least one training vector"))?
        .len();
    if let Some(bad) = data.iter().find(|x| x.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    if !(cfg.lambda_factor > 0.0) {
        return Err(Error::Config("lambda_factor must be positive".into()));
    }
    if bottleneck >= n {
        log::warn!("bottleneck of {bottleneck} units is not narrower than the {n}-dimensional input");
    }

    let mut net = init_autoencoder(n, bottleneck, cfg)?;
    // separate stream from initialization so changing epochs keeps the start point
    let mut rng = seeded_rng(cfg.seed.wrapping_add(1));
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let grads = net.backprop(&data[i], &data[i])?;
            net.apply_gradients(&grads, cfg.lambda_factor);
        }
        if epoch % 100 == 0 {
            log::debug!(
                "autoencoder epoch {epoch}: mean error {:.6}",
                mean_reconstruction_error(&net, data)?
            );
        }
    }
    Ok(net)
}

/// Trains a `V-d-V` autoencoder on binary sentence vectors and returns
/// its d×V input-to-hidden weights; column `j` holds the features of word `j`.
pub fn word_feature_matrix(
    sentences: &[Vec<f64>],
    hidden: usize,
    cfg: &NetTrainConfig,
) -> Result<Matrix> {
    let net = train_autoencoder(sentences, hidden, cfg)?;
    Ok(net.layers()[0].weights.clone())
}

/// The seven-word Spanish vocabulary and its three example sentences
/// as binary indicator vectors.
pub fn demo_sentences() -> (Vec<&'static str>, Vec<Vec<f64>>) {
    let vocab = vec!["el", "gato", "canta", "negro", "es", "bellisimo", "pato"];
    let sentences = vec![
        vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0],
        vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
    ];
    (vocab, sentences)
}
