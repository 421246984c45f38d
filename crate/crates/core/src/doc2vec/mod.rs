//! Paragraph vectors (PV-DM and PV-DBOW) with a full softmax output layer.
//!
//! Every document owns a vector in `D`, every word a vector in `W`. For
//! one prediction the hidden vector `h` is the document vector (PV-DBOW)
//! or the mean of the document vector and the context word vectors
//! (PV-DM). The target word is scored by `softmax(b + U h)` and all
//! parameters climb the log probability of the target by stochastic
//! gradient ascent. Inference for an unseen document optimizes a fresh
//! document vector with `W`, `U` and `b` frozen.

mod windows;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

pub use windows::{
    build_windows, context_positions, contiguous_spans, discard_probability, skip_gram_spans,
    subsample, TrainingInstance,
};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::{seeded_rng, Rng};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Pvdm,
    Pvdbow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Doc2VecConfig {
    /// Size of both word and document vectors.
    pub dim: usize,
    pub window: usize,
    pub min_count: usize,
    pub mode: Mode,
    /// Frequency subsampling threshold; 0 disables subsampling.
    pub sample: f64,
    pub alpha0: f64,
    /// Per-epoch multiplicative learning-rate decay.
    pub decay: f64,
    /// Training stops once the rate falls below this.
    pub alpha_floor: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for Doc2VecConfig {
    fn default() -> Self {
        Doc2VecConfig {
            dim: 50,
            window: 5,
            min_count: 5,
            mode: Mode::Pvdm,
            sample: 1e-5,
            alpha0: 0.025,
            decay: 0.99,
            alpha_floor: 1e-3,
            max_epochs: 500,
            seed: 0,
        }
    }
}

impl Doc2VecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.window == 0 {
            return Err(Error::Config("dim and window must be at least 1".into()));
        }
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::Config(format!("decay must lie in (0, 1), got {}", self.decay)));
        }
        if !(self.alpha0 > 0.0) || self.sample < 0.0 {
            return Err(Error::Config("alpha0 must be positive and sample non-negative".into()));
        }
        Ok(())
    }

    /// Learning rate of every epoch that runs: `alpha0 · decay^e` while it
    /// stays at or above the floor, for at most `max_epochs` epochs.
    pub fn learning_rate_schedule(&self) -> Vec<f64> {
        (0..self.max_epochs)
            .map(|e| self.alpha0 * self.decay.powi(e as i32))
            .take_while(|&a| a >= self.alpha_floor)
            .collect()
    }
}

/// Trained paragraph-vector model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingModel {
    /// Vocabulary after `min_count` pruning; row `i` of `W` and `U` is term `i`.
    pub terms: Vec<String>,
    pub word_counts: Vec<usize>,
    pub labels: Vec<String>,
    /// V×dim word vectors.
    pub word_vectors: Matrix,
    /// N×dim document vectors, one row per training document.
    pub doc_vectors: Matrix,
    /// V×dim softmax weights.
    pub softmax_weights: Matrix,
    pub softmax_bias: Vec<f64>,
    pub config: Doc2VecConfig,
}

/// Softmax with the maximum logit subtracted first.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits.iter().map(|&y| (y - max).exp()).collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= total);
    out
}

/// Hidden vector of one prediction: the document vector for PV-DBOW, the
/// mean of the document vector and the context vectors for PV-DM.
pub fn hidden_h(doc: &[f64], contexts: &[&[f64]], mode: Mode) -> Vec<f64> {
    match mode {
        Mode::Pvdbow => doc.to_vec(),
        Mode::Pvdm => {
            let mut h = doc.to_vec();
            for c in contexts {
                h.iter_mut().zip(*c).for_each(|(a, b)| *a += b);
            }
            let n = (contexts.len() + 1) as f64;
            h.iter_mut().for_each(|a| *a /= n);
            h
        }
    }
}

/// Gradient of `log p(target | h)` for one prediction, kept in factored form.
///
/// * `∂/∂b_i = logit_grad[i]`
/// * `∂/∂U_ij = logit_grad[i] · hidden[j]`
/// * `∂/∂(each input vector) = hidden_grad / inputs`
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceGradient {
    pub log_prob: f64,
    pub hidden: Vec<f64>,
    /// `1[i = target] − p_i`.
    pub logit_grad: Vec<f64>,
    /// `Uᵀ · logit_grad`.
    pub hidden_grad: Vec<f64>,
    /// Number of vectors averaged into `hidden`.
    pub inputs: usize,
}

impl EmbeddingModel {
    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn dim(&self) -> usize {
        self.word_vectors.cols()
    }

    fn term_index(&self) -> HashMap<&str, usize> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect()
    }

    /// `softmax(b + U h)`.
    pub fn predict_distribution(&self, h: &[f64]) -> Result<Vec<f64>> {
        if h.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: h.len(),
            });
        }
        Ok(softmax(&self.logits(h)))
    }

    fn logits(&self, h: &[f64]) -> Vec<f64> {
        (0..self.vocab_size())
            .map(|i| self.softmax_bias[i] + dot(self.softmax_weights.row(i), h))
            .collect()
    }

    fn hidden_for(&self, doc: &[f64], context: &[usize]) -> (Vec<f64>, usize) {
        match self.config.mode {
            Mode::Pvdbow => (doc.to_vec(), 1),
            Mode::Pvdm => {
                let ctx: Vec<&[f64]> = context.iter().map(|&w| self.word_vectors.row(w)).collect();
                (hidden_h(doc, &ctx, Mode::Pvdm), context.len() + 1)
            }
        }
    }

    /// Log probability of `target` and its gradient. `context` holds word
    /// ids and is ignored in PV-DBOW mode.
    pub fn instance_gradient(&self, doc: &[f64], context: &[usize], target: usize) -> InstanceGradient {
        let (hidden, inputs) = self.hidden_for(doc, context);
        let probs = softmax(&self.logits(&hidden));
        let log_prob = probs[target].ln();
        let mut logit_grad: Vec<f64> = probs.iter().map(|p| -p).collect();
        logit_grad[target] += 1.0;
        let mut hidden_grad = vec![0.0; self.dim()];
        for (i, &g) in logit_grad.iter().enumerate() {
            hidden_grad
                .iter_mut()
                .zip(self.softmax_weights.row(i))
                .for_each(|(h, u)| *h += g * u);
        }
        InstanceGradient {
            log_prob,
            hidden,
            logit_grad,
            hidden_grad,
            inputs,
        }
    }

    /// Mean log probability over every prediction in `docs`, where
    /// `docs[n]` holds model word ids for document row `n`. Every position
    /// is a target once; PV-DM uses the full window as context. No
    /// subsampling is applied.
    pub fn avg_log_prob(&self, docs: &[Vec<usize>]) -> Result<f64> {
        if docs.len() > self.doc_vectors.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.doc_vectors.rows(),
                actual: docs.len(),
            });
        }
        let mut total = 0.0;
        let mut count = 0usize;
        for (n, doc) in docs.iter().enumerate() {
            for i in 0..doc.len() {
                let context: Vec<usize> = context_positions(doc.len(), i, self.config.window)
                    .into_iter()
                    .map(|p| doc[p])
                    .collect();
                let (h, _) = self.hidden_for(self.doc_vectors.row(n), &context);
                let logits = self.logits(&h);
                let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let log_z = max + logits.iter().map(|y| (y - max).exp()).sum::<f64>().ln();
                total += logits[doc[i]] - log_z;
                count += 1;
            }
        }
        Ok(if count == 0 { 0.0 } else { total / count as f64 })
    }

    /// Corpus documents as model word ids; out-of-vocabulary words dropped.
    pub fn map_corpus(&self, corpus: &Corpus) -> Vec<Vec<usize>> {
        let index = self.term_index();
        (0..corpus.len())
            .map(|m| corpus.doc_terms(m).filter_map(|t| index.get(t).copied()).collect())
            .collect()
    }

    fn word_freqs(&self) -> Vec<f64> {
        let total: usize = self.word_counts.iter().sum();
        self.word_counts
            .iter()
            .map(|&c| c as f64 / total.max(1) as f64)
            .collect()
    }

    /// Vector for an unseen document given as terms. Unknown terms are skipped.
    pub fn infer_vector<S: AsRef<str>>(&self, tokens: &[S], seed: u64) -> Result<Vec<f64>> {
        let index = self.term_index();
        let ids: Vec<usize> = tokens
            .iter()
            .filter_map(|t| index.get(t.as_ref()).copied())
            .collect();
        self.infer_vector_ids(&ids, seed)
    }

    /// Optimizes a fresh document vector over `ids` with the training
    /// learning-rate schedule while `W`, `U` and `b` stay fixed.
    pub fn infer_vector_ids(&self, ids: &[usize], seed: u64) -> Result<Vec<f64>> {
        if ids.is_empty() {
            return Err(Error::NoKnownTokens);
        }
        if let Some(&bad) = ids.iter().find(|&&w| w >= self.vocab_size()) {
            return Err(Error::invalid(format!("word id {bad} out of range")));
        }
        let cfg = &self.config;
        let mut rng = seeded_rng(seed);
        let mut doc = init_vector(cfg.dim, &mut rng);
        let freqs = self.word_freqs();
        for rate in cfg.learning_rate_schedule() {
            let kept = subsample(ids, cfg.sample, &freqs, &mut rng);
            for inst in build_windows(kept.len(), cfg.window, cfg.mode, &mut rng) {
                let context: Vec<usize> = inst.context.iter().map(|&p| kept[p]).collect();
                let g = self.instance_gradient(&doc, &context, kept[inst.target]);
                let step = rate / g.inputs as f64;
                doc.iter_mut()
                    .zip(&g.hidden_grad)
                    .for_each(|(d, h)| *d += step * h);
            }
        }
        Ok(doc)
    }

    fn apply(&mut self, doc_row: usize, context: &[usize], g: &InstanceGradient, rate: f64) {
        let step = rate / g.inputs as f64;
        self.doc_vectors
            .row_mut(doc_row)
            .iter_mut()
            .zip(&g.hidden_grad)
            .for_each(|(d, h)| *d += step * h);
        if self.config.mode == Mode::Pvdm {
            for &w in context {
                self.word_vectors
                    .row_mut(w)
                    .iter_mut()
                    .zip(&g.hidden_grad)
                    .for_each(|(d, h)| *d += step * h);
            }
        }
        for (i, &gi) in g.logit_grad.iter().enumerate() {
            self.softmax_bias[i] += rate * gi;
            let scaled = rate * gi;
            self.softmax_weights
                .row_mut(i)
                .iter_mut()
                .zip(&g.hidden)
                .for_each(|(u, h)| *u += scaled * h);
        }
    }
}

fn init_vector(dim: usize, rng: &mut Rng) -> Vec<f64> {
    let bound = 0.5 / dim as f64;
    (0..dim).map(|_| rng.random_range(-bound..=bound)).collect()
}

/// Trains word, document and softmax parameters on `corpus`.
///
/// Single-threaded and fully determined by `cfg.seed`.
pub fn train(corpus: &Corpus, cfg: &Doc2VecConfig) -> Result<EmbeddingModel> {
    cfg.validate()?;
    let counts = corpus.vocab.collection_freq();
    let mut remap = vec![None; corpus.vocab.len()];
    let mut terms = Vec::new();
    let mut word_counts = Vec::new();
    for (t, &c) in counts.iter().enumerate() {
        if c >= cfg.min_count {
            remap[t] = Some(terms.len());
            terms.push(corpus.vocab.term(t).to_owned());
            word_counts.push(c);
        }
    }
    if terms.is_empty() {
        return Err(Error::EmptyCorpus(format!(
            "no word occurs at least {} times",
            cfg.min_count
        )));
    }
    let docs: Vec<Vec<usize>> = corpus
        .docs
        .iter()
        .map(|d| d.tokens.iter().filter_map(|&t| remap[t]).collect())
        .collect();

    let mut rng = seeded_rng(cfg.seed);
    let (v, n, dim) = (terms.len(), docs.len(), cfg.dim);
    let word_vectors = (0..v).flat_map(|_| init_vector(dim, &mut rng)).collect();
    let doc_vectors = (0..n).flat_map(|_| init_vector(dim, &mut rng)).collect();
    let mut model = EmbeddingModel {
        terms,
        word_counts,
        labels: corpus.labels().map(str::to_owned).collect(),
        word_vectors: Matrix::from_vec(v, dim, word_vectors)?,
        doc_vectors: Matrix::from_vec(n, dim, doc_vectors)?,
        softmax_weights: Matrix::zeros(v, dim),
        softmax_bias: vec![0.0; v],
        config: cfg.clone(),
    };
    fit(&mut model, &docs, &mut rng);
    Ok(model)
}

fn fit(model: &mut EmbeddingModel, docs: &[Vec<usize>], rng: &mut Rng) {
    let cfg = model.config.clone();
    let freqs = model.word_freqs();
    let mut order: Vec<usize> = (0..docs.len()).collect();
    for (epoch, rate) in cfg.learning_rate_schedule().into_iter().enumerate() {
        order.shuffle(rng);
        for &n in &order {
            let kept = subsample(&docs[n], cfg.sample, &freqs, rng);
            for inst in build_windows(kept.len(), cfg.window, cfg.mode, rng) {
                let context: Vec<usize> = inst.context.iter().map(|&p| kept[p]).collect();
                let g = model.instance_gradient(model.doc_vectors.row(n), &context, kept[inst.target]);
                model.apply(n, &context, &g, rate);
            }
        }
        log::debug!("doc2vec epoch {epoch} at rate {rate:.6}");
    }
}
