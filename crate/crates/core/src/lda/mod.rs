//! Latent Dirichlet allocation by collapsed Gibbs sampling.
//!
//! The per-document topic proportions Θ and per-topic word distributions
//! Φ are integrated out; only the topic assignment of each token is
//! sampled. Point estimates of Φ and Θ are read off the count tables
//! after sampling.
//!
//! With [`Readout::ThinnedAverage`] the estimates are averaged over
//! several post-burn-in states. Topic labels can switch between samples
//! of one chain, in which case the average blurs topics together; the
//! default reads out only the final state.

mod generate;
mod state;

use std::fmt::Write as _;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

pub use generate::{generate_corpus, sample_dirichlet, GeneratedCorpus, GeneratorConfig, TopicPrior};
pub use state::{LdaState, Priors};

use crate::corpus::{BagOfWords, Corpus};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{seeded_rng, Rng};

/// A Dirichlet parameter: one value for every component, or one per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Prior {
    Symmetric(f64),
    Vector(Vec<f64>),
}

impl Prior {
    pub fn resolve(&self, len: usize) -> Result<Vec<f64>> {
        match self {
            Prior::Symmetric(x) => Ok(vec![*x; len]),
            Prior::Vector(v) if v.len() == len => Ok(v.clone()),
            Prior::Vector(v) => Err(Error::DimensionMismatch {
                expected: len,
                actual: v.len(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    #[default]
    FinalSample,
    ThinnedAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaConfig {
    pub num_topics: usize,
    /// Document-topic prior; `None` means symmetric `1 / num_topics`.
    pub alpha: Option<Prior>,
    /// Topic-word prior.
    pub beta: Prior,
    pub sweeps: usize,
    pub burn_in: usize,
    pub sample_lag: usize,
    pub readout: Readout,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            num_topics: 50,
            alpha: None,
            beta: Prior::Symmetric(0.1),
            sweeps: 100,
            burn_in: 50,
            sample_lag: 10,
            readout: Readout::FinalSample,
            seed: 0,
        }
    }
}

impl LdaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_topics == 0 {
            return Err(Error::Config("num_topics must be at least 1".into()));
        }
        if self.sweeps == 0 || self.burn_in >= self.sweeps {
            return Err(Error::Config(format!(
                "burn_in ({}) must be smaller than sweeps ({})",
                self.burn_in, self.sweeps
            )));
        }
        if self.sample_lag == 0 {
            return Err(Error::Config("sample_lag must be at least 1".into()));
        }
        Ok(())
    }

    pub fn alpha_vector(&self) -> Result<Vec<f64>> {
        match &self.alpha {
            Some(p) => p.resolve(self.num_topics),
            None => Ok(vec![1.0 / self.num_topics as f64; self.num_topics]),
        }
    }

    pub fn priors(&self, vocab_size: usize) -> Result<Priors> {
        Priors::new(self.alpha_vector()?, self.beta.resolve(vocab_size)?)
    }
}

/// Trained topic model: Φ (K×V), Θ (M×K) and what is needed to use them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaModel {
    pub phi: Matrix,
    pub theta: Matrix,
    /// `N_mk + α_k` at the final state.
    pub doc_topic_counts: Matrix,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub terms: Vec<String>,
    pub labels: Vec<String>,
    pub config: LdaConfig,
}

/// Runs the chain and reads out Φ and Θ.
pub fn train(corpus: &Corpus, cfg: &LdaConfig) -> Result<LdaModel> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus("LDA needs at least one document".into()));
    }
    let priors = cfg.priors(corpus.vocab.len())?;
    let mut rng = seeded_rng(cfg.seed);
    let mut state = LdaState::init(corpus, cfg.num_topics, &mut rng)?;

    let mut acc: Option<(Matrix, Matrix)> = None;
    let mut samples = 0usize;
    for sweep in 1..=cfg.sweeps {
        state.sweep(&priors, &mut rng);
        let kept = sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.sample_lag == 0;
        if cfg.readout == Readout::ThinnedAverage && kept {
            let (phi, theta) = state.estimate_phi_theta(&priors);
            match &mut acc {
                None => acc = Some((phi, theta)),
                Some((ap, at)) => {
                    add_assign(ap, &phi);
                    add_assign(at, &theta);
                }
            }
            samples += 1;
        }
        log::debug!("lda sweep {sweep}/{}", cfg.sweeps);
    }

    let (phi, theta) = match acc {
        Some((mut phi, mut theta)) => {
            let s = samples as f64;
            phi.as_mut_slice().iter_mut().for_each(|x| *x /= s);
            theta.as_mut_slice().iter_mut().for_each(|x| *x /= s);
            (phi, theta)
        }
        // no post-burn-in sample landed on the lag grid
        None => state.estimate_phi_theta(&priors),
    };

    Ok(LdaModel {
        phi,
        theta,
        doc_topic_counts: state.doc_topic_pseudocounts(&priors),
        alpha: priors.alpha.clone(),
        beta: priors.beta.clone(),
        terms: corpus.vocab.terms().to_vec(),
        labels: corpus.labels().map(str::to_owned).collect(),
        config: cfg.clone(),
    })
}

fn add_assign(acc: &mut Matrix, x: &Matrix) {
    acc.as_mut_slice()
        .iter_mut()
        .zip(x.as_slice())
        .for_each(|(a, b)| *a += b);
}

pub(crate) fn sample_index(weights: &[f64], total: f64, rng: &mut Rng) -> usize {
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    // rounding left a sliver of mass past the end
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

/// Settings for folding an unseen document into a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InferConfig {
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for InferConfig {
    fn default() -> Self {
        InferConfig { sweeps: 50, seed: 0 }
    }
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.phi.rows()
    }

    pub fn vocab_size(&self) -> usize {
        self.phi.cols()
    }

    /// The `n` most probable terms of topic `k`, most probable first.
    pub fn top_words(&self, k: usize, n: usize) -> Result<Vec<(f64, String)>> {
        if k >= self.num_topics() {
            return Err(Error::invalid(format!(
                "topic {k} out of range (model has {})",
                self.num_topics()
            )));
        }
        let row = self.phi.row(k);
        let mut ids: Vec<usize> = (0..row.len()).collect();
        ids.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        Ok(ids
            .into_iter()
            .take(n)
            .map(|t| (row[t], self.terms[t].clone()))
            .collect())
    }

    /// Topic dump: a `Topic k` header, `n` lines of `%.3f term`, blank line.
    pub fn format_topics(&self, n: usize) -> String {
        let mut out = String::new();
        for k in 0..self.num_topics() {
            let _ = writeln!(out, "Topic {k}");
            for (p, term) in self.top_words(k, n).expect("k in range") {
                let _ = writeln!(out, "{p:.3} {term}");
            }
            out.push('\n');
        }
        out
    }

    /// Topic proportions of an unseen document with Φ held fixed.
    ///
    /// Term ids at or beyond the model's vocabulary are ignored.
    pub fn infer_theta(&self, doc: &BagOfWords, cfg: &InferConfig) -> Vec<f64> {
        let k_n = self.num_topics();
        let alpha_sum: f64 = self.alpha.iter().sum();
        let tokens: Vec<usize> = doc
            .tokens()
            .into_iter()
            .filter(|&t| t < self.vocab_size())
            .collect();
        if tokens.is_empty() {
            return self.alpha.iter().map(|a| a / alpha_sum).collect();
        }

        let mut rng = seeded_rng(cfg.seed);
        let mut z: Vec<usize> = tokens.iter().map(|_| rng.random_range(0..k_n)).collect();
        let mut counts = vec![0u32; k_n];
        z.iter().for_each(|&k| counts[k] += 1);
        let mut weights = vec![0.0; k_n];
        for _ in 0..cfg.sweeps {
            for (n, &t) in tokens.iter().enumerate() {
                counts[z[n]] -= 1;
                let mut total = 0.0;
                for (k, w) in weights.iter_mut().enumerate() {
                    *w = self.phi.get(k, t) * (f64::from(counts[k]) + self.alpha[k]);
                    total += *w;
                }
                z[n] = sample_index(&weights, total, &mut rng);
                counts[z[n]] += 1;
            }
        }
        let denom = tokens.len() as f64 + alpha_sum;
        counts
            .iter()
            .zip(&self.alpha)
            .map(|(&c, a)| (f64::from(c) + a) / denom)
            .collect()
    }
}
