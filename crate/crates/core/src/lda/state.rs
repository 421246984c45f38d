use rand::Rng as _;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::Rng;

/// Resolved Dirichlet hyperparameters for one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Priors {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    beta_sum: f64,
}

impl Priors {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::invalid("alpha must have at least one entry"));
        }
        if let Some(bad) = alpha.iter().chain(&beta).find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid(format!(
                "Dirichlet parameters must be positive, got {bad}"
            )));
        }
        let beta_sum = beta.iter().sum();
        Ok(Priors {
            alpha,
            beta,
            beta_sum,
        })
    }

    pub fn num_topics(&self) -> usize {
        self.alpha.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.beta.len()
    }

    pub fn beta_sum(&self) -> f64 {
        self.beta_sum
    }
}

/// Topic assignments of every token together with the count tables the
/// collapsed sampler conditions on.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaState {
    num_topics: usize,
    vocab_size: usize,
    words: Vec<Vec<usize>>,
    z: Vec<Vec<usize>>,
    /// K×V topic-term counts.
    n_kt: Vec<u32>,
    /// M×K document-topic counts.
    n_mk: Vec<u32>,
    n_k: Vec<u32>,
    n_m: Vec<u32>,
}

impl LdaState {
    /// Assigns every token a uniformly random topic.
    pub fn init(corpus: &Corpus, num_topics: usize, rng: &mut Rng) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus("LDA needs at least one document".into()));
        }
        let words: Vec<Vec<usize>> = corpus.docs.iter().map(|d| d.tokens.clone()).collect();
        let z = words
            .iter()
            .map(|doc| doc.iter().map(|_| rng.random_range(0..num_topics)).collect())
            .collect();
        Self::from_assignments(words, z, num_topics, corpus.vocab.len())
    }

    /// Builds a state from explicit assignments, counting everything from `z`.
    pub fn from_assignments(
        words: Vec<Vec<usize>>,
        z: Vec<Vec<usize>>,
        num_topics: usize,
        vocab_size: usize,
    ) -> Result<Self> {
        if num_topics == 0 {
            return Err(Error::invalid("need at least one topic"));
        }
        if words.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: words.len(),
                actual: z.len(),
            });
        }
        let m = words.len();
        let mut state = LdaState {
            num_topics,
            vocab_size,
            n_kt: vec![0; num_topics * vocab_size],
            n_mk: vec![0; m * num_topics],
            n_k: vec![0; num_topics],
            n_m: vec![0; m],
            words,
            z,
        };
        for d in 0..m {
            if state.words[d].len() != state.z[d].len() {
                return Err(Error::DimensionMismatch {
                    expected: state.words[d].len(),
                    actual: state.z[d].len(),
                });
            }
            for n in 0..state.words[d].len() {
                let (t, k) = (state.words[d][n], state.z[d][n]);
                if t >= vocab_size || k >= num_topics {
                    return Err(Error::invalid(format!(
                        "token ({d}, {n}) has term {t} / topic {k} out of range"
                    )));
                }
                state.add(d, t, k);
            }
        }
        Ok(state)
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn num_docs(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.z
    }

    pub fn topic_term_count(&self, k: usize, t: usize) -> u32 {
        self.n_kt[k * self.vocab_size + t]
    }

    pub fn doc_topic_count(&self, m: usize, k: usize) -> u32 {
        self.n_mk[m * self.num_topics + k]
    }

    pub fn topic_total(&self, k: usize) -> u32 {
        self.n_k[k]
    }

    pub fn doc_length(&self, m: usize) -> u32 {
        self.n_m[m]
    }

    #[inline]
    fn add(&mut self, m: usize, t: usize, k: usize) {
        self.n_kt[k * self.vocab_size + t] += 1;
        self.n_mk[m * self.num_topics + k] += 1;
        self.n_k[k] += 1;
        self.n_m[m] += 1;
    }

    #[inline]
    fn remove(&mut self, m: usize, t: usize, k: usize) {
        self.n_kt[k * self.vocab_size + t] -= 1;
        self.n_mk[m * self.num_topics + k] -= 1;
        self.n_k[k] -= 1;
        self.n_m[m] -= 1;
    }

    /// Removes token `(m, n)` from the counts, leaving its assignment in
    /// `z` untouched. Returns the topic it held.
    pub fn exclude(&mut self, m: usize, n: usize) -> usize {
        let (t, k) = (self.words[m][n], self.z[m][n]);
        self.remove(m, t, k);
        k
    }

    /// Assigns token `(m, n)` to topic `k` and adds it back to the counts.
    /// The token must currently be excluded.
    pub fn include(&mut self, m: usize, n: usize, k: usize) {
        let t = self.words[m][n];
        self.z[m][n] = k;
        self.add(m, t, k);
    }

    /// Unnormalized full conditional of token `(m, n)` written into `out`;
    /// returns the total mass. The token must be excluded from the counts.
    ///
    /// The document-side normalizer `Σ_z (N_mz + α_z)` does not depend on
    /// the candidate topic and is left out.
    pub fn conditional_weights(&self, m: usize, n: usize, priors: &Priors, out: &mut [f64]) -> f64 {
        let t = self.words[m][n];
        let beta_t = priors.beta[t];
        let mut total = 0.0;
        for (k, w) in out.iter_mut().enumerate() {
            let word_part = (f64::from(self.n_kt[k * self.vocab_size + t]) + beta_t)
                / (f64::from(self.n_k[k]) + priors.beta_sum);
            let doc_part = f64::from(self.n_mk[m * self.num_topics + k]) + priors.alpha[k];
            *w = word_part * doc_part;
            total += *w;
        }
        total
    }

    /// Normalized full conditional `p(z_{m,n} = k | z_{-(m,n)}, w)`.
    pub fn full_conditional(&self, m: usize, n: usize, priors: &Priors) -> Vec<f64> {
        let mut p = vec![0.0; self.num_topics];
        let total = self.conditional_weights(m, n, priors, &mut p);
        p.iter_mut().for_each(|x| *x /= total);
        p
    }

    /// Visits every token once in document order and resamples its topic.
    pub fn sweep(&mut self, priors: &Priors, rng: &mut Rng) {
        let mut weights = vec![0.0; self.num_topics];
        for m in 0..self.words.len() {
            for n in 0..self.words[m].len() {
                self.exclude(m, n);
                let total = self.conditional_weights(m, n, priors, &mut weights);
                let k = super::sample_index(&weights, total, rng);
                self.include(m, n, k);
            }
        }
    }

    /// Topic-word and document-topic point estimates from the current counts.
    pub fn estimate_phi_theta(&self, priors: &Priors) -> (Matrix, Matrix) {
        let (k_n, v) = (self.num_topics, self.vocab_size);
        let mut phi = Matrix::zeros(k_n, v);
        for k in 0..k_n {
            let denom = f64::from(self.n_k[k]) + priors.beta_sum;
            for (t, p) in phi.row_mut(k).iter_mut().enumerate() {
                *p = (f64::from(self.n_kt[k * v + t]) + priors.beta[t]) / denom;
            }
        }
        let alpha_sum: f64 = priors.alpha.iter().sum();
        let mut theta = Matrix::zeros(self.num_docs(), k_n);
        for m in 0..self.num_docs() {
            let denom = f64::from(self.n_m[m]) + alpha_sum;
            for (k, p) in theta.row_mut(m).iter_mut().enumerate() {
                *p = (f64::from(self.n_mk[m * k_n + k]) + priors.alpha[k]) / denom;
            }
        }
        (phi, theta)
    }

    /// `N_mk + α_k` per document: the unnormalized topic statistics.
    pub fn doc_topic_pseudocounts(&self, priors: &Priors) -> Matrix {
        let mut out = Matrix::zeros(self.num_docs(), self.num_topics);
        for m in 0..self.num_docs() {
            for (k, x) in out.row_mut(m).iter_mut().enumerate() {
                *x = f64::from(self.doc_topic_count(m, k)) + priors.alpha[k];
            }
        }
        out
    }

    /// Checks every count table against a recount from `z`.
    pub fn is_consistent(&self) -> bool {
        match Self::from_assignments(
            self.words.clone(),
            self.z.clone(),
            self.num_topics,
            self.vocab_size,
        ) {
            Ok(fresh) => {
                fresh.n_kt == self.n_kt
                    && fresh.n_mk == self.n_mk
                    && fresh.n_k == self.n_k
                    && fresh.n_m == self.n_m
            }
            Err(_) => false,
        }
    }
}
