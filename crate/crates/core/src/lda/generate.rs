use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use super::{sample_index, Prior};
use crate::corpus::{build_corpus, Corpus};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::{seeded_rng, Rng};

/// Topic-word prior for the generator: shared by all topics, or given
/// per topic so planted topics can live on chosen blocks of words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopicPrior {
    Shared(Prior),
    PerTopic(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub num_topics: usize,
    pub vocab_size: usize,
    pub num_docs: usize,
    pub alpha: Prior,
    pub beta: TopicPrior,
    /// Poisson mean of the document length.
    pub mean_doc_len: f64,
    pub seed: u64,
}

/// A sampled corpus along with the parameters it was drawn from.
///
/// Generator term `t` is named `w{t}`; `phi` columns are in generator
/// order, which differs from the corpus vocabulary order.
#[derive(Debug, Clone)]
pub struct GeneratedCorpus {
    pub corpus: Corpus,
    pub phi: Matrix,
    pub theta: Matrix,
}

impl GeneratedCorpus {
    /// True Φ re-indexed to the corpus vocabulary (terms that were never
    /// drawn are dropped).
    pub fn phi_in_corpus_order(&self) -> Matrix {
        let vocab = &self.corpus.vocab;
        let mut out = Matrix::zeros(self.phi.rows(), vocab.len());
        for (id, term) in vocab.terms().iter().enumerate() {
            let t: usize = term[1..].parse().expect("generator term name");
            for k in 0..self.phi.rows() {
                out.set(k, id, self.phi.get(k, t));
            }
        }
        out
    }
}

/// One draw from `Dirichlet(alpha)` via normalized Gamma variates.
pub fn sample_dirichlet(alpha: &[f64], rng: &mut Rng) -> Result<Vec<f64>> {
    let mut draw = Vec::with_capacity(alpha.len());
    for &a in alpha {
        let g = Gamma::new(a, 1.0)
            .map_err(|e| Error::invalid(format!("Dirichlet parameter {a}: {e}")))?;
        draw.push(g.sample(rng));
    }
    let total: f64 = draw.iter().sum();
    if total > 0.0 && total.is_finite() {
        draw.iter_mut().for_each(|x| *x /= total);
    } else {
        // every Gamma variate underflowed: all mass on one component
        let hot = sample_index(alpha, alpha.iter().sum(), rng);
        draw.iter_mut().enumerate().for_each(|(i, x)| *x = f64::from(i == hot));
    }
    Ok(draw)
}

/// Samples a corpus from the LDA generative process.
pub fn generate_corpus(cfg: &GeneratorConfig) -> Result<GeneratedCorpus> {
    if cfg.num_topics == 0 || cfg.vocab_size == 0 {
        return Err(Error::Config("generator needs K ≥ 1 and V ≥ 1".into()));
    }
    if !(cfg.mean_doc_len > 0.0) {
        return Err(Error::Config("mean_doc_len must be positive".into()));
    }
    let mut rng = seeded_rng(cfg.seed);
    let (k_n, v) = (cfg.num_topics, cfg.vocab_size);

    let topic_priors: Vec<Vec<f64>> = match &cfg.beta {
        TopicPrior::Shared(p) => vec![p.resolve(v)?; k_n],
        TopicPrior::PerTopic(rows) => {
            if rows.len() != k_n {
                return Err(Error::DimensionMismatch {
                    expected: k_n,
                    actual: rows.len(),
                });
            }
            for r in rows {
                Prior::Vector(r.clone()).resolve(v)?;
            }
            rows.clone()
        }
    };
    let mut phi = Matrix::zeros(k_n, v);
    for (k, beta) in topic_priors.iter().enumerate() {
        phi.row_mut(k).copy_from_slice(&sample_dirichlet(beta, &mut rng)?);
    }

    let alpha = cfg.alpha.resolve(k_n)?;
    let lengths = Poisson::new(cfg.mean_doc_len)
        .map_err(|e| Error::Config(format!("mean_doc_len: {e}")))?;
    let mut theta = Matrix::zeros(cfg.num_docs, k_n);
    let mut docs = Vec::with_capacity(cfg.num_docs);
    for m in 0..cfg.num_docs {
        theta.row_mut(m).copy_from_slice(&sample_dirichlet(&alpha, &mut rng)?);
        let len = loop {
            let n: f64 = lengths.sample(&mut rng);
            if n >= 1.0 {
                break n as usize;
            }
        };
        let mut doc = Vec::with_capacity(len);
        for _ in 0..len {
            let k = sample_index(theta.row(m), 1.0, &mut rng);
            let t = sample_index(phi.row(k), 1.0, &mut rng);
            doc.push(format!("w{t}"));
        }
        docs.push(doc);
    }
    let labels: Vec<String> = (0..cfg.num_docs).map(|m| format!("doc{m}")).collect();
    Ok(GeneratedCorpus {
        corpus: build_corpus(&docs, &labels)?,
        phi,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(k: usize, v: usize, m: usize) -> GeneratorConfig {
        GeneratorConfig {
            num_topics: k,
            vocab_size: v,
            num_docs: m,
            alpha: Prior::Symmetric(0.5),
            beta: TopicPrior::Shared(Prior::Symmetric(0.5)),
            mean_doc_len: 20.0,
            seed: 11,
        }
    }

    #[test]
    fn dirichlet_means_match_symmetric_prior() {
        let mut rng = seeded_rng(7);
        let k = 4;
        let mut sums = vec![0.0; k];
        let draws = 100_000;
        for _ in 0..draws {
            let d = sample_dirichlet(&[0.3; 4], &mut rng).unwrap();
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            sums.iter_mut().zip(&d).for_each(|(s, x)| *s += x);
        }
        for s in sums {
            let mean = s / draws as f64;
            assert!((mean - 0.25).abs() < 0.01 * 0.25, "mean {mean}");
        }
    }

    #[test]
    fn single_topic_uses_phi_zero() {
        let g = generate_corpus(&base(1, 5, 10)).unwrap();
        assert_eq!(g.theta.as_slice(), &[1.0; 10]);
        let phi = g.phi_in_corpus_order();
        for id in 0..g.corpus.vocab.len() {
            assert!(phi.get(0, id) > 0.0);
        }
    }

    #[test]
    fn block_topics_stay_in_their_blocks() {
        let mut cfg = base(2, 10, 50);
        cfg.beta = TopicPrior::PerTopic(vec![
            (0..10).map(|t| if t < 5 { 1.0 } else { 1e-9 }).collect(),
            (0..10).map(|t| if t >= 5 { 1.0 } else { 1e-9 }).collect(),
        ]);
        cfg.alpha = Prior::Symmetric(0.01);
        let g = generate_corpus(&cfg).unwrap();
        for m in 0..g.corpus.len() {
            let ids: Vec<usize> = g
                .corpus
                .doc_terms(m)
                .map(|w| w[1..].parse().unwrap())
                .collect();
            // each generated word comes from a block of a topic with weight in θ_m
            for t in ids {
                let k = usize::from(t >= 5);
                assert!(g.theta.get(m, k) > 0.0);
                assert!(g.phi.get(k, t) > 1e-6);
            }
        }
    }

    #[test]
    fn mean_length_matches_poisson() {
        let mut cfg = base(2, 5, 10_000);
        cfg.mean_doc_len = 20.0;
        let g = generate_corpus(&cfg).unwrap();
        let mean = g.corpus.num_tokens() as f64 / 10_000.0;
        let se = (20.0f64 / 10_000.0).sqrt();
        assert!((mean - 20.0).abs() < 3.0 * se, "mean {mean}");
        assert!(g.corpus.docs.iter().all(|d| !d.tokens.is_empty()));
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = base(2, 5, 3);
        cfg.mean_doc_len = 0.0;
        assert!(generate_corpus(&cfg).is_err());
        let mut cfg = base(2, 5, 3);
        cfg.beta = TopicPrior::PerTopic(vec![vec![1.0; 5]]);
        assert!(generate_corpus(&cfg).is_err());
    }
}
