//! Text preprocessing, vocabulary construction, TF-IDF scoring and the
//! vector similarity used across the crate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, norm};

/// Term ↔ id maps plus per-term document and collection frequencies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    term_to_id: HashMap<String, usize>,
    id_to_term: Vec<String>,
    doc_freq: Vec<usize>,
    collection_freq: Vec<usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.id_to_term.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_term.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.term_to_id.get(term).copied()
    }

    pub fn term(&self, id: usize) -> &str {
        &self.id_to_term[id]
    }

    pub fn terms(&self) -> &[String] {
        &self.id_to_term
    }

    /// Number of documents containing each term.
    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    /// Total occurrences of each term over the corpus.
    pub fn collection_freq(&self) -> &[usize] {
        &self.collection_freq
    }

    fn intern(&mut self, term: &str) -> usize {
        if let Some(&id) = self.term_to_id.get(term) {
            return id;
        }
        let id = self.id_to_term.len();
        self.term_to_id.insert(term.to_owned(), id);
        self.id_to_term.push(term.to_owned());
        self.doc_freq.push(0);
        self.collection_freq.push(0);
        id
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenizedDocument {
    pub label: String,
    /// Vocabulary ids in text order.
    pub tokens: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub docs: Vec<TokenizedDocument>,
    pub vocab: Vocabulary,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn num_tokens(&self) -> usize {
        self.docs.iter().map(|d| d.tokens.len()).sum()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.docs.iter().map(|d| d.label.as_str())
    }

    /// Recomputes `(doc_freq, collection_freq)` from the documents.
    pub fn recount(&self) -> (Vec<usize>, Vec<usize>) {
        let v = self.vocab.len();
        let mut df = vec![0; v];
        let mut cf = vec![0; v];
        let mut seen = vec![usize::MAX; v];
        for (m, doc) in self.docs.iter().enumerate() {
            for &t in &doc.tokens {
                cf[t] += 1;
                if seen[t] != m {
                    seen[t] = m;
                    df[t] += 1;
                }
            }
        }
        (df, cf)
    }

    /// Documents rendered back to whitespace-separated terms.
    pub fn doc_terms(&self, m: usize) -> impl Iterator<Item = &str> {
        self.docs[m].tokens.iter().map(|&t| self.vocab.term(t))
    }

    pub fn bag_of_words(&self, m: usize) -> BagOfWords {
        BagOfWords::from_tokens(&self.docs[m].tokens)
    }
}

/// Sparse term-id → count map for one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagOfWords(BTreeMap<usize, usize>);

impl BagOfWords {
    pub fn from_tokens(tokens: &[usize]) -> Self {
        let mut counts = BTreeMap::new();
        for &t in tokens {
            *counts.entry(t).or_insert(0) += 1;
        }
        BagOfWords(counts)
    }

    pub fn count(&self, term: usize) -> usize {
        self.0.get(&term).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&t, &c)| (t, c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expands back into a token list in ascending id order.
    pub fn tokens(&self) -> Vec<usize> {
        self.iter()
            .flat_map(|(t, c)| std::iter::repeat_n(t, c))
            .collect()
    }
}

/// How per-document TF-IDF scores are combined into one score per term
/// when pruning the vocabulary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreAggregate {
    #[default]
    Max,
    Sum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub stopwords: HashSet<String>,
    /// Common personal names to drop, supplied by the user.
    pub drop_names: HashSet<String>,
    pub keep_top_n_terms: usize,
    pub min_token_len: usize,
    pub aggregate: ScoreAggregate,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            stopwords: HashSet::new(),
            drop_names: HashSet::new(),
            keep_top_n_terms: 100_000,
            min_token_len: 1,
            aggregate: ScoreAggregate::Max,
        }
    }
}

/// Lowercases, strips punctuation and non-ASCII characters, and drops
/// numbers, stopwords and listed names. Token order is preserved.
pub fn preprocess_document(raw: &str, cfg: &PreprocessConfig) -> Vec<String> {
    let cleaned: String = raw
        .chars()
        .filter(char::is_ascii)
        .map(|c| {
            if c.is_ascii_punctuation() {
                ' '
            } else {
                c.to_ascii_lowercase()
            }
        })
        .collect();
    cleaned
        .split_whitespace()
        .filter(|tok| !tok.bytes().all(|b| b.is_ascii_digit()))
        .filter(|tok| tok.len() >= cfg.min_token_len.max(1))
        .filter(|tok| !cfg.stopwords.contains(*tok) && !cfg.drop_names.contains(*tok))
        .map(str::to_owned)
        .collect()
}

/// Indexes token lists into a corpus. Term ids are assigned in order of
/// first occurrence.
pub fn build_corpus<S: AsRef<str>>(docs: &[Vec<S>], labels: &[String]) -> Result<Corpus> {
    if docs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: docs.len(),
            actual: labels.len(),
        });
    }
    let mut seen_labels = HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen_labels.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }

    let mut vocab = Vocabulary::default();
    let mut out = Vec::with_capacity(docs.len());
    for (tokens, label) in docs.iter().zip(labels) {
        let ids = tokens.iter().map(|t| vocab.intern(t.as_ref())).collect();
        out.push(TokenizedDocument {
            label: label.clone(),
            tokens: ids,
        });
    }
    let mut corpus = Corpus { docs: out, vocab };
    let (df, cf) = corpus.recount();
    corpus.vocab.doc_freq = df;
    corpus.vocab.collection_freq = cf;
    Ok(corpus)
}

fn tf_idf_counts(tf: usize, num_docs: usize, df: usize) -> f64 {
    if tf == 0 {
        return 0.0;
    }
    tf as f64 * (num_docs as f64 / df as f64).ln()
}

/// `f_{t,d} · ln(D / f_{t,D})` for a term in document `doc`.
pub fn tf_idf(term: &str, doc: usize, corpus: &Corpus) -> Result<f64> {
    let id = corpus
        .vocab
        .id(term)
        .ok_or_else(|| Error::UnknownTerm(term.to_owned()))?;
    let d = corpus
        .docs
        .get(doc)
        .ok_or_else(|| Error::invalid(format!("document index {doc} out of range")))?;
    let tf = d.tokens.iter().filter(|&&t| t == id).count();
    Ok(tf_idf_counts(tf, corpus.len(), corpus.vocab.doc_freq[id]))
}

/// Corpus-level TF-IDF score of every term, aggregated over documents.
pub fn term_scores(corpus: &Corpus, aggregate: ScoreAggregate) -> Vec<f64> {
    let mut scores = vec![0.0; corpus.vocab.len()];
    let n = corpus.len();
    for m in 0..n {
        for (t, tf) in corpus.bag_of_words(m).iter() {
            let s = tf_idf_counts(tf, n, corpus.vocab.doc_freq[t]);
            match aggregate {
                ScoreAggregate::Max => scores[t] = f64::max(scores[t], s),
                ScoreAggregate::Sum => scores[t] += s,
            }
        }
    }
    scores
}

/// Keeps the `keep_top_n` highest-scoring terms (ties broken by term
/// order) and re-indexes the documents over the survivors.
pub fn filter_vocabulary(
    corpus: &Corpus,
    keep_top_n: usize,
    aggregate: ScoreAggregate,
) -> Result<Corpus> {
    if keep_top_n == 0 {
        return Err(Error::invalid("keep_top_n must be at least 1"));
    }
    let scores = term_scores(corpus, aggregate);
    let mut order: Vec<usize> = (0..corpus.vocab.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| corpus.vocab.term(a).cmp(corpus.vocab.term(b)))
    });
    let mut keep = vec![false; corpus.vocab.len()];
    for &t in order.iter().take(keep_top_n) {
        keep[t] = true;
    }

    let docs: Vec<Vec<&str>> = corpus
        .docs
        .iter()
        .map(|d| {
            d.tokens
                .iter()
                .filter(|&&t| keep[t])
                .map(|&t| corpus.vocab.term(t))
                .collect()
        })
        .collect();
    let labels: Vec<String> = corpus.labels().map(str::to_owned).collect();
    build_corpus(&docs, &labels)
}

/// `a·b / (‖a‖‖b‖)`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text.lines().map(|l| l.trim_end_matches('\r').to_owned()).collect())
}

/// Reads a corpus file: one document per line, whitespace-separated tokens.
pub fn read_corpus_file(path: &Path) -> Result<Vec<String>> {
    read_lines(path)
}

/// Reads a titles file: one title per line, index-aligned with the corpus.
pub fn read_titles_file(path: &Path) -> Result<Vec<String>> {
    Ok(read_lines(path)?
        .into_iter()
        .map(|l| l.trim().to_owned())
        .collect())
}

/// Reads a word list (stopwords, names): one term per line, lowercased.
pub fn read_word_list(path: &Path) -> Result<HashSet<String>> {
    Ok(read_lines(path)?
        .into_iter()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

pub fn write_corpus_file(path: &Path, corpus: &Corpus) -> Result<()> {
    let mut out = String::new();
    for m in 0..corpus.len() {
        let terms: Vec<&str> = corpus.doc_terms(m).collect();
        out.push_str(&terms.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("doc{i}")).collect()
    }

    fn cfg_with_stops(stops: &[&str]) -> PreprocessConfig {
        PreprocessConfig {
            stopwords: stops.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    #[test]
    fn preprocess_drops_stopwords_and_numbers() {
        let cfg = cfg_with_stops(&["the"]);
        assert_eq!(
            preprocess_document("The CAT sat 42 times", &cfg),
            vec!["cat", "sat", "times"]
        );
    }

    #[test]
    fn preprocess_only_stopwords_is_empty() {
        let cfg = cfg_with_stops(&["the", "a", "of"]);
        assert!(preprocess_document("The a OF the", &cfg).is_empty());
    }

    #[test]
    fn preprocess_strips_non_ascii() {
        let cfg = PreprocessConfig::default();
        assert_eq!(preprocess_document("café", &cfg), vec!["caf"]);
        assert!(preprocess_document("日本", &cfg).is_empty());
    }

    #[test]
    fn preprocess_drops_names_and_punctuation() {
        let cfg = PreprocessConfig {
            drop_names: ["john".to_string()].into(),
            ..Default::default()
        };
        assert_eq!(
            preprocess_document("John, the farmer's son.", &cfg),
            vec!["the", "farmer", "s", "son"]
        );
    }

    #[test]
    fn shared_term_doc_freq() {
        let c = build_corpus(&[vec!["a", "b"], vec!["b", "c", "b"]], &labels(2)).unwrap();
        let b = c.vocab.id("b").unwrap();
        assert_eq!(c.vocab.doc_freq()[b], 2);
        assert_eq!(c.vocab.collection_freq()[b], 3);
    }

    #[test]
    fn empty_corpus() {
        let c = build_corpus::<&str>(&[], &[]).unwrap();
        assert_eq!(c.vocab.len(), 0);
        assert!(c.is_empty());
    }

    #[test]
    fn spanish_demo_vocabulary() {
        let docs = vec![
            vec!["el", "gato", "canta"],
            vec!["el", "gato", "negro", "es", "bellisimo"],
            vec!["el", "pato", "canta"],
        ];
        let c = build_corpus(&docs, &labels(3)).unwrap();
        assert_eq!(c.vocab.len(), 7);
        assert_eq!(
            c.vocab.terms(),
            &["el", "gato", "canta", "negro", "es", "bellisimo", "pato"]
        );
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = build_corpus(&[vec!["a"], vec!["b"]], &["x".into(), "x".into()]);
        assert!(matches!(err, Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn label_count_mismatch_rejected() {
        assert!(build_corpus(&[vec!["a"]], &labels(2)).is_err());
    }

    #[test]
    fn tf_idf_values() {
        // d0 = [x x y], d1 = [y], d2 = [y z]
        let c = build_corpus(
            &[vec!["x", "x", "y"], vec!["y"], vec!["y", "z"]],
            &labels(3),
        )
        .unwrap();
        assert!((tf_idf("x", 0, &c).unwrap() - 2.0 * 3f64.ln()).abs() < 1e-12);
        assert!((tf_idf("x", 0, &c).unwrap() - 2.1972).abs() < 1e-4);
        assert_eq!(tf_idf("y", 0, &c).unwrap(), 0.0);
        assert_eq!(tf_idf("x", 1, &c).unwrap(), 0.0);
        assert!(matches!(tf_idf("nope", 0, &c), Err(Error::UnknownTerm(_))));
    }

    #[test]
    fn filter_keeps_everything_when_large() {
        let c = build_corpus(&[vec!["a", "b"], vec!["b", "c"]], &labels(2)).unwrap();
        let f = filter_vocabulary(&c, 10, ScoreAggregate::Max).unwrap();
        assert_eq!(f, c);
    }

    #[test]
    fn filter_rejects_zero() {
        let c = build_corpus(&[vec!["a"]], &labels(1)).unwrap();
        assert!(filter_vocabulary(&c, 0, ScoreAggregate::Max).is_err());
    }

    #[test]
    fn filter_matches_exhaustive_scoring() {
        let docs = vec![
            vec!["apple", "apple", "pear", "fig"],
            vec!["pear", "kiwi", "kiwi", "kiwi"],
            vec!["fig", "pear", "plum"],
        ];
        let c = build_corpus(&docs, &labels(3)).unwrap();

        // Independent scoring straight from the raw strings.
        let mut terms: Vec<&str> = docs.iter().flatten().copied().collect();
        terms.sort();
        terms.dedup();
        let d = docs.len() as f64;
        let mut scored: Vec<(f64, &str)> = terms
            .iter()
            .map(|&t| {
                let df = docs.iter().filter(|doc| doc.contains(&t)).count() as f64;
                let best = docs
                    .iter()
                    .map(|doc| doc.iter().filter(|&&w| w == t).count() as f64 * (d / df).ln())
                    .fold(0.0, f64::max);
                (best, t)
            })
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(b.1)));

        for n in 1..=terms.len() {
            let f = filter_vocabulary(&c, n, ScoreAggregate::Max).unwrap();
            let mut kept: Vec<&str> = f.vocab.terms().iter().map(String::as_str).collect();
            kept.sort();
            let mut expected: Vec<&str> = scored.iter().take(n).map(|s| s.1).collect();
            expected.sort();
            assert_eq!(kept, expected, "n = {n}");
        }
    }

    #[test]
    fn sum_aggregate_differs_from_max() {
        let c = build_corpus(
            &[vec!["a", "a", "a"], vec!["b", "c"], vec!["b", "c"], vec!["d"]],
            &labels(4),
        )
        .unwrap();
        let max = term_scores(&c, ScoreAggregate::Max);
        let sum = term_scores(&c, ScoreAggregate::Sum);
        let b = c.vocab.id("b").unwrap();
        assert!((sum[b] - 2.0 * max[b]).abs() < 1e-12);
    }

    #[test]
    fn cosine_examples() {
        let v = [0.3, -1.2, 4.0];
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        let s = cosine_similarity(&[1.0, 1.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 0.0]),
            Err(Error::ZeroVector)
        ));
        assert!(cosine_similarity(&[1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn bag_of_words_totals() {
        let b = BagOfWords::from_tokens(&[3, 1, 3, 3]);
        assert_eq!(b.count(3), 3);
        assert_eq!(b.total(), 4);
        assert_eq!(b.tokens(), vec![1, 3, 3, 3]);
    }
}
