//! Configuration, persistence and the stage functions that chain the
//! models into the end-to-end workflow: preprocess, train LDA and
//! paragraph vectors, list nearest neighbors, and project to 2-D.

mod archive;
mod config;
mod io;

use std::fs;
use std::path::{Path, PathBuf};

pub use archive::{decode, encode, load_model, peek_kind, save_model, Archived, ModelKind, ARCHIVE_VERSION};
pub use config::{KnnSection, Paths, PipelineConfig, PreprocessSection};
pub use io::{format_matrix_csv, parse_matrix_csv, read_matrix_csv, title_lookup, write_matrix_csv};

use crate::corpus::{
    build_corpus, filter_vocabulary, preprocess_document, read_corpus_file, read_titles_file, read_word_list,
    write_corpus_file, Corpus, PreprocessConfig,
};
use crate::doc2vec::{self, EmbeddingModel};
use crate::error::{Error, Result};
use crate::lda::{self, LdaModel};
use crate::matrix::Matrix;
use crate::neighbors::{knn, Metric, Query};
use crate::tsne::{self, TsneConfig, TsneInput};

/// Words listed per topic in the pipeline's topic dump.
pub const TOPIC_WORDS: usize = 20;

pub const CORPUS_FILE: &str = "corpus.txt";
pub const LDA_MODEL_FILE: &str = "lda.model";
pub const LDA_FEATURES_FILE: &str = "lda_theta.csv";
pub const LDA_TOPICS_FILE: &str = "lda_topics.txt";
pub const LDA_KNN_FILE: &str = "lda_knn.txt";
pub const LDA_TSNE_FILE: &str = "lda_tsne.csv";
pub const DOC2VEC_MODEL_FILE: &str = "doc2vec.model";
pub const DOC2VEC_FEATURES_FILE: &str = "doc2vec_vectors.csv";
pub const DOC2VEC_KNN_FILE: &str = "doc2vec_knn.txt";
pub const DOC2VEC_TSNE_FILE: &str = "doc2vec_tsne.csv";

/// How a KNN query names its document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKey {
    Title(String),
    Index(usize),
}

impl QueryKey {
    pub fn resolve(&self, titles: &[String]) -> Result<usize> {
        match self {
            QueryKey::Title(t) => title_lookup(titles, t),
            QueryKey::Index(i) if *i < titles.len() => Ok(*i),
            QueryKey::Index(i) => Err(Error::invalid(format!(
                "index {i} out of range for {} titles",
                titles.len()
            ))),
        }
    }
}

/// Cleans raw documents and prunes the vocabulary to the top-scoring terms.
pub fn preprocess_corpus(raw: &[String], titles: &[String], cfg: &PreprocessConfig) -> Result<Corpus> {
    if raw.len() != titles.len() {
        return Err(Error::DimensionMismatch {
            expected: titles.len(),
            actual: raw.len(),
        });
    }
    let docs: Vec<Vec<String>> = raw.iter().map(|d| preprocess_document(d, cfg)).collect();
    let corpus = build_corpus(&docs, titles)?;
    if corpus.vocab.is_empty() {
        return Err(Error::EmptyCorpus("no tokens survive preprocessing".into()));
    }
    filter_vocabulary(&corpus, cfg.keep_top_n_terms, cfg.aggregate)
}

/// Reads the raw corpus, titles and word lists named by `paths`.
pub fn load_and_preprocess(paths: &Paths, section: &PreprocessSection) -> Result<Corpus> {
    let raw = read_corpus_file(&paths.corpus)?;
    let titles = read_titles_file(&paths.titles)?;
    let cfg = PreprocessConfig {
        stopwords: paths.stopwords.as_deref().map(read_word_list).transpose()?.unwrap_or_default(),
        drop_names: paths.names.as_deref().map(read_word_list).transpose()?.unwrap_or_default(),
        keep_top_n_terms: section.keep_top_n_terms,
        min_token_len: section.min_token_len,
        aggregate: section.aggregate,
    };
    preprocess_corpus(&raw, &titles, &cfg)
}

/// Reads an already preprocessed corpus: whitespace-separated tokens.
pub fn load_token_corpus(corpus: &Path, titles: &Path) -> Result<Corpus> {
    let docs: Vec<Vec<String>> = read_corpus_file(corpus)?
        .iter()
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect();
    let titles = read_titles_file(titles)?;
    if docs.len() != titles.len() {
        return Err(Error::DimensionMismatch {
            expected: titles.len(),
            actual: docs.len(),
        });
    }
    build_corpus(&docs, &titles)
}

/// Θ, or the unnormalized `N_mk + α_k` pseudo-counts.
pub fn lda_features(model: &LdaModel, unnormalized: bool) -> &Matrix {
    if unnormalized {
        &model.doc_topic_counts
    } else {
        &model.theta
    }
}

/// Ranked neighbors of one document, as a listing or CSV.
pub fn neighbor_report(
    features: &Matrix,
    titles: &[String],
    key: &QueryKey,
    k: usize,
    metric: Metric,
    csv: bool,
) -> Result<String> {
    if features.rows() != titles.len() {
        return Err(Error::DimensionMismatch {
            expected: titles.len(),
            actual: features.rows(),
        });
    }
    let list = knn(features, Query::Row(key.resolve(titles)?), k, metric)?;
    Ok(if csv {
        list.format_csv(titles)
    } else {
        list.format_listing(titles)
    })
}

pub fn layout(features: &Matrix, cfg: &TsneConfig) -> Result<Matrix> {
    Ok(tsne::run(TsneInput::Features(features), cfg)?.y)
}

/// Files written by [`run_pipeline`], in the order they were produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PipelineOutputs {
    pub files: Vec<PathBuf>,
}

fn write_text(path: PathBuf, text: &str, outputs: &mut PipelineOutputs) -> Result<()> {
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    outputs.files.push(path);
    Ok(())
}

fn write_csv(path: PathBuf, m: &Matrix, outputs: &mut PipelineOutputs) -> Result<()> {
    write_matrix_csv(&path, m)?;
    outputs.files.push(path);
    Ok(())
}

/// Runs every stage and writes all artifacts into `cfg.paths.output`.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutputs> {
    cfg.validate()?;
    let out = &cfg.paths.output;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut outputs = PipelineOutputs::default();

    log::info!("preprocessing {}", cfg.paths.corpus.display());
    let corpus = load_and_preprocess(&cfg.paths, &cfg.preprocess)?;
    let corpus_path = out.join(CORPUS_FILE);
    write_corpus_file(&corpus_path, &corpus)?;
    outputs.files.push(corpus_path);
    let titles: Vec<String> = corpus.labels().map(str::to_owned).collect();
    let key = match &cfg.knn.query {
        Some(t) => QueryKey::Title(t.clone()),
        None => QueryKey::Index(0),
    };
    key.resolve(&titles)?;

    log::info!(
        "training LDA: {} docs, {} terms, K = {}",
        corpus.len(),
        corpus.vocab.len(),
        cfg.lda.num_topics
    );
    let lda_model = lda::train(&corpus, &cfg.lda)?;
    let path = out.join(LDA_MODEL_FILE);
    save_model(&lda_model, &path)?;
    outputs.files.push(path);
    write_csv(out.join(LDA_FEATURES_FILE), &lda_model.theta, &mut outputs)?;
    write_text(out.join(LDA_TOPICS_FILE), &lda_model.format_topics(TOPIC_WORDS), &mut outputs)?;

    log::info!("training paragraph vectors: dim {}", cfg.doc2vec.dim);
    let emb: EmbeddingModel = doc2vec::train(&corpus, &cfg.doc2vec)?;
    let path = out.join(DOC2VEC_MODEL_FILE);
    save_model(&emb, &path)?;
    outputs.files.push(path);
    write_csv(out.join(DOC2VEC_FEATURES_FILE), &emb.doc_vectors, &mut outputs)?;

    for (features, knn_file, tsne_file) in [
        (&lda_model.theta, LDA_KNN_FILE, LDA_TSNE_FILE),
        (&emb.doc_vectors, DOC2VEC_KNN_FILE, DOC2VEC_TSNE_FILE),
    ] {
        let listing = neighbor_report(features, &titles, &key, cfg.knn.k, cfg.knn.metric, false)?;
        write_text(out.join(knn_file), &listing, &mut outputs)?;
        log::info!("projecting {tsne_file}");
        write_csv(out.join(tsne_file), &layout(features, &cfg.tsne)?, &mut outputs)?;
    }
    Ok(outputs)
}
