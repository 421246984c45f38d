use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::ScoreAggregate;
use crate::doc2vec::Doc2VecConfig;
use crate::error::{Error, Result};
use crate::lda::LdaConfig;
use crate::neighbors::{Metric, DEFAULT_K};
use crate::tsne::TsneConfig;

/// Input and output locations. Relative paths in a config file are taken
/// relative to the directory holding that file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Raw documents, one per line.
    pub corpus: PathBuf,
    /// One title per line, index-aligned with `corpus`.
    pub titles: PathBuf,
    pub stopwords: Option<PathBuf>,
    /// Personal names removed during preprocessing.
    pub names: Option<PathBuf>,
    pub output: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            corpus: "plots.txt".into(),
            titles: "titles.txt".into(),
            stopwords: None,
            names: None,
            output: "out".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessSection {
    pub keep_top_n_terms: usize,
    pub min_token_len: usize,
    pub aggregate: ScoreAggregate,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        let d = crate::corpus::PreprocessConfig::default();
        PreprocessSection {
            keep_top_n_terms: d.keep_top_n_terms,
            min_token_len: d.min_token_len,
            aggregate: d.aggregate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnSection {
    /// Neighbors besides the query itself.
    pub k: usize,
    pub metric: Metric,
    /// Title whose neighbors `pipeline` lists; the first document if unset.
    pub query: Option<String>,
}

impl Default for KnnSection {
    fn default() -> Self {
        KnnSection {
            k: DEFAULT_K,
            metric: Metric::Cosine,
            query: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// When set, replaces the seed of every stage.
    pub seed: Option<u64>,
    pub paths: Paths,
    pub preprocess: PreprocessSection,
    pub lda: LdaConfig,
    pub doc2vec: Doc2VecConfig,
    pub tsne: TsneConfig,
    pub knn: KnnSection,
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.apply_global_seed();
        Ok(cfg)
    }

    /// Reads a TOML config and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(dir) = path.parent() {
            cfg.paths.resolve_against(dir);
        }
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.apply_global_seed();
    }

    fn apply_global_seed(&mut self) {
        if let Some(s) = self.seed {
            self.lda.seed = s;
            self.doc2vec.seed = s;
            self.tsne.seed = s;
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.lda.validate()?;
        self.doc2vec.validate()?;
        self.tsne.validate()?;
        if self.knn.k == 0 {
            return Err(Error::Config("knn.k must be at least 1".into()));
        }
        if self.preprocess.keep_top_n_terms == 0 {
            return Err(Error::Config("preprocess.keep_top_n_terms must be at least 1".into()));
        }
        Ok(())
    }
}

impl Paths {
    fn resolve_against(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        fix(&mut self.corpus);
        fix(&mut self.titles);
        fix(&mut self.output);
        if let Some(p) = self.stopwords.as_mut() {
            fix(p);
        }
        if let Some(p) = self.names.as_mut() {
            fix(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(PipelineConfig::from_toml_str("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn global_seed_reaches_every_stage() {
        let cfg = PipelineConfig::from_toml_str("seed = 9\n[lda]\nseed = 1\n").unwrap();
        assert_eq!((cfg.lda.seed, cfg.doc2vec.seed, cfg.tsne.seed), (9, 9, 9));
    }

    #[test]
    fn sections_parse() {
        let text = r#"
            [paths]
            corpus = "a.txt"
            titles = "b.txt"
            stopwords = "s.txt"
            [lda]
            num_topics = 8
            alpha = 0.5
            [doc2vec]
            mode = "pvdbow"
            [tsne]
            kernel = "gaussian"
            [knn]
            metric = "euclidean"
            query = "The Godfather"
        "#;
        let cfg = PipelineConfig::from_toml_str(text).unwrap();
        assert_eq!(cfg.lda.num_topics, 8);
        assert_eq!(cfg.lda.alpha, Some(crate::lda::Prior::Symmetric(0.5)));
        assert_eq!(cfg.doc2vec.mode, crate::doc2vec::Mode::Pvdbow);
        assert_eq!(cfg.tsne.kernel, crate::tsne::Kernel::Gaussian);
        assert_eq!(cfg.knn.metric, Metric::Euclidean);
        assert_eq!(cfg.knn.k, 20);
        assert_eq!(cfg.paths.stopwords, Some(PathBuf::from("s.txt")));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(PipelineConfig::from_toml_str("[lda]\ntopics = 3\n").is_err());
        assert!(PipelineConfig::from_toml_str("[lda]\nnum_topics = \"x\"\n").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = PipelineConfig::default();
        cfg.knn.query = Some("X".into());
        cfg.set_seed(4);
        let back = PipelineConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn relative_paths_follow_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.toml");
        fs::write(&path, "[paths]\ncorpus = \"c.txt\"\noutput = \"/abs/out\"\n").unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.paths.corpus, dir.path().join("c.txt"));
        assert_eq!(cfg.paths.output, PathBuf::from("/abs/out"));
    }
}
