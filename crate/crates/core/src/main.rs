use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use docrep::corpus::write_corpus_file;
use docrep::doc2vec::{self, EmbeddingModel, Mode};
use docrep::lda::{self, LdaModel, Readout};
use docrep::neighbors::Metric;
use docrep::pipeline::{self, PipelineConfig, QueryKey};
use docrep::tsne::Kernel;

#[derive(Parser)]
#[command(name = "docrep", version, about = "Topic-model and paragraph-vector document representations")]
struct Cli {
    /// TOML config; its sections supply defaults that flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every stochastic stage.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw documents and prune the vocabulary.
    Preprocess {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        titles: Option<PathBuf>,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        names: Option<PathBuf>,
        #[arg(long)]
        keep_top: Option<usize>,
        /// Filtered corpus file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Train a topic model with collapsed Gibbs sampling.
    LdaTrain {
        #[command(flatten)]
        io: TrainIo,
        #[arg(long)]
        topics: Option<usize>,
        #[arg(long)]
        sweeps: Option<usize>,
        #[arg(long)]
        burn_in: Option<usize>,
        #[arg(long, value_enum)]
        readout: Option<ReadoutArg>,
        /// Export N_mk + α instead of normalized Θ.
        #[arg(long)]
        unnormalized: bool,
    },
    /// Print the top words of every topic.
    LdaTopics {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = pipeline::TOPIC_WORDS)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train paragraph vectors.
    Doc2vecTrain {
        #[command(flatten)]
        io: TrainIo,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        min_count: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// List the nearest documents to one document.
    Knn {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        titles: PathBuf,
        #[arg(long, conflicts_with = "index", required_unless_present = "index")]
        title: Option<String>,
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Project feature rows to two dimensions.
    Tsne {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        perplexity: Option<f64>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, value_enum)]
        kernel: Option<KernelArg>,
        /// Disable early exaggeration.
        #[arg(long)]
        strict: bool,
    },
    /// Run every stage, writing all artifacts to the output directory.
    Pipeline {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TrainIo {
    /// Preprocessed corpus: whitespace-separated tokens per line.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    titles: PathBuf,
    /// Model archive to write.
    #[arg(long)]
    model: PathBuf,
    /// Per-document feature CSV to write.
    #[arg(long)]
    features: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadoutArg {
    Final,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pvdm,
    Pvdbow,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Cosine,
    Euclidean,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KernelArg {
    StudentT,
    Gaussian,
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.set_seed(s);
    }

    match cli.command {
        Command::Preprocess {
            corpus,
            titles,
            stopwords,
            names,
            keep_top,
            output,
        } => {
            let paths = &mut cfg.paths;
            paths.corpus = corpus.unwrap_or(paths.corpus.clone());
            paths.titles = titles.unwrap_or(paths.titles.clone());
            paths.stopwords = stopwords.or(paths.stopwords.take());
            paths.names = names.or(paths.names.take());
            if let Some(n) = keep_top {
                cfg.preprocess.keep_top_n_terms = n;
            }
            let c = pipeline::load_and_preprocess(&cfg.paths, &cfg.preprocess)?;
            write_corpus_file(&output, &c)?;
            log::info!("{} documents, {} terms", c.len(), c.vocab.len());
        }
        Command::LdaTrain {
            io,
            topics,
            sweeps,
            burn_in,
            readout,
            unnormalized,
        } => {
            let lc = &mut cfg.lda;
            if let Some(k) = topics {
                lc.num_topics = k;
            }
            if let Some(s) = sweeps {
                lc.sweeps = s;
            }
            if let Some(b) = burn_in {
                lc.burn_in = b;
            }
            if let Some(r) = readout {
                lc.readout = match r {
                    ReadoutArg::Final => Readout::FinalSample,
                    ReadoutArg::Average => Readout::ThinnedAverage,
                };
            }
            let corpus = pipeline::load_token_corpus(&io.corpus, &io.titles)?;
            let model = lda::train(&corpus, lc)?;
            pipeline::save_model(&model, &io.model)?;
            pipeline::write_matrix_csv(&io.features, pipeline::lda_features(&model, unnormalized))?;
        }
        Command::LdaTopics { model, n, output } => {
            let model: LdaModel = pipeline::load_model(&model)?;
            emit(&model.format_topics(n), output.as_deref())?;
        }
        Command::Doc2vecTrain {
            io,
            dim,
            window,
            min_count,
            mode,
        } => {
            let dc = &mut cfg.doc2vec;
            if let Some(d) = dim {
                dc.dim = d;
            }
            if let Some(w) = window {
                dc.window = w;
            }
            if let Some(m) = min_count {
                dc.min_count = m;
            }
            if let Some(m) = mode {
                dc.mode = match m {
                    ModeArg::Pvdm => Mode::Pvdm,
                    ModeArg::Pvdbow => Mode::Pvdbow,
                };
            }
            let corpus = pipeline::load_token_corpus(&io.corpus, &io.titles)?;
            let model: EmbeddingModel = doc2vec::train(&corpus, dc)?;
            pipeline::save_model(&model, &io.model)?;
            pipeline::write_matrix_csv(&io.features, &model.doc_vectors)?;
        }
        Command::Knn {
            features,
            titles,
            title,
            index,
            k,
            metric,
            csv,
            output,
        } => {
            let m = pipeline::read_matrix_csv(&features)?;
            let titles = docrep::corpus::read_titles_file(&titles)?;
            let key = match (title, index) {
                (Some(t), _) => QueryKey::Title(t),
                (None, Some(i)) => QueryKey::Index(i),
                (None, None) => unreachable!("clap requires --title or --index"),
            };
            let metric = metric.map_or(cfg.knn.metric, |m| match m {
                MetricArg::Cosine => Metric::Cosine,
                MetricArg::Euclidean => Metric::Euclidean,
            });
            let text = pipeline::neighbor_report(&m, &titles, &key, k.unwrap_or(cfg.knn.k), metric, csv)?;
            emit(&text, output.as_deref())?;
        }
        Command::Tsne {
            features,
            output,
            perplexity,
            iterations,
            kernel,
            strict,
        } => {
            let tc = &mut cfg.tsne;
            if let Some(p) = perplexity {
                tc.perplexity = p;
            }
            if let Some(t) = iterations {
                tc.iterations = t;
            }
            if let Some(k) = kernel {
                tc.kernel = match k {
                    KernelArg::StudentT => Kernel::StudentT,
                    KernelArg::Gaussian => Kernel::Gaussian,
                };
            }
            tc.strict |= strict;
            let x = pipeline::read_matrix_csv(&features)?;
            pipeline::write_matrix_csv(&output, &pipeline::layout(&x, tc)?)?;
        }
        Command::Pipeline { output } => {
            if let Some(o) = output {
                cfg.paths.output = o;
            }
            let outputs = pipeline::run_pipeline(&cfg)?;
            for f in outputs.files {
                println!("{}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
