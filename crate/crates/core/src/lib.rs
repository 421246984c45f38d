//! Low-dimensional document representations.
//!
//! Two routes turn a text corpus into per-document feature vectors:
//! collapsed-Gibbs [`lda`] topic proportions and [`doc2vec`] paragraph
//! vectors. A small reference [`autoencoder`] with hand-derived
//! backpropagation sits alongside them. Documents are compared with
//! brute-force [`neighbors`] search and projected to the plane with exact
//! [`tsne`]. The [`pipeline`] module wires the stages together behind the
//! `docrep` command-line tool.

// Numeric kernels index parallel arrays, and `!(x > 0.0)` deliberately
// rejects NaN along with non-positive values.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod autoencoder;
pub mod corpus;
pub mod doc2vec;
pub mod error;
pub mod lda;
pub mod matrix;
pub mod neighbors;
pub mod pipeline;
pub mod tsne;

pub use error::{Error, Result};
pub use matrix::Matrix;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random generator used by every stochastic routine in the crate.
pub type Rng = ChaCha8Rng;

/// Builds the crate's generator from a seed.
pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
