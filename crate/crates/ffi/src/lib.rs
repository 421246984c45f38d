//! C ABI over `docrep`.
//!
//! Every entry point returns a [`DocrepStatus`]; on failure the message is
//! available from [`docrep_last_error_message`] on the same thread. Models
//! and matrices are opaque heap handles released with their `_free`
//! function. Numeric outputs are copied into caller-owned buffers whose
//! capacity is passed alongside them. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use docrep::doc2vec::EmbeddingModel;
use docrep::lda::LdaModel;
use docrep::neighbors::{knn, Metric, Query};
use docrep::pipeline::load_model;
use docrep::tsne::{self, Kernel, TsneConfig, TsneInput};
use docrep::{Error, Matrix};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    CorruptArchive = 4,
    VersionMismatch = 5,
    KindMismatch = 6,
    DimensionMismatch = 7,
    ZeroVector = 8,
    Degenerate = 9,
    BufferTooSmall = 10,
    Panic = 11,
    Other = 12,
}

/// Values accepted by the `metric` argument of [`docrep_knn`].
#[repr(C)]
pub enum DocrepMetric {
    Cosine = 0,
    Euclidean = 1,
}

/// Values accepted by [`DocrepTsneOptions::kernel`].
#[repr(C)]
pub enum DocrepKernel {
    StudentT = 0,
    Gaussian = 1,
}

/// A trained topic model.
pub struct DocrepLdaModel(LdaModel);

/// A trained paragraph-vector model.
pub struct DocrepEmbeddingModel(EmbeddingModel);

/// A dense row-major matrix of doubles.
pub struct DocrepMatrix(Matrix);

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DocrepTsneOptions {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub kernel: u32,
    /// Nonzero disables early exaggeration.
    pub strict: u32,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> DocrepStatus {
    match err {
        Error::InvalidArgument(_) | Error::Config(_) | Error::UnknownTerm(_) | Error::UnknownTitle { .. } => {
            DocrepStatus::InvalidArgument
        }
        Error::Io { .. } => DocrepStatus::Io,
        Error::CorruptArchive(_) => DocrepStatus::CorruptArchive,
        Error::VersionMismatch { .. } => DocrepStatus::VersionMismatch,
        Error::KindMismatch { .. } => DocrepStatus::KindMismatch,
        Error::DimensionMismatch { .. } => DocrepStatus::DimensionMismatch,
        Error::ZeroVector => DocrepStatus::ZeroVector,
        Error::Degenerate(_) | Error::EmptyCorpus(_) | Error::NoKnownTokens => DocrepStatus::Degenerate,
        _ => DocrepStatus::Other,
    }
}

/// Failure inside an entry point, before it becomes a status code.
enum Fail {
    Null(&'static str),
    Small { needed: usize, given: usize },
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DocrepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            DocrepStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            DocrepStatus::NullPointer
        }
        Ok(Err(Fail::Small { needed, given })) => {
            set_last_error(&format!("buffer holds {given} values, {needed} needed"));
            DocrepStatus::BufferTooSmall
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            DocrepStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    // SAFETY: the caller guarantees `p` is null or a live handle.
    unsafe { p.as_ref() }.ok_or(Fail::Null(what))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, Fail> {
    if p.is_null() {
        return Err(Fail::Null("path"));
    }
    // SAFETY: non-null and NUL-terminated per the contract.
    let s = unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidArgument("path is not UTF-8".into())))?;
    Ok(Path::new(s))
}

unsafe fn copy_out(values: &[f64], out: *mut f64, capacity: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("output buffer"));
    }
    if capacity < values.len() {
        return Err(Fail::Small {
            needed: values.len(),
            given: capacity,
        });
    }
    // SAFETY: `out` holds at least `capacity ≥ values.len()` doubles.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), out, values.len()) };
    Ok(())
}

unsafe fn write_opt<T>(p: *mut T, v: T) {
    if !p.is_null() {
        // SAFETY: non-null output pointers must be writable.
        unsafe { p.write(v) };
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn docrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next `docrep_` call on the same thread.
#[no_mangle]
pub extern "C" fn docrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads an LDA archive into `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_lda_load(path: *const c_char, out: *mut *mut DocrepLdaModel) -> DocrepStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let model: LdaModel = load_model(unsafe { path_arg(path)? })?;
        unsafe { out.write(Box::into_raw(Box::new(DocrepLdaModel(model)))) };
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`docrep_lda_load`], freed once.
#[no_mangle]
pub unsafe extern "C" fn docrep_lda_free(model: *mut DocrepLdaModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Documents, topics and vocabulary size; any output pointer may be null.
///
/// # Safety
/// `model` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_lda_dims(
    model: *const DocrepLdaModel,
    docs: *mut usize,
    topics: *mut usize,
    vocab: *mut usize,
) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(model, "model")? }.0;
        unsafe {
            write_opt(docs, m.theta.rows());
            write_opt(topics, m.num_topics());
            write_opt(vocab, m.vocab_size());
        }
        Ok(())
    })
}

/// Copies Θ (documents × topics, row-major) into `out`.
///
/// # Safety
/// `model` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn docrep_lda_theta(model: *const DocrepLdaModel, out: *mut f64, capacity: usize) -> DocrepStatus {
    guard(|| unsafe { copy_out(deref(model, "model")?.0.theta.as_slice(), out, capacity) })
}

/// Copies Θ into a new matrix handle.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_lda_theta_matrix(model: *const DocrepLdaModel, out: *mut *mut DocrepMatrix) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(model, "model")? }.0;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        unsafe { out.write(Box::into_raw(Box::new(DocrepMatrix(m.theta.clone())))) };
        Ok(())
    })
}

/// Loads a paragraph-vector archive into `*out`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_embedding_load(
    path: *const c_char,
    out: *mut *mut DocrepEmbeddingModel,
) -> DocrepStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let model: EmbeddingModel = load_model(unsafe { path_arg(path)? })?;
        unsafe { out.write(Box::into_raw(Box::new(DocrepEmbeddingModel(model)))) };
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from [`docrep_embedding_load`], freed once.
#[no_mangle]
pub unsafe extern "C" fn docrep_embedding_free(model: *mut DocrepEmbeddingModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Documents, vector size and vocabulary size; any output may be null.
///
/// # Safety
/// `model` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_embedding_dims(
    model: *const DocrepEmbeddingModel,
    docs: *mut usize,
    dim: *mut usize,
    vocab: *mut usize,
) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(model, "model")? }.0;
        unsafe {
            write_opt(docs, m.doc_vectors.rows());
            write_opt(dim, m.dim());
            write_opt(vocab, m.vocab_size());
        }
        Ok(())
    })
}

/// Copies the document vectors (documents × dim, row-major) into `out`.
///
/// # Safety
/// `model` must be a live handle and `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn docrep_embedding_doc_vectors(
    model: *const DocrepEmbeddingModel,
    out: *mut f64,
    capacity: usize,
) -> DocrepStatus {
    guard(|| unsafe { copy_out(deref(model, "model")?.0.doc_vectors.as_slice(), out, capacity) })
}

/// Copies the document vectors into a new matrix handle.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_embedding_doc_matrix(
    model: *const DocrepEmbeddingModel,
    out: *mut *mut DocrepMatrix,
) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(model, "model")? }.0;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        unsafe { out.write(Box::into_raw(Box::new(DocrepMatrix(m.doc_vectors.clone())))) };
        Ok(())
    })
}

/// Copies `rows × cols` row-major doubles into a new matrix handle.
///
/// # Safety
/// `data` must hold `rows * cols` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut DocrepMatrix,
) -> DocrepStatus {
    guard(|| {
        if data.is_null() {
            return Err(Fail::Null("data"));
        }
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Fail::Lib(Error::InvalidArgument("matrix size overflows".into())))?;
        // SAFETY: the caller guarantees `data` holds `rows * cols` doubles.
        let values = unsafe { std::slice::from_raw_parts(data, len) }.to_vec();
        let m = Matrix::from_vec(rows, cols, values)?;
        unsafe { out.write(Box::into_raw(Box::new(DocrepMatrix(m)))) };
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a matrix handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn docrep_matrix_free(m: *mut DocrepMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// # Safety
/// `m` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_matrix_dims(m: *const DocrepMatrix, rows: *mut usize, cols: *mut usize) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(m, "matrix")? }.0;
        unsafe {
            write_opt(rows, m.rows());
            write_opt(cols, m.cols());
        }
        Ok(())
    })
}

/// Nearest rows to row `query_row`, which comes first with distance 0.
/// Writes up to `k + 1` entries and stores the count in `*out_len`.
///
/// # Safety
/// `m` must be a live handle; both output arrays must hold `capacity`
/// entries and `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_knn(
    m: *const DocrepMatrix,
    query_row: usize,
    k: usize,
    metric: u32,
    out_indices: *mut usize,
    out_distances: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(m, "matrix")? }.0;
        if out_indices.is_null() || out_distances.is_null() || out_len.is_null() {
            return Err(Fail::Null("output buffer"));
        }
        let metric = match metric {
            0 => Metric::Cosine,
            1 => Metric::Euclidean,
            other => return Err(Fail::Lib(Error::InvalidArgument(format!("unknown metric {other}")))),
        };
        let list = knn(m, Query::Row(query_row), k, metric)?;
        if capacity < list.entries.len() {
            return Err(Fail::Small {
                needed: list.entries.len(),
                given: capacity,
            });
        }
        for (i, n) in list.entries.iter().enumerate() {
            // SAFETY: i < entries.len() ≤ capacity.
            unsafe {
                out_indices.add(i).write(n.index);
                out_distances.add(i).write(n.distance);
            }
        }
        unsafe { out_len.write(list.entries.len()) };
        Ok(())
    })
}

/// The library's default t-SNE settings.
#[no_mangle]
pub extern "C" fn docrep_tsne_default_options() -> DocrepTsneOptions {
    let d = TsneConfig::default();
    DocrepTsneOptions {
        perplexity: d.perplexity,
        iterations: d.iterations,
        learning_rate: d.learning_rate,
        kernel: DocrepKernel::StudentT as u32,
        strict: u32::from(d.strict),
        seed: d.seed,
    }
}

/// Embeds the rows of `m` in 2-D, writing `rows × 2` doubles to `out`.
///
/// # Safety
/// `m` and `options` must be valid; `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn docrep_tsne(
    m: *const DocrepMatrix,
    options: *const DocrepTsneOptions,
    out: *mut f64,
    capacity: usize,
) -> DocrepStatus {
    guard(|| {
        let m = &unsafe { deref(m, "matrix")? }.0;
        let o = unsafe { deref(options, "options")? };
        let kernel = match o.kernel {
            0 => Kernel::StudentT,
            1 => Kernel::Gaussian,
            other => return Err(Fail::Lib(Error::InvalidArgument(format!("unknown kernel {other}")))),
        };
        let cfg = TsneConfig {
            perplexity: o.perplexity,
            iterations: o.iterations,
            learning_rate: o.learning_rate,
            kernel,
            strict: o.strict != 0,
            seed: o.seed,
            ..TsneConfig::default()
        };
        if out.is_null() {
            return Err(Fail::Null("output buffer"));
        }
        if capacity < m.rows() * 2 {
            return Err(Fail::Small {
                needed: m.rows() * 2,
                given: capacity,
            });
        }
        let layout = tsne::run(TsneInput::Features(m), &cfg)?;
        unsafe { copy_out(layout.y.as_slice(), out, capacity) }
    })
}

/// Cosine similarity of two `len`-vectors.
///
/// # Safety
/// `a` and `b` must hold `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn docrep_cosine_similarity(a: *const f64, b: *const f64, len: usize, out: *mut f64) -> DocrepStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            return Err(Fail::Null("vector"));
        }
        // SAFETY: both inputs hold `len` doubles.
        let (a, b) = unsafe { (std::slice::from_raw_parts(a, len), std::slice::from_raw_parts(b, len)) };
        let c = docrep::corpus::cosine_similarity(a, b)?;
        unsafe { out.write(c) };
        Ok(())
    })
}
