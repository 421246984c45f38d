//! Exhaustive k-nearest-neighbor search over document feature rows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, norm, squared_distance, Matrix};

/// Number of neighbors reported besides the query document itself.
pub const DEFAULT_K: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `1 − cos θ`, in `[0, 2]`.
    #[default]
    Cosine,
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cosine" => Ok(Metric::Cosine),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(Error::invalid(format!("unknown metric `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query<'a> {
    /// A row of the searched matrix; it is returned first with distance 0.
    Row(usize),
    Vector(&'a [f64]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub query_row: Option<usize>,
    pub entries: Vec<Neighbor>,
}

pub fn distance(a: &[f64], b: &[f64], metric: Metric) -> Result<f64> {
    match metric {
        Metric::Euclidean => Ok(squared_distance(a, b).sqrt()),
        Metric::Cosine => {
            let (na, nb) = (norm(a), norm(b));
            if na == 0.0 || nb == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok((1.0 - dot(a, b) / (na * nb)).clamp(0.0, 2.0))
        }
    }
}

/// The `k` nearest rows of `matrix` to `query`, nearest first, ties to
/// the lower index. A row query additionally returns itself at rank 0,
/// so it yields up to `k + 1` entries.
pub fn knn(matrix: &Matrix, query: Query<'_>, k: usize, metric: Metric) -> Result<NeighborList> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let (point, self_row) = match query {
        Query::Row(r) => {
            if r >= matrix.rows() {
                return Err(Error::invalid(format!(
                    "query row {r} out of range ({} rows)",
                    matrix.rows()
                )));
            }
            (matrix.row(r), Some(r))
        }
        Query::Vector(v) => {
            if v.len() != matrix.cols() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.cols(),
                    actual: v.len(),
                });
            }
            (v, None)
        }
    };

    let mut entries = Vec::with_capacity(matrix.rows());
    for (index, row) in matrix.iter_rows().enumerate() {
        if Some(index) == self_row {
            continue;
        }
        entries.push(Neighbor {
            index,
            distance: distance(point, row, metric)?,
        });
    }
    if metric == Metric::Cosine && norm(point) == 0.0 {
        // a lone row has nothing to compare against but is still undefined
        return Err(Error::ZeroVector);
    }
    entries.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.index.cmp(&b.index)));
    entries.truncate(k);
    if let Some(r) = self_row {
        entries.insert(
            0,
            Neighbor {
                index: r,
                distance: 0.0,
            },
        );
    }
    Ok(NeighborList {
        query_row: self_row,
        entries,
    })
}

impl NeighborList {
    /// `rank<TAB>title<TAB>distance` lines.
    pub fn format_listing(&self, titles: &[String]) -> String {
        let mut out = String::new();
        for (rank, n) in self.entries.iter().enumerate() {
            let _ = writeln!(out, "{rank}\t{}\t{:?}", title_of(titles, n.index), n.distance);
        }
        out
    }

    /// CSV with a `rank,index,title,distance` header.
    pub fn format_csv(&self, titles: &[String]) -> String {
        let mut out = String::from("rank,index,title,distance\n");
        for (rank, n) in self.entries.iter().enumerate() {
            let title = title_of(titles, n.index);
            let quoted = if title.contains([',', '"']) {
                format!("\"{}\"", title.replace('"', "\"\""))
            } else {
                title.to_owned()
            };
            let _ = writeln!(out, "{rank},{},{quoted},{:?}", n.index, n.distance);
        }
        out
    }
}

fn title_of(titles: &[String], index: usize) -> &str {
    titles.get(index).map_or("?", String::as_str)
}
