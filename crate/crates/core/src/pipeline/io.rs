use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// One comma-separated line per row. Values use the shortest form that
/// parses back to the same `f64`.
pub fn format_matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for row in m.iter_rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, format_matrix_csv(m)).map_err(|e| Error::io(path, e))
}

pub fn parse_matrix_csv(text: &str, path: &Path) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let parse_err = |message: String| Error::Parse {
            path: path.to_owned(),
            line: i + 1,
            message,
        };
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|e| parse_err(format!("`{c}`: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(format!("expected {} columns, found {}", first.len(), row.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyCorpus(format!("{} holds no rows", path.display())));
    }
    Matrix::from_rows(&rows)
}

pub fn read_matrix_csv(path: &Path) -> Result<Matrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(&text, path)
}

/// Index of the first title equal to `name`.
pub fn title_lookup(titles: &[String], name: &str) -> Result<usize> {
    if let Some(i) = titles.iter().position(|t| t == name) {
        return Ok(i);
    }
    let mut scored: Vec<(usize, &String)> = titles
        .iter()
        .map(|t| (strsim::levenshtein(&t.to_lowercase(), &name.to_lowercase()), t))
        .collect();
    scored.sort_by_key(|&(d, _)| d);
    Err(Error::UnknownTitle {
        name: name.to_owned(),
        suggestions: scored.into_iter().take(3).map(|(_, t)| t.clone()).collect(),
    })
}
