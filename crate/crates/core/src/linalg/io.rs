//! MatrixMarket coordinate files and one-value-per-line vectors.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::sparse::SparseMatrix;
use crate::error::{Result, SchwarzError};

fn parse_err(line: usize, msg: impl Into<String>) -> SchwarzError {
    SchwarzError::Parse { line, msg: msg.into() }
}

/// Parses a real `coordinate` MatrixMarket matrix (general or symmetric).
pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let h: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if h.len() < 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" || h[2] != "coordinate" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix coordinate ...' header"));
    }
    if h[3] != "real" && h[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field '{}'", h[3])));
    }
    let symmetric = match h[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'rows cols entries'"));
                }
                let p = |s: &str| s.parse::<usize>().map_err(|e| parse_err(lineno, e.to_string()));
                size = Some((p(fields[0])?, p(fields[1])?, p(fields[2])?));
            }
            Some((nr, nc, _)) => {
                if fields.len() != 3 {
                    return Err(parse_err(lineno, "expected 'i j value'"));
                }
                let i: usize = fields[0].parse().map_err(|_| parse_err(lineno, "bad row index"))?;
                let j: usize = fields[1].parse().map_err(|_| parse_err(lineno, "bad column index"))?;
                let v: f64 = fields[2].parse().map_err(|_| parse_err(lineno, "bad value"))?;
                if i == 0 || j == 0 || i > nr || j > nc {
                    return Err(parse_err(lineno, format!("index ({i}, {j}) out of range")));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (nr, nc, nnz) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let stored = if symmetric { triplets.iter().filter(|t| t.0 >= t.1).count() } else { triplets.len() };
    if stored != nnz {
        return Err(parse_err(0, format!("expected {nnz} entries, found {stored}")));
    }
    Ok(SparseMatrix::from_triplets(nr, nc, triplets))
}

/// Writes `a` in general coordinate format, or lower-triangle symmetric
/// storage when `symmetric` is set.
pub fn format_matrix_market(a: &SparseMatrix, symmetric: bool) -> String {
    let entries: Vec<(usize, usize, f64)> = a.triplets().filter(|&(i, j, _)| !symmetric || i >= j).collect();
    let mut out = String::new();
    let kind = if symmetric { "symmetric" } else { "general" };
    writeln!(out, "%%MatrixMarket matrix coordinate real {kind}").unwrap();
    writeln!(out, "{} {} {}", a.nrows(), a.ncols(), entries.len()).unwrap();
    for (i, j, v) in entries {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v).unwrap();
    }
    out
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &SparseMatrix, symmetric: bool) -> Result<()> {
    fs::write(path, format_matrix_market(a, symmetric))?;
    Ok(())
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.trim().parse::<f64>().map_err(|e| parse_err(i + 1, e.to_string())))
        .collect()
}

pub fn format_vector(x: &[f64]) -> String {
    x.iter().map(|v| format!("{v:e}\n")).collect()
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_vector(&fs::read_to_string(path)?)
}

pub fn write_vector(path: impl AsRef<Path>, x: &[f64]) -> Result<()> {
    fs::write(path, format_vector(x))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_storage_expands() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 4\n1 1 2\n2 1 -1\n2 2 2\n3 3 2\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a.get(0, 1), -1.0);
        assert_eq!(a.get(1, 0), -1.0);
        assert_eq!(a.nnz(), 5);
    }

    #[test]
    fn round_trip_is_exact() {
        let a = SparseMatrix::laplacian_1d(6).scaled(1.0 / 3.0);
        for sym in [false, true] {
            let back = parse_matrix_market(&format_matrix_market(&a, sym)).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn bad_header_and_count() {
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1\n").is_err());
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n";
        assert!(parse_matrix_market(short).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let x = vec![1.0, -2.5e-7, std::f64::consts::PI];
        assert_eq!(parse_vector(&format_vector(&x)).unwrap(), x);
        assert!(parse_vector("1.0\nabc\n").is_err());
    }
}
