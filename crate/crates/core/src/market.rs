//! Matrix Market coordinate-format ingestion.
//!
//! Supports `%%MatrixMarket matrix coordinate real {general|symmetric}`
//! with 1-based indices and `%` comment lines. Symmetric files store one
//! triangle; they are expanded to full CSR storage so every downstream
//! kernel sees the same layout.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;

pub fn load_matrix_market<P: AsRef<Path>>(path: P) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix_market(BufReader::new(file), &path.display().to_string())
}

pub fn parse_matrix_market<R: BufRead>(reader: R, path: &str) -> Result<SparseMatrix> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_string(),
        line,
        msg,
    };

    let mut lines = reader.lines().enumerate();

    let (header_no, header) = match lines.next() {
        Some((n, Ok(line))) => (n + 1, line),
        Some((n, Err(e))) => return Err(parse_err(n + 1, e.to_string())),
        None => return Err(parse_err(1, "empty file".into())),
    };
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" {
        return Err(parse_err(header_no, format!("malformed header `{header}`")));
    }
    if fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!(
            "{} {} (expected matrix coordinate)",
            fields[1], fields[2]
        )));
    }
    if fields[3] != "real" {
        return Err(Error::UnsupportedFormat(format!("field `{}`", fields[3])));
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut n_stored = 0usize;

    for (n, line) in lines {
        let line_no = n + 1;
        let line = line.map_err(|e| parse_err(line_no, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if size.is_none() {
            if tokens.len() != 3 {
                return Err(parse_err(line_no, format!("malformed size line `{trimmed}`")));
            }
            let dims: Vec<usize> = tokens
                .iter()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| parse_err(line_no, format!("size line: {e}")))?;
            size = Some((dims[0], dims[1], dims[2]));
            triplets.reserve(dims[2]);
            continue;
        }
        if tokens.len() != 3 {
            return Err(parse_err(line_no, format!("malformed entry `{trimmed}`")));
        }
        let i: usize = tokens[0]
            .parse()
            .map_err(|e| parse_err(line_no, format!("row index: {e}")))?;
        let j: usize = tokens[1]
            .parse()
            .map_err(|e| parse_err(line_no, format!("column index: {e}")))?;
        let v: f64 = tokens[2]
            .parse()
            .map_err(|e| parse_err(line_no, format!("value: {e}")))?;
        let (nrows, ncols, _) = size.unwrap();
        if i < 1 || i > nrows || j < 1 || j > ncols {
            return Err(parse_err(
                line_no,
                format!("entry ({i}, {j}) outside declared {nrows}x{ncols} shape"),
            ));
        }
        n_stored += 1;
        triplets.push((i - 1, j - 1, v));
        if symmetric && i != j {
            triplets.push((j - 1, i - 1, v));
        }
    }

    let (nrows, ncols, nnz) = size.ok_or_else(|| parse_err(0, "missing size line".into()))?;
    if n_stored != nnz {
        return Err(Error::Parse {
            path: path.to_string(),
            line: 0,
            msg: format!("declared {nnz} entries, found {n_stored}"),
        });
    }
    SparseMatrix::from_triplets(nrows, ncols, &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<SparseMatrix> {
        parse_matrix_market(Cursor::new(text), "test.mtx")
    }

    #[test]
    fn symmetric_lower_triangle_expands() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n\
             2 2 3\n\
             1 1 2.0\n\
             2 1 -1.0\n\
             2 2 2.0\n",
        )
        .unwrap();
        assert_eq!(m.nnz(), 4);
        assert!(m.is_symmetric());
        assert_eq!(m.get(0, 1), Some(-1.0));
        assert_eq!(m.get(1, 0), Some(-1.0));
    }

    #[test]
    fn general_file_no_expansion() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real general\n\
             % a comment\n\
             3 3 3\n\
             1 1 1.0\n\
             2 3 2.5\n\
             3 1 -3.0\n",
        )
        .unwrap();
        assert_eq!(m.nnz(), 3);
        assert!(!m.is_symmetric());
        assert_eq!(m.get(1, 2), Some(2.5));
    }

    #[test]
    fn complex_field_unsupported() {
        let err = parse(
            "%%MatrixMarket matrix coordinate complex general\n\
             1 1 1\n\
             1 1 1.0 0.0\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnsupportedFormat(_)));
    }

    #[test]
    fn pattern_field_unsupported() {
        let err = parse("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n")
            .unwrap_err();
        assert!(matches!(err, Error::UnsupportedFormat(_)));
    }

    #[test]
    fn malformed_header_is_parse_error() {
        assert!(matches!(parse("%%NotAHeader\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn malformed_entry_is_parse_error() {
        let err = parse(
            "%%MatrixMarket matrix coordinate real general\n\
             2 2 1\n\
             1 x 1.0\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn out_of_range_entry_rejected() {
        let err = parse(
            "%%MatrixMarket matrix coordinate real general\n\
             2 2 1\n\
             3 1 1.0\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_matrix_market("definitely-missing.mtx").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("definitely-missing.mtx"), "{msg}");
    }
}
