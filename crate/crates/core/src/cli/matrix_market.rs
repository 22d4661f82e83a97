//! Coordinate-format Matrix Market reader and writer.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, SchroError};
use crate::linalg::{ComplexMatrix, MAX_DENSE_DIM};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

fn parse_error(line: usize, message: impl Into<String>) -> SchroError {
    SchroError::Parse { line, message: message.into() }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    parse_matrix_market(&std::fs::read_to_string(path)?)
}

pub fn parse_matrix_market(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (header_line, header) = lines.next().ok_or_else(|| parse_error(1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(parse_error(header_line, "missing %%MatrixMarket header"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(parse_error(header_line, format!("unsupported object '{} {}'", tokens[1], tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(parse_error(header_line, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_error(header_line, format!("unsupported symmetry '{other}'"))),
    };

    let mut content = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = content.next().ok_or_else(|| parse_error(header_line, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_error(size_line, format!("invalid size entry '{t}'"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_error(size_line, "size line must hold rows, columns and entry count"));
    };
    if rows > MAX_DENSE_DIM || cols > MAX_DENSE_DIM {
        return Err(SchroError::SizeOverflow { size: rows.max(cols), limit: MAX_DENSE_DIM });
    }
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_error(size_line, "symmetric storage requires a square matrix"));
    }

    let mut m = ComplexMatrix::zeros(rows, cols);
    let mut count = 0;
    for (line, entry) in content {
        count += 1;
        if count > nnz {
            return Err(parse_error(line, format!("more than the declared {nnz} entries")));
        }
        let parts: Vec<&str> = entry.split_whitespace().collect();
        let expected = if field == Field::Complex { 4 } else { 3 };
        if parts.len() != expected {
            return Err(parse_error(line, format!("expected {expected} fields, found {}", parts.len())));
        }
        let index = |t: &str, bound: usize| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(i) if i >= 1 && i <= bound => Ok(i - 1),
                _ => Err(parse_error(line, format!("index '{t}' outside 1..={bound}"))),
            }
        };
        let number = |t: &str| -> Result<f64> {
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(parse_error(line, format!("invalid value '{t}'"))),
            }
        };
        let (i, j) = (index(parts[0], rows)?, index(parts[1], cols)?);
        let value = match field {
            Field::Complex => Complex64::new(number(parts[2])?, number(parts[3])?),
            Field::Real | Field::Integer => Complex64::new(number(parts[2])?, 0.0),
        };
        if symmetry != Symmetry::General && j > i {
            return Err(parse_error(line, "symmetric storage lists the lower triangle only"));
        }
        m[(i, j)] += value;
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => m[(j, i)] += value,
                Symmetry::Hermitian => m[(j, i)] += value.conj(),
            }
        }
    }
    if count != nnz {
        return Err(parse_error(text.lines().count(), format!("declared {nnz} entries but found {count}")));
    }
    Ok(m)
}

/// Writes every nonzero entry in column-major order; values use the
/// shortest decimal form that parses back to the same float.
pub fn write_matrix_market(m: &ComplexMatrix) -> String {
    let complex = m.iter().any(|z| z.im != 0.0);
    let mut out = format!("%%MatrixMarket matrix coordinate {} general\n", if complex { "complex" } else { "real" });
    let entries: Vec<(usize, usize, Complex64)> = (0..m.ncols())
        .flat_map(|j| (0..m.nrows()).map(move |i| (i, j)))
        .map(|(i, j)| (i, j, m[(i, j)]))
        .filter(|(_, _, z)| *z != Complex64::ZERO)
        .collect();
    let _ = writeln!(out, "{} {} {}", m.nrows(), m.ncols(), entries.len());
    for (i, j, z) in entries {
        if complex {
            let _ = writeln!(out, "{} {} {:?} {:?}", i + 1, j + 1, z.re, z.im);
        } else {
            let _ = writeln!(out, "{} {} {:?}", i + 1, j + 1, z.re);
        }
    }
    out
}
