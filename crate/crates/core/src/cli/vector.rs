use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Result, SchroError};
use crate::linalg::ComplexVector;

pub fn read_vector(path: impl AsRef<Path>) -> Result<ComplexVector> {
    parse_vector(&std::fs::read_to_string(path)?)
}

/// Parses a JSON array whose entries are numbers or `[re, im]` pairs.
pub fn parse_vector(text: &str) -> Result<ComplexVector> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| SchroError::Parse { line: e.line(), message: e.to_string() })?;
    let Value::Array(items) = value else {
        return Err(SchroError::Parse { line: 1, message: "vector must be a JSON array".into() });
    };
    let number = |v: &Value, k: usize| -> Result<f64> {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| SchroError::Parse { line: 1, message: format!("entry {k} is not a finite number") })
    };
    let entries = items
        .iter()
        .enumerate()
        .map(|(k, item)| match item {
            Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(number(&pair[0], k)?, number(&pair[1], k)?)),
            Value::Array(_) => Err(SchroError::Parse { line: 1, message: format!("entry {k} must be [re, im]") }),
            other => Ok(Complex64::new(number(other, k)?, 0.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexVector::from_vec(entries))
}

pub fn vector_to_json(v: &ComplexVector) -> Value {
    Value::Array(v.iter().map(|z| serde_json::json!([z.re, z.im])).collect())
}
