//! Matrix and weight file formats.
//!
//! A matrix file is a JSON object `{"dim": n, "rows": [[...], ...]}`; a
//! weight file is a JSON array. Numbers are written with 17 significant
//! digits so that a write/read cycle is bit-exact.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use super::{Matrix, SpdMatrix, SymMatrix};
use crate::error::MeanError;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("declared dim {declared} but found {found}")]
    Shape { declared: usize, found: usize },
    #[error("non-finite value {0} cannot be serialized")]
    NonFinite(f64),
    #[error(transparent)]
    Mean(#[from] MeanError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

/// Formats one number with 17 significant digits.
pub fn format_number(x: f64) -> Result<String, FormatError> {
    if !x.is_finite() {
        return Err(FormatError::NonFinite(x));
    }
    Ok(format!("{x:.16e}"))
}

pub fn write_matrix(m: &Matrix) -> Result<String, FormatError> {
    let n = m.dim();
    let mut out = format!("{{\"dim\": {n}, \"rows\": [");
    for i in 0..n {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..n {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&format_number(m[(i, j)])?);
        }
        out.push(']');
    }
    out.push_str("]}");
    Ok(out)
}

pub fn parse_matrix(text: &str) -> Result<Matrix, FormatError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    if file.rows.len() != file.dim {
        return Err(FormatError::Shape {
            declared: file.dim,
            found: file.rows.len(),
        });
    }
    if let Some(bad) = file.rows.iter().find(|r| r.len() != file.dim) {
        return Err(FormatError::Shape {
            declared: file.dim,
            found: bad.len(),
        });
    }
    Ok(Matrix::from_rows(&file.rows)?)
}

pub fn parse_sym(text: &str) -> Result<SymMatrix, FormatError> {
    Ok(SymMatrix::new(parse_matrix(text)?)?)
}

pub fn parse_spd(text: &str) -> Result<SpdMatrix, FormatError> {
    Ok(SpdMatrix::new(parse_sym(text)?)?)
}

pub fn write_weights(w: &[f64]) -> Result<String, FormatError> {
    let mut out = String::from("[");
    for (i, x) in w.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(out, "{}", format_number(*x)?).expect("writing to a String");
    }
    out.push(']');
    Ok(out)
}

pub fn parse_weights(text: &str) -> Result<Vec<f64>, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_literal() {
        let m = parse_matrix(r#"{"dim": 2, "rows": [[1, 0.5], [0.5, 2]]}"#).unwrap();
        assert_eq!(m.rows(), vec![vec![1.0, 0.5], vec![0.5, 2.0]]);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            parse_matrix(r#"{"dim": 3, "rows": [[1, 0], [0, 1]]}"#),
            Err(FormatError::Shape { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"dim": 2, "rows": [[1, 0], [0]]}"#),
            Err(FormatError::Shape { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"dim": 2, "rows": "#),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn spd_parse_rejects_indefinite() {
        let err = parse_spd(r#"{"dim": 2, "rows": [[1, 2], [2, 1]]}"#).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Mean(MeanError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn seventeen_digits() {
        let s = write_matrix(&Matrix::from_diag(&[0.1])).unwrap();
        assert_eq!(s, r#"{"dim": 1, "rows": [[1.0000000000000001e-1]]}"#);
    }

    proptest! {
        #[test]
        fn matrix_round_trip_is_bit_exact(vals in prop::collection::vec(-1e300f64..1e300, 9)) {
            let m = Matrix::from_row_major(3, vals).unwrap();
            let back = parse_matrix(&write_matrix(&m).unwrap()).unwrap();
            let bits = |m: &Matrix| m.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&m), bits(&back));
        }

        #[test]
        fn weights_round_trip(w in prop::collection::vec(1e-300f64..1.0, 1..6)) {
            let back = parse_weights(&write_weights(&w).unwrap()).unwrap();
            prop_assert_eq!(w, back);
        }
    }
}
