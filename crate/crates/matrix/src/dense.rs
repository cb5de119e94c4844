//! Square real matrices with a JSON wire format, plus the small set of
//! numeric helpers the verification bench needs.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted dimension; everything here is desk scale.
pub const MAX_DIM: usize = 512;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix entries must be finite (row {row}, column {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must be square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("dimension {n} out of range 1..={MAX_DIM}")]
    DimensionOutOfRange { n: usize },
    #[error("declared dimension {declared} does not match {actual} rows")]
    DimensionMismatch { declared: usize, actual: usize },
    #[error("operation undefined for the zero operator")]
    ZeroOperator,
    #[error("subspace basis columns are not orthonormal (defect {defect:e})")]
    NotOrthonormal { defect: f64 },
    #[error("operand dimensions disagree: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("invalid matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Wire format: `{"n": int, "rows": [[floats]]}`.
#[derive(Debug, Serialize, Deserialize)]
struct WireMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

/// A validated square real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    mat: DMatrix<f64>,
}

impl DenseMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM {
            return Err(MatrixError::DimensionOutOfRange { n });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NotSquare {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
            for (j, x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(MatrixError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(DenseMatrix {
            mat: DMatrix::from_fn(n, n, |i, j| rows[i][j]),
        })
    }

    /// Wraps an nalgebra matrix, enforcing the same invariants.
    pub fn from_inner(mat: DMatrix<f64>) -> Result<Self, MatrixError> {
        let n = mat.nrows();
        if n == 0 || n > MAX_DIM {
            return Err(MatrixError::DimensionOutOfRange { n });
        }
        if mat.ncols() != n {
            return Err(MatrixError::NotSquare {
                row: 0,
                len: mat.ncols(),
                n,
            });
        }
        if let Some(((row, col), _)) = mat
            .row_iter()
            .enumerate()
            .flat_map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(move |(j, x)| ((i, j), *x))
                    .collect::<Vec<_>>()
            })
            .find(|(_, x)| !x.is_finite())
        {
            return Err(MatrixError::NonFinite { row, col });
        }
        Ok(DenseMatrix { mat })
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix {
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, MatrixError> {
        let wire: WireMatrix = serde_json::from_str(s)?;
        if wire.rows.len() != wire.n {
            return Err(MatrixError::DimensionMismatch {
                declared: wire.n,
                actual: wire.rows.len(),
            });
        }
        DenseMatrix::from_rows(&wire.rows)
    }

    pub fn to_json_string(&self) -> String {
        let wire = WireMatrix {
            n: self.n(),
            rows: self.rows(),
        };
        serde_json::to_string(&wire).expect("finite floats serialize")
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn inner(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.mat.row(i).iter().copied().collect())
            .collect()
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix {
            mat: self.mat.transpose(),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.mat * x
    }

    /// Operator norm: the top singular value.
    pub fn operator_norm(&self) -> f64 {
        top_singular_value(&self.mat)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }
}

/// Top singular value of an arbitrary rectangular matrix.
pub fn top_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Matrix rows as plain vectors, for JSON output of decomposition blocks.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wire_format_round_trips() {
        let t = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let json = t.to_json_string();
        assert_eq!(json, r#"{"n":2,"rows":[[0.0,1.0],[0.0,0.0]]}"#);
        assert_eq!(DenseMatrix::from_json_str(&json).unwrap(), t);
    }

    #[test]
    fn malformed_inputs_are_rejected_with_named_errors() {
        assert!(matches!(
            DenseMatrix::from_rows(&[vec![1.0], vec![2.0, 3.0]]),
            Err(MatrixError::NotSquare { row: 0, .. })
        ));
        assert!(matches!(
            DenseMatrix::from_rows(&[vec![f64::NAN]]),
            Err(MatrixError::NonFinite { row: 0, col: 0 })
        ));
        assert!(matches!(
            DenseMatrix::from_json_str(r#"{"n":3,"rows":[[1.0]]}"#),
            Err(MatrixError::DimensionMismatch { declared: 3, actual: 1 })
        ));
    }

    #[test]
    fn operator_norm_of_a_rank_one_nilpotent_is_one() {
        let t = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_relative_eq!(t.operator_norm(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(t.frobenius_norm(), 1.0, max_relative = 1e-12);
    }
}
