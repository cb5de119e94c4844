//! Orthonormal subspaces and the few geometric quantities the theorems need:
//! projectors, containment defects, and largest principal angles.

use nalgebra::DMatrix;

use crate::dense::{top_singular_value, MatrixError};

/// Orthonormality defect allowed in a `Subspace` basis.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// A subspace carried as an orthonormal column family.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: DMatrix<f64>,
    tol: f64,
}

impl Subspace {
    /// Wraps a basis, verifying the columns are orthonormal within the
    /// stated tolerance.
    pub fn new(basis: DMatrix<f64>, tol: f64) -> Result<Self, MatrixError> {
        let gram = basis.transpose() * &basis;
        let defect = (&gram - DMatrix::identity(gram.nrows(), gram.ncols())).norm();
        if defect > tol {
            return Err(MatrixError::NotOrthonormal { defect });
        }
        Ok(Subspace { basis, tol })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// ‖(I − P_other) P_self‖: zero iff self ⊆ other; equals the sine of the
    /// largest principal angle from self into other.
    pub fn containment_defect(&self, other: &Subspace) -> f64 {
        let n = self.ambient_dim();
        let residual = (DMatrix::identity(n, n) - other.projector()) * self.projector();
        top_singular_value(&residual)
    }

    /// Sine of the largest principal angle between equal-dimension
    /// subspaces: max of the two one-sided containment defects.
    pub fn sin_max_angle(&self, other: &Subspace) -> f64 {
        self.containment_defect(other)
            .max(other.containment_defect(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn span(cols: &[Vec<f64>]) -> Subspace {
        let n = cols[0].len();
        let m = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
        Subspace::new(m, ORTHONORMALITY_TOL).unwrap()
    }

    #[test]
    fn non_orthonormal_bases_are_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            Subspace::new(m, ORTHONORMALITY_TOL),
            Err(MatrixError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn containment_defect_separates_nested_from_skew_subspaces() {
        let e1 = span(&[vec![1.0, 0.0, 0.0]]);
        let e12 = span(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert_relative_eq!(e1.containment_defect(&e12), 0.0, epsilon = 1e-12);
        assert_relative_eq!(e12.containment_defect(&e1), 1.0, max_relative = 1e-10);
        let diag = span(&[vec![std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0]]);
        assert_relative_eq!(
            e1.sin_max_angle(&diag),
            std::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-10
        );
    }
}
