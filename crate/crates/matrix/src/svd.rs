//! Singular data with multiplicity clustering, and the norm spaces
//! M = {x : ‖Tx‖ = ‖T‖‖x‖} and M_* (the same for the adjoint), realized as
//! the top right- and left-singular subspaces of one factorization.

use nalgebra::{DMatrix, DVector};

use crate::dense::{DenseMatrix, MatrixError};
use crate::subspace::{Subspace, ORTHONORMALITY_TOL};

/// Relative gap under which neighboring singular values are treated as one
/// value with higher multiplicity.
pub const CLUSTER_REL_GAP: f64 = 1e-7;

/// Iteration cap for the factorization polish in `stable_svd`.
const REFINE_MAX_ITERS: usize = 200;

/// A full factorization T = U diag(values) Vᵀ; `off_diagonal` is the
/// Frobenius norm of R − diag(R) for R = UᵀTV, which bounds the backward
/// residual of the diagonal factorization.
struct SvdParts {
    u: DMatrix<f64>,
    values: DVector<f64>,
    v_t: DMatrix<f64>,
    off_diagonal: f64,
}

/// Singular value decomposition with iterative refinement. Repeated
/// singular values can make the plain factorization lose several digits of
/// subspace accuracy, so the right factor is polished by simultaneous
/// orthogonal iteration on TᵀT and the left factor re-extracted from a QR
/// of TV, until the off-diagonal contamination of R = UᵀTV stops improving
/// or reaches machine scale. Fully deterministic.
fn stable_svd(m: &DMatrix<f64>) -> SvdParts {
    let n = m.nrows();
    let svd = m.clone().svd(false, true);
    let raw_v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });
    let mut v = DMatrix::from_fn(n, n, |i, j| raw_v_t[(order[j], i)]);

    let gram = m.transpose() * m;
    let target = 1e-13 * (1.0 + m.norm());
    let mut best: Option<SvdParts> = None;
    let mut prev_off = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..REFINE_MAX_ITERS {
        v = (&gram * &v).qr().q();
        let tv_qr = (m * &v).qr();
        let mut u = tv_qr.q();
        let mut r = tv_qr.r();
        for i in 0..n {
            if r[(i, i)] < 0.0 {
                for k in 0..n {
                    u[(k, i)] = -u[(k, i)];
                    r[(i, k)] = -r[(i, k)];
                }
            }
        }
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += r[(i, j)] * r[(i, j)];
                }
            }
        }
        let off = off.sqrt();
        if best.as_ref().is_none_or(|b| off < b.off_diagonal) {
            best = Some(SvdParts {
                values: DVector::from_fn(n, |i, _| r[(i, i)]),
                v_t: v.transpose(),
                u,
                off_diagonal: off,
            });
        }
        if off <= target {
            break;
        }
        if off > 0.9 * prev_off {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        } else {
            stalled = 0;
        }
        prev_off = off;
    }
    best.expect("at least one refinement iteration runs")
}

/// One clustered singular value with its right- and left-singular subspaces.
#[derive(Debug, Clone)]
pub struct SingularCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub right_subspace: Subspace,
    pub left_subspace: Subspace,
}

/// Full singular data, clusters sorted by value descending.
#[derive(Debug, Clone)]
pub struct SingularData {
    pub clusters: Vec<SingularCluster>,
}

impl SingularData {
    pub fn top(&self) -> &SingularCluster {
        self.clusters.first().expect("n >= 1 gives a cluster")
    }

    pub fn values_with_multiplicity(&self) -> Vec<(f64, usize)> {
        self.clusters
            .iter()
            .map(|c| (c.value, c.multiplicity))
            .collect()
    }

    pub fn smallest_value(&self) -> f64 {
        self.clusters.last().expect("n >= 1 gives a cluster").value
    }
}

/// Sorted singular values of `t` with multiplicities (relative-gap
/// clustering) and orthonormal right-singular subspaces.
pub fn singular_data(t: &DenseMatrix) -> Result<SingularData, MatrixError> {
    let n = t.n();
    let parts = stable_svd(t.inner());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        parts.values[b]
            .partial_cmp(&parts.values[a])
            .expect("singular values are finite")
    });
    let sigma_top = parts.values[order[0]];
    let gap = CLUSTER_REL_GAP * sigma_top.max(1.0);
    let mut clusters = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && parts.values[order[end - 1]] - parts.values[order[end]] <= gap {
            end += 1;
        }
        let members = &order[start..end];
        let value = members.iter().map(|&i| parts.values[i]).sum::<f64>() / members.len() as f64;
        let right = DMatrix::from_fn(n, members.len(), |i, j| parts.v_t[(members[j], i)]);
        let left = DMatrix::from_fn(n, members.len(), |i, j| parts.u[(i, members[j])]);
        clusters.push(SingularCluster {
            value,
            multiplicity: members.len(),
            right_subspace: Subspace::new(right, ORTHONORMALITY_TOL)?,
            left_subspace: Subspace::new(left, ORTHONORMALITY_TOL)?,
        });
        start = end;
    }
    Ok(SingularData { clusters })
}

/// Which norm space to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormSide {
    /// M: vectors where ‖Tx‖ = ‖T‖‖x‖.
    M,
    /// M_*: vectors where ‖T*x‖ = ‖T‖‖x‖.
    MStar,
}

/// The requested norm space as an orthonormal subspace. M is the top
/// right-singular subspace of T; M_* the top left-singular subspace (the
/// right-singular subspace of T*), read off the same factorization.
pub fn norm_space(t: &DenseMatrix, side: NormSide) -> Result<Subspace, MatrixError> {
    if t.operator_norm() == 0.0 {
        return Err(MatrixError::ZeroOperator);
    }
    let data = singular_data(t)?;
    Ok(match side {
        NormSide::M => data.top().right_subspace.clone(),
        NormSide::MStar => data.top().left_subspace.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag(values: &[f64]) -> DenseMatrix {
        let n = values.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { values[i] } else { 0.0 }).collect())
            .collect();
        DenseMatrix::from_rows(&rows).unwrap()
    }

    fn nilpotent() -> DenseMatrix {
        DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn identity_has_one_full_multiplicity_cluster() {
        let data = singular_data(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(data.values_with_multiplicity(), vec![(1.0, 3)]);
    }

    #[test]
    fn repeated_diagonal_values_cluster_by_multiplicity() {
        let data = singular_data(&diag(&[2.0, 2.0, 1.0])).unwrap();
        let vm = data.values_with_multiplicity();
        assert_eq!(vm.len(), 2);
        assert_relative_eq!(vm[0].0, 2.0, max_relative = 1e-12);
        assert_eq!(vm[0].1, 2);
        assert_relative_eq!(vm[1].0, 1.0, max_relative = 1e-12);
        assert_eq!(vm[1].1, 1);
        assert_eq!(
            data.clusters.iter().map(|c| c.multiplicity).sum::<usize>(),
            3
        );
    }

    #[test]
    fn rank_one_nilpotent_has_values_one_and_zero() {
        let data = singular_data(&nilpotent()).unwrap();
        let vm = data.values_with_multiplicity();
        assert_relative_eq!(vm[0].0, 1.0, max_relative = 1e-12);
        assert!(vm[1].0.abs() <= 1e-12);
        // |T| = diag(0, 1): the top right-singular direction is e2.
        let top = &data.top().right_subspace;
        assert_relative_eq!(top.basis()[(1, 0)].abs(), 1.0, max_relative = 1e-10);
        assert!(top.basis()[(0, 0)].abs() <= 1e-10);
    }

    #[test]
    fn norm_spaces_of_the_nilpotent_split_into_e2_and_e1() {
        let t = nilpotent();
        let m = norm_space(&t, NormSide::M).unwrap();
        let m_star = norm_space(&t, NormSide::MStar).unwrap();
        assert_eq!(m.dim(), 1);
        assert_relative_eq!(m.basis()[(1, 0)].abs(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(m_star.basis()[(0, 0)].abs(), 1.0, max_relative = 1e-10);
        // Every norm-space column realizes the norm.
        let norm = t.operator_norm();
        let tx = t.apply(&m.basis().column(0).into_owned());
        assert_relative_eq!(tx.norm(), norm, epsilon = 1e-9);
    }

    #[test]
    fn norm_space_of_a_normal_diagonal_is_the_top_eigenspace_for_both_sides() {
        let t = diag(&[2.0, 2.0, 1.0]);
        let m = norm_space(&t, NormSide::M).unwrap();
        let m_star = norm_space(&t, NormSide::MStar).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.sin_max_angle(&m_star) <= 1e-9);
        for j in 0..2 {
            assert!(m.basis()[(2, j)].abs() <= 1e-10);
        }
    }

    #[test]
    fn norm_space_of_an_isometry_is_the_whole_space() {
        let rot = DenseMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let m = norm_space(&rot, NormSide::M).unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn zero_operator_has_no_norm_space() {
        let z = DenseMatrix::from_rows(&[vec![0.0]]).unwrap();
        assert!(matches!(
            norm_space(&z, NormSide::M),
            Err(MatrixError::ZeroOperator)
        ));
    }
}
