//! Finite-dimensional verification bench for the structure theory of
//! norm-attaining operators: singular data with multiplicities, the norm
//! spaces M and M_*, invariance/reducing checks, block forms, direct-sum
//! peeling, matrix-level class tests, and a bridge from exact tree shifts
//! to dense matrices.

pub mod blocks;
pub mod bridge;
pub mod dense;
pub mod quasi;
pub mod rand_gen;
pub mod subspace;
pub mod svd;

pub use blocks::{
    block_decompose, invariance_reducing_check, normality_check, peel_decomposition, BlockForm,
};
pub use dense::{DenseMatrix, MatrixError};
pub use quasi::{quasi_star_matrix_test, Budget, QuasiVerdict};
pub use subspace::Subspace;
pub use svd::{norm_space, singular_data, NormSide};
