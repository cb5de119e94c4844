//! Seeded random matrix fixtures: Gaussian samples, orthogonal matrices via
//! QR of a Gaussian, and block direct sums ⊕ αᵢUᵢ used to exercise the
//! structure theorems. Everything is deterministic in the seed.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::subspace::{Subspace, ORTHONORMALITY_TOL};

/// Standard normal sample via Box–Muller.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// Haar-like random orthogonal matrix: QR of a Gaussian, with the sign of
/// each R diagonal entry folded into Q so the construction is canonical.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// A direct-sum construction T = W (⊕ αᵢUᵢ) Wᵀ with strictly decreasing
/// positive αᵢ, each Uᵢ orthogonal, and an ambient orthogonal change of
/// basis W (identity when `conjugate` is false).
#[derive(Debug, Clone)]
pub struct DirectSumFixture {
    pub t: DenseMatrix,
    /// (αᵢ, dim of the i-th block), strictly decreasing in α.
    pub blocks: Vec<(f64, usize)>,
    /// Ambient orthonormal basis of the top block: the expected M.
    pub top_block: Subspace,
    /// Ambient orthonormal bases of every block, in order.
    pub block_bases: Vec<Subspace>,
}

/// Builds ⊕ αᵢUᵢ from an explicit block plan.
pub fn direct_sum_fixture(
    rng: &mut ChaCha8Rng,
    plan: &[(f64, usize)],
    conjugate: bool,
) -> DirectSumFixture {
    assert!(!plan.is_empty(), "need at least one block");
    assert!(
        plan.windows(2).all(|w| w[0].0 > w[1].0) && plan.iter().all(|&(a, d)| a > 0.0 && d > 0),
        "block plan must have strictly decreasing positive scales"
    );
    let n: usize = plan.iter().map(|&(_, d)| d).sum();
    let mut t = DMatrix::zeros(n, n);
    let mut offset = 0;
    let mut offsets = Vec::new();
    for &(alpha, dim) in plan {
        let u = random_orthogonal(rng, dim);
        t.view_mut((offset, offset), (dim, dim))
            .copy_from(&(alpha * u));
        offsets.push((offset, dim));
        offset += dim;
    }
    let w = if conjugate {
        random_orthogonal(rng, n)
    } else {
        DMatrix::identity(n, n)
    };
    let ambient = &w * t * w.transpose();
    let block_bases: Vec<Subspace> = offsets
        .iter()
        .map(|&(off, dim)| {
            let cols = w.columns(off, dim).into_owned();
            Subspace::new(cols, ORTHONORMALITY_TOL).expect("orthogonal columns")
        })
        .collect();
    DirectSumFixture {
        t: DenseMatrix::from_inner(ambient).expect("finite construction"),
        blocks: plan.to_vec(),
        top_block: block_bases.first().expect("nonempty plan").clone(),
        block_bases,
    }
}

/// Seeded fixture with a random block plan: up to `max_blocks` blocks of
/// total dimension ≤ `max_dim`, scales strictly decreasing in (0, 4].
pub fn random_direct_sum(seed: u64, max_dim: usize, max_blocks: usize) -> DirectSumFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.random_range(1..=max_blocks.max(1));
    let mut scales: Vec<f64> = Vec::new();
    let mut alpha = rng.random_range(2.0..4.0);
    for _ in 0..blocks {
        scales.push(alpha);
        alpha *= rng.random_range(0.35..0.75);
    }
    let mut dims = Vec::new();
    let mut left = max_dim.max(blocks);
    for i in 0..blocks {
        let remaining_blocks = blocks - i;
        let max_here = left - (remaining_blocks - 1);
        let d = rng.random_range(1..=max_here.min(left / remaining_blocks + 2).max(1));
        dims.push(d);
        left -= d;
    }
    let plan: Vec<(f64, usize)> = scales.into_iter().zip(dims).collect();
    direct_sum_fixture(&mut rng, &plan, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_orthogonal_matrices_are_orthogonal_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = random_orthogonal(&mut rng, 6);
        let defect = (q.transpose() * &q - DMatrix::identity(6, 6)).norm();
        assert!(defect <= 1e-12, "orthogonality defect {defect}");
        let mut rng2 = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(q, random_orthogonal(&mut rng2, 6));
    }

    #[test]
    fn direct_sums_have_the_planned_norm_and_isometric_top_block() {
        let fixture = random_direct_sum(11, 16, 3);
        let norm = fixture.t.operator_norm();
        let expected = fixture.blocks[0].0;
        assert!((norm - expected).abs() <= 1e-9 * expected);
        // T acts as α₁ times an isometry on the top block.
        let basis = fixture.top_block.basis();
        for j in 0..fixture.top_block.dim() {
            let x = basis.column(j).into_owned();
            let tx = fixture.t.apply(&x);
            assert!((tx.norm() - expected).abs() <= 1e-9 * expected);
        }
    }

    #[test]
    fn block_dimensions_fill_the_matrix() {
        for seed in 0..30 {
            let fixture = random_direct_sum(seed, 24, 4);
            let total: usize = fixture.blocks.iter().map(|&(_, d)| d).sum();
            assert_eq!(total, fixture.t.n());
            assert!(fixture
                .blocks
                .windows(2)
                .all(|w| w[0].0 > w[1].0 + 1e-9));
        }
    }
}
