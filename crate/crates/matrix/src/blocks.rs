//! Invariance and reducing-subspace checks, the single-peel block form
//! [αU A; 0 B] with U*A = 0, the full ⊕αᵢUᵢ peeling, and the normality
//! check — the finite-dimensional verification bench for the structure
//! theorems.

use nalgebra::DMatrix;

use crate::dense::{top_singular_value, DenseMatrix, MatrixError};
use crate::subspace::{Subspace, ORTHONORMALITY_TOL};
use crate::svd::singular_data;

/// Structural tolerance: block norms below this count as zero, isometry and
/// unitarity defects below this count as exact.
pub const STRUCTURAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub t_invariant: bool,
    pub t_star_invariant: bool,
    pub reducing: bool,
    /// ‖(I − P)TP‖: zero iff T maps the subspace into itself.
    pub off_block_norm: f64,
    pub off_block_norm_star: f64,
    /// Spread of ‖Tx‖/‖x‖ over probes in the subspace.
    pub ratio_min: f64,
    pub ratio_max: f64,
}

/// Checks T- and T*-invariance of `s` and reports the norm-ratio spread of
/// T over it (constant spread = scaled isometry on the subspace).
pub fn invariance_reducing_check(
    t: &DenseMatrix,
    s: &Subspace,
) -> Result<InvarianceReport, MatrixError> {
    let n = t.n();
    if s.ambient_dim() != n {
        return Err(MatrixError::ShapeMismatch {
            left: n,
            right: s.ambient_dim(),
        });
    }
    let p = s.projector();
    let complement = DMatrix::identity(n, n) - &p;
    let off = top_singular_value(&(&complement * t.inner() * &p));
    let off_star = top_singular_value(&(&complement * t.inner().transpose() * &p));
    let t_invariant = off <= STRUCTURAL_TOL;
    let t_star_invariant = off_star <= STRUCTURAL_TOL;

    // Probe vectors: the basis columns plus two fixed combinations.
    let mut probes: Vec<nalgebra::DVector<f64>> = (0..s.dim())
        .map(|j| s.basis().column(j).into_owned())
        .collect();
    if s.dim() > 1 {
        let all: nalgebra::DVector<f64> = s.basis().column_sum();
        let alternating = (0..s.dim())
            .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * s.basis().column(j))
            .fold(nalgebra::DVector::zeros(n), |acc, c| acc + c);
        probes.push(all);
        probes.push(alternating);
    }
    let mut ratio_min = f64::INFINITY;
    let mut ratio_max: f64 = 0.0;
    for x in probes {
        let nx = x.norm();
        if nx == 0.0 {
            continue;
        }
        let ratio = t.apply(&x).norm() / nx;
        ratio_min = ratio_min.min(ratio);
        ratio_max = ratio_max.max(ratio);
    }
    Ok(InvarianceReport {
        t_invariant,
        t_star_invariant,
        reducing: t_invariant && t_star_invariant,
        off_block_norm: off,
        off_block_norm_star: off_star,
        ratio_min,
        ratio_max,
    })
}

/// Single peel of T in the basis M ⊕ M⊥: top-left α·U, top-right A,
/// bottom-right B, with the bottom-left certified (near) zero.
#[derive(Debug, Clone)]
pub struct SinglePeel {
    /// "verified (sampled)" or a vacuous label when the class hypothesis
    /// failed; the blocks are reported either way.
    pub hypothesis: String,
    pub alpha: f64,
    pub u: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub m_basis: Subspace,
    pub u_isometry_defect: f64,
    pub u_star_a_norm: f64,
    pub lower_left_norm: f64,
    pub b_norm: f64,
    /// ‖B‖ < α − tolerance; false is a flag, not an error.
    pub b_strictly_below_norm: bool,
}

/// Splits T along M = the top right-singular subspace. `hypothesis_passed`
/// is the caller's quasi-test verdict; a failing hypothesis only relabels
/// the result as vacuous.
pub fn block_decompose(t: &DenseMatrix, hypothesis_passed: bool) -> Result<SinglePeel, MatrixError> {
    let alpha = t.operator_norm();
    if alpha == 0.0 {
        return Err(MatrixError::ZeroOperator);
    }
    let n = t.n();
    let data = singular_data(t)?;
    let m = data.top().right_subspace.clone();
    let dim = m.dim();
    let perp_cols: Vec<&Subspace> = data.clusters[1..]
        .iter()
        .map(|c| &c.right_subspace)
        .collect();
    let mut perp = DMatrix::zeros(n, n - dim);
    let mut col = 0;
    for s in perp_cols {
        perp.view_mut((0, col), (n, s.dim())).copy_from(s.basis());
        col += s.dim();
    }
    let mb = m.basis();
    let u = (mb.transpose() * t.inner() * mb) / alpha;
    let a = mb.transpose() * t.inner() * &perp;
    let b = perp.transpose() * t.inner() * &perp;
    let lower_left = perp.transpose() * t.inner() * mb;
    let u_isometry_defect =
        top_singular_value(&(u.transpose() * &u - DMatrix::identity(dim, dim)));
    let b_norm = top_singular_value(&b);
    Ok(SinglePeel {
        hypothesis: if hypothesis_passed {
            "verified (sampled)".to_string()
        } else {
            "vacuous: the quasi-*-paranormality hypothesis failed".to_string()
        },
        alpha,
        u_star_a_norm: top_singular_value(&(u.transpose() * &a)),
        lower_left_norm: top_singular_value(&lower_left),
        b_strictly_below_norm: b_norm < alpha - STRUCTURAL_TOL,
        u,
        a,
        b,
        m_basis: m,
        u_isometry_defect,
        b_norm,
    })
}

/// One fully peeled layer: T acts on `basis` as `alpha` times the unitary
/// `u` (expressed in that basis).
#[derive(Debug, Clone)]
pub struct PeelStage {
    pub alpha: f64,
    pub u: DMatrix<f64>,
    pub basis: Subspace,
    pub unitary_defect: f64,
}

/// Where peeling stopped early: the current restriction in its M ⊕ M⊥
/// basis, both as the reported (α, U, A, B) triple and in full for exact
/// reassembly.
#[derive(Debug, Clone)]
pub struct ResidualTriple {
    pub alpha: f64,
    pub u: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub lower_left_norm: f64,
    pub basis: Subspace,
    pub full: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct BlockForm {
    pub stages: Vec<PeelStage>,
    pub residual: Option<ResidualTriple>,
    /// Operator norm of T minus the reassembled decomposition.
    pub reassembly_error: f64,
}

impl BlockForm {
    pub fn alphas(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.alpha).collect()
    }

    pub fn stage_dims(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.basis.dim()).collect()
    }
}

/// Iteratively peels the top norm space of the current restriction. Each
/// reducing stage contributes (αᵢ, Uᵢ); the first non-reducing stage stops
/// the loop and is reported as a structure triple instead of being assumed
/// reducible.
pub fn peel_decomposition(t: &DenseMatrix) -> Result<BlockForm, MatrixError> {
    let n = t.n();
    let zero_floor = 1e-12 * (1.0 + t.operator_norm());
    let mut ambient = DMatrix::<f64>::identity(n, n);
    let mut stages = Vec::new();
    let mut residual = None;
    let mut d = n;
    while d > 0 {
        let r = ambient.transpose() * t.inner() * &ambient;
        let rd = DenseMatrix::from_inner(r.clone())?;
        let alpha = rd.operator_norm();
        if alpha <= zero_floor {
            // The restriction vanished: a final 0 · I stage.
            stages.push(PeelStage {
                alpha: 0.0,
                u: DMatrix::identity(d, d),
                basis: Subspace::new(ambient.clone(), ORTHONORMALITY_TOL)?,
                unitary_defect: 0.0,
            });
            break;
        }
        let data = singular_data(&rd)?;
        let m = &data.top().right_subspace;
        let dim = m.dim();
        let p = m.projector();
        let complement = DMatrix::identity(d, d) - &p;
        let off = top_singular_value(&(&complement * &r * &p));
        let off_star = top_singular_value(&(&complement * r.transpose() * &p));
        let stage_basis = Subspace::new(&ambient * m.basis(), ORTHONORMALITY_TOL)?;
        if off <= STRUCTURAL_TOL && off_star <= STRUCTURAL_TOL {
            let u = (m.basis().transpose() * &r * m.basis()) / alpha;
            let unitary_defect =
                top_singular_value(&(u.transpose() * &u - DMatrix::identity(dim, dim)));
            stages.push(PeelStage {
                alpha,
                u,
                basis: stage_basis,
                unitary_defect,
            });
            if dim == d {
                break;
            }
            let mut perp = DMatrix::zeros(d, d - dim);
            let mut col = 0;
            for c in &data.clusters[1..] {
                perp.view_mut((0, col), (d, c.right_subspace.dim()))
                    .copy_from(c.right_subspace.basis());
                col += c.right_subspace.dim();
            }
            ambient = &ambient * perp;
            d -= dim;
        } else {
            let mut perp = DMatrix::zeros(d, d - dim);
            let mut col = 0;
            for c in &data.clusters[1..] {
                perp.view_mut((0, col), (d, c.right_subspace.dim()))
                    .copy_from(c.right_subspace.basis());
                col += c.right_subspace.dim();
            }
            residual = Some(ResidualTriple {
                alpha,
                u: (m.basis().transpose() * &r * m.basis()) / alpha,
                a: m.basis().transpose() * &r * &perp,
                b: perp.transpose() * &r * &perp,
                lower_left_norm: off,
                basis: Subspace::new(ambient.clone(), ORTHONORMALITY_TOL)?,
                full: r,
            });
            break;
        }
    }
    let mut reassembled = DMatrix::<f64>::zeros(n, n);
    for stage in &stages {
        let basis = stage.basis.basis();
        reassembled += basis * (stage.alpha * &stage.u) * basis.transpose();
    }
    if let Some(res) = &residual {
        let basis = res.basis.basis();
        reassembled += basis * &res.full * basis.transpose();
    }
    let reassembly_error = top_singular_value(&(t.inner() - reassembled));
    Ok(BlockForm {
        stages,
        residual,
        reassembly_error,
    })
}

#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub normal: bool,
    pub commutator_frobenius: f64,
    /// Commutator Frobenius norm relative to ‖T‖²_F.
    pub relative_defect: f64,
    pub smallest_singular: f64,
    pub invertible: bool,
}

/// ‖T*T − TT*‖_F against 10⁻⁹·‖T‖²_F, plus invertibility of T.
pub fn normality_check(t: &DenseMatrix) -> NormalityReport {
    let m = t.inner();
    let commutator = m.transpose() * m - m * m.transpose();
    let commutator_frobenius = commutator.norm();
    let scale = t.frobenius_norm().powi(2);
    let relative_defect = if scale > 0.0 {
        commutator_frobenius / scale
    } else {
        0.0
    };
    let smallest = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    NormalityReport {
        normal: commutator_frobenius <= STRUCTURAL_TOL * scale.max(f64::MIN_POSITIVE),
        commutator_frobenius,
        relative_defect,
        smallest_singular: smallest,
        invertible: smallest > STRUCTURAL_TOL,
    }
}
