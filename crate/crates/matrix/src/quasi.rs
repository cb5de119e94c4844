//! Sampled verification of the quasi-*-paranormal inequality
//! ‖T*Tx‖² ≤ ‖T³x‖‖Tx‖ for dense matrices: basis vectors, seeded sphere
//! samples, projected-gradient ascent on the violation margin, and the
//! positivity of the pencil T*³T³ − 2k(T*T)² + k²(T*T) over a k-grid.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::rand_gen::gaussian_vector;

/// A violation must beat the inequality by this much to count.
pub const VIOLATION_MARGIN: f64 = 1e-12;

/// Pencil quadratic forms are accepted as nonnegative above this floor.
pub const PENCIL_PSD_TOL: f64 = 1e-10;

/// Sampling budget: sphere samples, ascent iterations, and k-grid size.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub sphere_samples: usize,
    pub descent_iters: usize,
    pub k_grid: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            sphere_samples: 200,
            descent_iters: 60,
            k_grid: 41,
        }
    }
}

/// Everything a PASS is allowed to claim: no violation found under budget.
#[derive(Debug, Clone)]
pub struct PassEvidence {
    pub samples_checked: usize,
    /// min over checked unit x of ‖T³x‖²‖Tx‖² − ‖T*Tx‖⁴, for T rescaled to
    /// unit norm (the inequality is scale invariant, and unit scale keeps
    /// the fixed margin meaningful).
    pub min_gap: f64,
    /// min eigenvalue of the pencil over the k-grid, at unit scale.
    pub pencil_min_eig: f64,
    pub note: &'static str,
}

/// A concrete unit vector beating the inequality by more than the margin.
#[derive(Debug, Clone)]
pub struct FailWitness {
    pub x: DVector<f64>,
    /// ‖T*Tx‖².
    pub lhs: f64,
    /// ‖T³x‖‖Tx‖.
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub enum QuasiVerdict {
    Pass(PassEvidence),
    Fail(FailWitness),
}

impl QuasiVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, QuasiVerdict::Pass(_))
    }
}

/// The three quadratic forms behind the inequality at a given T.
struct Forms {
    c1: DMatrix<f64>, // T*T          → ‖Tx‖²
    c2: DMatrix<f64>, // (T*T)²       → ‖T*Tx‖²
    c3: DMatrix<f64>, // T*³T³        → ‖T³x‖²
}

impl Forms {
    fn new(t: &DenseMatrix) -> Self {
        let m = t.inner();
        let mt = m.transpose();
        let c1 = &mt * m;
        let c2 = &c1 * &c1;
        let m3 = m * m * m;
        let c3 = m3.transpose() * &m3;
        Forms { c1, c2, c3 }
    }

    fn quadratics(&self, x: &DVector<f64>) -> (f64, f64, f64) {
        let q = |c: &DMatrix<f64>| (x.transpose() * c * x)[(0, 0)];
        (q(&self.c1), q(&self.c2), q(&self.c3))
    }

    /// Violation margin ‖T*Tx‖⁴ − ‖T³x‖²‖Tx‖² at unit x; positive = broken.
    fn margin(&self, x: &DVector<f64>) -> f64 {
        let (q1, q2, q3) = self.quadratics(x);
        q2 * q2 - q3 * q1
    }

    /// Gradient of the margin, for sphere-projected ascent.
    fn margin_gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let (q1, q2, q3) = self.quadratics(x);
        4.0 * q2 * (&self.c2 * x) - 2.0 * q1 * (&self.c3 * x) - 2.0 * q3 * (&self.c1 * x)
    }
}

fn normalized(x: DVector<f64>) -> Option<DVector<f64>> {
    let n = x.norm();
    (n > 0.0).then(|| x / n)
}

/// Ascend the violation margin along the sphere from `x0`.
fn ascend(forms: &Forms, x0: DVector<f64>, iters: usize) -> DVector<f64> {
    let mut x = x0;
    let mut value = forms.margin(&x);
    for _ in 0..iters {
        let g = forms.margin_gradient(&x);
        let Some(dir) = normalized(g) else { break };
        let mut step = 0.5;
        let mut improved = false;
        for _ in 0..24 {
            if let Some(cand) = normalized(&x + step * &dir) {
                let cand_value = forms.margin(&cand);
                if cand_value > value {
                    x = cand;
                    value = cand_value;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    x
}

/// Logarithmic k-grid spanning [10⁻⁴‖T‖², 10⁴‖T‖²].
fn k_grid(norm_sq: f64, points: usize) -> Vec<f64> {
    let lo = 1e-4 * norm_sq;
    let hi = 1e4 * norm_sq;
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let s = i as f64 / (points - 1) as f64;
            lo * (hi / lo).powf(s)
        })
        .collect()
}

/// Minimum eigenvalue of the symmetric pencil C3 − 2k·C2 + k²·C1.
fn pencil_min_eig(forms: &Forms, k: f64) -> f64 {
    let p = &forms.c3 - 2.0 * k * &forms.c2 + k * k * &forms.c1;
    let sym = (&p + p.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// FAIL with a unit witness if any checked vector beats the inequality by
/// more than the margin; PASS otherwise, carrying the worst gap seen and the
/// pencil's minimum eigenvalue over the grid. A PASS is sampled evidence,
/// not a proof. The search runs on T rescaled to unit norm — the inequality
/// is homogeneous, and unit scale is where the fixed margin is calibrated —
/// while the reported witness sides use the original T.
pub fn quasi_star_matrix_test(t: &DenseMatrix, budget: &Budget, seed: u64) -> QuasiVerdict {
    let n = t.n();
    let norm = t.operator_norm();
    if norm == 0.0 {
        return QuasiVerdict::Pass(PassEvidence {
            samples_checked: 0,
            min_gap: 0.0,
            pencil_min_eig: 0.0,
            note: "zero operator satisfies the inequality identically",
        });
    }
    let unit = DenseMatrix::from_inner(t.inner() / norm).expect("rescaling stays finite");
    let forms = Forms::new(&unit);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut candidates: Vec<DVector<f64>> = (0..n)
        .map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 }))
        .collect();
    for _ in 0..budget.sphere_samples {
        if let Some(x) = normalized(gaussian_vector(&mut rng, n)) {
            candidates.push(x);
        }
    }

    let mut best_x: Option<DVector<f64>> = None;
    let mut best_margin = f64::NEG_INFINITY;
    for x in &candidates {
        let m = forms.margin(x);
        if m > best_margin {
            best_margin = m;
            best_x = Some(x.clone());
        }
    }
    if let Some(x0) = best_x.clone() {
        let refined = ascend(&forms, x0, budget.descent_iters);
        let m = forms.margin(&refined);
        if m > best_margin {
            best_margin = m;
            best_x = Some(refined);
        }
    }

    if best_margin > VIOLATION_MARGIN {
        let x = best_x.expect("a margin implies a candidate");
        // Witness sides for the caller's T, not the rescaling.
        let (q1, q2, q3) = Forms::new(t).quadratics(&x);
        return QuasiVerdict::Fail(FailWitness {
            x,
            lhs: q2,
            rhs: (q3 * q1).max(0.0).sqrt(),
        });
    }

    let pencil_min = k_grid(1.0, budget.k_grid)
        .into_iter()
        .map(|k| pencil_min_eig(&forms, k))
        .fold(f64::INFINITY, f64::min);
    QuasiVerdict::Pass(PassEvidence {
        samples_checked: candidates.len(),
        min_gap: -best_margin,
        pencil_min_eig: pencil_min,
        note: "sampled verification: no violation found under budget",
    })
}

/// Definition-versus-pencil consistency at a single vector: the pencil form
/// minimized over the grid (plus the per-vector optimal k) is nonnegative
/// exactly when the definitional margin at that vector is nonpositive. Both
/// sides are evaluated at unit scale.
pub fn pencil_agrees_at(t: &DenseMatrix, budget: &Budget, x: &DVector<f64>) -> bool {
    let norm = t.operator_norm();
    if norm == 0.0 {
        return true;
    }
    let unit = DenseMatrix::from_inner(t.inner() / norm).expect("rescaling stays finite");
    let forms = Forms::new(&unit);
    let Some(x) = normalized(x.clone()) else {
        return true;
    };
    let (q1, q2, q3) = forms.quadratics(&x);
    let mut ks = k_grid(1.0, budget.k_grid);
    if q1 > 0.0 {
        ks.push(q2 / q1);
    }
    let min_form = ks
        .into_iter()
        .map(|k| q3 - 2.0 * k * q2 + k * k * q1)
        .fold(f64::INFINITY, f64::min);
    let definitional_violation = q2 * q2 - q3 * q1 > VIOLATION_MARGIN;
    (min_form >= -PENCIL_PSD_TOL) == !definitional_violation
}
