//! Dense complex linear algebra primitives: Kronecker products, the bilinear
//! trace pairing, Hermitian eigendecomposition, PSD and rank verdicts under
//! explicit tolerances, row-major vectorization, and Schmidt decompositions.
//!
//! Every verdict in the crate is relative to the spectral scale of its input
//! (`max(1, λ_max)` for PSD checks, `σ_max` for rank), so results do not flip
//! under global rescaling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::ChoiError;

/// Dense complex matrix, the universal currency of the crate.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Relative tolerances used by every numeric verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Residual bound for eigendecompositions, relative to `1 + ‖a‖_F`.
    pub eig_residual: f64,
    /// Slack below zero accepted by PSD verdicts, relative to `max(1, λ_max)`.
    pub psd_slack: f64,
    /// Singular values at or below `rank_rel · σ_max` do not count towards rank.
    pub rank_rel: f64,
    /// Relative tolerance for equality of matrices and scalars.
    pub equality_rel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eig_residual: 1e-10,
            psd_slack: 1e-9,
            rank_rel: 1e-8,
            equality_rel: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// Checks that every field lies in `[0, 1)`.
    pub fn validate(&self) -> Result<(), ChoiError> {
        let fields = [
            ("eig_residual", self.eig_residual),
            ("psd_slack", self.psd_slack),
            ("rank_rel", self.rank_rel),
            ("equality_rel", self.equality_rel),
        ];
        for (name, value) in fields {
            if !(0.0..1.0).contains(&value) || !value.is_finite() {
                return Err(ChoiError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    /// Rescales the whole tolerance family so that `equality_rel` becomes
    /// `equality_rel_target`, keeping the ratios between fields.
    pub fn with_equality_rel(&self, equality_rel_target: f64) -> ToleranceConfig {
        let factor = equality_rel_target / self.equality_rel;
        ToleranceConfig {
            eig_residual: self.eig_residual * factor,
            psd_slack: self.psd_slack * factor,
            rank_rel: self.rank_rel * factor,
            equality_rel: equality_rel_target,
        }
    }
}

/// Result of a Hermitian eigendecomposition: eigenvalues in nondecreasing
/// order and the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

/// Outcome of a PSD test. `negative_witness` satisfies `⟨v|a|v⟩ < 0` whenever
/// `is_psd` is false.
#[derive(Clone, Debug)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub negative_witness: Option<CVector>,
}

/// Schmidt decomposition of a vector in `C^n ⊗ C^n`: the input equals
/// `Σ_k coefficients[k] · left_vectors[k] ⊗ right_vectors[k]`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Nonincreasing, nonnegative; their squares sum to the squared norm.
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<CVector>,
    pub right_vectors: Vec<CVector>,
    /// Count of coefficients above `rank_rel` times the largest.
    pub schmidt_rank: usize,
}

/// Complex zero.
pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Complex one.
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Real scalar promoted to a complex entry.
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Matrix unit `e_ij = |i⟩⟨j|` in `M_n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = C_ONE;
    m
}

/// Standard basis vector `|i⟩` of `C^n`.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = C_ONE;
    v
}

/// Frobenius norm.
pub fn frob_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance `‖a − b‖_F`; panics on shape mismatch.
pub fn frob_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "frob_dist shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Relative matrix equality: `‖a − b‖_F ≤ rel · (1 + max(‖a‖_F, ‖b‖_F))`.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, rel: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    frob_dist(a, b) <= rel * (1.0 + frob_norm(a).max(frob_norm(b)))
}

/// Hermiticity deviation `‖a − a†‖_F`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    frob_dist(a, &a.adjoint())
}

/// Whether `a` is Hermitian within `rel · (1 + ‖a‖_F)`.
pub fn is_hermitian(a: &CMatrix, rel: f64) -> bool {
    a.is_square() && hermitian_deviation(a) <= rel * (1.0 + frob_norm(a))
}

fn ensure_finite(a: &CMatrix) -> Result<(), ChoiError> {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(ChoiError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Builds an `rows × cols` matrix from finite row-major entries.
pub fn matrix_from_rows(
    rows: usize,
    cols: usize,
    entries: &[Complex64],
) -> Result<CMatrix, ChoiError> {
    if entries.len() != rows * cols {
        return Err(ChoiError::LengthMismatch {
            len: entries.len(),
            rows,
            cols,
        });
    }
    let m = CMatrix::from_row_slice(rows, cols, entries);
    ensure_finite(&m)?;
    Ok(m)
}

/// Kronecker product. The row index of the result is the bipartite index
/// `(i, k) ↦ i·rows(b) + k`, so `tensor(a, b)[(i,k),(j,l)] = a[i,j]·b[k,l]`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of column vectors, `(u ⊗ v)[i·dim(v) + k] = u[i]·v[k]`.
pub fn tensor_vec(u: &CVector, v: &CVector) -> CVector {
    let mut out = CVector::zeros(u.len() * v.len());
    for i in 0..u.len() {
        for k in 0..v.len() {
            out[i * v.len() + k] = u[i] * v[k];
        }
    }
    out
}

/// Bilinear trace pairing `⟨x, y⟩ = Tr(x yᵗ) = Σ_ij x_ij y_ij`.
///
/// This is the plain transpose, not the adjoint: the pairing is bilinear,
/// not sesquilinear.
pub fn pairing(x: &CMatrix, y: &CMatrix) -> Result<Complex64, ChoiError> {
    if x.shape() != y.shape() {
        return Err(ChoiError::ShapeMismatch {
            expected: format!("{}x{}", x.nrows(), x.ncols()),
            got: format!("{}x{}", y.nrows(), y.ncols()),
        });
    }
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a * b).sum())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian within `equality_rel · (1 + ‖a‖_F)`; it is
/// symmetrized as `(a + a†)/2` before solving so that float noise cannot
/// flip downstream verdicts. Eigenvalues come back nondecreasing.
pub fn hermitian_eig(a: &CMatrix, tol: &ToleranceConfig) -> Result<HermitianEig, ChoiError> {
    if !a.is_square() {
        return Err(ChoiError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let deviation = hermitian_deviation(a);
    let bound = tol.equality_rel * (1.0 + frob_norm(a));
    if deviation > bound {
        return Err(ChoiError::NotHermitian {
            deviation,
            tolerance: bound,
        });
    }
    let symmetrized = (a + a.adjoint()).scale(0.5);
    let eig = symmetrized.symmetric_eigen();

    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| {
        eig.eigenvalues[p]
            .partial_cmp(&eig.eigenvalues[q])
            .expect("eigenvalues of a Hermitian matrix are finite reals")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&p| eig.eigenvalues[p]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Decides positive semidefiniteness: true iff
/// `λ_min ≥ −psd_slack · max(1, λ_max)`. When false, the returned witness
/// `v` has `⟨v|a|v⟩ < 0`.
pub fn psd_verdict(a: &CMatrix, tol: &ToleranceConfig) -> Result<PsdVerdict, ChoiError> {
    let eig = hermitian_eig(a, tol)?;
    let min_eigenvalue = eig.eigenvalues[0];
    let max_eigenvalue = *eig
        .eigenvalues
        .last()
        .expect("hermitian_eig of a nonempty matrix yields eigenvalues");
    let is_psd = min_eigenvalue >= -tol.psd_slack * max_eigenvalue.max(1.0);
    let negative_witness = if is_psd {
        None
    } else {
        Some(CVector::from(eig.eigenvectors.column(0)))
    };
    Ok(PsdVerdict {
        is_psd,
        min_eigenvalue,
        negative_witness,
    })
}

/// Singular values in nonincreasing order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let svd = a.clone().svd(false, false);
    svd.singular_values.iter().copied().collect()
}

/// Numeric rank: count of singular values above `rank_rel · σ_max`.
/// The zero matrix has rank 0.
pub fn numeric_rank(a: &CMatrix, tol: &ToleranceConfig) -> usize {
    let sv = singular_values(a);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol.rank_rel * sigma_max).count()
}

/// Row-major vectorization: `vec(a)[i·cols + j] = a[i, j]`.
pub fn vec_row(a: &CMatrix) -> CVector {
    let (rows, cols) = a.shape();
    let mut v = CVector::zeros(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            v[i * cols + j] = a[(i, j)];
        }
    }
    v
}

/// Inverse of [`vec_row`]: reshapes `v` into an `rows × cols` matrix.
pub fn unvec_row(v: &CVector, rows: usize, cols: usize) -> Result<CMatrix, ChoiError> {
    if v.len() != rows * cols {
        return Err(ChoiError::LengthMismatch {
            len: v.len(),
            rows,
            cols,
        });
    }
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = v[i * cols + j];
        }
    }
    Ok(m)
}

/// Schmidt decomposition of `v ∈ C^n ⊗ C^n` via the SVD of its `n × n`
/// row-major reshape.
pub fn schmidt_decompose(
    v: &CVector,
    n: usize,
    tol: &ToleranceConfig,
) -> Result<SchmidtDecomposition, ChoiError> {
    if v.len() != n * n {
        return Err(ChoiError::LengthMismatch {
            len: v.len(),
            rows: n,
            cols: n,
        });
    }
    let m = unvec_row(v, n, n)?;
    let svd = m.svd(true, true);
    let u = svd.u.expect("SVD with vectors requested");
    let v_t = svd.v_t.expect("SVD with vectors requested");

    let coefficients: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut left_vectors = Vec::with_capacity(n);
    let mut right_vectors = Vec::with_capacity(n);
    for k in 0..n {
        left_vectors.push(CVector::from(u.column(k)));
        // Reshape m = U Σ V† means v = Σ_k σ_k · u_k ⊗ (row k of V†).
        right_vectors.push(CVector::from_iterator(n, v_t.row(k).iter().copied()));
    }
    let sigma_max = coefficients.first().copied().unwrap_or(0.0);
    let schmidt_rank = if sigma_max <= 0.0 {
        0
    } else {
        coefficients
            .iter()
            .filter(|&&c| c > tol.rank_rel * sigma_max)
            .count()
    };
    Ok(SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
        schmidt_rank,
    })
}
