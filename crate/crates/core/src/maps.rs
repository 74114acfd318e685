//! Linear maps `φ: M_n → M_m` in three interconvertible forms: the transfer
//! matrix acting on row-vectorized inputs, the Choi matrix in `M_n ⊗ M_m`,
//! and Kraus operator sets `φ(x) = Σ_k s_k† x s_k`.
//!
//! The transfer matrix is the canonical internal form (composition is matrix
//! multiplication, application is a matrix-vector product); Choi and Kraus
//! are conversion targets. All index conventions are pinned by the identity
//! `C_{Ad_s} = |s̃⟩⟨s̃|`.

use num_complex::Complex64;

use crate::error::ChoiError;
use crate::linalg::{
    self, frob_norm, hermitian_deviation, hermitian_eig, matrix_unit, psd_verdict, unvec_row,
    vec_row, CMatrix, CVector, ToleranceConfig, C_ONE,
};

/// Linear map `M_n → M_m`, stored as its `m² × n²` transfer matrix:
/// `vec(φ(x)) = transfer · vec(x)` in row-major vectorization.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    n: usize,
    m: usize,
    transfer: CMatrix,
}

/// Element of `M_n ⊗ M_m` with the bipartite index `(i, k) ↦ i·m + k`;
/// houses `C_φ`, substitute matrices `Σ`, and generalized Choi matrices
/// `C^Σ_φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiLikeMatrix {
    n: usize,
    m: usize,
    matrix: CMatrix,
}

/// Nonempty family of Kraus operators `s_k ∈ C^{n×m}` representing the
/// completely positive map `x ↦ Σ_k s_k† x s_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    n: usize,
    m: usize,
    operators: Vec<CMatrix>,
}

/// Outcome of a complete positivity test.
#[derive(Clone, Debug)]
pub struct CpVerdict {
    pub is_cp: bool,
    /// Minimum eigenvalue of (the Hermitian part of) the Choi matrix.
    pub min_choi_eigenvalue: f64,
    /// Kraus decomposition, attached when `is_cp` holds.
    pub kraus: Option<KrausSet>,
    /// Vector with `⟨v|C_φ|v⟩ < 0`, attached when the verdict is negative
    /// and the Choi matrix has a negative direction.
    pub negative_witness: Option<CVector>,
}

/// Maximally entangled reference vector `|ω⟩ = Σ_i |i⟩|i⟩ ∈ C^n ⊗ C^n`
/// (unnormalized).
pub fn omega(n: usize) -> CVector {
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        v[i * n + i] = C_ONE;
    }
    v
}

/// Tilde vector of `s`: `|s̃⟩[i·cols + j] = conj(s[i,j])`, so that
/// `⟨s̃| = Σ_ij s_ij ⟨i|⟨j|` and `C_{Ad_s} = |s̃⟩⟨s̃|`.
pub fn tilde_vector(s: &CMatrix) -> CVector {
    vec_row(s).map(|z| z.conj())
}

impl LinearMap {
    /// Wraps a transfer matrix; its shape must be `m² × n²`.
    pub fn from_transfer(n: usize, m: usize, transfer: CMatrix) -> Result<Self, ChoiError> {
        if transfer.shape() != (m * m, n * n) {
            return Err(ChoiError::ShapeMismatch {
                expected: format!("{}x{}", m * m, n * n),
                got: format!("{}x{}", transfer.nrows(), transfer.ncols()),
            });
        }
        Ok(LinearMap { n, m, transfer })
    }

    /// Identity map on `M_n`.
    pub fn identity(n: usize) -> Self {
        LinearMap {
            n,
            m: n,
            transfer: CMatrix::identity(n * n, n * n),
        }
    }

    /// Transposition map `x ↦ xᵗ` on `M_n`.
    pub fn transposition(n: usize) -> Self {
        let mut transfer = CMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                transfer[(i * n + j, j * n + i)] = C_ONE;
            }
        }
        LinearMap { n, m: n, transfer }
    }

    /// `Ad_s: x ↦ s† x s` for `s ∈ C^{n×m}`, a map `M_n → M_m`.
    /// Its transfer matrix is `s† ⊗ sᵗ`.
    pub fn ad(s: &CMatrix) -> Self {
        let (n, m) = s.shape();
        LinearMap {
            n,
            m,
            transfer: linalg::tensor(&s.adjoint(), &s.transpose()),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.n
    }

    pub fn output_dim(&self) -> usize {
        self.m
    }

    pub fn transfer(&self) -> &CMatrix {
        &self.transfer
    }

    /// Applies the map to `x ∈ M_n`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix, ChoiError> {
        if x.shape() != (self.n, self.n) {
            return Err(ChoiError::ShapeMismatch {
                expected: format!("{}x{}", self.n, self.n),
                got: format!("{}x{}", x.nrows(), x.ncols()),
            });
        }
        unvec_row(&(&self.transfer * vec_row(x)), self.m, self.m)
    }

    /// Composition `self ∘ inner`; the transfer matrices multiply.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, ChoiError> {
        if inner.m != self.n {
            return Err(ChoiError::ShapeMismatch {
                expected: format!("inner map into M_{}", self.n),
                got: format!("inner map into M_{}", inner.m),
            });
        }
        Ok(LinearMap {
            n: inner.n,
            m: self.m,
            transfer: &self.transfer * &inner.transfer,
        })
    }

    /// Adjoint `φ*: M_m → M_n` with respect to the bilinear trace pairing:
    /// `⟨φ*(x), y⟩ = ⟨x, φ(y)⟩`. In row-major coordinates this is the plain
    /// transpose of the transfer matrix, and `(Ad_s)* = Ad_{sᵗ}`.
    pub fn adjoint(&self) -> LinearMap {
        LinearMap {
            n: self.m,
            m: self.n,
            transfer: self.transfer.transpose(),
        }
    }

    /// Choi matrix `C_φ = Σ_ij e_ij ⊗ φ(e_ij) ∈ M_n ⊗ M_m`, computed as an
    /// index reshuffle of the transfer matrix:
    /// `C[(i,k),(j,l)] = transfer[(k,l),(i,j)]`.
    pub fn choi(&self) -> ChoiLikeMatrix {
        let (n, m) = (self.n, self.m);
        let mut matrix = CMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        matrix[(i * m + k, j * m + l)] = self.transfer[(k * m + l, i * n + j)];
                    }
                }
            }
        }
        ChoiLikeMatrix { n, m, matrix }
    }

    /// Complete positivity verdict via the spectrum of the Choi matrix.
    ///
    /// A map whose Choi matrix is not Hermitian (equivalently, a map that
    /// does not preserve Hermitianity) is reported non-CP; the eigenvalue
    /// data then refers to the Hermitian part.
    pub fn cp_verdict(&self, tol: &ToleranceConfig) -> CpVerdict {
        let choi = self.choi();
        let hermitian = is_hermitian_choi(&choi, tol);
        let symmetrized = (&choi.matrix + choi.matrix.adjoint()).scale(0.5);
        let eig = hermitian_eig(&symmetrized, tol)
            .expect("symmetrized matrix is Hermitian by construction");
        let min_choi_eigenvalue = eig.eigenvalues[0];
        let max_eigenvalue = *eig.eigenvalues.last().expect("nonempty spectrum");
        let psd = min_choi_eigenvalue >= -tol.psd_slack * max_eigenvalue.max(1.0);
        let is_cp = hermitian && psd;
        let kraus = if is_cp {
            Some(
                KrausSet::from_choi(&choi, tol)
                    .expect("a PSD Choi matrix admits a Kraus decomposition"),
            )
        } else {
            None
        };
        let negative_witness = if !is_cp && min_choi_eigenvalue < 0.0 {
            Some(CVector::from(eig.eigenvectors.column(0)))
        } else {
            None
        };
        CpVerdict {
            is_cp,
            min_choi_eigenvalue,
            kraus,
            negative_witness,
        }
    }
}

fn is_hermitian_choi(choi: &ChoiLikeMatrix, tol: &ToleranceConfig) -> bool {
    hermitian_deviation(&choi.matrix) <= tol.equality_rel * (1.0 + frob_norm(&choi.matrix))
}

impl ChoiLikeMatrix {
    /// Wraps an `nm × nm` matrix with declared bipartite factors `(n, m)`.
    pub fn new(n: usize, m: usize, matrix: CMatrix) -> Result<Self, ChoiError> {
        if matrix.shape() != (n * m, n * m) {
            return Err(ChoiError::ShapeMismatch {
                expected: format!("{}x{}", n * m, n * m),
                got: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        Ok(ChoiLikeMatrix { n, m, matrix })
    }

    /// Wraps a `d × d` matrix as an element of `M_n ⊗ M_n` with `d = n²`.
    pub fn square(matrix: CMatrix) -> Result<Self, ChoiError> {
        if !matrix.is_square() {
            return Err(ChoiError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let d = matrix.nrows();
        let n = (d as f64).sqrt().round() as usize;
        if n * n != d {
            return Err(ChoiError::NotPerfectSquare { dim: d });
        }
        Ok(ChoiLikeMatrix { n, m: n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The `m × m` block at block position `(i, j)`; for `C_φ` this is
    /// `φ(e_ij)`.
    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        let mut b = CMatrix::zeros(self.m, self.m);
        for k in 0..self.m {
            for l in 0..self.m {
                b[(k, l)] = self.matrix[(i * self.m + k, j * self.m + l)];
            }
        }
        b
    }

    /// Inverse of [`LinearMap::choi`]: the unique map with this Choi matrix,
    /// `φ(x) = Σ_ij x_ij · block_ij`.
    pub fn to_map(&self) -> LinearMap {
        let (n, m) = (self.n, self.m);
        let mut transfer = CMatrix::zeros(m * m, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        transfer[(k * m + l, i * n + j)] = self.matrix[(i * m + k, j * m + l)];
                    }
                }
            }
        }
        LinearMap { n, m, transfer }
    }

    /// Generalized Choi matrix `C^Σ_φ = (id_n ⊗ φ)(Σ)`: applies `φ` to each
    /// `n × n` block of the substitute matrix `Σ = self`.
    pub fn generalized_choi(&self, map: &LinearMap) -> Result<ChoiLikeMatrix, ChoiError> {
        if self.n != self.m || map.input_dim() != self.n {
            return Err(ChoiError::ShapeMismatch {
                expected: format!("substitute in M_{n} ⊗ M_{n} and map on M_{n}", n = self.n),
                got: format!(
                    "substitute in M_{} ⊗ M_{} and map on M_{}",
                    self.n,
                    self.m,
                    map.input_dim()
                ),
            });
        }
        let n = self.n;
        let m = map.output_dim();
        let mut matrix = CMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                let image = map.apply(&self.block(i, j))?;
                for k in 0..m {
                    for l in 0..m {
                        matrix[(i * m + k, j * m + l)] = image[(k, l)];
                    }
                }
            }
        }
        Ok(ChoiLikeMatrix { n, m, matrix })
    }
}

impl KrausSet {
    /// Wraps a nonempty family of `n × m` operators.
    pub fn new(n: usize, m: usize, operators: Vec<CMatrix>) -> Result<Self, ChoiError> {
        if operators.is_empty() {
            return Err(ChoiError::EmptyKrausSet);
        }
        for op in &operators {
            if op.shape() != (n, m) {
                return Err(ChoiError::ShapeMismatch {
                    expected: format!("{n}x{m}"),
                    got: format!("{}x{}", op.nrows(), op.ncols()),
                });
            }
        }
        Ok(KrausSet { n, m, operators })
    }

    /// Extracts Kraus operators from a PSD Choi matrix.
    ///
    /// Eigenpairs `(λ_k, v_k)` with `λ_k > rank_rel · λ_max` become
    /// `s_k = conj(unvec(√λ_k · v_k))`; the conjugation mirrors the tilde
    /// convention, and each operator's global phase is fixed by making its
    /// largest-magnitude entry real and positive. The zero matrix yields the
    /// single zero operator.
    pub fn from_choi(choi: &ChoiLikeMatrix, tol: &ToleranceConfig) -> Result<Self, ChoiError> {
        let verdict = psd_verdict(&choi.matrix, tol)?;
        if !verdict.is_psd {
            return Err(ChoiError::NotPsd {
                min_eigenvalue: verdict.min_eigenvalue,
            });
        }
        let eig = hermitian_eig(&choi.matrix, tol)?;
        let lambda_max = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let mut operators = Vec::new();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > tol.rank_rel * lambda_max && lambda > 0.0 {
                let scaled = CVector::from(eig.eigenvectors.column(k)).scale(lambda.sqrt());
                let op = unvec_row(&scaled, choi.n, choi.m)?.map(|z| z.conj());
                operators.push(fix_global_phase(&op));
            }
        }
        if operators.is_empty() {
            operators.push(CMatrix::zeros(choi.n, choi.m));
        }
        Ok(KrausSet {
            n: choi.n,
            m: choi.m,
            operators,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.n
    }

    pub fn output_dim(&self) -> usize {
        self.m
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// The represented map `x ↦ Σ_k s_k† x s_k`.
    pub fn to_map(&self) -> LinearMap {
        let mut transfer = CMatrix::zeros(self.m * self.m, self.n * self.n);
        for op in &self.operators {
            transfer += LinearMap::ad(op).transfer;
        }
        LinearMap {
            n: self.n,
            m: self.m,
            transfer,
        }
    }

    /// Choi matrix `Σ_k C_{Ad_{s_k}}`; PSD by construction.
    pub fn choi(&self) -> ChoiLikeMatrix {
        let mut matrix = CMatrix::zeros(self.n * self.m, self.n * self.m);
        for op in &self.operators {
            matrix += LinearMap::ad(op).choi().matrix;
        }
        ChoiLikeMatrix {
            n: self.n,
            m: self.m,
            matrix,
        }
    }
}

/// Multiplies by a unit phase so the largest-magnitude entry (first in
/// row-major order on ties) becomes real and positive. Deterministic output
/// for extracted certificates and Kraus operators.
pub fn fix_global_phase(a: &CMatrix) -> CMatrix {
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_norm = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let z = a[(i, j)];
            if z.norm() > best_norm {
                best_norm = z.norm();
                best = z;
            }
        }
    }
    if best_norm == 0.0 {
        return a.clone();
    }
    let phase = best.conj() / best_norm;
    a.map(|z| z * phase)
}

/// Same phase convention for vectors.
pub fn fix_global_phase_vec(v: &CVector) -> CVector {
    let mut best = Complex64::new(0.0, 0.0);
    let mut best_norm = 0.0;
    for i in 0..v.len() {
        if v[i].norm() > best_norm {
            best_norm = v[i].norm();
            best = v[i];
        }
    }
    if best_norm == 0.0 {
        return v.clone();
    }
    let phase = best.conj() / best_norm;
    v.map(|z| z * phase)
}

/// Choi matrix of the identity map, `|ω⟩⟨ω|`, as a convenience constructor.
pub fn omega_projector(n: usize) -> ChoiLikeMatrix {
    let w = omega(n);
    ChoiLikeMatrix {
        n,
        m: n,
        matrix: &w * w.adjoint(),
    }
}

/// Rank-one substitute matrix `|s̃⟩⟨s̃| = C_{Ad_s}` built from `s ∈ M_n`.
pub fn tilde_projector(s: &CMatrix) -> Result<ChoiLikeMatrix, ChoiError> {
    if !s.is_square() {
        return Err(ChoiError::NotSquare {
            rows: s.nrows(),
            cols: s.ncols(),
        });
    }
    let t = tilde_vector(s);
    ChoiLikeMatrix::new(s.nrows(), s.nrows(), &t * t.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{random_gaussian, random_kraus_set, test_rng};
    use crate::linalg::{approx_eq, cr, matrix_from_rows, tensor, C_ZERO};

    fn swap_matrix() -> CMatrix {
        LinearMap::transposition(2).choi().matrix.clone()
    }

    #[test]
    fn choi_of_identity_is_omega_projector() {
        let choi = LinearMap::identity(2).choi();
        let expected = omega_projector(2);
        assert_eq!(choi.matrix, expected.matrix);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_eq!(choi.matrix[(i, j)], C_ONE);
        }
        assert_eq!(choi.matrix.iter().filter(|z| z.norm() > 0.0).count(), 4);
    }

    #[test]
    fn choi_of_transposition_is_swap() {
        // Definitional double loop Σ_ij e_ij ⊗ e_ji.
        let mut expected = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                expected += tensor(&matrix_unit(2, i, j), &matrix_unit(2, j, i));
            }
        }
        assert_eq!(LinearMap::transposition(2).choi().matrix, expected);
    }

    #[test]
    fn choi_of_ad_is_tilde_projector() {
        let mut rng = test_rng(23);
        let s = random_gaussian(3, 3, &mut rng);
        let choi = LinearMap::ad(&s).choi();
        let expected = tilde_projector(&s).unwrap();
        assert!(approx_eq(&choi.matrix, &expected.matrix, 1e-12));
    }

    #[test]
    fn map_of_choi_inverts_choi() {
        let omega_proj = omega_projector(2);
        let id = omega_proj.to_map();
        assert!(approx_eq(id.transfer(), LinearMap::identity(2).transfer(), 1e-12));

        let swap = ChoiLikeMatrix::new(2, 2, swap_matrix()).unwrap();
        let transpose = swap.to_map();
        let e12 = matrix_unit(2, 0, 1);
        let image = transpose.apply(&e12).unwrap();
        assert!(approx_eq(&image, &matrix_unit(2, 1, 0), 1e-12));

        let mut rng = test_rng(5);
        let raw = random_gaussian(9, 9, &mut rng);
        let c = ChoiLikeMatrix::new(3, 3, raw).unwrap();
        let back = c.to_map().choi();
        assert!(approx_eq(back.matrix(), c.matrix(), 1e-12));
    }

    #[test]
    fn apply_examples() {
        let e12 = matrix_unit(2, 0, 1);
        let id = LinearMap::identity(2);
        assert_eq!(id.apply(&e12).unwrap(), e12);

        let s = matrix_from_rows(2, 2, &[C_ONE, C_ZERO, C_ZERO, cr(2.0)]).unwrap();
        let image = LinearMap::ad(&s).apply(&CMatrix::identity(2, 2)).unwrap();
        let expected = matrix_from_rows(2, 2, &[C_ONE, C_ZERO, C_ZERO, cr(4.0)]).unwrap();
        assert!(approx_eq(&image, &expected, 1e-12));

        let t = LinearMap::transposition(2);
        assert_eq!(t.apply(&e12).unwrap(), matrix_unit(2, 1, 0));
    }

    #[test]
    fn apply_rejects_wrong_shape() {
        let id = LinearMap::identity(2);
        assert!(matches!(
            id.apply(&CMatrix::zeros(3, 3)),
            Err(ChoiError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let mut rng = test_rng(31);
        let phi = LinearMap::from_transfer(2, 3, random_gaussian(9, 4, &mut rng)).unwrap();
        let composed = phi.compose(&LinearMap::identity(2)).unwrap();
        assert!(approx_eq(composed.transfer(), phi.transfer(), 1e-12));

        // Ad_s ∘ Ad_t = Ad_{ts}: checked on every matrix unit.
        let s = random_gaussian(3, 3, &mut rng);
        let t = random_gaussian(3, 3, &mut rng);
        let lhs = LinearMap::ad(&s).compose(&LinearMap::ad(&t)).unwrap();
        let rhs = LinearMap::ad(&(&t * &s));
        for i in 0..3 {
            for j in 0..3 {
                let e = matrix_unit(3, i, j);
                assert!(approx_eq(&lhs.apply(&e).unwrap(), &rhs.apply(&e).unwrap(), 1e-10));
            }
        }

        let tr = LinearMap::transposition(3);
        let twice = tr.compose(&tr).unwrap();
        assert!(approx_eq(twice.transfer(), LinearMap::identity(3).transfer(), 1e-12));

        assert!(matches!(
            LinearMap::identity(2).compose(&LinearMap::identity(3)),
            Err(ChoiError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let mut rng = test_rng(37);
        let id_star = LinearMap::identity(3).adjoint();
        assert!(approx_eq(id_star.transfer(), LinearMap::identity(3).transfer(), 1e-12));

        // (Ad_s)* = Ad_{sᵗ}, certified through the pairing identity.
        let s = random_gaussian(3, 3, &mut rng);
        let phi = LinearMap::ad(&s);
        let star = phi.adjoint();
        assert!(approx_eq(
            star.transfer(),
            LinearMap::ad(&s.transpose()).transfer(),
            1e-12
        ));
        for _ in 0..5 {
            let x = random_gaussian(3, 3, &mut rng);
            let y = random_gaussian(3, 3, &mut rng);
            let lhs = linalg::pairing(&star.apply(&x).unwrap(), &y).unwrap();
            let rhs = linalg::pairing(&x, &phi.apply(&y).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
        }

        let phi = LinearMap::from_transfer(2, 3, random_gaussian(9, 4, &mut rng)).unwrap();
        let back = phi.adjoint().adjoint();
        assert!(approx_eq(back.transfer(), phi.transfer(), 1e-12));
    }

    #[test]
    fn ad_examples() {
        let id = LinearMap::ad(&CMatrix::identity(2, 2));
        assert!(approx_eq(id.transfer(), LinearMap::identity(2).transfer(), 1e-12));

        // Compression by a projection kills off-range units.
        let p = matrix_from_rows(2, 2, &[C_ONE, C_ZERO, C_ZERO, C_ZERO]).unwrap();
        let image = LinearMap::ad(&p).apply(&matrix_unit(2, 1, 1)).unwrap();
        assert_eq!(image, CMatrix::zeros(2, 2));
    }

    #[test]
    fn tilde_vector_examples() {
        assert_eq!(tilde_vector(&CMatrix::identity(2, 2)), omega(2));
        let e12 = matrix_unit(2, 0, 1);
        let t = tilde_vector(&e12);
        assert_eq!(t[1], C_ONE);
        assert_eq!(t.iter().filter(|z| z.norm() > 0.0).count(), 1);

        let mut rng = test_rng(41);
        let s = random_gaussian(4, 4, &mut rng);
        let tilde = tilde_vector(&s);
        let outer = &tilde * tilde.adjoint();
        assert!(approx_eq(&outer, LinearMap::ad(&s).choi().matrix(), 1e-12));
    }

    #[test]
    fn generalized_choi_examples() {
        let mut rng = test_rng(43);
        // Σ = |ω⟩⟨ω| reduces to the ordinary Choi matrix.
        let phi = LinearMap::from_transfer(2, 3, random_gaussian(9, 4, &mut rng)).unwrap();
        let reduced = omega_projector(2).generalized_choi(&phi).unwrap();
        assert!(approx_eq(reduced.matrix(), phi.choi().matrix(), 1e-12));

        // C^{C_σ}_φ = C_{φ∘σ}.
        let sigma = LinearMap::from_transfer(2, 2, random_gaussian(4, 4, &mut rng)).unwrap();
        let lhs = sigma.choi().generalized_choi(&phi).unwrap();
        let rhs = phi.compose(&sigma).unwrap().choi();
        assert!(approx_eq(lhs.matrix(), rhs.matrix(), 1e-10));

        let swap = ChoiLikeMatrix::new(2, 2, swap_matrix()).unwrap();
        let same = swap.generalized_choi(&LinearMap::identity(2)).unwrap();
        assert!(approx_eq(same.matrix(), &swap_matrix(), 1e-12));

        assert!(matches!(
            omega_projector(3).generalized_choi(&LinearMap::identity(2)),
            Err(ChoiError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn kraus_from_choi_examples() {
        let tol = ToleranceConfig::default();
        let set = KrausSet::from_choi(&omega_projector(2), &tol).unwrap();
        assert_eq!(set.operators().len(), 1);
        assert!(approx_eq(&set.operators()[0], &CMatrix::identity(2, 2), 1e-12));

        // A rank-one Choi from a nonsingular s returns s up to phase; the
        // oracle is Ad-equality on every matrix unit.
        let mut rng = test_rng(47);
        let s = crate::harness::random_nonsingular(3, &mut rng, &tol);
        let choi = LinearMap::ad(&s).choi();
        let set = KrausSet::from_choi(&choi, &tol).unwrap();
        assert_eq!(set.operators().len(), 1);
        let recovered = LinearMap::ad(&set.operators()[0]);
        let original = LinearMap::ad(&s);
        for i in 0..3 {
            for j in 0..3 {
                let e = matrix_unit(3, i, j);
                assert!(approx_eq(
                    &recovered.apply(&e).unwrap(),
                    &original.apply(&e).unwrap(),
                    1e-9
                ));
            }
        }

        // Choi = I_4 (n = m = 2): four operators, verified via round trip.
        let c = ChoiLikeMatrix::new(2, 2, CMatrix::identity(4, 4)).unwrap();
        let set = KrausSet::from_choi(&c, &tol).unwrap();
        assert_eq!(set.operators().len(), 4);
        assert!(approx_eq(set.choi().matrix(), c.matrix(), 1e-10));
    }

    #[test]
    fn kraus_from_choi_rejects_non_psd() {
        let tol = ToleranceConfig::default();
        let swap = ChoiLikeMatrix::new(2, 2, swap_matrix()).unwrap();
        assert!(matches!(
            KrausSet::from_choi(&swap, &tol),
            Err(ChoiError::NotPsd { .. })
        ));
    }

    #[test]
    fn kraus_zero_choi_is_zero_operator() {
        let tol = ToleranceConfig::default();
        let zero = ChoiLikeMatrix::new(2, 2, CMatrix::zeros(4, 4)).unwrap();
        let set = KrausSet::from_choi(&zero, &tol).unwrap();
        assert_eq!(set.operators().len(), 1);
        assert_eq!(set.operators()[0], CMatrix::zeros(2, 2));
    }

    #[test]
    fn choi_from_kraus_examples() {
        let tol = ToleranceConfig::default();
        let single = KrausSet::new(2, 2, vec![CMatrix::identity(2, 2)]).unwrap();
        assert!(approx_eq(single.choi().matrix(), omega_projector(2).matrix(), 1e-12));

        // Definitional oracle: Σ_k |s̃_k⟩⟨s̃_k|.
        let mut rng = test_rng(53);
        let ops: Vec<CMatrix> = (0..2).map(|_| random_gaussian(2, 3, &mut rng)).collect();
        let set = KrausSet::new(2, 3, ops.clone()).unwrap();
        let mut expected = CMatrix::zeros(6, 6);
        for op in &ops {
            let t = tilde_vector(op);
            expected += &t * t.adjoint();
        }
        assert!(approx_eq(set.choi().matrix(), &expected, 1e-12));

        // Round trip on a random PSD Choi matrix.
        let g = random_gaussian(6, 6, &mut rng);
        let psd = &g * g.adjoint();
        let c = ChoiLikeMatrix::new(2, 3, psd).unwrap();
        let back = KrausSet::from_choi(&c, &tol).unwrap().choi();
        assert!(approx_eq(back.matrix(), c.matrix(), 1e-10));
    }

    #[test]
    fn cp_verdict_examples() {
        let tol = ToleranceConfig::default();
        for n in 2..=3 {
            let v = LinearMap::identity(n).cp_verdict(&tol);
            assert!(v.is_cp);
            assert!(v.min_choi_eigenvalue.abs() <= 1e-12);
            let kraus = v.kraus.unwrap();
            assert!(approx_eq(
                kraus.to_map().transfer(),
                LinearMap::identity(n).transfer(),
                1e-10
            ));
        }

        let v = LinearMap::transposition(2).cp_verdict(&tol);
        assert!(!v.is_cp);
        assert!((v.min_choi_eigenvalue + 1.0).abs() < 1e-12);
        let w = v.negative_witness.unwrap();
        let quad = (w.adjoint() * swap_matrix() * &w)[(0, 0)];
        assert!(quad.re < -0.5);

        let mut rng = test_rng(59);
        let set = random_kraus_set(3, 2, 3, &mut rng);
        let v = set.to_map().cp_verdict(&tol);
        assert!(v.is_cp);
    }

    #[test]
    fn transfer_shape_is_validated() {
        assert!(matches!(
            LinearMap::from_transfer(2, 2, CMatrix::zeros(3, 4)),
            Err(ChoiError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            ChoiLikeMatrix::new(2, 2, CMatrix::zeros(3, 3)),
            Err(ChoiError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            ChoiLikeMatrix::square(CMatrix::zeros(5, 5)),
            Err(ChoiError::NotPerfectSquare { .. })
        ));
        assert!(matches!(
            KrausSet::new(2, 2, vec![]),
            Err(ChoiError::EmptyKrausSet)
        ));
    }
}
