//! Numerical toolkit for Choi matrices of linear maps between matrix
//! algebras.
//!
//! The crate represents a linear map `φ: M_n → M_m` by its transfer matrix on
//! row-vectorized inputs and converts losslessly between the transfer, Choi,
//! and Kraus forms. On top of those conversions it decides, with certificates
//! and counterexample witnesses, when a substitute matrix `Σ ∈ M_n ⊗ M_n` (or
//! a substitute ordered basis `B` of `M_n`) preserves the correspondence
//! "`φ` completely positive ⇔ Choi-type matrix positive".
//!
//! Global conventions, pinned once and validated end to end by the
//! `C_{Ad_s} = |s̃⟩⟨s̃|` identity:
//!
//! * vectorization is row-major: `vec(x)[i·cols + j] = x[i, j]`;
//! * bipartite indices on `C^n ⊗ C^m` are `(i, k) ↦ i·m + k`;
//! * `Ad_s(x) = s† x s`, so Kraus sums read `φ(x) = Σ_k s_k† x s_k`;
//! * `|s̃⟩` carries the entrywise conjugate of `vec(s)`, i.e.
//!   `⟨s̃| = Σ_{ij} s_ij ⟨i|⟨j|`.

pub mod basis;
pub mod correspondence;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod maps;

pub use error::ChoiError;
pub use linalg::{CMatrix, CVector, SchmidtDecomposition, ToleranceConfig};
pub use maps::{ChoiLikeMatrix, CpVerdict, KrausSet, LinearMap};
