//! Dense eigensolver oracle, backed by faer.
//!
//! Every returned eigenpair is checked: ‖Mv − λv‖₂ ≤ 1e−8·‖M‖₂.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, ComplexMatrix};
use crate::spectrum::{Provenance, Spectrum, CLUSTER_TOL};

/// Largest matrix dimension accepted by dense paths.
pub const MAX_DENSE_DIM: usize = 4096;

const RESIDUAL_TOL: f64 = 1e-8;

pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// Column `j` is the unit eigenvector for `values[j]`.
    pub vectors: ComplexMatrix,
}

pub fn check_dense_dim(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        Err(Error::TooLarge { dim, cap: MAX_DENSE_DIM })
    } else {
        Ok(())
    }
}

/// Dense kernels run sequentially so results are bit-for-bit reproducible
/// regardless of thread count; callers parallelize across problems.
fn sequential_kernels() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

fn check_input(m: &ComplexMatrix) -> Result<()> {
    sequential_kernels();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
    }
    check_dense_dim(m.rows())?;
    if !m.is_finite() {
        return Err(Error::EigenSolver("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Eigenvalues and eigenvectors. Hermitian inputs go through the
/// self-adjoint solver so their eigenvalues come out exactly real.
pub fn eig_with_vectors(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_input(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let fm = m.to_faer();
    let scale = m.max_abs().max(1.0);
    let (values, vectors) = if m.is_hermitian(1e-14 * scale) {
        let e = fm
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
        let s = e.S().column_vector();
        let values: Vec<Complex64> = (0..n).map(|i| Complex64::new(s[i].re, 0.0)).collect();
        let u = e.U();
        (values, ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]))
    } else {
        let e = fm.eigen().map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
        let s = e.S().column_vector();
        let values: Vec<Complex64> = (0..n).map(|i| s[i]).collect();
        let u = e.U();
        (values, ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]))
    };
    let norm = spectral_norm(m)?;
    for (j, &lambda) in values.iter().enumerate() {
        let v = vectors.column(j);
        let mv = m.mul_vec(&v);
        let residual = vec_norm(&mv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
        let vn = vec_norm(&v);
        if !(residual <= RESIDUAL_TOL * norm.max(f64::MIN_POSITIVE) * vn.max(1.0)) {
            return Err(Error::EigenSolver(format!(
                "residual {residual:e} exceeds bound for eigenvalue {lambda} (norm {norm:e})"
            )));
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    Ok(eig_with_vectors(m)?.values)
}

/// Clustered spectrum with algebraic multiplicities.
pub fn eig(m: &ComplexMatrix) -> Result<Spectrum> {
    Ok(Spectrum::from_values(&eigenvalues(m)?, CLUSTER_TOL, Provenance::Numeric))
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_dense_dim(m.rows().max(m.cols()))?;
    sequential_kernels();
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(vec![]);
    }
    let sv = m.to_faer().singular_values().map_err(|e| Error::EigenSolver(format!("{e:?}")))?;
    Ok(sv)
}

pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.into_iter().fold(0.0, f64::max))
}

/// Numerical rank: singular values above `rel_tol · σ_max`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> Result<usize> {
    let sv = singular_values(m)?;
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > rel_tol * max).count())
}
