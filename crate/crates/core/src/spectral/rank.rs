//! Floating-point rank of `M(2πi·v, t)` by singular values, as a cross-check
//! of the exact generic rank.

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;

use crate::error::AnalysisError;
use crate::lattice::PeriodLattice;
use crate::matrix::Matrix;
use crate::scalar::{rational_to_real, Embed, Real};
use crate::{PolyMatrix, UPolyMatrix};

/// Singular values below this fraction of the largest count as zero.
pub const SVD_RANK_TOLERANCE: f64 = 1e-8;

/// Number of singular values above `rel_tol · σ_max`.
pub fn numeric_rank<T: Real + RealField>(m: &Matrix<Complex<T>>, rel_tol: T) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let dm = DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]);
    let sv = dm.singular_values();
    let max = sv.iter().copied().fold(T::zero(), |a, b| if b > a { b } else { a });
    if max <= T::zero() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Ranks of `M(2πi·v, t)` at each sample `t`, evaluating `M` in double
/// precision with π numeric.
pub fn sample_rank(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    t_samples: &[Complex<f64>],
) -> Result<Vec<usize>, AnalysisError> {
    sample_rank_with(m, lattice, n_vec, t_samples, SVD_RANK_TOLERANCE)
}

pub fn sample_rank_with<T: Real + RealField>(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    t_samples: &[Complex<T>],
    rel_tol: T,
) -> Result<Vec<usize>, AnalysisError> {
    let v = lattice.mode(n_vec)?;
    if m.iter().any(|p| p.max_xi() > v.len()) {
        return Err(AnalysisError::Algebra(crate::AlgebraError::DimensionMismatch {
            expected: v.len(),
            found: m.iter().map(|p| p.max_xi()).max().unwrap_or(0),
        }));
    }
    let two_pi = T::PI() + T::PI();
    let xi: Vec<Complex<T>> = v
        .iter()
        .map(|vk| Complex::new(T::zero(), two_pi * rational_to_real::<T>(vk)))
        .collect();
    Ok(t_samples
        .iter()
        .map(|&t| numeric_rank(&m.map(|p| p.eval(&xi, t)), rel_tol))
        .collect())
}

/// Ranks of an exact mode matrix evaluated at each sample.
pub fn sample_rank_mode<T: Real + RealField>(mm: &UPolyMatrix, t_samples: &[Complex<T>], rel_tol: T) -> Vec<usize> {
    let numeric = mm.map(|p| p.map(|c| c.embed::<T>()));
    t_samples
        .iter()
        .map(|t| numeric_rank(&numeric.map(|p| p.eval(t)), rel_tol))
        .collect()
}
