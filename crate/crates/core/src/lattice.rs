//! The frequency lattice `A⁻¹Zᵈ` of spatially periodic distributions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::AnalysisError;
use crate::linalg::invert;
use crate::matrix::Matrix;
use crate::scalar::{rational_to_real, Real};

/// Rational period matrix `A` whose rows are the period vectors `a_k`, and
/// its exact inverse. Modes are `v = A⁻¹·n` for integer vectors `n`, so
/// `a_k · v = n_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodLattice {
    a: Matrix<BigRational>,
    a_inv: Matrix<BigRational>,
}

impl PeriodLattice {
    pub fn new(a: Matrix<BigRational>) -> Result<Self, AnalysisError> {
        if a.rows() != a.cols() {
            return Err(AnalysisError::PeriodShape {
                expected: a.rows(),
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let a_inv = invert(&a).ok_or(AnalysisError::SingularPeriod)?;
        Ok(PeriodLattice { a, a_inv })
    }

    /// Unit periods in every coordinate direction.
    pub fn identity(dim: usize) -> Self {
        PeriodLattice {
            a: Matrix::identity(dim),
            a_inv: Matrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn period_matrix(&self) -> &Matrix<BigRational> {
        &self.a
    }

    pub fn inverse(&self) -> &Matrix<BigRational> {
        &self.a_inv
    }

    /// `v = A⁻¹·n`.
    pub fn mode(&self, n_vec: &[i64]) -> Result<Vec<BigRational>, AnalysisError> {
        let d = self.dim();
        if n_vec.len() != d {
            return Err(AnalysisError::ModeDimension {
                expected: d,
                found: n_vec.len(),
            });
        }
        Ok((0..d)
            .map(|i| {
                (0..d).fold(BigRational::zero(), |acc, j| {
                    acc + self.a_inv[(i, j)].clone() * BigRational::from_integer(BigInt::from(n_vec[j]))
                })
            })
            .collect())
    }

    /// Period vectors `a_1..a_d` (rows of `A`) in floating point.
    pub fn period_vectors<T: Real>(&self) -> Vec<Vec<T>> {
        (0..self.dim())
            .map(|i| self.a.row(i).iter().map(rational_to_real).collect())
            .collect()
    }
}

/// Integer vectors with `‖n‖∞ ≤ radius`, shell by shell (`‖n‖∞ = 0, 1, ...`)
/// and lexicographically inside each shell.
pub fn window_modes(dim: usize, radius: u32) -> Vec<Vec<i64>> {
    let r = radius as i64;
    let mut out = Vec::new();
    for shell in 0..=r {
        let mut cur = vec![-shell; dim];
        loop {
            if cur.iter().map(|x| x.abs()).max().unwrap_or(0) == shell {
                out.push(cur.clone());
            }
            // odometer increment, last coordinate fastest
            let mut k = dim;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if cur[k] < shell {
                    cur[k] += 1;
                    for x in cur.iter_mut().skip(k + 1) {
                        *x = -shell;
                    }
                    break;
                }
                if k == 0 {
                    k = usize::MAX;
                    break;
                }
            }
            if k == usize::MAX || dim == 0 {
                break;
            }
        }
    }
    out
}
