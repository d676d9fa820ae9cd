//! Fraction-free elimination over integral domains with exact division.

use crate::matrix::Matrix;
use crate::scalar::{ExactDiv, Field};

/// Determinant by Bareiss elimination. Every division is exact.
pub fn det_bareiss<R: ExactDiv>(m: &Matrix<R>) -> R {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return R::one();
    }
    let mut a = m.clone();
    let mut prev = R::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                None => return R::zero(),
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
            }
        }
        let pivot = a[(k, k)].clone();
        for i in k + 1..n {
            let lead = a[(i, k)].clone();
            for j in k + 1..n {
                let num = a[(i, j)].clone() * pivot.clone() - lead.clone() * a[(k, j)].clone();
                a[(i, j)] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[(i, k)] = R::zero();
        }
        prev = pivot;
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Fraction-free row echelon reduction.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rank: usize,
    /// Original row indices holding the pivots, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Pivot columns, increasing.
    pub pivot_cols: Vec<usize>,
}

/// Rank (over the fraction field) with the pivot rows and columns of a
/// nonsingular `rank × rank` submatrix.
pub fn echelon<R: ExactDiv>(m: &Matrix<R>) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut prev = R::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        perm.swap(r, p);
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let num = a[(i, j)].clone() * pivot.clone() - lead.clone() * a[(r, j)].clone();
                a[(i, j)] = num.div_exact(&prev).expect("fraction-free elimination is exact");
            }
            a[(i, c)] = R::zero();
        }
        prev = pivot;
        pivot_cols.push(c);
        r += 1;
    }
    Echelon {
        rank: r,
        pivot_rows: perm[..r].to_vec(),
        pivot_cols,
    }
}

pub fn rank_bareiss<R: ExactDiv>(m: &Matrix<R>) -> usize {
    echelon(m).rank
}

/// Inverse by Gauss-Jordan elimination over a field; `None` if singular.
pub fn invert<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<F>::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a[(i, c)].is_zero())?;
        a.swap_rows(c, p);
        inv.swap_rows(c, p);
        let s = a[(c, c)].inv();
        a.scale_row(c, &s);
        inv.scale_row(c, &s);
        for i in 0..n {
            if i != c && !a[(i, c)].is_zero() {
                let f = -a[(i, c)].clone();
                a.add_row_multiple(i, c, &f);
                inv.add_row_multiple(i, c, &f);
            }
        }
    }
    Some(inv)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All `k × k` minors, row subsets outermost, each subset in lexicographic order.
pub fn minors_of<R: ExactDiv>(m: &Matrix<R>, k: usize) -> Vec<R> {
    let row_sets = combinations(m.rows(), k);
    let col_sets = combinations(m.cols(), k);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            out.push(det_bareiss(&m.submatrix(rs, cs)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::upoly::Poly;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn q(x: i64) -> BigRational {
        rational(x, 1)
    }

    /// Laplace expansion along the first row.
    fn det_cofactor(m: &Matrix<BigRational>) -> BigRational {
        let n = m.rows();
        if n == 0 {
            return q(1);
        }
        (0..n).fold(q(0), |acc, j| {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let term = m[(0, j)].clone() * det_cofactor(&m.submatrix(&rows, &cols));
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let vals = [[2, -1, 0, 3], [1, 0, 4, -2], [0, 5, -3, 1], [7, 2, 2, 0]];
        let m = Matrix::from_fn(4, 4, |i, j| q(vals[i][j]));
        assert_eq!(det_bareiss(&m), det_cofactor(&m));
        let singular = Matrix::from_fn(3, 3, |i, j| q((i * 3 + j) as i64));
        assert_eq!(det_bareiss(&singular), q(0));
    }

    #[test]
    fn zero_pivot_needs_swap() {
        let m = Matrix::new(2, 2, vec![q(0), q(1), q(1), q(0)]);
        assert_eq!(det_bareiss(&m), q(-1));
    }

    #[test]
    fn echelon_pivots_form_nonsingular_block() {
        let vals = [[0, 0, 1, 2], [0, 0, 2, 4], [1, 1, 0, 0]];
        let m = Matrix::from_fn(3, 4, |i, j| q(vals[i][j]));
        let e = echelon(&m);
        assert_eq!(e.rank, 2);
        let block = m.submatrix(&e.pivot_rows, &e.pivot_cols);
        assert!(!det_bareiss(&block).is_zero());
    }

    #[test]
    fn gauss_jordan_inverse() {
        let m = Matrix::new(2, 2, vec![q(2), q(1), q(1), q(1)]);
        let inv = invert(&m).unwrap();
        assert_eq!(inv, Matrix::new(2, 2, vec![q(1), q(-1), q(-1), q(2)]));
        assert!(invert(&Matrix::new(2, 2, vec![q(1), q(2), q(2), q(4)])).is_none());
    }

    #[test]
    fn polynomial_determinant() {
        // [[τ, 1], [τ², τ]] has determinant 0.
        let t = Poly::<BigRational>::x();
        let m = Matrix::new(2, 2, vec![t.clone(), Poly::one(), t.clone() * t.clone(), t]);
        assert!(det_bareiss(&m).is_zero());
        assert_eq!(rank_bareiss(&m), 1);
    }
}
