//! Smith normal form of a matrix over `E[τ]` for a field `E`.

use num_traits::Zero;

use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::upoly::Poly;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal with monic
/// invariant factors `d1 | d2 | ...` followed by zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithDecomposition<E: Field> {
    pub u: Matrix<Poly<E>>,
    pub d: Matrix<Poly<E>>,
    pub v: Matrix<Poly<E>>,
    pub u_inv: Matrix<Poly<E>>,
    pub v_inv: Matrix<Poly<E>>,
}

impl<E: Field> SmithDecomposition<E> {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<Poly<E>> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|p| !p.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct State<E: Field> {
    d: Matrix<Poly<E>>,
    u: Matrix<Poly<E>>,
    u_inv: Matrix<Poly<E>>,
    v: Matrix<Poly<E>>,
    v_inv: Matrix<Poly<E>>,
}

impl<E: Field> State<E> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// `row[dst] += q·row[src]`
    fn row_op(&mut self, dst: usize, src: usize, q: &Poly<E>) {
        self.d.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        self.u_inv.add_col_multiple(src, dst, &-q.clone());
    }

    /// `col[dst] += q·col[src]`
    fn col_op(&mut self, dst: usize, src: usize, q: &Poly<E>) {
        self.d.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q.clone());
    }

    /// `row[t] /= c` for a unit `c`.
    fn unscale_row(&mut self, t: usize, c: E) {
        let inv = Poly::constant(c.inv());
        self.d.scale_row(t, &inv);
        self.u.scale_row(t, &inv);
        self.u_inv.scale_col(t, &Poly::constant(c));
    }

    /// Minimum-degree nonzero entry of the trailing block; ties go to the
    /// lowest (row, col).
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                if let Some(deg) = self.d[(i, j)].degree() {
                    if best.is_none_or(|(b, _, _)| deg < b) {
                        best = Some((deg, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clear row and column `t` by division; `false` if a nonzero remainder
    /// was left behind.
    fn eliminate(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.d.rows() {
            if self.d[(i, t)].is_zero() {
                continue;
            }
            let (q, r) = self.d[(i, t)].div_rem(&self.d[(t, t)]);
            self.row_op(i, t, &-q);
            clean &= r.is_zero();
        }
        for j in t + 1..self.d.cols() {
            if self.d[(t, j)].is_zero() {
                continue;
            }
            let (q, r) = self.d[(t, j)].div_rem(&self.d[(t, t)]);
            self.col_op(j, t, &-q);
            clean &= r.is_zero();
        }
        clean
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.d[(t, t)];
        for i in t + 1..self.d.rows() {
            for j in t + 1..self.d.cols() {
                let e = &self.d[(i, j)];
                if !e.is_zero() && !e.div_rem(p).1.is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }
}

pub fn smith_form<E: Field>(m: &Matrix<Poly<E>>) -> SmithDecomposition<E> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = State {
        d: m.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
        v_inv: Matrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let Some((i, j)) = s.pivot(t) else {
                return finish(s);
            };
            s.swap_rows(t, i);
            s.swap_cols(t, j);
            // a monic pivot keeps the quotients' coefficients small
            let lc = s.d[(t, t)].lead().unwrap().clone();
            if !lc.is_one() {
                s.unscale_row(t, lc);
            }
            if !s.eliminate(t) {
                continue;
            }
            match s.non_divisible_row(t) {
                Some(i) => s.row_op(t, i, &Poly::constant(E::one())),
                None => break,
            }
        }
    }
    finish(s)
}

fn finish<E: Field>(s: State<E>) -> SmithDecomposition<E> {
    SmithDecomposition {
        u: s.u,
        d: s.d,
        v: s.v,
        u_inv: s.u_inv,
        v_inv: s.v_inv,
    }
}
