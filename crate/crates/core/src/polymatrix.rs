//! Linear algebra for matrices of polynomials in τ over `K(Π)`:
//! minors, generic rank, rank constancy, kernel vectors and image
//! representations.
//!
//! Elimination runs over `K[Π][τ]` after clearing Π-denominators row by row;
//! row scaling by nonzero constants changes neither the rank nor the monic
//! GCD of any family of minors.

use num_traits::{One, Zero};

use crate::error::MatrixError;
use crate::gcd::{clear_denominators, lift, upoly_gcd};
use crate::linalg::{combinations, det_bareiss, echelon};
use crate::matrix::Matrix;
use crate::ratfunc::RatFunc;
use crate::scalar::Field;
use crate::smith::{smith_form, SmithDecomposition};
use crate::upoly::Poly;

/// Limits for minor enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorLimit {
    pub max_order: usize,
}

impl Default for MinorLimit {
    fn default() -> Self {
        MinorLimit { max_order: 8 }
    }
}

impl MinorLimit {
    fn check<T: Clone>(&self, m: &Matrix<T>) -> Result<(), MatrixError> {
        self.check_order(m.rows().min(m.cols()))
    }

    pub(crate) fn check_order(&self, order: usize) -> Result<(), MatrixError> {
        if order > self.max_order {
            Err(MatrixError::ResourceLimit {
                order,
                limit: self.max_order,
            })
        } else {
            Ok(())
        }
    }
}

type KPoly<F> = Poly<RatFunc<F>>;

/// Rows multiplied through by their Π-denominators.
struct Cleared<F: Field> {
    m: Matrix<Poly<Poly<F>>>,
    row_scale: Vec<Poly<F>>,
}

fn clear_rows<F: Field>(m: &Matrix<KPoly<F>>) -> Cleared<F> {
    let mut rows = Vec::with_capacity(m.rows());
    let mut row_scale = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let l = m
            .row(i)
            .iter()
            .flat_map(|p| p.coeffs().iter())
            .filter(|c| !c.is_polynomial())
            .fold(Poly::one(), |acc: Poly<F>, c| {
                let g = acc.gcd_euclid(c.denom());
                (acc.clone() * c.denom().clone()).div_rem(&g).0.monic()
            });
        let scale = RatFunc::from_poly(l.clone());
        let row: Vec<Poly<Poly<F>>> = m.row(i).iter().map(|p| clear_denominators(&p.scale(&scale))).collect();
        rows.push(row);
        row_scale.push(l);
    }
    Cleared {
        m: Matrix::from_rows(m.cols(), rows),
        row_scale,
    }
}

/// All `k × k` minors in row-major subset order.
pub fn minors<F: Field>(m: &Matrix<KPoly<F>>, k: usize, limit: MinorLimit) -> Result<Vec<KPoly<F>>, MatrixError> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(MatrixError::OrderOutOfRange {
            k,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    limit.check(m)?;
    let c = clear_rows(m);
    let mut out = Vec::new();
    for rs in combinations(m.rows(), k) {
        let denom = rs.iter().fold(Poly::one(), |acc, &i| acc * c.row_scale[i].clone());
        let unscale = RatFunc::new(Poly::one(), denom);
        for cs in combinations(m.cols(), k) {
            let d = det_bareiss(&c.m.submatrix(&rs, &cs));
            out.push(lift(&d).scale(&unscale));
        }
    }
    Ok(out)
}

/// Rank over `K(Π)(τ)`, i.e. the rank of `M(t)` for all but finitely many `t`.
pub fn generic_rank<F: Field>(m: &Matrix<KPoly<F>>) -> usize {
    echelon(&clear_rows(m).m).rank
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankConstancy<F: Field> {
    pub rank: usize,
    /// Monic GCD of the nonzero `rank × rank` minors (1 when `rank == 0`).
    pub gcd: KPoly<F>,
    /// Rank of `M(t)` equals `rank` for every complex `t`.
    pub constant: bool,
}

pub fn rank_constancy<F: Field>(m: &Matrix<KPoly<F>>, limit: MinorLimit) -> Result<RankConstancy<F>, MatrixError> {
    let c = clear_rows(m);
    let rank = echelon(&c.m).rank;
    if rank == 0 {
        return Ok(RankConstancy {
            rank,
            gcd: Poly::one(),
            constant: true,
        });
    }
    limit.check(m)?;
    let mut ms = Vec::new();
    for rs in combinations(m.rows(), rank) {
        for cs in combinations(m.cols(), rank) {
            let d = det_bareiss(&c.m.submatrix(&rs, &cs));
            if !d.is_zero() {
                ms.push(lift(&d));
            }
        }
    }
    let gcd = upoly_gcd(&ms)?;
    let constant = gcd.degree() == Some(0);
    Ok(RankConstancy { rank, gcd, constant })
}

/// Nonzero polynomial kernel vector, or `None` when `M` has full column rank.
///
/// The vector is content-reduced and its first nonzero entry is monic.
pub fn nullspace_vector<F: Field>(m: &Matrix<KPoly<F>>) -> Option<Vec<KPoly<F>>> {
    let n = m.cols();
    let c = clear_rows(m);
    let e = echelon(&c.m);
    if e.rank == n {
        return None;
    }
    let free = (0..n).find(|j| !e.pivot_cols.contains(j)).unwrap();
    let block = c.m.submatrix(&e.pivot_rows, &e.pivot_cols);
    let mut k: Vec<Poly<Poly<F>>> = vec![Poly::zero(); n];
    k[free] = det_bareiss(&block);
    for (slot, &col) in e.pivot_cols.iter().enumerate() {
        let mut replaced = block.clone();
        for (i, &row) in e.pivot_rows.iter().enumerate() {
            replaced[(i, slot)] = c.m[(row, free)].clone();
        }
        k[col] = -det_bareiss(&replaced);
    }
    let k: Vec<KPoly<F>> = k.iter().map(lift).collect();
    let g = upoly_gcd(&k).expect("kernel vector has a nonzero entry");
    let k: Vec<KPoly<F>> = k.iter().map(|p| p.div_rem(&g).0).collect();
    let lc = k.iter().find(|p| !p.is_zero()).and_then(|p| p.lead()).unwrap().inv();
    Some(k.iter().map(|p| p.scale(&lc)).collect())
}

/// `M·N = 0` with the columns of `N` generating the polynomial kernel, plus a
/// polynomial left inverse `L` (`L·N = I`) used to recover latent variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRepresentation<F: Field> {
    pub image: Matrix<KPoly<F>>,
    pub left_inverse: Matrix<KPoly<F>>,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImageOutcome<F: Field> {
    Image(ImageRepresentation<F>),
    NotRankConstant,
}

/// Image representation from the last `n − r` columns of the Smith column
/// transform, available exactly when every nonzero invariant factor is a unit.
pub fn image_representation<F: Field>(m: &Matrix<KPoly<F>>) -> ImageOutcome<F> {
    let SmithDecomposition { d, v, v_inv, .. } = smith_form(m);
    let diag = d.rows().min(d.cols());
    let rank = (0..diag).take_while(|&i| !d[(i, i)].is_zero()).count();
    if (0..rank).any(|i| d[(i, i)].degree() != Some(0)) {
        return ImageOutcome::NotRankConstant;
    }
    let tail: Vec<usize> = (rank..m.cols()).collect();
    ImageOutcome::Image(ImageRepresentation {
        image: v.select_columns(&tail),
        left_inverse: v_inv.select_rows(&tail),
        rank,
    })
}
