//! Random instance generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spatial_behaviour::gcd::upoly_gcd_euclid;
use spatial_behaviour::linalg::combinations;
use spatial_behaviour::mpoly::{MPoly, Monomial, Var};
use spatial_behaviour::scalar::gaussian_int;
use spatial_behaviour::{Matrix, PiScalar, PolyExpr, PolyMatrix, UPoly, UPolyMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// `a + b·Π` with small Gaussian integers `a`, `b`; Π shows up in a quarter of draws.
pub fn pi_scalar(rng: &mut impl Rng) -> PiScalar {
    let a = gaussian_int(
        rng.gen_range(-3..=3),
        if rng.gen_bool(0.3) { rng.gen_range(-2..=2) } else { 0 },
    );
    let c = PiScalar::constant(a);
    if rng.gen_bool(0.25) {
        c + PiScalar::constant(gaussian_int(rng.gen_range(-2..=2), 0)) * PiScalar::symbol()
    } else {
        c
    }
}

pub fn upoly(rng: &mut impl Rng, max_deg: usize) -> UPoly {
    let deg = rng.gen_range(0..=max_deg);
    UPoly::new((0..=deg).map(|_| pi_scalar(rng)).collect())
}

fn sparse_upoly(rng: &mut impl Rng, max_deg: usize) -> UPoly {
    if rng.gen_bool(0.2) {
        UPoly::zero()
    } else {
        upoly(rng, max_deg)
    }
}

/// Random `rows × cols` matrix; about a third are products `A·B` through a
/// narrower inner dimension, so rank deficiency is common.
pub fn upoly_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max_deg: usize) -> UPolyMatrix {
    if rng.gen_bool(0.35) && rows.min(cols) > 1 {
        let inner = rng.gen_range(1..rows.min(cols));
        let da = max_deg / 2;
        let a = Matrix::new(rows, inner, (0..rows * inner).map(|_| upoly(rng, da)).collect());
        let b = Matrix::new(
            inner,
            cols,
            (0..inner * cols).map(|_| upoly(rng, max_deg - da)).collect(),
        );
        a.matmul(&b)
    } else {
        Matrix::new(
            rows,
            cols,
            (0..rows * cols).map(|_| sparse_upoly(rng, max_deg)).collect(),
        )
    }
}

pub fn random_shape_matrix(rng: &mut impl Rng, max_rows: usize, max_cols: usize, max_deg: usize) -> UPolyMatrix {
    let r = rng.gen_range(1..=max_rows);
    let c = rng.gen_range(1..=max_cols);
    upoly_matrix(rng, r, c, max_deg)
}

/// Random polynomial in ξ1..ξd, τ with small Gaussian integer coefficients.
pub fn poly_expr(rng: &mut impl Rng, d: usize, max_deg: u32, terms: usize) -> PolyExpr {
    let mut vars: Vec<Var> = (1..=d).map(Var::Xi).collect();
    vars.push(Var::Tau);
    let n = rng.gen_range(0..=terms);
    MPoly::from_terms((0..n).map(|_| {
        let mut mono = Monomial::one();
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            let v = vars[rng.gen_range(0..vars.len())];
            mono = mono.mul(&Monomial::var(v, 1));
        }
        let c = gaussian_int(
            rng.gen_range(-3..=3),
            if rng.gen_bool(0.2) { rng.gen_range(-1..=1) } else { 0 },
        );
        (mono, c)
    }))
}

/// Random τ-only polynomial matrix (no spatial variables).
pub fn tau_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max_deg: u32) -> PolyMatrix {
    let base = upoly_matrix(rng, rows, cols, max_deg as usize);
    base.map(|p| {
        MPoly::from_terms(p.coeffs().iter().enumerate().flat_map(|(k, c)| {
            assert!(c.is_polynomial());
            let num = c.numer();
            num.coeffs()
                .iter()
                .enumerate()
                .map(move |(j, g)| {
                    let m = Monomial::var(Var::Tau, k as u32).mul(&Monomial::var(Var::Pi, j as u32));
                    (m, g.clone())
                })
                .collect::<Vec<_>>()
        }))
    })
}

/// Determinant by cofactor expansion, kept independent of fraction-free elimination.
pub fn det_laplace(m: &UPolyMatrix) -> UPoly {
    let n = m.rows();
    if n == 0 {
        return UPoly::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc = UPoly::zero();
    let rest: Vec<usize> = (1..n).collect();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = &m[(0, j)] * &det_laplace(&m.submatrix(&rest, &cols));
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

pub fn laplace_minors(m: &UPolyMatrix, k: usize) -> Vec<UPoly> {
    let mut out = Vec::new();
    for rs in combinations(m.rows(), k) {
        for cs in combinations(m.cols(), k) {
            out.push(det_laplace(&m.submatrix(&rs, &cs)));
        }
    }
    out
}

/// Largest `k` with a nonzero `k × k` minor.
pub fn brute_rank(m: &UPolyMatrix) -> usize {
    (1..=m.rows().min(m.cols()))
        .rev()
        .find(|&k| laplace_minors(m, k).iter().any(|p| !p.is_zero()))
        .unwrap_or(0)
}

/// Invariant factors as quotients of successive minor GCDs `g_k / g_{k-1}`.
pub fn minor_gcd_quotients(m: &UPolyMatrix) -> Vec<UPoly> {
    let r = brute_rank(m);
    let mut prev = UPoly::one();
    let mut out = Vec::new();
    for k in 1..=r {
        let nz: Vec<UPoly> = laplace_minors(m, k).into_iter().filter(|p| !p.is_zero()).collect();
        let g = upoly_gcd_euclid(&nz).unwrap();
        let (q, rem) = g.div_rem(&prev);
        assert!(rem.is_zero(), "minor GCDs must form a divisibility chain");
        out.push(q.monic());
        prev = g;
    }
    out
}
