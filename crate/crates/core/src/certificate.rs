//! Symbolic sufficient conditions that settle a property at every lattice
//! mode at once, computed on `M(ξ, τ)` before any mode is substituted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::analyzer::mode_matrix;
use crate::error::AnalysisError;
use crate::lattice::PeriodLattice;
use crate::linalg::{combinations, det_bareiss, echelon};
use crate::matrix::Matrix;
use crate::mpoly::Var;
use crate::polymatrix::{generic_rank, rank_constancy, MinorLimit};
use crate::scalar::{gaussian, GaussianRational, Ring};
use crate::upoly::Poly;
use crate::{PolyExpr, PolyMatrix, UPolyMatrix};

/// Strength of the symbolic certificates tried before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolicLevel {
    /// Window scan only.
    Off,
    /// Constant-coefficient tests.
    Basic,
    /// Basic, plus exact elimination of the single spatial variable when `d = 1`.
    D1,
}

impl FromStr for SymbolicLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(SymbolicLevel::Off),
            "basic" => Ok(SymbolicLevel::Basic),
            "d1" => Ok(SymbolicLevel::D1),
            other => Err(format!("unknown symbolic level `{other}` (expected off, basic or d1)")),
        }
    }
}

impl fmt::Display for SymbolicLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolicLevel::Off => "off",
            SymbolicLevel::Basic => "basic",
            SymbolicLevel::D1 => "d1",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// The property holds at every mode outside `exceptions`; those modes
    /// (in shell order) still have to be checked one by one.
    Holds {
        reason: String,
        exceptions: Vec<Vec<i64>>,
    },
    Inconclusive {
        reason: String,
    },
}

fn inconclusive(reason: impl Into<String>) -> Certificate {
    Certificate::Inconclusive { reason: reason.into() }
}

fn holds(reason: impl Into<String>) -> Certificate {
    Certificate::Holds {
        reason: reason.into(),
        exceptions: Vec::new(),
    }
}

/// Largest Sylvester matrix the controllability test builds.
const MAX_SYLVESTER: usize = 16;
/// Largest integer-root candidate scanned by the `d = 1` elimination.
const MAX_ROOT_SEARCH: u64 = 1_000_000;

/// Certificate for full column rank of `M(2πi·v, τ)` at every mode.
///
/// If some τ-coefficient of a maximal minor is free of ξ it is a nonzero
/// element of `Q(i)[π]`, so that minor never vanishes identically in τ.
pub fn autonomy_certificate(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    level: SymbolicLevel,
    limit: MinorLimit,
) -> Result<Certificate, AnalysisError> {
    if level == SymbolicLevel::Off {
        return Ok(inconclusive("symbolic certificates disabled"));
    }
    let n = m.cols();
    if n == 0 {
        return Ok(holds("the system has no variables"));
    }
    if let Some(mm) = spatially_constant(m, lattice)? {
        return Ok(if generic_rank(&mm) == n {
            holds("no spatial variables occur and the common mode matrix has full column rank")
        } else {
            inconclusive("the common mode matrix is rank deficient")
        });
    }
    if m.rows() < n {
        return Ok(inconclusive("fewer equations than variables"));
    }
    limit.check_order(n)?;
    let all_cols: Vec<usize> = (0..n).collect();
    let mut coeffs = Vec::new();
    for rows in combinations(m.rows(), n) {
        let minor = det_bareiss(&m.submatrix(&rows, &all_cols));
        for (k, c) in minor.coefficients_in(Var::Tau).into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.depends_on_xi() {
                return Ok(holds(format!(
                    "the t^{k} coefficient of the maximal minor on rows {} is free of the spatial variables",
                    one_based(&rows)
                )));
            }
            coeffs.push(c);
        }
    }
    if coeffs.is_empty() {
        return Ok(inconclusive("every maximal minor vanishes identically"));
    }
    if level == SymbolicLevel::D1 && lattice.dim() == 1 {
        return Ok(match lattice_roots(&coeffs, lattice) {
            Some(roots) => Certificate::Holds {
                reason: "the maximal minors have no common lattice root in x1 outside the listed modes".into(),
                exceptions: roots,
            },
            None => inconclusive("integer root search for the eliminated system exceeded its bound"),
        });
    }
    Ok(inconclusive(
        "no t-coefficient of a maximal minor is free of the spatial variables",
    ))
}

/// Certificate for rank constancy in τ at every mode.
///
/// Take a nonvanishing `r × r` minor `m1` whose leading τ-coefficient is a
/// nonzero constant, with `r` the rank over `Q(i)(ξ, π, τ)`. At every mode
/// `m1` keeps its τ-degree, so the mode rank is `r`; and a τ-resultant of
/// `m1` with another minor that specializes to a nonzero value rules out a
/// common τ-root there.
pub fn controllability_certificate(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    level: SymbolicLevel,
    limit: MinorLimit,
) -> Result<Certificate, AnalysisError> {
    if level == SymbolicLevel::Off {
        return Ok(inconclusive("symbolic certificates disabled"));
    }
    let r = echelon(m).rank;
    if r == 0 {
        return Ok(holds("the operator matrix vanishes identically"));
    }
    if let Some(mm) = spatially_constant(m, lattice)? {
        return Ok(if rank_constancy(&mm, limit)?.constant {
            holds("no spatial variables occur and the common mode matrix is rank constant")
        } else {
            inconclusive("the common mode matrix is not rank constant")
        });
    }
    limit.check_order(r)?;
    let mut minors = Vec::new();
    for rows in combinations(m.rows(), r) {
        for cols in combinations(m.cols(), r) {
            let d = det_bareiss(&m.submatrix(&rows, &cols));
            if !d.is_zero() {
                minors.push(d);
            }
        }
    }
    let Some(pos) = minors.iter().position(|p| {
        let cs = p.coefficients_in(Var::Tau);
        !cs.last().expect("nonzero minor").depends_on_xi()
    }) else {
        return Ok(inconclusive(
            "no maximal nonvanishing minor has a leading t-coefficient free of the spatial variables",
        ));
    };
    let m1 = minors.swap_remove(pos);
    let deg1 = m1.degree_in(Var::Tau).unwrap_or(0) as usize;
    if deg1 == 0 {
        return Ok(holds(format!("a {r}x{r} minor is a nonzero constant")));
    }
    let mut resultants = Vec::new();
    for mj in &minors {
        let degj = mj.degree_in(Var::Tau).unwrap_or(0) as usize;
        if deg1 + degj > MAX_SYLVESTER {
            continue;
        }
        let res = resultant_tau(&m1, mj);
        if res.is_zero() {
            continue;
        }
        if !res.depends_on_xi() {
            return Ok(holds(format!(
                "two {r}x{r} minors have a t-resultant free of the spatial variables"
            )));
        }
        resultants.push(res);
    }
    if level == SymbolicLevel::D1 && lattice.dim() == 1 && !resultants.is_empty() {
        return Ok(match lattice_roots(&resultants, lattice) {
            Some(roots) => Certificate::Holds {
                reason:
                    "the t-resultants of the maximal minors have no common lattice root in x1 outside the listed modes"
                        .into(),
                exceptions: roots,
            },
            None => inconclusive("integer root search for the eliminated system exceeded its bound"),
        });
    }
    Ok(inconclusive(
        "no t-resultant of maximal minors is free of the spatial variables",
    ))
}

/// Without spatial variables every mode has the same matrix `M(τ)`.
fn spatially_constant(m: &PolyMatrix, lattice: &PeriodLattice) -> Result<Option<UPolyMatrix>, AnalysisError> {
    if m.iter().any(|p| p.depends_on_xi()) {
        return Ok(None);
    }
    Ok(Some(mode_matrix(m, lattice, &vec![0; lattice.dim()])?))
}

fn one_based(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Sylvester resultant with respect to τ.
pub fn resultant_tau(f: &PolyExpr, g: &PolyExpr) -> PolyExpr {
    let a = f.coefficients_in(Var::Tau);
    let b = g.coefficients_in(Var::Tau);
    assert!(!a.is_empty() && !b.is_empty(), "resultant of a zero polynomial");
    let (p, q) = (a.len() - 1, b.len() - 1);
    let size = p + q;
    let mut s = Matrix::zeros(size, size);
    for i in 0..q {
        for (k, c) in a.iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..p {
        for (k, c) in b.iter().rev().enumerate() {
            s[(q + i, i + k)] = c.clone();
        }
    }
    det_bareiss(&s)
}

/// Integer indices `n` at which every polynomial vanishes after
/// `ξ1 = 2πi·n/a` (`A = [a]`), sorted in shell order; `None` if the root
/// search is out of range.
///
/// The polynomials must be free of τ. Since π is transcendental, a value
/// `c(2iΠ·n/a, Π)` vanishes exactly when every Π-coefficient does; each of
/// those is a polynomial in `n`, split into real and imaginary parts.
pub fn lattice_roots(polys: &[PolyExpr], lattice: &PeriodLattice) -> Option<Vec<Vec<i64>>> {
    assert_eq!(lattice.dim(), 1, "elimination needs a single spatial variable");
    let step = gaussian(
        BigRational::zero(),
        BigRational::from_integer(2.into()) * lattice.inverse()[(0, 0)].clone(),
    );
    let mut g: Poly<BigRational> = Poly::zero();
    for p in polys {
        let mut by_pi: BTreeMap<u32, Poly<GaussianRational>> = BTreeMap::new();
        for (mono, c) in p.terms() {
            debug_assert_eq!(mono.exp(Var::Tau), 0);
            let alpha = mono.exp(Var::Xi(1));
            let beta = mono.exp(Var::Pi);
            let term = Poly::monomial(c.clone() * step.pow(alpha as usize), alpha as usize);
            let slot = by_pi.entry(alpha + beta).or_insert_with(Poly::zero);
            *slot = slot.clone() + term;
        }
        for q in by_pi.values() {
            g = g.gcd_euclid(&q.map(|z| z.re.clone()));
            g = g.gcd_euclid(&q.map(|z| z.im.clone()));
        }
    }
    if g.is_zero() {
        return None;
    }
    let roots = integer_roots(&g)?;
    Some(roots.into_iter().map(|n| vec![n]).collect())
}

/// Integer roots of a nonzero rational polynomial, ordered by `|n|` and then
/// value. Candidates are divisors of the lowest nonzero coefficient below
/// the Cauchy bound; `None` when that range is too large to scan.
pub fn integer_roots(p: &Poly<BigRational>) -> Option<Vec<i64>> {
    assert!(!p.is_zero());
    let den = p.coeffs().iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let zeros = ints.iter().take_while(|c| c.is_zero()).count();
    let h = &ints[zeros..];
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(0);
    }
    if h.len() > 1 {
        let c0 = h[0].abs();
        let lead = h.last().unwrap().abs();
        let max = h[..h.len() - 1].iter().map(|c| c.abs()).max().unwrap();
        let cauchy = max / &lead + 1;
        let range = c0.clone().min(cauchy);
        let range = range.to_u64().filter(|&r| r <= MAX_ROOT_SEARCH)?;
        for d in 1..=range {
            let bd = BigInt::from(d);
            if !(&c0 % &bd).is_zero() {
                continue;
            }
            for s in [Sign::Minus, Sign::Plus] {
                let x = BigInt::from_biguint(s, bd.magnitude().clone());
                let val = h.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c);
                if val.is_zero() {
                    roots.push(x.to_i64()?);
                }
            }
        }
    }
    Some(roots)
}
