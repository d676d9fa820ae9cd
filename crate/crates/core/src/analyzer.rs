//! Per-mode rank analysis and the lattice-wide verdicts built from it.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{autonomy_certificate, controllability_certificate, Certificate};
use crate::error::AnalysisError;
use crate::lattice::{window_modes, PeriodLattice};
use crate::polymatrix::{nullspace_vector, rank_constancy, MinorLimit};
use crate::{PolyExpr, PolyMatrix, UPoly, UPolyMatrix};

pub use crate::certificate::SymbolicLevel;

/// Exact rank data of `M(2πi·v, τ)` at one lattice mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub n_vec: Vec<i64>,
    pub v: Vec<BigRational>,
    /// Number of columns `n` of the operator matrix.
    pub cols: usize,
    pub generic_rank: usize,
    /// Monic GCD of the nonzero maximal minors; 1 when the rank is 0.
    pub rank_drop_gcd: UPoly,
    pub autonomous_mode: bool,
    pub controllable_mode: bool,
    /// Polynomial kernel vector, present when `generic_rank < cols`.
    pub kernel: Option<Vec<UPoly>>,
    /// The rank-drop GCD again, present when the rank is not constant in `t`.
    pub drop_locus: Option<UPoly>,
}

/// `M(2πi·v, τ)` for `v = A⁻¹·n_vec`.
pub fn mode_matrix(m: &PolyMatrix, lattice: &PeriodLattice, n_vec: &[i64]) -> Result<UPolyMatrix, AnalysisError> {
    let v = lattice.mode(n_vec)?;
    mode_matrix_at(m, &v)
}

fn mode_matrix_at(m: &PolyMatrix, v: &[BigRational]) -> Result<UPolyMatrix, AnalysisError> {
    let entries = m.iter().map(|p| p.substitute_mode(v)).collect::<Result<Vec<_>, _>>()?;
    Ok(crate::Matrix::new(m.rows(), m.cols(), entries))
}

pub fn analyze_mode(m: &PolyMatrix, lattice: &PeriodLattice, n_vec: &[i64]) -> Result<ModeReport, AnalysisError> {
    analyze_mode_with(m, lattice, n_vec, MinorLimit::default())
}

pub fn analyze_mode_with(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    limit: MinorLimit,
) -> Result<ModeReport, AnalysisError> {
    let v = lattice.mode(n_vec)?;
    let mm = mode_matrix_at(m, &v)?;
    let rc = rank_constancy(&mm, limit)?;
    let cols = mm.cols();
    let kernel = if rc.rank < cols { nullspace_vector(&mm) } else { None };
    Ok(ModeReport {
        n_vec: n_vec.to_vec(),
        v,
        cols,
        generic_rank: rc.rank,
        autonomous_mode: rc.rank == cols,
        controllable_mode: rc.constant,
        drop_locus: (!rc.constant).then(|| rc.gcd.clone()),
        rank_drop_gcd: rc.gcd,
        kernel,
    })
}

/// Without spatial variables every mode has the same matrix, so one report
/// serves them all up to `n` and `v`.
fn shared_report(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    limit: MinorLimit,
) -> Result<Option<ModeReport>, AnalysisError> {
    if m.iter().any(|p| p.depends_on_xi()) {
        return Ok(None);
    }
    analyze_mode_with(m, lattice, &vec![0; lattice.dim()], limit).map(Some)
}

fn report_at(
    shared: &Option<ModeReport>,
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    limit: MinorLimit,
) -> Result<ModeReport, AnalysisError> {
    match shared {
        Some(r) => Ok(ModeReport {
            n_vec: n_vec.to_vec(),
            v: lattice.mode(n_vec)?,
            ..r.clone()
        }),
        None => analyze_mode_with(m, lattice, n_vec, limit),
    }
}

/// Reports for every mode with `‖n‖∞ ≤ window`, in shell order.
pub fn analyze_window(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    limit: MinorLimit,
) -> Result<Vec<ModeReport>, AnalysisError> {
    let shared = shared_report(m, lattice, limit)?;
    window_modes(lattice.dim(), window)
        .par_iter()
        .map(|n| report_at(&shared, m, lattice, n, limit))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Proved,
    Refuted,
    UndecidedWithinWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Symbolic,
    Window,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub method: Method,
    pub window_radius: u32,
    /// The failing mode; always present for `Refuted`.
    pub witness: Option<ModeReport>,
    /// Human-readable account of the certificate or of why none was found.
    pub detail: String,
}

impl Verdict {
    pub fn is_decisive(&self) -> bool {
        self.status != Status::UndecidedWithinWindow
    }
}

pub fn decide_autonomy(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    symbolic: SymbolicLevel,
) -> Result<Verdict, AnalysisError> {
    decide_autonomy_with(m, lattice, window, symbolic, MinorLimit::default())
}

pub fn decide_autonomy_with(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    symbolic: SymbolicLevel,
    limit: MinorLimit,
) -> Result<Verdict, AnalysisError> {
    decide(
        m,
        lattice,
        window,
        limit,
        |r| r.autonomous_mode,
        || autonomy_certificate(m, lattice, symbolic, limit),
    )
}

pub fn decide_controllability(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    symbolic: SymbolicLevel,
) -> Result<Verdict, AnalysisError> {
    decide_controllability_with(m, lattice, window, symbolic, MinorLimit::default())
}

pub fn decide_controllability_with(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    symbolic: SymbolicLevel,
    limit: MinorLimit,
) -> Result<Verdict, AnalysisError> {
    decide(
        m,
        lattice,
        window,
        limit,
        |r| r.controllable_mode,
        || controllability_certificate(m, lattice, symbolic, limit),
    )
}

fn decide(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    window: u32,
    limit: MinorLimit,
    holds: impl Fn(&ModeReport) -> bool + Sync,
    certificate: impl FnOnce() -> Result<Certificate, AnalysisError>,
) -> Result<Verdict, AnalysisError> {
    let shared = shared_report(m, lattice, limit)?;
    // first failure in shell order, whatever order the workers finish in
    let failure = window_modes(lattice.dim(), window).par_iter().find_map_first(|n| {
        match report_at(&shared, m, lattice, n, limit) {
            Ok(r) if holds(&r) => None,
            other => Some(other),
        }
    });
    if let Some(r) = failure {
        let r = r?;
        return Ok(Verdict {
            status: Status::Refuted,
            method: Method::Window,
            window_radius: window,
            detail: format!("fails at mode n = {:?}", r.n_vec),
            witness: Some(r),
        });
    }
    match certificate()? {
        Certificate::Holds { reason, exceptions } => {
            for n in &exceptions {
                let r = analyze_mode_with(m, lattice, n, limit)?;
                if !holds(&r) {
                    return Ok(Verdict {
                        status: Status::Refuted,
                        method: Method::Symbolic,
                        window_radius: window,
                        detail: format!("{reason}; fails at mode n = {n:?}"),
                        witness: Some(r),
                    });
                }
            }
            Ok(Verdict {
                status: Status::Proved,
                method: Method::Symbolic,
                window_radius: window,
                witness: None,
                detail: reason,
            })
        }
        Certificate::Inconclusive { reason } => Ok(Verdict {
            status: Status::UndecidedWithinWindow,
            method: Method::Window,
            window_radius: window,
            witness: None,
            detail: reason,
        }),
    }
}

/// Degree test for scalar autonomy over all distributions: `deg p = deg p(0, τ)`.
pub fn classical_autonomy_scalar(p: &PolyExpr) -> Result<bool, AnalysisError> {
    let c = classical_degrees(p)?;
    c.1.map(|d0| d0 == c.0).ok_or(AnalysisError::CriterionInapplicable)
}

fn classical_degrees(p: &PolyExpr) -> Result<(u32, Option<u32>), AnalysisError> {
    let deg = p.total_degree().ok_or(AnalysisError::ZeroPolynomial)?;
    Ok((deg, p.at_zero_xi().total_degree()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassicalStatus {
    Autonomous,
    NotAutonomous,
    /// `p(0, τ)` is the zero polynomial, so the degree test is undefined.
    CriterionInapplicable,
}

/// Classical verdict next to the spatially periodic one for a scalar `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub degree: u32,
    pub degree_at_zero: Option<u32>,
    pub classical: ClassicalStatus,
    pub periodic: Verdict,
}

pub fn compare_solution_spaces(
    p: &PolyExpr,
    lattice: &PeriodLattice,
    window: u32,
    symbolic: SymbolicLevel,
) -> Result<Comparison, AnalysisError> {
    let (degree, degree_at_zero) = classical_degrees(p)?;
    let classical = match degree_at_zero {
        None => ClassicalStatus::CriterionInapplicable,
        Some(d0) if d0 == degree => ClassicalStatus::Autonomous,
        Some(_) => ClassicalStatus::NotAutonomous,
    };
    let m = crate::Matrix::new(1, 1, vec![p.clone()]);
    let periodic = decide_autonomy(&m, lattice, window, symbolic)?;
    Ok(Comparison {
        degree,
        degree_at_zero,
        classical,
        periodic,
    })
}

/// Reject anything but a 1×1 operator matrix.
pub fn scalar_entry(m: &PolyMatrix) -> Result<&PolyExpr, AnalysisError> {
    if m.rows() == 1 && m.cols() == 1 {
        Ok(&m[(0, 0)])
    } else {
        Err(AnalysisError::NotScalar {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}
