//! Serializable report document (`schema: 1`), assembled from analyzer and
//! lab results. Exact quantities are rendered as strings in the parser's
//! syntax; floating-point values stay numbers.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::analyzer::{ClassicalStatus, Comparison, Method, ModeReport, Status, SymbolicLevel, Verdict};
use crate::problem::ProblemFile;
use crate::spectral::{ExactIdentity, PatchDiagnostics, Provenance};
use crate::UPolyMatrix;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "sbeh".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub dimension: usize,
    pub period: Vec<Vec<String>>,
    pub matrix: Vec<Vec<String>>,
    pub window: u32,
    pub symbolic: SymbolicLevel,
    pub horizon: f64,
    pub samples: usize,
}

impl InputEcho {
    pub fn new(p: &ProblemFile, window: u32, symbolic: SymbolicLevel, horizon: f64, samples: usize) -> Self {
        let a = p.lattice.period_matrix();
        InputEcho {
            dimension: p.dimension,
            period: (0..a.rows())
                .map(|i| a.row(i).iter().map(|q| q.to_string()).collect())
                .collect(),
            matrix: (0..p.matrix.rows())
                .map(|i| p.matrix.row(i).iter().map(|e| e.to_string()).collect())
                .collect(),
            window,
            symbolic,
            horizon,
            samples,
        }
    }
}

fn rationals(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|q| q.to_string()).collect()
}

fn matrix_strings(m: &UPolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|p| p.to_string()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDoc {
    pub n: Vec<i64>,
    pub v: Vec<String>,
    pub rank: usize,
    pub cols: usize,
    pub rank_drop_gcd: String,
    pub autonomous: bool,
    pub controllable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drop_locus: Option<String>,
}

impl From<&ModeReport> for ModeDoc {
    fn from(r: &ModeReport) -> Self {
        ModeDoc {
            n: r.n_vec.clone(),
            v: rationals(&r.v),
            rank: r.generic_rank,
            cols: r.cols,
            rank_drop_gcd: r.rank_drop_gcd.to_string(),
            autonomous: r.autonomous_mode,
            controllable: r.controllable_mode,
            kernel: r.kernel.as_ref().map(|k| k.iter().map(|p| p.to_string()).collect()),
            drop_locus: r.drop_locus.as_ref().map(|p| p.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub status: Status,
    pub method: Method,
    pub window_radius: u32,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ModeDoc>,
}

impl From<&Verdict> for VerdictDoc {
    fn from(v: &Verdict) -> Self {
        VerdictDoc {
            status: v.status,
            method: v.method,
            window_radius: v.window_radius,
            detail: v.detail.clone(),
            witness: v.witness.as_ref().map(ModeDoc::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub autonomy: VerdictDoc,
    pub controllability: VerdictDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalDoc {
    pub polynomial: String,
    pub degree: u32,
    pub degree_at_zero: Option<u32>,
    pub classical: ClassicalStatus,
    pub periodic: VerdictDoc,
}

impl ClassicalDoc {
    pub fn new(polynomial: String, c: &Comparison) -> Self {
        ClassicalDoc {
            polynomial,
            degree: c.degree,
            degree_at_zero: c.degree_at_zero,
            classical: c.classical,
            periodic: VerdictDoc::from(&c.periodic),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityDoc {
    /// `M*k = 0` or `M*N = 0, L*N = I`.
    pub statement: String,
    pub verified: bool,
    pub mode_matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_inverse: Option<Vec<Vec<String>>>,
}

impl From<&ExactIdentity> for IdentityDoc {
    fn from(id: &ExactIdentity) -> Self {
        let verified = id.holds();
        match id {
            ExactIdentity::Kernel { mode_matrix, kernel } => IdentityDoc {
                statement: "M*k = 0".into(),
                verified,
                mode_matrix: matrix_strings(mode_matrix),
                kernel: Some(kernel.iter().map(|p| p.to_string()).collect()),
                image: None,
                left_inverse: None,
            },
            ExactIdentity::Image {
                mode_matrix,
                image,
                left_inverse,
            } => IdentityDoc {
                statement: "M*N = 0, L*N = I".into(),
                verified,
                mode_matrix: matrix_strings(mode_matrix),
                kernel: None,
                image: Some(matrix_strings(image)),
                left_inverse: Some(matrix_strings(left_inverse)),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchDoc {
    pub membership_residual: [f64; 2],
    pub recovery_mismatch: [f64; 2],
    pub literal_formula_residual: f64,
}

impl From<&PatchDiagnostics> for PatchDoc {
    fn from(d: &PatchDiagnostics) -> Self {
        PatchDoc {
            membership_residual: d.membership_residual,
            recovery_mismatch: d.recovery_mismatch,
            literal_formula_residual: d.literal_formula_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDoc {
    pub n: Vec<i64>,
    pub v: Vec<String>,
    pub provenance: Provenance,
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch: Option<PatchDoc>,
    /// Largest `|Θ(t)|` over the sampled `t < 0`.
    pub max_abs_past: f64,
    /// Largest `|Θ(t)|` over the sampled `t ≥ 0`.
    pub max_abs_future: f64,
    /// Largest numeric residual `|M(d/dt)Θ|` over the sampled grid.
    pub max_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSample {
    pub t: [f64; 2],
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub n: Vec<i64>,
    pub generic_rank: usize,
    pub rank_drop_gcd: String,
    pub svd_tolerance: f64,
    pub samples: Vec<RankSample>,
    /// Samples whose numeric rank differs from the generic rank.
    pub disagreements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: ToolInfo,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<Verdicts>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<TrajectoryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ReportDocument {
    pub fn new(input: InputEcho) -> Self {
        ReportDocument {
            schema: SCHEMA_VERSION,
            tool: ToolInfo::current(),
            input,
            verdicts: None,
            modes: Vec::new(),
            classical: None,
            trajectory: None,
            samples: None,
            timing_ms: None,
        }
    }

    /// Every verdict in the document, classical comparison included.
    pub fn verdict_docs(&self) -> Vec<&VerdictDoc> {
        let mut out = Vec::new();
        if let Some(v) = &self.verdicts {
            out.push(&v.autonomy);
            out.push(&v.controllability);
        }
        if let Some(c) = &self.classical {
            out.push(&c.periodic);
        }
        out
    }

    pub fn any_undecided(&self) -> bool {
        self.verdict_docs()
            .iter()
            .any(|v| v.status == Status::UndecidedWithinWindow)
    }
}
