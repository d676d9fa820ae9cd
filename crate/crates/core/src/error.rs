use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("all inputs are the zero polynomial")]
    AllZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exponent must be a nonnegative integer literal")]
    BadExponent,
}

/// Parse failure at a 1-based character column of the expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("minor order {k} out of range for a {rows}x{cols} matrix")]
    OrderOutOfRange { k: usize, rows: usize, cols: usize },
    #[error("minor enumeration of order {order} exceeds the configured limit {limit}")]
    ResourceLimit { order: usize, limit: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("mode index has {found} entries, lattice dimension is {expected}")]
    ModeDimension { expected: usize, found: usize },
    #[error("period matrix must be square of size {expected}, got {rows}x{cols}")]
    PeriodShape { expected: usize, rows: usize, cols: usize },
    #[error("period matrix not invertible")]
    SingularPeriod,
    #[error("scalar criterion needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("criterion inapplicable: p(0, t) is the zero polynomial")]
    CriterionInapplicable,
    #[error("expected a 1x1 matrix, got {rows}x{cols}")]
    NotScalar { rows: usize, cols: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("mode is full column rank: no zero-past trajectory exists")]
    FullColumnRank,
    #[error("mode not rank constant: patching is not available")]
    NotRankConstant,
    #[error("endpoint trajectory {which} is not in the mode behaviour (residual {residual:e})")]
    NotInBehaviour { which: usize, residual: f64 },
    #[error("latent recovery failed for endpoint {which} (mismatch {mismatch:e})")]
    LatentRecovery { which: usize, mismatch: f64 },
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("growth bound violated at mode {n_vec:?}: |w| = {value:e} > {bound:e}")]
    GrowthBound { n_vec: Vec<i64>, value: f64, bound: f64 },
    #[error("signal dimension {found} does not match {expected}")]
    SignalDimension { expected: usize, found: usize },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Invalid problem file, located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ProblemError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}
