//! Exact decision procedures for autonomy and controllability of linear
//! constant-coefficient PDE systems `M(∂x, ∂t) w = 0` whose solutions are
//! periodic in space, together with a numeric lab that builds and checks
//! the trajectories witnessing those properties.
//!
//! A spatially periodic solution decomposes into Fourier modes
//! `v ∈ A⁻¹Zᵈ`; at each mode the PDE becomes the ODE system
//! `M(2πi·v, d/dt)`. Autonomy holds iff every mode has full column rank
//! over `C(τ)`; controllability holds iff at every mode the rank of
//! `M(2πi·v, t)` is the same for every complex `t`.
//!
//! The algebra is generic over the scalar type (see [`scalar`]); the
//! aliases below fix the instantiation used by the analyzer: Gaussian
//! rational coefficients with π carried as a transcendental symbol Π.

pub mod analyzer;
pub mod certificate;
pub mod error;
pub mod gcd;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod polymatrix;
pub mod problem;
pub mod ratfunc;
pub mod report;
pub mod scalar;
pub mod smith;
pub mod spectral;
pub mod upoly;

pub use error::{AlgebraError, AnalysisError, LabError, MatrixError, ParseError, ParseErrorKind, ProblemError};
pub use matrix::Matrix;
pub use mpoly::{MPoly, Monomial, Var};
pub use ratfunc::{PiScalar, RatFunc};
pub use scalar::{Embed, ExactDiv, Field, GaussianRational, Real, Ring};
pub use upoly::Poly;

/// Polynomial in ξ1..ξd, τ, Π with Gaussian rational coefficients.
pub type PolyExpr = MPoly<GaussianRational>;
/// Entry of `M(2πi·v, τ)`: a polynomial in τ over `Q(i)(Π)`.
pub type UPoly = Poly<PiScalar>;
/// The PDE operator matrix.
pub type PolyMatrix = Matrix<PolyExpr>;
/// The ODE operator matrix of a single mode.
pub type UPolyMatrix = Matrix<UPoly>;
/// Smith decomposition of a mode matrix.
pub type SmithDecomposition = smith::SmithDecomposition<PiScalar>;
pub type RankConstancy = polymatrix::RankConstancy<GaussianRational>;
pub type ImageRepresentation = polymatrix::ImageRepresentation<GaussianRational>;
pub type ImageOutcome = polymatrix::ImageOutcome<GaussianRational>;

/// Double-precision instantiations of the numeric lab.
pub type ExpPolySignal = spectral::ExpPolySignal<f64>;
pub type CutoffFunction = spectral::CutoffFunction<f64>;
pub type ModeTrajectory = spectral::ModeTrajectory<f64>;
pub type SpatialField = spectral::SpatialField<f64>;

pub use parse::parse_poly;
