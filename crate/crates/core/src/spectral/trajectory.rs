//! Per-mode trajectories: zero-past witnesses of non-autonomy and patched
//! past/future concatenations.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::analyzer::mode_matrix;
use crate::error::LabError;
use crate::lattice::PeriodLattice;
use crate::matrix::Matrix;
use crate::polymatrix::{image_representation, nullspace_vector, ImageOutcome};
use crate::scalar::{Embed, Real};
use crate::spectral::cutoff::{cutoff_theta, CutoffFunction};
use crate::spectral::signal::{apply_to_derivatives, embed_operator, operator_degree, CPoly, ExpPolySignal};
use crate::{PolyMatrix, UPoly, UPolyMatrix};

/// Tolerance for membership and latent-recovery checks of patch endpoints,
/// relative to the size of the data involved.
pub const PATCH_TOLERANCE: f64 = 1e-9;

/// Points per unit horizon in the witness normalization and patch diagnostics.
const DIAGNOSTIC_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Witness,
    Patch,
    /// Signal supplied by the caller, not constructed here.
    Supplied,
}

/// `Θ = scale · k(d/dt) f` with `f = 1 − θ`: zero for `t ≤ 0`, one for
/// `t ≥ T/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSignal<T: Real> {
    pub kernel: Vec<CPoly<T>>,
    pub source: CutoffFunction<T>,
    pub scale: T,
}

impl<T: Real> KernelSignal<T> {
    fn source_derivatives(&self, t: T, order: usize) -> Vec<T> {
        let mut d = self.source.derivatives(t, order);
        d[0] = T::one() - d[0];
        for x in d.iter_mut().skip(1) {
            *x = -*x;
        }
        d
    }

    fn derivatives(&self, t: T, order: usize) -> Vec<Vec<Complex<T>>> {
        let deg = self.kernel.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let f = self.source_derivatives(t, deg + order);
        (0..=order)
            .map(|i| {
                self.kernel
                    .iter()
                    .map(|p| {
                        let mut acc = Complex::zero();
                        for (k, c) in p.coeffs().iter().enumerate() {
                            acc = acc + *c * f[k + i];
                        }
                        acc * self.scale
                    })
                    .collect()
            })
            .collect()
    }
}

/// `Θ = N(d/dt)ℓ` with latent `ℓ = θ·ℓ₁ + θ(T − ·)·ℓ₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSignal<T: Real> {
    pub image: Matrix<CPoly<T>>,
    pub past_latent: ExpPolySignal<T>,
    pub future_latent: ExpPolySignal<T>,
    pub cutoff: CutoffFunction<T>,
}

/// Derivatives of `θ·a + θ(T−·)·b` by the Leibniz rule.
fn blend_derivatives<T: Real>(
    cutoff: &CutoffFunction<T>,
    a: &ExpPolySignal<T>,
    b: &ExpPolySignal<T>,
    t: T,
    order: usize,
) -> Vec<Vec<Complex<T>>> {
    let th = cutoff.derivatives(t, order);
    let thr = cutoff.reflected_derivatives(t, order);
    let da = a.derivatives_at(t, order);
    let db = b.derivatives_at(t, order);
    let dim = a.dim();
    (0..=order)
        .map(|m| {
            let mut row = vec![Complex::zero(); dim];
            let mut binom = T::one();
            for j in 0..=m {
                // binom = C(m, j)
                for (slot, x) in row.iter_mut().enumerate() {
                    *x = *x + (da[j][slot] * th[m - j] + db[j][slot] * thr[m - j]) * binom;
                }
                binom = binom * T::from_f64_lossy((m - j) as f64) / T::from_f64_lossy((j + 1) as f64);
            }
            row
        })
        .collect()
}

impl<T: Real> PatchSignal<T> {
    fn derivatives(&self, t: T, order: usize) -> Vec<Vec<Complex<T>>> {
        let deg = operator_degree(&self.image);
        let l = blend_derivatives(&self.cutoff, &self.past_latent, &self.future_latent, t, deg + order);
        (0..=order)
            .map(|i| apply_to_derivatives(&self.image, &l[i..]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrajectorySignal<T: Real> {
    ExpPoly(ExpPolySignal<T>),
    Kernel(KernelSignal<T>),
    Patch(PatchSignal<T>),
}

impl<T: Real> TrajectorySignal<T> {
    pub fn dim(&self) -> usize {
        match self {
            TrajectorySignal::ExpPoly(s) => s.dim(),
            TrajectorySignal::Kernel(k) => k.kernel.len(),
            TrajectorySignal::Patch(p) => p.image.rows(),
        }
    }

    pub fn eval(&self, t: T) -> Vec<Complex<T>> {
        self.derivatives(t, 0).swap_remove(0)
    }

    /// Values of the signal and its first `order` derivatives at `t`.
    pub fn derivatives(&self, t: T, order: usize) -> Vec<Vec<Complex<T>>> {
        match self {
            TrajectorySignal::ExpPoly(s) => s.derivatives_at(t, order),
            TrajectorySignal::Kernel(k) => k.derivatives(t, order),
            TrajectorySignal::Patch(p) => p.derivatives(t, order),
        }
    }

    /// `op(d/dt)Θ` at `t`.
    pub fn residual(&self, op: &Matrix<CPoly<T>>, t: T) -> Vec<Complex<T>> {
        apply_to_derivatives(op, &self.derivatives(t, operator_degree(op)))
    }

    pub fn sample(&self, grid: &[T]) -> Vec<Vec<Complex<T>>> {
        grid.iter().map(|&t| self.eval(t)).collect()
    }
}

/// Exact polynomial identity checked while building a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactIdentity {
    /// `M(2πi·v, τ)·k(τ) = 0`.
    Kernel {
        mode_matrix: UPolyMatrix,
        kernel: Vec<UPoly>,
    },
    /// `M(2πi·v, τ)·N(τ) = 0` and `L(τ)·N(τ) = I`.
    Image {
        mode_matrix: UPolyMatrix,
        image: UPolyMatrix,
        left_inverse: UPolyMatrix,
    },
}

impl ExactIdentity {
    /// Recompute the product exactly.
    pub fn holds(&self) -> bool {
        match self {
            ExactIdentity::Kernel { mode_matrix, kernel } => {
                let k = Matrix::new(kernel.len(), 1, kernel.clone());
                mode_matrix.matmul(&k).is_zero()
            }
            ExactIdentity::Image {
                mode_matrix,
                image,
                left_inverse,
            } => mode_matrix.matmul(image).is_zero() && left_inverse.matmul(image) == Matrix::identity(image.cols()),
        }
    }

    pub fn mode_matrix(&self) -> &UPolyMatrix {
        match self {
            ExactIdentity::Kernel { mode_matrix, .. } | ExactIdentity::Image { mode_matrix, .. } => mode_matrix,
        }
    }
}

/// Numeric checks made while patching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchDiagnostics {
    /// Coefficient size of `M(d/dt)Θᵢ` for the two endpoints.
    pub membership_residual: [f64; 2],
    /// Coefficient size of `N(d/dt)ℓᵢ − Θᵢ`.
    pub recovery_mismatch: [f64; 2],
    /// Largest `|M(d/dt)(θ·Θ₁ + θ(T−·)·Θ₂)|` on a grid over `(0, T)`: the
    /// direct cutoff of the endpoints, which in general leaves the behaviour.
    pub literal_formula_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory<T: Real> {
    pub n_vec: Vec<i64>,
    pub v: Vec<BigRational>,
    pub provenance: Provenance,
    pub signal: TrajectorySignal<T>,
    pub identity: Option<ExactIdentity>,
    pub patch: Option<PatchDiagnostics>,
}

impl<T: Real> ModeTrajectory<T> {
    /// A trajectory given directly by an exp-poly signal, without checks.
    pub fn from_signal(n_vec: Vec<i64>, v: Vec<BigRational>, signal: ExpPolySignal<T>) -> Self {
        ModeTrajectory {
            n_vec,
            v,
            provenance: Provenance::Supplied,
            signal: TrajectorySignal::ExpPoly(signal),
            identity: None,
            patch: None,
        }
    }

    /// `M(2πi·v, d/dt)Θ` at `t`, from the exact mode matrix when known.
    pub fn residual(&self, t: T) -> Option<Vec<Complex<T>>> {
        let op = embed_operator(self.identity.as_ref()?.mode_matrix());
        Some(self.signal.residual(&op, t))
    }

    /// CSV with columns `t, Re w1..Re wn, Im w1..Im wn`.
    pub fn to_csv(&self, grid: &[T]) -> String {
        let n = self.signal.dim();
        let mut out = String::from("t");
        for k in 1..=n {
            out.push_str(&format!(",re_w{k}"));
        }
        for k in 1..=n {
            out.push_str(&format!(",im_w{k}"));
        }
        out.push('\n');
        for &t in grid {
            let w = self.signal.eval(t);
            out.push_str(&t.to_string());
            for z in &w {
                out.push_str(&format!(",{}", z.re));
            }
            for z in &w {
                out.push_str(&format!(",{}", z.im));
            }
            out.push('\n');
        }
        out
    }
}

fn uniform_grid<T: Real>(a: T, b: T, points: usize) -> Vec<T> {
    let step = (b - a) / T::from_f64_lossy(points as f64 + 1.0);
    (1..=points).map(|i| a + step * T::from_f64_lossy(i as f64)).collect()
}

fn sup_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm()).fold(T::zero(), T::max)
}

/// Zero-past trajectory at a mode with `r_v < n`.
///
/// `Θ = k(d/dt) f` for a polynomial kernel vector `k` of the mode matrix and
/// a smooth `f` vanishing on `t ≤ 0`, scaled so that `max |Θ| = 1` on a grid
/// over `(0, horizon)`.
pub fn build_nonautonomy_witness<T: Real>(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    horizon: T,
) -> Result<ModeTrajectory<T>, LabError> {
    let source = cutoff_theta(horizon)?;
    let v = lattice.mode(n_vec)?;
    let mm = mode_matrix(m, lattice, n_vec)?;
    let kernel = nullspace_vector(&mm).ok_or(LabError::FullColumnRank)?;
    let identity = ExactIdentity::Kernel {
        mode_matrix: mm,
        kernel: kernel.clone(),
    };
    assert!(identity.holds(), "kernel vector does not annihilate the mode matrix");
    let mut signal = KernelSignal {
        kernel: kernel.iter().map(|p| p.map(|c| c.embed::<T>())).collect(),
        source,
        scale: T::one(),
    };
    let points = DIAGNOSTIC_POINTS;
    let peak = uniform_grid(T::zero(), horizon, points)
        .into_iter()
        .map(|t| sup_norm(&signal.derivatives(t, 0)[0]))
        .fold(T::zero(), T::max);
    if peak > T::zero() && peak.is_finite() {
        signal.scale = peak.recip();
    }
    Ok(ModeTrajectory {
        n_vec: n_vec.to_vec(),
        v,
        provenance: Provenance::Witness,
        signal: TrajectorySignal::Kernel(signal),
        identity: Some(identity),
        patch: None,
    })
}

/// Trajectory equal to `Θ₁` on `t < 0` and to `Θ₂` on `t > T` at a
/// rank-constant mode.
///
/// The endpoints are cut off in latent variables of an image representation
/// `Θ = N(d/dt)ℓ`, so membership rests on the exact identity `M·N = 0`
/// rather than on the numerics of the cutoff.
pub fn build_patching_trajectory<T: Real>(
    m: &PolyMatrix,
    lattice: &PeriodLattice,
    n_vec: &[i64],
    past: &ExpPolySignal<T>,
    future: &ExpPolySignal<T>,
    horizon: T,
) -> Result<ModeTrajectory<T>, LabError> {
    let cutoff = cutoff_theta(horizon)?;
    let v = lattice.mode(n_vec)?;
    let mm = mode_matrix(m, lattice, n_vec)?;
    let rep = match image_representation(&mm) {
        ImageOutcome::Image(rep) => rep,
        ImageOutcome::NotRankConstant => return Err(LabError::NotRankConstant),
    };
    let identity = ExactIdentity::Image {
        mode_matrix: mm.clone(),
        image: rep.image.clone(),
        left_inverse: rep.left_inverse.clone(),
    };
    assert!(identity.holds(), "image representation identities failed");
    let op = embed_operator::<T>(&mm);
    let image = embed_operator::<T>(&rep.image);
    let left = embed_operator::<T>(&rep.left_inverse);
    let op_size = matrix_norm(&op);

    let mut membership = [0.0; 2];
    let mut mismatch = [0.0; 2];
    let mut latents = Vec::with_capacity(2);
    for (i, theta) in [past, future].into_iter().enumerate() {
        if theta.dim() != mm.cols() {
            return Err(LabError::SignalDimension {
                expected: mm.cols(),
                found: theta.dim(),
            });
        }
        let scale = T::one().max(theta.coefficient_norm());
        let res = theta.apply(&op)?.coefficient_norm();
        membership[i] = res.to_f64().unwrap_or(f64::NAN);
        if !(res <= tolerance::<T>() * scale * T::one().max(op_size)) {
            return Err(LabError::NotInBehaviour {
                which: i + 1,
                residual: membership[i],
            });
        }
        let latent = theta.apply(&left)?;
        let err = latent.apply(&image)?.sub(theta)?.coefficient_norm();
        mismatch[i] = err.to_f64().unwrap_or(f64::NAN);
        if !(err <= tolerance::<T>() * scale * T::one().max(matrix_norm(&image) * matrix_norm(&left))) {
            return Err(LabError::LatentRecovery {
                which: i + 1,
                mismatch: mismatch[i],
            });
        }
        latents.push(latent);
    }
    let future_latent = latents.pop().unwrap();
    let past_latent = latents.pop().unwrap();

    let deg = operator_degree(&op);
    let literal = uniform_grid(T::zero(), horizon, DIAGNOSTIC_POINTS)
        .into_iter()
        .map(|t| {
            sup_norm(&apply_to_derivatives(
                &op,
                &blend_derivatives(&cutoff, past, future, t, deg),
            ))
        })
        .fold(T::zero(), T::max);

    Ok(ModeTrajectory {
        n_vec: n_vec.to_vec(),
        v,
        provenance: Provenance::Patch,
        signal: TrajectorySignal::Patch(PatchSignal {
            image,
            past_latent,
            future_latent,
            cutoff,
        }),
        identity: Some(identity),
        patch: Some(PatchDiagnostics {
            membership_residual: membership,
            recovery_mismatch: mismatch,
            literal_formula_residual: literal.to_f64().unwrap_or(f64::NAN),
        }),
    })
}

fn tolerance<T: Real>() -> T {
    T::from_f64_lossy(PATCH_TOLERANCE).max(T::epsilon() * T::from_f64_lossy(1e3))
}

fn matrix_norm<T: Real>(m: &Matrix<CPoly<T>>) -> T {
    m.iter()
        .flat_map(|p| p.coeffs().iter())
        .map(|c| c.norm())
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use num_traits::One;

    type C = Complex<f64>;

    fn mat(rows: &[&[&str]], d: usize) -> PolyMatrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|e| parse_poly(e, d).unwrap()).collect())
                .collect(),
        )
    }
    fn c(re: f64) -> C {
        Complex::new(re, 0.0)
    }

    #[test]
    fn witness_for_row_operator() {
        let m = mat(&[&["t", "1"]], 1);
        let lat = PeriodLattice::identity(1);
        let w = build_nonautonomy_witness(&m, &lat, &[0], 4.0).unwrap();
        match &w.identity {
            Some(ExactIdentity::Kernel { kernel, .. }) => {
                assert_eq!(kernel.len(), 2);
                assert_eq!(kernel[0], UPoly::one());
                assert_eq!(kernel[1], -UPoly::x());
            }
            other => panic!("{other:?}"),
        }
        assert!(w.identity.as_ref().unwrap().holds());
        for i in 1..100 {
            let t = -4.0 * i as f64 / 100.0;
            assert!(sup_norm(&w.signal.eval(t)) < 1e-9);
        }
        let peak = (1..400)
            .map(|i| sup_norm(&w.signal.eval(i as f64 / 100.0)))
            .fold(0.0, f64::max);
        assert!(peak > 0.1);
        for &t in &[0.2, 0.5, 0.9, 2.0] {
            assert!(sup_norm(&w.residual(t).unwrap()) < 1e-9);
        }
    }

    #[test]
    fn witness_requires_rank_deficiency() {
        let m = mat(&[&["t - x1^2"]], 1);
        let e = build_nonautonomy_witness(&m, &PeriodLattice::identity(1), &[1], 4.0).unwrap_err();
        assert_eq!(e, LabError::FullColumnRank);
        let zero = mat(&[&["0"]], 1);
        let w = build_nonautonomy_witness(&zero, &PeriodLattice::identity(1), &[0], 4.0).unwrap();
        let v = w.signal.eval(3.0)[0];
        assert!((v - c(1.0)).norm() < 1e-12, "Θ = f, normalized");
    }

    #[test]
    fn patch_between_exponentials() {
        let m = mat(&[&["t", "1"]], 1);
        let lat = PeriodLattice::identity(1);
        let past = ExpPolySignal::constant(vec![c(1.0), c(0.0)]);
        let future = ExpPolySignal::exponential(c(1.0), vec![c(1.0), c(-1.0)]);
        let tr = build_patching_trajectory(&m, &lat, &[0], &past, &future, 4.0).unwrap();
        assert!(tr.identity.as_ref().unwrap().holds());
        for i in 0..100 {
            let t = -0.05 - i as f64 * 0.1;
            let d = tr.signal.eval(t);
            assert!((d[0] - c(1.0)).norm() < 1e-8 && d[1].norm() < 1e-8);
            let t = 4.05 + i as f64 * 0.05;
            let d = tr.signal.eval(t);
            let e = future.eval(t);
            assert!((d[0] - e[0]).norm() < 1e-8 * e[0].norm().max(1.0));
            assert!((d[1] - e[1]).norm() < 1e-8 * e[1].norm().max(1.0));
        }
        for &t in &[0.3, 0.7, 2.0] {
            let r = tr.residual(t).unwrap();
            assert!(sup_norm(&r) < 1e-9, "{r:?}");
        }
        assert!(tr.patch.unwrap().literal_formula_residual > 1e-3);
    }

    #[test]
    fn patch_rejects_bad_inputs() {
        let m = mat(&[&["t", "1"]], 1);
        let lat = PeriodLattice::identity(1);
        let ok = ExpPolySignal::constant(vec![c(1.0), c(0.0)]);
        let bad = ExpPolySignal::constant(vec![c(1.0), c(1.0)]);
        assert!(matches!(
            build_patching_trajectory(&m, &lat, &[0], &ok, &bad, 4.0),
            Err(LabError::NotInBehaviour { which: 2, .. })
        ));
        let diffusion = mat(&[&["t - x1^2 - x2^2"]], 2);
        let one = ExpPolySignal::constant(vec![c(0.0)]);
        assert_eq!(
            build_patching_trajectory(&diffusion, &PeriodLattice::identity(2), &[1, 0], &one, &one, 4.0).unwrap_err(),
            LabError::NotRankConstant
        );
    }

    #[test]
    fn self_patch_is_identity_outside_transition() {
        let m = mat(&[&["t", "1"]], 1);
        let lat = PeriodLattice::identity(1);
        let s = ExpPolySignal::exponential(Complex::new(-0.5, 2.0), vec![c(1.0), Complex::new(0.5, -2.0)]);
        let tr = build_patching_trajectory(&m, &lat, &[3], &s, &s, 4.0).unwrap();
        for &t in &[-3.0, -0.1, 4.1, 6.0] {
            let (a, b) = (tr.signal.eval(t), s.eval(t));
            assert!((a[0] - b[0]).norm() < 1e-10 && (a[1] - b[1]).norm() < 1e-10);
        }
    }
}
