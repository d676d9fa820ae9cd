//! Smooth cutoff `θ` with `θ = 1` on `t ≤ 0` and `θ = 0` on `t ≥ T/4`.
//!
//! Built from the bump `ψ(s) = exp(−1/(s(1−s)))` on `(0, 1)`: with
//! `S(s) = ∫₀ˢψ / ∫₀¹ψ` and `L = T/4`, `θ(t) = 1 − S(t/L)`.

use std::sync::Arc;

use num_traits::One;

use crate::error::LabError;
use crate::scalar::Real;
use crate::upoly::Poly;

/// Orders of `ψ` precomputed at construction.
const PRECOMPUTED: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffFunction<T: Real> {
    horizon: T,
    width: T,
    /// `∫₀¹ ψ`.
    mass: T,
    /// `P_k` with `ψ^{(k)} = P_k/q^{2k}·ψ`, `q = s(1−s)`.
    numerators: Arc<Vec<Poly<T>>>,
}

pub fn cutoff_theta<T: Real>(horizon: T) -> Result<CutoffFunction<T>, LabError> {
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(LabError::NonPositiveHorizon(horizon.to_f64().unwrap_or(f64::NAN)));
    }
    let mut numerators = vec![Poly::one()];
    while numerators.len() <= PRECOMPUTED {
        let next = next_numerator(numerators.last().unwrap(), numerators.len() - 1);
        numerators.push(next);
    }
    Ok(CutoffFunction {
        horizon,
        width: horizon / T::from_f64_lossy(4.0),
        mass: bump_integral(T::zero(), T::one()),
        numerators: Arc::new(numerators),
    })
}

fn q_poly<T: Real>() -> (Poly<T>, Poly<T>) {
    let q = Poly::new(vec![T::zero(), T::one(), -T::one()]);
    let dq = q.derivative();
    (q, dq)
}

/// `P_{k+1} = P_k′q² − 2k·P_k·q′q + q′P_k`.
fn next_numerator<T: Real>(p: &Poly<T>, k: usize) -> Poly<T> {
    let (q, dq) = q_poly::<T>();
    let two_k = T::from_f64_lossy(2.0 * k as f64);
    p.derivative() * q.clone() * q.clone() - (p.clone() * dq.clone() * q).scale(&two_k) + dq * p.clone()
}

/// `ψ(s)`, zero outside `(0, 1)`.
pub fn bump<T: Real>(s: T) -> T {
    if s <= T::zero() || s >= T::one() {
        return T::zero();
    }
    (-(s * (T::one() - s)).recip()).exp()
}

fn bump_integral<T: Real>(a: T, b: T) -> T {
    if b <= a {
        return T::zero();
    }
    let eps = T::epsilon() * T::from_f64_lossy(2e-2);
    adaptive_simpson(&bump, a, b, eps, 30)
}

fn adaptive_simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, eps: T, depth: u32) -> T {
    let two = T::from_f64_lossy(2.0);
    let c = (a + b) / two;
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = simpson(a, b, fa, fc, fb);
    refine(f, a, b, fa, fb, fc, whole, eps, depth)
}

fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::from_f64_lossy(6.0) * (fa + T::from_f64_lossy(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, fa: T, fb: T, fc: T, whole: T, eps: T, depth: u32) -> T {
    let two = T::from_f64_lossy(2.0);
    let c = (a + b) / two;
    let (d, e) = ((a + c) / two, (c + b) / two);
    let (fd, fe) = (f(d), f(e));
    let left = simpson(a, c, fa, fd, fc);
    let right = simpson(c, b, fc, fe, fb);
    let delta = left + right - whole;
    let fifteen = T::from_f64_lossy(15.0);
    if depth == 0 || delta.abs() <= fifteen * eps {
        left + right + delta / fifteen
    } else {
        refine(f, a, c, fa, fc, fd, left, eps / two, depth - 1)
            + refine(f, c, b, fc, fb, fe, right, eps / two, depth - 1)
    }
}

impl<T: Real> CutoffFunction<T> {
    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// Length `T/4` of the transition interval.
    pub fn width(&self) -> T {
        self.width
    }

    pub fn value(&self, t: T) -> T {
        let s = t / self.width;
        if s <= T::zero() {
            T::one()
        } else if s >= T::one() {
            T::zero()
        } else if s > T::from_f64_lossy(0.5) {
            bump_integral(s, T::one()) / self.mass
        } else {
            T::one() - bump_integral(T::zero(), s) / self.mass
        }
    }

    /// `θ^{(k)}(t)`; exactly zero outside `(0, T/4)` for `k ≥ 1`.
    pub fn derivative(&self, t: T, k: usize) -> T {
        if k == 0 {
            return self.value(t);
        }
        let s = t / self.width;
        if s <= T::zero() || s >= T::one() {
            return T::zero();
        }
        -self.bump_derivative(s, k - 1) / (self.mass * self.width.powi(k as i32))
    }

    /// `θ(t), θ′(t), ..., θ^{(order)}(t)`.
    pub fn derivatives(&self, t: T, order: usize) -> Vec<T> {
        (0..=order).map(|k| self.derivative(t, k)).collect()
    }

    /// Derivatives of the reflected cutoff `t ↦ θ(T − t)`.
    pub fn reflected_derivatives(&self, t: T, order: usize) -> Vec<T> {
        let mut d = self.derivatives(self.horizon - t, order);
        for (k, x) in d.iter_mut().enumerate() {
            if k % 2 == 1 {
                *x = -*x;
            }
        }
        d
    }

    /// `ψ^{(k)}(s)` for `s ∈ (0, 1)`.
    fn bump_derivative(&self, s: T, k: usize) -> T {
        let q = s * (T::one() - s);
        // ψ / q^{2k} without overflow near the endpoints
        let factor = (-(q.recip()) - T::from_f64_lossy(2.0 * k as f64) * q.ln()).exp();
        let p = if k < self.numerators.len() {
            self.numerators[k].eval(&s)
        } else {
            let mut p = self.numerators.last().unwrap().clone();
            for j in self.numerators.len() - 1..k {
                p = next_numerator(&p, j);
            }
            p.eval(&s)
        };
        if factor.is_zero() {
            T::zero()
        } else {
            p * factor
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn plateaus_and_transition() {
        let th = cutoff_theta(4.0f64).unwrap();
        assert_eq!(th.value(-1.0), 1.0);
        assert_eq!(th.value(0.0), 1.0);
        assert_eq!(th.value(2.0), 0.0);
        assert_eq!(th.value(1.0), 0.0);
        let mid = th.value(0.5);
        assert!(mid > 0.0 && mid < 1.0);
        assert!((mid - 0.5).abs() < 1e-14, "symmetric bump gives 1/2 at the midpoint");
        assert_eq!(th.derivative(-1.0, 1), 0.0);
        assert_eq!(th.derivative(2.0, 1), 0.0);
        for i in 1..100 {
            let v = th.value(i as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn nonpositive_horizon_rejected() {
        assert!(matches!(cutoff_theta(0.0), Err(LabError::NonPositiveHorizon(_))));
        assert!(matches!(cutoff_theta(-1.0), Err(LabError::NonPositiveHorizon(_))));
        assert!(cutoff_theta(f64::NAN).is_err());
    }

    #[test]
    fn derivatives_match_central_differences() {
        let th = cutoff_theta(4.0f64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for k in 1..=4 {
            let grid: Vec<f64> = (1..400).map(|i| i as f64 / 400.0).collect();
            let scale = grid.iter().map(|&t| th.derivative(t, k).abs()).fold(0.0, f64::max);
            for _ in 0..100 {
                let t: f64 = rng.gen_range(0.0..1.0);
                let fd = (th.derivative(t + h, k - 1) - th.derivative(t - h, k - 1)) / (2.0 * h);
                let exact = th.derivative(t, k);
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(scale),
                    "order {k} at {t}: {exact} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn reflection_flips_odd_orders() {
        let th = cutoff_theta(4.0f64).unwrap();
        let r = th.reflected_derivatives(3.75, 3);
        let d = th.derivatives(0.25, 3);
        assert_eq!(r, vec![d[0], -d[1], d[2], -d[3]]);
        assert_eq!(th.reflected_derivatives(5.0, 1), vec![1.0, 0.0]);
    }

    #[test]
    fn single_precision_instantiation() {
        let th = cutoff_theta(4.0f32).unwrap();
        assert_eq!(th.value(-1.0), 1.0);
        assert!((th.value(0.5) - 0.5).abs() < 1e-5);
    }
}
