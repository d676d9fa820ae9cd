//! Exponential-polynomial vector signals `Σ e^{λt}·p(t)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::LabError;
use crate::matrix::Matrix;
use crate::scalar::{Embed, Real};
use crate::upoly::Poly;
use crate::UPolyMatrix;

/// Polynomial in `t` (or in `d/dt`) with complex floating coefficients.
pub type CPoly<T> = Poly<Complex<T>>;

/// Floating-point image of an exact operator matrix, Π evaluated to π.
pub fn embed_operator<T: Real>(m: &UPolyMatrix) -> Matrix<CPoly<T>> {
    m.map(|p| p.map(|c| c.embed::<T>()))
}

pub(crate) fn operator_degree<T: Real>(op: &Matrix<CPoly<T>>) -> usize {
    op.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
}

/// `Σ_k op_k · x^{(k)}` from a stack of derivative values `derivs[k][j]`.
pub(crate) fn apply_to_derivatives<T: Real>(op: &Matrix<CPoly<T>>, derivs: &[Vec<Complex<T>>]) -> Vec<Complex<T>> {
    (0..op.rows())
        .map(|i| {
            let mut acc = Complex::zero();
            for (j, p) in op.row(i).iter().enumerate() {
                for (k, c) in p.coeffs().iter().enumerate() {
                    acc = acc + *c * derivs[k][j];
                }
            }
            acc
        })
        .collect()
}

/// `e^{rate·t}` times one polynomial per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm<T: Real> {
    pub rate: Complex<T>,
    pub coeffs: Vec<CPoly<T>>,
}

/// Finite sum of exponential-polynomial terms with pairwise distinct rates.
///
/// Rates are merged only when bitwise equal, so nearby exponents stay
/// separate terms.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolySignal<T: Real> {
    dim: usize,
    terms: Vec<ExpTerm<T>>,
}

impl<T: Real> ExpPolySignal<T> {
    pub fn zero(dim: usize) -> Self {
        ExpPolySignal { dim, terms: Vec::new() }
    }

    /// `amplitude·e^{rate·t}`.
    pub fn exponential(rate: Complex<T>, amplitude: Vec<Complex<T>>) -> Self {
        let mut s = Self::zero(amplitude.len());
        s.push(rate, amplitude.into_iter().map(Poly::constant).collect());
        s
    }

    /// Constant vector signal.
    pub fn constant(value: Vec<Complex<T>>) -> Self {
        Self::exponential(Complex::zero(), value)
    }

    /// Builder form of [`ExpPolySignal::add_term`].
    pub fn with_term(mut self, rate: Complex<T>, coeffs: Vec<CPoly<T>>) -> Result<Self, LabError> {
        self.add_term(rate, coeffs)?;
        Ok(self)
    }

    pub fn add_term(&mut self, rate: Complex<T>, coeffs: Vec<CPoly<T>>) -> Result<(), LabError> {
        if coeffs.len() != self.dim {
            return Err(LabError::SignalDimension {
                expected: self.dim,
                found: coeffs.len(),
            });
        }
        self.push(rate, coeffs);
        Ok(())
    }

    fn push(&mut self, rate: Complex<T>, coeffs: Vec<CPoly<T>>) {
        match self.terms.iter_mut().position(|t| t.rate == rate) {
            Some(i) => {
                let term = &mut self.terms[i];
                for (a, b) in term.coeffs.iter_mut().zip(coeffs) {
                    *a = a.clone() + b;
                }
                if term.coeffs.iter().all(|p| p.is_zero()) {
                    self.terms.remove(i);
                }
            }
            None => {
                if coeffs.iter().any(|p| !p.is_zero()) {
                    self.terms.push(ExpTerm { rate, coeffs });
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[ExpTerm<T>] {
        &self.terms
    }

    pub fn eval(&self, t: T) -> Vec<Complex<T>> {
        let tc = Complex::new(t, T::zero());
        let mut out = vec![Complex::zero(); self.dim];
        for term in &self.terms {
            let e = (term.rate * tc).exp();
            for (o, p) in out.iter_mut().zip(&term.coeffs) {
                *o = *o + e * p.eval(&tc);
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        self.map_terms(|rate, p| p.scale(&rate) + p.derivative())
    }

    /// Values of the signal and its first `order` derivatives at `t`.
    pub fn derivatives_at(&self, t: T, order: usize) -> Vec<Vec<Complex<T>>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut s = self.clone();
        for k in 0..=order {
            out.push(s.eval(t));
            if k < order {
                s = s.derivative();
            }
        }
        out
    }

    /// `op(d/dt)` applied to the signal, computed term by term as
    /// `e^{λt}·op(λ + d/dt)p`.
    pub fn apply(&self, op: &Matrix<CPoly<T>>) -> Result<Self, LabError> {
        if op.cols() != self.dim {
            return Err(LabError::SignalDimension {
                expected: op.cols(),
                found: self.dim,
            });
        }
        let deg = operator_degree(op);
        let mut out = Self::zero(op.rows());
        for term in &self.terms {
            // shifted[k][j] = (λ + d/dt)^k p_j
            let mut shifted = vec![term.coeffs.clone()];
            for k in 0..deg {
                let next = shifted[k]
                    .iter()
                    .map(|p| p.scale(&term.rate) + p.derivative())
                    .collect();
                shifted.push(next);
            }
            let coeffs = (0..op.rows())
                .map(|i| {
                    let mut acc = Poly::zero();
                    for (j, entry) in op.row(i).iter().enumerate() {
                        for (k, c) in entry.coeffs().iter().enumerate() {
                            acc = acc + shifted[k][j].scale(c);
                        }
                    }
                    acc
                })
                .collect();
            out.push(term.rate, coeffs);
        }
        Ok(out)
    }

    /// Apply an exact operator, Π evaluated to π.
    pub fn apply_exact(&self, op: &UPolyMatrix) -> Result<Self, LabError> {
        self.apply(&embed_operator(op))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LabError> {
        if other.dim != self.dim {
            return Err(LabError::SignalDimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.rate, t.coeffs.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LabError> {
        self.add(&other.scale(-Complex::new(T::one(), T::zero())))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map_terms(|_, p| p.scale(&c))
    }

    /// Largest coefficient modulus; zero exactly for the zero signal.
    pub fn coefficient_norm(&self) -> T {
        self.terms
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .flat_map(|p| p.coeffs().iter())
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    fn map_terms(&self, f: impl Fn(Complex<T>, &CPoly<T>) -> CPoly<T>) -> Self {
        let mut out = Self::zero(self.dim);
        for t in &self.terms {
            out.push(t.rate, t.coeffs.iter().map(|p| f(t.rate, p)).collect());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn sample() -> ExpPolySignal<f64> {
        // (t^2 + 1) e^{(0.5+i)t} in slot 0, 2 e^{-t} in slot 1, plus a constant
        ExpPolySignal::zero(2)
            .with_term(
                c(0.5, 1.0),
                vec![Poly::new(vec![c(1.0, 0.0), C::zero(), c(1.0, 0.0)]), Poly::zero()],
            )
            .unwrap()
            .with_term(c(-1.0, 0.0), vec![Poly::zero(), Poly::constant(c(2.0, 0.0))])
            .unwrap()
            .with_term(
                C::zero(),
                vec![Poly::constant(c(0.0, 3.0)), Poly::constant(c(1.0, 0.0))],
            )
            .unwrap()
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = sample();
        let ds = s.derivative();
        let h = 1e-5;
        for &t in &[-1.3, 0.0, 0.7, 2.5] {
            let fd: Vec<C> = s
                .eval(t + h)
                .iter()
                .zip(s.eval(t - h))
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect();
            for (a, b) in ds.eval(t).iter().zip(&fd) {
                assert!((a - b).norm() <= 1e-6 * a.norm().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn operator_application_matches_derivatives() {
        let s = sample();
        // [d/dt, 2; d²/dt², 0]
        let op = Matrix::new(
            2,
            2,
            vec![
                Poly::new(vec![C::zero(), c(1.0, 0.0)]),
                Poly::constant(c(2.0, 0.0)),
                Poly::new(vec![C::zero(), C::zero(), c(1.0, 0.0)]),
                Poly::zero(),
            ],
        );
        let applied = s.apply(&op).unwrap();
        for &t in &[-0.4, 1.1] {
            let d = s.derivatives_at(t, 2);
            let direct = apply_to_derivatives(&op, &d);
            for (a, b) in applied.eval(t).iter().zip(&direct) {
                assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn rates_merge_only_when_equal() {
        let a = ExpPolySignal::exponential(c(1.0, 0.0), vec![c(1.0, 0.0)]);
        let b = ExpPolySignal::exponential(c(1.0 + 1e-13, 0.0), vec![c(1.0, 0.0)]);
        assert_eq!(a.add(&b).unwrap().terms().len(), 2);
        assert_eq!(a.add(&a).unwrap().terms().len(), 1);
        assert!(a.sub(&a).unwrap().terms().is_empty());
        assert!(matches!(
            a.add(&ExpPolySignal::zero(2)),
            Err(LabError::SignalDimension { .. })
        ));
    }
}
