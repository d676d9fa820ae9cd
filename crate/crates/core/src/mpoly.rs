//! Sparse multivariate polynomials in ξ1..ξd, τ and the formal symbol Π.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::ratfunc::RatFunc;
use crate::scalar::{gaussian, Embed, ExactDiv, GaussianDisplay, GaussianRational, Real, Ring};
use crate::upoly::Poly;
use crate::UPoly;

/// Indeterminates of the operator ring, plus the scalar symbol Π.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// Spatial variable ξk, `k >= 1` (printed `xk`).
    Xi(usize),
    /// Time variable τ (printed `t`).
    Tau,
    /// Formal π (printed `pi`).
    Pi,
}

impl Var {
    fn slot(self) -> usize {
        match self {
            Var::Pi => 0,
            Var::Tau => 1,
            Var::Xi(k) => {
                assert!(k >= 1, "spatial variables are 1-based");
                k + 1
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Xi(k) => write!(f, "x{k}"),
            Var::Tau => write!(f, "t"),
            Var::Pi => write!(f, "pi"),
        }
    }
}

/// Exponent vector laid out as `[Π, τ, ξ1, ξ2, ...]` with trailing zeros
/// trimmed, so the layout does not depend on the spatial dimension.
///
/// Ordered graded-lexicographically: total degree first, then
/// ξ1 > ξ2 > ... > τ > Π.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        let mut m = Monomial::one();
        m.set(v, exp);
        m
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.get(v.slot()).copied().unwrap_or(0)
    }

    fn set(&mut self, v: Var, exp: u32) {
        let s = v.slot();
        if self.0.len() <= s {
            self.0.resize(s + 1, 0);
        }
        self.0[s] = exp;
        self.trim();
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    /// Highest ξ index present (0 if none).
    pub fn max_xi(&self) -> usize {
        self.0.len().saturating_sub(2)
    }

    /// Sum of all exponents, Π included.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sum of the ξ and τ exponents.
    pub fn operator_degree(&self) -> u32 {
        self.weight() - self.exp(Var::Pi)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Monomial(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + other.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        let mut m = Monomial(out);
        m.trim();
        Some(m)
    }

    /// Variables with nonzero exponent, in print order (ξ1.., τ, Π).
    pub fn factors(&self) -> Vec<(Var, u32)> {
        let mut out: Vec<(Var, u32)> = (2..self.0.len())
            .filter(|&s| self.0[s] > 0)
            .map(|s| (Var::Xi(s - 1), self.0[s]))
            .collect();
        for v in [Var::Tau, Var::Pi] {
            if self.exp(v) > 0 {
                out.push((v, self.exp(v)));
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| {
            let n = self.0.len().max(other.0.len()).max(2);
            let key = |m: &Monomial| -> Vec<u32> {
                let mut k: Vec<u32> = (2..n).map(|s| m.0.get(s).copied().unwrap_or(0)).collect();
                k.push(m.exp(Var::Tau));
                k.push(m.exp(Var::Pi));
                k
            };
            key(self).cmp(&key(other))
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> MPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v, 1))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Total degree in ξ1..ξd and τ; Π is a scalar and does not count.
    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::operator_degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn max_xi(&self) -> usize {
        self.terms.keys().map(Monomial::max_xi).max().unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn depends_on_xi(&self) -> bool {
        self.max_xi() > 0
    }

    /// Free of ξ and τ (Π allowed).
    pub fn is_scalar(&self) -> bool {
        !self.depends_on_xi() && !self.depends_on(Var::Tau)
    }

    /// Coefficients of `v^0, v^1, ...`, each free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly<C>> {
        let deg = match self.degree_in(v) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![MPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut rest = m.clone();
            rest.set(v, 0);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Reassemble `Σ coeffs[k]·v^k`.
    pub fn from_coefficients_in(v: Var, coeffs: &[MPoly<C>]) -> Self {
        let mut p = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                p.add_term(m.mul(&Monomial::var(v, k as u32)), a.clone());
            }
        }
        p
    }

    /// Replace every ξk by zero.
    pub fn at_zero_xi(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.max_xi() == 0)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<C: Ring + Embed> MPoly<C> {
    /// Floating-point value at `ξ = xi`, `τ = tau`, Π = π.
    pub fn eval<T: Real>(&self, xi: &[Complex<T>], tau: Complex<T>) -> Complex<T> {
        let pi = Complex::new(T::PI(), T::zero());
        let mut acc = Complex::new(T::zero(), T::zero());
        for (m, c) in &self.terms {
            let mut t = c.embed::<T>();
            for (v, e) in m.factors() {
                let base = match v {
                    Var::Xi(k) => xi
                        .get(k - 1)
                        .copied()
                        .unwrap_or_else(|| Complex::new(T::nan(), T::zero())),
                    Var::Tau => tau,
                    Var::Pi => pi,
                };
                t = t * base.powu(e);
            }
            acc = acc + t;
        }
        acc
    }
}

impl MPoly<GaussianRational> {
    /// `p(2πi·v, τ)` collected as a polynomial in τ over `Q(i)(Π)`:
    /// each ξk is replaced by `2iΠ·v_k` with Π kept symbolic.
    pub fn substitute_mode(&self, v: &[BigRational]) -> Result<UPoly, AlgebraError> {
        if self.max_xi() > v.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: v.len(),
                found: self.max_xi(),
            });
        }
        let two_i = gaussian(BigRational::zero(), BigRational::from_integer(2.into()));
        let mut by_tau: BTreeMap<u32, Poly<GaussianRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut pi_exp = m.exp(Var::Pi) as usize;
            for (k, vk) in v.iter().enumerate() {
                let e = m.exp(Var::Xi(k + 1)) as usize;
                if e == 0 {
                    continue;
                }
                let scalar = two_i.clone() * gaussian(vk.clone(), BigRational::zero());
                coeff *= scalar.pow(e);
                pi_exp += e;
            }
            let contribution = Poly::monomial(coeff, pi_exp);
            let slot = by_tau.entry(m.exp(Var::Tau)).or_insert_with(Poly::zero);
            *slot = slot.clone() + contribution;
        }
        let deg = by_tau.keys().next_back().map_or(0, |d| *d as usize + 1);
        let mut coeffs = vec![RatFunc::zero(); deg];
        for (k, p) in by_tau {
            coeffs[k as usize] = RatFunc::from_poly(p);
        }
        Ok(Poly::new(coeffs))
    }
}

impl<C: Ring> Zero for MPoly<C> {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring> One for MPoly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Ring> Add for MPoly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Ring> Neg for MPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        MPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Ring> Sub for MPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Ring> Mul for MPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: ExactDiv> ExactDiv for MPoly<C> {
    /// Multivariate division by leading terms; exact quotients always
    /// reduce the leading term, so a non-divisible leading term proves
    /// inexactness.
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (lm, lc) = rhs.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm)?;
            let qc = c.div_exact(lc)?;
            let q = Self::term(qc, qm);
            rem = rem - rhs.clone() * q.clone();
            quot = quot + q;
        }
        Some(quot)
    }
}

/// Canonical text form, accepted back by [`crate::parse::parse_poly`].
impl fmt::Display for MPoly<GaussianRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let factors = m.factors();
            let negative = c.re < BigRational::zero() || (c.re.is_zero() && c.im < BigRational::zero());
            let (sign, mag) = if negative { ("-", -c.clone()) } else { ("+", c.clone()) };
            if idx > 0 {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || factors.is_empty() {
                parts.push(GaussianDisplay(&mag).to_string());
            }
            for (v, e) in factors {
                parts.push(if e == 1 { v.to_string() } else { format!("{v}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gaussian_int, rational};
    use crate::PiScalar;

    fn xi(k: usize) -> MPoly<GaussianRational> {
        MPoly::var(Var::Xi(k))
    }
    fn tau() -> MPoly<GaussianRational> {
        MPoly::var(Var::Tau)
    }
    fn c(re: i64, im: i64) -> MPoly<GaussianRational> {
        MPoly::constant(gaussian_int(re, im))
    }
    fn pic(re: i64, im: i64) -> PiScalar {
        PiScalar::constant(gaussian_int(re, im))
    }

    fn diffusion() -> MPoly<GaussianRational> {
        tau() - xi(1) * xi(1) - xi(2) * xi(2)
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::var(Var::Xi(1), 2);
        let b = Monomial::var(Var::Xi(1), 1).mul(&Monomial::var(Var::Tau, 1));
        let t3 = Monomial::var(Var::Tau, 3);
        let x2 = Monomial::var(Var::Xi(2), 1);
        let t = Monomial::var(Var::Tau, 1);
        let pi = Monomial::var(Var::Pi, 1);
        assert!(a > b);
        assert!(t3 > a);
        assert!(x2 > t);
        assert!(t > pi);
        assert!(pi > Monomial::one());
    }

    #[test]
    fn total_degree_excludes_pi() {
        assert_eq!(diffusion().total_degree(), Some(2));
        assert_eq!(MPoly::<GaussianRational>::zero().total_degree(), None);
        let p = xi(1).pow(3) * tau().pow(2) + xi(2);
        assert_eq!(p.total_degree(), Some(5));
        let q = MPoly::var(Var::Pi).pow(7) * tau();
        assert_eq!(q.total_degree(), Some(1));
    }

    #[test]
    fn substitute_diffusion_mode() {
        let got = diffusion().substitute_mode(&[rational(1, 1), rational(0, 1)]).unwrap();
        let pi = PiScalar::symbol();
        let expect = UPoly::x() + UPoly::constant(pic(4, 0) * pi.clone() * pi);
        assert_eq!(got, expect);
    }

    #[test]
    fn substitute_without_spatial_variables() {
        let got = tau().substitute_mode(&[rational(3, 7)]).unwrap();
        assert_eq!(got, UPoly::x());
    }

    #[test]
    fn substitute_half_integer_mode() {
        // ξ1τ + ξ2 at v = (1/2, 3) → (iΠ)τ + 6iΠ
        let p = xi(1) * tau() + xi(2);
        let got = p.substitute_mode(&[rational(1, 2), rational(3, 1)]).unwrap();
        let pi = PiScalar::symbol();
        let expect = UPoly::new(vec![pic(0, 6) * pi.clone(), pic(0, 1) * pi]);
        assert_eq!(got, expect);
    }

    #[test]
    fn substitute_dimension_mismatch() {
        let err = xi(3).substitute_mode(&[rational(1, 1)]).unwrap_err();
        assert_eq!(err, AlgebraError::DimensionMismatch { expected: 1, found: 3 });
    }

    #[test]
    fn exact_division() {
        let a = xi(1) + tau() * c(0, 1);
        let b = xi(2) * xi(2) - c(3, 0) * MPoly::var(Var::Pi);
        let prod = a.clone() * b.clone();
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.div_exact(&a), Some(b));
        assert_eq!((prod + c(1, 0)).div_exact(&a), None);
        assert_eq!(a.div_exact(&MPoly::zero()), None);
    }

    #[test]
    fn coefficients_roundtrip() {
        let p = xi(1) * tau().pow(2) + c(2, 1) * tau() + xi(2);
        let cs = p.coefficients_in(Var::Tau);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], xi(2));
        assert_eq!(cs[2], xi(1));
        assert_eq!(MPoly::from_coefficients_in(Var::Tau, &cs), p);
    }

    #[test]
    fn display_canonical() {
        assert_eq!(diffusion().to_string(), "-x1^2 - x2^2 + t");
        let p = (xi(1) + c(0, 1) * tau()).pow(2);
        assert_eq!(p.to_string(), "x1^2 + 2*i*x1*t - t^2");
        assert_eq!(MPoly::<GaussianRational>::zero().to_string(), "0");
        assert_eq!(c(-3, 0).to_string(), "-3");
    }
}
