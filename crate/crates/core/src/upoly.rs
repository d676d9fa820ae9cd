//! Dense univariate polynomials over an arbitrary [`Ring`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{inv_mod, mul_mod, ExactDiv, Field, GcdDomain, Ring, RESIDUE_PRIME};

/// `coeffs[k]` is the coefficient of `x^k`. The vector never ends in a zero,
/// so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`
    pub fn monomial(c: R, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.times(k))
                .collect(),
        )
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Pseudo-remainder `prem(self, d)`: the remainder of `lc(d)^(deg self - deg d + 1)·self`
    /// divided by `d`, computed without leaving the coefficient ring.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-remainder by zero polynomial");
        let lc = d.lead().unwrap().clone();
        let mut r = self.clone();
        let Some(rd) = r.degree() else {
            return r;
        };
        if rd < dd {
            return r;
        }
        let mut steps = rd - dd + 1;
        while let Some(deg) = r.degree() {
            if deg < dd {
                break;
            }
            let c = r.lead().unwrap().clone();
            r = r.scale(&lc) - d.scale(&c).shift(deg - dd);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&lc.pow(steps));
        }
        r
    }
}

impl<R: ExactDiv> Poly<R> {
    /// Quotient and remainder by long division; `None` if some leading
    /// coefficient division is not exact in `R`.
    fn long_division(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lc = d.lead().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![R::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(deg) = rem.degree() {
            if deg < dd {
                break;
            }
            let q = rem.lead().unwrap().div_exact(lc)?;
            rem = rem - d.scale(&q).shift(deg - dd);
            if rem.degree() == Some(deg) {
                return None;
            }
            quot[deg - dd] = q;
        }
        Some((Poly::new(quot), rem))
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        self.long_division(d).expect("division over a field is always exact")
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv()),
        }
    }

    /// Monic GCD by the Euclidean remainder sequence over the field, each
    /// remainder made monic.
    ///
    /// Subject to intermediate coefficient growth; [`crate::gcd`] has the
    /// production route.
    pub fn gcd_euclid(&self, other: &Self) -> Self {
        if self.coprime_by_residue(other) {
            return Self::one();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `true` proves the two are coprime: their images mod
    /// [`RESIDUE_PRIME`] keep their degrees and have a constant GCD there.
    /// `false` decides nothing.
    pub fn coprime_by_residue(&self, other: &Self) -> bool {
        let image = |p: &Self| -> Option<Vec<u64>> {
            let v = p.coeffs.iter().map(F::residue).collect::<Option<Vec<u64>>>()?;
            (v.last().is_some_and(|&c| c != 0)).then_some(v)
        };
        let (Some(mut a), Some(mut b)) = (image(self), image(other)) else {
            return false;
        };
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let inv = inv_mod(*b.last().unwrap());
            while a.len() >= b.len() {
                let q = mul_mod(*a.last().unwrap(), inv);
                let shift = a.len() - b.len();
                for (k, &bk) in b.iter().enumerate() {
                    let t = mul_mod(q, bk);
                    a[shift + k] = (a[shift + k] + RESIDUE_PRIME - t) % RESIDUE_PRIME;
                }
                while a.last() == Some(&0) {
                    a.pop();
                }
            }
            if a.is_empty() {
                return false;
            }
            std::mem::swap(&mut a, &mut b);
        }
        true
    }
}

impl<R: ExactDiv> ExactDiv for Poly<R> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.long_division(rhs)?;
        r.is_zero().then_some(q)
    }
}

impl<F: Field> GcdDomain for Poly<F> {
    fn gcd(&self, other: &Self) -> Self {
        self.gcd_euclid(other)
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly { coeffs: vec![R::one()] }
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<'a, R: Ring> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Self) -> Poly<R> {
        self.clone() + rhs.clone()
    }
}

impl<'a, R: Ring> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Self) -> Poly<R> {
        self.clone() - rhs.clone()
    }
}

impl<'a, R: Ring> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Poly<R> {
        self.clone() * rhs.clone()
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})*x")?,
                _ => write!(f, "({c:?})*x^{k}")?,
            }
        }
        Ok(())
    }
}
