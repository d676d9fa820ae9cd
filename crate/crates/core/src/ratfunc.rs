//! Univariate rational functions over a field, used as the scalar field
//! `Q(i)(Π)` where the indeterminate is the formal symbol Π standing for π.
//!
//! Π is transcendental over `Q(i)`, so ranks and GCDs computed with Π
//! kept symbolic agree with the same computations over `C` at Π = π.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Embed, ExactDiv, Field, GaussianDisplay, GaussianRational, Real};
use crate::upoly::Poly;

/// `numer / denom` with `denom` monic and `gcd(numer, denom) = 1`.
///
/// The representation is canonical, so structural equality coincides with
/// equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    numer: Poly<F>,
    denom: Poly<F>,
}

/// Elements of `Q(i)(Π)`.
pub type PiScalar = RatFunc<GaussianRational>;

impl<F: Field> RatFunc<F> {
    /// Normalizes `numer / denom`. Panics if `denom` is zero.
    pub fn new(numer: Poly<F>, denom: Poly<F>) -> Self {
        assert!(!denom.is_zero(), "rational function with zero denominator");
        if numer.is_zero() {
            return Self::zero();
        }
        if denom.is_constant() {
            let c = denom.lead().unwrap().inv();
            return RatFunc {
                numer: numer.scale(&c),
                denom: Poly::one(),
            };
        }
        let g = numer.gcd_euclid(&denom);
        let (numer, denom) = if g.is_constant() {
            (numer, denom)
        } else {
            (numer.div_rem(&g).0, denom.div_rem(&g).0)
        };
        let c = denom.lead().unwrap().inv();
        RatFunc {
            numer: numer.scale(&c),
            denom: denom.scale(&c),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            numer: p,
            denom: Poly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The symbol itself (Π for [`PiScalar`]).
    pub fn symbol() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numer(&self) -> &Poly<F> {
        &self.numer
    }

    pub fn denom(&self) -> &Poly<F> {
        &self.denom
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_constant()
    }

    /// Value at a point of the coefficient field; `None` at a pole.
    pub fn eval(&self, at: &F) -> Option<F> {
        let d = self.denom.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.numer.eval(at) / d)
        }
    }
}

impl RatFunc<GaussianRational> {
    /// Value at Π = π in floating point.
    pub fn eval_pi<T: Real>(&self) -> Complex<T> {
        let pi = Complex::new(T::PI(), T::zero());
        let horner = |p: &Poly<GaussianRational>| {
            p.coeffs()
                .iter()
                .rev()
                .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * pi + c.embed::<T>())
        };
        horner(&self.numer) / horner(&self.denom)
    }
}

impl Embed for PiScalar {
    fn embed<T: Real>(&self) -> Complex<T> {
        self.eval_pi()
    }
}

impl<F: Field> Zero for RatFunc<F> {
    fn zero() -> Self {
        RatFunc {
            numer: Poly::zero(),
            denom: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

impl<F: Field> One for RatFunc<F> {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_polynomial() && rhs.is_polynomial() {
            return Self::from_poly(self.numer + rhs.numer);
        }
        if self.denom == rhs.denom {
            return Self::new(self.numer + rhs.numer, self.denom);
        }
        // only the common part of the denominators can cancel
        let g = self.denom.gcd_euclid(&rhs.denom);
        if g.is_constant() {
            let numer = self.numer * rhs.denom.clone() + rhs.numer * self.denom.clone();
            if numer.is_zero() {
                return Self::zero();
            }
            return RatFunc {
                numer,
                denom: self.denom * rhs.denom,
            };
        }
        let b = self.denom.div_rem(&g).0;
        let d = rhs.denom.div_rem(&g).0;
        let numer = self.numer * d.clone() + rhs.numer * b.clone();
        Self::new(numer, b * d * g)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RatFunc {
            numer: -self.numer,
            denom: self.denom,
        }
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return Self::from_poly(self.numer * rhs.numer);
        }
        let (a, d) = cancel(self.numer, rhs.denom);
        let (c, b) = cancel(rhs.numer, self.denom);
        RatFunc {
            numer: a * c,
            denom: b * d,
        }
    }
}

/// Removes the common factor of a numerator and a monic denominator.
fn cancel<F: Field>(n: Poly<F>, d: Poly<F>) -> (Poly<F>, Poly<F>) {
    if d.is_constant() {
        return (n, d);
    }
    let g = n.gcd_euclid(&d);
    if g.is_constant() {
        (n, d)
    } else {
        (n.div_rem(&g).0, d.div_rem(&g).0)
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero in rational function field");
        let c = rhs.numer.lead().unwrap().inv();
        self * RatFunc {
            numer: rhs.denom.scale(&c),
            denom: rhs.numer.scale(&c),
        }
    }
}

impl<F: Field> ExactDiv for RatFunc<F> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self.clone() / rhs.clone())
    }
}

impl<F: Field> Field for RatFunc<F> {}

fn fmt_pi_poly(p: &Poly<GaussianRational>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        // later terms with a plainly negative coefficient print as `- |c|`
        let negative = (c.im.is_zero() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative());
        let flipped;
        let c = if !first && negative {
            write!(f, " - ")?;
            flipped = -c.clone();
            &flipped
        } else {
            if !first {
                write!(f, " + ")?;
            }
            c
        };
        first = false;
        match k {
            0 => write!(f, "{}", GaussianDisplay(c))?,
            _ => {
                if (-c.clone()).is_one() {
                    write!(f, "-")?;
                } else if !c.is_one() {
                    write!(f, "{}*", GaussianDisplay(c))?;
                }
                if k == 1 {
                    write!(f, "pi")?
                } else {
                    write!(f, "pi^{k}")?
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            fmt_pi_poly(&self.numer, f)
        } else {
            write!(f, "(")?;
            fmt_pi_poly(&self.numer, f)?;
            write!(f, ")/(")?;
            fmt_pi_poly(&self.denom, f)?;
            write!(f, ")")
        }
    }
}

/// Polynomial in `t` with `Q(i)(Π)` coefficients, highest power first:
/// `t + 4*pi^2`, `(1 + pi)*t^2 - t`.
impl fmt::Display for Poly<PiScalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let simple = c.denom.is_one() && c.numer.coeffs().iter().filter(|x| !x.is_zero()).count() == 1;
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, text),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            match (k, body.as_str()) {
                (0, _) if simple => write!(f, "{body}")?,
                (0, _) => write!(f, "({body})")?,
                (_, "1") => write!(f, "{var}")?,
                _ if simple => write!(f, "{body}*{var}")?,
                _ => write!(f, "({body})*{var}")?,
            }
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for RatFunc<F>
where
    Poly<F>: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]/[{:?}]", self.numer, self.denom)
    }
}
