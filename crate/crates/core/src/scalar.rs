//! Scalar traits shared by the exact and the floating-point halves of the crate.
//!
//! Everything algebraic in this crate is generic over a [`Ring`] (polynomials,
//! matrices, fraction-free elimination) or a [`Field`] (Euclidean division,
//! Smith form). The exact pipeline instantiates these with
//! [`GaussianRational`] and [`crate::PiScalar`]; the numeric lab uses
//! `Complex<f32>` / `Complex<f64>` through the [`Real`] trait.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Commutative ring with identity, closed under owned arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// `self + self + ...` (`k` times), without requiring a conversion from integers.
    fn times(&self, k: usize) -> Self {
        let mut acc = Self::zero();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc + base.clone();
            }
            base = base.clone() + base;
            k >>= 1;
        }
        acc
    }

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Send
        + Sync
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Integral domain in which exact quotients can be computed.
///
/// `div_exact(a, b)` returns `Some(q)` with `q * b == a` when such a `q`
/// exists, and `None` otherwise (including division by zero).
pub trait ExactDiv: Ring {
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// A field: every nonzero element is invertible.
pub trait Field: ExactDiv + Div<Output = Self> {
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Image in `Z/pZ` for `p = RESIDUE_PRIME`, with `i` sent to a square
    /// root of −1. `None` when a denominator vanishes mod `p` or the type
    /// has no such image.
    fn residue(&self) -> Option<u64> {
        None
    }
}

/// A prime `≡ 1 (mod 4)` just below 2^61.
pub const RESIDUE_PRIME: u64 = 2_305_843_009_213_693_921;
const RESIDUE_SQRT_M1: u64 = 583_529_827_753_931_384;

pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RESIDUE_PRIME as u128) as u64
}

pub fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, RESIDUE_PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

fn rational_residue(q: &BigRational) -> Option<u64> {
    let p = BigInt::from(RESIDUE_PRIME);
    let reduce = |z: &BigInt| {
        let r = z % &p;
        (if r < BigInt::zero() { r + &p } else { r }).to_u64().unwrap()
    };
    let d = reduce(q.denom());
    (d != 0).then(|| mul_mod(reduce(q.numer()), inv_mod(d)))
}

macro_rules! field_impl {
    ($($t:ty),*) => {$(
        impl ExactDiv for $t {
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                if rhs.is_zero() {
                    None
                } else {
                    Some(self.clone() / rhs.clone())
                }
            }
        }
    )*};
}

field_impl!(BigRational, Complex<BigRational>, f32, f64, Complex<f32>, Complex<f64>);

impl Field for f32 {}
impl Field for f64 {}
impl Field for Complex<f32> {}
impl Field for Complex<f64> {}

impl Field for BigRational {
    fn residue(&self) -> Option<u64> {
        rational_residue(self)
    }
}

impl Field for Complex<BigRational> {
    fn residue(&self) -> Option<u64> {
        let re = rational_residue(&self.re)?;
        let im = rational_residue(&self.im)?;
        Some((re as u128 + mul_mod(im, RESIDUE_SQRT_M1) as u128).rem_euclid(RESIDUE_PRIME as u128) as u64)
    }
}

/// A GCD domain: `gcd` returns a canonical (normalized) greatest common divisor.
pub trait GcdDomain: ExactDiv {
    fn gcd(&self, other: &Self) -> Self;
}

/// Exact complex rational `re + im·i`; both parts are kept reduced by `BigRational`.
pub type GaussianRational = Complex<BigRational>;

pub fn gaussian(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

pub fn gaussian_int(re: i64, im: i64) -> GaussianRational {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Floating-point scalar for the numeric lab (`f32` or `f64`).
pub trait Real:
    num_traits::Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub fn rational_to_real<T: Real>(q: &BigRational) -> T {
    T::from_f64_lossy(q.to_f64().unwrap_or(f64::NAN))
}

/// Numeric image of an exact scalar, with the formal symbol Π sent to π.
pub trait Embed {
    fn embed<T: Real>(&self) -> Complex<T>;
}

impl Embed for BigRational {
    fn embed<T: Real>(&self) -> Complex<T> {
        Complex::new(rational_to_real(self), T::zero())
    }
}

impl Embed for GaussianRational {
    fn embed<T: Real>(&self) -> Complex<T> {
        Complex::new(rational_to_real(&self.re), rational_to_real(&self.im))
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Parser-compatible rendering of a Gaussian rational.
///
/// Real numbers print bare (`-3/2`), pure imaginaries as `5/2*i`, and
/// mixed values parenthesized: `(1/2+3*i)`.
pub struct GaussianDisplay<'a>(pub &'a GaussianRational);

impl Display for GaussianDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        let write_imag = |f: &mut fmt::Formatter<'_>, im: &BigRational, leading: bool| {
            if im.is_one() {
                write!(f, "{}i", if leading { "" } else { "+" })
            } else if (-im.clone()).is_one() {
                write!(f, "-i")
            } else {
                if !leading && im.is_positive() {
                    write!(f, "+")?;
                }
                fmt_rational(im, f)?;
                write!(f, "*i")
            }
        };
        match (z.re.is_zero(), z.im.is_zero()) {
            (_, true) => fmt_rational(&z.re, f),
            (true, false) => write_imag(f, &z.im, true),
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&z.re, f)?;
                write_imag(f, &z.im, false)?;
                write!(f, ")")
            }
        }
    }
}
