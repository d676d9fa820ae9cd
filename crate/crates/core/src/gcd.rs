//! GCD of univariate polynomials in τ over `K(Π)`.
//!
//! Coefficients are first cleared to polynomials in Π, so the inputs live
//! in `K[Π][τ]`. The subresultant remainder sequence is run over that ring
//! and the primitive part of the last nonzero remainder is returned, made
//! monic over `K(Π)`. The plain Euclidean algorithm over the fraction field
//! ([`Poly::gcd_euclid`]) computes the same result and serves as the oracle.

use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::ratfunc::RatFunc;
use crate::scalar::{Field, GcdDomain};
use crate::upoly::Poly;

/// Monic GCD of the content of `p` (its coefficients' GCD).
pub fn content<D: GcdDomain>(p: &Poly<D>) -> D {
    p.coeffs().iter().fold(D::zero(), |g, c| g.gcd(c))
}

pub fn primitive_part<D: GcdDomain>(p: &Poly<D>) -> Poly<D> {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = content(p);
    p.map(|a| a.div_exact(&c).expect("content divides every coefficient"))
}

/// Primitive GCD over `D[x]` by the subresultant PRS.
pub fn subresultant_gcd<D: GcdDomain>(a: &Poly<D>, b: &Poly<D>) -> Poly<D> {
    let (mut a, mut b) = match (a.degree(), b.degree()) {
        (None, _) => return primitive_part(b),
        (_, None) => return primitive_part(a),
        (Some(da), Some(db)) if da >= db => (a.clone(), b.clone()),
        _ => (b.clone(), a.clone()),
    };
    let mut g = D::one();
    let mut h = D::one();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            break;
        }
        if r.is_constant() {
            return Poly::one();
        }
        let divisor = g.clone() * h.pow(delta);
        a = b;
        b = r.map(|c| c.div_exact(&divisor).expect("subresultant division is exact"));
        g = a.lead().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h-update is exact")
        };
    }
    primitive_part(&b)
}

fn lcm<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let g = a.gcd_euclid(b);
    (a.clone() * b.clone()).div_rem(&g).0.monic()
}

/// Multiply through by the LCM of the coefficient denominators.
pub fn clear_denominators<F: Field>(p: &Poly<RatFunc<F>>) -> Poly<Poly<F>> {
    let l = p.coeffs().iter().fold(
        Poly::one(),
        |acc, c| if c.is_polynomial() { acc } else { lcm(&acc, c.denom()) },
    );
    p.map(|c| {
        if l.is_one() {
            c.numer().clone()
        } else {
            c.numer().clone() * l.div_rem(c.denom()).0
        }
    })
}

pub fn lift<F: Field>(p: &Poly<Poly<F>>) -> Poly<RatFunc<F>> {
    p.map(|c| RatFunc::from_poly(c.clone()))
}

/// Monic GCD of a nonempty list of polynomials over `K(Π)`, where zero
/// inputs are ignored.
///
/// Degree zero means the inputs have no common complex root once Π is
/// specialized to π.
pub fn upoly_gcd<F: Field>(fs: &[Poly<RatFunc<F>>]) -> Result<Poly<RatFunc<F>>, AlgebraError> {
    let mut acc: Option<Poly<Poly<F>>> = None;
    for f in fs.iter().filter(|f| !f.is_zero()) {
        let cleared = primitive_part(&clear_denominators(f));
        acc = Some(match acc {
            None => cleared,
            Some(g) if g.is_constant() => g,
            Some(g) => subresultant_gcd(&g, &cleared),
        });
    }
    let g = acc.ok_or(AlgebraError::AllZero)?;
    Ok(lift(&g).monic())
}

/// Same contract as [`upoly_gcd`], by plain Euclid over the fraction field.
pub fn upoly_gcd_euclid<F: Field>(fs: &[Poly<RatFunc<F>>]) -> Result<Poly<RatFunc<F>>, AlgebraError> {
    let g = fs.iter().fold(Poly::zero(), |g: Poly<RatFunc<F>>, f| g.gcd_euclid(f));
    if g.is_zero() {
        Err(AlgebraError::AllZero)
    } else {
        Ok(g)
    }
}
