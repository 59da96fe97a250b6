//! Resultants and discriminants through a primitive polynomial remainder
//! sequence with exact cofactor tracking.
//!
//! Each step applies the identity
//!
//!   Res(A, B) = (-1)^{deg A deg B} lc(B)^{deg A - deg R} Res(B, R),  R = A mod B,
//!
//! with R obtained as a pseudo-remainder divided by its integer content, so
//! polynomial coefficients stay primitive throughout; the removed factors
//! accumulate in a single rational cofactor. This keeps intermediate
//! coefficient growth under control at degree 16 while remaining correct
//! for defective remainder sequences (consecutive degree drops larger than
//! one), which biquadratic polynomials produce routinely.

use super::rational::RationalPolynomial;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone)]
struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::gcd(g, c.clone());
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_part(&self, content: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / content).collect())
    }

    /// Pseudo-remainder: lc(B)^{deg A - deg B + 1} A mod B, computed without
    /// leaving the integers. The multiplier count is fixed at
    /// deg A - deg B + 1 regardless of intermediate cancellations, which the
    /// resultant cofactor bookkeeping relies on.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree();
        let dlc = divisor.lc().clone();
        let mut rem = self.coeffs.clone();
        for k in (0..=self.degree() - dd).rev() {
            let top = rem[dd + k].clone();
            for c in rem.iter_mut() {
                *c *= &dlc;
            }
            for i in 0..=dd {
                let sub = &top * &divisor.coeffs[i];
                rem[k + i] -= sub;
            }
            debug_assert!(rem[dd + k].is_zero());
        }
        rem.truncate(dd);
        Self::new(rem)
    }
}

/// Clear denominators: returns (integer polynomial, scale) with
/// poly = int_poly / scale.
fn to_integer(poly: &RationalPolynomial) -> (IntPoly, BigInt) {
    let mut lcm = BigInt::one();
    for c in poly.coeffs() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let coeffs = poly
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    (IntPoly::new(coeffs), lcm)
}

fn big_pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::Pow::pow(b, e)
}

/// Resultant of two rational polynomials, exact.
pub fn resultant(p: &RationalPolynomial, q: &RationalPolynomial) -> Result<BigRational> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::Poly("resultant needs nonzero polynomials".into()));
    }
    let (pi, ps) = to_integer(p);
    let (qi, qs) = to_integer(q);
    // Res(A/ps, B/qs) = ps^{-deg B} qs^{-deg A} Res(A, B)
    let correction = BigRational::new(
        BigInt::one(),
        big_pow(&ps, qi.degree()) * big_pow(&qs, pi.degree()),
    );
    Ok(correction * resultant_int(pi, qi))
}

fn resultant_int(mut a: IntPoly, mut b: IntPoly) -> BigRational {
    let mut acc = BigRational::one();
    if a.degree() < b.degree() {
        if (a.degree() * b.degree()) % 2 == 1 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return BigRational::zero();
        }
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc * BigRational::from_integer(big_pow(b.lc(), da));
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigRational::zero();
        }
        // r = lc(b)^{da - db + 1} (a mod b) up to the content we now strip
        let cont = {
            let c = r.content();
            if r.lc().is_negative() { -c } else { c }
        };
        let rp = r.primitive_part(&cont);
        let dr = rp.degree();

        let mut step = BigRational::from_integer(big_pow(b.lc(), da - dr));
        // undo the pseudo-remainder multiplier and the stripped content:
        // Res(b, m * rp) = m^{deg b} Res(b, rp), m = cont / lc(b)^{da-db+1}
        step *= BigRational::new(big_pow(&cont, db), big_pow(b.lc(), (da - db + 1) * db));
        if (da * db) % 2 == 1 {
            step = -step;
        }
        acc *= step;
        a = b;
        b = rp;
    }
}

/// Discriminant: (-1)^{d(d-1)/2} Res(p, p') / lc(p), exact.
pub fn discriminant(poly: &RationalPolynomial) -> Result<BigRational> {
    if poly.is_zero() {
        return Err(Error::Poly("discriminant of the zero polynomial".into()));
    }
    let d = poly.degree();
    if d == 0 {
        return Err(Error::Poly("discriminant needs degree >= 1".into()));
    }
    if d == 1 {
        return Ok(BigRational::one());
    }
    let res = resultant(poly, &poly.derivative())?;
    let lc = poly.leading().expect("nonzero").clone();
    let mut disc = res / lc;
    if (d * (d - 1) / 2) % 2 == 1 {
        disc = -disc;
    }
    Ok(disc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c)
    }

    fn as_f64(r: &BigRational) -> f64 {
        num_traits::ToPrimitive::to_f64(r).unwrap()
    }

    #[test]
    fn resultant_of_linears() {
        // Res(x - a, x - b) = b - a ... sign convention: product of
        // differences lc-normalized; check via (x-1, x-2) => 1*` (2-1)?
        let r = resultant(&poly(&[-1, 1]), &poly(&[-2, 1])).unwrap();
        assert_eq!(as_f64(&r).abs(), 1.0);
        // shared root => 0
        let r = resultant(&poly(&[-1, 1]), &poly(&[1, -2, 1])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn discriminant_of_quadratic_is_b2_minus_4ac() {
        // a x^2 + b x + c -> b^2 - 4 a c ... discriminant definition divides
        // by lc: (b^2 - 4ac) for monic-normalized convention Res/lc
        for (a, b, c) in [(1i64, 3, 1), (2, 5, 1), (1, 2, 1)] {
            let d = discriminant(&poly(&[c, b, a])).unwrap();
            assert_eq!(as_f64(&d), (b * b - 4 * a * c) as f64, "({a},{b},{c})");
        }
    }

    #[test]
    fn discriminant_of_known_quartics() {
        // t^4 + 1 -> 256 (defective remainder sequence)
        assert_eq!(as_f64(&discriminant(&poly(&[1, 0, 0, 0, 1])).unwrap()), 256.0);
        // (t^2 - 1)^2 -> 0
        assert!(discriminant(&poly(&[1, 0, -2, 0, 1])).unwrap().is_zero());
        // t^4 + 3 t^2 + 2 -> closed biquadratic form 16*2*(9-8)^2 = 32
        assert_eq!(as_f64(&discriminant(&poly(&[2, 0, 3, 0, 1])).unwrap()), 32.0);
    }

    #[test]
    fn discriminant_scaling_law() {
        // Discr(k p) = k^{2d-2} Discr(p)
        let p = poly(&[4, 0, -5, 0, 1]);
        let k = BigRational::from_integer(3.into());
        let scaled = p.scale(&k);
        let d1 = discriminant(&p).unwrap();
        let d2 = discriminant(&scaled).unwrap();
        let k_pow: BigRational = num_traits::Pow::pow(&k, 6u32);
        assert_eq!(d2, d1 * k_pow);
    }

    #[test]
    fn zero_and_constant_rejected() {
        assert!(discriminant(&RationalPolynomial::zero()).is_err());
        assert!(discriminant(&poly(&[7])).is_err());
    }
}
