//! Dense univariate polynomials over Q, ascending coefficient order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with exact rational coefficients. The zero polynomial has an
/// empty coefficient vector; otherwise the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean remainder self mod divisor, exact over Q.
    pub fn rem(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let dlc = divisor.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let rd = rem.len() - 1;
            let factor = rem[rd].clone() / dlc.clone();
            if !factor.is_zero() {
                for i in 0..=dd {
                    let idx = rd - dd + i;
                    let sub = &factor * &divisor.coeffs[i];
                    rem[idx] -= sub;
                }
            }
            rem.pop();
        }
        Self::new(rem)
    }

    /// Scale so the leading coefficient has absolute value 1 (sign kept).
    /// Keeps Sturm-chain coefficients from growing without affecting signs.
    pub fn sign_normalized(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&(BigRational::one() / lc.abs())),
        }
    }

    /// Sign of the value at x: -1, 0, or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign(&self.eval(x))
    }

    /// Sign of the limit toward +inf or -inf.
    pub fn sign_at_infinity(&self, positive: bool) -> i32 {
        match self.leading() {
            None => 0,
            Some(lc) => {
                let s = sign_big(lc);
                if positive || self.degree() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

pub fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_big(x: &BigRational) -> i32 {
    sign(x)
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Exact dyadic rational equal to the given finite f64.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_integers(c)
    }

    #[test]
    fn construction_normalizes_trailing_zeros() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert!(poly(&[0, 0]).is_zero());
    }

    #[test]
    fn remainder_matches_hand_computation() {
        // (x^3 - 1) mod (x - 1) = 0; (x^3 + 1) mod (x - 1) = 2
        let d = poly(&[-1, 1]);
        assert!(poly(&[-1, 0, 0, 1]).rem(&d).is_zero());
        let r = poly(&[1, 0, 0, 1]).rem(&d);
        assert_eq!(r, poly(&[2]));
    }

    #[test]
    fn derivative_and_eval() {
        let p = poly(&[4, 0, -5, 0, 1]); // t^4 - 5 t^2 + 4
        assert_eq!(p.derivative(), poly(&[0, -10, 0, 4]));
        assert_eq!(p.eval(&BigRational::from_integer(2.into())), BigRational::zero());
        assert_eq!(p.eval_f64(3.0), 40.0);
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = 0.1f64 + 0.2f64;
        let r = rational_from_f64(x);
        assert_eq!(rational_to_f64(&r), x);
    }
}
