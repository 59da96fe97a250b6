//! Real-root counting: Sturm chains and the Hermite-form signature, both in
//! exact rational arithmetic. The two routes are independent and are
//! cross-checked against each other wherever polynomials are scanned.

use super::rational::{sign, RationalPolynomial};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Sturm,
    Hermite,
}

/// Root-count verdict for one polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootCountReport {
    /// Distinct real roots.
    pub n_real: usize,
    /// Distinct complex roots (real ones included).
    pub n_distinct_complex: usize,
    /// Whether the counts survived coefficient perturbation (true for
    /// exact inputs counted directly).
    pub stable: bool,
    pub method: CountMethod,
}

/// The signed Euclidean remainder chain of (p, p'). The final element is a
/// greatest common divisor of p and p'.
pub(crate) fn sturm_chain(poly: &RationalPolynomial) -> Vec<RationalPolynomial> {
    let mut chain = vec![poly.sign_normalized(), poly.derivative().sign_normalized()];
    loop {
        let last = &chain[chain.len() - 1];
        if last.is_zero() {
            chain.pop();
            return chain;
        }
        if chain[chain.len() - 1].degree() == 0 {
            return chain;
        }
        let r = chain[chain.len() - 2].rem(last).neg().sign_normalized();
        if r.is_zero() {
            return chain;
        }
        chain.push(r);
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut prev = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// Sign variations of the chain at a finite point.
pub(crate) fn chain_variations_at(chain: &[RationalPolynomial], x: &BigRational) -> usize {
    variations(chain.iter().map(|p| p.sign_at(x)))
}

/// Count distinct real roots via the Sturm chain: the variation drop from
/// -inf to +inf. Works for polynomials with multiple roots as well; the
/// chain's final element exposes gcd(p, p'), from which the number of
/// distinct complex roots follows.
pub fn sturm_count(poly: &RationalPolynomial) -> Result<RootCountReport> {
    if poly.is_zero() {
        return Err(Error::Poly("root counting needs a nonzero polynomial".into()));
    }
    if poly.degree() == 0 {
        return Ok(RootCountReport {
            n_real: 0,
            n_distinct_complex: 0,
            stable: true,
            method: CountMethod::Sturm,
        });
    }
    let chain = sturm_chain(poly);
    let v_neg = variations(chain.iter().map(|p| p.sign_at_infinity(false)));
    let v_pos = variations(chain.iter().map(|p| p.sign_at_infinity(true)));
    let gcd_deg = chain.last().map_or(0, |g| g.degree());
    Ok(RootCountReport {
        n_real: v_neg.saturating_sub(v_pos),
        n_distinct_complex: poly.degree() - gcd_deg,
        stable: true,
        method: CountMethod::Sturm,
    })
}

/// Power sums s_0 .. s_{2d-2} of the roots via Newton's identities,
/// counted with multiplicity.
fn power_sums(poly: &RationalPolynomial) -> Vec<BigRational> {
    let d = poly.degree();
    let lc = poly.leading().expect("nonzero polynomial").clone();
    // monic coefficients c_0 .. c_d with c_d = 1
    let c: Vec<BigRational> = (0..=d).map(|i| poly.coeff(i) / lc.clone()).collect();
    let mut s: Vec<BigRational> = Vec::with_capacity(2 * d - 1);
    s.push(BigRational::from_integer(BigInt::from(d)));
    for k in 1..=(2 * d - 2).max(1) {
        let mut acc = BigRational::zero();
        if k <= d {
            acc -= &c[d - k] * BigRational::from_integer(BigInt::from(k));
            for i in 1..k {
                acc -= &c[d - i] * &s[k - i];
            }
        } else {
            for i in 1..=d {
                acc -= &c[d - i] * &s[k - i];
            }
        }
        s.push(acc);
    }
    s
}

/// Count roots through the Hermite form: the symmetric matrix of power
/// sums H[i][j] = s_{i+j}. Its rank is the number of distinct complex
/// roots and its signature the number of distinct real roots. Inertia is
/// computed by exact symmetric (congruence) elimination; zero pivots are
/// repaired by symmetric exchanges, or by a symmetric row/column addition
/// when the whole remaining diagonal vanishes.
pub fn hermite_signature_count(poly: &RationalPolynomial) -> Result<RootCountReport> {
    if poly.is_zero() {
        return Err(Error::Poly("root counting needs a nonzero polynomial".into()));
    }
    let d = poly.degree();
    if d == 0 {
        return Ok(RootCountReport {
            n_real: 0,
            n_distinct_complex: 0,
            stable: true,
            method: CountMethod::Hermite,
        });
    }
    let s = power_sums(poly);
    let mut h: Vec<Vec<BigRational>> =
        (0..d).map(|i| (0..d).map(|j| s[i + j].clone()).collect()).collect();

    let mut pos = 0usize;
    let mut neg = 0usize;
    for k in 0..d {
        if h[k][k].is_zero() {
            // prefer a nonzero diagonal entry further down
            if let Some(p) = (k + 1..d).find(|&p| !h[p][p].is_zero()) {
                h.swap(k, p);
                for row in h.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some((i, j)) = (k..d)
                .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
                .find(|&(i, j)| !h[i][j].is_zero())
            {
                // all remaining diagonals vanish: fold row/col j into i,
                // a congruence that makes h[i][i] = 2 h[i][j] != 0
                for col in 0..d {
                    let v = h[j][col].clone();
                    h[i][col] += v;
                }
                for row in h.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                if i != k {
                    h.swap(k, i);
                    for row in h.iter_mut() {
                        row.swap(k, i);
                    }
                }
            } else {
                break; // remaining block is zero: rank found
            }
        }
        let pivot = h[k][k].clone();
        match sign(&pivot) {
            1 => pos += 1,
            -1 => neg += 1,
            _ => unreachable!("pivot arranged to be nonzero"),
        }
        for r in k + 1..d {
            if h[r][k].is_zero() {
                continue;
            }
            let factor = &h[r][k] / &pivot;
            for col in k..d {
                let sub = &factor * &h[k][col];
                h[r][col] -= sub;
            }
        }
        // keep symmetry of the trailing block explicit
        for r in k + 1..d {
            for col in k + 1..r {
                h[col][r] = h[r][col].clone();
            }
            h[r][k] = BigRational::zero();
        }
    }

    Ok(RootCountReport {
        n_real: pos.saturating_sub(neg),
        n_distinct_complex: pos + neg,
        stable: true,
        method: CountMethod::Hermite,
    })
}
