//! Exact-style polynomial algebra over the computed even polynomials:
//! quantization to dyadic rationals, real-root counting by two independent
//! routes, discriminants through a remainder sequence and through the
//! closed biquadratic form, and global minimization over s = t^2 >= 0 for
//! positivity margins.
//!
//! Root counting operates on the quantized polynomial; verdicts about the
//! underlying float polynomial carry a stability flag computed by
//! perturbing every coefficient within its propagated error.

mod counting;
mod rational;
mod resultant;

pub use counting::{hermite_signature_count, sturm_count, CountMethod, RootCountReport};
pub use rational::RationalPolynomial;
pub use resultant::{discriminant, resultant};

use crate::coeffs::EvenPolynomial;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rational::{rational_from_f64, rational_to_f64};

/// Quantize an even polynomial to a rational polynomial in t (degree 4n,
/// even powers only). Coefficients are rounded to the dyadic grid 2^{-b}
/// with 2^{-b} <= 10^{-digits}.
pub fn quantize(poly: &EvenPolynomial, digits: u32) -> RationalPolynomial {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize;
    let scale = BigRational::from_integer(BigInt::from(1u8) << bits);
    let mut coeffs = vec![BigRational::zero(); 2 * poly.c.len() - 1];
    for (m, &(value, _)) in poly.c.iter().enumerate() {
        let exact = rational_from_f64(value);
        coeffs[2 * m] = (exact * &scale).round() / &scale;
    }
    RationalPolynomial::new(coeffs)
}

/// Closed-form discriminant of a2 t^4 + a1 t^2 + a0:
/// 16 a2 a0 (a1^2 - 4 a2 a0)^2.
pub fn discriminant_biquadratic(a0: f64, a1: f64, a2: f64) -> f64 {
    let inner = a1 * a1 - 4.0 * a2 * a0;
    16.0 * a2 * a0 * inner * inner
}

/// Degeneracy gap of the n = 1 polynomial. `gap` = a1 + 2 sqrt(a2 a0)
/// vanishes exactly in the configuration that would refute positivity;
/// `sym_gap` = |a1| - 2 sqrt(a2 a0) vanishes together with the
/// discriminant.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryGap {
    pub gap: f64,
    pub sym_gap: f64,
}

pub fn corollary_iv_gap(a0: f64, a1: f64, a2: f64) -> Result<CorollaryGap> {
    if a0 < 0.0 || a2 < 0.0 {
        return Err(Error::Domain(format!(
            "corollary gap needs a0, a2 >= 0 (got a0 = {a0}, a2 = {a2}); \
             negative values indicate an upstream numerical failure"
        )));
    }
    let root = 2.0 * (a2 * a0).sqrt();
    Ok(CorollaryGap { gap: a1 + root, sym_gap: a1.abs() - root })
}

/// Result of minimizing an even polynomial over s = t^2 >= 0.
#[derive(Debug, Clone, Copy)]
pub struct MinNonneg {
    pub s_min: f64,
    pub value: f64,
    /// Set when the leading coefficient is not positive and the minimum is
    /// only meaningful over a bounded window.
    pub bounded_window: bool,
}

/// Global minimum of the polynomial in s over s >= 0, from the real
/// critical points of the s-derivative (isolated exactly, refined in
/// floating point) plus the endpoint s = 0.
pub fn min_nonneg_s(poly: &EvenPolynomial) -> MinNonneg {
    let values: Vec<f64> = poly.c.iter().map(|&(v, _)| v).collect();
    let rational =
        RationalPolynomial::new(values.iter().map(|&v| rational_from_f64(v)).collect());
    let deriv = rational.derivative();

    let leading = *values.last().unwrap_or(&0.0);
    let bounded_window = leading <= 0.0;

    // Cauchy-style bound covering the roots of both the polynomial and its
    // derivative, padded.
    let cauchy = |p: &RationalPolynomial| -> f64 {
        match p.leading() {
            None => 1.0,
            Some(lc) => {
                let lc = rational_to_f64(&lc.abs());
                let max_ratio = p
                    .coeffs()
                    .iter()
                    .map(|c| rational_to_f64(&c.abs()) / lc)
                    .fold(0.0f64, f64::max);
                (1.0 + max_ratio) * 1.25 + 1.0
            }
        }
    };
    let bound = cauchy(&rational).max(cauchy(&deriv));

    let mut candidates = vec![0.0f64];
    candidates.extend(isolate_roots_in(&deriv, 0.0, bound));
    if bounded_window {
        candidates.push(bound);
    }

    let mut s_min = 0.0;
    let mut value = f64::INFINITY;
    for &s in &candidates {
        let v = poly.eval_s(s);
        if v < value {
            value = v;
            s_min = s;
        }
    }
    MinNonneg { s_min, value, bounded_window }
}

/// Real roots of `poly` in (lo, hi]: Sturm-chain isolation with exact
/// rational arithmetic, then floating-point bisection refinement.
fn isolate_roots_in(poly: &RationalPolynomial, lo: f64, hi: f64) -> Vec<f64> {
    if poly.is_zero() || poly.degree() == 0 {
        return Vec::new();
    }
    let chain = counting::sturm_chain(poly);
    let mut out = Vec::new();
    let a = rational_from_f64(lo);
    let b = rational_from_f64(hi);
    let va = counting::chain_variations_at(&chain, &a);
    let vb = counting::chain_variations_at(&chain, &b);
    split_interval(poly, &chain, a, b, va, vb, &mut out, 0);
    out.sort_by(f64::total_cmp);
    out
}

#[allow(clippy::too_many_arguments)]
fn split_interval(
    poly: &RationalPolynomial,
    chain: &[RationalPolynomial],
    a: BigRational,
    b: BigRational,
    va: usize,
    vb: usize,
    out: &mut Vec<f64>,
    depth: usize,
) {
    let roots = va.saturating_sub(vb);
    if roots == 0 {
        return;
    }
    if roots == 1 {
        out.push(refine_root(poly, rational_to_f64(&a), rational_to_f64(&b)));
        return;
    }
    if depth > 128 {
        // clustered roots beyond refinement depth: report the midpoint
        out.push(0.5 * (rational_to_f64(&a) + rational_to_f64(&b)));
        return;
    }
    let mid = (&a + &b) / BigRational::from_integer(2.into());
    let vm = counting::chain_variations_at(chain, &mid);
    split_interval(poly, chain, a, mid.clone(), va, vm, out, depth + 1);
    split_interval(poly, chain, mid, b, vm, vb, out, depth + 1);
}

/// Bisection on the sign of the exact polynomial evaluated in floating
/// point; the bracket (a, b] contains exactly one sign change.
fn refine_root(poly: &RationalPolynomial, mut a: f64, mut b: f64) -> f64 {
    let fa = poly.eval_f64(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = poly.eval_f64(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Count roots of the quantized polynomial and probe the stability of the
/// verdict under coefficient perturbations within the propagated errors:
/// exhaustively over all sign patterns for quartics, by seeded sampling for
/// higher degrees.
pub fn count_with_stability(
    poly: &EvenPolynomial,
    digits: u32,
    method: CountMethod,
) -> Result<RootCountReport> {
    let count = |p: &EvenPolynomial| -> Result<RootCountReport> {
        let q = quantize(p, digits);
        match method {
            CountMethod::Sturm => sturm_count(&q),
            CountMethod::Hermite => hermite_signature_count(&q),
        }
    };
    let base = count(poly)?;

    let n_coeffs = poly.c.len();
    let degree_t = 2 * (n_coeffs - 1);
    let perturbed_counts: Vec<RootCountReport> = if degree_t <= 4 {
        (0..(1usize << n_coeffs))
            .map(|mask| {
                let mut p = poly.clone();
                for (i, c) in p.c.iter_mut().enumerate() {
                    let sign = if mask & (1 << i) != 0 { 1.0 } else { -1.0 };
                    c.0 += sign * c.1;
                }
                count(&p)
            })
            .collect::<Result<_>>()?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
        (0..20)
            .map(|_| {
                let mut p = poly.clone();
                for c in p.c.iter_mut() {
                    c.0 += rng.gen_range(-1.0..=1.0) * c.1;
                }
                count(&p)
            })
            .collect::<Result<_>>()?
    };

    let stable = perturbed_counts
        .iter()
        .all(|r| r.n_real == base.n_real && r.n_distinct_complex == base.n_distinct_complex);
    Ok(RootCountReport { stable, ..base })
}

/// Agreement sweep between the Sturm and Hermite counters on random even
/// integer polynomials, deterministic for a given seed.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checked: usize,
    pub disagreements: usize,
    pub first_disagreement: Option<String>,
}

pub fn selftest(n_polys: usize, max_degree_t: usize, seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0;
    let mut first = None;
    let mut checked = 0;
    while checked < n_polys {
        let half_deg = rng.gen_range(1..=max_degree_t / 2);
        let mut coeffs = vec![0i64; 2 * half_deg + 1];
        for m in 0..=half_deg {
            coeffs[2 * m] = rng.gen_range(-9..=9);
        }
        if coeffs[2 * half_deg] == 0 {
            coeffs[2 * half_deg] = 1;
        }
        let p = RationalPolynomial::from_integers(&coeffs);
        checked += 1;

        let s = sturm_count(&p)?;
        let h = hermite_signature_count(&p)?;
        let even_ok = s.n_real % 2 == 0 || coeffs[0] == 0;
        if s.n_real != h.n_real || s.n_distinct_complex != h.n_distinct_complex || !even_ok {
            disagreements += 1;
            if first.is_none() {
                first = Some(format!(
                    "coeffs {:?}: sturm ({}, {}), hermite ({}, {})",
                    coeffs, s.n_real, s.n_distinct_complex, h.n_real, h.n_distinct_complex
                ));
            }
        }
    }
    Ok(SelftestReport { checked, disagreements, first_disagreement: first })
}

/// Float image of an exact rational, for reports.
pub fn rational_as_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::build_f;
    use crate::moments::build_moment_table;

    fn even_poly(c: &[f64]) -> EvenPolynomial {
        EvenPolynomial {
            tau: 0.0,
            n: ((c.len() - 1) / 2).max(1) as u32,
            c: c.iter().map(|&v| (v, 0.0)).collect(),
        }
    }

    #[test]
    fn quantize_structure_and_round_trip() {
        let p = even_poly(&[1.0, 2.0, 1.0]);
        let q = quantize(&p, 12);
        // 1 + 2 t^2 + t^4
        assert_eq!(q.degree(), 4);
        assert_eq!(q.coeff(0), BigRational::from_integer(1.into()));
        assert_eq!(q.coeff(1), BigRational::zero());
        assert_eq!(q.coeff(2), BigRational::from_integer(2.into()));
        assert_eq!(q.coeff(4), BigRational::from_integer(1.into()));

        // exact dyadic inputs survive unchanged
        let p = even_poly(&[0.375, -1.5, 2.0]);
        let q = quantize(&p, 14);
        assert_eq!(rational_to_f64(&q.coeff(0)), 0.375);
        assert_eq!(rational_to_f64(&q.coeff(2)), -1.5);
    }

    #[test]
    fn quantize_of_computed_polynomial_tracks_float_eval() {
        let table = build_moment_table(0.25, 4, 1e-11).unwrap();
        let f = build_f(&table, 1).unwrap();
        let q = quantize(&f, 12);
        let t = 3.0;
        let diff = (q.eval_f64(t) - f.eval_t(t)).abs();
        assert!(diff <= 1e-10, "quantized eval off by {diff}");
    }

    #[test]
    fn biquadratic_discriminant_matches_subresultant_route() {
        assert_eq!(discriminant_biquadratic(1.0, 0.0, 1.0), 256.0);
        assert_eq!(discriminant_biquadratic(1.0, -2.0, 1.0), 0.0);
        assert_eq!(discriminant_biquadratic(2.0, 3.0, 1.0), 32.0);

        let table = build_moment_table(0.25, 4, 1e-11).unwrap();
        let f = build_f(&table, 1).unwrap();
        let closed = discriminant_biquadratic(f.c[0].0, f.c[1].0, f.c[2].0);
        let exact = discriminant(&quantize(&f, 14)).unwrap();
        let exact_f = rational_as_f64(&exact);
        assert!(
            (closed - exact_f).abs() <= 1e-9 * (1.0 + exact_f.abs()),
            "closed {closed} vs subresultant {exact_f}"
        );
        assert!(closed >= 0.0 && exact_f >= 0.0);
    }

    #[test]
    fn minimum_over_nonnegative_s() {
        let m = min_nonneg_s(&even_poly(&[2.0, -2.0, 1.0])); // s^2 - 2s + 2
        assert!((m.s_min - 1.0).abs() <= 1e-9);
        assert!((m.value - 1.0).abs() <= 1e-12);
        assert!(!m.bounded_window);

        let m = min_nonneg_s(&even_poly(&[1.0, 0.0, 1.0])); // s^2 + 1, endpoint
        assert_eq!(m.s_min, 0.0);
        assert_eq!(m.value, 1.0);

        // computed polynomial: positive minimum, matching a dense t-grid
        let table = build_moment_table(0.25, 4, 1e-11).unwrap();
        let f = build_f(&table, 1).unwrap();
        let m = min_nonneg_s(&f);
        assert!(m.value > 0.0);
        let grid_min = (0..=5000)
            .map(|i| f.eval_t(i as f64 * 0.01))
            .fold(f64::INFINITY, f64::min);
        assert!(m.value <= grid_min + 1e-15);
        assert!((m.value - grid_min).abs() <= 1e-6 * grid_min.abs() + 1e-12);
    }

    #[test]
    fn negative_leading_coefficient_is_flagged() {
        let m = min_nonneg_s(&even_poly(&[1.0, 4.0, -0.5]));
        assert!(m.bounded_window);
        assert!(m.value < 0.0); // window endpoint exposes the downward branch
    }

    #[test]
    fn corollary_gap_examples() {
        let g = corollary_iv_gap(1.0, 2.0, 1.0).unwrap();
        assert_eq!(g.gap, 4.0);
        let g = corollary_iv_gap(1.0, -2.0, 1.0).unwrap();
        assert_eq!(g.gap, 0.0);
        assert!(corollary_iv_gap(-1.0, 0.0, 1.0).is_err());

        // computed n = 1 polynomial: positive gap, consistent with a zero
        // real-root count
        let table = build_moment_table(0.3, 4, 1e-11).unwrap();
        let f = build_f(&table, 1).unwrap();
        let g = corollary_iv_gap(f.c[0].0, f.c[1].0, f.c[2].0).unwrap();
        assert!(g.gap > 0.0);
        let count = sturm_count(&quantize(&f, 14)).unwrap();
        assert_eq!(count.n_real, 0);
    }

    #[test]
    fn stability_flag_detects_knife_edge() {
        // (s - 1)^2 with a constant-term error wide enough to change the
        // real-root count
        let mut p = even_poly(&[1.0, -2.0, 1.0]);
        p.c[0].1 = 1e-3;
        let r = count_with_stability(&p, 14, CountMethod::Sturm).unwrap();
        assert!(!r.stable);

        // a comfortably positive polynomial stays stable
        let mut p = even_poly(&[2.0, -2.0, 1.0]);
        for c in p.c.iter_mut() {
            c.1 = 1e-9;
        }
        let r = count_with_stability(&p, 14, CountMethod::Sturm).unwrap();
        assert!(r.stable);
        assert_eq!(r.n_real, 0);
    }

    #[test]
    fn selftest_methods_agree_on_random_polynomials() {
        let report = selftest(200, 8, 0x7ab1e5).unwrap();
        assert_eq!(report.checked, 200);
        assert_eq!(
            report.disagreements, 0,
            "first: {:?}",
            report.first_disagreement
        );
    }

    #[test]
    fn perturbation_with_higher_degree_uses_sampling() {
        let mut p = even_poly(&[2.0, -2.0, 1.0, 0.1, 0.05]);
        for c in p.c.iter_mut() {
            c.1 = 1e-10;
        }
        let r = count_with_stability(&p, 14, CountMethod::Hermite).unwrap();
        assert!(r.stable);
    }
}
