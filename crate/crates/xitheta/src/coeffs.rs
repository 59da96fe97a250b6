//! The coefficient families built from a moment table, and the even
//! polynomials they define:
//!
//!   f_{tau,n}(t) = sum_{k=0}^{2n-2} a_tau(k) t^{2k}
//!                  + a_{tau,n}(2n-1) t^{4n-2} + a_{tau,n}(2n) t^{4n}.
//!
//! Every coefficient is a fixed linear combination of the moments S_j, A_j
//! and the one-dimensional integrals; errors propagate as the weighted sum
//! of the component error estimates.

use crate::error::{Error, Result};
use crate::moments::MomentTable;

/// Exact factorial through u128, converted to f64. Exact in f64 up to 18!,
/// which covers every index used at desk scale (4n <= 16); past 2^53 the
/// conversion rounds within one ulp.
fn factorial(n: u32) -> f64 {
    let mut acc: u128 = 1;
    for i in 2..=n as u128 {
        acc *= i;
    }
    acc as f64
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// The numbers a_tau(0..2n-2) together with the two trailing coefficients.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub tau: f64,
    pub n: u32,
    pub a: Vec<(f64, f64)>,
    pub trail_odd: (f64, f64),
    pub trail_even: (f64, f64),
}

/// f_{tau,n} stored by coefficients in s = t^2: f(t) = sum c_m t^{2m},
/// degree 2n in s (4n in t when the leading coefficient is nonzero).
#[derive(Debug, Clone)]
pub struct EvenPolynomial {
    pub tau: f64,
    pub n: u32,
    pub c: Vec<(f64, f64)>,
}

impl EvenPolynomial {
    /// Value at t.
    pub fn eval_t(&self, t: f64) -> f64 {
        self.eval_s(t * t)
    }

    /// Value as a polynomial in s = t^2 (Horner).
    pub fn eval_s(&self, s: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &(v, _)| acc * s + v)
    }

    /// Propagated coefficient error at s >= 0.
    pub fn err_at_s(&self, s: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &(_, e)| acc * s + e)
    }

    pub fn degree_s(&self) -> usize {
        self.c.len() - 1
    }
}

/// a_tau(0) = [1 - (1/4 - tau^2) J+] [4 tau J+ - (1/4 - tau^2) J-log].
pub fn coeff_a0(table: &MomentTable) -> (f64, f64) {
    let tau = table.tau;
    let q = 0.25 - tau * tau;
    let (jp, jp_err) = table.jplus;
    let (jml, jml_err) = table.jminus_log;
    let left = 1.0 - q * jp;
    let right = 4.0 * tau * jp - q * jml;
    let left_err = q.abs() * jp_err;
    let right_err = 4.0 * tau.abs() * jp_err + q.abs() * jml_err;
    (left * right, left.abs() * right_err + right.abs() * left_err)
}

/// Linear combination of table entries: sum of weight * moment with
/// first-order error accumulation.
struct Combo {
    value: f64,
    err: f64,
}

impl Combo {
    fn new() -> Self {
        Self { value: 0.0, err: 0.0 }
    }
    fn add(&mut self, weight: f64, term: (f64, f64)) -> &mut Self {
        self.value += weight * term.0;
        self.err += weight.abs() * term.1;
        self
    }
    fn done(&self) -> (f64, f64) {
        (self.value, self.err)
    }
}

/// a_tau(k). For k = 1 the five-moment plus two-integral formula; for
/// k >= 2 the alternating five-term formula with (2k-4)! = 1 at k = 2.
pub fn coeff_a(table: &MomentTable, k: u32) -> Result<(f64, f64)> {
    let tau = table.tau;
    let q = 0.25 - tau * tau;
    let p = 0.25 + tau * tau;
    match k {
        0 => Ok(coeff_a0(table)),
        1 => {
            let mut c = Combo::new();
            c.add(8.0 * tau, table.s(0)?)
                .add(tau * q, table.s(2)?)
                .add(2.0 * p, table.a(0)?)
                .add(-q * q / 8.0, table.a(2)?)
                .add(-2.0, table.i2)
                .add(-1.0, table.i3);
            Ok(c.done())
        }
        _ => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let k = k as i32;
            let mut c = Combo::new();
            c.add(
                -sign * tau / (factorial((2 * k - 2) as u32) * pow2(2 * k - 5)),
                table.s((2 * k - 2) as u32)?,
            )
            .add(
                -sign * tau * q / (factorial((2 * k) as u32) * pow2(2 * k - 3)),
                table.s((2 * k) as u32)?,
            )
            .add(
                sign / (factorial((2 * k - 4) as u32) * pow2(2 * k - 4)),
                table.a((2 * k - 4) as u32)?,
            )
            .add(
                -sign * p / (factorial((2 * k - 2) as u32) * pow2(2 * k - 3)),
                table.a((2 * k - 2) as u32)?,
            )
            .add(
                sign * q * q / (factorial((2 * k) as u32) * pow2(2 * k)),
                table.a((2 * k) as u32)?,
            );
            Ok(c.done())
        }
    }
}

/// a_{tau,n}(2n-1): the trailing odd-index coefficient. For n = 1 this is
/// a_tau(1) without its A_2 term; for n >= 2 the four-term formula.
pub fn coeff_trail_odd(table: &MomentTable, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let tau = table.tau;
    let q = 0.25 - tau * tau;
    let p = 0.25 + tau * tau;
    if n == 1 {
        let mut c = Combo::new();
        c.add(8.0 * tau, table.s(0)?)
            .add(tau * q, table.s(2)?)
            .add(2.0 * p, table.a(0)?)
            .add(-2.0, table.i2)
            .add(-1.0, table.i3);
        return Ok(c.done());
    }
    let n = n as i32;
    let mut c = Combo::new();
    c.add(
        tau / (factorial((4 * n - 4) as u32) * pow2(4 * n - 7)),
        table.s((4 * n - 4) as u32)?,
    )
    .add(
        tau * q / (factorial((4 * n - 2) as u32) * pow2(4 * n - 5)),
        table.s((4 * n - 2) as u32)?,
    )
    .add(
        -1.0 / (factorial((4 * n - 6) as u32) * pow2(4 * n - 6)),
        table.a((4 * n - 6) as u32)?,
    )
    .add(
        p / (factorial((4 * n - 4) as u32) * pow2(4 * n - 5)),
        table.a((4 * n - 4) as u32)?,
    );
    Ok(c.done())
}

/// a_{tau,n}(2n) = A_{4n-4}(tau) / ((4n-4)! 2^{4n-4}); positive on
/// tau in (0, 1/2] and increasing in tau.
pub fn coeff_trail_even(table: &MomentTable, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let n = n as i32;
    let w = 1.0 / (factorial((4 * n - 4) as u32) * pow2(4 * n - 4));
    let (a, e) = table.a((4 * n - 4) as u32)?;
    Ok((w * a, w * e))
}

/// Assemble the full coefficient set for f_{tau,n}.
pub fn build_coefficient_set(table: &MomentTable, n: u32) -> Result<CoefficientSet> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let mut a = Vec::with_capacity((2 * n - 1) as usize);
    for k in 0..=(2 * n - 2) {
        a.push(coeff_a(table, k)?);
    }
    Ok(CoefficientSet {
        tau: table.tau,
        n,
        a,
        trail_odd: coeff_trail_odd(table, n)?,
        trail_even: coeff_trail_even(table, n)?,
    })
}

/// Build f_{tau,n} as an even polynomial in t (coefficients in s = t^2).
pub fn build_f(table: &MomentTable, n: u32) -> Result<EvenPolynomial> {
    let set = build_coefficient_set(table, n)?;
    let mut c = set.a;
    c.push(set.trail_odd);
    c.push(set.trail_even);
    Ok(EvenPolynomial { tau: table.tau, n, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::build_moment_table;
    use crate::xi;

    const TOL: f64 = 1e-11;

    #[test]
    fn a0_vanishes_at_tau_zero() {
        let table = build_moment_table(0.0, 2, TOL).unwrap();
        let (a0, err) = coeff_a0(&table);
        assert!(a0.abs() <= err.max(1e-11), "a0(0) = {a0}");
    }

    #[test]
    fn a0_positive_and_factor_bound() {
        // second factor > tau * (7.176026 / 4) * sum exp(-2 pi n^2)
        let theta_sum: f64 = (1..=3u32)
            .map(|n| (-2.0 * std::f64::consts::PI * (n * n) as f64).exp())
            .sum();
        for &tau in &[0.1, 0.25, 0.4] {
            let table = build_moment_table(tau, 2, TOL).unwrap();
            let (a0, _) = coeff_a0(&table);
            assert!(a0 > 0.0, "a0({tau}) = {a0}");
            let q = 0.25 - tau * tau;
            let second = 4.0 * tau * table.jplus.0 - q * table.jminus_log.0;
            assert!(
                second > tau * (7.176026 / 4.0) * theta_sum,
                "factor bound fails at tau = {tau}"
            );
        }
        // frozen from the independent high-precision run
        let table = build_moment_table(0.3, 2, TOL).unwrap();
        let (a0, _) = coeff_a0(&table);
        assert!((a0 - 0.02751782479725908).abs() <= 1e-10);
    }

    #[test]
    fn all_coefficients_vanish_at_tau_zero() {
        let table = build_moment_table(0.0, 8, TOL).unwrap();
        for k in 0..=2u32 {
            let (v, e) = coeff_a(&table, k).unwrap();
            assert!(v.abs() <= 10.0 * e.max(1e-12), "a_0({k}) = {v}");
        }
        let (v, e) = coeff_trail_odd(&table, 2).unwrap();
        assert!(v.abs() <= 10.0 * e.max(1e-12));
        let (v, e) = coeff_trail_even(&table, 1).unwrap();
        assert!(v.abs() <= 10.0 * e.max(1e-12));
        // the polynomial is degenerate at tau = 0: every computed
        // coefficient sits below its noise floor
        let f = build_f(&table, 1).unwrap();
        for &(v, e) in &f.c {
            assert!(v.abs() <= 10.0 * e.max(1e-12));
        }
    }

    #[test]
    fn coeff_a2_matches_independent_reassembly() {
        let tau = 0.3;
        let table = build_moment_table(tau, 4, TOL).unwrap();
        let (a2, err) = coeff_a(&table, 2).unwrap();
        // literal five-term formula at k = 2: (2k-2)! = 2, 2^{2k-5} = 1/2,
        // (2k)! = 24, 2^{2k-3} = 2, (2k-4)! = 1, 2^{2k-4} = 1, 2^{2k} = 16
        let q = 0.25 - tau * tau;
        let p = 0.25 + tau * tau;
        let oracle = -tau / (2.0 * 0.5) * table.s(2).unwrap().0
            - tau * q / (24.0 * 2.0) * table.s(4).unwrap().0
            + table.a(0).unwrap().0
            - p / (2.0 * 2.0) * table.a(2).unwrap().0
            + q * q / (24.0 * 16.0) * table.a(4).unwrap().0;
        assert!((a2 - oracle).abs() <= err + 1e-15);
    }

    #[test]
    fn trailing_odd_definitional_gaps() {
        // a_{tau,1}(1) - a_tau(1) = (q^2 / 8) A_2
        let table = build_moment_table(0.25, 4, TOL).unwrap();
        let q = 0.25 - 0.25 * 0.25;
        let gap = coeff_trail_odd(&table, 1).unwrap().0 - coeff_a(&table, 1).unwrap().0;
        let expect = q * q / 8.0 * table.a(2).unwrap().0;
        assert!((gap - expect).abs() <= 1e-14);

        // a_{tau,n}(2n-1) - a_tau(2n-1) = (q^2 / ((4n-2)! 2^{4n-2})) A_{4n-2} at n = 2
        let table = build_moment_table(0.3, 8, TOL).unwrap();
        let q = 0.25 - 0.3 * 0.3;
        let gap = coeff_trail_odd(&table, 2).unwrap().0 - coeff_a(&table, 3).unwrap().0;
        let expect = q * q / (720.0 * 64.0) * table.a(6).unwrap().0;
        assert!((gap - expect).abs() <= 1e-14);
    }

    #[test]
    fn trailing_even_structure() {
        let table = build_moment_table(0.25, 4, TOL).unwrap();
        // 0! * 2^0 = 1, so a_{tau,1}(2) is A_0 itself
        assert_eq!(coeff_trail_even(&table, 1).unwrap().0, table.a(0).unwrap().0);

        let mut prev = 0.0;
        for &tau in &[0.1, 0.3, 0.5] {
            let table = build_moment_table(tau, 2, TOL).unwrap();
            let (v, _) = coeff_trail_even(&table, 1).unwrap();
            assert!(v > prev, "a_{{tau,1}}(2) not increasing at tau = {tau}");
            prev = v;
        }
    }

    #[test]
    fn polynomial_structure() {
        let table = build_moment_table(0.3, 8, TOL).unwrap();
        let f1 = build_f(&table, 1).unwrap();
        assert_eq!(f1.c.len(), 3);
        assert_eq!(f1.degree_s(), 2);

        let f2 = build_f(&table, 2).unwrap();
        assert_eq!(f2.c.len(), 5);
        let set = build_coefficient_set(&table, 2).unwrap();
        assert_eq!(f2.c[0], set.a[0]);
        assert_eq!(f2.c[2], set.a[2]);
        assert_eq!(f2.c[3], set.trail_odd);
        assert_eq!(f2.c[4], set.trail_even);

        // capacity: n = 2 needs moments up to j = 6
        let small = build_moment_table(0.3, 2, TOL).unwrap();
        assert!(matches!(build_f(&small, 2), Err(Error::Capacity { .. })));
    }

    /// Independent reassembly of the truncated-cosine upper bound whose
    /// value is algebraically equal to f_{tau,n}(t).
    fn dominance_rhs(table: &MomentTable, n: u32, t: f64) -> f64 {
        let tau = table.tau;
        let q = 0.25 - tau * tau;
        let p = 0.25 + tau * tau;
        let t2 = t * t;
        let fact = |m: u32| -> f64 { (1..=m as u64).map(|i| i as f64).product() };
        let alt = |j_top: u32, which_s: bool| -> f64 {
            (0..=j_top)
                .map(|k| {
                    let m = if which_s {
                        table.s(2 * k).unwrap().0
                    } else {
                        table.a(2 * k).unwrap().0
                    };
                    (-1f64).powi(k as i32) * t.powi(2 * k as i32)
                        / (fact(2 * k) * 4f64.powi(k as i32))
                        * m
                })
                .sum()
        };
        let (a0, _) = coeff_a0(table);
        8.0 * tau * t2 * alt(2 * n - 2, true) - 8.0 * tau * q * alt(2 * n - 1, true)
            + (t2 * t2 + 2.0 * p * t2 + q * q) * alt(2 * n - 2, false)
            - 2.0 * t2 * table.i2.0
            - t2 * table.i3.0
            + 8.0 * tau * q * table.s(0).unwrap().0
            - q * q * table.a(0).unwrap().0
            + a0
    }

    #[test]
    fn polynomial_equals_truncation_identity() {
        let table = build_moment_table(0.3, 8, TOL).unwrap();
        for n in [1u32, 2] {
            let f = build_f(&table, n).unwrap();
            for &t in &[0.5, 2.0, 5.0] {
                let lhs = f.eval_t(t);
                let rhs = dominance_rhs(&table, n, t);
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()),
                    "n = {n}, t = {t}: {lhs} vs {rhs}"
                );
            }
        }
        // frozen cross-checks from the independent high-precision run
        let f1 = build_f(&table, 1).unwrap();
        assert!((f1.eval_t(2.0) - 0.02362352176322352).abs() <= 1e-9);
        let f2 = build_f(&table, 2).unwrap();
        assert!((f2.eval_t(2.0) - 0.02331500881184651).abs() <= 1e-9);
    }

    #[test]
    fn polynomial_dominates_gradient() {
        let tau = 0.3;
        let t = 2.0;
        let table = build_moment_table(tau, 8, TOL).unwrap();
        let (a0, _) = coeff_a0(&table);
        let (df, _) = xi::df_dtau(tau, t, &table, a0, 1e-12).unwrap();
        let f1 = build_f(&table, 1).unwrap();
        assert!(f1.eval_t(t) > df, "f = {}, dF = {df}", f1.eval_t(t));
    }

    #[test]
    fn positive_from_half_onward() {
        for &tau in &[0.5, 0.75, 1.0] {
            let table = build_moment_table(tau, 8, TOL).unwrap();
            for n in [1u32, 2] {
                let f = build_f(&table, n).unwrap();
                for &t in &[0.0, 1.0, 2.0, 5.0, 10.0] {
                    assert!(f.eval_t(t) > 0.0, "f_{{{tau},{n}}}({t}) = {}", f.eval_t(t));
                }
            }
        }
    }
}
