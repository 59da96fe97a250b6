//! Jacobi theta function psi(y) = sum_{n>=1} exp(-pi n^2 y) for y > 0.
//!
//! Truncation is driven by a provable geometric majorant of the Gaussian
//! tail, so every returned value carries a defensible error bound. For
//! y < 1 the series converges slowly and the classical modular identity
//!
//!   2 psi(y) + 1 = y^{-1/2} (2 psi(1/y) + 1)
//!
//! is applied once, which lands the argument in [1, inf).

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Absolute-error target plus a cap on series length.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceSpec {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl ToleranceSpec {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::Domain(format!("abs_tol must be > 0, got {abs_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be >= 1".into()));
        }
        Ok(Self { abs_tol, max_terms })
    }

    /// Tolerance with the default term cap.
    pub fn abs(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 1024)
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, max_terms: 1024 }
    }
}

/// One evaluated point of psi.
#[derive(Debug, Clone, Copy)]
pub struct ThetaPoint {
    pub y: f64,
    pub value: f64,
    pub err: f64,
}

/// Geometric majorant of the series tail past index `n`:
///
///   sum_{k>n} exp(-pi k^2 y) <= exp(-pi (n+1)^2 y) / (1 - exp(-pi (2n+3) y)).
pub fn psi_tail_bound(y: f64, n: usize) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("psi_tail_bound needs y > 0, got {y}")));
    }
    if n == 0 {
        return Err(Error::Domain("psi_tail_bound needs n >= 1".into()));
    }
    Ok(tail_bound_raw(y, n))
}

fn tail_bound_raw(y: f64, n: usize) -> f64 {
    let np1 = (n + 1) as f64;
    let head = (-PI * np1 * np1 * y).exp();
    let ratio = (-PI * (2.0 * n as f64 + 3.0) * y).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    head / (1.0 - ratio)
}

/// Evaluate psi(y) with |value - psi(y)| <= tol.abs_tol.
///
/// Delegates to the modular identity for y < 1.
pub fn psi(y: f64, tol: &ToleranceSpec) -> Result<ThetaPoint> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("psi needs y > 0, got {y}")));
    }
    if y < 1.0 {
        psi_via_modular(y, tol)
    } else {
        psi_series(y, tol)
    }
}

/// Direct series summation, truncated at the smallest N whose tail bound
/// meets the tolerance.
fn psi_series(y: f64, tol: &ToleranceSpec) -> Result<ThetaPoint> {
    let mut n_trunc = 1usize;
    while tail_bound_raw(y, n_trunc) > tol.abs_tol {
        n_trunc += 1;
        if n_trunc > tol.max_terms {
            return Err(Error::SeriesPrecision {
                requested: tol.abs_tol,
                achievable: tail_bound_raw(y, tol.max_terms),
                terms: tol.max_terms,
            });
        }
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Neumaier compensation
    for n in 1..=n_trunc {
        let term = (-PI * (n * n) as f64 * y).exp();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    let value = sum + comp;
    let err = tail_bound_raw(y, n_trunc) + 2.0 * f64::EPSILON * value;
    Ok(ThetaPoint { y, value, err })
}

/// Evaluate psi through one application of the modular identity:
/// psi(y) = -1/2 + 1/2 y^{-1/2} + y^{-1/2} psi(1/y).
pub fn psi_via_modular(y: f64, tol: &ToleranceSpec) -> Result<ThetaPoint> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("psi needs y > 0, got {y}")));
    }
    let scale = 1.0 / y.sqrt();
    // Split the budget so the propagated series error stays at tol/2.
    let inner_tol = ToleranceSpec {
        abs_tol: 0.5 * tol.abs_tol / scale,
        max_terms: tol.max_terms,
    };
    let inner = psi_series(1.0 / y, &inner_tol)?;
    let value = -0.5 + 0.5 * scale + scale * inner.value;
    let err = scale * inner.err + 4.0 * f64::EPSILON * (0.5 * scale + scale * inner.value);
    if err > tol.abs_tol {
        return Err(Error::SeriesPrecision {
            requested: tol.abs_tol,
            achievable: err,
            terms: tol.max_terms,
        });
    }
    Ok(ThetaPoint { y, value, err })
}

/// Fast unchecked path for quadrature integrands: absolute accuracy near
/// machine level, no allocation, no Result. Caller guarantees y > 0.
pub(crate) fn psi_raw(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y < 1.0 {
        let scale = 1.0 / y.sqrt();
        return -0.5 + scale * (0.5 + psi_raw_ge1(1.0 / y));
    }
    psi_raw_ge1(y)
}

fn psi_raw_ge1(y: f64) -> f64 {
    // For y >= 1 the tail past n is below exp(-pi (n+1)^2); four terms put
    // it under 1e-34, far beyond f64 resolution of the leading term.
    let e1 = (-PI * y).exp();
    if e1 == 0.0 {
        return 0.0;
    }
    let e4 = (-4.0 * PI * y).exp();
    let e9 = (-9.0 * PI * y).exp();
    let e16 = (-16.0 * PI * y).exp();
    ((e16 + e9) + e4) + e1
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: naive summation to a fixed index.
    fn naive_psi(y: f64, terms: usize) -> f64 {
        (1..=terms).map(|n| (-PI * (n * n) as f64 * y).exp()).sum()
    }

    #[test]
    fn psi_at_one_matches_naive_oracle() {
        let tol = ToleranceSpec::abs(1e-12).unwrap();
        let p = psi(1.0, &tol).unwrap();
        // frozen from the n<=10 oracle
        assert!((p.value - 0.043217405606654007).abs() <= 1e-12);
        assert!((p.value - naive_psi(1.0, 10)).abs() <= 1e-12);
        assert!(p.err <= 1e-12);
    }

    #[test]
    fn psi_at_large_y_is_negligible() {
        let tol = ToleranceSpec::abs(1e-12).unwrap();
        let p = psi(100.0, &tol).unwrap();
        assert!(p.value < 1e-12);
        assert!(p.value > 0.0);
    }

    #[test]
    fn psi_small_y_via_functional_equation() {
        // psi(0.01) = -1/2 + 5 + 10 psi(100), and psi(100) ~ e^{-100 pi}
        let tol = ToleranceSpec::abs(1e-12).unwrap();
        let p = psi(0.01, &tol).unwrap();
        assert!((p.value - 4.5).abs() <= 1e-10);
    }

    #[test]
    fn tail_bound_majorizes_true_tail() {
        let b = psi_tail_bound(1.0, 1).unwrap();
        let true_tail: f64 = (2..=12).map(|n| (-PI * (n * n) as f64).exp()).sum();
        assert!(b <= 4e-6);
        assert!(true_tail <= b);
        assert!((true_tail - 3.487e-6).abs() < 1e-9);

        assert!(psi_tail_bound(10.0, 1).unwrap() < 1e-54);

        let b01 = psi_tail_bound(0.1, 10).unwrap();
        let tail01: f64 = (11..=60).map(|n| (-PI * (n * n) as f64 * 0.1).exp()).sum();
        assert!(tail01 <= b01);
    }

    #[test]
    fn modular_path_matches_direct_sum() {
        let tol = ToleranceSpec::abs(1e-12).unwrap();
        // y = 0.25: naive series still converges fine, use it as oracle
        let p = psi_via_modular(0.25, &tol).unwrap();
        assert!((p.value - naive_psi(0.25, 20)).abs() <= 1e-12);
        assert!((p.value - 0.5000069746847124).abs() <= 1e-12);

        // fixed point at y = 1
        let direct = psi(1.0, &tol).unwrap();
        let modular = psi_via_modular(1.0, &tol).unwrap();
        assert!((direct.value - modular.value).abs() <= 2e-12);

        let p001 = psi_via_modular(0.01, &tol).unwrap();
        assert!((p001.value - 4.5).abs() <= 1e-10);
    }

    #[test]
    fn modular_identity_on_log_grid() {
        let tol = ToleranceSpec::abs(1e-13).unwrap();
        let mut y = 1e-3;
        while y <= 50.0 {
            let lhs = 2.0 * psi(y, &tol).unwrap().value + 1.0;
            let rhs = (2.0 * psi(1.0 / y, &tol).unwrap().value + 1.0) / y.sqrt();
            assert!(
                (lhs - rhs).abs() < 1e-12,
                "modular residual {} at y = {}",
                (lhs - rhs).abs(),
                y
            );
            y *= 1.7;
        }
    }

    #[test]
    fn monotone_decreasing_on_grid() {
        let tol = ToleranceSpec::abs(1e-13).unwrap();
        let mut prev = f64::INFINITY;
        let mut y = 1e-3;
        while y <= 50.0 {
            let v = psi(y, &tol).unwrap().value;
            assert!(v < prev, "psi not decreasing at y = {y}");
            prev = v;
            y *= 1.9;
        }
    }

    #[test]
    fn reported_err_dominates_refinement_shift() {
        let mut y = 1e-3;
        while y <= 50.0 {
            let loose = psi(y, &ToleranceSpec::abs(1e-8).unwrap()).unwrap();
            let tight = psi(y, &ToleranceSpec::abs(1e-10).unwrap()).unwrap();
            assert!(loose.err >= (loose.value - tight.value).abs());
            y *= 2.3;
        }
    }

    #[test]
    fn domain_and_precision_errors() {
        let tol = ToleranceSpec::default();
        assert!(matches!(psi(-1.0, &tol), Err(Error::Domain(_))));
        assert!(matches!(psi(0.0, &tol), Err(Error::Domain(_))));
        assert!(psi_tail_bound(1.0, 0).is_err());
        assert!(psi_tail_bound(-1.0, 3).is_err());

        let strict = ToleranceSpec { abs_tol: 1e-300, max_terms: 4 };
        match psi(1.0, &strict) {
            Err(Error::SeriesPrecision { achievable, .. }) => {
                let expect = psi_tail_bound(1.0, 4).unwrap();
                assert!((achievable - expect).abs() <= expect * 1e-12);
            }
            other => panic!("expected SeriesPrecision, got {other:?}"),
        }
    }

    #[test]
    fn raw_path_agrees_with_checked_path() {
        let tol = ToleranceSpec::abs(1e-13).unwrap();
        for &y in &[0.01, 0.3, 0.9999, 1.0, 1.5, 7.0, 42.0] {
            let a = psi_raw(y);
            let b = psi(y, &tol).unwrap().value;
            assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
        }
    }
}
