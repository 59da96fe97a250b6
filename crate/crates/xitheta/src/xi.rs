//! Direct evaluation of the Riemann xi function and of the modulus surface
//! F(tau, t) = 4 |xi(1/2 + tau - i t)|^2, together with the moment-side
//! reconstruction of F and its closed-form tau-derivative.
//!
//! xi is always evaluated through the theta-kernel integral
//!
//!   xi(s) = 1/2 + s(s-1)/2 int_1^inf (y^{s/2-1} + y^{-(s+1)/2}) psi(y) dy,
//!
//! never through zeta. The integrand is invariant under s -> 1 - s, which
//! is the functional equation; arguments with Re(s) < 1/2 are canonicalized
//! through it so that mirrored evaluations share one code path.

use crate::error::{Error, Result};
use crate::moments::{cosine_kernel_c, cosine_kernel_d, MomentTable};
use crate::quadrature::{integrate_semiinf_vec, OscillationHint, QuadOptions};
use crate::theta::psi_raw;
use num_complex::Complex64;

pub type ComplexValue = Complex64;

/// One verified point of the modulus surface.
#[derive(Debug, Clone, Copy)]
pub struct ModulusPoint {
    pub tau: f64,
    pub t: f64,
    pub f_direct: f64,
    pub f_rhs: f64,
    pub err: f64,
}

/// Evaluate xi(s) by complex quadrature of the theta-kernel integral; the
/// real and imaginary integrands share every psi evaluation. Returns the
/// value and an absolute error estimate.
pub fn xi_direct(s: ComplexValue, tol: f64) -> Result<(ComplexValue, f64)> {
    let s = if s.re < 0.5 { Complex64::new(1.0, 0.0) - s } else { s };
    let prefactor = 0.5 * s * (s - 1.0);
    if prefactor.norm() == 0.0 {
        // s = 0 or s = 1: the integral term drops out entirely.
        return Ok((Complex64::new(0.5, 0.0), 0.0));
    }

    let sigma = s.re;
    let mu = s.im;
    let e_plus = 0.5 * sigma - 1.0;
    let e_minus = -0.5 * (sigma + 1.0);
    let eval = move |y: f64, out: &mut [f64]| {
        let p = psi_raw(y);
        let a = y.powf(e_plus);
        let b = y.powf(e_minus);
        let theta = 0.5 * mu * y.ln();
        out[0] = (a + b) * theta.cos() * p;
        out[1] = (a - b) * theta.sin() * p;
    };

    // psi(y) ~ e^{-pi y} against a mild power of y.
    let decay = (std::f64::consts::PI - 0.5 * sigma.max(0.0) - 0.5).clamp(0.25, 2.5);
    let inner_tol = 0.5 * tol / prefactor.norm().max(1.0);
    let r = integrate_semiinf_vec(
        eval,
        1.0,
        &[inner_tol, inner_tol],
        decay,
        OscillationHint::cosine(0.5 * mu),
        &QuadOptions::default(),
    )?;

    let integral = Complex64::new(r[0].value, r[1].value);
    let value = 0.5 + prefactor * integral;
    let err = prefactor.norm() * (r[0].err + r[1].err);
    Ok((value, err))
}

/// F(tau, t) = 4 |xi(1/2 + tau - i t)|^2 with an error estimate.
///
/// tau enters as |tau| (functional equation) and t only through even
/// functions of t, so mirrored arguments evaluate bit-identically.
pub fn f_direct(tau: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    let s = Complex64::new(0.5 + tau.abs(), -t.abs());
    let (xi, xi_err) = xi_direct(s, tol)?;
    let norm = xi.norm();
    let value = 4.0 * norm * norm;
    let err = 8.0 * norm * xi_err + 4.0 * xi_err * xi_err;
    Ok((value, err))
}

fn check_table(tau: f64, table: &MomentTable) -> Result<()> {
    if table.tau != tau {
        return Err(Error::Domain(format!(
            "moment table was built at tau = {}, requested {}",
            table.tau, tau
        )));
    }
    Ok(())
}

/// Assemble the moment-side representation of F given a precomputed cosine
/// kernel C(tau, t).
pub fn f_rhs_from_parts(tau: f64, t: f64, table: &MomentTable, c: (f64, f64)) -> Result<(f64, f64)> {
    check_table(tau, table)?;
    let (s0, s0_err) = table.s(0)?;
    let t2 = t * t;
    let tau2 = tau * tau;
    let w_c = 2.0 * ((t2 + tau2 + 0.25).powi(2) - tau2);
    let w_s = 2.0 * (tau2 - 0.25) * (tau2 - 0.25);
    let boundary = 1.0 + (tau2 - 0.25) * table.jplus.0;

    let value = w_c * c.0 - t2 * table.i1.0 - w_s * s0 + boundary * boundary;
    let err = w_c.abs() * c.1
        + t2 * table.i1.1
        + w_s * s0_err
        + 2.0 * boundary.abs() * (tau2 - 0.25).abs() * table.jplus.1;
    Ok((value, err))
}

/// The modulus representation of F assembled from moments: computes
/// C(tau, t) at the given tolerance and combines it with the table.
pub fn f_rhs(tau: f64, t: f64, table: &MomentTable, tol: f64) -> Result<(f64, f64)> {
    let c = cosine_kernel_c(tau, t, tol)?;
    f_rhs_from_parts(tau, t, table, c)
}

/// Evaluate both routes to the modulus at one point; `err` combines the
/// two error estimates.
pub fn modulus_point(tau: f64, t: f64, table: &MomentTable, tol: f64) -> Result<ModulusPoint> {
    let (f_direct, direct_err) = self::f_direct(tau, t, tol)?;
    let (f_rhs, rhs_err) = self::f_rhs(tau, t, table, tol)?;
    Ok(ModulusPoint { tau, t, f_direct, f_rhs, err: direct_err + rhs_err })
}

/// Closed-form tau-derivative of F from precomputed cosine kernels.
/// `a0` is the constant coefficient of the polynomial family at this tau.
pub fn df_dtau_from_parts(
    tau: f64,
    t: f64,
    table: &MomentTable,
    c: (f64, f64),
    d: (f64, f64),
    a0: f64,
) -> Result<(f64, f64)> {
    check_table(tau, table)?;
    let (s0, s0_err) = table.s(0)?;
    let (a0m, a0m_err) = table.a(0)?;
    let t2 = t * t;
    let tau2 = tau * tau;
    let q = 0.25 - tau2;
    let w_c = 8.0 * tau * (t2 - q);
    let w_d = (t2 + 0.25 + tau2).powi(2) - tau2;

    let value = w_c * c.0 + w_d * d.0 - 2.0 * t2 * table.i2.0 - t2 * table.i3.0
        + 8.0 * tau * q * s0
        - q * q * a0m
        + a0;
    let err = w_c.abs() * c.1
        + w_d.abs() * d.1
        + 2.0 * t2 * table.i2.1
        + t2 * table.i3.1
        + (8.0 * tau * q).abs() * s0_err
        + q * q * a0m_err;
    Ok((value, err))
}

/// Closed-form tau-derivative of F; the cosine kernels are computed at the
/// given tolerance.
pub fn df_dtau(tau: f64, t: f64, table: &MomentTable, a0: f64, tol: f64) -> Result<(f64, f64)> {
    let c = cosine_kernel_c(tau, t, tol)?;
    let d = cosine_kernel_d(tau, t, tol)?;
    df_dtau_from_parts(tau, t, table, c, d, a0)
}

/// Golden-section minimization of t -> F(tau, t) on [lo, hi]. F is smooth
/// and unimodal on the probe intervals used here. Returns (t_min, F_min).
pub fn minimize_f_direct(tau: f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("minimize needs lo < hi, got [{lo}, {hi}]")));
    }
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f_direct(tau, c, tol)?.0;
    let mut fd = f_direct(tau, d, tol)?.0;
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f_direct(tau, c, tol)?.0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f_direct(tau, d, tol)?.0;
        }
    }
    let t_min = 0.5 * (a + b);
    Ok((t_min, f_direct(tau, t_min, tol)?.0))
}
