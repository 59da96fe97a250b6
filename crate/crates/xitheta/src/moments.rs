//! The tau-dependent integrals everything downstream consumes.
//!
//! Every double integral over the region {uv > 1} with weight
//! u^{(2 tau - 3)/4} v^{(-2 tau - 3)/4} psi(u) psi(v) is computed through
//! the substitution u = x^2 y, v = x^2 / y (Jacobian 4 x^3 / y), which maps
//! the region onto x > 1, y > 0 and turns the weights into functions of
//! ln(uv) = 4 ln x and ln(u/v) = 2 ln y. With
//!
//!   g_tau(x) = int_0^inf y^{tau-1} psi(x^2 y) psi(x^2 / y) dy
//!   h_tau(x) = int_0^inf ln(y) y^{tau-1} psi(x^2 y) psi(x^2 / y) dy
//!
//! the symmetric and antisymmetric moments and the cosine kernels become
//!
//!   S_j(tau)  = 4 int_1^inf (4 ln x)^j g_tau(x) dx
//!   A_j(tau)  = 8 int_1^inf (4 ln x)^j h_tau(x) dx
//!   C(tau, t) = 4 int_1^inf cos(2 t ln x) g_tau(x) dx
//!   D(tau, t) = 8 int_1^inf cos(2 t ln x) h_tau(x) dx
//!
//! The inner integrals are evaluated in the variable y = e^w over the whole
//! line, where the integrand decays double-exponentially. The product
//! psi(x^2 e^w) psi(x^2 e^{-w}) peaks at y = 1 with magnitude psi(x^2)^2, so
//! g decays like exp(-2 pi x^2): the outer integral is truncated at
//! X = max(4, sqrt(ln(1/tol) / 2 pi) + 1).
//!
//! One x-sweep serves every requested weight simultaneously: the expensive
//! object is the inner kernel, identical across j and t.

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_finite_vec, integrate_line_vec, integrate_semiinf_vec, OscillationHint, QuadOptions,
};
use crate::theta::psi_raw;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Inner kernel values at one (tau, x).
#[derive(Debug, Clone, Copy)]
pub struct InnerKernel {
    pub tau: f64,
    pub x: f64,
    pub g: f64,
    pub g_err: f64,
    pub h: f64,
    pub h_err: f64,
}

/// All tau-dependent integrals at one tau, with per-entry error estimates.
/// `s[k]` holds S_{2k}, `a[k]` holds A_{2k}, up to j_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub tau: f64,
    pub j_max: u32,
    pub tol_used: f64,
    pub s: Vec<(f64, f64)>,
    pub a: Vec<(f64, f64)>,
    pub jplus: (f64, f64),
    pub jminus_log: (f64, f64),
    pub i1: (f64, f64),
    pub i2: (f64, f64),
    pub i3: (f64, f64),
}

impl MomentTable {
    /// S_j with its error estimate; j must be even and within capacity.
    pub fn s(&self, j: u32) -> Result<(f64, f64)> {
        check_even(j)?;
        self.s
            .get((j / 2) as usize)
            .copied()
            .ok_or(Error::Capacity { needed: j, have: self.j_max })
    }

    /// A_j with its error estimate; j must be even and within capacity.
    pub fn a(&self, j: u32) -> Result<(f64, f64)> {
        check_even(j)?;
        self.a
            .get((j / 2) as usize)
            .copied()
            .ok_or(Error::Capacity { needed: j, have: self.j_max })
    }
}

fn check_even(j: u32) -> Result<()> {
    if j % 2 != 0 {
        return Err(Error::Domain(format!("moment order must be even, got {j}")));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.abs() < 1.5) {
        return Err(Error::Domain(format!(
            "one-dimensional integrals require |tau| < 3/2 for convergence, got {tau}"
        )));
    }
    Ok(())
}

/// Outer truncation point: the inner kernel is bounded by a multiple of
/// exp(-2 pi (x^2 - 1)), so the tail past X is negligible at tolerance tol.
fn outer_cutoff(tol: f64) -> f64 {
    (((1.0 / tol).ln() / (2.0 * PI)).sqrt() + 1.0).max(4.0)
}

/// Envelope used to scale the inner tolerance with x.
fn inner_envelope(x: f64) -> f64 {
    (-2.0 * PI * (x * x - 1.0)).exp().max(1e-260)
}

// Fraction of the budget granted to inner-kernel errors. The envelope
// integral sum_j int (4 ln x)^j env(x) dx stays well below 1 on [1, X].
const INNER_SHARE: f64 = 0.02;

fn inner_kernel_raw(tau: f64, x: f64, abs_tol: f64) -> Result<InnerKernel> {
    let x2 = x * x;
    let kernel = move |w: f64, out: &mut [f64]| {
        let p = psi_raw(x2 * w.exp());
        if p == 0.0 {
            out[0] = 0.0;
            out[1] = 0.0;
            return;
        }
        let k = p * psi_raw(x2 * (-w).exp()) * (tau * w).exp();
        out[0] = k;
        out[1] = w * k;
    };
    let decay = 0.5 * PI * x2;
    let r = integrate_line_vec(kernel, &[abs_tol, abs_tol], decay, &QuadOptions::default())?;
    Ok(InnerKernel {
        tau,
        x,
        g: r[0].value,
        g_err: r[0].err,
        h: r[1].value,
        h_err: r[1].err,
    })
}

/// Inner kernel at one x >= 1: g and h share one whole-line pass in w.
pub fn inner_kernel(tau: f64, x: f64, tol: f64) -> Result<InnerKernel> {
    if !(x >= 1.0) {
        return Err(Error::Domain(format!("inner_kernel needs x >= 1, got {x}")));
    }
    inner_kernel_raw(tau, x, tol)
}

/// Moment sweep: S_j and A_j for all even j up to j_max in one adaptive
/// pass over x. Component layout: S_0, S_2, ..., then A_0, ..., then the
/// inner-error envelopes E_0, ... (carried at infinite tolerance, used
/// only for error accounting).
fn moment_sweep(tau: f64, js: &[u32], tol: f64) -> Result<(Vec<(f64, f64)>, Vec<(f64, f64)>)> {
    let nj = js.len();
    let m = 3 * nj;
    let cutoff = outer_cutoff(tol);
    let inner_failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);

    let eval = |x: f64, out: &mut [f64]| {
        let env = inner_envelope(x);
        let ik = match inner_kernel_raw(tau, x, INNER_SHARE * tol * env) {
            Ok(ik) => ik,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                out.fill(0.0);
                return;
            }
        };
        let lx = 4.0 * x.ln();
        for (i, &j) in js.iter().enumerate() {
            let w = lx.powi(j as i32);
            out[i] = 4.0 * w * ik.g;
            out[nj + i] = 8.0 * w * ik.h;
            out[2 * nj + i] = 4.0 * w * env;
        }
    };

    let mut tols = vec![0.5 * tol; 2 * nj];
    tols.resize(3 * nj, f64::INFINITY);
    let r = integrate_finite_vec(&eval, 1.0, cutoff, &tols, OscillationHint::none(), &QuadOptions::default())?;

    // Truncation tail: bound by the integrand magnitude at the cutoff over
    // the local decay rate of exp(-2 pi x^2).
    let mut edge = vec![0.0; m];
    eval(cutoff, &mut edge);
    let rate = 4.0 * PI * cutoff;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }

    let mut s = Vec::with_capacity(nj);
    let mut a = Vec::with_capacity(nj);
    for i in 0..nj {
        let env_int = r[2 * nj + i].value;
        let inner_err = INNER_SHARE * tol * env_int;
        s.push((r[i].value, r[i].err + inner_err + edge[i].abs() / rate));
        a.push((
            r[nj + i].value,
            r[nj + i].err + 2.0 * inner_err + edge[nj + i].abs() / rate,
        ));
    }
    Ok((s, a))
}

/// Symmetric moment S_j(tau).
pub fn moment_s(tau: f64, j: u32, tol: f64) -> Result<(f64, f64)> {
    check_even(j)?;
    let (s, _) = moment_sweep(tau, &[j], tol)?;
    Ok(s[0])
}

/// Antisymmetric moment A_j(tau).
pub fn moment_a(tau: f64, j: u32, tol: f64) -> Result<(f64, f64)> {
    check_even(j)?;
    let (_, a) = moment_sweep(tau, &[j], tol)?;
    Ok(a[0])
}

/// Cosine kernels C(tau, t) and D(tau, t) for a batch of t values sharing
/// one x-sweep. Returns (C, D) pairs with error estimates, in input order.
pub fn cosine_kernels_batch(
    tau: f64,
    ts: &[f64],
    tol: f64,
) -> Result<Vec<((f64, f64), (f64, f64))>> {
    let nt = ts.len();
    let m = 2 * nt + 1;
    let cutoff = outer_cutoff(tol);
    let inner_failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);

    let eval = |x: f64, out: &mut [f64]| {
        let env = inner_envelope(x);
        let ik = match inner_kernel_raw(tau, x, INNER_SHARE * tol * env) {
            Ok(ik) => ik,
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                out.fill(0.0);
                return;
            }
        };
        let lx = x.ln();
        for (i, &t) in ts.iter().enumerate() {
            let c = (2.0 * t * lx).cos();
            out[i] = 4.0 * c * ik.g;
            out[nt + i] = 8.0 * c * ik.h;
        }
        out[2 * nt] = 4.0 * env;
    };

    let mut tols = vec![0.5 * tol; 2 * nt];
    tols.push(f64::INFINITY);
    let freq = 2.0 * ts.iter().fold(0.0f64, |acc, t| acc.max(t.abs()));
    let r = integrate_finite_vec(
        &eval,
        1.0,
        cutoff,
        &tols,
        OscillationHint::cosine(freq),
        &QuadOptions::default(),
    )?;

    let mut edge = vec![0.0; m];
    eval(cutoff, &mut edge);
    let rate = 4.0 * PI * cutoff;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    let env_int = r[2 * nt].value;
    let inner_err = INNER_SHARE * tol * env_int;

    let mut out = Vec::with_capacity(nt);
    for i in 0..nt {
        let c = (r[i].value, r[i].err + inner_err + edge[i].abs() / rate);
        let d = (
            r[nt + i].value,
            r[nt + i].err + 2.0 * inner_err + edge[nt + i].abs() / rate,
        );
        out.push((c, d));
    }
    Ok(out)
}

/// C(tau, t) = iint cos((t/2) ln(uv)) (weight) over {uv > 1}.
pub fn cosine_kernel_c(tau: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    Ok(cosine_kernels_batch(tau, &[t], tol)?[0].0)
}

/// D(tau, t) = iint cos((t/2) ln(uv)) ln(u/v) (weight) over {uv > 1}.
pub fn cosine_kernel_d(tau: f64, t: f64, tol: f64) -> Result<(f64, f64)> {
    Ok(cosine_kernels_batch(tau, &[t], tol)?[0].1)
}

/// The five one-dimensional psi-weighted integrals over (1, inf):
/// J+, J-log, I1, I2, I3.
#[derive(Debug, Clone, Copy)]
pub struct OneDimIntegrals {
    pub jplus: (f64, f64),
    pub jminus_log: (f64, f64),
    pub i1: (f64, f64),
    pub i2: (f64, f64),
    pub i3: (f64, f64),
}

pub fn one_dim_integrals(tau: f64, tol: f64) -> Result<OneDimIntegrals> {
    check_tau(tau)?;
    let eval = move |u: f64, out: &mut [f64]| {
        let p = psi_raw(u);
        let lu = u.ln();
        // exponents grouped as in the defining integrals
        let q_plus = u.powf(0.25 * (2.0 * tau - 3.0));
        let q_minus = u.powf(0.25 * (-2.0 * tau - 3.0));
        let r1 = u.powf(tau - 0.5);
        let r2 = u.powf(-tau - 1.0);
        let r3 = u.powf(-tau - 0.5);
        let r4 = u.powf(tau - 1.0);
        out[0] = (q_plus + q_minus) * p;
        out[1] = (q_plus - q_minus) * lu * p;
        out[2] = ((1.0 + 2.0 * tau) * (r1 + r2) + (1.0 - 2.0 * tau) * (r3 + r4)) * p;
        out[3] = ((r1 + r2) - (r3 + r4)) * p;
        out[4] = ((1.0 + 2.0 * tau) * (r1 - r2) + (1.0 - 2.0 * tau) * (r4 - r3)) * lu * p;
    };
    let tols = [0.2 * tol; 5];
    let r = integrate_semiinf_vec(eval, 1.0, &tols, 2.0, OscillationHint::none(), &QuadOptions::default())?;
    let pair = |i: usize| (r[i].value, r[i].err);
    Ok(OneDimIntegrals {
        jplus: pair(0),
        jminus_log: pair(1),
        i1: pair(2),
        i2: pair(3),
        i3: pair(4),
    })
}

/// Build the full moment table at one tau: all S_j, A_j for even j up to
/// j_max plus the five one-dimensional integrals, from one shared x-sweep.
pub fn build_moment_table(tau: f64, j_max: u32, tol: f64) -> Result<MomentTable> {
    check_even(j_max)?;
    check_tau(tau)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let js: Vec<u32> = (0..=j_max / 2).map(|k| 2 * k).collect();
    let (s, a) = moment_sweep(tau, &js, tol)?;
    let od = one_dim_integrals(tau, tol)?;
    Ok(MomentTable {
        tau,
        j_max,
        tol_used: tol,
        s,
        a,
        jplus: od.jplus,
        jminus_log: od.jminus_log,
        i1: od.i1,
        i2: od.i2,
        i3: od.i3,
    })
}

/// Upper bound on S_{2k} / 2^{2k} from the factorial-growth estimate:
/// pi^4 (Gamma(|tau| + 1/2) + Gamma(1/2)) ([|tau|] + 3)! / (36 e) * 2^{2k - 3/2} k!.
pub fn factorial_growth_bound(tau: f64, k: u32) -> f64 {
    let at = tau.abs();
    let gamma_sum = statrs::function::gamma::gamma(at + 0.5) + PI.sqrt();
    let int_part_fact: f64 = (1..=(at.floor() as u64 + 3)).map(|i| i as f64).product();
    let k_fact: f64 = (1..=k as u64).map(|i| i as f64).product();
    PI.powi(4) * gamma_sum * int_part_fact / (36.0 * std::f64::consts::E)
        * 2f64.powf(2.0 * k as f64 - 1.5)
        * k_fact
}
