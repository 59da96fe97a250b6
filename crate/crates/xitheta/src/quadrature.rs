//! Adaptive numerical integration on finite, semi-infinite and whole-line
//! domains.
//!
//! The core is a globally adaptive Gauss(7)/Kronrod(15) pair: the panel
//! error is the rescaled difference of the two embedded rules, and the
//! worst panel (relative to its tolerance share) is bisected until every
//! component of the integrand meets its target. The engine is
//! vector-valued so that several integrands sharing expensive point
//! evaluations can ride one subdivision pattern.
//!
//! Oscillatory factors cos(omega r) are handled by capping the initial
//! panel width at pi / (2 omega) rather than by specialized rules; the
//! frequencies that occur here are small.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Result of one integration: value, estimated absolute error, and the
/// number of panel evaluations spent.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub err: f64,
    pub panels: usize,
}

/// Radian frequency of a cos(omega r) factor in the integration variable.
#[derive(Debug, Clone, Copy)]
pub struct OscillationHint {
    pub frequency: f64,
}

impl OscillationHint {
    pub fn none() -> Self {
        Self { frequency: 0.0 }
    }

    pub fn cosine(frequency: f64) -> Self {
        Self { frequency: frequency.abs() }
    }
}

/// Engine knobs. The panel budget bounds work per call; exceeding it
/// reports the best estimate through `Error::QuadBudget`, never silently.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub budget: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { budget: 1 << 16 }
    }
}

// 15-point Kronrod nodes on [-1, 1] (QUADPACK dqk15), positive half.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// 7-point Gauss weights; wg[i] pairs with xgk[2i+1], wg[3] with the center.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style conservative rescaling of the raw pair difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

struct Panel {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: Vec<f64>,
    priority: f64,
    splittable: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority)
    }
}

/// Evaluate the GK15 pair for all components on [a, b].
fn gk15_panel<F>(f: &F, a: f64, b: f64, m: usize, tols: &[f64]) -> Panel
where
    F: Fn(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fx = vec![0.0; m];
    // Saved node values per component for the resasc pass: 15 nodes.
    let mut nodes = vec![0.0; 15 * m];

    // Node order: j = 0..7 -> center - half*xgk[j]; j = 8..14 -> center + half*xgk[j-8].
    f(center - half * XGK[7], &mut fx); // center (xgk[7] = 0)
    nodes[7 * m..8 * m].copy_from_slice(&fx);
    for j in 0..7 {
        f(center - half * XGK[j], &mut fx);
        nodes[j * m..(j + 1) * m].copy_from_slice(&fx);
        f(center + half * XGK[j], &mut fx);
        nodes[(8 + j) * m..(9 + j) * m].copy_from_slice(&fx);
    }

    let mut value = vec![0.0; m];
    let mut err = vec![0.0; m];
    let mut priority = 0.0f64;

    for c in 0..m {
        let at = |j: usize| nodes[j * m + c];
        let fc = at(7);
        let mut resk = WGK[7] * fc;
        let mut resabs = resk.abs();
        let mut resg = WG[3] * fc;
        for j in 0..7 {
            let fsum = at(j) + at(8 + j);
            resk += WGK[j] * fsum;
            resabs += WGK[j] * (at(j).abs() + at(8 + j).abs());
            if j % 2 == 1 {
                // xgk[1], xgk[3], xgk[5] are the Gauss nodes
                resg += WG[j / 2] * fsum;
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((at(j) - mean).abs() + (at(8 + j) - mean).abs());
        }
        let e = rescale_error((resk - resg) * half, resabs * half, resasc * half);
        value[c] = resk * half;
        err[c] = e;
        priority = priority.max(e / tols[c]);
    }

    let width_floor = 64.0 * f64::EPSILON * a.abs().max(b.abs()) + 64.0 * f64::MIN_POSITIVE;
    Panel {
        a,
        b,
        value,
        err,
        priority,
        splittable: (b - a) > width_floor,
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Vector-valued adaptive integration over [a, b]. Component c is refined
/// until its accumulated error estimate is below `tols[c]`; components with
/// an infinite tolerance are carried along but never drive refinement.
pub fn integrate_finite_vec<F>(
    f: F,
    a: f64,
    b: f64,
    tols: &[f64],
    hint: OscillationHint,
    opts: &QuadOptions,
) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64, &mut [f64]),
{
    if !(a < b) {
        return Err(Error::Domain(format!("integrate_finite needs a < b, got [{a}, {b}]")));
    }
    if tols.is_empty() || tols.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Domain("tolerances must be positive".into()));
    }
    let m = tols.len();

    // Initial split: never let a panel span more than a quarter period of
    // the hinted oscillation.
    let mut n_init = 1usize;
    if hint.frequency > 0.0 {
        let cap = std::f64::consts::FRAC_PI_2 / hint.frequency;
        n_init = ((b - a) / cap).ceil() as usize;
        n_init = n_init.clamp(1, opts.budget / 4 + 1);
    }

    let mut heap = BinaryHeap::new();
    let mut n_panels = 0usize;
    let step = (b - a) / n_init as f64;
    for i in 0..n_init {
        let pa = a + i as f64 * step;
        let pb = if i + 1 == n_init { b } else { a + (i + 1) as f64 * step };
        heap.push(gk15_panel(&f, pa, pb, m, tols));
        n_panels += 1;
    }

    loop {
        let mut totals = vec![0.0; m];
        for p in heap.iter() {
            for c in 0..m {
                totals[c] += p.err[c];
            }
        }
        let done = (0..m).all(|c| totals[c] <= tols[c]);
        let worst_splittable = heap.iter().any(|p| p.splittable && p.priority > 0.0);

        if done || !worst_splittable || n_panels + 2 > opts.budget {
            let results: Vec<QuadratureResult> = (0..m)
                .map(|c| QuadratureResult {
                    value: neumaier_sum(heap.iter().map(|p| p.value[c])),
                    err: totals[c],
                    panels: n_panels,
                })
                .collect();
            if done {
                return Ok(results);
            }
            // Out of budget or stuck on unsplittable panels: flag, carrying
            // the worst component's best estimate.
            let worst = (0..m)
                .filter(|&c| tols[c].is_finite())
                .max_by(|&x, &y| (totals[x] / tols[x]).total_cmp(&(totals[y] / tols[y])))
                .unwrap_or(0);
            return Err(Error::QuadBudget {
                value: results[worst].value,
                err: results[worst].err,
                panels: n_panels,
                requested: tols[worst],
            });
        }

        // Split the worst splittable panel.
        let mut stash = Vec::new();
        let target = loop {
            match heap.pop() {
                Some(p) if p.splittable => break p,
                Some(p) => stash.push(p),
                None => unreachable!("worst_splittable guaranteed a candidate"),
            }
        };
        for p in stash {
            heap.push(p);
        }
        let mid = 0.5 * (target.a + target.b);
        heap.push(gk15_panel(&f, target.a, mid, m, tols));
        heap.push(gk15_panel(&f, mid, target.b, m, tols));
        n_panels += 2;
    }
}

/// Adaptive integration of a scalar function over [a, b].
pub fn integrate_finite<F>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    hint: OscillationHint,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_finite_vec(
        |x, out| out[0] = f(x),
        a,
        b,
        &[tol],
        hint,
        &QuadOptions::default(),
    )?;
    Ok(r[0])
}

/// Find the truncation point X for a semi-infinite integral whose
/// integrand is eventually dominated by C exp(-decay_scale x). The tail
/// past X is bounded by A(X) / decay_scale where A probes |f| on a short
/// stripe; expansion stops once every finite-tolerance component's tail
/// bound is below tol/2.
fn semiinf_cutoff<F>(f: &F, a: f64, m: usize, tols: &[f64], decay_scale: f64) -> (f64, Vec<f64>)
where
    F: Fn(f64, &mut [f64]),
{
    let mut x = a + (4.0 / decay_scale).max(1.0);
    let mut fx = vec![0.0; m];
    let mut tails: Vec<f64> = vec![0.0; m];
    let stripe = 1.5 / decay_scale;
    loop {
        for t in tails.iter_mut() {
            *t = 0.0;
        }
        for k in 0..6 {
            let probe = x + stripe * k as f64 / 6.0;
            f(probe, &mut fx);
            for c in 0..m {
                tails[c] = tails[c].max(1.5 * fx[c].abs() / decay_scale);
            }
        }
        let ok = (0..m).all(|c| !tols[c].is_finite() || tails[c] <= 0.5 * tols[c]);
        if ok || x - a > 1e6 {
            return (x, tails);
        }
        x += (2.0 / decay_scale).max(0.25 * (x - a));
    }
}

/// Vector-valued integration over [a, inf) for integrands eventually
/// dominated by C exp(-decay_scale x).
pub fn integrate_semiinf_vec<F>(
    f: F,
    a: f64,
    tols: &[f64],
    decay_scale: f64,
    hint: OscillationHint,
    opts: &QuadOptions,
) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64, &mut [f64]),
{
    if !(decay_scale > 0.0) {
        return Err(Error::Domain(format!("decay_scale must be > 0, got {decay_scale}")));
    }
    let m = tols.len();
    let (cutoff, tails) = semiinf_cutoff(&f, a, m, tols, decay_scale);
    let half_tols: Vec<f64> = tols.iter().map(|t| 0.5 * t).collect();
    let mut results = integrate_finite_vec(f, a, cutoff, &half_tols, hint, opts)?;
    for (r, tail) in results.iter_mut().zip(tails) {
        r.err += tail;
    }
    Ok(results)
}

/// Integrate a scalar function over [a, inf).
pub fn integrate_semiinf<F>(
    f: F,
    a: f64,
    tol: f64,
    decay_scale: f64,
    hint: OscillationHint,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_semiinf_vec(
        |x, out| out[0] = f(x),
        a,
        &[tol],
        decay_scale,
        hint,
        &QuadOptions::default(),
    )?;
    Ok(r[0])
}

/// Vector-valued integration over the whole line for integrands with a
/// double-exponentially decaying envelope exp(-decay_scale e^|w|): a
/// central window sized from the envelope, then unit segments appended on
/// each side until the last one contributes less than tol/4.
pub fn integrate_line_vec<F>(
    f: F,
    tols: &[f64],
    decay_scale: f64,
    opts: &QuadOptions,
) -> Result<Vec<QuadratureResult>>
where
    F: Fn(f64, &mut [f64]),
{
    if !(decay_scale > 0.0) {
        return Err(Error::Domain(format!("decay_scale must be > 0, got {decay_scale}")));
    }
    let m = tols.len();
    let min_tol = tols.iter().cloned().filter(|t| t.is_finite()).fold(1e-6, f64::min);
    let w0 = ((4.0 / min_tol).ln() / decay_scale).ln().max(0.0) + 1.0;

    let seg_tols: Vec<f64> = tols.iter().map(|t| 0.25 * t).collect();
    let mut results =
        integrate_finite_vec(&f, -w0, w0, &seg_tols, OscillationHint::none(), opts)?;

    // Expand each side until the last segment is negligible for every
    // finite-tolerance component.
    for side in [1.0f64, -1.0f64] {
        let chunk_tols: Vec<f64> = tols.iter().map(|t| 0.125 * t).collect();
        let mut lo = w0;
        for _ in 0..64 {
            let hi = lo + 1.0;
            let (ca, cb) = if side > 0.0 { (lo, hi) } else { (-hi, -lo) };
            let chunk = integrate_finite_vec(&f, ca, cb, &chunk_tols, OscillationHint::none(), opts)?;
            let mut small = true;
            for c in 0..m {
                results[c].value += chunk[c].value;
                results[c].err += chunk[c].err;
                results[c].panels += chunk[c].panels;
                if tols[c].is_finite() && chunk[c].value.abs() > 0.25 * tols[c] {
                    small = false;
                }
            }
            if small {
                // Double-exponential decay: the remaining tail is below the
                // last chunk's own magnitude.
                for c in 0..m {
                    results[c].err += chunk[c].value.abs();
                }
                break;
            }
            lo = hi;
        }
    }
    Ok(results)
}

/// Integrate a scalar function over (-inf, inf).
pub fn integrate_line<F>(f: F, tol: f64, decay_scale: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_line_vec(
        |x, out| out[0] = f(x),
        &[tol],
        decay_scale,
        &QuadOptions::default(),
    )?;
    Ok(r[0])
}
