//! Grid sweeps over (tau, n): coefficient assembly, positivity margins,
//! root counts, discriminants by two routes, and machine-readable reports.
//!
//! Per-cell failures are recorded in the row and never abort a sweep.
//! Moment tables are cached per (tau, tol, j_max) with atomic-rename
//! discipline, so repeated warm-cache scans are deterministic.

pub mod cache;
pub mod verify;

use crate::coeffs::{self, EvenPolynomial};
use crate::error::Result;
use crate::moments::{build_moment_table, MomentTable};
use crate::polyalg::{self, CountMethod};
use rayon::prelude::*;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    Inconclusive,
    Violated,
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Positivity::Positive => "positive",
            Positivity::Inconclusive => "inconclusive",
            Positivity::Violated => "violated",
        })
    }
}

/// Sweep configuration. The default grid spans [1/128, 1/2 - 1/128] with
/// 63 points, keeping clear of the degenerate endpoints tau = 0 and
/// tau = 1/2.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub tau_min: f64,
    pub tau_max: f64,
    pub steps: u32,
    pub n_list: Vec<u32>,
    pub tol: f64,
    pub digits: u32,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub out_format: OutFormat,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            tau_min: 1.0 / 128.0,
            tau_max: 0.5 - 1.0 / 128.0,
            steps: 63,
            n_list: vec![1, 2],
            tol: 1e-10,
            digits: 14,
            threads: 0,
            cache_dir: None,
            out_format: OutFormat::Csv,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min > 0.0 && self.tau_min <= self.tau_max && self.tau_max < 1.5) {
            return Err(crate::Error::Config(format!(
                "tau range must satisfy 0 < tau_min <= tau_max < 1.5, got [{}, {}]",
                self.tau_min, self.tau_max
            )));
        }
        if self.steps == 0 {
            return Err(crate::Error::Config("steps must be >= 1".into()));
        }
        if self.n_list.is_empty() || self.n_list.iter().any(|&n| n == 0 || n > 4) {
            return Err(crate::Error::Config(
                "n_list must be nonempty with entries in 1..=4".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(crate::Error::Config("tol must be positive".into()));
        }
        Ok(())
    }

    /// Uniform tau grid, inclusive of the configured bounds (which
    /// themselves exclude the degenerate endpoints).
    pub fn tau_grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.tau_min];
        }
        let h = (self.tau_max - self.tau_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.tau_min + i as f64 * h).collect()
    }
}

/// One scanned (tau, n) verdict.
#[derive(Debug, Clone)]
pub struct ScanRecord {
    pub tau: f64,
    pub n: u32,
    pub a: Vec<(f64, f64)>,
    pub trail_odd: (f64, f64),
    pub trail_even: (f64, f64),
    pub positivity: Positivity,
    /// Minimum over s >= 0 minus ten times the propagated error there.
    pub margin: f64,
    pub n_real: usize,
    pub stable: bool,
    pub discr: f64,
    pub discr_closed: Option<f64>,
    pub corollary_gap: Option<f64>,
    pub error: Option<String>,
    pub repro: Option<String>,
    pub runtime_ms: u64,
}

fn get_table(tau: f64, j_max: u32, tol: f64, cache_dir: Option<&Path>) -> Result<MomentTable> {
    if let Some(dir) = cache_dir {
        if let Some(table) = cache::cache_load(tau, tol, j_max, dir)? {
            return Ok(table);
        }
    }
    let table = build_moment_table(tau, j_max, tol)?;
    if let Some(dir) = cache_dir {
        if let Err(e) = cache::cache_store(&table, dir) {
            eprintln!("warning: cache store failed: {e}");
        }
    }
    Ok(table)
}

struct CellOutcome {
    f: EvenPolynomial,
    positivity: Positivity,
    margin: f64,
    n_real: usize,
    stable: bool,
    discr: f64,
    mismatch: Option<String>,
}

fn analyze_cell(
    table: &MomentTable,
    n: u32,
    digits: u32,
) -> Result<(EvenPolynomial, f64, f64)> {
    let f = coeffs::build_f(table, n)?;
    let m = polyalg::min_nonneg_s(&f);
    let margin = m.value - 10.0 * f.err_at_s(m.s_min);
    let _ = digits;
    Ok((f, m.value, margin))
}

fn count_cell(f: &EvenPolynomial, digits: u32) -> Result<(usize, bool, f64, Option<String>)> {
    let sturm = polyalg::count_with_stability(f, digits, CountMethod::Sturm)?;
    let hermite = polyalg::count_with_stability(f, digits, CountMethod::Hermite)?;
    let mismatch = if sturm.n_real != hermite.n_real
        || sturm.n_distinct_complex != hermite.n_distinct_complex
    {
        Some(format!(
            "root-count mismatch: sturm ({}, {}) vs hermite ({}, {})",
            sturm.n_real, sturm.n_distinct_complex, hermite.n_real, hermite.n_distinct_complex
        ))
    } else {
        None
    };
    let discr = polyalg::rational_as_f64(&polyalg::discriminant(&polyalg::quantize(f, digits))?);
    Ok((sturm.n_real, sturm.stable && hermite.stable, discr, mismatch))
}

fn scan_cell(
    tau: f64,
    n: u32,
    table: &MomentTable,
    cfg: &ScanConfig,
    cache_dir: Option<&Path>,
) -> ScanRecord {
    let start = Instant::now();
    let repro = format!(
        "xitheta scan --tau-min {tau} --tau-max {tau} --steps 1 --n-list {n} --tol {:e} --digits {}",
        cfg.tol, cfg.digits
    );

    let outcome: Result<CellOutcome> = (|| {
        let (mut f, mut value, mut margin) = analyze_cell(table, n, cfg.digits)?;
        let mut digits = cfg.digits;
        if margin <= 0.0 && value > 0.0 {
            // near-degenerate: one automatic retry at tol/100 and digits + 8
            let tight = get_table(tau, table.j_max, cfg.tol / 100.0, cache_dir)?;
            digits = cfg.digits + 8;
            let redo = analyze_cell(&tight, n, digits)?;
            f = redo.0;
            value = redo.1;
            margin = redo.2;
        }
        let positivity = if value < 0.0 {
            Positivity::Violated
        } else if margin > 0.0 {
            Positivity::Positive
        } else {
            Positivity::Inconclusive
        };
        let (n_real, stable, discr, mismatch) = count_cell(&f, digits)?;
        Ok(CellOutcome { f, positivity, margin, n_real, stable, discr, mismatch })
    })();

    let runtime_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok(out) => {
            let set_len = out.f.c.len();
            let (discr_closed, corollary_gap) = if n == 1 {
                let closed =
                    polyalg::discriminant_biquadratic(out.f.c[0].0, out.f.c[1].0, out.f.c[2].0);
                let gap = polyalg::corollary_iv_gap(out.f.c[0].0, out.f.c[1].0, out.f.c[2].0)
                    .map(|g| g.gap)
                    .ok();
                (Some(closed), gap)
            } else {
                (None, None)
            };
            let needs_repro = out.positivity != Positivity::Positive || out.mismatch.is_some();
            ScanRecord {
                tau,
                n,
                a: out.f.c[..set_len - 2].to_vec(),
                trail_odd: out.f.c[set_len - 2],
                trail_even: out.f.c[set_len - 1],
                positivity: out.positivity,
                margin: out.margin,
                n_real: out.n_real,
                stable: out.stable,
                discr: out.discr,
                discr_closed,
                corollary_gap,
                error: out.mismatch,
                repro: needs_repro.then_some(repro),
                runtime_ms,
            }
        }
        Err(e) => ScanRecord {
            tau,
            n,
            a: Vec::new(),
            trail_odd: (f64::NAN, f64::NAN),
            trail_even: (f64::NAN, f64::NAN),
            positivity: Positivity::Inconclusive,
            margin: f64::NAN,
            n_real: 0,
            stable: false,
            discr: f64::NAN,
            discr_closed: None,
            corollary_gap: None,
            error: Some(e.to_string()),
            repro: Some(repro),
            runtime_ms,
        },
    }
}

fn scan_grid(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let taus = cfg.tau_grid();
    let j_max = 4 * cfg.n_list.iter().copied().max().unwrap_or(1);
    let cache_dir = cfg.cache_dir.as_deref();
    let rows: Vec<Vec<ScanRecord>> = taus
        .par_iter()
        .map(|&tau| match get_table(tau, j_max, cfg.tol, cache_dir) {
            Ok(table) => cfg
                .n_list
                .iter()
                .map(|&n| scan_cell(tau, n, &table, cfg, cache_dir))
                .collect(),
            Err(e) => cfg
                .n_list
                .iter()
                .map(|&n| ScanRecord {
                    tau,
                    n,
                    a: Vec::new(),
                    trail_odd: (f64::NAN, f64::NAN),
                    trail_even: (f64::NAN, f64::NAN),
                    positivity: Positivity::Inconclusive,
                    margin: f64::NAN,
                    n_real: 0,
                    stable: false,
                    discr: f64::NAN,
                    discr_closed: None,
                    corollary_gap: None,
                    error: Some(e.to_string()),
                    repro: None,
                    runtime_ms: 0,
                })
                .collect(),
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Run the sweep: one record per (tau, n), ordered by the grid then by
/// n_list, deterministic given the configuration and cache state.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    cfg.validate()?;
    if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| crate::Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| scan_grid(cfg))
    } else {
        scan_grid(cfg)
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Fixed-order CSV: tau, n, a0..a{2N-2}, trail_odd, trail_even, positivity,
/// margin, n_real, discr, discr_closed, corollary_gap, runtime_ms, where N
/// is the largest n among the records. Rows with smaller n leave their
/// unused a-columns empty.
pub fn to_csv(records: &[ScanRecord]) -> String {
    let n_max = records.iter().map(|r| r.n).max().unwrap_or(1);
    let a_cols = (2 * n_max - 1) as usize;
    let mut out = String::from("tau,n");
    for k in 0..a_cols {
        out.push_str(&format!(",a{k}"));
    }
    out.push_str(",trail_odd,trail_even,positivity,margin,n_real,discr,discr_closed,corollary_gap,runtime_ms\n");
    for r in records {
        out.push_str(&format!("{},{}", fmt_f64(r.tau), r.n));
        for k in 0..a_cols {
            out.push(',');
            if let Some(&(v, _)) = r.a.get(k) {
                out.push_str(&fmt_f64(v));
            }
        }
        out.push_str(&format!(
            ",{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.trail_odd.0),
            fmt_f64(r.trail_even.0),
            r.positivity,
            fmt_f64(r.margin),
            r.n_real,
            fmt_f64(r.discr),
            fmt_opt(r.discr_closed),
            fmt_opt(r.corollary_gap),
            r.runtime_ms
        ));
    }
    out
}

/// JSONL mirror of the CSV, field for field.
pub fn to_jsonl(records: &[ScanRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let row = serde_json::json!({
            "tau": r.tau,
            "n": r.n,
            "a": r.a.iter().map(|&(v, _)| v).collect::<Vec<f64>>(),
            "trail_odd": r.trail_odd.0,
            "trail_even": r.trail_even.0,
            "positivity": r.positivity.to_string(),
            "margin": r.margin,
            "n_real": r.n_real,
            "discr": r.discr,
            "discr_closed": r.discr_closed,
            "corollary_gap": r.corollary_gap,
            "runtime_ms": r.runtime_ms,
        });
        out.push_str(&row.to_string());
        out.push('\n');
    }
    out
}
