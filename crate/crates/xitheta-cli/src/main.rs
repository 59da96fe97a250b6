//! Command-line front end: theta-kernel evaluation, moment tables,
//! coefficient families, polynomial verdicts, grid scans and the bundled
//! verification suites.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 precision failure.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use xitheta::scan::{self, verify, OutFormat, ScanConfig};
use xitheta::{coeffs, moments, polyalg, theta, xi, Error};

#[derive(Parser)]
#[command(name = "xitheta", version, about = "Theta-kernel modulus representation of xi and positivity scans of the derived polynomial families")]
struct Cli {
    /// Absolute tolerance for quadrature and series evaluation.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Quantization resolution (significant decimal digits) for exact
    /// polynomial algebra.
    #[arg(long, global = true, default_value_t = 14)]
    digits: u32,
    /// Worker threads (0 = machine parallelism).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Moment-table cache directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Output format for scan rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the theta kernel psi(y).
    Psi {
        #[arg(long)]
        y: f64,
        /// Override the global tolerance for this evaluation.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate xi(sigma - i t) and the modulus F.
    Xi {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        t: f64,
    },
    /// Build (or load) the moment table at one tau.
    Moments {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        jmax: u32,
        #[arg(long)]
        no_cache: bool,
    },
    /// Coefficient family for f_{tau,n}.
    Coeffs {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: u32,
    },
    /// Polynomial verdicts for f_{tau,n}.
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Sweep a tau grid for each requested n.
    Scan {
        #[arg(long, default_value_t = 1.0 / 128.0)]
        tau_min: f64,
        #[arg(long, default_value_t = 0.5 - 1.0 / 128.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 63)]
        steps: u32,
        /// Comma-separated list of polynomial indices.
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
        n_list: Vec<u32>,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Real-root counts by Sturm and Hermite routes.
    Count {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: u32,
    },
    /// Discriminant: subresultant route plus the closed form for n = 1.
    Disc {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: u32,
    },
    /// Minimum over s = t^2 >= 0 and the positivity margin.
    Min {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: u32,
    },
    /// Random-polynomial agreement suite for the two root counters.
    Selftest,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Modulus identity on a (tau, t) grid.
    Thm1 {
        #[arg(long, value_delimiter = ',')]
        tau_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        t_list: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
    },
    /// Closed-form gradient against finite differences.
    Grad {
        #[arg(long, value_delimiter = ',')]
        tau_list: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        t_list: Option<Vec<f64>>,
    },
    /// Every suite.
    All,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("warning: thread pool setup failed: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::QuadBudget { .. } | Error::SeriesPrecision { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> xitheta::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn table_for(cli: &Cli, tau: f64, j_max: u32, use_cache: bool) -> xitheta::Result<moments::MomentTable> {
    if use_cache {
        if let Some(dir) = &cli.cache_dir {
            if let Some(t) = scan::cache::cache_load(tau, cli.tol, j_max, dir)? {
                return Ok(t);
            }
        }
    }
    let table = moments::build_moment_table(tau, j_max, cli.tol)?;
    if use_cache {
        if let Some(dir) = &cli.cache_dir {
            scan::cache::cache_store(&table, dir)?;
        }
    }
    Ok(table)
}

fn run(cli: &Cli) -> xitheta::Result<ExitCode> {
    match &cli.cmd {
        Cmd::Psi { y, tol } => {
            let spec = theta::ToleranceSpec::abs(tol.unwrap_or(cli.tol))?;
            let p = theta::psi(*y, &spec)?;
            let doc = serde_json::json!({ "y": p.y, "value": p.value, "err": p.err });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Xi { sigma, t } => {
            let s = num_complex::Complex64::new(*sigma, -t);
            let (value, err) = xi::xi_direct(s, cli.tol)?;
            let (f, f_err) = xi::f_direct(sigma - 0.5, *t, cli.tol)?;
            let doc = serde_json::json!({
                "sigma": sigma, "t": t,
                "re": value.re, "im": value.im, "err": err,
                "F": f, "F_err": f_err,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Moments { tau, jmax, no_cache } => {
            let table = table_for(cli, *tau, *jmax, !no_cache)?;
            let triples = |v: &[(f64, f64)]| {
                v.iter()
                    .enumerate()
                    .map(|(k, &(value, err))| serde_json::json!([2 * k as u32, value, err]))
                    .collect::<Vec<_>>()
            };
            let doc = serde_json::json!({
                "tau": table.tau, "tol": table.tol_used, "j_max": table.j_max,
                "S": triples(&table.s), "A": triples(&table.a),
                "Jplus": table.jplus, "JminusLog": table.jminus_log,
                "I1": table.i1, "I2": table.i2, "I3": table.i3,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Coeffs { tau, n } => {
            let table = table_for(cli, *tau, 4 * n, true)?;
            let set = coeffs::build_coefficient_set(&table, *n)?;
            let doc = serde_json::json!({
                "tau": set.tau, "n": set.n,
                "a": set.a.iter().map(|&(v, _)| v).collect::<Vec<_>>(),
                "trail_odd": set.trail_odd.0, "trail_even": set.trail_even.0,
                "errs": {
                    "a": set.a.iter().map(|&(_, e)| e).collect::<Vec<_>>(),
                    "trail_odd": set.trail_odd.1, "trail_even": set.trail_even.1,
                },
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Poly { cmd } => run_poly(cli, cmd),
        Cmd::Scan { tau_min, tau_max, steps, n_list } => {
            let cfg = ScanConfig {
                tau_min: *tau_min,
                tau_max: *tau_max,
                steps: *steps,
                n_list: n_list.clone(),
                tol: cli.tol,
                digits: cli.digits,
                threads: 0, // pool already configured globally
                cache_dir: cli.cache_dir.clone(),
                out_format: match cli.format {
                    Format::Csv => OutFormat::Csv,
                    Format::Jsonl => OutFormat::Jsonl,
                },
            };
            let records = scan::run_scan(&cfg)?;
            let text = match cfg.out_format {
                OutFormat::Csv => scan::to_csv(&records),
                OutFormat::Jsonl => scan::to_jsonl(&records),
            };
            emit(cli, &text)?;
            let bad: Vec<_> = records
                .iter()
                .filter(|r| r.positivity != scan::Positivity::Positive || r.error.is_some())
                .collect();
            for r in &bad {
                eprintln!(
                    "non-positive or failed row: tau = {}, n = {}, positivity = {}, error = {:?}, repro: {}",
                    r.tau,
                    r.n,
                    r.positivity,
                    r.error,
                    r.repro.as_deref().unwrap_or("-")
                );
            }
            Ok(if bad.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Cmd::Verify { cmd } => run_verify(cli, cmd),
    }
}

fn run_poly(cli: &Cli, cmd: &PolyCmd) -> xitheta::Result<ExitCode> {
    match cmd {
        PolyCmd::Count { tau, n } => {
            let table = table_for(cli, *tau, 4 * n, true)?;
            let f = coeffs::build_f(&table, *n)?;
            let sturm = polyalg::count_with_stability(&f, cli.digits, polyalg::CountMethod::Sturm)?;
            let hermite =
                polyalg::count_with_stability(&f, cli.digits, polyalg::CountMethod::Hermite)?;
            let doc = serde_json::json!({
                "tau": tau, "n": n,
                "sturm": { "n_real": sturm.n_real, "n_distinct_complex": sturm.n_distinct_complex, "stable": sturm.stable },
                "hermite": { "n_real": hermite.n_real, "n_distinct_complex": hermite.n_distinct_complex, "stable": hermite.stable },
                "agree": sturm.n_real == hermite.n_real
                    && sturm.n_distinct_complex == hermite.n_distinct_complex,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        PolyCmd::Disc { tau, n } => {
            let table = table_for(cli, *tau, 4 * n, true)?;
            let f = coeffs::build_f(&table, *n)?;
            let exact = polyalg::discriminant(&polyalg::quantize(&f, cli.digits))?;
            let closed = (*n == 1)
                .then(|| polyalg::discriminant_biquadratic(f.c[0].0, f.c[1].0, f.c[2].0));
            let doc = serde_json::json!({
                "tau": tau, "n": n,
                "discr": polyalg::rational_as_f64(&exact),
                "discr_closed": closed,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        PolyCmd::Min { tau, n } => {
            let table = table_for(cli, *tau, 4 * n, true)?;
            let f = coeffs::build_f(&table, *n)?;
            let m = polyalg::min_nonneg_s(&f);
            let doc = serde_json::json!({
                "tau": tau, "n": n,
                "s_min": m.s_min, "value": m.value,
                "margin": m.value - 10.0 * f.err_at_s(m.s_min),
                "bounded_window": m.bounded_window,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        PolyCmd::Selftest => {
            let report = polyalg::selftest(200, 8, 0x7ab1e5)?;
            let doc = serde_json::json!({
                "checked": report.checked,
                "disagreements": report.disagreements,
                "first_disagreement": report.first_disagreement,
            });
            emit(cli, &format!("{doc}\n"))?;
            Ok(if report.disagreements == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}

fn run_verify(cli: &Cli, cmd: &VerifyCmd) -> xitheta::Result<ExitCode> {
    match cmd {
        VerifyCmd::Thm1 { tau_list, t_list, rel_tol } => {
            let taus = tau_list.clone().unwrap_or_else(|| verify::THM1_TAUS.to_vec());
            let ts = t_list.clone().unwrap_or_else(|| verify::THM1_TS.to_vec());
            let (suite, points) = verify::theorem1_suite(&taus, &ts, *rel_tol, cli.tol)?;
            let mut text = String::new();
            for p in &points {
                let doc = serde_json::json!({
                    "point": { "tau": p.tau, "t": p.t },
                    "lhs": p.lhs, "rhs": p.rhs, "rel_err": p.rel_err, "pass": p.pass,
                });
                text.push_str(&format!("{doc}\n"));
            }
            emit(cli, &text)?;
            eprintln!(
                "thm1: {}/{} points pass, worst rel err {:.3e}",
                points.iter().filter(|p| p.pass).count(),
                points.len(),
                suite.worst_residual
            );
            Ok(if suite.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        VerifyCmd::Grad { tau_list, t_list } => {
            let taus = tau_list.clone().unwrap_or_else(|| verify::GRAD_TAUS.to_vec());
            let ts = t_list.clone().unwrap_or_else(|| verify::GRAD_TS.to_vec());
            let (suite, points) = verify::gradient_suite(&taus, &ts, cli.tol)?;
            let mut text = String::new();
            for p in &points {
                let doc = serde_json::json!({
                    "point": { "tau": p.tau, "t": p.t },
                    "lhs": p.lhs, "rhs": p.rhs, "rel_err": p.rel_err, "pass": p.pass,
                });
                text.push_str(&format!("{doc}\n"));
            }
            emit(cli, &text)?;
            eprintln!(
                "grad: {}/{} points pass, worst rel err {:.3e}",
                points.iter().filter(|p| p.pass).count(),
                points.len(),
                suite.worst_residual
            );
            Ok(if suite.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        VerifyCmd::All => {
            let report = verify::verify_all(cli.tol)?;
            let mut text = String::new();
            for s in &report.suites {
                let doc = serde_json::json!({
                    "suite": s.name,
                    "checks": s.checks,
                    "passed": s.passed(),
                    "worst_residual": s.worst_residual,
                    "failures": s.failures,
                });
                text.push_str(&format!("{doc}\n"));
            }
            emit(cli, &text)?;
            eprintln!(
                "verify: {}/{} suites pass",
                report.suites.iter().filter(|s| s.passed()).count(),
                report.suites.len()
            );
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
    }
}
