//! Command-line front end: evaluate sieve functions, measure band
//! discrepancies, sweep parameter grids to CSV, fit growth exponents,
//! and run the verification suites.

mod fit;
mod grids;
mod render;
mod spec_source;
mod sweep;
mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sieve_bands::bands::{
    band_sum_decomposition_in, band_sum_direct_in, bound_ratios, BandParams, Method,
};
use sieve_bands::extremal::build_extremal;

use grids::{parse_eps_list, parse_signed_list, Grid};
use render::{fmt_sig, fmt_value};
use spec_source::SpecSource;
use sweep::{run_sweep, SweepConfig, CSV_VERSION_COMMENT};

const DEFAULT_EPS: &str = "0.05,0.1,0.2";

#[derive(Parser)]
#[command(
    name = "sieve-bands",
    version,
    about = "Sieve functions over short arithmetic bands: evaluation, discrepancies, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Decomp,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate f(n), a window table, or the spec's norms.
    Eval {
        /// Spec source: const1, `tau_Q:<Q>`, or a transform file.
        #[arg(long)]
        spec: String,
        /// Evaluate f at a single n.
        #[arg(short = 'n', long)]
        n: Option<u64>,
        /// Print the window table on (N, 2N].
        #[arg(long = "window")]
        window: Option<u64>,
        /// ε grid for the norm report.
        #[arg(long, default_value = DEFAULT_EPS)]
        eps: String,
    },
    /// Band discrepancy T_f(q, r, b, N, H).
    Bands {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: i64,
        #[arg(long, default_value_t = 0)]
        b: i64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "H")]
        h: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
        /// ε grid for the bound-ratio report.
        #[arg(long, default_value = DEFAULT_EPS)]
        eps: String,
    },
    /// Sweep a parameter grid and write ResultRow CSV.
    Sweep {
        #[arg(long)]
        spec: String,
        /// N grid: list or from:to:steps (geometric).
        #[arg(long = "N")]
        n: String,
        /// q grid: list, geometric, or `pow:<e>` (per-N ⌊N^e⌋).
        #[arg(long)]
        q: String,
        /// Range grid for tau_Q (same forms as --q).
        #[arg(long = "Q")]
        big_q: Option<String>,
        /// H grid (same forms as --q).
        #[arg(long = "H")]
        h: String,
        /// r values (signed list).
        #[arg(long, default_value = "1")]
        r: String,
        /// b values (signed list).
        #[arg(long, default_value = "0")]
        b: String,
        #[arg(long, default_value = DEFAULT_EPS)]
        eps: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
        /// Record real per-row timings (makes the CSV nondeterministic).
        #[arg(long, default_value_t = false)]
        timing: bool,
    },
    /// Least-squares exponent fit of ln y against ln x on a sweep CSV.
    Fit {
        /// CSV path (a sweep output).
        csv: PathBuf,
        /// x column name.
        #[arg(long)]
        x: String,
        /// y column name.
        #[arg(long)]
        y: String,
    },
    /// Run a verification suite (identities, spectra, roundtrips,
    /// extremal, constants, all).
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the sign-packed extremal instance and report its metrics.
    Extremal {
        #[arg(long)]
        q: u64,
        #[arg(long = "Q")]
        big_q: u64,
        #[arg(long = "N")]
        n: u64,
        #[arg(long = "H")]
        h: u64,
        /// Dump per-d rows (d, inner, g, in_S) as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Eval { spec, n, window, eps } => cmd_eval(&spec, n, window, &eps),
        Cmd::Bands {
            spec,
            q,
            r,
            b,
            n,
            h,
            method,
            eps,
        } => cmd_bands(&spec, q, r, b, n, h, method, &eps),
        Cmd::Sweep {
            spec,
            n,
            q,
            big_q,
            h,
            r,
            b,
            eps,
            out,
            jobs,
            method,
            timing,
        } => cmd_sweep(&spec, &n, &q, big_q.as_deref(), &h, &r, &b, &eps, &out, jobs, method, timing),
        Cmd::Fit { csv, x, y } => cmd_fit(&csv, &x, &y),
        Cmd::Verify { suite, seed } => {
            if verify::run_suite(&suite, seed)? {
                Ok(())
            } else {
                bail!("suite {suite} failed (seed {seed})")
            }
        }
        Cmd::Extremal { q, big_q, n, h, out } => cmd_extremal(q, big_q, n, h, out.as_deref()),
    }
}

fn cmd_eval(spec_arg: &str, n: Option<u64>, window: Option<u64>, eps: &str) -> Result<()> {
    let spec = SpecSource::parse(spec_arg)?.build(None)?;
    let integer = spec.transform().is_integer_valued();
    if let Some(n) = n {
        println!("{}", fmt_value(spec.eval(n)?, integer));
        return Ok(());
    }
    if let Some(n) = window {
        let table = spec.eval_window(n)?;
        for (m, v) in table.iter() {
            println!("{m} {}", fmt_value(v, table.is_integer_valued()));
        }
        return Ok(());
    }
    let eps_grid = parse_eps_list(eps)?;
    println!("label = {}", spec.label());
    println!("Q = {}", spec.range());
    println!("sup|g| = {}", fmt_sig(spec.sup_norm()));
    for e in eps_grid {
        println!("norm(eps={}) = {}", fmt_sig(e), fmt_sig(spec.eps_norm(e)));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bands(
    spec_arg: &str,
    q: u64,
    r: i64,
    b: i64,
    n: u64,
    h: u64,
    method: MethodArg,
    eps: &str,
) -> Result<()> {
    let spec = SpecSource::parse(spec_arg)?.build(None)?;
    let eps_grid = parse_eps_list(eps)?;
    let p = BandParams::new(q, r, b, n, h)?;
    for w in p.warnings() {
        eprintln!("warning: {w}");
    }
    let table = spec.eval_window(n)?;
    let print_result = |res: &sieve_bands::BandResult| {
        println!("method = {}", res.method);
        println!("band_total = {}", fmt_sig(res.band_total));
        println!("main_term = {}", fmt_sig(res.main_term));
        println!("T = {}", fmt_sig(res.t));
    };
    let results = match method {
        MethodArg::Direct => vec![band_sum_direct_in(&table, &p)],
        MethodArg::Decomp => vec![band_sum_decomposition_in(&table, &p)?],
        MethodArg::Both => vec![
            band_sum_direct_in(&table, &p),
            band_sum_decomposition_in(&table, &p)?,
        ],
    };
    for (i, res) in results.iter().enumerate() {
        if i > 0 {
            println!();
        }
        print_result(res);
    }
    if results.len() == 2 {
        let diff = (results[0].t - results[1].t).abs();
        let tol = 1e-8 * (1.0 + table.abs_total());
        let status = if diff <= tol { "OK" } else { "MISMATCH" };
        println!();
        println!("difference = {} (tolerance {}) {status}", fmt_sig(diff), fmt_sig(tol));
        if diff > tol {
            bail!("direct and decomposition evaluations disagree");
        }
    }
    let rep = bound_ratios(&results[0], &spec, &p, &eps_grid);
    println!();
    println!("theta = {}", fmt_sig(rep.theta));
    println!("level = {}", fmt_sig(rep.level));
    for row in &rep.rows {
        println!(
            "eps = {}: bound_ratio = {}, trivial_ratio = {}",
            fmt_sig(row.eps),
            fmt_sig(row.bound_ratio),
            fmt_sig(row.trivial_ratio)
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    spec_arg: &str,
    n: &str,
    q: &str,
    big_q: Option<&str>,
    h: &str,
    r: &str,
    b: &str,
    eps: &str,
    out: &std::path::Path,
    jobs: usize,
    method: MethodArg,
    timing: bool,
) -> Result<()> {
    let method = match method {
        MethodArg::Direct => Method::Direct,
        MethodArg::Decomp => Method::Decomposition,
        MethodArg::Both => bail!("sweep rows carry one method; use direct or decomp"),
    };
    let config = SweepConfig {
        source: SpecSource::parse(spec_arg)?,
        n_grid: Grid::parse(n)?,
        q_grid: Grid::parse(q)?,
        range_grid: big_q.map(Grid::parse).transpose()?,
        h_grid: Grid::parse(h)?,
        r_list: parse_signed_list(r)?,
        b_list: parse_signed_list(b)?,
        eps_grid: parse_eps_list(eps)?,
        method,
        jobs,
        timing,
    };
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut writer = BufWriter::new(file);
    let stats = run_sweep(&config, &mut writer)?;
    writer.flush().context("flushing CSV")?;
    eprintln!(
        "wrote {} rows to {} ({} non-coprime pairs skipped)",
        stats.rows,
        out.display(),
        stats.skipped_non_coprime
    );
    Ok(())
}

fn cmd_fit(csv: &std::path::Path, x: &str, y: &str) -> Result<()> {
    let (xs, ys) = fit::read_csv_columns(csv, x, y)?;
    let fit = fit::fit_loglog(&xs, &ys)?;
    println!("slope = {}", fmt_sig(fit.slope));
    println!("intercept = {}", fmt_sig(fit.intercept));
    println!("rms_residual = {}", fmt_sig(fit.rms_residual));
    println!("rows_used = {}", fit.used);
    println!("rows_skipped = {}", fit.skipped);
    Ok(())
}

fn cmd_extremal(q: u64, big_q: u64, n: u64, h: u64, out: Option<&std::path::Path>) -> Result<()> {
    let inst = build_extremal(q, big_q, n, h)?;
    let (lhs, rhs) = inst.identity_sides()?;
    let rep = inst.lower_bound_report()?;
    println!("q = {q}  Q = {big_q}  N = {n}  H = {h}");
    println!("|S| = {} (fraction {})", inst.s_size(), fmt_sig(rep.s_fraction));
    println!("|E| = {}", inst.e_size());
    println!("|S| majorant = {}", rep.s_majorant);
    println!(
        "identity: |T| = {}  sum|inner| = {}  diff = {}",
        fmt_sig(lhs),
        fmt_sig(rhs),
        fmt_sig((lhs - rhs).abs())
    );
    println!("ratio |T| q/(N H) = {}", fmt_sig(rep.ratio));
    if let Some(path) = out {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{CSV_VERSION_COMMENT}")?;
        writeln!(w, "d,inner,g,in_S")?;
        for (d, inner, g, in_s) in inst.rows() {
            writeln!(w, "{d},{},{g},{}", fmt_sig(inner), u8::from(in_s))?;
        }
        w.flush()?;
        eprintln!("wrote {} rows to {}", inst.range(), path.display());
    }
    Ok(())
}
