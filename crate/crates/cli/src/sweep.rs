//! Parameter sweeps: Cartesian grids of band experiments streamed to CSV.
//!
//! Rows are ordered lexicographically by grid index (N, Q, q, H, r, b)
//! and that order is independent of the worker count: rows of a (N, Q)
//! group are computed in parallel from one shared window table and
//! written by a single sequencer. Every per-row computation is a pure
//! function of its parameters, so the CSV is byte-identical for any
//! `--jobs` value. Per-row timings are only recorded under `--timing`
//! (they are the one nondeterministic column; the default writes 0).

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use sieve_bands::arith::gcd;
use sieve_bands::bands::{
    band_sum_decomposition_in, band_sum_direct_in, bound_ratios, BandParams, Method,
};
use sieve_bands::{SieveSpec, ValueTable};

use crate::grids::Grid;
use crate::render::fmt_sig;
use crate::spec_source::SpecSource;

pub const CSV_VERSION_COMMENT: &str = "# sieve-bands v1";

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub source: SpecSource,
    pub n_grid: Grid,
    pub q_grid: Grid,
    pub range_grid: Option<Grid>,
    pub h_grid: Grid,
    pub r_list: Vec<i64>,
    pub b_list: Vec<i64>,
    pub eps_grid: Vec<f64>,
    pub method: Method,
    pub jobs: usize,
    pub timing: bool,
}

pub struct SweepStats {
    pub rows: usize,
    pub skipped_non_coprime: usize,
}

struct Row {
    n: u64,
    q: u64,
    range: u64,
    h: u64,
    r: i64,
    b: i64,
    t: f64,
    bound: Vec<f64>,
    trivial: Vec<f64>,
    theta: f64,
    level: f64,
    elapsed_ms: u64,
    method: Method,
    warnings: Vec<String>,
}

pub fn csv_header(eps_grid: &[f64]) -> String {
    let mut cols = vec![
        "N".to_string(),
        "q".into(),
        "Q".into(),
        "H".into(),
        "r".into(),
        "b".into(),
        "T".into(),
        "abs_T".into(),
    ];
    for &e in eps_grid {
        cols.push(format!("bound_ratio_eps{}", fmt_sig(e)));
    }
    for &e in eps_grid {
        cols.push(format!("trivial_ratio_eps{}", fmt_sig(e)));
    }
    cols.extend(["theta".into(), "level".into(), "elapsed_ms".into(), "method".into()]);
    cols.join(",")
}

fn write_row(out: &mut impl Write, row: &Row) -> Result<()> {
    let mut fields = vec![
        row.n.to_string(),
        row.q.to_string(),
        row.range.to_string(),
        row.h.to_string(),
        row.r.to_string(),
        row.b.to_string(),
        fmt_sig(row.t),
        fmt_sig(row.t.abs()),
    ];
    fields.extend(row.bound.iter().map(|&v| fmt_sig(v)));
    fields.extend(row.trivial.iter().map(|&v| fmt_sig(v)));
    fields.push(fmt_sig(row.theta));
    fields.push(fmt_sig(row.level));
    fields.push(row.elapsed_ms.to_string());
    fields.push(row.method.to_string());
    writeln!(out, "{}", fields.join(",")).context("writing CSV row")?;
    Ok(())
}

/// Run the sweep, streaming CSV to `out` and diagnostics to stderr.
pub fn run_sweep(config: &SweepConfig, out: &mut impl Write) -> Result<SweepStats> {
    if config.source.range_from_grid() && config.range_grid.is_none() {
        bail!("spec tau_Q needs a --Q grid for its range");
    }
    if !config.source.range_from_grid() && config.range_grid.is_some() {
        bail!("--Q conflicts with a spec whose range is already fixed");
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .context("building worker pool")?;

    writeln!(out, "{CSV_VERSION_COMMENT}").context("writing CSV header")?;
    writeln!(out, "{}", csv_header(&config.eps_grid)).context("writing CSV header")?;

    let fixed_spec = if config.source.range_from_grid() {
        None
    } else {
        Some(Arc::new(config.source.build(None)?))
    };

    let mut stats = SweepStats {
        rows: 0,
        skipped_non_coprime: 0,
    };

    for n in config.n_grid.expand(None)? {
        let ranges = match &config.range_grid {
            Some(g) => g.expand(Some(n))?,
            None => vec![fixed_spec.as_ref().expect("fixed spec").range()],
        };
        for range in ranges {
            let spec: Arc<SieveSpec> = match &fixed_spec {
                Some(s) => Arc::clone(s),
                None => Arc::new(config.source.build(Some(range))?),
            };
            let table: Arc<ValueTable> = Arc::new(spec.eval_window(n)?);

            // enumerate tasks of this (N, Q) group in grid order
            let mut tasks: Vec<(u64, u64, i64, i64)> = Vec::new();
            for q in config.q_grid.expand(Some(n))? {
                for h in config.h_grid.expand(Some(n))? {
                    for &r in &config.r_list {
                        for &b in &config.b_list {
                            if gcd(r.rem_euclid(q as i64) as u64, q) != 1 {
                                stats.skipped_non_coprime += 1;
                                continue;
                            }
                            tasks.push((q, h, r, b));
                        }
                    }
                }
            }

            let method = config.method;
            let timing = config.timing;
            let eps = config.eps_grid.clone();
            let rows: Vec<Result<Row>> = pool.install(|| {
                tasks
                    .par_iter()
                    .map(|&(q, h, r, b)| {
                        let start = Instant::now();
                        let p = BandParams::new(q, r, b, n, h)?;
                        let result = match method {
                            Method::Direct => band_sum_direct_in(&table, &p),
                            Method::Decomposition => band_sum_decomposition_in(&table, &p)?,
                        };
                        let rep = bound_ratios(&result, &spec, &p, &eps);
                        let elapsed_ms = if timing {
                            start.elapsed().as_millis() as u64
                        } else {
                            0
                        };
                        Ok(Row {
                            n,
                            q,
                            range,
                            h,
                            r,
                            b,
                            t: result.t,
                            bound: rep.rows.iter().map(|x| x.bound_ratio).collect(),
                            trivial: rep.rows.iter().map(|x| x.trivial_ratio).collect(),
                            theta: rep.theta,
                            level: rep.level,
                            elapsed_ms,
                            method,
                            warnings: p.warnings(),
                        })
                    })
                    .collect()
            });

            for row in rows {
                let row = row?;
                for w in &row.warnings {
                    eprintln!(
                        "warning: N={} q={} H={}: {w}",
                        row.n, row.q, row.h
                    );
                }
                write_row(out, &row)?;
                stats.rows += 1;
            }
        }
    }
    Ok(stats)
}
