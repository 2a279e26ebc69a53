//! Log-log least squares: empirical growth exponents from sweep CSVs.

use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    /// Slope of ln y against ln x: the empirical growth exponent.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in ln y.
    pub rms_residual: f64,
    pub used: usize,
    pub skipped: usize,
}

/// Least-squares fit of ln y on ln x. Pairs with a nonpositive coordinate
/// are skipped and counted; at least 3 usable pairs are required.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    assert_eq!(xs.len(), ys.len());
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    let mut skipped = 0usize;
    for (&x, &y) in xs.iter().zip(ys) {
        if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
            lx.push(x.ln());
            ly.push(y.ln());
        } else {
            skipped += 1;
        }
    }
    let n = lx.len();
    if n < 3 {
        bail!("need at least 3 rows with positive x and y, got {n} ({skipped} skipped)");
    }
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if sxx == 0.0 {
        bail!("x column is constant; the exponent is undefined");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for i in 0..n {
        let r = ly[i] - (slope * lx[i] + intercept);
        ss += r * r;
    }
    Ok(FitResult {
        slope,
        intercept,
        rms_residual: (ss / nf).sqrt(),
        used: n,
        skipped,
    })
}

/// Extract two named columns from a sweep CSV ('#' comment lines skipped,
/// first non-comment line is the header).
pub fn read_csv_columns(path: &Path, x_col: &str, y_col: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading CSV {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines.next().context("CSV has no header row")?;
    let cols: Vec<&str> = header.split(',').collect();
    let xi = cols
        .iter()
        .position(|&c| c == x_col)
        .with_context(|| format!("no column {x_col:?} (have: {})", header))?;
    let yi = cols
        .iter()
        .position(|&c| c == y_col)
        .with_context(|| format!("no column {y_col:?} (have: {})", header))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            bail!("row {} has {} fields, header has {}", i + 2, fields.len(), cols.len());
        }
        let parse = |s: &str, col: &str| -> Result<f64> {
            s.parse::<f64>()
                .with_context(|| format!("row {}: bad {col} value {s:?}", i + 2))
        };
        xs.push(parse(fields[xi], x_col)?);
        ys.push(parse(fields[yi], y_col)?);
    }
    Ok((xs, ys))
}
