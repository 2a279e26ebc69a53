//! Resolving `--spec` arguments: a builder name with parameters, or a
//! path to a plain-text transform file.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use sieve_bands::sieve::parse_spec;
use sieve_bands::SieveSpec;

/// A spec source as given on the command line.
#[derive(Debug, Clone)]
pub enum SpecSource {
    /// `const1`: f ≡ 1.
    ConstOne,
    /// `tau_Q` with the range from the sweep's Q grid.
    TauQFromGrid,
    /// `tau_Q:<Q>` with a fixed range.
    TauQ(u64),
    /// A transform file.
    File(String),
}

impl SpecSource {
    pub fn parse(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed {
            "const1" => return Ok(SpecSource::ConstOne),
            "tau_Q" => return Ok(SpecSource::TauQFromGrid),
            _ => {}
        }
        if let Some(param) = trimmed.strip_prefix("tau_Q:") {
            let param = param.strip_prefix("Q=").unwrap_or(param);
            let q: u64 = param
                .parse()
                .with_context(|| format!("invalid tau_Q range {param:?}"))?;
            if q == 0 {
                bail!("tau_Q range must be positive");
            }
            return Ok(SpecSource::TauQ(q));
        }
        if Path::new(trimmed).exists() {
            return Ok(SpecSource::File(trimmed.to_string()));
        }
        bail!(
            "unknown spec source {trimmed:?}: expected const1, tau_Q, tau_Q:<Q>, or an existing file"
        )
    }

    /// Does the range come from the sweep's Q grid?
    pub fn range_from_grid(&self) -> bool {
        matches!(self, SpecSource::TauQFromGrid)
    }

    /// Build the spec; `grid_q` supplies the range for `tau_Q`.
    pub fn build(&self, grid_q: Option<u64>) -> Result<SieveSpec> {
        match self {
            SpecSource::ConstOne => Ok(SieveSpec::const_one()),
            SpecSource::TauQ(q) => Ok(SieveSpec::tau_q(*q)?),
            SpecSource::TauQFromGrid => {
                let q = grid_q.ok_or_else(|| {
                    anyhow!("spec tau_Q needs a --Q value or grid to set its range")
                })?;
                Ok(SieveSpec::tau_q(q)?)
            }
            SpecSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading spec file {path}"))?;
                let label = Path::new(path)
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.clone());
                parse_spec(&text, label).with_context(|| format!("parsing spec file {path}"))
            }
        }
    }
}
