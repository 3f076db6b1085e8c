//! Run configuration: a TOML file with one section per subcommand plus a
//! top-level `hbar`. Every value is optional; command-line flags override
//! file values, and anything still unset falls back to the built-in defaults
//! (the canonical displaced-pair parameters and grids).

use serde::Deserialize;
use std::path::Path;

use crate::error::{PhaseSpaceError, Result};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub hbar: Option<f64>,
    #[serde(default, rename = "scan-displacement")]
    pub scan_displacement: PairScanSection,
    #[serde(default, rename = "positivity-scan")]
    pub positivity_scan: PositivitySection,
    #[serde(default, rename = "fock-sweep")]
    pub fock_sweep: FockSweepSection,
    #[serde(default)]
    pub tomography: TomographySection,
}

/// Displaced-pair shape parameters plus a displacement grid.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairScanSection {
    pub s_q: Option<f64>,
    pub s_p: Option<f64>,
    pub k_q: Option<f64>,
    pub k_p: Option<f64>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub d_steps: Option<usize>,
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositivitySection {
    pub s_q: Option<f64>,
    pub s_p: Option<f64>,
    pub k_q: Option<f64>,
    pub k_p: Option<f64>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub d_steps: Option<usize>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub n: Option<usize>,
    /// Kernel dimension guard override (default 10000).
    pub max_dim: Option<usize>,
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockSweepSection {
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub p_steps: Option<usize>,
    pub out: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomographySection {
    /// "vacuum", "fock1", "mixture" (uses `p`), or "file" (uses
    /// `wigner_file`).
    pub source: Option<String>,
    pub p: Option<f64>,
    pub wigner_file: Option<String>,
    pub angles: Option<usize>,
    pub samples: Option<usize>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub cutoff: Option<f64>,
    pub dump_wigner: Option<String>,
    pub dump_marginals: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PhaseSpaceError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        toml::from_str(&text)
            .map_err(|e| PhaseSpaceError::InvalidParameter(format!("config {}: {e}", path.display())))
    }
}

/// Uniform grid helper: `steps` points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(PhaseSpaceError::InvalidParameter(
            "grid needs at least one point".into(),
        ));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    if !(min <= max) {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "grid requires min <= max, got [{min}, {max}]"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| min + i as f64 * h).collect())
}
