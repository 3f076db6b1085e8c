//! CSV and flat-binary serialization of scan tables, marginals, and grids.
//!
//! Floats are written with 17 significant digits ('.' decimal, comma
//! delimiter, header row), which round-trips f64 exactly. Matrices and grids
//! dump as row-major little-endian f64 with a small text sidecar
//! (`<path>.meta`) holding `n`, `lo`, `hi`, `dims`.

use ndarray::Array2;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{PhaseSpaceError, Result};
use crate::symplectic::CriteriaReport;
use crate::tomography::MarginalSet;
use crate::weyl_kernel::{PositivityRow, Verdict};

/// 17 significant digits: lossless for f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_err(path: &Path, source: std::io::Error) -> PhaseSpaceError {
    PhaseSpaceError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<std::fs::File>> {
    Ok(BufWriter::new(
        std::fs::File::create(path).map_err(|e| io_err(path, e))?,
    ))
}

fn parse_f64(s: &str, path: &Path) -> Result<f64> {
    s.parse::<f64>().map_err(|e| {
        io_err(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        )
    })
}

fn parse_bool(s: &str, path: &Path) -> Result<bool> {
    s.parse::<bool>().map_err(|e| {
        io_err(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        )
    })
}

/// Writes a displacement-scan table: d, nu_min, nu_tilde_min, rs_pass,
/// ppt_pass.
pub fn write_scan_csv(path: &Path, rows: &[CriteriaReport]) -> Result<()> {
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "d,nu_min,nu_tilde_min,rs_pass,ppt_pass")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                format_float(r.d),
                format_float(r.nu_min),
                format_float(r.nu_tilde_min),
                r.rs_pass,
                r.ppt_pass
            )?;
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))
}

/// Reads back a displacement-scan table written by [`write_scan_csv`].
pub fn read_scan_csv(path: &Path, hbar: f64) -> Result<Vec<CriteriaReport>> {
    let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if idx == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(io_err(
                path,
                std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("expected 5 columns, got {}", cols.len()),
                ),
            ));
        }
        rows.push(CriteriaReport {
            d: parse_f64(cols[0], path)?,
            nu_min: parse_f64(cols[1], path)?,
            nu_tilde_min: parse_f64(cols[2], path)?,
            rs_pass: parse_bool(cols[3], path)?,
            ppt_pass: parse_bool(cols[4], path)?,
            hbar,
        });
    }
    Ok(rows)
}

/// Writes a positivity-scan table: d, lambda_min, trace, verdict.
pub fn write_positivity_csv(path: &Path, rows: &[PositivityRow]) -> Result<()> {
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "d,lambda_min,trace,verdict")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{}",
                format_float(r.d),
                format_float(r.lambda_min),
                format_float(r.trace),
                r.verdict
            )?;
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))
}

/// Reads back a positivity-scan table written by [`write_positivity_csv`].
pub fn read_positivity_csv(path: &Path) -> Result<Vec<PositivityRow>> {
    let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if idx == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let verdict = match cols.get(3).copied() {
            Some("POSITIVE") => Verdict::Positive,
            Some("NON_POSITIVE") => Verdict::NonPositive,
            other => {
                return Err(io_err(
                    path,
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("bad verdict {other:?}"),
                    ),
                ))
            }
        };
        rows.push(PositivityRow {
            d: parse_f64(cols[0], path)?,
            lambda_min: parse_f64(cols[1], path)?,
            trace: parse_f64(cols[2], path)?,
            verdict,
        });
    }
    Ok(rows)
}

/// One row of the Fock p-sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSweepRow {
    pub p: f64,
    pub lambda_min_pt: f64,
    pub wigner_min: f64,
    pub region: crate::classify::Region,
}

/// Writes a Fock sweep: p, lambda_min_pt, wigner_min, region.
pub fn write_fock_sweep_csv(path: &Path, rows: &[FockSweepRow]) -> Result<()> {
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "p,lambda_min_pt,wigner_min,region")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{}",
                format_float(r.p),
                format_float(r.lambda_min_pt),
                format_float(r.wigner_min),
                r.region
            )?;
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))
}

/// Reads back a Fock sweep written by [`write_fock_sweep_csv`].
pub fn read_fock_sweep_csv(path: &Path) -> Result<Vec<FockSweepRow>> {
    use crate::classify::Region;
    let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if idx == 0 {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let region = match cols.get(3).copied() {
            Some("SEPARABLE") => Region::Separable,
            Some("RE") => Region::Representational,
            Some("HE") => Region::Hybrid,
            Some("GE") => Region::Genuine,
            Some("UNDETERMINED") => Region::Undetermined,
            other => {
                return Err(io_err(
                    path,
                    std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("bad region {other:?}"),
                    ),
                ))
            }
        };
        rows.push(FockSweepRow {
            p: parse_f64(cols[0], path)?,
            lambda_min_pt: parse_f64(cols[1], path)?,
            wigner_min: parse_f64(cols[2], path)?,
            region,
        });
    }
    Ok(rows)
}

/// Writes a marginal set as phi, x, density rows.
pub fn write_marginals_csv(path: &Path, ms: &MarginalSet) -> Result<()> {
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        writeln!(w, "phi,x,density")?;
        for m in ms.marginals() {
            for (x, rho) in m.x_axis().iter().zip(m.density().iter()) {
                writeln!(
                    w,
                    "{},{},{}",
                    format_float(m.phi()),
                    format_float(*x),
                    format_float(*rho)
                )?;
            }
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))
}

/// Metadata sidecar of a binary matrix/grid dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryHeader {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub dims: usize,
}

/// Dumps `matrix` as row-major little-endian f64 at `path`, with the header
/// in `<path>.meta`.
pub fn write_matrix_binary(path: &Path, matrix: &Array2<f64>, header: &BinaryHeader) -> Result<()> {
    let mut w = create(path)?;
    (|| -> std::io::Result<()> {
        for &v in matrix.iter() {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    })()
    .map_err(|e| io_err(path, e))?;

    let meta_path = path.with_extension(format!(
        "{}meta",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let mut m = create(&meta_path)?;
    (|| -> std::io::Result<()> {
        writeln!(m, "n={}", header.n)?;
        writeln!(m, "lo={}", format_float(header.lo))?;
        writeln!(m, "hi={}", format_float(header.hi))?;
        writeln!(m, "dims={}", header.dims)?;
        m.flush()
    })()
    .map_err(|e| io_err(&meta_path, e))
}

/// Reads a dump written by [`write_matrix_binary`]; `rows`/`cols` come from
/// the caller's interpretation of the header.
pub fn read_matrix_binary(path: &Path, rows: usize, cols: usize) -> Result<Array2<f64>> {
    let f = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut r = BufReader::new(f);
    let mut buf = [0u8; 8];
    for _ in 0..rows * cols {
        r.read_exact(&mut buf).map_err(|e| io_err(path, e))?;
        data.push(f64::from_le_bytes(buf));
    }
    Array2::from_shape_vec((rows, cols), data).map_err(|e| {
        io_err(
            path,
            std::io::Error::new(std::io::ErrorKind::InvalidData, e),
        )
    })
}

/// Reads the `<path>.meta` sidecar.
pub fn read_binary_header(path: &Path) -> Result<BinaryHeader> {
    let meta_path = path.with_extension(format!(
        "{}meta",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    let content = std::fs::read_to_string(&meta_path).map_err(|e| io_err(&meta_path, e))?;
    let mut header = BinaryHeader {
        n: 0,
        lo: 0.0,
        hi: 0.0,
        dims: 0,
    };
    for line in content.lines() {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        match key.trim() {
            "n" => {
                header.n = value.trim().parse().map_err(|e| {
                    io_err(
                        &meta_path,
                        std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{e}")),
                    )
                })?
            }
            "lo" => header.lo = parse_f64(value.trim(), &meta_path)?,
            "hi" => header.hi = parse_f64(value.trim(), &meta_path)?,
            "dims" => {
                header.dims = value.trim().parse().map_err(|e| {
                    io_err(
                        &meta_path,
                        std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{e}")),
                    )
                })?
            }
            _ => {}
        }
    }
    Ok(header)
}
