//! Command-line driver for parameter sweeps, kernel positivity scans,
//! tomography runs, and classification reports.

use clap::{Args, Parser, Subcommand};
use ndarray::Array1;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use phasespace::classify::{classify, Diagnostics};
use phasespace::config::{linear_grid, FileConfig};
use phasespace::error::PhaseSpaceError;
use phasespace::fock::{pt_spectrum, two_mode_wigner_min};
use phasespace::io;
use phasespace::io::FockSweepRow;
use phasespace::phase_space::{Constants, DisplacedPairParams};
use phasespace::symplectic::scan_displacement;
use phasespace::tomography::{sources, MarginalSet, WignerGrid};
use phasespace::weyl_kernel::{positivity_scan, GridSpec, Verdict};

#[derive(Parser)]
#[command(name = "phasespace", version, about = "Phase-space nonseparability diagnostics")]
struct Cli {
    /// TOML configuration file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Planck constant (action units).
    #[arg(long, global = true)]
    hbar: Option<f64>,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// RS/PPT symplectic-eigenvalue scan over the displacement grid.
    ScanDisplacement(ScanArgs),
    /// Smallest Weyl-kernel eigenvalue over the displacement grid.
    PositivityScan(PositivityArgs),
    /// Partial-transpose spectrum, Wigner minimum, and region per mixing
    /// weight of the beamsplitter state.
    FockSweep(FockArgs),
    /// Homodyne tomography round trip with operator positivity report.
    Tomography(TomographyArgs),
    /// Classify a diagnostics bundle into
    /// SEPARABLE/RE/HE/GE/UNDETERMINED.
    Classify(ClassifyArgs),
}

#[derive(Args, Clone)]
struct PairArgs {
    #[arg(long)]
    s_q: Option<f64>,
    #[arg(long)]
    s_p: Option<f64>,
    #[arg(long)]
    k_q: Option<f64>,
    #[arg(long)]
    k_p: Option<f64>,
    #[arg(long)]
    d_min: Option<f64>,
    #[arg(long)]
    d_max: Option<f64>,
    #[arg(long)]
    d_steps: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PositivityArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Grid lower edge.
    #[arg(long)]
    lo: Option<f64>,
    /// Grid upper edge.
    #[arg(long)]
    hi: Option<f64>,
    /// Lattice points per axis.
    #[arg(long)]
    n: Option<usize>,
    /// Kernel dimension guard override (default 10000).
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FockArgs {
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TomographyArgs {
    /// Source state: vacuum, fock1, mixture, or file.
    #[arg(long)]
    source: Option<String>,
    /// Mixing weight for source=mixture.
    #[arg(long)]
    p: Option<f64>,
    /// Wigner grid dump for source=file.
    #[arg(long)]
    wigner_file: Option<PathBuf>,
    #[arg(long)]
    angles: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    /// Frequency-filter cutoff as a fraction of Nyquist.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Dump the reconstructed Wigner grid (flat binary + .meta).
    #[arg(long)]
    dump_wigner: Option<PathBuf>,
    /// Dump the simulated marginals as CSV.
    #[arg(long)]
    dump_marginals: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    rs_pass: bool,
    #[arg(long)]
    ppt_pass: bool,
    #[arg(long)]
    operator_positive: Option<bool>,
    #[arg(long)]
    wigner_nonnegative: Option<bool>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: failed to configure worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for configuration/usage problems, 1 for runtime failures.
fn exit_code(e: &PhaseSpaceError) -> u8 {
    match e {
        PhaseSpaceError::InvalidParameter(_)
        | PhaseSpaceError::KernelTooLarge { .. }
        | PhaseSpaceError::TooFewAngles(_) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> phasespace::Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let constants = Constants::new(cli.hbar.or(file.hbar).unwrap_or(1.0))?;
    match cli.command {
        Command::ScanDisplacement(args) => cmd_scan_displacement(args, &file, &constants),
        Command::PositivityScan(args) => cmd_positivity_scan(args, &file, &constants),
        Command::FockSweep(args) => cmd_fock_sweep(args, &file, &constants),
        Command::Tomography(args) => cmd_tomography(args, &file, &constants),
        Command::Classify(args) => cmd_classify(args),
    }
}

struct PairSetup {
    template: DisplacedPairParams,
    d_grid: Vec<f64>,
}

/// Defaults are the canonical displaced-pair parameters
/// (s = 0.5, k = 0.3) on d in [0, 2].
fn resolve_pair(
    args: &PairArgs,
    s_q: Option<f64>,
    s_p: Option<f64>,
    k_q: Option<f64>,
    k_p: Option<f64>,
    d_min: Option<f64>,
    d_max: Option<f64>,
    d_steps: Option<usize>,
    default_steps: usize,
) -> phasespace::Result<PairSetup> {
    let template = DisplacedPairParams::new(
        args.s_q.or(s_q).unwrap_or(0.5),
        args.s_p.or(s_p).unwrap_or(0.5),
        args.k_q.or(k_q).unwrap_or(0.3),
        args.k_p.or(k_p).unwrap_or(0.3),
        0.0,
    )?;
    let d_min = args.d_min.or(d_min).unwrap_or(0.0);
    let d_max = args.d_max.or(d_max).unwrap_or(2.0);
    let d_steps = args.d_steps.or(d_steps).unwrap_or(default_steps);
    if d_min < 0.0 {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "displacements must be nonnegative, got d_min = {d_min}"
        )));
    }
    Ok(PairSetup {
        template,
        d_grid: linear_grid(d_min, d_max, d_steps)?,
    })
}

fn out_path(flag: Option<PathBuf>, file: &Option<String>, default: &str) -> PathBuf {
    flag.or_else(|| file.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default))
}

fn cmd_scan_displacement(
    args: ScanArgs,
    file: &FileConfig,
    constants: &Constants,
) -> phasespace::Result<()> {
    let s = &file.scan_displacement;
    let setup = resolve_pair(
        &args.pair, s.s_q, s.s_p, s.k_q, s.k_p, s.d_min, s.d_max, s.d_steps, 41,
    )?;
    let rows = scan_displacement(&setup.template, &setup.d_grid, constants)?;
    let path = out_path(args.out, &s.out, "scan_displacement.csv");
    io::write_scan_csv(&path, &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn cmd_positivity_scan(
    args: PositivityArgs,
    file: &FileConfig,
    constants: &Constants,
) -> phasespace::Result<()> {
    let s = &file.positivity_scan;
    let setup = resolve_pair(
        &args.pair, s.s_q, s.s_p, s.k_q, s.k_p, s.d_min, s.d_max, s.d_steps, 5,
    )?;
    let grid = GridSpec::new(
        args.lo.or(s.lo).unwrap_or(-8.0),
        args.hi.or(s.hi).unwrap_or(8.0),
        args.n.or(s.n).unwrap_or(50),
        2,
    )?;
    let guard = args.max_dim.or(s.max_dim);
    let rows = positivity_scan(&setup.template, &setup.d_grid, &grid, constants, guard)
        .map_err(|e| match e {
            PhaseSpaceError::KernelTooLarge { dim, guard } => {
                let suggested = (guard as f64).sqrt().floor() as usize;
                PhaseSpaceError::InvalidParameter(format!(
                    "kernel dimension {dim} exceeds guard {guard}; \
                     use n <= {suggested} or raise --max-dim"
                ))
            }
            other => other,
        })?;
    let path = out_path(args.out, &s.out, "positivity_scan.csv");
    io::write_positivity_csv(&path, &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn cmd_fock_sweep(
    args: FockArgs,
    file: &FileConfig,
    constants: &Constants,
) -> phasespace::Result<()> {
    let s = &file.fock_sweep;
    let p_min = args.p_min.or(s.p_min).unwrap_or(0.0);
    let p_max = args.p_max.or(s.p_max).unwrap_or(1.0);
    let p_steps = args.p_steps.or(s.p_steps).unwrap_or(101);
    if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "p grid must lie in [0, 1], got [{p_min}, {p_max}]"
        )));
    }
    let rows = linear_grid(p_min, p_max, p_steps)?
        .into_iter()
        .map(|p| {
            let spectrum = pt_spectrum(p)?;
            let lambda_min_pt = spectrum.eigenvalues[0];
            let wigner_min = two_mode_wigner_min(p, constants)?;
            let region = classify(&Diagnostics {
                rs_pass: true,
                ppt_pass: lambda_min_pt >= -1e-12,
                // the beamsplitter output is a valid density operator for
                // every p
                operator_positive: Some(true),
                wigner_nonnegative: Some(wigner_min >= -1e-12),
            });
            Ok(FockSweepRow {
                p,
                lambda_min_pt,
                wigner_min,
                region,
            })
        })
        .collect::<phasespace::Result<Vec<_>>>()?;
    let path = out_path(args.out, &s.out, "fock_sweep.csv");
    io::write_fock_sweep_csv(&path, &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn load_wigner_file(path: &Path) -> phasespace::Result<WignerGrid> {
    let header = io::read_binary_header(path)?;
    let values = io::read_matrix_binary(path, header.n, header.n)?;
    let h = (header.hi - header.lo) / (header.n - 1) as f64;
    let axis = Array1::from_iter((0..header.n).map(|i| header.lo + i as f64 * h));
    WignerGrid::new(values, axis.clone(), axis)
}

fn cmd_tomography(
    args: TomographyArgs,
    file: &FileConfig,
    constants: &Constants,
) -> phasespace::Result<()> {
    let s = &file.tomography;
    let source = args
        .source
        .or_else(|| s.source.clone())
        .unwrap_or_else(|| "vacuum".into());
    let angles = args.angles.or(s.angles).unwrap_or(90);
    let samples = args.samples.or(s.samples).unwrap_or(256);
    let lo = args.lo.or(s.lo).unwrap_or(-6.0);
    let hi = args.hi.or(s.hi).unwrap_or(6.0);
    let cutoff = args.cutoff.or(s.cutoff).unwrap_or(1.0);

    let (wigner, oracle): (WignerGrid, Option<Box<dyn Fn(f64, f64) -> f64>>) =
        match source.as_str() {
            "vacuum" => (
                WignerGrid::from_fn(lo, hi, samples, sources::vacuum)?,
                Some(Box::new(sources::vacuum)),
            ),
            "fock1" => (
                WignerGrid::from_fn(lo, hi, samples, sources::fock1)?,
                Some(Box::new(sources::fock1)),
            ),
            "mixture" => {
                let p = args.p.or(s.p).ok_or_else(|| {
                    PhaseSpaceError::InvalidParameter(
                        "source=mixture requires --p".into(),
                    )
                })?;
                let f = move |q: f64, pm: f64| {
                    p * sources::vacuum(q, pm) + (1.0 - p) * sources::fock1(q, pm)
                };
                (WignerGrid::from_fn(lo, hi, samples, f)?, Some(Box::new(f)))
            }
            "file" => {
                let path = args
                    .wigner_file
                    .clone()
                    .or_else(|| s.wigner_file.as_ref().map(PathBuf::from))
                    .ok_or_else(|| {
                        PhaseSpaceError::InvalidParameter(
                            "source=file requires --wigner-file".into(),
                        )
                    })?;
                (load_wigner_file(&path)?, None)
            }
            other => {
                return Err(PhaseSpaceError::InvalidParameter(format!(
                    "unknown source '{other}' (expected vacuum, fock1, mixture, or file)"
                )))
            }
        };

    let ms = MarginalSet::from_wigner(&wigner, angles)?;
    if let Some(path) = args
        .dump_marginals
        .or_else(|| s.dump_marginals.as_ref().map(PathBuf::from))
    {
        io::write_marginals_csv(&path, &ms)?;
        println!("wrote marginals to {}", path.display());
    }

    let outcome =
        phasespace::tomography::reconstruct_operator_with_cutoff(&ms, cutoff, constants)?;
    let raw_integral = outcome.raw_integral;
    let normalized = &outcome.wigner;
    let report = &outcome.positivity;

    println!("source          : {source}");
    println!("angles x samples: {angles} x {samples} on [{lo}, {hi}]");
    println!("raw integral    : {}", io::format_float(raw_integral));
    if let Some(f) = &oracle {
        let mut linf = 0.0_f64;
        for (i, &q) in normalized.q_axis().iter().enumerate() {
            for (j, &p) in normalized.p_axis().iter().enumerate() {
                linf = linf.max((normalized.values()[[i, j]] - f(q, p)).abs());
            }
        }
        println!("L-inf error     : {}", io::format_float(linf));
    }
    println!("W(0,0)          : {}", io::format_float(normalized.eval(0.0, 0.0)));
    println!("lambda_min      : {}", io::format_float(report.lambda_min));
    println!("trace           : {}", io::format_float(report.trace));
    println!("verdict         : {}", report.verdict);

    if let Some(path) = args
        .dump_wigner
        .or_else(|| s.dump_wigner.as_ref().map(PathBuf::from))
    {
        let n = normalized.q_axis().len();
        io::write_matrix_binary(
            &path,
            normalized.values(),
            &io::BinaryHeader {
                n,
                lo: normalized.q_axis()[0],
                hi: normalized.q_axis()[n - 1],
                dims: 2,
            },
        )?;
        println!("wrote reconstructed grid to {}", path.display());
    }

    if report.verdict == Verdict::NonPositive {
        println!("note: reconstructed operator fails positivity");
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> phasespace::Result<()> {
    let region = classify(&Diagnostics {
        rs_pass: args.rs_pass,
        ppt_pass: args.ppt_pass,
        operator_positive: args.operator_positive,
        wigner_nonnegative: args.wigner_nonnegative,
    });
    println!("{region}");
    Ok(())
}
