//! Position-space Weyl kernels of classical distributions, lattice
//! discretization, and the operator-positivity test.
//!
//! The two-mode displaced-pair kernel uses the closed form
//! K±(x, x') = (2π√det Q0)^-1 exp[-(m - q̄±)ᵀ Q0⁻¹ (m - q̄±)/2]
//!            exp[-ΔᵀP0Δ / 2ħ²]
//! with m = (x + x')/2, Δ = x - x'. Single-mode kernels come from a Wigner
//! grid by Fourier integration along the momentum axis. The distributional
//! Stratonovich-Weyl kernel itself is never materialized.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigValsh, UPLO};
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{PhaseSpaceError, Result};
use crate::phase_space::{Constants, DisplacedPairParams};
use crate::tomography::WignerGrid;

/// Largest kernel dimension built without an explicit override.
pub const DEFAULT_DIM_GUARD: usize = 10_000;

/// Negativity below `POSITIVITY_TOL_REL * ||K||` is attributed to roundoff
/// and discretization rather than genuine non-positivity.
pub const POSITIVITY_TOL_REL: f64 = 1e-8;

/// Uniform lattice: `n` points per axis on `[lo, hi]`, `dims` configuration
/// axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub dims: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, n: usize, dims: usize) -> Result<Self> {
        if !(lo < hi) {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "grid requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n < 2 || dims == 0 {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "grid requires n >= 2 and dims >= 1, got n={n}, dims={dims}"
            )));
        }
        Ok(Self { lo, hi, n, dims })
    }

    /// Lattice spacing along one axis.
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    /// Lattice points along one axis, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n).map(|i| self.lo + i as f64 * h).collect()
    }

    /// Total matrix dimension n^dims.
    pub fn matrix_dim(&self) -> usize {
        self.n.pow(self.dims as u32)
    }
}

/// Dense symmetric discretization of a position-space kernel.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    entries: Array2<f64>,
    grid: GridSpec,
    measure_weighted: bool,
}

impl KernelMatrix {
    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn measure_weighted(&self) -> bool {
        self.measure_weighted
    }

    pub fn trace(&self) -> f64 {
        self.entries.diag().sum()
    }
}

/// Outcome of the operator-positivity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    NonPositive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Positive => write!(f, "POSITIVE"),
            Verdict::NonPositive => write!(f, "NON_POSITIVE"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub lambda_min: f64,
    pub trace: f64,
    pub verdict: Verdict,
    /// Absolute negativity tolerance used for the verdict, relative to the
    /// spectral norm of the matrix.
    pub tolerance: f64,
}

/// Matrix element of the Weyl kernel of the displaced-pair mixture at
/// configuration points `x`, `x_prime` (one coordinate per mode).
pub fn kernel_element(
    x: [f64; 2],
    x_prime: [f64; 2],
    p: &DisplacedPairParams,
    c: &Constants,
) -> f64 {
    let det_q0 = p.s_q * p.s_q - p.k_q * p.k_q;
    let norm = 1.0 / (2.0 * PI * det_q0.sqrt());
    let m = [0.5 * (x[0] + x_prime[0]), 0.5 * (x[1] + x_prime[1])];
    let delta = [x[0] - x_prime[0], x[1] - x_prime[1]];

    // ΔᵀP0Δ / 2ħ², shared by both components
    let hbar2 = c.hbar() * c.hbar();
    let p_quad = p.s_p * (delta[0] * delta[0] + delta[1] * delta[1])
        + 2.0 * p.k_p * delta[0] * delta[1];
    let momentum_factor = (-0.5 * p_quad / hbar2).exp();

    // (m - q̄±)ᵀ Q0⁻¹ (m - q̄±) / 2 with Q0⁻¹ = [[s,-k],[-k,s]]/det
    let q_quad = |cq: [f64; 2]| {
        let u = [m[0] - cq[0], m[1] - cq[1]];
        (p.s_q * (u[0] * u[0] + u[1] * u[1]) - 2.0 * p.k_q * u[0] * u[1]) / det_q0
    };
    let plus = (-0.5 * q_quad([p.d, -p.d])).exp();
    let minus = (-0.5 * q_quad([-p.d, p.d])).exp();

    0.5 * norm * (plus + minus) * momentum_factor
}

fn check_guard(dim: usize, guard: Option<usize>) -> Result<()> {
    let guard = guard.unwrap_or(DEFAULT_DIM_GUARD);
    if dim > guard {
        return Err(PhaseSpaceError::KernelTooLarge { dim, guard });
    }
    Ok(())
}

/// Discretizes the two-mode displaced-pair kernel on `g` (which must have
/// `dims == 2`), including the configuration-space measure (Δx)².
///
/// Matrices larger than [`DEFAULT_DIM_GUARD`] are rejected unless a larger
/// `guard` is supplied.
pub fn build_kernel_matrix(
    p: &DisplacedPairParams,
    g: &GridSpec,
    c: &Constants,
    guard: Option<usize>,
) -> Result<KernelMatrix> {
    p.validate()?;
    if g.dims != 2 {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "two-mode kernel needs dims = 2, got {}",
            g.dims
        )));
    }
    let dim = g.matrix_dim();
    check_guard(dim, guard)?;

    let axis = g.points();
    let n = g.n;
    let measure = g.step() * g.step();

    let mut entries = Array2::<f64>::zeros((dim, dim));
    entries
        .axis_iter_mut(ndarray::Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            let xi = [axis[i / n], axis[i % n]];
            for j in 0..dim {
                let xj = [axis[j / n], axis[j % n]];
                row[j] = kernel_element(xi, xj, p, c) * measure;
            }
        });
    // the closed form is symmetric; the explicit symmetrization only removes
    // floating-point noise before the eigensolve
    let entries = (&entries + &entries.t()) * 0.5;
    Ok(KernelMatrix {
        entries,
        grid: *g,
        measure_weighted: true,
    })
}

/// Full sorted spectrum of the symmetrized kernel.
pub fn kernel_spectrum(k: &KernelMatrix) -> Result<Array1<f64>> {
    let sym = (k.entries() + &k.entries().t()) * 0.5;
    Ok(sym.eigvalsh(UPLO::Lower)?)
}

/// Smallest eigenvalue of the symmetrized kernel with the positivity verdict.
pub fn min_eigenvalue(k: &KernelMatrix) -> Result<PositivityReport> {
    min_eigenvalue_with_tol(k, POSITIVITY_TOL_REL)
}

/// [`min_eigenvalue`] with a caller-chosen relative tolerance, for kernels
/// whose entries carry errors larger than quadrature noise (e.g. tomographic
/// reconstructions).
pub fn min_eigenvalue_with_tol(k: &KernelMatrix, tol_rel: f64) -> Result<PositivityReport> {
    let eigs = kernel_spectrum(k)?;
    let lambda_min = eigs[0];
    let spectral_norm = eigs
        .iter()
        .fold(0.0_f64, |a, &v| a.max(v.abs()));
    let tolerance = tol_rel * spectral_norm;
    let verdict = if lambda_min >= -tolerance {
        Verdict::Positive
    } else {
        Verdict::NonPositive
    };
    Ok(PositivityReport {
        lambda_min,
        trace: k.trace(),
        verdict,
        tolerance,
    })
}

/// One row of a positivity scan over displacements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityRow {
    pub d: f64,
    pub lambda_min: f64,
    pub trace: f64,
    pub verdict: Verdict,
}

/// Builds and diagonalizes the kernel for each displacement in `d_grid`.
pub fn positivity_scan(
    template: &DisplacedPairParams,
    d_grid: &[f64],
    g: &GridSpec,
    c: &Constants,
    guard: Option<usize>,
) -> Result<Vec<PositivityRow>> {
    if d_grid.is_empty() {
        return Err(PhaseSpaceError::InvalidParameter(
            "displacement grid must be nonempty".into(),
        ));
    }
    d_grid
        .iter()
        .map(|&d| {
            let p = template.with_displacement(d)?;
            let k = build_kernel_matrix(&p, g, c, guard)?;
            let r = min_eigenvalue(&k)?;
            Ok(PositivityRow {
                d,
                lambda_min: r.lambda_min,
                trace: r.trace,
                verdict: r.verdict,
            })
        })
        .collect()
}

/// Single-mode Weyl inversion of a Wigner grid:
/// K(x, x') = ∫ dp W((x + x')/2, p) exp(ipΔ/ħ), evaluated on the
/// even-index subgrid of the q-axis and weighted by the 1D measure 2Δx.
///
/// Restricting x, x' to every other grid point makes each midpoint
/// (x + x')/2 land exactly on the source grid, so no interpolation enters;
/// this keeps the sampled kernel of a genuine state positive to quadrature
/// accuracy. (Half-grid midpoints would otherwise need interpolated Wigner
/// values, whose O(Δx²) error swamps the positivity tolerance.)
///
/// The momentum axis must resolve the fastest oscillation
/// exp(ip(hi - lo)/ħ), otherwise the grid is rejected as too coarse.
pub fn wigner_to_kernel(w: &WignerGrid, c: &Constants) -> Result<KernelMatrix> {
    let q = w.q_axis();
    let p = w.p_axis();
    let n = q.len();
    let dq = q[1] - q[0];
    let dp = p[1] - p[0];
    let m = n.div_ceil(2);
    let delta_max = q[2 * (m - 1)] - q[0];
    let nyquist = PI * c.hbar() / delta_max;
    if dp > nyquist {
        return Err(PhaseSpaceError::GridTooCoarse { dp, bound: nyquist });
    }

    let values = w.values();
    let measure = 2.0 * dq;
    let mut entries = Array2::<f64>::zeros((m, m));
    for i in 0..m {
        for j in 0..=i {
            // midpoint of q[2i] and q[2j] is exactly q[i + j]
            let delta = q[2 * i] - q[2 * j];
            let mut acc = 0.0;
            for k in 0..p.len() {
                acc += values[[i + j, k]] * (p[k] * delta / c.hbar()).cos();
            }
            let v = acc * dp * measure;
            entries[[i, j]] = v;
            entries[[j, i]] = v;
        }
    }
    Ok(KernelMatrix {
        entries,
        grid: GridSpec {
            lo: q[0],
            hi: q[2 * (m - 1)],
            n: m,
            dims: 1,
        },
        measure_weighted: true,
    })
}
