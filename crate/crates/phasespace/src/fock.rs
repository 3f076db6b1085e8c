//! Fock-basis reference states: the vacuum/one-photon mixture, its balanced
//! beamsplitter embedding, partial-transpose spectra, and closed-form Wigner
//! functions.

use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{PhaseSpaceError, Result};
use crate::phase_space::Constants;

const HERMITICITY_TOL: f64 = 1e-12;

fn check_density(matrix: &Array2<Complex64>, dim: usize) -> Result<()> {
    if matrix.dim() != (dim, dim) {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "density matrix must be {dim}x{dim}, got {:?}",
            matrix.dim()
        )));
    }
    for i in 0..dim {
        for j in 0..dim {
            if (matrix[[i, j]] - matrix[[j, i]].conj()).norm() > HERMITICITY_TOL {
                return Err(PhaseSpaceError::InvalidParameter(
                    "density matrix is not Hermitian".into(),
                ));
            }
        }
    }
    let trace: Complex64 = matrix.diag().sum();
    if (trace.re - 1.0).abs() > 1e-12 || trace.im.abs() > 1e-12 {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "density matrix trace must be 1, got {trace}"
        )));
    }
    let eigs = matrix.eigvalsh(UPLO::Lower)?;
    if eigs.iter().any(|&e| e < -1e-12) {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "density matrix has negative eigenvalue {:e}",
            eigs[0]
        )));
    }
    Ok(())
}

/// Single-mode density matrix in the truncated Fock basis {|0>, ..., |D-1>}.
#[derive(Debug, Clone)]
pub struct FockDensity {
    matrix: Array2<Complex64>,
}

impl FockDensity {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        check_density(&matrix, d)?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }
}

/// Two-mode density matrix in the basis {|00>, |01>, |10>, |11>}.
#[derive(Debug, Clone)]
pub struct TwoModeFockDensity {
    matrix: Array2<Complex64>,
}

impl TwoModeFockDensity {
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        check_density(&matrix, 4)?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }
}

/// Partial-transpose spectrum of the beamsplitter state at mixing weight `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PTSpectrum {
    /// Sorted ascending; sums to 1.
    pub eigenvalues: [f64; 4],
    pub p: f64,
}

fn check_unit_interval(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "mixing weight must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// The mixture p|0><0| + (1-p)|1><1| on the two-level Fock block.
pub fn single_mode_mixture(p: f64) -> Result<FockDensity> {
    check_unit_interval(p)?;
    let mut m = Array2::<Complex64>::zeros((2, 2));
    m[[0, 0]] = Complex64::new(p, 0.0);
    m[[1, 1]] = Complex64::new(1.0 - p, 0.0);
    FockDensity::new(m)
}

/// Output of a balanced beamsplitter fed with the mixture and the vacuum:
/// p|00><00| + (1-p)|ψ+><ψ+| with |ψ+> = (|10> + |01>)/√2.
pub fn beamsplitter_output(p: f64) -> Result<TwoModeFockDensity> {
    check_unit_interval(p)?;
    let half = Complex64::new(0.5 * (1.0 - p), 0.0);
    let mut m = Array2::<Complex64>::zeros((4, 4));
    m[[0, 0]] = Complex64::new(p, 0.0);
    m[[1, 1]] = half;
    m[[2, 2]] = half;
    m[[1, 2]] = half;
    m[[2, 1]] = half;
    TwoModeFockDensity::new(m)
}

/// Partial transpose on mode B: element ((a,b),(a',b')) -> ((a,b'),(a',b)).
/// Involutive and trace-preserving; the output need not be positive.
pub fn partial_transpose_fock(rho: &TwoModeFockDensity) -> Array2<Complex64> {
    let m = rho.matrix();
    let mut out = Array2::<Complex64>::zeros((4, 4));
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    out[[2 * a + b2, 2 * a2 + b]] = m[[2 * a + b, 2 * a2 + b2]];
                }
            }
        }
    }
    out
}

/// Closed-form spectrum of the partially transposed beamsplitter state:
/// λ1,2 = (p ± √(2p² - 2p + 1))/2, λ3,4 = (1 - p)/2. Sorted ascending.
pub fn pt_spectrum(p: f64) -> Result<PTSpectrum> {
    check_unit_interval(p)?;
    let root = (2.0 * p * p - 2.0 * p + 1.0).sqrt();
    let mut eigenvalues = [
        0.5 * (p - root),
        0.5 * (p + root),
        0.5 * (1.0 - p),
        0.5 * (1.0 - p),
    ];
    eigenvalues.sort_by(f64::total_cmp);
    Ok(PTSpectrum { eigenvalues, p })
}

/// Wigner function of the vacuum/one-photon mixture at the phase-space point
/// `(q, pm)`.
///
/// The closed forms are stated at ħ = 1; general ħ rescales coordinates by
/// 1/√ħ and the value by 1/ħ.
pub fn fock_mixture_wigner(p: f64, q: f64, pm: f64, c: &Constants) -> Result<f64> {
    check_unit_interval(p)?;
    let hbar = c.hbar();
    let r2 = (q * q + pm * pm) / hbar;
    let w0 = (-r2).exp() / PI;
    let w1 = (2.0 * r2 - 1.0) * (-r2).exp() / PI;
    Ok((p * w0 + (1.0 - p) * w1) / hbar)
}

/// Global minimum of the two-mode Wigner function of the beamsplitter state.
///
/// The beamsplitter only rotates phase-space coordinates, so the extrema of
/// W_in = W_ρ(p)(z1) W_vac(z2) survive: the minimum is
/// min(0, (2p - 1)/π) times the vacuum maximum 1/π.
pub fn two_mode_wigner_min(p: f64, c: &Constants) -> Result<f64> {
    check_unit_interval(p)?;
    let hbar = c.hbar();
    let single_min = (2.0 * p - 1.0).min(0.0) / (PI * hbar);
    Ok(single_min / (PI * hbar))
}
