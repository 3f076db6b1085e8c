//! Symplectic spectra of 4x4 covariance matrices and the covariance-level
//! physicality (RS) and separability (PPT) tests.
//!
//! The symplectic form is Ω = [[0, I2], [-I2, 0]] in the `(q1, q2, p1, p2)`
//! ordering. Symplectic eigenvalues are the moduli of the eigenvalues of
//! iΩΣ, which come in ± pairs for a valid covariance.

use ndarray::Array2;
use ndarray_linalg::EigVals;

use crate::error::{PhaseSpaceError, Result};
use crate::phase_space::{
    check_symmetric, make_displaced_pair, mixture_covariance, Constants, CovarianceMatrix,
    DisplacedPairParams, SYMMETRY_TOL,
};

/// Absolute slack below hbar/2 still counted as a pass, so exact saturation
/// (the vacuum) passes.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Relative tolerance for the ±-pairing of the eigenvalue moduli of iΩΣ.
pub const PAIRING_TOL: f64 = 1e-8;

/// The 4x4 symplectic form Ω = [[0, I2], [-I2, 0]].
pub fn symplectic_form() -> Array2<f64> {
    let mut omega = Array2::zeros((4, 4));
    omega[[0, 2]] = 1.0;
    omega[[1, 3]] = 1.0;
    omega[[2, 0]] = -1.0;
    omega[[3, 1]] = -1.0;
    omega
}

/// The two symplectic eigenvalues of `sigma`, ascending.
///
/// Computed as the moduli of the eigenvalues of ΩΣ (a real matrix whose
/// spectrum is i times that of the Hermitian-pencil formulation). The four
/// moduli must pair up within [`PAIRING_TOL`]; failure signals an invalid
/// covariance.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<[f64; 2]> {
    check_symmetric(sigma.entries(), SYMMETRY_TOL)?;
    let a = symplectic_form().dot(sigma.entries());
    let eigs = a.eigvals()?;
    let mut moduli: Vec<f64> = eigs.iter().map(|c| c.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let scale = moduli[3].max(1e-300);
    let all = [moduli[0], moduli[1], moduli[2], moduli[3]];
    if (moduli[1] - moduli[0]).abs() > PAIRING_TOL * scale
        || (moduli[3] - moduli[2]).abs() > PAIRING_TOL * scale
    {
        return Err(PhaseSpaceError::UnpairedSpectrum(all));
    }
    Ok([
        0.5 * (moduli[0] + moduli[1]),
        0.5 * (moduli[2] + moduli[3]),
    ])
}

/// Partial transposition of mode 2 at the covariance level: Σ -> ΛΣΛ with
/// Λ = diag(1, 1, 1, -1), i.e. p2 -> -p2. Involutive.
pub fn partial_transpose_cov(sigma: &CovarianceMatrix) -> CovarianceMatrix {
    let mut m = sigma.entries().clone();
    for i in 0..4 {
        if i != 3 {
            m[[i, 3]] = -m[[i, 3]];
            m[[3, i]] = -m[[3, i]];
        }
    }
    CovarianceMatrix::new(m).expect("sign flip preserves symmetry")
}

/// Robertson-Schrodinger physicality test: passes iff the smallest symplectic
/// eigenvalue is at least hbar/2. Returns the verdict and the margin
/// `nu_min - hbar/2`.
pub fn rs_test(sigma: &CovarianceMatrix, c: &Constants) -> Result<(bool, f64)> {
    let nu = symplectic_eigenvalues(sigma)?;
    let margin = nu[0] - 0.5 * c.hbar();
    Ok((margin >= -THRESHOLD_TOL, margin))
}

/// Covariance-level PPT separability test: the RS condition applied to the
/// partially transposed covariance. A failure signals nonseparability at the
/// second-moment level.
pub fn ppt_test(sigma: &CovarianceMatrix, c: &Constants) -> Result<(bool, f64)> {
    rs_test(&partial_transpose_cov(sigma), c)
}

/// Closed-form symplectic spectrum of the displaced-pair covariance and its
/// partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSpectrum {
    pub nu1: f64,
    pub nu2: f64,
    pub nu_tilde1: f64,
    pub nu_tilde2: f64,
}

/// Evaluates the four closed-form square roots for the displaced-pair family.
///
/// A negative radicand means the parameters left the validity region of the
/// formulas and is reported as an error.
pub fn closed_form_spectrum(p: &DisplacedPairParams) -> Result<ClosedFormSpectrum> {
    p.validate()?;
    let (sq, sp, kq, kp) = (p.s_q, p.s_p, p.k_q, p.k_p);
    let d2 = p.d * p.d;
    let radicands = [
        kp * kq + kp * sq + kq * sp + sp * sq,
        -2.0 * d2 * kp + 2.0 * d2 * sp + kp * kq - kp * sq - kq * sp + sq * sp,
        -kp * kq - kp * sq + kq * sp + sp * sq,
        2.0 * d2 * kp + 2.0 * d2 * sp - kp * kq + kp * sq - kq * sp + sp * sq,
    ];
    for &r in &radicands {
        if r < 0.0 {
            return Err(PhaseSpaceError::NegativeRadicand(r));
        }
    }
    Ok(ClosedFormSpectrum {
        nu1: radicands[0].sqrt(),
        nu2: radicands[1].sqrt(),
        nu_tilde1: radicands[2].sqrt(),
        nu_tilde2: radicands[3].sqrt(),
    })
}

/// One row of a displacement scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaReport {
    pub d: f64,
    pub nu_min: f64,
    pub nu_tilde_min: f64,
    pub rs_pass: bool,
    pub ppt_pass: bool,
    pub hbar: f64,
}

/// Runs the RS and PPT tests over a displacement grid for the displaced-pair
/// family defined by `template` (its own `d` is ignored).
///
/// Each row goes through the numeric route: assemble the mixture, take its
/// covariance, diagonalize iΩΣ. The closed forms stay available as an
/// independent check.
pub fn scan_displacement(
    template: &DisplacedPairParams,
    d_grid: &[f64],
    c: &Constants,
) -> Result<Vec<CriteriaReport>> {
    if d_grid.is_empty() {
        return Err(PhaseSpaceError::InvalidParameter(
            "displacement grid must be nonempty".into(),
        ));
    }
    d_grid
        .iter()
        .map(|&d| {
            let p = template.with_displacement(d)?;
            let sigma = mixture_covariance(&make_displaced_pair(&p)?)?;
            let (rs_pass, rs_margin) = rs_test(&sigma, c)?;
            let (ppt_pass, ppt_margin) = ppt_test(&sigma, c)?;
            Ok(CriteriaReport {
                d,
                nu_min: rs_margin + 0.5 * c.hbar(),
                nu_tilde_min: ppt_margin + 0.5 * c.hbar(),
                rs_pass,
                ppt_pass,
                hbar: c.hbar(),
            })
        })
        .collect()
}
