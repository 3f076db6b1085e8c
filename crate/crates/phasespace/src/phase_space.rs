//! Classical phase-space states: Gaussian mixtures over two modes and their
//! second moments.
//!
//! Coordinates are ordered `(q1, q2, p1, p2)` throughout the crate, matching
//! the block convention used by [`crate::symplectic`].

use ndarray::{Array1, Array2};
use ndarray_linalg::{Determinant, EigValsh, Inverse, UPLO};
use std::f64::consts::PI;

use crate::error::{PhaseSpaceError, Result};

/// Relative tolerance for symmetry checks on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Physical constants entering the quantum-side diagnostics.
///
/// The classical densities themselves are hbar-free; hbar sets the uncertainty
/// bound and the oscillatory scale of the Weyl kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    hbar: f64,
}

impl Constants {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "hbar must be positive and finite, got {hbar}"
            )));
        }
        Ok(Self { hbar })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
}

/// Checks that `m` is square and symmetric within `tol` relative to its
/// largest entry.
pub(crate) fn check_symmetric(m: &Array2<f64>, tol: f64) -> Result<()> {
    let (r, c) = m.dim();
    if r != c {
        return Err(PhaseSpaceError::InvalidParameter(format!(
            "expected square matrix, got {r}x{c}"
        )));
    }
    let scale = max_abs(m).max(1.0);
    let mut worst = 0.0_f64;
    for i in 0..r {
        for j in (i + 1)..c {
            worst = worst.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    if worst > tol * scale {
        return Err(PhaseSpaceError::NotSymmetric {
            asymmetry: worst / scale,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Symmetric 4x4 second-moment matrix in the ordering `(q1, q2, p1, p2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    entries: Array2<f64>,
}

impl CovarianceMatrix {
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        if entries.dim() != (4, 4) {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "covariance matrix must be 4x4, got {:?}",
                entries.dim()
            )));
        }
        check_symmetric(&entries, SYMMETRY_TOL)?;
        Ok(Self { entries })
    }

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Result<Self> {
        let entries = Array2::from_shape_fn((4, 4), |(i, j)| rows[i][j]);
        Self::new(entries)
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }
}

/// One Gaussian component of a mixture: mean in `(q1, q2, p1, p2)` and a
/// positive-definite 4x4 covariance.
#[derive(Debug, Clone)]
pub struct GaussianComponent {
    mean: Array1<f64>,
    cov: Array2<f64>,
}

impl GaussianComponent {
    pub fn new(mean: Array1<f64>, cov: Array2<f64>) -> Result<Self> {
        if mean.len() != 4 || cov.dim() != (4, 4) {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "component must have 4-vector mean and 4x4 covariance, got {} and {:?}",
                mean.len(),
                cov.dim()
            )));
        }
        check_symmetric(&cov, SYMMETRY_TOL)?;
        let eigs = cov.eigvalsh(UPLO::Lower)?;
        if eigs.iter().any(|&e| e <= 0.0) {
            return Err(PhaseSpaceError::SingularCovariance);
        }
        Ok(Self { mean, cov })
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Array2<f64> {
        &self.cov
    }
}

/// Weighted mixture of two-mode Gaussian components; the classical states of
/// this crate. Weights are nonnegative and sum to one.
#[derive(Debug, Clone)]
pub struct GaussianMixture2Mode {
    weights: Vec<f64>,
    components: Vec<GaussianComponent>,
}

impl GaussianMixture2Mode {
    pub fn new(weights: Vec<f64>, components: Vec<GaussianComponent>) -> Result<Self> {
        if components.is_empty() || weights.len() != components.len() {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "mixture needs matching nonempty weights/components, got {}/{}",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(PhaseSpaceError::InvalidParameter(
                "mixture weights must be nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "mixture weights must sum to 1, got {total}"
            )));
        }
        Ok(Self {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }
}

/// Parameters of the displaced two-Gaussian mixture: intra-mode variances
/// `s_q`, `s_p`, inter-mode correlations `k_q`, `k_p`, and the displacement
/// `d` of the component means along `(±d, ∓d, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacedPairParams {
    pub s_q: f64,
    pub s_p: f64,
    pub k_q: f64,
    pub k_p: f64,
    pub d: f64,
}

impl DisplacedPairParams {
    pub fn new(s_q: f64, s_p: f64, k_q: f64, k_p: f64, d: f64) -> Result<Self> {
        let p = Self {
            s_q,
            s_p,
            k_q,
            k_p,
            d,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("s_q", self.s_q),
            ("s_p", self.s_p),
            ("k_q", self.k_q),
            ("k_p", self.k_p),
            ("d", self.d),
        ] {
            if !v.is_finite() {
                return Err(PhaseSpaceError::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        if self.s_q <= 0.0 || self.s_p <= 0.0 {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "variances must be positive, got s_q={}, s_p={}",
                self.s_q, self.s_p
            )));
        }
        if self.k_q.abs() >= self.s_q || self.k_p.abs() >= self.s_p {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "correlations must satisfy |k_q| < s_q and |k_p| < s_p, got \
                 k_q={}, s_q={}, k_p={}, s_p={}",
                self.k_q, self.s_q, self.k_p, self.s_p
            )));
        }
        if self.d < 0.0 {
            return Err(PhaseSpaceError::InvalidParameter(format!(
                "displacement must be nonnegative, got {}",
                self.d
            )));
        }
        Ok(())
    }

    /// Same shape parameters with a different displacement.
    pub fn with_displacement(&self, d: f64) -> Result<Self> {
        Self::new(self.s_q, self.s_p, self.k_q, self.k_p, d)
    }

    /// The shared component covariance blockdiag(Q0, P0) with
    /// Q0 = [[s_q, k_q], [k_q, s_q]], P0 = [[s_p, k_p], [k_p, s_p]].
    pub fn sigma0(&self) -> Array2<f64> {
        let mut m = Array2::zeros((4, 4));
        m[[0, 0]] = self.s_q;
        m[[1, 1]] = self.s_q;
        m[[0, 1]] = self.k_q;
        m[[1, 0]] = self.k_q;
        m[[2, 2]] = self.s_p;
        m[[3, 3]] = self.s_p;
        m[[2, 3]] = self.k_p;
        m[[3, 2]] = self.k_p;
        m
    }
}

/// Builds the equal-weight pair of Gaussians displaced to `(±d, ∓d, 0, 0)`
/// with shared covariance `sigma0`.
pub fn make_displaced_pair(p: &DisplacedPairParams) -> Result<GaussianMixture2Mode> {
    p.validate()?;
    let sigma0 = p.sigma0();
    let mean_plus = Array1::from(vec![p.d, -p.d, 0.0, 0.0]);
    let mean_minus = Array1::from(vec![-p.d, p.d, 0.0, 0.0]);
    let c_plus = GaussianComponent::new(mean_plus, sigma0.clone())?;
    let c_minus = GaussianComponent::new(mean_minus, sigma0)?;
    GaussianMixture2Mode::new(vec![0.5, 0.5], vec![c_plus, c_minus])
}

/// Precomputed evaluator for a mixture density; factorizes each component
/// covariance once so grid sweeps stay cheap.
#[derive(Debug, Clone)]
pub struct MixtureDensity {
    terms: Vec<DensityTerm>,
}

#[derive(Debug, Clone)]
struct DensityTerm {
    scale: f64,
    mean: Array1<f64>,
    inv_cov: Array2<f64>,
}

impl MixtureDensity {
    pub fn new(mix: &GaussianMixture2Mode) -> Result<Self> {
        let mut terms = Vec::with_capacity(mix.components().len());
        for (w, comp) in mix.weights().iter().zip(mix.components()) {
            let det = comp
                .cov()
                .det()
                .map_err(|_| PhaseSpaceError::SingularCovariance)?;
            if det <= 0.0 {
                return Err(PhaseSpaceError::SingularCovariance);
            }
            let inv_cov = comp
                .cov()
                .inv()
                .map_err(|_| PhaseSpaceError::SingularCovariance)?;
            let norm = 1.0 / ((2.0 * PI).powi(2) * det.sqrt());
            terms.push(DensityTerm {
                scale: w * norm,
                mean: comp.mean().clone(),
                inv_cov,
            });
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, z: &[f64; 4]) -> f64 {
        let mut total = 0.0;
        for t in &self.terms {
            let mut quad = 0.0;
            let mut delta = [0.0; 4];
            for i in 0..4 {
                delta[i] = z[i] - t.mean[i];
            }
            for i in 0..4 {
                for j in 0..4 {
                    quad += delta[i] * t.inv_cov[[i, j]] * delta[j];
                }
            }
            total += t.scale * (-0.5 * quad).exp();
        }
        total
    }
}

/// Mixture probability density at the phase-space point `z = (q1, q2, p1, p2)`.
///
/// For repeated evaluation prefer [`MixtureDensity`], which caches the
/// per-component factorizations.
pub fn density_at(mix: &GaussianMixture2Mode, z: &[f64; 4]) -> Result<f64> {
    Ok(MixtureDensity::new(mix)?.eval(z))
}

/// Total second central moment of the mixture: the weighted component
/// covariances plus the spread of the component means.
pub fn mixture_covariance(mix: &GaussianMixture2Mode) -> Result<CovarianceMatrix> {
    let mut mean_bar = Array1::<f64>::zeros(4);
    for (w, comp) in mix.weights().iter().zip(mix.components()) {
        mean_bar = mean_bar + comp.mean() * *w;
    }
    let mut sigma = Array2::<f64>::zeros((4, 4));
    for (w, comp) in mix.weights().iter().zip(mix.components()) {
        let delta = comp.mean() - &mean_bar;
        for i in 0..4 {
            for j in 0..4 {
                sigma[[i, j]] += w * (comp.cov()[[i, j]] + delta[i] * delta[j]);
            }
        }
    }
    // symmetrize away roundoff before the strict constructor check
    let sigma = (&sigma + &sigma.t()) * 0.5;
    CovarianceMatrix::new(sigma)
}
