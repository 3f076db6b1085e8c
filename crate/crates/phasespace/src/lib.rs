//! Classical phase-space distributions and quantum states in one common
//! representation, with layered nonseparability diagnostics.
//!
//! The crate covers, in order of increasing observer power:
//!
//! * covariance-level tests — the Robertson-Schrodinger uncertainty check and
//!   the partial-transpose (PPT) criterion on symplectic spectra
//!   ([`symplectic`]);
//! * operator positivity — discretized position-space Weyl kernels and their
//!   smallest eigenvalue ([`weyl_kernel`]), including reconstruction from
//!   simulated homodyne data ([`tomography`]);
//! * Wigner negativity — closed-form Fock benchmarks ([`fock`]);
//! * the resulting taxonomy of separable, representational, hybrid, and
//!   genuine entanglement ([`classify`]).
//!
//! Classical states are Gaussian mixtures over two modes ([`phase_space`]);
//! coordinates are ordered `(q1, q2, p1, p2)` everywhere.

pub mod classify;
pub mod config;
pub mod error;
pub mod fock;
pub mod io;
pub mod phase_space;
pub mod symplectic;
pub mod tomography;
pub mod weyl_kernel;

pub use error::{PhaseSpaceError, Result};
pub use phase_space::{Constants, CovarianceMatrix, DisplacedPairParams, GaussianMixture2Mode};
