//! C ABI over the phasespace crate.
//!
//! Conventions: every fallible call returns a [`PsStatus`]; results come back
//! through out-pointers; heavyweight objects (discretized kernels) live behind
//! opaque handles freed with `ps_kernel_free`. Booleans cross the boundary as
//! `int32_t` (0/1). The header is generated into `include/phasespace.h` at
//! build time.

use std::os::raw::c_char;

use phasespace::classify::{classify, Diagnostics, Region};
use phasespace::fock::{pt_spectrum, two_mode_wigner_min};
use phasespace::phase_space::{
    make_displaced_pair, mixture_covariance, Constants, DisplacedPairParams,
};
use phasespace::symplectic::{ppt_test, rs_test};
use phasespace::weyl_kernel::{build_kernel_matrix, min_eigenvalue, GridSpec, KernelMatrix, Verdict};
use phasespace::PhaseSpaceError;

/// Call outcome.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    /// A parameter failed validation (non-positive width, p outside [0,1], ...).
    InvalidParameter = 1,
    /// The requested kernel would exceed the dimension guard.
    TooLarge = 2,
    /// An eigensolver or other numeric routine failed.
    NumericalFailure = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
}

/// Classification regions; mirrors the core taxonomy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsRegion {
    Separable = 0,
    Representational = 1,
    Hybrid = 2,
    Genuine = 3,
    Undetermined = 4,
}

impl From<Region> for PsRegion {
    fn from(r: Region) -> Self {
        match r {
            Region::Separable => PsRegion::Separable,
            Region::Representational => PsRegion::Representational,
            Region::Hybrid => PsRegion::Hybrid,
            Region::Genuine => PsRegion::Genuine,
            Region::Undetermined => PsRegion::Undetermined,
        }
    }
}

fn status_of(e: &PhaseSpaceError) -> PsStatus {
    match e {
        PhaseSpaceError::KernelTooLarge { .. } => PsStatus::TooLarge,
        PhaseSpaceError::InvalidParameter(_)
        | PhaseSpaceError::TooFewAngles(_)
        | PhaseSpaceError::GridTooCoarse { .. } => PsStatus::InvalidParameter,
        _ => PsStatus::NumericalFailure,
    }
}

/// Opaque handle to a discretized position-space kernel.
pub struct PsKernel {
    inner: KernelMatrix,
}

/// RS and PPT symplectic tests for the displaced-pair family at one
/// displacement. `rs_pass`/`ppt_pass` receive 0 or 1.
///
/// # Safety
/// All out-pointers must be valid for writes (or null, in which case the call
/// fails with `NullPointer`).
#[no_mangle]
pub unsafe extern "C" fn ps_scan_point(
    s_q: f64,
    s_p: f64,
    k_q: f64,
    k_p: f64,
    d: f64,
    hbar: f64,
    nu_min: *mut f64,
    nu_tilde_min: *mut f64,
    rs_pass: *mut i32,
    ppt_pass: *mut i32,
) -> PsStatus {
    if nu_min.is_null() || nu_tilde_min.is_null() || rs_pass.is_null() || ppt_pass.is_null() {
        return PsStatus::NullPointer;
    }
    let run = || -> phasespace::Result<(f64, f64, bool, bool)> {
        let c = Constants::new(hbar)?;
        let params = DisplacedPairParams::new(s_q, s_p, k_q, k_p, d)?;
        let sigma = mixture_covariance(&make_displaced_pair(&params)?)?;
        let (rs, rs_margin) = rs_test(&sigma, &c)?;
        let (ppt, ppt_margin) = ppt_test(&sigma, &c)?;
        Ok((
            rs_margin + 0.5 * c.hbar(),
            ppt_margin + 0.5 * c.hbar(),
            rs,
            ppt,
        ))
    };
    match run() {
        Ok((nu, nu_tilde, rs, ppt)) => {
            *nu_min = nu;
            *nu_tilde_min = nu_tilde;
            *rs_pass = rs as i32;
            *ppt_pass = ppt as i32;
            PsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Builds the discretized two-mode kernel for the displaced-pair family on an
/// `n` x `n` position lattice over `[lo, hi]^2`. `max_dim` caps the matrix
/// dimension (`n^2`); pass 0 for the built-in guard of 10000. On success the
/// handle must be released with `ps_kernel_free`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_kernel_build(
    s_q: f64,
    s_p: f64,
    k_q: f64,
    k_p: f64,
    d: f64,
    hbar: f64,
    lo: f64,
    hi: f64,
    n: usize,
    max_dim: usize,
    out: *mut *mut PsKernel,
) -> PsStatus {
    if out.is_null() {
        return PsStatus::NullPointer;
    }
    let run = || -> phasespace::Result<KernelMatrix> {
        let c = Constants::new(hbar)?;
        let params = DisplacedPairParams::new(s_q, s_p, k_q, k_p, d)?;
        let grid = GridSpec::new(lo, hi, n, 2)?;
        let guard = if max_dim == 0 { None } else { Some(max_dim) };
        build_kernel_matrix(&params, &grid, &c, guard)
    };
    match run() {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PsKernel { inner }));
            PsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Matrix dimension of a kernel handle; 0 if the handle is null.
///
/// # Safety
/// `kernel` must be null or a handle from `ps_kernel_build`.
#[no_mangle]
pub unsafe extern "C" fn ps_kernel_dim(kernel: *const PsKernel) -> usize {
    if kernel.is_null() {
        return 0;
    }
    (*kernel).inner.grid().matrix_dim()
}

/// Smallest eigenvalue, trace, and positivity verdict (1 = positive within
/// tolerance) of a kernel handle.
///
/// # Safety
/// `kernel` must be a handle from `ps_kernel_build`; out-pointers must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_kernel_min_eigenvalue(
    kernel: *const PsKernel,
    lambda_min: *mut f64,
    trace: *mut f64,
    positive: *mut i32,
) -> PsStatus {
    if kernel.is_null() || lambda_min.is_null() || trace.is_null() || positive.is_null() {
        return PsStatus::NullPointer;
    }
    match min_eigenvalue(&(*kernel).inner) {
        Ok(report) => {
            *lambda_min = report.lambda_min;
            *trace = report.trace;
            *positive = (report.verdict == Verdict::Positive) as i32;
            PsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a kernel handle; null is a no-op.
///
/// # Safety
/// `kernel` must be null or a handle from `ps_kernel_build`, and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ps_kernel_free(kernel: *mut PsKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Partial-transpose minimum eigenvalue and global Wigner minimum of the
/// beamsplitter benchmark at mixing weight `p`.
///
/// # Safety
/// Out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ps_fock_point(
    p: f64,
    hbar: f64,
    lambda_min_pt: *mut f64,
    wigner_min: *mut f64,
) -> PsStatus {
    if lambda_min_pt.is_null() || wigner_min.is_null() {
        return PsStatus::NullPointer;
    }
    let run = || -> phasespace::Result<(f64, f64)> {
        let c = Constants::new(hbar)?;
        Ok((pt_spectrum(p)?.eigenvalues[0], two_mode_wigner_min(p, &c)?))
    };
    match run() {
        Ok((l, w)) => {
            *lambda_min_pt = l;
            *wigner_min = w;
            PsStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Classifies a diagnostics bundle. `has_operator`/`has_wigner` mark whether
/// the corresponding flag was measured; unmeasured flags can force
/// `Undetermined`.
#[no_mangle]
pub extern "C" fn ps_classify(
    rs_pass: i32,
    ppt_pass: i32,
    has_operator: i32,
    operator_positive: i32,
    has_wigner: i32,
    wigner_nonnegative: i32,
) -> PsRegion {
    classify(&Diagnostics {
        rs_pass: rs_pass != 0,
        ppt_pass: ppt_pass != 0,
        operator_positive: (has_operator != 0).then_some(operator_positive != 0),
        wigner_nonnegative: (has_wigner != 0).then_some(wigner_nonnegative != 0),
    })
    .into()
}

/// Stable NUL-terminated name for a region code.
#[no_mangle]
pub extern "C" fn ps_region_name(region: PsRegion) -> *const c_char {
    let s: &'static [u8] = match region {
        PsRegion::Separable => b"SEPARABLE\0",
        PsRegion::Representational => b"RE\0",
        PsRegion::Hybrid => b"HE\0",
        PsRegion::Genuine => b"GE\0",
        PsRegion::Undetermined => b"UNDETERMINED\0",
    };
    s.as_ptr() as *const c_char
}
