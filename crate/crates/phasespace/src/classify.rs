//! Maps layered diagnostic outcomes onto the nonseparability taxonomy.
//!
//! PPT pass means no nonseparability was detected at the tested level; the
//! verdict is SEPARABLE with that caveat (PPT is only a necessary condition
//! in general). A PPT failure splits on operator positivity and, when the
//! operator is positive, on Wigner nonnegativity. The RS outcome is carried
//! as metadata only: operator positivity subsumes it.

/// Bundle of test outcomes feeding the classification. The optional fields
/// are only consulted when the PPT test failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub rs_pass: bool,
    pub ppt_pass: bool,
    pub operator_positive: Option<bool>,
    pub wigner_nonnegative: Option<bool>,
}

/// Nonseparability regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// PPT passed at the tested level.
    Separable,
    /// Nonseparable covariance but a non-positive operator: a formalism
    /// artifact.
    Representational,
    /// Genuinely nonseparable operator with a nonnegative Wigner function,
    /// still reproducible by a classical phase-space model.
    Hybrid,
    /// Nonseparable, operator-positive, and Wigner-negative.
    Genuine,
    /// The branch needs an optional diagnostic that was not supplied.
    Undetermined,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Separable => "SEPARABLE",
            Region::Representational => "RE",
            Region::Hybrid => "HE",
            Region::Genuine => "GE",
            Region::Undetermined => "UNDETERMINED",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Total, deterministic classification of a diagnostics bundle.
pub fn classify(d: &Diagnostics) -> Region {
    if d.ppt_pass {
        return Region::Separable;
    }
    match (d.operator_positive, d.wigner_nonnegative) {
        (Some(false), _) => Region::Representational,
        (Some(true), Some(true)) => Region::Hybrid,
        (Some(true), Some(false)) => Region::Genuine,
        (Some(true), None) | (None, _) => Region::Undetermined,
    }
}
