use thiserror::Error;

/// Failure modes of the solver pipeline.
///
/// Payloads are stored in `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {}{:+}i, error bound {error_bound:e})", estimate.0, estimate.1
    )]
    Quadrature {
        estimate: (f64, f64),
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("Newton iteration did not converge ({} iterates)", trace.len())]
    Newton { trace: Vec<(f64, f64)> },

    #[error("function vanishes on the contour near {}{:+}i", at.0, at.1)]
    ZeroOnContour { at: (f64, f64) },

    #[error("contour is not closed")]
    OpenContour,

    #[error("argument tracking failed to resolve the phase near {}{:+}i", at.0, at.1)]
    WindingRefinement { at: (f64, f64) },

    #[error("parameter point is within tolerance of the spectral boundary: |lambda(+/-)| = {magnitude:e} at mu = {mu}")]
    SpectralBoundary { mu: f64, magnitude: f64 },

    #[error("zero count {0} is not one of the admissible values 2 or 4")]
    ZeroCount(i64),

    #[error("zero isolation by rectangle subdivision exhausted its depth budget")]
    SubdivisionExhausted,

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("Fourier cutoff k_max = {k_max} leaves a tail estimate {tail:e} above tolerance")]
    Cutoff { k_max: f64, tail: f64 },

    #[error("dense linear solve failed (singular system)")]
    LinearSolve,

    #[error("grid refinement did not converge: {0}")]
    Refinement(String),

    #[error("field evaluation failed at x = {x}: {source}")]
    AtDepth {
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True when the failure reflects proximity to the boundary of the spectral regions
    /// rather than a numerical breakdown.
    pub fn is_near_boundary(&self) -> bool {
        match self {
            Error::SpectralBoundary { .. } | Error::ZeroOnContour { .. } => true,
            Error::AtDepth { source, .. } => source.is_near_boundary(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
