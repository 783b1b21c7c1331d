use num_complex::Complex64;

use crate::lattice::AXES;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(
        "invalid lattice extents {0:?}: every extent must be >= 1 and the site count addressable"
    )]
    InvalidDims([usize; AXES]),

    #[error("fields live on different lattices ({left:?} vs {right:?})")]
    DimsMismatch {
        left: [usize; AXES],
        right: [usize; AXES],
    },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("grade {0} out of range 0..=4")]
    InvalidGrade(usize),

    #[error("momentum {p:?} out of range for lattice extents {dims:?}")]
    MomentumOutOfRange {
        p: [usize; AXES],
        dims: [usize; AXES],
    },

    #[error("eigensolver did not converge at momentum {p:?}")]
    EigenNonConvergence { p: [usize; AXES] },

    #[error("propagator block at momentum {p:?} is singular: mass coincides with eigenvalue {eigenvalue}")]
    SingularBlock {
        p: [usize; AXES],
        eigenvalue: Complex64,
    },

    #[error("propagator a-posteriori residual {residual:e} exceeds bound {bound:e}")]
    PropagatorResidual { residual: f64, bound: f64 },

    #[error("closed-form and product routes disagree by {deviation:e} (tolerance {tolerance:e})")]
    RouteDisagreement { deviation: f64, tolerance: f64 },
}
