use core::fmt;

use crate::scalar::Field;

/// Everything that can go wrong in this crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// The input lacks a structural property the routine requires
    /// (symmetry, η-Hermitian-ness, ...). `residual` is the Frobenius norm
    /// of the defect.
    NotStructured {
        property: &'static str,
        residual: f64,
        tol: f64,
    },
    InvalidEta,
    /// The routine is not defined for this field / η combination.
    Unsupported {
        op: &'static str,
        field: Field,
    },
    NonFinite,
    NotPositiveDefinite {
        pivot: usize,
    },
    ZeroPivot {
        index: usize,
    },
    InvalidRank {
        requested: usize,
        max: usize,
    },
    /// Elimination stopped at the requested rank but the remaining Schur
    /// complement is not negligible.
    RankExceeded {
        k: usize,
        remainder: f64,
    },
    RankDeficient {
        what: &'static str,
    },
    ClusterGap {
        left: f64,
        right: f64,
    },
    NoConvergence {
        routine: &'static str,
    },
    SylvesterNoSolution {
        residual: f64,
        tol: f64,
    },
    DluConditionViolated {
        residual: f64,
        tol: f64,
    },
    DmpgiNotExists {
        residual: f64,
        tol: f64,
    },
    /// Semidefinite dual Cholesky: the infinitesimal part is not
    /// reachable from the singular standard factor.
    CholeskyInconsistent {
        residual: f64,
        tol: f64,
    },
}

impl Error {
    /// Failures meaning "this decomposition does not exist for this
    /// input", as opposed to malformed input or numerical breakdown.
    pub fn is_existence_failure(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::SylvesterNoSolution { .. }
                | Error::DluConditionViolated { .. }
                | Error::DmpgiNotExists { .. }
                | Error::CholeskyInconsistent { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { op, left, right } => {
                write!(f, "{op}: shape mismatch {}x{} vs {}x{}", left.0, left.1, right.0, right.1)
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, expected square"),
            Error::NotStructured { property, residual, tol } => {
                write!(f, "input is not {property} (defect {residual:e} > {tol:e})")
            }
            Error::InvalidEta => f.write_str("eta must be a unit pure imaginary quaternion"),
            Error::Unsupported { op, field } => {
                write!(f, "{op} is not supported over the {} field", field.name())
            }
            Error::NonFinite => f.write_str("input contains non-finite entries"),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "standard part not positive definite (pivot {pivot})")
            }
            Error::ZeroPivot { index } => write!(f, "zero pivot at step {index}"),
            Error::InvalidRank { requested, max } => {
                write!(f, "requested rank {requested} exceeds {max}")
            }
            Error::RankExceeded { k, remainder } => {
                write!(f, "rank exceeds {k}: remainder {remainder:e} after elimination")
            }
            Error::RankDeficient { what } => write!(f, "{what} is rank deficient"),
            Error::ClusterGap { left, right } => {
                write!(f, "cluster values {left} and {right} coincide")
            }
            Error::NoConvergence { routine } => write!(f, "{routine} did not converge"),
            Error::SylvesterNoSolution { residual, tol } => {
                write!(f, "Sylvester equation has no solution (residual {residual:e} > {tol:e})")
            }
            Error::DluConditionViolated { residual, tol } => {
                write!(f, "dual LU existence condition violated (residual {residual:e} > {tol:e})")
            }
            Error::DmpgiNotExists { residual, tol } => {
                write!(f, "dual Moore-Penrose inverse does not exist (residual {residual:e} > {tol:e})")
            }
            Error::CholeskyInconsistent { residual, tol } => {
                write!(f, "semidefinite dual Cholesky does not exist (residual {residual:e} > {tol:e})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
