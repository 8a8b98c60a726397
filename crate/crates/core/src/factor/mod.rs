//! Dual LU, dual Cholesky, the dual Moore-Penrose inverse and the tools
//! they share.

mod dcholesky;
mod dlu;
mod dmpgi;
mod equivalence;
mod sylvester;

pub use dcholesky::{dcholesky, CholeskyOptions, DualCholeskyResult};
pub use dlu::{dlu, dlu_condition_residual, DluOptions, DualLUResult, Fallback};
pub use dmpgi::{dmpgi, dmpgi_condition_residual, dual_penrose_residuals, Dmpgi};
pub use equivalence::{equivalence_report, EquivalenceReport};
pub use sylvester::{sylvester_general_solution, SylvesterSolution};

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Existence tolerance `1e-10 · max(1, ‖A_i‖_F)`.
pub fn existence_tol<T: Scalar>(a_i: &Matrix<T>) -> f64 {
    crate::dual_matrix::default_tol(a_i.frobenius_norm())
}

/// `I − A A†` (left) or `I − A† A` (right) given `A` and `A†`.
pub(crate) fn complement<T: Scalar>(a: &Matrix<T>, ap: &Matrix<T>) -> Matrix<T> {
    let p = a.mul(ap);
    Matrix::identity(p.rows()).sub(&p)
}
