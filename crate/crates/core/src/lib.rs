//! Dual matrices over the reals, complex numbers and quaternions, and
//! their factorizations: dual Takagi, dual LU, dual Cholesky and the dual
//! Moore-Penrose inverse.
//!
//! A dual matrix is `A = A_s + A_i ε` with `ε² = 0`. Every factorization
//! here is computed from one classical factorization of the standard part
//! `A_s` followed by a linear solve for the infinitesimal part.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod dual;
mod dual_matrix;
mod dual_takagi;
mod error;
mod factor;
pub mod kernels;
mod math;
mod matrix;
mod quaternion;
mod scalar;

pub use dual::DualScalar;
pub use dual_matrix::{default_tol, quasi_norm_distance, Check, DualMatrix, StructureReport, DEFAULT_REL_TOL};
pub use dual_takagi::{
    atdsvd, atdsvd_strict, build_q, cluster_eigenvalues, default_cluster_tol, dtakagi, eta_dtakagi, Cluster,
    DualTakagiResult, TakagiOptions,
};
pub use error::Error;
pub use factor::{
    dcholesky, dlu, dlu_condition_residual, dmpgi, dmpgi_condition_residual, dual_penrose_residuals,
    equivalence_report, existence_tol, sylvester_general_solution, CholeskyOptions, DluOptions, Dmpgi,
    DualCholeskyResult, DualLUResult, EquivalenceReport, Fallback, SylvesterSolution,
};
pub use kernels::{Pivoting, RankSpec};
pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use quaternion::Quaternion;
pub use scalar::{Eta, Field, Scalar, ETA_TOL};
