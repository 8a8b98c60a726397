//! Classical Takagi factorization `A = W D W^{ηH}` of η-Hermitian matrices.
//!
//! Over ℂ with η orthogonal to i the η-conjugate transpose is the plain
//! transpose, so this covers the complex symmetric case `A = W D W^T`.
//!
//! The columns of `W` are the solutions of `A (η̄ w η) = σ w`. The map
//! `u ↦ A (η̄ u η)` is ℝ-linear and symmetric for the real inner product
//! `Re(u^H v)`, so it is diagonalized as a real symmetric matrix; its
//! eigenvalues come in `±σ` pairs and the nonnegative side yields `W`.

use alloc::vec::Vec;

use super::eigen::jacobi;
use super::embed::{select_orthonormal, takagi_operator, vector_from_real};
use crate::dual_matrix::default_tol;
use crate::matrix::{inner, Matrix};
use crate::scalar::{Eta, Field, Scalar, ETA_TOL};
use crate::Error;

/// `A = W diag(d) W^{ηH}`, `W` unitary, `d` real, nonnegative, descending.
#[derive(Clone, Debug)]
pub struct ClassicalTakagi<T> {
    pub w: Matrix<T>,
    pub d: Vec<f64>,
}

impl<T: Scalar> ClassicalTakagi<T> {
    pub fn reconstruct(&self, eta: Eta) -> Matrix<T> {
        let d = Matrix::from_diagonal(&self.d.iter().map(|&x| T::from_real(x)).collect::<Vec<_>>());
        self.w.mul(&d).mul(&self.w.eta_adjoint(eta))
    }
}

/// Complex symmetric Takagi factorization `A = W D W^T`.
pub fn takagi_complex(a: &Matrix<num_complex::Complex64>) -> Result<ClassicalTakagi<num_complex::Complex64>, Error> {
    takagi(a, Eta::J)
}

/// Quaternion η-Hermitian Takagi factorization `A = U Σ U^{ηH}`.
pub fn takagi_quaternion(a: &Matrix<crate::Quaternion>, eta: Eta) -> Result<ClassicalTakagi<crate::Quaternion>, Error> {
    takagi(a, eta)
}

/// Generic entry point. Real input is rejected (an indefinite real
/// symmetric matrix has no real Takagi factor); lift it to ℂ first.
pub fn takagi<T: Scalar>(a: &Matrix<T>, eta: Eta) -> Result<ClassicalTakagi<T>, Error> {
    check_takagi_field::<T>(eta)?;
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let tol = default_tol(a.frobenius_norm());
    let defect = a.eta_hermitian_defect(eta);
    if defect > tol {
        return Err(Error::NotStructured { property: "eta-Hermitian", residual: defect, tol });
    }
    let op = takagi_operator(a, eta);
    let sym = Matrix::from_fn(op.rows(), op.cols(), |i, j| 0.5 * (op[(i, j)] + op[(j, i)]));
    let e = jacobi(sym)?;
    let candidates = (0..op.cols()).map(|c| vector_from_real::<T>(&e.vectors.column(c)));
    let picked = select_orthonormal(candidates, n);
    if picked.len() != n {
        return Err(Error::NoConvergence { routine: "takagi vector selection" });
    }
    let mut pairs: Vec<(f64, Vec<T>)> = picked
        .into_iter()
        .map(|u| {
            let twisted: Vec<T> = u.iter().map(|&x| eta.sandwich(x)).collect();
            let sigma = inner(&u, &a.mul_vec(&twisted)).re().max(0.0);
            (sigma, u)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut w = Matrix::zeros(n, n);
    for (j, (_, u)) in pairs.iter().enumerate() {
        w.set_column(j, u);
    }
    Ok(ClassicalTakagi { w, d: pairs.into_iter().map(|p| p.0).collect() })
}

pub(crate) fn check_takagi_field<T: Scalar>(eta: Eta) -> Result<(), Error> {
    match T::FIELD {
        Field::Real => Err(Error::Unsupported { op: "takagi", field: Field::Real }),
        // over ℂ only η ⊥ i keeps the problem inside ℂ and non-Hermitian
        Field::Complex if eta.quaternion().x.abs() > ETA_TOL => {
            Err(Error::Unsupported { op: "takagi with this eta", field: Field::Complex })
        }
        _ => Ok(()),
    }
}
