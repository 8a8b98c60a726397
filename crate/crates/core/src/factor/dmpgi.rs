use crate::dual_matrix::DualMatrix;
use crate::kernels::pinv;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Error;

use super::{complement, existence_tol};

/// Dual Moore-Penrose generalized inverse with its diagnostics.
#[derive(Clone, Debug)]
pub struct Dmpgi<T> {
    pub x: DualMatrix<T>,
    pub condition_residual: f64,
    /// See [`dual_penrose_residuals`].
    pub penrose: [f64; 4],
}

/// `‖(I − A_s A_s†) A_i (I − A_s† A_s)‖_F`; the inverse exists iff it is 0.
pub fn dmpgi_condition_residual<T: Scalar>(a: &DualMatrix<T>) -> Result<f64, Error> {
    let sp = pinv(&a.standard)?;
    Ok(complement(&a.standard, &sp).mul(&a.infinitesimal).mul(&complement(&sp, &a.standard)).frobenius_norm())
}

/// Norms (both parts combined) of the dual Penrose residuals
/// `AXA − A`, `XAX − X`, `(AX)^H − AX`, `(XA)^H − XA`.
pub fn dual_penrose_residuals<T: Scalar>(a: &DualMatrix<T>, x: &DualMatrix<T>) -> Result<[f64; 4], Error> {
    let ax = a.mul(x)?;
    let xa = x.mul(a)?;
    Ok([
        ax.mul(a)?.sub(a)?.frobenius_norm(),
        xa.mul(x)?.sub(x)?.frobenius_norm(),
        ax.adjoint().sub(&ax)?.frobenius_norm(),
        xa.adjoint().sub(&xa)?.frobenius_norm(),
    ])
}

/// Dual Moore-Penrose generalized inverse `X = A_s† + ε X_i` with
///
/// ```text
/// X_i = −A_s† A_i A_s† + (A_s^H A_s)† A_i^H (I − A_s A_s†)
///       + (I − A_s† A_s) A_i^H (A_s A_s^H)†.
/// ```
///
/// `tol` bounds the existence residual and defaults to
/// `1e-10 · max(1, ‖A_i‖_F)`.
pub fn dmpgi<T: Scalar>(a: &DualMatrix<T>, tol: Option<f64>) -> Result<Dmpgi<T>, Error> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (s, i) = (&a.standard, &a.infinitesimal);
    let tol = tol.unwrap_or_else(|| existence_tol(i));
    let sp = pinv(s)?;
    let left = complement(s, &sp);
    let right = complement(&sp, s);
    let condition_residual = left.mul(i).mul(&right).frobenius_norm();
    if condition_residual > tol {
        return Err(Error::DmpgiNotExists { residual: condition_residual, tol });
    }
    let ih = i.adjoint();
    let xi: Matrix<T> = sp
        .mul(i)
        .mul(&sp)
        .neg()
        .add(&pinv(&s.adjoint().mul(s))?.mul(&ih).mul(&left))
        .add(&right.mul(&ih).mul(&pinv(&s.mul(&s.adjoint()))?));
    let x = DualMatrix { standard: sp, infinitesimal: xi };
    let penrose = dual_penrose_residuals(a, &x)?;
    Ok(Dmpgi { x, condition_residual, penrose })
}
