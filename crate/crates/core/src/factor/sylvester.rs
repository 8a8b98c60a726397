use crate::kernels::pinv;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Error;

use super::complement;

/// One member `(X, Y)` of the general solution of `A X − Y B = C`.
#[derive(Clone, Debug)]
pub struct SylvesterSolution<T> {
    pub x: Matrix<T>,
    pub y: Matrix<T>,
    /// `‖A X − Y B − C‖_F`.
    pub residual: f64,
}

/// Solves `A X − Y B = C` for `A: m×k`, `B: l×n`, `C: m×n`.
///
/// Solvable iff `(I − AA†) C (I − B†B) = 0`. The free parameters
/// `Z: m×l` and `W: k×n` select a member of the solution family
///
/// ```text
/// X = A†C + A†ZB + (I − A†A)W
/// Y = −(I − AA†)CB† + Z − (I − AA†)ZBB†
/// ```
///
/// and default to zero. `tol` defaults to `1e-10 · max(1, ‖C‖_F)`.
pub fn sylvester_general_solution<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    c: &Matrix<T>,
    z: Option<&Matrix<T>>,
    w: Option<&Matrix<T>>,
    tol: Option<f64>,
) -> Result<SylvesterSolution<T>, Error> {
    let (m, k) = a.shape();
    let (l, n) = b.shape();
    if c.shape() != (m, n) {
        return Err(Error::ShapeMismatch { op: "sylvester C", left: (m, n), right: c.shape() });
    }
    let z = match z {
        Some(z) if z.shape() != (m, l) => {
            return Err(Error::ShapeMismatch { op: "sylvester Z", left: (m, l), right: z.shape() })
        }
        Some(z) => z.clone(),
        None => Matrix::zeros(m, l),
    };
    let w = match w {
        Some(w) if w.shape() != (k, n) => {
            return Err(Error::ShapeMismatch { op: "sylvester W", left: (k, n), right: w.shape() })
        }
        Some(w) => w.clone(),
        None => Matrix::zeros(k, n),
    };
    let tol = tol.unwrap_or_else(|| super::existence_tol(c));
    let ap = pinv(a)?;
    let bp = pinv(b)?;
    let left = complement(a, &ap);
    let right = complement(&bp, b);
    let obstruction = left.mul(c).mul(&right).frobenius_norm();
    if obstruction > tol {
        return Err(Error::SylvesterNoSolution { residual: obstruction, tol });
    }
    let x = ap.mul(c).add(&ap.mul(&z).mul(b)).add(&complement(&ap, a).mul(&w));
    let y = left.mul(c).mul(&bp).neg().add(&z).sub(&left.mul(&z).mul(b).mul(&bp));
    let residual = a.mul(&x).sub(&y.mul(b)).sub(c).frobenius_norm();
    if residual > tol {
        return Err(Error::SylvesterNoSolution { residual, tol });
    }
    Ok(SylvesterSolution { x, y, residual })
}
