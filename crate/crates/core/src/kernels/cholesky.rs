//! Real Cholesky factorization.

use crate::dual_matrix::default_tol;
use crate::math::sqrt;
use crate::matrix::Matrix;
use crate::Error;

/// Pivots at or below `n · ε · max_i A_ii` count as nonpositive.
fn pivot_floor(a: &Matrix<f64>) -> f64 {
    let dmax = a.diagonal().into_iter().fold(0.0_f64, f64::max);
    (a.rows() as f64) * f64::EPSILON * dmax
}

fn check_input(a: &Matrix<f64>) -> Result<(), Error> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = default_tol(a.frobenius_norm());
    let defect = a.symmetry_defect();
    if defect > tol {
        return Err(Error::NotStructured { property: "symmetric", residual: defect, tol });
    }
    Ok(())
}

/// `A = L L^T` with `L` lower triangular and positive diagonal.
pub fn cholesky(a: &Matrix<f64>) -> Result<Matrix<f64>, Error> {
    check_input(a)?;
    let floor = pivot_floor(a);
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= floor {
            return Err(Error::NotPositiveDefinite { pivot: j });
        }
        let ljj = sqrt(d);
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Cholesky of a positive semidefinite matrix whose singular directions
/// sit at the trailing positions. Returns `L` with zero trailing columns
/// and the rank `r` of the leading positive definite block.
pub fn cholesky_semidefinite(a: &Matrix<f64>) -> Result<(Matrix<f64>, usize), Error> {
    check_input(a)?;
    let floor = pivot_floor(a);
    let n = a.rows();
    let mut l = Matrix::zeros(n, n);
    let mut r = n;
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= floor {
            r = j;
            break;
        }
        let ljj = sqrt(d);
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    // the trailing Schur complement must vanish
    let rec = l.mul(&l.transpose());
    let resid = rec.sub(a).frobenius_norm();
    if resid > default_tol(a.frobenius_norm()) {
        return Err(Error::NotPositiveDefinite { pivot: r });
    }
    Ok((l, r))
}
