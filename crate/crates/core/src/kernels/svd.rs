//! Singular value decomposition (one-sided Jacobi) and the Moore-Penrose
//! pseudoinverse.

use alloc::vec::Vec;

use super::embed::{from_left_embedding, left_embedding};
use crate::math::{hypot, sqrt};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::Error;

const MAX_SWEEPS: usize = 80;

/// Thin real SVD `A = U diag(σ) V^T`, σ descending, `U: m×p`, `V: n×p`,
/// `p = min(m, n)`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix<f64>,
    pub sigma: Vec<f64>,
    pub v: Matrix<f64>,
}

pub fn svd_real(a: &Matrix<f64>) -> Result<Svd, Error> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    if a.rows() < a.cols() {
        let t = svd_real(&a.transpose())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    let (m, n) = a.shape();
    // columns stored contiguously
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold((0.0, 0.0, 0.0), |acc, (&x, &y)| (acc.0 + x * x, acc.1 + y * y, acc.2 + x * y));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + hypot(zeta, 1.0));
                let c = 1.0 / hypot(t, 1.0);
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "one-sided Jacobi SVD" });
    }
    let norms: Vec<f64> = cols.iter().map(|c| sqrt(c.iter().map(|x| x * x).sum())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Matrix::from_fn(m, n, |i, j| {
        let s = norms[order[j]];
        if s > 0.0 {
            cols[order[j]][i] / s
        } else {
            0.0
        }
    });
    let vm = Matrix::from_fn(n, n, |i, j| v[order[j]][i]);
    Ok(Svd { u, sigma, v: vm })
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Singular values below `max(m, n) · ε · σ_max` are treated as zero.
fn cutoff(svd: &Svd, m: usize, n: usize) -> f64 {
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    (m.max(n) as f64) * f64::EPSILON * smax
}

fn pinv_real(a: &Matrix<f64>) -> Result<Matrix<f64>, Error> {
    let (m, n) = a.shape();
    let svd = svd_real(a)?;
    let cut = cutoff(&svd, m, n);
    let mut out = Matrix::zeros(n, m);
    for (k, &s) in svd.sigma.iter().enumerate() {
        if s <= cut || s == 0.0 {
            continue;
        }
        let inv = 1.0 / s;
        for i in 0..n {
            let vik = svd.v[(i, k)] * inv;
            if vik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += vik * svd.u[(j, k)];
            }
        }
    }
    Ok(out)
}

/// Moore-Penrose pseudoinverse over any field. Complex and quaternion
/// matrices go through their real left-multiplication embedding, which
/// commutes with the pseudoinverse.
pub fn pinv<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>, Error> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Matrix::zeros(a.cols(), a.rows()));
    }
    if T::FIELD == Field::Real {
        return Ok(pinv_real(&a.map(|x| x.re()))?.map(T::from_real));
    }
    let p = pinv_real(&left_embedding(a))?;
    Ok(from_left_embedding(&p))
}

/// Numerical rank with the same cutoff as [`pinv`].
pub fn rank<T: Scalar>(a: &Matrix<T>) -> Result<usize, Error> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0);
    }
    let e = left_embedding(a);
    let svd = svd_real(&e)?;
    let cut = cutoff(&svd, e.rows(), e.cols());
    let r = svd.sigma.iter().filter(|&&s| s > cut && s > 0.0).count();
    Ok(r / T::REAL_DIM)
}

/// Frobenius norms of the four Penrose residuals
/// `AXA − A`, `XAX − X`, `(AX)^H − AX`, `(XA)^H − XA`.
pub fn penrose_residuals<T: Scalar>(a: &Matrix<T>, x: &Matrix<T>) -> [f64; 4] {
    let ax = a.mul(x);
    let xa = x.mul(a);
    [
        ax.mul(a).sub(a).frobenius_norm(),
        xa.mul(x).sub(x).frobenius_norm(),
        ax.adjoint().sub(&ax).frobenius_norm(),
        xa.adjoint().sub(&xa).frobenius_norm(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(pinv(&Matrix::<f64>::identity(3)).unwrap(), Matrix::identity(3));
        let p = pinv(&Matrix::from_diagonal(&[2.0, 0.0])).unwrap();
        assert_eq!(p, Matrix::from_diagonal(&[0.5, 0.0]));
    }

    #[test]
    fn rank_two_real() {
        let b = Matrix::from_row_slice(4, 2, &[1.0, 0.0, 2.0, 1.0, -1.0, 3.0, 0.5, 0.5]);
        let c = Matrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, -1.0]);
        let a = b.mul(&c);
        assert_eq!(rank(&a).unwrap(), 2);
        let x = pinv(&a).unwrap();
        for r in penrose_residuals(&a, &x) {
            assert!(r < 1e-12, "{r}");
        }
        let s = svd_real(&a).unwrap();
        let rec = Matrix::from_fn(4, 3, |i, j| (0..3).map(|k| s.u[(i, k)] * s.sigma[k] * s.v[(j, k)]).sum());
        assert!(rec.sub(&a).frobenius_norm() < 1e-13);
    }

    #[test]
    fn complex_penrose() {
        let c = |re, im| Complex64::new(re, im);
        let a = Matrix::from_row_slice(
            3,
            2,
            &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 2.0)],
        );
        let x = pinv(&a).unwrap();
        for r in penrose_residuals(&a, &x) {
            assert!(r < 1e-13, "{r}");
        }
        // rank-one
        let u = Matrix::from_row_slice(2, 1, &[c(1.0, 2.0), c(0.0, 1.0)]);
        let v = Matrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(-1.0, 1.0), c(0.5, 0.0)]);
        let r1 = u.mul(&v);
        assert_eq!(rank(&r1).unwrap(), 1);
        let x = pinv(&r1).unwrap();
        for r in penrose_residuals(&r1, &x) {
            assert!(r < 1e-13, "{r}");
        }
    }
}
