//! Symmetric and Hermitian eigendecompositions by cyclic Jacobi rotations.

use alloc::vec::Vec;

use super::embed::{left_embedding, select_orthonormal, vector_from_real};
use crate::dual_matrix::default_tol;
use crate::math::{hypot, sqrt};
use crate::matrix::{inner, Matrix};
use crate::scalar::{Field, Scalar};
use crate::Error;

const MAX_SWEEPS: usize = 64;

/// `A = Q diag(values) Q^H` with `values` sorted descending.
#[derive(Clone, Debug)]
pub struct Eigen<T> {
    pub vectors: Matrix<T>,
    pub values: Vec<f64>,
}

/// Eigendecomposition of a real symmetric matrix.
pub fn eig_symmetric(a: &Matrix<f64>) -> Result<Eigen<f64>, Error> {
    check_square_finite(a)?;
    let tol = default_tol(a.frobenius_norm());
    let defect = a.symmetry_defect();
    if defect > tol {
        return Err(Error::NotStructured { property: "symmetric", residual: defect, tol });
    }
    let sym = Matrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    jacobi(sym)
}

fn check_square_finite<T: Scalar>(a: &Matrix<T>) -> Result<(), Error> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn off_diagonal(a: &Matrix<f64>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sqrt(s)
}

/// Cyclic Jacobi on an exactly symmetric matrix.
pub(crate) fn jacobi(mut a: Matrix<f64>) -> Result<Eigen<f64>, Error> {
    let n = a.rows();
    let mut v = Matrix::<f64>::identity(n);
    let scale = a.frobenius_norm();
    let target = 1e-2 * f64::EPSILON * scale;
    let mut converged = scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal(&a);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.is_infinite() { 0.0 } else { theta.signum() / (theta.abs() + hypot(theta, 1.0)) };
                if t == 0.0 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / hypot(t, 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal(&a) > 1e3 * f64::EPSILON * scale {
        return Err(Error::NoConvergence { routine: "jacobi eigenvalue" });
    }
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their original order
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Eigen { vectors, values })
}

/// Eigendecomposition of a Hermitian matrix over ℝ, ℂ or ℍ.
///
/// For ℂ and ℍ the left-multiplication embedding is diagonalized and one
/// eigenvector per field line is kept, so every eigenvalue of the real
/// embedding (which has multiplicity `REAL_DIM`) appears once.
pub fn eig_hermitian<T: Scalar>(a: &Matrix<T>) -> Result<Eigen<T>, Error> {
    check_square_finite(a)?;
    let tol = default_tol(a.frobenius_norm());
    let defect = a.hermitian_defect();
    if defect > tol {
        return Err(Error::NotStructured { property: "Hermitian", residual: defect, tol });
    }
    if T::FIELD == Field::Real {
        let e = eig_symmetric(&a.map(|x| x.re()))?;
        return Ok(Eigen { vectors: e.vectors.map(T::from_real), values: e.values });
    }
    let n = a.rows();
    let herm = Matrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()).scale(0.5));
    let m = left_embedding(&herm);
    let e = jacobi(Matrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))?;
    let candidates = (0..m.cols()).map(|c| vector_from_real::<T>(&e.vectors.column(c)));
    let picked = select_orthonormal(candidates, n);
    if picked.len() != n {
        return Err(Error::NoConvergence { routine: "hermitian eigenvector selection" });
    }
    let mut pairs: Vec<(f64, Vec<T>)> = picked
        .into_iter()
        .map(|u| {
            let au = herm.mul_vec(&u);
            (inner(&u, &au).re(), u)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut vectors = Matrix::zeros(n, n);
    for (j, (_, u)) in pairs.iter().enumerate() {
        vectors.set_column(j, u);
    }
    Ok(Eigen { vectors, values: pairs.into_iter().map(|p| p.0).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quaternion;
    use num_complex::Complex64;

    fn reconstruct<T: Scalar>(e: &Eigen<T>) -> Matrix<T> {
        let d = Matrix::from_diagonal(&e.values.iter().map(|&x| T::from_real(x)).collect::<Vec<_>>());
        e.vectors.mul(&d).mul(&e.vectors.adjoint())
    }

    #[test]
    fn identity() {
        let e = eig_symmetric(&Matrix::identity(3)).unwrap();
        assert_eq!(e.values, alloc::vec![1.0, 1.0, 1.0]);
        assert_eq!(e.vectors, Matrix::identity(3));
    }

    #[test]
    fn hankel_spectrum() {
        let h = Matrix::from_fn(5, 5, |i, j| if (i + j) % 2 == 0 { 1.0 } else { 0.0 });
        let e = eig_symmetric(&h).unwrap();
        let expect = [3.0, 2.0, 0.0, 0.0, 0.0];
        for (v, x) in e.values.iter().zip(expect) {
            assert!((v - x).abs() < 1e-14, "{:?}", e.values);
        }
        assert!(reconstruct(&e).sub(&h).frobenius_norm() < 1e-13);
    }

    #[test]
    fn forward_constructed_spectrum() {
        // rotation in the (0,2) plane composed with one in the (1,3) plane
        let (c1, s1, c2, s2) = (0.6, 0.8, 0.28, 0.96);
        let q =
            Matrix::from_row_slice(4, 4, &[c1, 0.0, -s1, 0.0, 0.0, c2, 0.0, -s2, s1, 0.0, c1, 0.0, 0.0, s2, 0.0, c2]);
        let a = q.mul(&Matrix::from_diagonal(&[2.0, -1.0, 5.0, 2.0])).mul(&q.transpose());
        let e = eig_symmetric(&a).unwrap();
        let expect = [5.0, 2.0, 2.0, -1.0];
        for (v, x) in e.values.iter().zip(expect) {
            assert!((v - x).abs() < 1e-13);
        }
        assert!(reconstruct(&e).sub(&a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eig_symmetric(&a), Err(Error::NotStructured { .. })));
    }

    #[test]
    fn complex_hermitian() {
        let a = Matrix::from_row_slice(
            2,
            2,
            &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0)],
        );
        let e = eig_hermitian(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(reconstruct(&e).sub(&a).frobenius_norm() < 1e-13);
        let u = &e.vectors;
        assert!(u.adjoint().mul(u).sub(&Matrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn quaternion_hermitian() {
        let q = |w, x, y, z| Quaternion::new(w, x, y, z);
        let a = Matrix::from_row_slice(
            3,
            3,
            &[
                q(1.0, 0.0, 0.0, 0.0),
                q(0.5, 1.0, -0.5, 2.0),
                q(0.0, 0.0, 1.0, 0.0),
                q(0.5, -1.0, 0.5, -2.0),
                q(-2.0, 0.0, 0.0, 0.0),
                q(1.0, 1.0, 1.0, 1.0),
                q(0.0, 0.0, -1.0, 0.0),
                q(1.0, -1.0, -1.0, -1.0),
                q(0.5, 0.0, 0.0, 0.0),
            ],
        );
        let e = eig_hermitian(&a).unwrap();
        assert!(reconstruct(&e).sub(&a).frobenius_norm() < 1e-12);
        let u = &e.vectors;
        assert!(u.adjoint().mul(u).sub(&Matrix::identity(3)).frobenius_norm() < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
