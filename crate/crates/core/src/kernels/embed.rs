//! Real embeddings of matrices over ℂ and ℍ.
//!
//! A matrix over a field of real dimension `d` acts ℝ-linearly on
//! `ℝ^{d·n}`; the kernels build that real matrix, solve the real problem,
//! and map the answer back.

use alloc::vec::Vec;

use crate::matrix::{inner, vec_norm, Matrix};
use crate::scalar::{Eta, Scalar};

fn basis<T: Scalar>(c: usize) -> T {
    let mut parts = [0.0; 4];
    parts[c] = 1.0;
    T::from_components(&parts[..T::REAL_DIM])
}

/// Real matrix of the ℝ-linear map `u ↦ A · s(u)` where `s` is applied
/// entrywise. With `s = id` this is the left-multiplication embedding
/// `χ(A)`, which satisfies `χ(AB) = χ(A)χ(B)` and `χ(A^H) = χ(A)^T`.
pub(crate) fn real_matrix_of<T: Scalar>(a: &Matrix<T>, s: impl Fn(T) -> T) -> Matrix<f64> {
    let d = T::REAL_DIM;
    let (m, n) = a.shape();
    let images: Vec<T> = (0..d).map(|c| s(basis::<T>(c))).collect();
    let mut out = Matrix::zeros(d * m, d * n);
    for i in 0..m {
        for j in 0..n {
            let x = a[(i, j)];
            for (c, &e) in images.iter().enumerate() {
                let y = x * e;
                for r in 0..d {
                    out[(i * d + r, j * d + c)] = y.component(r);
                }
            }
        }
    }
    out
}

pub(crate) fn left_embedding<T: Scalar>(a: &Matrix<T>) -> Matrix<f64> {
    real_matrix_of(a, |x| x)
}

/// Inverse of [`left_embedding`]: reads each block's first column.
pub(crate) fn from_left_embedding<T: Scalar>(m: &Matrix<f64>) -> Matrix<T> {
    let d = T::REAL_DIM;
    let mut parts = [0.0; 4];
    Matrix::from_fn(m.rows() / d, m.cols() / d, |i, j| {
        for (r, p) in parts.iter_mut().enumerate().take(d) {
            *p = m[(i * d + r, j * d)];
        }
        T::from_components(&parts[..d])
    })
}

pub(crate) fn vector_from_real<T: Scalar>(v: &[f64]) -> Vec<T> {
    v.chunks(T::REAL_DIM).map(T::from_components).collect()
}

/// Picks up to `n` orthonormal vectors (over `T`) from `candidates`, in
/// order, by Gram-Schmidt with right-multiplied coefficients. A candidate
/// is kept when its residual after projection exceeds one half.
pub(crate) fn select_orthonormal<T: Scalar>(candidates: impl Iterator<Item = Vec<T>>, n: usize) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(n);
    for mut u in candidates {
        if basis.len() == n {
            break;
        }
        let norm0 = vec_norm(&u);
        if norm0 == 0.0 {
            continue;
        }
        for x in u.iter_mut() {
            *x = x.scale(1.0 / norm0);
        }
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &u);
                for (x, &y) in u.iter_mut().zip(b) {
                    *x -= y * c;
                }
            }
        }
        let r = vec_norm(&u);
        if r > 0.5 {
            for x in u.iter_mut() {
                *x = x.scale(1.0 / r);
            }
            basis.push(u);
        }
    }
    basis
}

/// Real matrix of the Takagi operator `u ↦ A (η̄ u η)`.
pub(crate) fn takagi_operator<T: Scalar>(a: &Matrix<T>, eta: Eta) -> Matrix<f64> {
    real_matrix_of(a, move |x| eta.sandwich(x))
}
