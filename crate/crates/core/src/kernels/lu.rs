//! Rank-k LU factorization with trapezoidal factors.

use alloc::vec::Vec;

use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pivoting {
    #[default]
    None,
    Rows,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankSpec {
    /// Stop when the remaining Schur complement falls below the pivot
    /// tolerance.
    #[default]
    Auto,
    Fixed(usize),
}

/// `(P A) = L U` with `L: m×k` unit lower trapezoidal and `U: k×n` upper
/// trapezoidal. Entries outside the trapezoids are never written.
#[derive(Clone, Debug)]
pub struct RankKLU<T> {
    pub l: Matrix<T>,
    pub u: Matrix<T>,
    /// Row `r` of `P A` is row `perm[r]` of `A`; `None` without pivoting.
    pub perm: Option<Vec<usize>>,
    pub k: usize,
}

/// `max(m, n) · ε · max|A_ij|`.
pub fn pivot_tolerance<T: Scalar>(a: &Matrix<T>) -> f64 {
    (a.rows().max(a.cols()) as f64) * f64::EPSILON * a.max_abs()
}

/// Tolerance on the Frobenius norm of the Schur complement left over
/// after `k` elimination steps with a fixed rank.
fn remainder_tolerance<T: Scalar>(a: &Matrix<T>) -> f64 {
    1e-10 * a.frobenius_norm().max(1.0)
}

pub fn lu_rank_k<T: Scalar>(a: &Matrix<T>, rank: RankSpec, pivoting: Pivoting) -> Result<RankKLU<T>, Error> {
    if T::FIELD == Field::Quaternion {
        return Err(Error::Unsupported { op: "rank-k LU", field: Field::Quaternion });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = a.shape();
    let kmax = m.min(n);
    if let RankSpec::Fixed(k) = rank {
        if k > kmax {
            return Err(Error::InvalidRank { requested: k, max: kmax });
        }
    }
    let tau = pivot_tolerance(a);
    let mut s = a.clone();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut k = 0;
    loop {
        let remainder = schur_max(&s, k);
        let done = match rank {
            RankSpec::Auto => k == kmax || remainder <= tau,
            RankSpec::Fixed(kk) => k == kk,
        };
        if done {
            break;
        }
        if pivoting == Pivoting::Rows {
            let mut best = k;
            for r in k + 1..m {
                if s[(r, k)].abs() > s[(best, k)].abs() {
                    best = r;
                }
            }
            if best != k {
                perm.swap(k, best);
                for j in 0..n {
                    let t = s[(k, j)];
                    s[(k, j)] = s[(best, j)];
                    s[(best, j)] = t;
                }
            }
        }
        let piv = s[(k, k)];
        if piv.abs() <= tau {
            return Err(Error::ZeroPivot { index: k });
        }
        let pinv = piv.inv();
        for r in k + 1..m {
            let f = s[(r, k)] * pinv;
            s[(r, k)] = f;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let skj = s[(k, j)];
                s[(r, j)] -= f * skj;
            }
        }
        k += 1;
    }
    if let RankSpec::Fixed(_) = rank {
        let rem = schur_frobenius(&s, k);
        if rem > remainder_tolerance(a) {
            return Err(Error::RankExceeded { k, remainder: rem });
        }
    }
    let mut l = Matrix::zeros(m, k);
    let mut u = Matrix::zeros(k, n);
    for i in 0..m {
        for j in 0..k.min(i + 1) {
            l[(i, j)] = if i == j { T::one() } else { s[(i, j)] };
        }
    }
    for i in 0..k {
        for j in i..n {
            u[(i, j)] = s[(i, j)];
        }
    }
    let perm = match pivoting {
        Pivoting::None => None,
        Pivoting::Rows => Some(perm),
    };
    Ok(RankKLU { l, u, perm, k })
}

fn schur_max<T: Scalar>(s: &Matrix<T>, k: usize) -> f64 {
    let mut mx = 0.0_f64;
    for i in k..s.rows() {
        for j in k..s.cols() {
            mx = mx.max(s[(i, j)].abs());
        }
    }
    mx
}

fn schur_frobenius<T: Scalar>(s: &Matrix<T>, k: usize) -> f64 {
    let mut acc = 0.0;
    for i in k..s.rows() {
        for j in k..s.cols() {
            acc += s[(i, j)].norm_sqr();
        }
    }
    crate::math::sqrt(acc)
}
