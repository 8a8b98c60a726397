use alloc::vec::Vec;

use crate::dual_matrix::DualMatrix;
use crate::kernels::{lu_rank_k, pinv, pivot_tolerance, rank, Pivoting, RankSpec};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::Error;

use super::{complement, existence_tol};

/// What to do when the infinitesimal part is not reachable from the
/// standard factors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fallback {
    /// Replace `A_i` by its best approximation that satisfies the
    /// existence condition and continue.
    #[default]
    Project,
    Fail,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DluOptions {
    pub rank: RankSpec,
    pub pivoting: Pivoting,
    pub fallback: Fallback,
    /// Existence tolerance; defaults to `1e-10 · max(1, ‖A_i‖_F)`.
    pub tol: Option<f64>,
}

/// `(perm A) = L U` with `L: m×k` lower and `U: k×n` upper trapezoidal
/// dual matrices.
#[derive(Clone, Debug)]
pub struct DualLUResult<T> {
    pub l: DualMatrix<T>,
    pub u: DualMatrix<T>,
    pub perm: Option<Vec<usize>>,
    pub k: usize,
    /// The free `k×k` parameter; its diagonal is zero.
    pub p: Matrix<T>,
    /// Existence residual of the (permuted) input before any projection.
    pub condition_residual: f64,
    pub projection_applied: bool,
    /// Frobenius norm of the component removed from `A_i`.
    pub projection_magnitude: f64,
    /// The dual matrix actually factored: row-permuted, with `A_i`
    /// projected when `projection_applied`.
    pub effective: DualMatrix<T>,
}

impl<T: Scalar> DualLUResult<T> {
    pub fn reconstruct(&self) -> DualMatrix<T> {
        self.l.mul(&self.u).expect("conformal factors")
    }

    /// Reconstruction defects against [`Self::effective`].
    pub fn residuals(&self) -> (f64, f64) {
        let r = self.reconstruct();
        (
            r.standard.sub(&self.effective.standard).frobenius_norm(),
            r.infinitesimal.sub(&self.effective.infinitesimal).frobenius_norm(),
        )
    }
}

/// `‖(I − L_s L_s†) A_i (I − U_s† U_s)‖_F`, zero iff the dual LU with
/// these standard factors exists.
pub fn dlu_condition_residual<T: Scalar>(a_i: &Matrix<T>, l_s: &Matrix<T>, u_s: &Matrix<T>) -> Result<f64, Error> {
    let (m, k) = l_s.shape();
    let n = u_s.cols();
    if u_s.rows() != k || a_i.shape() != (m, n) {
        return Err(Error::ShapeMismatch { op: "dlu condition", left: (m, n), right: a_i.shape() });
    }
    Ok(obstruction(a_i, l_s, u_s)?.frobenius_norm())
}

fn obstruction<T: Scalar>(a_i: &Matrix<T>, l_s: &Matrix<T>, u_s: &Matrix<T>) -> Result<Matrix<T>, Error> {
    let k = l_s.cols();
    if rank(l_s)? != k {
        return Err(Error::RankDeficient { what: "L_s" });
    }
    if rank(u_s)? != k {
        return Err(Error::RankDeficient { what: "U_s" });
    }
    let lp = pinv(l_s)?;
    let up = pinv(u_s)?;
    Ok(complement(l_s, &lp).mul(a_i).mul(&complement(&up, u_s)))
}

/// Dual LU factorization over ℝ or ℂ.
pub fn dlu<T: Scalar>(a: &DualMatrix<T>, opts: DluOptions) -> Result<DualLUResult<T>, Error> {
    let f = lu_rank_k(&a.standard, opts.rank, opts.pivoting)?;
    let (l_s, u_s, k) = (f.l, f.u, f.k);
    let (m, n) = a.shape();
    let (a_s, mut a_i) = match &f.perm {
        Some(p) => (a.standard.permute_rows(p), a.infinitesimal.permute_rows(p)),
        None => (a.standard.clone(), a.infinitesimal.clone()),
    };

    let tol = opts.tol.unwrap_or_else(|| existence_tol(&a_i));
    let obs = obstruction(&a_i, &l_s, &u_s)?;
    let condition_residual = obs.frobenius_norm();
    let mut projection_applied = false;
    let mut projection_magnitude = 0.0;
    if condition_residual > tol {
        match opts.fallback {
            Fallback::Fail => return Err(Error::DluConditionViolated { residual: condition_residual, tol }),
            Fallback::Project => {
                a_i = a_i.sub(&obs);
                projection_applied = true;
                projection_magnitude = condition_residual;
            }
        }
    }

    let lp = pinv(&l_s)?;
    let up = pinv(&u_s)?;
    let b = lp.mul(&a_i);
    let c = complement(&l_s, &lp).mul(&a_i).mul(&up);
    let p = resolve_p(&b, &c, &l_s, &u_s)?;
    let li_full = c.add(&l_s.mul(&p));
    let ui_full = b.sub(&p.mul(&u_s));
    let mut l_i = Matrix::zeros(m, k);
    let mut u_i = Matrix::zeros(k, n);
    for i in 0..m {
        for j in 0..k.min(i + 1) {
            l_i[(i, j)] = li_full[(i, j)];
        }
    }
    for i in 0..k {
        for j in i..n {
            u_i[(i, j)] = ui_full[(i, j)];
        }
    }
    Ok(DualLUResult {
        l: DualMatrix { standard: l_s, infinitesimal: l_i },
        u: DualMatrix { standard: u_s, infinitesimal: u_i },
        perm: f.perm,
        k,
        p,
        condition_residual,
        projection_applied,
        projection_magnitude,
        effective: DualMatrix { standard: a_s, infinitesimal: a_i },
    })
}

/// Strict lower triangle of `P` from `B = L_s† A_i` (so that `B − P U_s` is
/// upper trapezoidal), strict upper triangle from
/// `C = (I − L_s L_s†) A_i U_s†` (so that `C + L_s P` is lower trapezoidal),
/// diagonal zero.
fn resolve_p<T: Scalar>(b: &Matrix<T>, c: &Matrix<T>, l_s: &Matrix<T>, u_s: &Matrix<T>) -> Result<Matrix<T>, Error> {
    let k = l_s.cols();
    let utol = pivot_tolerance(u_s);
    let ltol = pivot_tolerance(l_s);
    let mut p = Matrix::zeros(k, k);
    for i in 0..k {
        let d = u_s[(i, i)];
        if d.abs() <= utol {
            return Err(Error::ZeroPivot { index: i });
        }
        let dinv = d.inv();
        for r in i + 1..k {
            let mut s = b[(r, i)];
            for l in 0..i {
                s -= p[(r, l)] * u_s[(l, i)];
            }
            p[(r, i)] = s * dinv;
        }
    }
    for i in 0..k {
        let d = l_s[(i, i)];
        if d.abs() <= ltol {
            return Err(Error::ZeroPivot { index: i });
        }
        let dinv = d.inv();
        for col in i + 1..k {
            let mut s = -c[(i, col)];
            for l in 0..i {
                s -= l_s[(i, l)] * p[(l, col)];
            }
            p[(i, col)] = dinv * s;
        }
    }
    Ok(p)
}
