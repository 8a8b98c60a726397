use crate::dual_matrix::{default_tol, DualMatrix};
use crate::kernels::{cholesky, cholesky_semidefinite};
use crate::matrix::Matrix;
use crate::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CholeskyOptions {
    /// Accept a positive semidefinite standard part whose zero pivots are
    /// all trailing.
    pub semidefinite: bool,
    pub tol: Option<f64>,
}

/// `A = L L^T` with `L` lower triangular.
#[derive(Clone, Debug)]
pub struct DualCholeskyResult {
    pub l: DualMatrix<f64>,
    /// Skew-symmetric free parameter, `L_i = ½ A_i L_s^{-T} − L_s P` on the
    /// positive definite block.
    pub p: Matrix<f64>,
    /// Rank of `A_s`; equals `n` unless `semidefinite` was used.
    pub rank: usize,
}

impl DualCholeskyResult {
    pub fn reconstruct(&self) -> DualMatrix<f64> {
        self.l.mul(&self.l.transpose()).expect("square factor")
    }

    pub fn residuals(&self, a: &DualMatrix<f64>) -> (f64, f64) {
        let r = self.reconstruct();
        (r.standard.sub(&a.standard).frobenius_norm(), r.infinitesimal.sub(&a.infinitesimal).frobenius_norm())
    }
}

/// Dual Cholesky factorization of a dual symmetric positive definite
/// matrix.
pub fn dcholesky(a: &DualMatrix<f64>, opts: CholeskyOptions) -> Result<DualCholeskyResult, Error> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = opts.tol.unwrap_or_else(|| default_tol(a.standard.frobenius_norm()));
    let defect = a.infinitesimal.symmetry_defect();
    if defect > tol {
        return Err(Error::NotStructured { property: "symmetric", residual: defect, tol });
    }
    if !opts.semidefinite {
        let l_s = cholesky(&a.standard)?;
        let (l_i, p) = infinitesimal_factor(&l_s, &a.infinitesimal);
        let n = l_s.rows();
        return Ok(DualCholeskyResult { l: DualMatrix { standard: l_s, infinitesimal: l_i }, p, rank: n });
    }

    let (l_s, r) = cholesky_semidefinite(&a.standard)?;
    let n = l_s.rows();
    let l11 = l_s.block(0, r, 0, r);
    let l21 = l_s.block(r, n, 0, r);
    let (x11, p11) = infinitesimal_factor(&l11, &a.infinitesimal.block(0, r, 0, r));
    // X21 L11^T = A21 − L21 X11^T, solved row by row
    let rhs = a.infinitesimal.block(r, n, 0, r).sub(&l21.mul(&x11.transpose()));
    let x21 = solve_right_lower_transpose(&l11, &rhs);
    let a22 = a.infinitesimal.block(r, n, r, n);
    let y = x21.mul(&l21.transpose());
    let residual = y.add(&y.transpose()).sub(&a22).frobenius_norm();
    let itol = opts.tol.unwrap_or_else(|| default_tol(a.infinitesimal.frobenius_norm()));
    if residual > itol {
        return Err(Error::CholeskyInconsistent { residual, tol: itol });
    }
    let mut l_i = Matrix::zeros(n, n);
    l_i.set_block(0, 0, &x11);
    l_i.set_block(r, 0, &x21);
    let mut p = Matrix::zeros(n, n);
    p.set_block(0, 0, &p11);
    Ok(DualCholeskyResult { l: DualMatrix { standard: l_s, infinitesimal: l_i }, p, rank: r })
}

/// `L_i = B − L_s P` with `B = ½ A_i L_s^{-T}` and `P` skew-symmetric,
/// chosen so that `L_i` is lower triangular: column `t` of `P` above the
/// diagonal solves `L_s(0..t, 0..t) P(0..t, t) = B(0..t, t)`.
fn infinitesimal_factor(l_s: &Matrix<f64>, a_i: &Matrix<f64>) -> (Matrix<f64>, Matrix<f64>) {
    let n = l_s.rows();
    let b = solve_right_lower_transpose(l_s, &a_i.scale(0.5));
    let mut p = Matrix::zeros(n, n);
    for t in 1..n {
        for r in 0..t {
            let mut s = b[(r, t)];
            for c in 0..r {
                s -= l_s[(r, c)] * p[(c, t)];
            }
            p[(r, t)] = s / l_s[(r, r)];
        }
        for r in 0..t {
            p[(t, r)] = -p[(r, t)];
        }
    }
    let full = b.sub(&l_s.mul(&p));
    let l_i = Matrix::from_fn(n, n, |i, j| if j <= i { full[(i, j)] } else { 0.0 });
    (l_i, p)
}

/// `X` with `X L^T = R` for lower triangular `L`.
fn solve_right_lower_transpose(l: &Matrix<f64>, r: &Matrix<f64>) -> Matrix<f64> {
    // X L^T = R  ⇔  L X^T = R^T, forward substitution per row of X
    let n = l.rows();
    let mut x = Matrix::zeros(r.rows(), n);
    for row in 0..r.rows() {
        for j in 0..n {
            let mut s = r[(row, j)];
            for c in 0..j {
                s -= x[(row, c)] * l[(j, c)];
            }
            x[(row, j)] = s / l[(j, j)];
        }
    }
    x
}
