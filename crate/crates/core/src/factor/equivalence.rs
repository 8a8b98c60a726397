use crate::dual_matrix::DualMatrix;
use crate::kernels::{rank, svd_real, Pivoting, RankSpec};
use crate::matrix::Matrix;
use crate::Error;

use super::{dlu, dmpgi, dmpgi_condition_residual, existence_tol, sylvester_general_solution, DluOptions, Fallback};

/// Four independent tests of statements that are equivalent in exact
/// arithmetic: the range condition, existence of the dual Moore-Penrose
/// inverse, of a dual rank-k decomposition and of a dual LU, all with
/// `k = rank(A_s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub k: usize,
    pub tol: f64,
    pub condition_residual: f64,
    pub condition_holds: bool,
    pub dmpgi_exists: bool,
    pub rank_k_exists: bool,
    /// `None` when no standard LU of rank `k` could be formed, with or
    /// without row pivoting.
    pub dlu_exists: Option<bool>,
}

impl EquivalenceReport {
    /// Whether every determinate leg gives the same answer.
    pub fn all_agree(&self) -> bool {
        let c = self.condition_holds;
        self.dmpgi_exists == c && self.rank_k_exists == c && self.dlu_exists.is_none_or(|d| d == c)
    }
}

pub fn equivalence_report(a: &DualMatrix<f64>, tol: Option<f64>) -> Result<EquivalenceReport, Error> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = tol.unwrap_or_else(|| existence_tol(&a.infinitesimal));
    let k = rank(&a.standard)?;
    let condition_residual = dmpgi_condition_residual(a)?;

    let dmpgi_exists = match dmpgi(a, Some(tol)) {
        Ok(_) => true,
        Err(Error::DmpgiNotExists { .. }) => false,
        Err(e) => return Err(e),
    };
    let rank_k_exists = rank_k_exists(a, k, tol)?;

    let mut dlu_exists = None;
    if k > 0 {
        for pivoting in [Pivoting::None, Pivoting::Rows] {
            let opts = DluOptions { rank: RankSpec::Fixed(k), pivoting, fallback: Fallback::Fail, tol: Some(tol) };
            match dlu(a, opts) {
                Ok(_) => dlu_exists = Some(true),
                Err(Error::DluConditionViolated { .. }) => dlu_exists = Some(false),
                Err(_) => continue,
            }
            break;
        }
    } else {
        // an empty factorization reproduces only A = 0
        dlu_exists = Some(a.infinitesimal.frobenius_norm() <= tol);
    }

    Ok(EquivalenceReport {
        k,
        tol,
        condition_residual,
        condition_holds: condition_residual <= tol,
        dmpgi_exists,
        rank_k_exists,
        dlu_exists,
    })
}

/// Looks for `A = F G` with `F: m×k`, `G: k×n` dual: `F_s G_s` from the
/// truncated SVD, then `F_s G_i + F_i G_s = A_i` as a Sylvester equation.
fn rank_k_exists(a: &DualMatrix<f64>, k: usize, tol: f64) -> Result<bool, Error> {
    let (m, n) = a.shape();
    let svd = svd_real(&a.standard)?;
    let f_s = Matrix::from_fn(m, k, |i, j| svd.u[(i, j)] * svd.sigma[j]);
    let g_s = Matrix::from_fn(k, n, |i, j| svd.v[(j, i)]);
    match sylvester_general_solution(&f_s, &g_s.neg(), &a.infinitesimal, None, None, Some(tol)) {
        Ok(_) => Ok(true),
        Err(Error::SylvesterNoSolution { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
