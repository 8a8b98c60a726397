//! Dual matrices `A_s + ε A_i` and their structural operations.

use crate::dual::DualScalar;
use crate::kernels::cholesky;
use crate::math::sqrt;
use crate::matrix::Matrix;
use crate::scalar::{Eta, Field, Scalar};
use crate::Error;

/// Relative factor of the default structural tolerance.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// `1e-10 · max(1, scale)`.
#[inline]
pub fn default_tol(scale: f64) -> f64 {
    DEFAULT_REL_TOL * scale.max(1.0)
}

/// A dual matrix: a standard and an infinitesimal part of identical shape.
#[derive(Clone, Debug, PartialEq)]
pub struct DualMatrix<T> {
    pub standard: Matrix<T>,
    pub infinitesimal: Matrix<T>,
}

impl<T: Scalar> DualMatrix<T> {
    pub fn new(standard: Matrix<T>, infinitesimal: Matrix<T>) -> Result<Self, Error> {
        if standard.shape() != infinitesimal.shape() {
            return Err(Error::ShapeMismatch {
                op: "dual matrix parts",
                left: standard.shape(),
                right: infinitesimal.shape(),
            });
        }
        Ok(Self { standard, infinitesimal })
    }

    pub fn from_standard(standard: Matrix<T>) -> Self {
        let (r, c) = standard.shape();
        Self { standard, infinitesimal: Matrix::zeros(r, c) }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { standard: Matrix::zeros(rows, cols), infinitesimal: Matrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_standard(Matrix::identity(n))
    }

    #[inline]
    pub fn field(&self) -> Field {
        T::FIELD
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.standard.rows()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.standard.cols()
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        self.standard.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> DualScalar<T> {
        DualScalar::new(self.standard[(i, j)], self.infinitesimal[(i, j)])
    }

    pub fn is_finite(&self) -> bool {
        self.standard.is_finite() && self.infinitesimal.is_finite()
    }

    fn map_parts(&self, f: impl Fn(&Matrix<T>) -> Matrix<T>) -> Self {
        Self { standard: f(&self.standard), infinitesimal: f(&self.infinitesimal) }
    }

    pub fn transpose(&self) -> Self {
        self.map_parts(Matrix::transpose)
    }

    pub fn adjoint(&self) -> Self {
        self.map_parts(Matrix::adjoint)
    }

    /// η-conjugate transpose applied to both parts.
    pub fn eta_adjoint(&self, eta: Eta) -> Self {
        self.map_parts(|m| m.eta_adjoint(eta))
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_shape("add", other)?;
        Ok(Self {
            standard: self.standard.add(&other.standard),
            infinitesimal: self.infinitesimal.add(&other.infinitesimal),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_shape("sub", other)?;
        Ok(Self {
            standard: self.standard.sub(&other.standard),
            infinitesimal: self.infinitesimal.sub(&other.infinitesimal),
        })
    }

    /// Dual product `(A_s B_s, A_i B_s + A_s B_i)`.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch { op: "dual mul", left: self.shape(), right: other.shape() });
        }
        let standard = self.standard.mul(&other.standard);
        let infinitesimal = self.infinitesimal.mul(&other.standard).add(&self.standard.mul(&other.infinitesimal));
        Ok(Self { standard, infinitesimal })
    }

    fn check_same_shape(&self, op: &'static str, other: &Self) -> Result<(), Error> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch { op, left: self.shape(), right: other.shape() });
        }
        Ok(())
    }

    /// The `2m × 2n` block matrix `[[A_s, A_i], [0, A_s]]`.
    pub fn block_representation(&self) -> Matrix<T> {
        let (m, n) = self.shape();
        let mut out = Matrix::zeros(2 * m, 2 * n);
        out.set_block(0, 0, &self.standard);
        out.set_block(0, n, &self.infinitesimal);
        out.set_block(m, n, &self.standard);
        out
    }

    /// Inverse of [`block_representation`](Self::block_representation);
    /// reads the top row of blocks.
    pub fn from_block_representation(b: &Matrix<T>) -> Result<Self, Error> {
        if !b.rows().is_multiple_of(2) || !b.cols().is_multiple_of(2) {
            return Err(Error::ShapeMismatch { op: "block representation", left: b.shape(), right: (0, 0) });
        }
        let (m, n) = (b.rows() / 2, b.cols() / 2);
        Ok(Self { standard: b.block(0, m, 0, n), infinitesimal: b.block(0, m, n, 2 * n) })
    }

    /// Frobenius norms of both parts combined, `sqrt(‖A_s‖² + ‖A_i‖²)`.
    pub fn frobenius_norm(&self) -> f64 {
        let s = self.standard.frobenius_norm();
        let i = self.infinitesimal.frobenius_norm();
        sqrt(s * s + i * i)
    }

    /// Dual unitarity check against `A A^H = I` in dual arithmetic.
    pub fn is_dual_unitary(&self, tol: Option<f64>) -> Result<Check, Error> {
        if !self.standard.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        let tol = tol.unwrap_or_else(|| default_tol(self.standard.frobenius_norm()));
        Ok(Check::new(unitarity_defect(self), tol))
    }

    /// Full structural report. `eta` selects the η for the η-Hermitian
    /// entry; it is skipped when η does not act on this field.
    pub fn structure_report(&self, eta: Option<Eta>, tol: Option<f64>) -> StructureReport {
        let tol = tol.unwrap_or_else(|| default_tol(self.standard.frobenius_norm()));
        let square = self.standard.is_square();
        let sym = |f: &dyn Fn(&Matrix<T>) -> f64| {
            if square {
                let s = f(&self.standard);
                let i = f(&self.infinitesimal);
                Some(Check::new(sqrt(s * s + i * i), tol))
            } else {
                None
            }
        };
        let is_symmetric = sym(&|m| m.symmetry_defect());
        let is_hermitian = sym(&|m| m.hermitian_defect());
        let is_eta_hermitian = match eta {
            Some(e) if e.preserves::<T>() => sym(&|m| m.eta_hermitian_defect(e)),
            _ => None,
        };
        let is_dual_unitary = if square { Some(Check::new(unitarity_defect(self), tol)) } else { None };
        let is_spd = if square && T::FIELD == Field::Real {
            let re = DualMatrix {
                standard: self.standard.map(|x| x.re()),
                infinitesimal: self.infinitesimal.map(|x| x.re()),
            };
            Some(spd_check(&re, tol))
        } else {
            None
        };
        StructureReport { tol, is_symmetric, is_hermitian, is_eta_hermitian, is_dual_unitary, is_spd }
    }
}

impl DualMatrix<f64> {
    /// Symmetric positive definiteness of a real dual matrix: both parts
    /// symmetric and the standard part positive definite.
    pub fn is_spd(&self, tol: Option<f64>) -> Result<Check, Error> {
        if !self.standard.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        let tol = tol.unwrap_or_else(|| default_tol(self.standard.frobenius_norm()));
        Ok(spd_check(self, tol))
    }
}

fn spd_check(a: &DualMatrix<f64>, tol: f64) -> Check {
    let ds = a.standard.symmetry_defect();
    let di = a.infinitesimal.symmetry_defect();
    let residual = ds.max(di);
    let pd = residual <= tol && cholesky(&a.standard).is_ok();
    Check { holds: pd, residual }
}

/// `sqrt(‖A_s A_s^H − I‖² + ‖A_s A_i^H + A_i A_s^H‖²)`.
fn unitarity_defect<T: Scalar>(a: &DualMatrix<T>) -> f64 {
    let n = a.rows();
    let sh = a.standard.adjoint();
    let d0 = a.standard.mul(&sh).sub(&Matrix::identity(n)).frobenius_norm();
    let d1 = a.standard.mul(&a.infinitesimal.adjoint()).add(&a.infinitesimal.mul(&sh)).frobenius_norm();
    sqrt(d0 * d0 + d1 * d1)
}

/// One structural predicate: `holds` iff `residual ≤ tol`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

impl Check {
    pub fn new(residual: f64, tol: f64) -> Self {
        Self { holds: residual <= tol, residual }
    }
}

/// Structural predicates of a dual matrix. Entries that do not apply
/// (non-square input, η not acting on the field, SPD over ℂ/ℍ) are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub tol: f64,
    pub is_symmetric: Option<Check>,
    pub is_hermitian: Option<Check>,
    pub is_eta_hermitian: Option<Check>,
    pub is_dual_unitary: Option<Check>,
    pub is_spd: Option<Check>,
}

/// Quasi-norm distance
/// `d*(A,B) = ‖ΔA_s‖ + ε ‖ΔA_i‖² / (2‖ΔA_s‖)` when `ΔA_s ≠ 0`,
/// otherwise `0 + ε ‖ΔA_i‖` (all norms Frobenius).
pub fn quasi_norm_distance<T: Scalar>(a: &DualMatrix<T>, b: &DualMatrix<T>) -> Result<DualScalar<f64>, Error> {
    let d = a.sub(b)?;
    let s = d.standard.frobenius_norm();
    let i = d.infinitesimal.frobenius_norm();
    if s > 0.0 {
        Ok(DualScalar::new(s, i * i / (2.0 * s)))
    } else {
        Ok(DualScalar::new(0.0, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quaternion;
    use num_complex::Complex64;

    fn rm(r: usize, c: usize, v: &[f64]) -> Matrix<f64> {
        Matrix::from_row_slice(r, c, v)
    }

    #[test]
    fn nilpotent_product() {
        let n = rm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let a = DualMatrix::new(Matrix::identity(2), n.clone()).unwrap();
        let b = DualMatrix::new(Matrix::identity(2), n.neg()).unwrap();
        assert_eq!(a.mul(&b).unwrap(), DualMatrix::identity(2));
    }

    #[test]
    fn block_of_pure_infinitesimal_squares_to_zero() {
        let n = rm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let a = DualMatrix::new(Matrix::zeros(2, 2), n).unwrap();
        let b = a.block_representation();
        assert_eq!(b.mul(&b), Matrix::zeros(4, 4));
        assert_eq!(DualMatrix::from_block_representation(&b).unwrap(), a);
    }

    #[test]
    fn mismatched_parts_rejected() {
        assert!(DualMatrix::new(Matrix::<f64>::zeros(2, 2), Matrix::zeros(2, 3)).is_err());
        let a = DualMatrix::<f64>::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(a.is_dual_unitary(None), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn eta_adjoint_real_and_complex() {
        let a = DualMatrix::new(rm(2, 2, &[1.0, 2.0, 3.0, 4.0]), rm(2, 2, &[5.0, 6.0, 7.0, 8.0])).unwrap();
        let q =
            DualMatrix::new(a.standard.map(Quaternion::from_real), a.infinitesimal.map(Quaternion::from_real)).unwrap();
        let eta = Eta::new(Quaternion::new(0.0, 0.48, 0.6, 0.64)).unwrap();
        let t = q.eta_adjoint(eta);
        for i in 0..2 {
            for j in 0..2 {
                assert!((t.standard[(i, j)] - Quaternion::from_real(a.standard[(j, i)])).norm() < 1e-15);
                assert!((t.infinitesimal[(i, j)] - Quaternion::from_real(a.infinitesimal[(j, i)])).norm() < 1e-15);
            }
        }
        let c = DualMatrix::new(
            Matrix::from_row_slice(1, 2, &[Complex64::new(1.0, 1.0), Complex64::new(2.0, -1.0)]),
            Matrix::from_row_slice(1, 2, &[Complex64::new(0.0, 3.0), Complex64::new(1.0, 0.0)]),
        )
        .unwrap();
        assert_eq!(c.eta_adjoint(Eta::J), c.transpose());
        assert_eq!(c.eta_adjoint(Eta::I), c.adjoint());
    }

    #[test]
    fn quasi_norm_branches() {
        let z = DualMatrix::<f64>::zeros(1, 2);
        assert_eq!(quasi_norm_distance(&z, &z).unwrap(), DualScalar::new(0.0, 0.0));
        let a = DualMatrix::new(rm(1, 2, &[0.0, 0.0]), rm(1, 2, &[3.0, 0.0])).unwrap();
        assert_eq!(quasi_norm_distance(&a, &z).unwrap(), DualScalar::new(0.0, 3.0));
        let b = DualMatrix::new(rm(1, 2, &[2.0, 0.0]), rm(1, 2, &[0.0, 4.0])).unwrap();
        assert_eq!(quasi_norm_distance(&b, &z).unwrap(), DualScalar::new(2.0, 4.0));
        assert_eq!(quasi_norm_distance(&z, &b).unwrap(), DualScalar::new(2.0, 4.0));
    }

    #[test]
    fn unitary_checks() {
        assert!(DualMatrix::<f64>::identity(3).is_dual_unitary(None).unwrap().holds);
        // orthogonal standard part, infinitesimal part S·A_s with S skew
        let (c, s) = (0.6, 0.8);
        let q = rm(2, 2, &[c, -s, s, c]);
        let skew = rm(2, 2, &[0.0, 1.5, -1.5, 0.0]);
        let u = DualMatrix::new(q.clone(), skew.mul(&q)).unwrap();
        assert!(u.is_dual_unitary(Some(1e-14)).unwrap().holds);
        let bad = DualMatrix::new(q.clone(), q).unwrap();
        assert!(!bad.is_dual_unitary(Some(1e-10)).unwrap().holds);
    }

    #[test]
    fn structure_report_spd() {
        let a = DualMatrix::new(rm(2, 2, &[2.0, 1.0, 1.0, 2.0]), rm(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let r = a.structure_report(Some(Eta::J), None);
        assert!(r.is_symmetric.unwrap().holds);
        assert!(r.is_hermitian.unwrap().holds);
        assert!(r.is_eta_hermitian.unwrap().holds);
        assert!(r.is_spd.unwrap().holds);
        assert!(!r.is_dual_unitary.unwrap().holds);
        let indefinite = DualMatrix::from_standard(rm(2, 2, &[-1.0, 0.0, 0.0, 1.0]));
        assert!(!indefinite.is_spd(None).unwrap().holds);
        let asym = DualMatrix::new(Matrix::identity(2), rm(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(!asym.is_spd(None).unwrap().holds);
    }
}
