//! Dual Autonne-Takagi factorizations `A = V Σ V^*`.
//!
//! `V = V_s + ε V_i` is dual unitary and `Σ = Σ_s + ε Σ_i` is real diagonal.
//! The transpose `*` is the plain transpose over ℝ and ℂ and the
//! η-conjugate transpose over ℍ; all three are `X ↦ X^{ηH}` for a suitable
//! η, so one generic routine serves every field.
//!
//! Write `V_s = W U` where `A_s = W D W^*` is a classical factorization and
//! `U` is block diagonal over the clusters of equal values in `D`, and
//! `V_i = V_s K` with `K` skew-Hermitian. With
//! `B̃ = V_s^H A_i (V_s^*)^H` the infinitesimal equation reads
//!
//! ```text
//! B̃ = K Σ_s + Σ_i + Σ_s K^*.
//! ```
//!
//! Entrywise, splitting `x` into the part commuting with η and the part
//! anticommuting with it, the commuting part of `B̃_ab` equals
//! `(λ_b − λ_a)` times that of `K_ab` and the anticommuting part equals
//! `(λ_a + λ_b)` times that of `K_ab`. Across clusters this determines `K`.
//! Inside a cluster with `λ > 0` the commuting part of `B̃_tt` has to be
//! real diagonal, which is what `U_t` achieves; inside the zero cluster all
//! of `B̃_tt` has to be real diagonal, which a classical Takagi factorization
//! of `B_tt` achieves.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dual_matrix::{default_tol, DualMatrix};
use crate::kernels::{check_takagi_field, eig_hermitian, eig_symmetric, takagi};
use crate::matrix::Matrix;
use crate::quaternion::Quaternion;
use crate::scalar::{Eta, Field, Scalar};
use crate::Error;

/// A run of equal standard values occupying positions
/// `start..start + len` of `Σ_s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub value: f64,
    pub start: usize,
    pub len: usize,
}

impl Cluster {
    pub fn range(&self) -> core::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Greedy grouping of descending values: a value joins the current
/// cluster iff it lies within `tol` of the cluster's running mean. The
/// cluster value is the mean of its members.
pub fn cluster_eigenvalues(values: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    for (i, &v) in values.iter().enumerate() {
        if let Some(c) = out.last_mut() {
            if (v - c.value).abs() <= tol {
                sum += v;
                c.len += 1;
                c.value = sum / c.len as f64;
                continue;
            }
        }
        sum = v;
        out.push(Cluster { value: v, start: i, len: 1 });
    }
    out
}

/// Default clustering tolerance `n · ε · max(1, max|λ|) · 10³`.
pub fn default_cluster_tol(values: &[f64]) -> f64 {
    let lmax = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    values.len() as f64 * f64::EPSILON * lmax * 1e3
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TakagiOptions {
    /// Structural tolerance; defaults to `1e-10 · max(1, ‖·‖_F)` per part.
    pub tol: Option<f64>,
    pub cluster_tol: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DualTakagiResult<T> {
    pub v: DualMatrix<T>,
    /// Real diagonal; `sigma.standard` is constant on each cluster.
    pub sigma: DualMatrix<f64>,
    pub clusters: Vec<Cluster>,
    /// Skew-Hermitian generator with `V_i = −V_s Q`. In the basis of `V_s`,
    /// `Q Σ_s + B̃ + Σ_s Q^*` is diagonal.
    pub q: Matrix<T>,
    pub eta: Eta,
}

impl<T: Scalar> DualTakagiResult<T> {
    pub fn sigma_standard(&self) -> Vec<f64> {
        self.sigma.standard.diagonal()
    }

    pub fn sigma_infinitesimal(&self) -> Vec<f64> {
        self.sigma.infinitesimal.diagonal()
    }

    /// `V Σ V^*` in dual arithmetic.
    pub fn reconstruct(&self) -> DualMatrix<T> {
        let s = DualMatrix {
            standard: self.sigma.standard.map(T::from_real),
            infinitesimal: self.sigma.infinitesimal.map(T::from_real),
        };
        let vs = self.v.eta_adjoint(self.eta);
        self.v.mul(&s).and_then(|x| x.mul(&vs)).expect("square factors")
    }

    /// Frobenius norms of the standard and infinitesimal reconstruction
    /// defects.
    pub fn residuals(&self, a: &DualMatrix<T>) -> (f64, f64) {
        let r = self.reconstruct();
        (r.standard.sub(&a.standard).frobenius_norm(), r.infinitesimal.sub(&a.infinitesimal).frobenius_norm())
    }
}

/// Dual complex symmetric Takagi factorization `A = V Σ V^T`, `Σ_s ≥ 0`.
pub fn dtakagi(a: &DualMatrix<Complex64>, opts: TakagiOptions) -> Result<DualTakagiResult<Complex64>, Error> {
    dual_takagi(a, Eta::J, false, opts)
}

/// Dual quaternion η-Hermitian Takagi factorization `A = V Σ V^{ηH}`.
pub fn eta_dtakagi(
    a: &DualMatrix<Quaternion>,
    eta: Eta,
    opts: TakagiOptions,
) -> Result<DualTakagiResult<Quaternion>, Error> {
    dual_takagi(a, eta, false, opts)
}

/// Dual SVD of a real symmetric dual matrix, `A = V Σ V^T` with real `V`.
/// Built on the spectral decomposition of `A_s`, so `Σ` carries the signs
/// of the eigenvalues; for positive semidefinite `A_s` it is the singular
/// value decomposition.
pub fn atdsvd(a: &DualMatrix<f64>, opts: TakagiOptions) -> Result<DualTakagiResult<f64>, Error> {
    dual_takagi(a, Eta::J, true, opts)
}

/// Variant of [`atdsvd`] with nonnegative `Σ_s` for any symmetric input, at
/// the price of a complex `V`.
pub fn atdsvd_strict(a: &DualMatrix<f64>, opts: TakagiOptions) -> Result<DualTakagiResult<Complex64>, Error> {
    let lift = |m: &Matrix<f64>| m.map(Complex64::from_real);
    let c = DualMatrix { standard: lift(&a.standard), infinitesimal: lift(&a.infinitesimal) };
    dtakagi(&c, opts)
}

/// The generator `Q = −K` computed from `B` partitioned by `clusters`.
///
/// Off-diagonal blocks come from the gap equations. Diagonal blocks of
/// clusters with a positive value absorb the part of `B_tt` that
/// anticommutes with η (always zero over ℝ); the remaining diagonal blocks
/// are zero. A cluster counts as the zero cluster when its value is
/// exactly `0.0`. `Q + Q^H = 0` holds exactly.
pub fn build_q<T: Scalar>(clusters: &[Cluster], b: &Matrix<T>, eta: Eta) -> Result<Matrix<T>, Error> {
    build_k(clusters, b, eta).map(|k| k.neg())
}

fn build_k<T: Scalar>(clusters: &[Cluster], b: &Matrix<T>, eta: Eta) -> Result<Matrix<T>, Error> {
    let n = b.rows();
    let mut owner = alloc::vec![0usize; n];
    for (t, c) in clusters.iter().enumerate() {
        for p in c.range() {
            owner[p] = t;
        }
    }
    let mut k = Matrix::zeros(n, n);
    for a in 0..n {
        for bb in a..n {
            let (ca, cb) = (clusters[owner[a]], clusters[owner[bb]]);
            let x = b[(a, bb)];
            let comm = eta.commuting_part(x);
            let anti = eta.anticommuting_part(x);
            let mut kab = T::zero();
            if owner[a] != owner[bb] {
                let gap = cb.value - ca.value;
                if gap == 0.0 {
                    return Err(Error::ClusterGap { left: ca.value, right: cb.value });
                }
                kab = comm.scale(1.0 / gap);
            } else if ca.value == 0.0 {
                continue;
            }
            if anti != T::zero() {
                let sum = ca.value + cb.value;
                if sum == 0.0 {
                    return Err(Error::ClusterGap { left: ca.value, right: cb.value });
                }
                kab += anti.scale(1.0 / sum);
            }
            if a == bb {
                // skew-Hermitian diagonal is purely imaginary
                kab -= T::from_real(kab.re());
                k[(a, a)] = kab;
            } else {
                k[(a, bb)] = kab;
                k[(bb, a)] = -kab.conj();
            }
        }
    }
    Ok(k)
}

fn dual_takagi<T: Scalar>(
    a: &DualMatrix<T>,
    eta: Eta,
    signed: bool,
    opts: TakagiOptions,
) -> Result<DualTakagiResult<T>, Error> {
    if !signed {
        check_takagi_field::<T>(eta)?;
    }
    if !a.standard.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.rows();
    let property = match T::FIELD {
        Field::Quaternion => "eta-Hermitian",
        _ => "symmetric",
    };
    for part in [&a.standard, &a.infinitesimal] {
        let tol = opts.tol.unwrap_or_else(|| default_tol(part.frobenius_norm()));
        let defect = part.eta_hermitian_defect(eta);
        if defect > tol {
            return Err(Error::NotStructured { property, residual: defect, tol });
        }
    }

    let (w, d) = if signed {
        let e = eig_symmetric(&a.standard.map(|x| x.re()))?;
        (e.vectors.map(T::from_real), e.values)
    } else {
        let t = takagi(&a.standard, eta)?;
        (t.w, t.d)
    };
    let ctol = opts.cluster_tol.unwrap_or_else(|| default_cluster_tol(&d));
    let mut clusters = cluster_eigenvalues(&d, ctol);
    for c in clusters.iter_mut() {
        if c.value.abs() <= ctol {
            c.value = 0.0;
        }
    }

    let twist = |v: &Matrix<T>| v.eta_adjoint(eta).adjoint();
    let b = w.adjoint().mul(&a.infinitesimal).mul(&twist(&w));
    let mut u = Matrix::zeros(n, n);
    for c in &clusters {
        let r = c.range();
        let btt = b.block(r.start, r.end, r.start, r.end);
        let tol = opts.tol.unwrap_or_else(|| default_tol(btt.frobenius_norm()));
        let defect = btt.eta_hermitian_defect(eta);
        if defect > tol {
            return Err(Error::NotStructured { property, residual: defect, tol });
        }
        let btt = btt.add(&btt.eta_adjoint(eta)).scale(0.5);
        let ut = if signed || c.value != 0.0 { commuting_eigenvectors(&btt, eta)? } else { takagi(&btt, eta)?.w };
        u.set_block(r.start, r.start, &ut);
    }

    let vs = w.mul(&u);
    let bt = vs.adjoint().mul(&a.infinitesimal).mul(&twist(&vs));
    let k = build_k(&clusters, &bt, eta)?;
    let vi = vs.mul(&k);

    let mut s_s = Matrix::zeros(n, n);
    let mut s_i = Matrix::zeros(n, n);
    for c in &clusters {
        for p in c.range() {
            s_s[(p, p)] = c.value;
            s_i[(p, p)] = bt[(p, p)].re();
        }
    }
    Ok(DualTakagiResult {
        v: DualMatrix { standard: vs, infinitesimal: vi },
        sigma: DualMatrix { standard: s_s, infinitesimal: s_i },
        clusters,
        q: k.neg(),
        eta,
    })
}

/// Unitary `U` with entries commuting with η that diagonalizes the
/// commuting part of the η-Hermitian block `b`, eigenvalues descending.
///
/// Elements of ℍ commuting with η are `p + qη`, a copy of ℂ; over ℝ and
/// over ℂ with η ⊥ i they are the reals.
fn commuting_eigenvectors<T: Scalar>(b: &Matrix<T>, eta: Eta) -> Result<Matrix<T>, Error> {
    let c = b.map(|x| eta.commuting_part(x));
    match T::FIELD {
        Field::Quaternion => {
            let e = eta.quaternion();
            let z = c.map(|x| {
                let q = x.to_quaternion();
                Complex64::new(q.w, q.vector_dot(e))
            });
            let h = z.add(&z.adjoint()).scale(0.5);
            let v = eig_hermitian(&h)?.vectors;
            Ok(v.map(|x| T::from_quaternion(Quaternion::from_real(x.re) + e.scale(x.im))))
        }
        _ => {
            let r = c.map(|x| x.re());
            let r = r.add(&r.transpose()).scale(0.5);
            Ok(eig_symmetric(&r)?.vectors.map(T::from_real))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn clustering() {
        let cl = cluster_eigenvalues(&[3.0, 2.0, 0.0, 0.0, 0.0], 1e-8);
        let got: Vec<_> = cl.iter().map(|c| (c.value, c.len)).collect();
        assert_eq!(got, vec![(3.0, 1), (2.0, 1), (0.0, 3)]);
        assert_eq!(cluster_eigenvalues(&[5.0, 5.0, 5.0], 1e-300).len(), 1);
        let cl = cluster_eigenvalues(&[1.0, 1.0 - 1e-12, 0.5], 1e-8);
        assert_eq!(cl.len(), 2);
        assert_eq!((cl[0].len, cl[1].start), (2, 2));
        assert!((cl[0].value - (1.0 - 0.5e-12)).abs() < 1e-15);
    }

    #[test]
    fn build_q_examples() {
        let one = [Cluster { value: 2.0, start: 0, len: 3 }];
        let b = Matrix::from_fn(3, 3, |i, j| (i + j) as f64);
        assert_eq!(build_q(&one, &b, Eta::J).unwrap(), Matrix::zeros(3, 3));

        let cl = cluster_eigenvalues(&[3.0, 2.0, 0.0, 0.0, 0.0], 1e-8);
        let d = Matrix::from_diagonal(&[3.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(build_q(&cl, &d, Eta::J).unwrap(), Matrix::zeros(5, 5));

        let cl = [Cluster { value: 2.0, start: 0, len: 1 }, Cluster { value: 1.0, start: 1, len: 1 }];
        let b = Matrix::from_row_slice(2, 2, &[0.0, 0.75, 0.75, 0.0]);
        let q = build_q(&cl, &b, Eta::J).unwrap();
        assert_eq!(q[(0, 1)], 0.75);
        assert_eq!(q[(1, 0)], -0.75);
        assert_eq!(q.add(&q.transpose()), Matrix::zeros(2, 2));
    }

    #[test]
    fn build_q_rejects_equal_values() {
        let cl = [Cluster { value: 1.0, start: 0, len: 1 }, Cluster { value: 1.0, start: 1, len: 1 }];
        let b = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(build_q(&cl, &b, Eta::J), Err(Error::ClusterGap { .. })));
    }

    #[test]
    fn atdsvd_diagonal() {
        let a = DualMatrix::new(Matrix::identity(3), Matrix::from_diagonal(&[7.0, 5.0, 5.0])).unwrap();
        let r = atdsvd(&a, TakagiOptions::default()).unwrap();
        assert_eq!(r.sigma_standard(), vec![1.0; 3]);
        assert_close(&r.sigma_infinitesimal(), &[7.0, 5.0, 5.0], 1e-14);
        assert_eq!(r.clusters.len(), 1);
        let (rs, ri) = r.residuals(&a);
        assert!(rs < 1e-14 && ri < 1e-13);
    }

    #[test]
    fn atdsvd_hankel() {
        let h = Matrix::from_fn(5, 5, |i, j| if (i + j) % 2 == 0 { 1.0 } else { 0.0 });
        let a = DualMatrix::new(h.clone(), h).unwrap();
        let r = atdsvd(&a, TakagiOptions::default()).unwrap();
        assert_close(&r.sigma_standard(), &[3.0, 2.0, 0.0, 0.0, 0.0], 1e-10);
        assert_close(&r.sigma_infinitesimal(), &[3.0, 2.0, 0.0, 0.0, 0.0], 1e-10);
        let (rs, ri) = r.residuals(&a);
        assert!(rs < 1e-12 && ri < 1e-12);
        assert!(r.v.is_dual_unitary(None).unwrap().holds);
    }

    #[test]
    fn atdsvd_indefinite_signed_and_strict() {
        let s = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0]);
        let i = Matrix::from_row_slice(2, 2, &[0.5, -1.0, -1.0, 3.0]);
        let a = DualMatrix::new(s, i).unwrap();
        let r = atdsvd(&a, TakagiOptions::default()).unwrap();
        let root5 = crate::math::sqrt(5.0);
        assert_close(&r.sigma_standard(), &[root5, -root5], 1e-14);
        let (rs, ri) = r.residuals(&a);
        assert!(rs < 1e-13 && ri < 1e-13);

        let st = atdsvd_strict(&a, TakagiOptions::default()).unwrap();
        assert_close(&st.sigma_standard(), &[root5, root5], 1e-12);
        let ac = DualMatrix {
            standard: a.standard.map(Complex64::from_real),
            infinitesimal: a.infinitesimal.map(Complex64::from_real),
        };
        let (rs, ri) = st.residuals(&ac);
        assert!(rs < 1e-12 && ri < 1e-12, "{rs} {ri}");
        assert!(st.v.is_dual_unitary(None).unwrap().holds);
    }

    #[test]
    fn dtakagi_zero_infinitesimal() {
        let s = Matrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, -2.0)]);
        let a = DualMatrix::from_standard(s.clone());
        let r = dtakagi(&a, TakagiOptions::default()).unwrap();
        let t = crate::kernels::takagi_complex(&s).unwrap();
        assert_close(&r.sigma_standard(), &t.d, 1e-14);
        assert_eq!(r.sigma_infinitesimal(), vec![0.0, 0.0]);
        assert!(r.v.infinitesimal.frobenius_norm() == 0.0);
    }

    #[test]
    fn dtakagi_identity_plus_symmetric() {
        let nm = Matrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.5, 1.0), c(0.5, 1.0), c(-1.0, 0.0)]);
        let a = DualMatrix::new(Matrix::identity(2), nm).unwrap();
        let r = dtakagi(&a, TakagiOptions::default()).unwrap();
        assert_eq!(r.sigma_standard(), vec![1.0, 1.0]);
        // Σ_i carries the eigenvalues of Re N, the imaginary part moves into V_i
        let e = eig_symmetric(&Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -1.0])).unwrap();
        assert_close(&r.sigma_infinitesimal(), &e.values, 1e-13);
        let (rs, ri) = r.residuals(&a);
        assert!(rs < 1e-14 && ri < 1e-13);
        assert!(r.v.is_dual_unitary(None).unwrap().holds);
    }

    #[test]
    fn dtakagi_single_entry() {
        // A = 1 + iε: V = 1 + (i/2)ε, Σ = 1
        let a = DualMatrix::new(Matrix::identity(1), Matrix::from_row_slice(1, 1, &[c(0.0, 1.0)])).unwrap();
        let r = dtakagi(&a, TakagiOptions::default()).unwrap();
        assert_eq!(r.sigma_standard(), vec![1.0]);
        assert_eq!(r.sigma_infinitesimal(), vec![0.0]);
        assert!((r.v.infinitesimal[(0, 0)] - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    #[rustfmt::skip]
    fn dtakagi_singular_standard_part() {
        let v = [c(1.0, 1.0), c(0.0, 2.0), c(1.0, -0.5)];
        let s = Matrix::from_fn(3, 3, |i, j| v[i] * v[j]);
        let i = Matrix::from_row_slice(3, 3, &[
            c(0.3, 0.1), c(0.2, 0.0), c(-0.1, 0.4),
            c(0.2, 0.0), c(1.0, -1.0), c(0.5, 0.5),
            c(-0.1, 0.4), c(0.5, 0.5), c(0.0, 0.7),
        ]);
        let a = DualMatrix::new(s, i).unwrap();
        let r = dtakagi(&a, TakagiOptions::default()).unwrap();
        assert_eq!(r.clusters.len(), 2);
        // the zero cluster takes Takagi values, which are nonnegative
        let z = r.clusters[1];
        assert_eq!(z.value, 0.0);
        assert!(r.sigma_infinitesimal()[z.range()].iter().all(|&x| x >= 0.0));
        let (rs, ri) = r.residuals(&a);
        assert!(rs < 1e-12 && ri < 1e-12, "{rs} {ri}");
        assert!(r.v.is_dual_unitary(None).unwrap().holds);
        let q = &r.q;
        assert_eq!(q.add(&q.adjoint()), Matrix::zeros(3, 3));
    }

    #[test]
    fn quaternion_example_both_etas() {
        let q = Quaternion::from_real;
        let s = Matrix::from_row_slice(2, 2, &[q(0.0), q(1.0), q(1.0), q(0.0)]);
        let a = DualMatrix::new(s.clone(), s).unwrap();
        for eta in [Eta::I, Eta::J] {
            let r = eta_dtakagi(&a, eta, TakagiOptions::default()).unwrap();
            assert_close(&r.sigma_standard(), &[1.0, 1.0], 1e-12);
            assert_close(&r.sigma_infinitesimal(), &[1.0, 1.0], 1e-12);
            let (rs, ri) = r.residuals(&a);
            assert!(rs < 1e-12 && ri < 1e-12);
            assert!(r.v.is_dual_unitary(None).unwrap().holds);
        }
    }

    #[test]
    fn quaternion_diagonal() {
        let q = Quaternion::from_real;
        let a = DualMatrix::from_standard(Matrix::from_diagonal(&[q(2.0), q(1.0)]));
        let r = eta_dtakagi(&a, Eta::K, TakagiOptions::default()).unwrap();
        assert_eq!(r.v.standard, Matrix::identity(2));
        assert_eq!(r.v.infinitesimal, Matrix::zeros(2, 2));
        assert_eq!(r.sigma_standard(), vec![2.0, 1.0]);
    }

    #[test]
    fn rejects_unstructured() {
        let a = DualMatrix::new(Matrix::identity(2), Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(matches!(atdsvd(&a, TakagiOptions::default()), Err(Error::NotStructured { .. })));
    }
}
