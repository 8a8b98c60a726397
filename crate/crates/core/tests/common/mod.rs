#![allow(dead_code)]

use dualmat::{Complex64, DualMatrix, Matrix, Quaternion, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[rustfmt::skip]
pub fn sym4() -> DualMatrix<f64> {
    let s = Matrix::from_row_slice(4, 4, &[
        0.4910, 0.4263, 0.3317, 0.8574,
        0.4263, 1.5287, 1.1186, 1.7450,
        0.3317, 1.1186, 1.0930, 1.3879,
        0.8574, 1.7450, 1.3879, 2.4994,
    ]);
    let i = Matrix::from_row_slice(4, 4, &[
        1.1980, 0.9304, 1.0057, 0.9948,
        0.9304, 0.8665, 1.1222, 0.8256,
        1.0057, 1.1222, 2.0469, 1.1378,
        0.9948, 0.8256, 1.1378, 1.0240,
    ]);
    DualMatrix::new(s, i).unwrap()
}

pub const SYM4_SS: [f64; 4] = [4.9258, 0.4738, 0.1705, 0.0421];
pub const SYM4_SI: [f64; 4] = [3.6787, 0.4183, 0.4973, 0.5411];

#[rustfmt::skip]
pub fn sym4_vs() -> Matrix<f64> {
    Matrix::from_row_slice(4, 4, &[
        -0.2182, 0.7044, -0.1299, -0.6628,
        -0.5280, -0.4138, 0.6310, -0.3896,
        -0.4268, -0.4469, -0.7642, -0.1847,
        -0.7010, 0.3645, 0.0304, 0.6122,
    ])
}

#[rustfmt::skip]
pub fn sym4_vi() -> Matrix<f64> {
    Matrix::from_row_slice(4, 4, &[
        -0.2237, 0.0523, -1.8169, 0.4854,
        0.0509, 0.5157, -0.3976, -1.2605,
        -0.1896, -0.5158, 0.0263, 1.5775,
        0.1468, -0.1482, 1.1493, 0.1992,
    ])
}

#[rustfmt::skip]
pub fn sym4_ls() -> Matrix<f64> {
    Matrix::from_row_slice(4, 4, &[
        0.7007, 0.0, 0.0, 0.0,
        0.6084, 1.0763, 0.0, 0.0,
        0.4733, 0.7717, 0.5229, 0.0,
        1.2235, 0.9296, 0.1748, 0.3281,
    ])
}

#[rustfmt::skip]
pub fn sym4_li() -> Matrix<f64> {
    Matrix::from_row_slice(4, 4, &[
        0.8548, 0.0, 0.0, 0.0,
        0.5856, 0.0715, 0.0, 0.0,
        0.8578, 0.2489, 0.8133, 0.0,
        -0.0731, 0.0808, -0.5987, 1.9236,
    ])
}

pub fn hankel() -> DualMatrix<f64> {
    let h = Matrix::from_fn(5, 5, |i, j| if (i + j) % 2 == 0 { 1.0 } else { 0.0 });
    DualMatrix::new(h.clone(), h).unwrap()
}

pub fn quat2x2() -> DualMatrix<Quaternion> {
    let q = Quaternion::from_real;
    let s = Matrix::from_row_slice(2, 2, &[q(0.0), q(1.0), q(1.0), q(0.0)]);
    DualMatrix::new(s.clone(), s).unwrap()
}

pub fn max_entry_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.sub(b).as_slice().iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_vec_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn scalar<T: Scalar>(rng: &mut StdRng) -> T {
    let c: Vec<f64> = (0..T::REAL_DIM).map(|_| rng.gen_range(-1.0..1.0)).collect();
    T::from_components(&c)
}

pub fn matrix<T: Scalar>(rng: &mut StdRng, m: usize, n: usize) -> Matrix<T> {
    Matrix::from_fn(m, n, |_, _| scalar(rng))
}

fn inner<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Unitary matrix from modified Gram-Schmidt on a random matrix; the
/// coefficients multiply basis vectors from the right.
pub fn unitary<T: Scalar>(rng: &mut StdRng, n: usize) -> Matrix<T> {
    let a: Matrix<T> = matrix(rng, n, n);
    let mut q = Matrix::zeros(n, n);
    for j in 0..n {
        let mut v = a.column(j);
        for _ in 0..2 {
            for p in 0..j {
                let u = q.column(p);
                let c = inner(&u, &v);
                for (x, &y) in v.iter_mut().zip(&u) {
                    *x -= y * c;
                }
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<T> = v.iter().map(|x| x.scale(1.0 / nv)).collect();
        q.set_column(j, &v);
    }
    q
}

pub fn skew_hermitian<T: Scalar>(rng: &mut StdRng, n: usize) -> Matrix<T> {
    let x: Matrix<T> = matrix(rng, n, n);
    x.sub(&x.adjoint())
}

/// `V = U + ε U S` with `S` skew-Hermitian is dual unitary.
pub fn dual_unitary<T: Scalar>(rng: &mut StdRng, n: usize) -> DualMatrix<T> {
    let u: Matrix<T> = unitary(rng, n);
    let s = skew_hermitian(rng, n);
    let vi = u.mul(&s);
    DualMatrix::new(u, vi).unwrap()
}

pub fn lift_real<T: Scalar>(m: &Matrix<f64>) -> Matrix<T> {
    m.map(T::from_real)
}

pub fn to_complex(a: &DualMatrix<f64>) -> DualMatrix<Complex64> {
    DualMatrix::new(lift_real(&a.standard), lift_real(&a.infinitesimal)).unwrap()
}

pub fn scale(a: &DualMatrix<impl Scalar>) -> f64 {
    a.frobenius_norm().max(1.0)
}

/// Sorted copy, descending.
pub fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

pub fn eta(rng: &mut StdRng) -> dualmat::Eta {
    loop {
        let q = Quaternion::new(0.0, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if q.norm() > 0.1 {
            return dualmat::Eta::new(q.scale(1.0 / q.norm())).unwrap();
        }
    }
}

/// Random lower trapezoidal `m×k` with unit diagonal.
pub fn unit_lower(rng: &mut StdRng, m: usize, k: usize) -> Matrix<f64> {
    Matrix::from_fn(m, k, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => rng.gen_range(-1.0..1.0),
        std::cmp::Ordering::Less => 0.0,
    })
}

/// Random upper trapezoidal `k×n` with diagonal entries of modulus ≥ 0.5.
pub fn upper(rng: &mut StdRng, k: usize, n: usize) -> Matrix<f64> {
    Matrix::from_fn(k, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => {
            let x: f64 = rng.gen_range(0.5..2.0);
            if rng.gen_bool(0.5) {
                x
            } else {
                -x
            }
        }
        std::cmp::Ordering::Less => rng.gen_range(-1.0..1.0),
        std::cmp::Ordering::Greater => 0.0,
    })
}

/// Orthonormal bases of the left and right null spaces of a real matrix.
pub fn null_spaces(a: &Matrix<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (m, n) = a.shape();
    let r = dualmat::kernels::rank(a).unwrap();
    let left = dualmat::kernels::eig_symmetric(&a.mul(&a.transpose())).unwrap();
    let right = dualmat::kernels::eig_symmetric(&a.transpose().mul(a)).unwrap();
    ((r..m).map(|j| left.vectors.column(j)).collect(), (r..n).map(|j| right.vectors.column(j)).collect())
}
