//! The scalar fields a dual matrix can be built over.
//!
//! Real numbers and complex numbers are treated as sub-algebras of the
//! quaternions, so every routine that needs quaternion-level operations
//! (η-conjugation in particular) can be written once.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::math::sqrt;
use crate::quaternion::Quaternion;
use crate::Error;

/// Tag identifying the base field of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
            Field::Quaternion => "quaternion",
        }
    }
}

/// Element type of a [`Matrix`](crate::Matrix): `f64`, [`Complex64`] or
/// [`Quaternion`].
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const FIELD: Field;
    /// Dimension of the field as a real vector space (1, 2 or 4).
    const REAL_DIM: usize;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;

    fn abs(self) -> f64 {
        sqrt(self.norm_sqr())
    }

    fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    fn is_finite(self) -> bool {
        self.to_quaternion().to_array().iter().all(|c| c.is_finite())
    }

    fn to_quaternion(self) -> Quaternion;

    /// Projects a quaternion onto this field, dropping the components the
    /// field does not have.
    fn from_quaternion(q: Quaternion) -> Self;

    /// Real coordinate `c` (`0 ≤ c < REAL_DIM`) in the basis `1, i, j, k`.
    fn component(self, c: usize) -> f64 {
        self.to_quaternion().to_array()[c]
    }

    fn from_components(parts: &[f64]) -> Self {
        let mut a = [0.0; 4];
        a[..parts.len()].copy_from_slice(parts);
        Self::from_quaternion(Quaternion::from_array(a))
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;
    const REAL_DIM: usize = 1;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline]
    fn inv(self) -> Self {
        1.0 / self
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        Quaternion::from_real(self)
    }
    #[inline]
    fn from_quaternion(q: Quaternion) -> Self {
        q.w
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;
    const REAL_DIM: usize = 2;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Complex64::new(self.re * s, self.im * s)
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        Quaternion::new(self.re, self.im, 0.0, 0.0)
    }
    #[inline]
    fn from_quaternion(q: Quaternion) -> Self {
        Complex64::new(q.w, q.x)
    }
}

impl Scalar for Quaternion {
    const FIELD: Field = Field::Quaternion;
    const REAL_DIM: usize = 4;

    #[inline]
    fn zero() -> Self {
        Quaternion::ZERO
    }
    #[inline]
    fn one() -> Self {
        Quaternion::ONE
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        Quaternion::from_real(x)
    }
    #[inline]
    fn re(self) -> f64 {
        self.w
    }
    #[inline]
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        Quaternion::norm_sqr(self)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Quaternion::scale(self, s)
    }
    #[inline]
    fn inv(self) -> Self {
        Quaternion::inv(self)
    }
    #[inline]
    fn to_quaternion(self) -> Quaternion {
        self
    }
    #[inline]
    fn from_quaternion(q: Quaternion) -> Self {
        q
    }
}

/// Tolerance used to validate that a quaternion is a unit pure imaginary.
pub const ETA_TOL: f64 = 1e-12;

/// A unit pure imaginary quaternion η, the parameter of η-conjugation
/// `x ↦ η̄ x η` and of the η-conjugate transpose `A^{ηH} = η̄ A^H η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eta(Quaternion);

impl Eta {
    pub const I: Eta = Eta(Quaternion::I);
    pub const J: Eta = Eta(Quaternion::J);
    pub const K: Eta = Eta(Quaternion::K);

    /// Validates `q` and renormalizes it to exact unit length.
    pub fn new(q: Quaternion) -> Result<Self, Error> {
        if !q.is_unit_pure_imaginary(ETA_TOL) {
            return Err(Error::InvalidEta);
        }
        let v = Quaternion::new(0.0, q.x, q.y, q.z);
        Ok(Eta(v.scale(1.0 / v.norm())))
    }

    #[inline]
    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    /// `η̄ x η`, projected back onto the field of `x`.
    #[inline]
    pub fn sandwich<T: Scalar>(self, x: T) -> T {
        match T::FIELD {
            Field::Real => x,
            _ => T::from_quaternion(self.0.conj() * x.to_quaternion() * self.0),
        }
    }

    /// Scalar map behind the η-conjugate transpose:
    /// `(A^{ηH})_{ij} = η̄ conj(A_{ji}) η`.
    #[inline]
    pub fn adjoint_entry<T: Scalar>(self, x: T) -> T {
        self.sandwich(x.conj())
    }

    /// Part of `x` commuting with η, `(x + η̄ x η) / 2`.
    #[inline]
    pub fn commuting_part<T: Scalar>(self, x: T) -> T {
        (x + self.sandwich(x)).scale(0.5)
    }

    /// Part of `x` anticommuting with η, `(x − η̄ x η) / 2`.
    #[inline]
    pub fn anticommuting_part<T: Scalar>(self, x: T) -> T {
        (x - self.sandwich(x)).scale(0.5)
    }

    /// Whether η-conjugation maps the field `T` into itself.
    ///
    /// Reals and quaternions accept every η. Complex numbers accept η = ±i
    /// (η-conjugation is the identity) and η orthogonal to i (η-conjugation
    /// is complex conjugation).
    pub fn preserves<T: Scalar>(self) -> bool {
        match T::FIELD {
            Field::Complex => {
                let q = self.0;
                q.x.abs() <= ETA_TOL || (q.y.abs() <= ETA_TOL && q.z.abs() <= ETA_TOL)
            }
            _ => true,
        }
    }
}

impl Default for Eta {
    fn default() -> Self {
        Eta::J
    }
}
