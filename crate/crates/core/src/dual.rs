//! Dual numbers `a + ε b` with `ε² = 0` over any [`Scalar`] field.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// A dual number with a standard and an infinitesimal part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualScalar<T> {
    pub standard: T,
    pub infinitesimal: T,
}

impl<T: Scalar> DualScalar<T> {
    #[inline]
    pub fn new(standard: T, infinitesimal: T) -> Self {
        Self { standard, infinitesimal }
    }

    /// Embeds a base-field scalar as `a + 0ε`.
    #[inline]
    pub fn from_standard(standard: T) -> Self {
        Self::new(standard, T::zero())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn conj(self) -> Self {
        Self::new(self.standard.conj(), self.infinitesimal.conj())
    }
}

impl<T: Scalar> Add for DualScalar<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.standard + o.standard, self.infinitesimal + o.infinitesimal)
    }
}

impl<T: Scalar> Sub for DualScalar<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.standard - o.standard, self.infinitesimal - o.infinitesimal)
    }
}

impl<T: Scalar> Neg for DualScalar<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.standard, -self.infinitesimal)
    }
}

/// `(a_s + ε a_i)(b_s + ε b_i) = a_s b_s + ε (a_i b_s + a_s b_i)`.
impl<T: Scalar> Mul for DualScalar<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.standard * o.standard, self.infinitesimal * o.standard + self.standard * o.infinitesimal)
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for DualScalar<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ε({})", self.standard, self.infinitesimal)
    }
}
