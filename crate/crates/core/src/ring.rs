//! Minimal commutative ring interface shared by scalars and polynomials so
//! that transfer-matrix products and determinants are written once.

use crate::scalar::{ExactField, Scalar};

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Rings where `a / b` is computable whenever `b` divides `a`.
pub trait ExactDivRing: Ring {
    fn exact_div(&self, divisor: &Self) -> Option<Self>;
}

impl<T: Scalar> Ring for T {
    fn zero() -> Self {
        <T as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        <T as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

impl<T: ExactField> ExactDivRing for T {
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if Ring::is_zero(divisor) {
            None
        } else {
            Some(self.clone() / divisor.clone())
        }
    }
}
