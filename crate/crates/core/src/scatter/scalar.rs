//! The two scalar backends: exact cyclotomic numbers and complex floats.

use std::fmt::Debug;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::Cyclo;

pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_cyclo(c: &Cyclo) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Equality, up to `tol` relative to the larger magnitude for floats.
    fn close_to(&self, other: &Self, tol: f64) -> bool;
    fn to_complex(&self) -> Complex64;

    fn from_int(v: i64) -> Self {
        Self::from_cyclo(&Cyclo::from_int(v))
    }

    fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base)))
    }

    fn is_one(&self) -> bool {
        self.close_to(&Self::one(), 1e-12)
    }
}

impl Scalar for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }

    fn one() -> Self {
        Cyclo::one()
    }

    fn from_cyclo(c: &Cyclo) -> Self {
        c.clone()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inv(&self) -> Result<Self> {
        Cyclo::inv(self)
    }

    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }

    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }

    fn pow(&self, e: i64) -> Result<Self> {
        Cyclo::pow(self, e)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_cyclo(c: &Cyclo) -> Self {
        c.to_complex()
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn inv(&self) -> Result<Self> {
        if self.norm() < 1e-300 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.inv())
    }

    fn is_zero(&self) -> bool {
        self.norm() < 1e-12
    }

    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol * self.norm().max(other.norm()).max(1.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}
