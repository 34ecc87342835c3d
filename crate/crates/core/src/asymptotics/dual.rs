//! Complex dual numbers a + b eps with eps^2 = 0 and real eps.

use crate::linalg::Mat2;
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<T: Scalar> {
    pub v: Cx<T>,
    pub d: Cx<T>,
}

impl<T: Scalar> Dual<T> {
    pub fn new(v: Cx<T>, d: Cx<T>) -> Self {
        Self { v, d }
    }

    pub fn constant(v: Cx<T>) -> Self {
        Self { v, d: Complex::new(T::zero(), T::zero()) }
    }

    pub fn conj(self) -> Self {
        Self { v: self.v.conj(), d: self.d.conj() }
    }

    pub fn recip(self) -> Self {
        let inv = self.v.inv();
        Self { v: inv, d: -self.d * inv * inv }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d: self.d + o.d }
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d: self.d - o.d }
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d: -self.d }
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { v: self.v * o.v, d: self.v * o.d + self.d * o.v }
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

/// 2x2 matrix over dual numbers.
#[derive(Debug, Clone, Copy)]
pub struct DualMat<T: Scalar>(pub [[Dual<T>; 2]; 2]);

impl<T: Scalar> DualMat<T> {
    /// value + eps * derivative.
    pub fn from_parts(v: &Mat2<T>, d: &Mat2<T>) -> Self {
        let mut out = [[Dual::constant(Complex::new(T::zero(), T::zero())); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = Dual::new(v[(i, j)], d[(i, j)]);
            }
        }
        Self(out)
    }

    pub fn at(&self, i: usize, j: usize) -> Dual<T> {
        self.0[i][j]
    }
}
