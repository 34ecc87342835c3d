//! Small dense linear algebra: 2x2 complex matrices and a real LU solve.

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Mat2<T: Scalar>(pub [[Cx<T>; 2]; 2]);

impl<T: Scalar> Mat2<T> {
    pub fn new(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Mat2([[z, z], [z, z]])
    }

    pub fn identity() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Mat2([[o, z], [z, o]])
    }

    pub fn diag(a: Cx<T>, d: Cx<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Mat2([[a, z], [z, d]])
    }

    pub fn sigma3() -> Self {
        Self::diag(Complex::new(T::one(), T::zero()), Complex::new(-T::one(), T::zero()))
    }

    pub fn det(&self) -> Cx<T> {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Cx<T> {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() == T::zero() || !det.norm().is_finite() {
            return Err(Error::Domain("singular 2x2 matrix".into()));
        }
        let [[a, b], [c, d]] = self.0;
        Ok(Mat2([[d / det, -b / det], [-c / det, a / det]]))
    }

    pub fn conj(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a.conj(), b.conj()], [c.conj(), d.conj()]])
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2([[a * s, b * s], [c * s, d * s]])
    }

    /// `sigma2 * conj(self) * sigma2`.
    pub fn sigma2_conj(&self) -> Self {
        let [[a, b], [c, d]] = self.conj().0;
        Mat2([[d, -c], [-b, a]])
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.0 {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    pub fn apply(&self, v: [Cx<T>; 2]) -> [Cx<T>; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Exponential of a trace-free matrix times `exp(shift)`.
    pub fn exp_traceless(&self, shift: Cx<T>) -> Self {
        let s2 = self.0[0][0] * self.0[0][0] + self.0[0][1] * self.0[1][0];
        let s = s2.sqrt();
        let (ch, shc) = if s.norm() < T::c(1e-4) {
            let s4 = s2 * s2;
            (
                Complex::new(T::one(), T::zero()) + s2 / T::c(2.0) + s4 / T::c(24.0),
                Complex::new(T::one(), T::zero()) + s2 / T::c(6.0) + s4 / T::c(120.0),
            )
        } else {
            let ep = (s + shift).exp();
            let em = (-s + shift).exp();
            let half = T::c(0.5);
            let ch = (ep + em) * half;
            let shc = (ep - em) * half / s;
            return Self::identity().scale(ch) + self.scale(shc);
        };
        let e = shift.exp();
        (Self::identity().scale(ch) + self.scale(shc)).scale(e)
    }
}

impl<T: Scalar> Index<(usize, usize)> for Mat2<T> {
    type Output = Cx<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.0[i][j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Mat2<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.0[i][j]
    }
}

impl<T: Scalar> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = self.0[i][j] + o.0[i][j];
            }
        }
        r
    }
}

impl<T: Scalar> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = self.0[i][j] - o.0[i][j];
            }
        }
        r
    }
}

impl<T: Scalar> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(Complex::new(-T::one(), T::zero()))
    }
}

impl<T: Scalar> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Solves `a x = b` for a dense row-major `n x n` real matrix by LU with partial pivoting.
///
/// Returns the solution and the smallest pivot magnitude relative to the largest entry.
pub fn lu_solve<T: Scalar>(mut a: Vec<T>, mut b: Vec<T>, n: usize) -> Result<(Vec<T>, T)> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::InvalidInput("lu_solve dimension mismatch".into()));
    }
    let scale = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return Err(Error::SingularSystem { pivot: 0.0 });
    }
    let mut min_pivot = T::infinity();
    for col in 0..n {
        let mut p = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[p * n + col].abs() {
                p = row;
            }
        }
        let piv = a[p * n + col];
        min_pivot = min_pivot.min(piv.abs() / scale);
        if piv.abs() <= T::epsilon() * scale * T::c(1e-3) {
            return Err(Error::SingularSystem { pivot: (piv.abs() / scale).f64() });
        }
        if p != col {
            for k in 0..n {
                a.swap(col * n + k, p * n + k);
            }
            b.swap(col, p);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / piv;
            if f != T::zero() {
                for k in col..n {
                    let v = a[col * n + k];
                    a[row * n + k] -= f * v;
                }
                let bv = b[col];
                b[row] -= f * bv;
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Ok((b, min_pivot))
}
