//! FFT helpers on the periodic grid x_j = -L + 2Lj/N.

use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct Fourier<T: Scalar> {
    pub n: usize,
    pub l: T,
    /// Angular wavenumbers in FFT order.
    pub k: Vec<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Scalar> Fourier<T> {
    pub fn new(n: usize, l: T) -> Self {
        let mut planner = FftPlanner::<T>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let dk = T::PI() / l;
        let k = (0..n)
            .map(|j| {
                let jj = if j < n / 2 { j as f64 } else { j as f64 - n as f64 };
                T::c(jj) * dk
            })
            .collect();
        Self { n, l, k, fwd, inv }
    }

    pub fn grid(&self) -> Vec<T> {
        (0..self.n)
            .map(|j| -self.l + T::c(2.0) * self.l * T::n(j) / T::n(self.n))
            .collect()
    }

    pub fn forward(&self, data: &mut [Cx<T>]) {
        self.fwd.process(data);
    }

    /// Inverse transform including the 1/N normalization.
    pub fn inverse(&self, data: &mut [Cx<T>]) {
        self.inv.process(data);
        let s = T::one() / T::n(self.n);
        for v in data.iter_mut() {
            *v *= s;
        }
    }

    /// Applies the Fourier multiplier `mult(k)` to `f`.
    pub fn apply<F: Fn(T) -> Cx<T>>(&self, f: &[Cx<T>], mult: F) -> Vec<Cx<T>> {
        let mut buf = f.to_vec();
        self.forward(&mut buf);
        for (v, &k) in buf.iter_mut().zip(&self.k) {
            *v *= mult(k);
        }
        self.inverse(&mut buf);
        buf
    }

    pub fn derivative(&self, f: &[Cx<T>]) -> Vec<Cx<T>> {
        self.apply(f, |k| Complex::new(T::zero(), k))
    }
}
