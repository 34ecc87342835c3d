//! Complex Gamma function (Lanczos, g = 7, with reflection).

use crate::error::{Error, Result};
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn near_pole<T: Scalar>(z: Cx<T>) -> bool {
    let k = z.re.round();
    k <= T::zero() && (z - Complex::new(k, T::zero())).norm() < T::c(1e-14)
}

/// ln Gamma(z) for Re z >= 1/2 (principal-ish branch, continuous in z).
fn ln_gamma_right<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let z = z - T::one();
    let mut a = Complex::new(T::c(LANCZOS[0]), T::zero());
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += (z + T::n(k)).inv() * T::c(c);
    }
    let t = z + T::c(LANCZOS_G + 0.5);
    let half_ln_2pi = T::c(0.918_938_533_204_672_8);
    (z + T::c(0.5)) * t.ln() - t + a.ln() + half_ln_2pi
}

/// Gamma(z); errors at non-positive integers.
pub fn complex_gamma<T: Scalar>(z: Cx<T>) -> Result<Cx<T>> {
    if near_pole(z) {
        return Err(Error::PoleOfGamma(z.to_string()));
    }
    if z.re < T::c(0.5) {
        let pi = T::PI();
        let s = (z * pi).sin();
        Ok(Complex::new(pi, T::zero()) / (s * ln_gamma_right(Complex::new(T::one(), T::zero()) - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// 1/Gamma(z), zero at the poles of Gamma.
pub fn rgamma<T: Scalar>(z: Cx<T>) -> Cx<T> {
    if near_pole(z) {
        return Complex::new(T::zero(), T::zero());
    }
    if z.re < T::c(0.5) {
        let pi = T::PI();
        (z * pi).sin() * ln_gamma_right(Complex::new(T::one(), T::zero()) - z).exp() / pi
    } else {
        (-ln_gamma_right(z)).exp()
    }
}
