//! Piecewise Chebyshev tables for the hot loops of the contour quadrature.
//!
//! Built once from the reference evaluators on unit intervals; the
//! interpolation error is at rounding level.

use std::sync::OnceLock;

use super::{i0, k0, EULER_GAMMA};

const DEGREE: usize = 20;
/// Upper end of the `K0` table; callers drop `K0` beyond this.
pub(crate) const K0_TABLE_MAX: f64 = 40.0;
const I0_TABLE_MAX: f64 = 16.0;

struct Piecewise {
    coeffs: Vec<[f64; DEGREE + 1]>,
    start: f64,
}

impl Piecewise {
    fn build(start: f64, end: f64, f: impl Fn(f64) -> f64) -> Self {
        let n = DEGREE + 1;
        let coeffs = (0..(end - start).ceil() as usize)
            .map(|k| {
                let a = start + k as f64;
                let vals: Vec<f64> = (0..n)
                    .map(|j| {
                        let th = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                        f(a + 0.5 * (1.0 + th.cos()))
                    })
                    .collect();
                let mut c = [0.0; DEGREE + 1];
                for (i, ci) in c.iter_mut().enumerate() {
                    let s: f64 = vals
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v * (std::f64::consts::PI * i as f64 * (j as f64 + 0.5) / n as f64).cos())
                        .sum();
                    *ci = 2.0 * s / n as f64;
                }
                c[0] *= 0.5;
                c
            })
            .collect();
        Self { coeffs, start }
    }

    #[inline]
    fn eval(&self, z: f64) -> f64 {
        let u = z - self.start;
        let k = (u as usize).min(self.coeffs.len() - 1);
        let t = 2.0 * (u - k as f64) - 1.0;
        let c = &self.coeffs[k];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &ci in c.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + ci;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + c[0]
    }
}

struct Tables {
    i0: Piecewise,
    /// `K0(z) + (log(z/2) + γ) I0(z)` on `[0, 2]`, an entire function.
    k0_regular: Piecewise,
    k0_large: Piecewise,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| Tables {
        i0: Piecewise::build(0.0, I0_TABLE_MAX, i0),
        k0_regular: Piecewise::build(0.0, 2.0, |z| {
            if z == 0.0 {
                0.0
            } else {
                k0(z) + ((0.5 * z).ln() + EULER_GAMMA) * i0(z)
            }
        }),
        k0_large: Piecewise::build(2.0, K0_TABLE_MAX, k0),
    })
}

/// `(K0(z), I0(z))` for `0 < z < K0_TABLE_MAX`; `I0` is only meaningful
/// for `z < 16` and reported as NaN beyond that.
#[inline]
pub(crate) fn k0_i0_fast(z: f64) -> (f64, f64) {
    let t = tables();
    if z < 2.0 {
        let iv = t.i0.eval(z);
        (t.k0_regular.eval(z) - ((0.5 * z).ln() + EULER_GAMMA) * iv, iv)
    } else {
        let iv = if z < I0_TABLE_MAX { t.i0.eval(z) } else { f64::NAN };
        (t.k0_large.eval(z), iv)
    }
}

/// As [`k0_i0_fast`] with `log(z/2)` supplied by the caller, who usually
/// has `log r` at hand already.
#[inline]
pub(crate) fn k0_i0_with_log(z: f64, log_half_z: f64) -> (f64, f64) {
    let t = tables();
    if z < 2.0 {
        let iv = t.i0.eval(z);
        (t.k0_regular.eval(z) - (log_half_z + EULER_GAMMA) * iv, iv)
    } else {
        k0_i0_fast(z)
    }
}
