//! Modified Bessel functions of the second kind and the Euler-α kernel built
//! from them.
//!
//! `K0`/`K1` use the ascending power series for `z <= 2` and Steed's
//! continued fraction above that. Both regimes hold relative error near
//! machine precision over the working range `[1e-6, 50]`.
//!
//! The stream-function kernel of the α-model is
//!
//! ```text
//! Ψα(r) = (1/2π) [K0(r/α) + log r]
//! ```
//!
//! and [`AlphaKernel`] evaluates it together with its first three radial
//! derivatives and the Helmholtz Green function `Gα(r) = K0(r/α) / (2πα²)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

mod table;
pub(crate) use table::{k0_i0_fast, k0_i0_with_log, K0_TABLE_MAX};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments at or below this use the ascending series.
pub const SERIES_SWITCH: f64 = 2.0;

const SERIES_MAX_TERMS: usize = 60;
const CF_MAX_ITER: usize = 10_000;

/// `K0(z)` or `K1(z)` for `order` 0 or 1.
pub fn bessel_k(order: u32, z: f64) -> Result<f64> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain {
            what: "bessel_k requires z > 0",
            value: z,
        });
    }
    match order {
        0 => Ok(k0(z)),
        1 => Ok(k1(z)),
        _ => Err(Error::Domain {
            what: "bessel_k supports orders 0 and 1 only",
            value: order as f64,
        }),
    }
}

/// `K0(z)` for `z > 0`. No argument checking.
pub fn k0(z: f64) -> f64 {
    if z <= SERIES_SWITCH {
        series_small(z).k0
    } else {
        steed_large(z).0
    }
}

/// `K1(z)` for `z > 0`. No argument checking.
pub fn k1(z: f64) -> f64 {
    if z <= SERIES_SWITCH {
        series_small(z).k1_minus_inv + 1.0 / z
    } else {
        steed_large(z).1
    }
}

/// `K1(z) - 1/z`, evaluated without cancellation for small `z`.
pub fn k1_minus_inv(z: f64) -> f64 {
    if z <= SERIES_SWITCH {
        series_small(z).k1_minus_inv
    } else {
        steed_large(z).1 - 1.0 / z
    }
}

/// `(K0(z), K1(z) - 1/z)` in one pass.
fn k0_k1m(z: f64) -> (f64, f64) {
    if z <= SERIES_SWITCH {
        let s = series_small(z);
        (s.k0, s.k1_minus_inv)
    } else {
        let (a, b) = steed_large(z);
        (a, b - 1.0 / z)
    }
}

/// Modified Bessel function of the first kind `I0(z)`, by its power series.
///
/// Only used with moderate arguments (the contour quadrature keeps
/// `z <= 16`), where every series term is positive and the sum is exact to
/// rounding.
pub fn i0(z: f64) -> f64 {
    let t = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= t / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

struct SmallSeries {
    k0: f64,
    k1_minus_inv: f64,
}

fn series_small(z: f64) -> SmallSeries {
    let t = 0.25 * z * z;
    let log_half = (0.5 * z).ln();

    // I0 and the K0 harmonic sum share the term t^k / (k!)^2.
    let mut i0 = 1.0;
    let mut k0_sum = 0.0;
    // I1 / (z/2) and the K1 digamma sum share t^k / (k! (k+1)!).
    let mut i1_red = 1.0;
    let mut k1_sum = 1.0 - 2.0 * EULER_GAMMA; // psi(1) + psi(2) at k = 0

    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut harmonic = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        t0 *= t / (kf * kf);
        t1 *= t / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let h_next = harmonic + 1.0 / (kf + 1.0);
        i0 += t0;
        k0_sum += harmonic * t0;
        i1_red += t1;
        k1_sum += (harmonic + h_next - 2.0 * EULER_GAMMA) * t1;
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1_red {
            break;
        }
    }
    let i1 = 0.5 * z * i1_red;
    SmallSeries {
        k0: -(log_half + EULER_GAMMA) * i0 + k0_sum,
        k1_minus_inv: log_half * i1 - 0.25 * z * k1_sum,
    }
}

/// Steed's continued fraction (CF2) for `K0` and `K1`, valid for `z >= 2`.
fn steed_large(x: f64) -> (f64, f64) {
    if x > 745.0 {
        return (0.0, 0.0);
    }
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..CF_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Evaluator for the Euler-α stream-function kernel at a fixed α.
///
/// Immutable after construction; evaluations are pure functions of
/// `(order, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaKernel {
    alpha: f64,
    inv_alpha: f64,
    /// Ψα(0⁺) = (log 2α − γ) / 2π.
    psi_at_origin: f64,
    /// Radius below which the Bessel factors come from the ascending series.
    series_radius: f64,
}

impl AlphaKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain {
                what: "alpha must be positive and finite",
                value: alpha,
            });
        }
        Ok(Self {
            alpha,
            inv_alpha: 1.0 / alpha,
            psi_at_origin: ((2.0 * alpha).ln() - EULER_GAMMA) / (2.0 * PI),
            series_radius: SERIES_SWITCH * alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Radius (in units of length, not `r/α`) where evaluation switches from
    /// the ascending series to the continued fraction.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }

    /// `d^order Ψα / dr^order` at radius `r`.
    ///
    /// Orders 0 and 1 are continuous at the origin and return their limits
    /// there; orders 2 and 3 are unbounded at `r = 0`.
    pub fn psi_derivative(&self, order: u32, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                what: "psi_derivative requires r >= 0",
                value: r,
            });
        }
        match order {
            0 => Ok(self.psi(r)),
            1 => Ok(self.dpsi(r)),
            2 | 3 if r == 0.0 => Err(Error::Domain {
                what: "second and third derivatives of psi are unbounded at r = 0",
                value: r,
            }),
            2 => Ok(self.d2psi(r)),
            3 => Ok(self.d3psi(r)),
            _ => Err(Error::Domain {
                what: "psi_derivative supports orders 0..=3",
                value: order as f64,
            }),
        }
    }

    /// Ψα(r) for `r >= 0`, unchecked.
    pub fn psi(&self, r: f64) -> f64 {
        if r == 0.0 {
            return self.psi_at_origin;
        }
        (k0(r * self.inv_alpha) + r.ln()) / (2.0 * PI)
    }

    /// DΨα(r) for `r >= 0`, unchecked.
    pub fn dpsi(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        -k1_minus_inv(r * self.inv_alpha) * self.inv_alpha / (2.0 * PI)
    }

    fn d2psi(&self, r: f64) -> f64 {
        let z = r * self.inv_alpha;
        let (k0, k1m) = k0_k1m(z);
        (k1m / z + k0) * self.inv_alpha * self.inv_alpha / (2.0 * PI)
    }

    fn d3psi(&self, r: f64) -> f64 {
        let z = r * self.inv_alpha;
        let (k0, k1m) = k0_k1m(z);
        let k1 = k1m + 1.0 / z;
        let ia = self.inv_alpha;
        (-2.0 * k1m / (z * z) - k0 / z - k1) * ia * ia * ia / (2.0 * PI)
    }

    /// The α-dependent part of `d^order Ψα / dr^order`, i.e. the derivative
    /// minus that of the Euler kernel `log(r) / 2π`.
    pub fn bessel_part(&self, order: u32, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::Domain {
                what: "bessel_part requires r > 0",
                value: r,
            });
        }
        let ia = self.inv_alpha;
        let z = r * ia;
        let c = 1.0 / (2.0 * PI);
        Ok(match order {
            0 => c * k0(z),
            1 => -c * ia * k1(z),
            2 => c * (ia / r * k1(z) + ia * ia * k0(z)),
            3 => c * (-2.0 * ia / (r * r) * k1(z) - ia * ia / r * k0(z) - ia * ia * ia * k1(z)),
            _ => {
                return Err(Error::Domain {
                    what: "bessel_part supports orders 0..=3",
                    value: order as f64,
                })
            }
        })
    }

    /// Helmholtz Green function `Gα(r) = K0(r/α) / (2πα²)`.
    pub fn green_helmholtz(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::Domain {
                what: "green_helmholtz requires r > 0",
                value: r,
            });
        }
        Ok(k0(r * self.inv_alpha) * self.inv_alpha * self.inv_alpha / (2.0 * PI))
    }
}
