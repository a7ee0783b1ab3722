//! One-dimensional periodic spectral helpers for marker chains.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type Pair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn plans(m: usize) -> Pair {
    static CACHE: OnceLock<Mutex<HashMap<usize, Pair>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| {
            let mut p = FftPlanner::new();
            (p.plan_fft_forward(m), p.plan_fft_inverse(m))
        })
        .clone()
}

/// Unnormalised forward DFT of a real sequence.
pub fn forward(v: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    plans(v.len()).0.process(&mut buf);
    buf
}

/// Inverse DFT (with `1/m`), real part.
pub fn inverse(c: &[Complex64]) -> Vec<f64> {
    let m = c.len();
    let mut buf = c.to_vec();
    plans(m).1.process(&mut buf);
    buf.into_iter().map(|z| z.re / m as f64).collect()
}

/// Signed mode number of DFT index `j`; the Nyquist index maps to `m/2`.
pub fn mode(j: usize, m: usize) -> i64 {
    if j <= m / 2 {
        j as i64
    } else {
        j as i64 - m as i64
    }
}

/// `n`-th derivative with respect to the parameter `σ ∈ [0, 2π)`.
pub fn derivative(v: &[f64], n: u32) -> Vec<f64> {
    if n == 0 {
        return v.to_vec();
    }
    let m = v.len();
    let mut c = forward(v);
    for (j, z) in c.iter_mut().enumerate() {
        let k = mode(j, m);
        if m % 2 == 0 && j == m / 2 && n % 2 == 1 {
            *z = Complex64::default();
            continue;
        }
        let ik = Complex64::new(0.0, k as f64).powu(n);
        *z *= ik;
    }
    inverse(&c)
}

/// Trigonometric interpolation onto `m_new ≥ m` equispaced points.
pub fn upsample(v: &[f64], m_new: usize) -> Vec<f64> {
    let m = v.len();
    debug_assert!(m_new >= m);
    let c = forward(v);
    let mut out = vec![Complex64::default(); m_new];
    for (j, z) in c.iter().enumerate() {
        let k = mode(j, m);
        if m % 2 == 0 && j == m / 2 {
            // split the Nyquist coefficient symmetrically
            out[m / 2] += z * 0.5;
            out[m_new - m / 2] += z * 0.5;
            continue;
        }
        out[k.rem_euclid(m_new as i64) as usize] = *z;
    }
    let scale = m_new as f64 / m as f64;
    inverse(&out).into_iter().map(|x| x * scale).collect()
}

/// Fourier coefficients prepared for evaluation of the trigonometric
/// interpolant at arbitrary parameters.
#[derive(Debug, Clone)]
pub struct Interpolant {
    /// `(k, a_k)` with the interpolant `Σ a_k e^{ikσ}`; the Nyquist term is
    /// split into `±m/2` halves so the interpolant is real.
    terms: Vec<(f64, Complex64)>,
}

impl Interpolant {
    pub fn new(v: &[f64]) -> Self {
        let m = v.len();
        let c = forward(v);
        let mut terms = Vec::with_capacity(m + 1);
        for (j, z) in c.iter().enumerate() {
            let a = z / m as f64;
            if m % 2 == 0 && j == m / 2 {
                terms.push(((m / 2) as f64, a * 0.5));
                terms.push((-((m / 2) as f64), a * 0.5));
            } else {
                terms.push((mode(j, m) as f64, a));
            }
        }
        Self { terms }
    }

    pub fn eval(&self, sigma: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, a)| (a * Complex64::from_polar(1.0, k * sigma)).re)
            .sum()
    }

    /// Value and first derivative.
    pub fn eval_d(&self, sigma: f64) -> (f64, f64) {
        let (mut v, mut d) = (0.0, 0.0);
        for (k, a) in &self.terms {
            let e = a * Complex64::from_polar(1.0, k * sigma);
            v += e.re;
            d -= k * e.im;
        }
        (v, d)
    }
}

/// Product-integration weights `R_k` such that, for a trigonometric
/// interpolant `f` of values `f_j`,
///
/// ```text
/// ∫₀^{2π} log|2 sin((σ_i − σ′)/2)| f(σ′) dσ′ = Σ_j R_{(i−j) mod m} f_j.
/// ```
///
/// Uses `∫ log|2 sin((σ−σ′)/2)| e^{ikσ′} dσ′ = −(π/|k|) e^{ikσ}` for `k ≠ 0`.
pub fn log_sine_weights(m: usize) -> Vec<f64> {
    let mut w = vec![Complex64::default(); m];
    for (j, z) in w.iter_mut().enumerate().skip(1) {
        let k = mode(j, m).unsigned_abs() as f64;
        *z = Complex64::new(-PI / k, 0.0);
    }
    inverse(&w)
}

/// Apply the log-sine integral operator to a sequence via its Fourier
/// multiplier.
pub fn log_sine_apply(v: &[f64]) -> Vec<f64> {
    let m = v.len();
    let mut c = forward(v);
    c[0] = Complex64::default();
    for (j, z) in c.iter_mut().enumerate().skip(1) {
        *z *= -PI / mode(j, m).unsigned_abs() as f64;
    }
    inverse(&c)
}
