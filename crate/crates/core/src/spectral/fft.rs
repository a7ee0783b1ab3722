//! Planned 2D complex FFTs on square grids.
//!
//! Forward transforms are unnormalised; inverse transforms carry `1/n²`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct Plan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plan(n: usize) -> Arc<Plan> {
    static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plan {
                n,
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

fn rows(fft: &Arc<dyn Fft<f64>>, n: usize, data: &mut [Complex64]) {
    // Rows are independent; each worker owns whole rows, so output does not
    // depend on the thread count.
    data.par_chunks_mut(n * 8.min(n)).for_each_init(
        || vec![Complex64::default(); fft.get_inplace_scratch_len()],
        |scratch, chunk| fft.process_with_scratch(chunk, scratch),
    );
}

fn transpose(n: usize, data: &mut [Complex64]) {
    for r in 0..n {
        for c in (r + 1)..n {
            data.swap(r * n + c, c * n + r);
        }
    }
}

fn run(p: &Plan, fft: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
    let n = p.n;
    assert_eq!(data.len(), n * n, "fft buffer does not match grid");
    rows(fft, n, data);
    transpose(n, data);
    rows(fft, n, data);
    transpose(n, data);
}

/// In-place unnormalised forward transform.
pub fn forward(n: usize, data: &mut [Complex64]) {
    let p = plan(n);
    run(&p, &p.forward, data);
}

/// In-place inverse transform including the `1/n²` factor.
pub fn inverse(n: usize, data: &mut [Complex64]) {
    let p = plan(n);
    run(&p, &p.inverse, data);
    let scale = 1.0 / (n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Forward transform of real samples.
pub fn forward_real(n: usize, samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward(n, &mut buf);
    buf
}

/// Inverse transform of Hermitian coefficients, returning the real part.
///
/// Debug builds check that the discarded imaginary part is at rounding level.
pub fn inverse_real(n: usize, coeffs: &[Complex64]) -> Vec<f64> {
    let mut buf = coeffs.to_vec();
    inverse(n, &mut buf);
    #[cfg(debug_assertions)]
    {
        let (mut im, mut mag) = (0.0f64, 0.0f64);
        for v in &buf {
            im = im.max(v.im.abs());
            mag = mag.max(v.norm());
        }
        debug_assert!(
            im <= 1e-9 * mag + 1e-300,
            "coefficients are not Hermitian: imaginary residue {im:e} vs magnitude {mag:e}"
        );
    }
    buf.into_iter().map(|v| v.re).collect()
}
