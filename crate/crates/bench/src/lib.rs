//! Shared fixtures for the criterion benchmarks.

use alphaflow_core::contour::PatchContour;
use alphaflow_core::euler::{band_limited, Model, SimState};
use alphaflow_core::spectral::Grid;

/// Band-limited vorticity state on an `n × n` grid.
pub fn spectral_state(n: usize, model: Model) -> SimState {
    let grid = Grid::periodic(n).expect("valid grid size");
    let q = band_limited(grid, 7, 2.0, 8.0, 1.0);
    SimState::new(q, model).expect("mean-free field")
}

/// Three-mode perturbed unit disk with `m` markers.
pub fn perturbed_disk(m: usize) -> PatchContour {
    PatchContour::polar(m, 1.0, [0.0, 0.0], |t| {
        1.0 + 0.1 * (2.0 * t).cos() + 0.05 * (3.0 * t + 0.3).cos() + 0.02 * (5.0 * t + 1.1).cos()
    })
    .expect("valid contour")
}
