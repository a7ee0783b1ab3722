//! Periodic-grid field algebra: transforms, Fourier multipliers, velocity
//! reconstruction and the Sobolev/Besov norm toolkit.

pub mod fft;
mod field;
mod grid;
pub mod norms;
pub mod ops;
pub mod snapshot;

pub use field::SpectralField;
pub use grid::Grid;
pub use norms::{besov_norm, lp_norm, sobolev_norm, BesovSum, DyadicBlockSet};
pub use ops::{biot_savart, curl, fractional_laplacian, gradient, helmholtz_filter, max_gradient_norm};
