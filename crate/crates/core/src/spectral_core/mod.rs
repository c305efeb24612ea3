//! Grids, potentials, Fourier utilities, Cauchy projectors and norms.

mod cauchy;
mod coords;
mod fourier;
mod grid;
mod interp;
mod norms;
mod potential;

pub use cauchy::{Asymptotics, CauchyOps, KLineCauchy, Projection};
pub use coords::{y_of_x, CoordinateMap};
pub use fourier::{band_limited_eval, helmholtz_inverse, midpoint_samples, spectral_derivative};
pub use grid::{SpatialGrid, SpectralGrid};
pub use interp::MonotoneCubic;
pub use norms::{fd4_derivative, fd4_second_derivative, weighted_norm, WeightedNormReport};
pub use potential::{Potential, POTENTIAL_HEADER};
