//! Inverse scattering transform for the modified Camassa-Holm equation
//!
//! ```text
//! m_t + (m (u^2 - u_x^2))_x = 0,   m = u - u_xx,   m -> 1 as |x| -> inf
//! ```
//!
//! The pipeline runs direct scattering of an initial potential, evolves the
//! scattering data in closed form and reconstructs `m`, `u` and `m_x` from
//! Riemann-Hilbert problems solved by Cauchy-operator collocation. A
//! pseudospectral integrator of the equation itself is provided for
//! cross-checks.

// Negated comparisons are used to reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod direct_scattering;
pub mod error;
pub mod linalg;
pub mod mat2;
pub mod pde_oracle;
pub mod reconstruction;
pub mod rh_solver;
pub mod scattering_data;
pub mod spectral_core;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use mat2::Mat2;

pub type C64 = num_complex::Complex64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);
