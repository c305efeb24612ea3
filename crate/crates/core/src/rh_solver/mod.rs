//! Beals-Coifman collocation for the z-plane and k-plane Riemann-Hilbert
//! problems, with residue conditions at the discrete spectrum.

mod solution;
mod system;

pub use solution::{Functionals, RhpSolution};
pub use system::{theta, BealsCoifmanSystem, Plane, Pole, Side};
