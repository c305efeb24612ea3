//! Jost functions, scattering coefficients, eigenvalues and norming constants
//! of an initial potential.

mod coefficients;
mod eigen;
mod jost;

pub use coefficients::{ReflectionReport, ScatteringSample};
pub use eigen::{BoundStateDiagnostics, SearchReport};
pub use jost::{JostPair, JostSolver};

use crate::config::EigenSearch;
use crate::scattering_data::ScatteringData;
use crate::spectral_core::{Potential, SpectralGrid};
use crate::{Result, Tolerances, C64};

/// Eigenvalues `z_j` on the lower unit circle with their constants; entries
/// `N0..2N0` are the reflections `-conj z_j` of the first `N0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiscreteSpectrum {
    pub eigenvalues: Vec<C64>,
    pub b_constants: Vec<f64>,
    pub c: Vec<C64>,
    pub c_tilde: Vec<C64>,
}

impl DiscreteSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `N0`, the number of fourth-quadrant eigenvalues.
    pub fn pairs(&self) -> usize {
        self.eigenvalues.len() / 2
    }
}

/// Everything computed by [`scatter`].
#[derive(Clone, Debug)]
pub struct ScatterOutput {
    pub data: ScatteringData,
    pub reflection: ReflectionReport,
    pub search: SearchReport,
    pub bound_states: Vec<BoundStateDiagnostics>,
}

/// Direct scattering of `p` onto `grid`.
pub fn scatter(
    p: &Potential,
    grid: &SpectralGrid,
    search: &EigenSearch,
    tol: &Tolerances,
) -> Result<ScatterOutput> {
    p.check_tails(tol.tail)?;
    let solver = JostSolver::new(p)?;
    let reflection = solver.reflection_on_grid(grid, tol)?;
    let (eigenvalues, search_report) = solver.find_eigenvalues(search, tol)?;
    let (spectrum, bound_states) = solver.norming_constants(&eigenvalues, search, tol)?;
    log::info!(
        "direct scattering: {} eigenvalues, unitarity {:.2e}, symmetry {:.2e}",
        spectrum.len(),
        reflection.unitarity,
        reflection.symmetry()
    );
    let data = ScatteringData::new(grid.clone(), reflection.r(), reflection.r_tilde(), spectrum, 0.0)?;
    Ok(ScatterOutput {
        data,
        reflection,
        search: search_report,
        bound_states,
    })
}
