//! Numerical tolerances and search settings shared by the pipeline stages.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Plemelj residual of the Cauchy projectors.
    pub cauchy: f64,
    /// Magnitude below which samples count as decayed at a grid end.
    pub tail: f64,
    /// Relative residual accepted from the Riemann-Hilbert linear solve.
    pub solve: f64,
    /// Jump-condition residual of a solved Riemann-Hilbert problem.
    pub jump: f64,
    /// Deviation of det(mu) from one.
    pub det: f64,
    pub unitarity: f64,
    /// Reflection-coefficient symmetry residuals.
    pub symmetry: f64,
    /// Spread of a and b across evaluation nodes.
    pub x_dependence: f64,
    /// Distance of eigenvalues from the unit circle.
    pub circle: f64,
    /// Relative residual of the bound-state proportionality fit.
    pub bound_state: f64,
    /// Left/right agreement of m at y = 0.
    pub matching: f64,
    /// Largest |r| allowed at the spectral grid ends, relative to max |r|.
    pub reflection_tail: f64,
    /// Minimal distance of an eigenvalue from -i and +-1.
    pub spectrum_exclusion: f64,
    /// Threshold on |alpha + 1| for the degenerate branch at z = 0.
    pub alpha_branch: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cauchy: 1e-8,
            tail: 1e-10,
            solve: 1e-10,
            jump: 1e-6,
            det: 1e-10,
            unitarity: 1e-8,
            symmetry: 1e-6,
            x_dependence: 1e-6,
            circle: 1e-8,
            bound_state: 1e-6,
            matching: 1e-6,
            reflection_tail: 1e-6,
            spectrum_exclusion: 1e-6,
            alpha_branch: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("cauchy", self.cauchy),
            ("tail", self.tail),
            ("solve", self.solve),
            ("jump", self.jump),
            ("det", self.det),
            ("unitarity", self.unitarity),
            ("symmetry", self.symmetry),
            ("x_dependence", self.x_dependence),
            ("circle", self.circle),
            ("bound_state", self.bound_state),
            ("matching", self.matching),
            ("reflection_tail", self.reflection_tail),
            ("spectrum_exclusion", self.spectrum_exclusion),
            ("alpha_branch", self.alpha_branch),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(crate::Error::Invariant(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenSearch {
    /// Samples of a(z) along the lower unit circle before bisection.
    pub arc_samples: usize,
    /// Angular step for the derivative of a along the circle.
    pub derivative_step: f64,
}

impl Default for EigenSearch {
    fn default() -> Self {
        Self {
            arc_samples: 2048,
            derivative_step: 1e-5,
        }
    }
}

/// Discretization shared by the scattering and reconstruction stages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Nodes of the spectral grid (both branches).
    pub spectral_nodes: usize,
    /// Largest |z| on the spectral grid.
    pub zmax: f64,
    /// Nodes of the uniform y-grid; odd so that y = 0 is a node.
    pub y_nodes: usize,
    pub y_max: f64,
    pub eigen: EigenSearch,
    pub tolerances: Tolerances,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            spectral_nodes: 1024,
            zmax: 20.05,
            y_nodes: 257,
            y_max: 30.0,
            eigen: EigenSearch::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl PipelineConfig {
    pub fn spectral_grid(&self) -> crate::Result<crate::spectral_core::SpectralGrid> {
        crate::spectral_core::SpectralGrid::new(self.zmax, self.spectral_nodes)
    }

    /// Uniform y-nodes on `[-y_max, y_max]`.
    pub fn y_grid(&self) -> crate::Result<Vec<f64>> {
        if self.y_nodes < 3 || self.y_nodes.is_multiple_of(2) || !(self.y_max > 0.0) {
            return Err(crate::Error::Grid(format!(
                "y-grid needs an odd node count >= 3 and y_max > 0, got {} and {}",
                self.y_nodes, self.y_max
            )));
        }
        let h = 2.0 * self.y_max / (self.y_nodes - 1) as f64;
        let mid = (self.y_nodes / 2) as f64;
        Ok((0..self.y_nodes).map(|j| (j as f64 - mid) * h).collect())
    }

    pub fn validate(&self) -> crate::Result<()> {
        self.tolerances.validate()?;
        self.spectral_grid()?;
        self.y_grid()?;
        if self.eigen.arc_samples < 8 || !(self.eigen.derivative_step > 0.0) {
            return Err(crate::Error::Invariant(
                "eigen search needs at least 8 arc samples and a positive derivative step".into(),
            ));
        }
        Ok(())
    }
}
