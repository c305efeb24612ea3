use rayon::prelude::*;

use super::JostSolver;
use crate::spectral_core::SpectralGrid;
use crate::{Error, Result, Tolerances, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringSample {
    pub z: f64,
    pub a: C64,
    pub b: C64,
    pub r: C64,
    pub r_tilde: C64,
}

impl ScatteringSample {
    pub fn background(z: f64) -> Self {
        let zero = C64::new(0.0, 0.0);
        Self {
            z,
            a: C64::new(1.0, 0.0),
            b: zero,
            r: zero,
            r_tilde: zero,
        }
    }
}

/// Samples on a spectral grid with their consistency residuals.
#[derive(Clone, Debug)]
pub struct ReflectionReport {
    pub samples: Vec<ScatteringSample>,
    /// `max | |a|^2 - |b|^2 - 1 |`.
    pub unitarity: f64,
    /// `max |r(z) - conj r(1/z)|`.
    pub reciprocal_symmetry: f64,
    /// `max |r(z) + conj r(-z)|`.
    pub negation_symmetry: f64,
    /// `max(|r(z) + 1|, |r(-z) - 1|)` at the nodes nearest `z = 1`, `z = -1`.
    pub generic_limit: f64,
}

impl ReflectionReport {
    pub fn symmetry(&self) -> f64 {
        self.reciprocal_symmetry.max(self.negation_symmetry)
    }

    pub fn r(&self) -> Vec<C64> {
        self.samples.iter().map(|s| s.r).collect()
    }

    pub fn r_tilde(&self) -> Vec<C64> {
        self.samples.iter().map(|s| s.r_tilde).collect()
    }
}

/// `(a, b)` from one node of a Jost pair: `a = det(mu1+, mu2-)`,
/// `b = e^{2p} det(mu2+, mu2-)`.
fn coefficients_at(solver: &JostSolver, pair: &super::JostPair, i: usize) -> (C64, C64) {
    let p = pair.mu_plus[i];
    let m = pair.mu_minus[i];
    let a = p.at(0, 0) * m.at(1, 1) - p.at(1, 0) * m.at(0, 1);
    let det2 = p.at(0, 1) * m.at(1, 1) - p.at(1, 1) * m.at(0, 1);
    let b = (2.0 * solver.phase(pair.z, i)).exp() * det2;
    (a, b)
}

impl JostSolver {
    fn probe_nodes(&self) -> [usize; 3] {
        let n = self.grid().len();
        [n / 2, n / 3, 2 * n / 3]
    }

    /// `a(z)` at any admissible complex point, evaluated at the middle node.
    pub fn a_at(&self, z: C64) -> Result<C64> {
        let pair = self.solve(z)?;
        Ok(coefficients_at(self, &pair, self.grid().len() / 2).0)
    }

    /// `a`, `b` at three nodes; returns the middle-node values and the spread.
    pub fn coefficients(&self, z: C64) -> Result<(C64, C64, f64)> {
        let pair = self.solve(z)?;
        let nodes = self.probe_nodes();
        let (a0, b0) = coefficients_at(self, &pair, nodes[0]);
        let spread = nodes[1..]
            .iter()
            .map(|&i| {
                let (a, b) = coefficients_at(self, &pair, i);
                (a - a0).norm().max((b - b0).norm())
            })
            .fold(0.0, f64::max);
        Ok((a0, b0, spread))
    }

    pub fn scattering_at(&self, z: f64, tol: &Tolerances) -> Result<ScatteringSample> {
        let (a, b, spread) = self.coefficients(C64::new(z, 0.0))?;
        if spread > tol.x_dependence {
            return Err(Error::IntegrationQuality { z, spread });
        }
        Ok(ScatteringSample {
            z,
            a,
            b,
            r: b / a,
            r_tilde: b / a.conj(),
        })
    }

    /// Parallel over the nodes; results are in node order.
    pub fn reflection_on_grid(
        &self,
        grid: &SpectralGrid,
        tol: &Tolerances,
    ) -> Result<ReflectionReport> {
        let samples = grid
            .nodes()
            .par_iter()
            .map(|&z| self.scattering_at(z, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(report(grid, samples))
    }
}

pub(crate) fn report(grid: &SpectralGrid, samples: Vec<ScatteringSample>) -> ReflectionReport {
    let n = samples.len();
    let unitarity = samples
        .iter()
        .map(|s| (s.a.norm_sqr() - s.b.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut reciprocal_symmetry = 0.0f64;
    let mut negation_symmetry = 0.0f64;
    for i in 0..n {
        let r = samples[i].r;
        reciprocal_symmetry =
            reciprocal_symmetry.max((r - samples[grid.reciprocal_index(i)].r.conj()).norm());
        negation_symmetry =
            negation_symmetry.max((r + samples[grid.negation_index(i)].r.conj()).norm());
    }
    let nearest = |target: f64| {
        (0..n)
            .min_by(|&i, &j| {
                let d = |k: usize| (samples[k].z - target).abs();
                d(i).total_cmp(&d(j))
            })
            .unwrap()
    };
    let generic_limit = (samples[nearest(1.0)].r + 1.0)
        .norm()
        .max((samples[nearest(-1.0)].r - 1.0).norm());
    ReflectionReport {
        samples,
        unitarity,
        reciprocal_symmetry,
        negation_symmetry,
        generic_limit,
    }
}
