use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::{DiscreteSpectrum, JostSolver};
use crate::config::EigenSearch;
use crate::{Error, Result, Tolerances, C64, I};

/// Outcome of the eigenvalue search on the fourth-quadrant arc.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    /// Argument-principle count of zeros of `a` in an annular sector around
    /// the searched arc.
    pub winding: i64,
    /// Roots isolated by sign changes of `a` along the arc.
    pub isolated: usize,
    /// Evaluations of `a` spent on the winding contour.
    pub contour_evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundStateDiagnostics {
    pub z: C64,
    /// Proportionality factor before discarding its imaginary part.
    pub b: C64,
    /// Relative least-squares residual of `mu1+ = b e^{2p} mu2-`.
    pub residual: f64,
    pub a_prime: C64,
}

const CONTOUR_WIDTH: f64 = 0.1;
const CONTOUR_SEGMENTS: usize = 64;
const MAX_PHASE_STEP: f64 = 0.5;
const MAX_DEPTH: usize = 40;

fn on_arc(phi: f64) -> C64 {
    C64::from_polar(1.0, -phi)
}

impl JostSolver {
    /// `a` on the lower unit circle is real; its sign changes bracket the zeros.
    fn a_on_arc(&self, phi: f64) -> Result<f64> {
        Ok(self.a_at(on_arc(phi))?.re)
    }

    /// Zeros of `a` on the lower unit circle, fourth-quadrant roots first in
    /// increasing angle, followed by their reflections `-conj z`.
    pub fn find_eigenvalues(
        &self,
        search: &EigenSearch,
        tol: &Tolerances,
    ) -> Result<(Vec<C64>, SearchReport)> {
        let n = search.arc_samples.max(8) / 2 * 2;
        let step = PI / n as f64;
        let phis: Vec<f64> = (0..n / 2).map(|k| (k as f64 + 0.5) * step).collect();
        let values = phis
            .par_iter()
            .map(|&phi| self.a_on_arc(phi))
            .collect::<Result<Vec<_>>>()?;

        let a_minus_i = self.a_at(-I)?.re;
        if a_minus_i * values[values.len() - 1] < 0.0 {
            return Err(Error::IllConditioned(
                "zero of a between the last arc sample and -i".into(),
            ));
        }

        let brackets: Vec<(f64, f64, f64)> = (0..phis.len() - 1)
            .filter(|&k| values[k] * values[k + 1] < 0.0 || values[k + 1] == 0.0)
            .map(|k| (phis[k], phis[k + 1], values[k]))
            .collect();
        let roots = brackets
            .par_iter()
            .map(|&(lo, hi, f_lo)| self.isolate(lo, hi, f_lo, tol))
            .collect::<Result<Vec<_>>>()?;

        let (winding, contour_evaluations) = self.winding_count(phis[0], FRAC_PI_2 - phis[0])?;
        if winding != roots.len() as i64 {
            return Err(Error::Search(format!(
                "winding number {winding} but {} roots isolated on the arc",
                roots.len()
            )));
        }
        let report = SearchReport {
            winding,
            isolated: roots.len(),
            contour_evaluations,
        };
        let mut all = roots.clone();
        all.extend(roots.iter().map(|z| -z.conj()));
        Ok((all, report))
    }

    fn isolate(&self, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: &Tolerances) -> Result<C64> {
        for _ in 0..64 {
            if hi - lo < 1e-14 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let f = self.a_on_arc(mid)?;
            if f == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if f * f_lo < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f;
            }
        }
        let z = self.polish(on_arc(0.5 * (lo + hi)))?;
        if (z.norm() - 1.0).abs() > tol.circle {
            return Err(Error::Search(format!(
                "secant iteration left the unit circle: |z| - 1 = {:.3e}",
                z.norm() - 1.0
            )));
        }
        for (point, name) in [(-I, "-i"), (C64::new(1.0, 0.0), "1")] {
            if (z - point).norm() < tol.spectrum_exclusion {
                return Err(Error::IllConditioned(format!(
                    "eigenvalue {z} within {:.1e} of {name}",
                    tol.spectrum_exclusion
                )));
            }
        }
        Ok(z)
    }

    /// Secant iteration on the analytic continuation of `a`.
    fn polish(&self, z0: C64) -> Result<C64> {
        let mut z_prev = z0 * C64::from_polar(1.0, -1e-9);
        let mut a_prev = self.a_at(z_prev)?;
        let mut z = z0;
        let mut a = self.a_at(z)?;
        for _ in 0..30 {
            let denom = a - a_prev;
            if a.norm() == 0.0 || denom.norm() == 0.0 {
                break;
            }
            let dz = -a * (z - z_prev) / denom;
            z_prev = z;
            a_prev = a;
            z += dz;
            a = self.a_at(z)?;
            if dz.norm() < 1e-15 {
                break;
            }
        }
        Ok(z)
    }

    /// Zeros of `a` inside `{r e^{-i phi}: 1-w < r < 1+w, lo < phi < hi}` by
    /// the argument principle, with adaptive refinement of each edge.
    pub fn winding_count(&self, lo: f64, hi: f64) -> Result<(i64, usize)> {
        let (r_in, r_out) = (1.0 - CONTOUR_WIDTH, 1.0 + CONTOUR_WIDTH);
        // Edges as parametrized curves on [0, 1].
        let edge = |e: usize, s: f64| -> C64 {
            match e {
                0 => C64::from_polar(r_in + s * (r_out - r_in), -lo),
                1 => C64::from_polar(r_out, -(lo + s * (hi - lo))),
                2 => C64::from_polar(r_out - s * (r_out - r_in), -hi),
                _ => C64::from_polar(r_in, -(hi - s * (hi - lo))),
            }
        };
        let pieces: Vec<(usize, f64, f64)> = (0..4)
            .flat_map(|e| {
                (0..CONTOUR_SEGMENTS).map(move |j| {
                    let s0 = j as f64 / CONTOUR_SEGMENTS as f64;
                    (e, s0, s0 + 1.0 / CONTOUR_SEGMENTS as f64)
                })
            })
            .collect();
        let parts = pieces
            .par_iter()
            .map(|&(e, s0, s1)| {
                let f = |s: f64| self.a_at(edge(e, s));
                let (a0, a1) = (f(s0)?, f(s1)?);
                let mut count = 2;
                let dphase = phase_change(&f, s0, s1, a0, a1, 0, &mut count)?;
                Ok((dphase, count))
            })
            .collect::<Result<Vec<(f64, usize)>>>()?;
        let total: f64 = parts.iter().map(|p| p.0).sum();
        let evaluations = parts.iter().map(|p| p.1).sum();
        // The contour runs clockwise in the z-plane.
        Ok(((-total / (2.0 * PI)).round() as i64, evaluations))
    }

    /// `b_j`, `a'(z_j)`, `c_j`, `c~_j` for each eigenvalue.
    pub fn norming_constants(
        &self,
        eigenvalues: &[C64],
        search: &EigenSearch,
        tol: &Tolerances,
    ) -> Result<(DiscreteSpectrum, Vec<BoundStateDiagnostics>)> {
        let diag = eigenvalues
            .par_iter()
            .map(|&z| self.bound_state(z, search, tol))
            .collect::<Result<Vec<_>>>()?;
        let spectrum = DiscreteSpectrum {
            eigenvalues: eigenvalues.to_vec(),
            b_constants: diag.iter().map(|d| d.b.re).collect(),
            c: diag.iter().map(|d| 1.0 / (d.b.re * d.a_prime)).collect(),
            c_tilde: diag.iter().map(|d| d.b.re / d.a_prime).collect(),
        };
        Ok((spectrum, diag))
    }

    fn bound_state(
        &self,
        z: C64,
        search: &EigenSearch,
        tol: &Tolerances,
    ) -> Result<BoundStateDiagnostics> {
        let pair = self.solve(z)?;
        let n = self.grid().len();
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        let mut norm_u = 0.0;
        let samples: Vec<([C64; 2], [C64; 2])> = (n / 4..3 * n / 4)
            .map(|i| {
                let u = pair.mu_plus[i].col(0);
                let e = (2.0 * self.phase(z, i)).exp();
                let v = pair.mu_minus[i].col(1);
                (u, [v[0] * e, v[1] * e])
            })
            .collect();
        for (u, v) in &samples {
            for c in 0..2 {
                num += v[c].conj() * u[c];
                den += v[c].norm_sqr();
                norm_u += u[c].norm_sqr();
            }
        }
        let b = num / den;
        let misfit: f64 = samples
            .iter()
            .map(|(u, v)| (u[0] - b * v[0]).norm_sqr() + (u[1] - b * v[1]).norm_sqr())
            .sum();
        let residual = (misfit / norm_u).sqrt();
        if residual > tol.bound_state {
            return Err(Error::BoundState { z, residual });
        }
        Ok(BoundStateDiagnostics {
            z,
            b,
            residual,
            a_prime: self.derivative_along_circle(z, search.derivative_step)?,
        })
    }

    /// `a'(z)` from centered differences along the circle through `z`,
    /// Richardson-extrapolated.
    pub fn derivative_along_circle(&self, z: C64, d: f64) -> Result<C64> {
        let centered = |d: f64| -> Result<C64> {
            let fwd = self.a_at(z * C64::from_polar(1.0, -d))?;
            let bwd = self.a_at(z * C64::from_polar(1.0, d))?;
            Ok((fwd - bwd) / (2.0 * d) / (-I * z))
        };
        Ok((4.0 * centered(0.5 * d)? - centered(d)?) / 3.0)
    }
}

fn phase_change(
    f: &dyn Fn(f64) -> Result<C64>,
    s0: f64,
    s1: f64,
    a0: C64,
    a1: C64,
    depth: usize,
    count: &mut usize,
) -> Result<f64> {
    let d = (a1 / a0).arg();
    if d.abs() < MAX_PHASE_STEP || depth >= MAX_DEPTH {
        return Ok(d);
    }
    let sm = 0.5 * (s0 + s1);
    let am = f(sm)?;
    *count += 1;
    Ok(phase_change(f, s0, sm, a0, am, depth + 1, count)?
        + phase_change(f, sm, s1, am, a1, depth + 1, count)?)
}
