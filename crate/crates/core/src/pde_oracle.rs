//! Pseudospectral method-of-lines integrator for
//! `m_t + (m (u^2 - u_x^2))_x = 0` with `u - u_xx = m`, used to cross-check
//! the inverse-scattering pipeline.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::reconstruction::Profile;
use crate::spectral_core::{
    helmholtz_inverse, spectral_derivative, CoordinateMap, Potential, SpatialGrid,
};
use crate::{Error, Result, C64};

/// Largest admissible Courant number `dt max|u^2 - u_x^2| / h` for RK4 with
/// spectral differentiation (the stability interval on the imaginary axis
/// is `|dt lambda| <= 2.8` and `|lambda| <= pi speed / h`).
pub const MAX_COURANT: f64 = 0.8;
pub const DEFAULT_COURANT: f64 = 0.3;
/// Fraction of flux energy in the discarded top third that triggers a
/// resolution warning.
const ALIASING_WARNING: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PdeState {
    grid: SpatialGrid,
    m_minus_1: Vec<f64>,
    t: f64,
}

impl PdeState {
    /// Rejects data whose ends are not at the background to `tail_tol`.
    pub fn new(p: &Potential, tail_tol: f64) -> Result<Self> {
        p.check_tails(tail_tol)?;
        if p.grid().spacing() > 1.0 {
            return Err(Error::Resolution {
                h: p.grid().spacing(),
            });
        }
        Ok(Self {
            grid: p.grid().clone(),
            m_minus_1: p.values().to_vec(),
            t: 0.0,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.m_minus_1
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn potential(&self) -> Result<Potential> {
        Potential::new(self.grid.clone(), self.m_minus_1.clone())
    }

    /// Periodic rectangle rule for `int (m - 1) dx`, the quantity conserved
    /// exactly by the discretization.
    pub fn mass(&self) -> f64 {
        self.grid.spacing() * self.m_minus_1.iter().sum::<f64>()
    }

    /// Snapshot with `y = x - t - int_x^inf (m - 1)`, `u` and `m_x`.
    pub fn to_profile(&self) -> Result<Profile> {
        let p = self.potential()?;
        let map = CoordinateMap::new(&p)?;
        let h = self.grid.spacing();
        let u: Vec<f64> = helmholtz_inverse(&p)?.iter().map(|v| 1.0 + v).collect();
        let m_x = spectral_derivative(&self.m_minus_1, h);
        Profile::new(
            self.t,
            map.y().iter().map(|y| y - self.t).collect(),
            map.x().to_vec(),
            self.m_minus_1.iter().map(|q| 1.0 + q).collect(),
            u,
            m_x,
        )
    }
}

/// Reusable FFT plans and wavenumbers for one grid.
pub struct PdeSolver {
    n: usize,
    xi: Vec<f64>,
    keep: Vec<bool>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PdeSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PdeSolver").field("n", &self.n).finish()
    }
}

/// Time derivative with diagnostics.
#[derive(Clone, Debug)]
pub struct RhsEvaluation {
    pub dm_dt: Vec<f64>,
    /// `max |u^2 - u_x^2|`.
    pub max_speed: f64,
    /// Energy fraction of the flux spectrum removed by the two-thirds rule.
    pub aliasing: f64,
}

impl PdeSolver {
    pub fn new(grid: &SpatialGrid) -> Self {
        let n = grid.len();
        let h = grid.spacing();
        let l = n as f64 * h;
        let xi: Vec<f64> = (0..n)
            .map(|k| {
                let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                2.0 * std::f64::consts::PI * kk / l
            })
            .collect();
        let limit = 2.0 / 3.0 * std::f64::consts::PI / h;
        let keep = xi.iter().map(|k| k.abs() <= limit).collect();
        let mut planner = FftPlanner::new();
        Self {
            n,
            xi,
            keep,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn forward(&self, v: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    fn inverse(&self, mut spec: Vec<C64>) -> Vec<f64> {
        self.inv.process(&mut spec);
        spec.iter().map(|c| c.re / self.n as f64).collect()
    }

    /// `-(m (u^2 - u_x^2))_x` with the flux de-aliased by the two-thirds rule.
    pub fn rhs(&self, q: &[f64]) -> RhsEvaluation {
        assert_eq!(q.len(), self.n);
        let spec = self.forward(q);
        let v: Vec<C64> = spec.iter().zip(&self.xi).map(|(s, k)| s / (1.0 + k * k)).collect();
        let vx_spec: Vec<C64> = v.iter().zip(&self.xi).map(|(s, k)| s * C64::new(0.0, *k)).collect();
        let u: Vec<f64> = self.inverse(v).iter().map(|w| 1.0 + w).collect();
        let ux = self.inverse(vx_spec);
        let mut max_speed: f64 = 0.0;
        let flux: Vec<f64> = (0..self.n)
            .map(|i| {
                let s = u[i] * u[i] - ux[i] * ux[i];
                max_speed = max_speed.max(s.abs());
                (1.0 + q[i]) * s
            })
            .collect();
        let mut fspec = self.forward(&flux);
        let (mut kept, mut cut) = (0.0, 0.0);
        for (k, s) in fspec.iter_mut().enumerate() {
            if k == 0 {
                continue;
            }
            if self.keep[k] {
                kept += s.norm_sqr();
                *s *= C64::new(0.0, -self.xi[k]);
            } else {
                cut += s.norm_sqr();
                *s = C64::new(0.0, 0.0);
            }
        }
        fspec[0] = C64::new(0.0, 0.0);
        let total = kept + cut;
        RhsEvaluation {
            dm_dt: self.inverse(fspec),
            max_speed,
            aliasing: if total > 0.0 { cut / total } else { 0.0 },
        }
    }
}

pub fn rhs(state: &PdeState) -> Vec<f64> {
    PdeSolver::new(&state.grid).rhs(&state.m_minus_1).dm_dt
}

/// `DEFAULT_COURANT h / max|u^2 - u_x^2|` for the state.
pub fn default_step(state: &PdeState) -> f64 {
    let ev = PdeSolver::new(&state.grid).rhs(&state.m_minus_1);
    DEFAULT_COURANT * state.grid.spacing() / ev.max_speed.max(1e-12)
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub state: PdeState,
    pub steps: usize,
    /// Step actually used, `T / steps`.
    pub dt: f64,
    /// Change of [`PdeState::mass`] over the run.
    pub mass_drift: f64,
    pub min_m: f64,
    pub max_aliasing: f64,
}

/// Classical RK4 from `p0` to time `t_end` with step at most `dt`
/// (`None` selects [`default_step`]).
pub fn run(p0: &Potential, t_end: f64, dt: Option<f64>, tail_tol: f64) -> Result<RunReport> {
    let mut state = PdeState::new(p0, tail_tol)?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::Invariant(format!("final time {t_end} must be nonnegative")));
    }
    let solver = PdeSolver::new(&state.grid);
    let h = state.grid.spacing();
    let first = solver.rhs(&state.m_minus_1);
    let dt = dt.unwrap_or(DEFAULT_COURANT * h / first.max_speed.max(1e-12));
    let bound = MAX_COURANT * h / first.max_speed.max(1e-12);
    if !(dt > 0.0) || dt > bound {
        return Err(Error::Cfl { dt, bound });
    }
    let steps = ((t_end / dt) - 1e-12).ceil().max(0.0) as usize;
    let dt = if steps > 0 { t_end / steps as f64 } else { 0.0 };
    let mass0 = state.mass();
    let mut max_aliasing = first.aliasing;
    let mut min_m = state.m_minus_1.iter().fold(f64::INFINITY, |a, q| a.min(1.0 + q));
    let n = state.m_minus_1.len();
    let axpy = |q: &[f64], k: &[f64], s: f64| -> Vec<f64> { (0..n).map(|i| q[i] + s * k[i]).collect() };
    for step in 0..steps {
        let q = &state.m_minus_1;
        let k1 = solver.rhs(q);
        let k2 = solver.rhs(&axpy(q, &k1.dm_dt, 0.5 * dt));
        let k3 = solver.rhs(&axpy(q, &k2.dm_dt, 0.5 * dt));
        let k4 = solver.rhs(&axpy(q, &k3.dm_dt, dt));
        max_aliasing = max_aliasing
            .max(k1.aliasing)
            .max(k2.aliasing)
            .max(k3.aliasing)
            .max(k4.aliasing);
        let speed = k1.max_speed.max(k4.max_speed).max(1e-12);
        if dt > MAX_COURANT * h / speed {
            return Err(Error::Cfl {
                dt,
                bound: MAX_COURANT * h / speed,
            });
        }
        let next: Vec<f64> = (0..n)
            .map(|i| {
                q[i] + dt / 6.0
                    * (k1.dm_dt[i] + 2.0 * k2.dm_dt[i] + 2.0 * k3.dm_dt[i] + k4.dm_dt[i])
            })
            .collect();
        state.t = (step + 1) as f64 * dt;
        if let Some(i) = next.iter().position(|v| !(1.0 + v > 0.0)) {
            return Err(Error::BlowUp {
                t: state.t,
                x: state.grid.node(i),
            });
        }
        min_m = next.iter().fold(min_m, |a, q| a.min(1.0 + q));
        state.m_minus_1 = next;
    }
    state.t = t_end;
    if max_aliasing > ALIASING_WARNING {
        log::warn!("flux aliasing fraction {max_aliasing:.2e}; the grid may be under-resolved");
    }
    Ok(RunReport {
        mass_drift: state.mass() - mass0,
        state,
        steps,
        dt,
        min_m,
        max_aliasing,
    })
}
