//! Recovery of `m`, `u`, `m_x` and `x(y)` from the Riemann-Hilbert
//! solutions, and the end-to-end Cauchy-problem solve.

mod profile;

pub use profile::{Deviation, Profile, ProfileChecks, PROFILE_HEADER};

use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::direct_scattering::scatter;
use crate::rh_solver::{BealsCoifmanSystem, Functionals, Plane, Side};
use crate::scattering_data::ScatteringData;
use crate::spectral_core::{CauchyOps, Potential};
use crate::{Error, Mat2, Result, Tolerances, C64, I};

/// Imaginary parts of `m`, `u`, `m_x` above this flag a failed solve.
const IMAGINARY_LIMIT: f64 = 1e-6;

/// Reconstructed fields at one value of `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointValues {
    pub y: f64,
    pub x: f64,
    pub m: f64,
    pub u: f64,
    pub m_x: f64,
    /// `lim z M_12` of the unregularized problem; `m = 1/(1 - eta)`.
    pub eta: f64,
    /// `b_+` (left) or `b_-` (right) from the k-plane problem.
    pub b: C64,
    /// `alpha` of `M^{(1)}(0)`.
    pub alpha: f64,
    pub side: Side,
}

/// Unregularized `M_l(z) = L(z)^{-1} (I - sigma1 M(0)^{-1} / z) M^{(1)}(z)` at
/// `z = i` and its derivative there, with `L(z)^{-1} = z (z + sigma1)/(z^2 - 1)`.
fn unregularized_at_i(f: &Functionals, b: &Mat2) -> (Mat2, Mat2) {
    let z = I;
    let s1 = Mat2::sigma1();
    let id = Mat2::identity();
    let zz = z * z - 1.0;
    let l_inv = (id * z + s1) * (z / zz);
    let dl_inv = ((id * (2.0 * z) + s1) * zz - (id * z + s1) * (2.0 * z * z)) * (1.0 / (zz * zz));
    let r = id - s1 * *b * (1.0 / z);
    let dr = s1 * *b * (1.0 / (z * z));
    let ml = l_inv * r * f.at_i;
    let dml = dl_inv * r * f.at_i + l_inv * dr * f.at_i + l_inv * r * f.deriv_at_i;
    (ml, dml)
}

fn real_part(v: C64, what: &str, y: f64) -> Result<f64> {
    if !v.is_finite() || v.im.abs() > IMAGINARY_LIMIT * v.re.abs().max(1.0) {
        return Err(Error::Singular {
            y,
            detail: format!("{what} = {v} is not real"),
        });
    }
    Ok(v.re)
}

/// Per-record state for repeated reconstructions: Cauchy operators and the
/// coordinate shift between the right and left problems.
#[derive(Debug)]
pub struct Reconstructor {
    sd: ScatteringData,
    ops: CauchyOps,
    tol: Tolerances,
    /// `2 log(M_l11(i; 0) / M_r11(i; 0))`, the total mass `int (m - 1) dx`.
    shift: f64,
}

/// z-plane part of a reconstruction.
struct ZPlane {
    m: f64,
    u: f64,
    eta: f64,
    alpha: f64,
    log_alpha1: C64,
}

impl Reconstructor {
    pub fn new(sd: &ScatteringData, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let ops = CauchyOps::new(sd.grid());
        let mut this = Self {
            sd: sd.clone(),
            ops,
            tol: tol.clone(),
            shift: 0.0,
        };
        let left = this.z_plane(0.0, Side::Left)?;
        let right = this.z_plane(0.0, Side::Right)?;
        this.shift = real_part(2.0 * (left.log_alpha1 - right.log_alpha1), "mass shift", 0.0)?;
        Ok(this)
    }

    pub fn data(&self) -> &ScatteringData {
        &self.sd
    }

    /// Total mass `int (m - 1) dx` recovered from the two problems at `y = 0`.
    pub fn mass(&self) -> f64 {
        self.shift
    }

    fn z_plane(&self, y: f64, side: Side) -> Result<ZPlane> {
        let sys = BealsCoifmanSystem::assemble(&self.sd, y, side, Plane::Z, &self.ops, &self.tol)?;
        let sol = sys.solve(&self.tol)?;
        let f = sol.functionals();
        let b = f.at_zero.inverse().ok_or_else(|| Error::Singular {
            y,
            detail: "M(0) is not invertible".into(),
        })?;
        let alpha = real_part(f.alpha(), "alpha", y)?;
        if (alpha + 1.0).abs() < self.tol.alpha_branch {
            log::debug!("alpha = -1 branch at y = {y}; M(0) inverted directly");
        }
        let s1 = Mat2::sigma1();
        let eta = f.infinity.at(0, 1) + (s1 * (Mat2::identity() - b)).at(0, 1);
        let eta = real_part(eta, "eta", y)?;
        let m = 1.0 / (1.0 - eta);
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Singular {
                y,
                detail: format!("m = {m} is not positive"),
            });
        }
        let (ml, dml) = unregularized_at_i(&f, &b);
        let alpha1 = ml.at(0, 0);
        if alpha1.norm() < 1e-300 || !alpha1.is_finite() {
            return Err(Error::Singular {
                y,
                detail: "M_11(i) vanishes".into(),
            });
        }
        let u = real_part(
            1.0 - ml.at(0, 0) * dml.at(0, 1) - ml.at(1, 1) * dml.at(1, 0),
            "u",
            y,
        )?;
        Ok(ZPlane {
            m,
            u,
            eta,
            alpha,
            log_alpha1: alpha1.ln(),
        })
    }

    /// `m_x` and `b_+-` from the k-plane problem.
    fn k_plane(&self, y: f64, side: Side, eta: f64, m: f64) -> Result<(f64, C64)> {
        let sys = BealsCoifmanSystem::assemble(&self.sd, y, side, Plane::K, &self.ops, &self.tol)?;
        let n = sys.solve(&self.tol)?.infinity_coefficient();
        let c = eta - 2.0;
        let k0 = c * n.at(0, 0) + n.at(1, 0);
        let k1 = c * n.at(0, 1) + n.at(1, 1);
        let m_x = (-k0 - c * k1) * m.powi(3) / (2.0 * I);
        Ok((real_part(m_x, "m_x", y)?, k1))
    }

    pub fn at_side(&self, y: f64, side: Side) -> Result<PointValues> {
        let z = self.z_plane(y, side)?;
        let (m_x, b) = self.k_plane(y, side, z.eta, z.m)?;
        let mut x = y + self.sd.t() + 2.0 * z.log_alpha1.re;
        if side == Side::Right {
            x += self.shift;
        }
        Ok(PointValues {
            y,
            x,
            m: z.m,
            u: z.u,
            m_x,
            eta: z.eta,
            b,
            alpha: z.alpha,
            side,
        })
    }

    /// Left problem for `y >= 0`, right problem for `y < 0`.
    pub fn at(&self, y: f64) -> Result<PointValues> {
        self.at_side(y, if y >= 0.0 { Side::Left } else { Side::Right })
    }

    /// Left/right values at `y = 0` after checking they agree.
    pub fn matched_origin(&self) -> Result<(PointValues, PointValues)> {
        let l = self.at_side(0.0, Side::Left)?;
        let r = self.at_side(0.0, Side::Right)?;
        let gap = (l.m - r.m).abs();
        if gap > self.tol.matching {
            return Err(Error::Consistency(gap));
        }
        Ok((l, r))
    }

    /// Pointwise reconstruction over `ygrid`, which must be increasing and
    /// contain `0`.
    pub fn profile(&self, ygrid: &[f64]) -> Result<Profile> {
        if !ygrid.windows(2).all(|w| w[0] < w[1]) || !ygrid.contains(&0.0) {
            return Err(Error::Grid(
                "y-grid must be strictly increasing and contain 0".into(),
            ));
        }
        self.matched_origin()?;
        let pts = ygrid
            .par_iter()
            .map(|&y| self.at(y))
            .collect::<Result<Vec<_>>>()?;
        Profile::from_points(self.sd.t(), &pts)
    }
}

pub fn reconstruct_at(sd: &ScatteringData, y: f64, tol: &Tolerances) -> Result<PointValues> {
    Reconstructor::new(sd, tol)?.at(y)
}

pub fn reconstruct_profile(sd: &ScatteringData, ygrid: &[f64], tol: &Tolerances) -> Result<Profile> {
    Reconstructor::new(sd, tol)?.profile(ygrid)
}

/// Direct scattering at `t = 0`, evolution to each time and reconstruction.
pub fn solve_cauchy(p0: &Potential, times: &[f64], config: &PipelineConfig) -> Result<Vec<Profile>> {
    config.validate()?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || !times.windows(2).all(|w| w[0] <= w[1]) {
        return Err(Error::Invariant("times must be nonnegative and ascending".into()));
    }
    let tol = &config.tolerances;
    let grid = config.spectral_grid()?;
    let sd = scatter(p0, &grid, &config.eigen, tol)
        .map_err(|e| e.at_stage("direct scattering"))?
        .data;
    let ygrid = config.y_grid()?;
    times
        .iter()
        .map(|&t| {
            let evolved = sd.evolve(t).map_err(|e| e.at_stage(format!("evolution to t = {t}")))?;
            Reconstructor::new(&evolved, tol)
                .and_then(|r| r.profile(&ygrid))
                .map_err(|e| e.at_stage(format!("reconstruction at t = {t}")))
        })
        .collect()
}
