use crate::spectral_core::{midpoint_samples, y_of_x, Potential, SpatialGrid};
use crate::{Error, Mat2, Result, C64, I};

/// Jost solutions `mu+` (normalized at `x_max`) and `mu-` (normalized at
/// `x_min`) on every node of the spatial grid.
#[derive(Clone, Debug)]
pub struct JostPair {
    pub z: C64,
    pub mu_plus: Vec<Mat2>,
    pub mu_minus: Vec<Mat2>,
}

/// Integrates `mu_x = -(ik/4) m [sigma3, mu] + P mu` for a fixed potential.
///
/// Each cell is advanced with a fourth-order Magnus step on the trace-free
/// part of the column equations, using band-limited midpoint values of `m`;
/// the scalar part `+-(ik/4) int m` is applied exactly, so `det mu = 1` up to
/// rounding.
#[derive(Clone, Debug)]
pub struct JostSolver {
    grid: SpatialGrid,
    q: Vec<f64>,
    q_mid: Vec<f64>,
    cell_mass: Vec<f64>,
    y: Vec<f64>,
}

/// Points closer than this to `0` or `+-1` are rejected.
const EXCLUSION_RADIUS: f64 = 1e-10;

impl JostSolver {
    pub fn new(p: &Potential) -> Result<Self> {
        let grid = p.grid().clone();
        let h = grid.spacing();
        let q = p.values().to_vec();
        let q_mid = midpoint_samples(&q);
        let cell_mass = (0..q.len() - 1)
            .map(|i| h / 6.0 * ((1.0 + q[i]) + 4.0 * (1.0 + q_mid[i]) + (1.0 + q[i + 1])))
            .collect();
        let y = y_of_x(p)?;
        Ok(Self {
            grid,
            q,
            q_mid,
            cell_mass,
            y,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// `y(x)` on the nodes.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn check_point(z: C64) -> Result<()> {
        let bad = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
        if !z.is_finite() || bad.iter().any(|b| (z - b).norm() < EXCLUSION_RADIUS) {
            return Err(Error::Domain(z));
        }
        Ok(())
    }

    /// `p(x) = (ik/4) y(x)` at node `i`.
    pub fn phase(&self, z: C64, i: usize) -> C64 {
        let k = z - 1.0 / z;
        I * k * 0.25 * self.y[i]
    }

    fn coefficient(k: C64, lam: C64, q: f64) -> Mat2 {
        let p = q / (I * k);
        let d = -I * k * (1.0 + q) * 0.25 + p;
        Mat2::new(d, lam * p, -lam * p, -d)
    }

    /// Trace-free propagator and scalar phase `(ik/4) int m` of every cell.
    fn cells(&self, z: C64) -> Vec<(Mat2, C64)> {
        let h = self.grid.spacing();
        let k = z - 1.0 / z;
        let lam = -(z + 1.0 / z) * 0.5;
        let n = self.q.len();
        let mut g_left = Self::coefficient(k, lam, self.q[0]);
        (0..n - 1)
            .map(|i| {
                let g_mid = Self::coefficient(k, lam, self.q_mid[i]);
                let g_right = Self::coefficient(k, lam, self.q[i + 1]);
                let b0 = (g_left + g_mid * 4.0 + g_right) * (h / 6.0);
                let b1 = (g_right - g_left) * (h / 12.0);
                let omega = b0 + b1.commutator(&b0);
                g_left = g_right;
                (omega.exp_traceless(), I * k * 0.25 * self.cell_mass[i])
            })
            .collect()
    }

    pub fn solve(&self, z: C64) -> Result<JostPair> {
        Self::check_point(z)?;
        let cells = self.cells(z);
        let n = self.q.len();
        let mut mu_minus = vec![Mat2::identity(); n];
        for i in 1..n {
            let (prop, s) = cells[i - 1];
            let v = prop * mu_minus[i - 1];
            mu_minus[i] = scale_columns(v, s.exp(), (-s).exp());
        }
        let mut mu_plus = vec![Mat2::identity(); n];
        for i in (0..n - 1).rev() {
            let (prop, s) = cells[i];
            let v = prop.adjugate() * mu_plus[i + 1];
            mu_plus[i] = scale_columns(v, (-s).exp(), s.exp());
        }
        for (i, (p, m)) in mu_plus.iter().zip(&mu_minus).enumerate() {
            if !(p.is_finite() && m.is_finite()) {
                return Err(Error::Integration {
                    z,
                    detail: format!("non-finite solution at x = {}", self.grid.node(i)),
                });
            }
        }
        Ok(JostPair {
            z,
            mu_plus,
            mu_minus,
        })
    }
}

fn scale_columns(m: Mat2, c0: C64, c1: C64) -> Mat2 {
    let [[a, b], [c, d]] = m.0;
    Mat2::new(a * c0, b * c1, c * c0, d * c1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn background_gives_identity() {
        let g = SpatialGrid::new(-10.0, 10.0, 64).unwrap();
        let s = JostSolver::new(&Potential::background(g)).unwrap();
        let j = s.solve(C64::new(2.0, 0.0)).unwrap();
        for (p, m) in j.mu_plus.iter().zip(&j.mu_minus) {
            assert!((*p - Mat2::identity()).max_abs() < 1e-14);
            assert!((*m - Mat2::identity()).max_abs() < 1e-14);
        }
    }

    #[test]
    fn excluded_points() {
        let g = SpatialGrid::new(-10.0, 10.0, 64).unwrap();
        let s = JostSolver::new(&Potential::background(g)).unwrap();
        for z in [0.0, 1.0, -1.0] {
            assert!(matches!(s.solve(C64::new(z, 0.0)), Err(Error::Domain(_))));
        }
    }
}
