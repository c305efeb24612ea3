use super::{BealsCoifmanSystem, Plane, Side};
use crate::linalg::{gmres, norm, GmresOptions};
use crate::{Error, Mat2, Result, Tolerances, C64, I};

/// Condition estimates above this are reported as near-singular.
const ILL_POSED: f64 = 1e12;

/// Values of `M^{(1)}` used by the reconstruction formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Functionals {
    pub at_i: Mat2,
    pub deriv_at_i: Mat2,
    /// `[[alpha, i beta], [-i beta, alpha]]` with `alpha^2 - beta^2 = 1`.
    pub at_zero: Mat2,
    /// `lim z (M(z) - I)` as `z -> inf`.
    pub infinity: Mat2,
}

impl Functionals {
    pub fn alpha(&self) -> C64 {
        self.at_zero.at(0, 0)
    }

    pub fn beta(&self) -> C64 {
        -I * self.at_zero.at(0, 1)
    }

    /// Deviation of `M(0)` from the two-parameter form and of
    /// `alpha^2 - beta^2` from one.
    pub fn zero_structure_residual(&self) -> f64 {
        let m = self.at_zero;
        let (a, b) = (self.alpha(), self.beta());
        [
            (m.at(1, 1) - a).norm(),
            (m.at(1, 0) + I * b).norm(),
            (a * a - b * b - 1.0).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct RhpSolution<'a> {
    pub system: BealsCoifmanSystem<'a>,
    rows: [Vec<C64>; 2],
    pub iterations: usize,
    /// Largest relative residual `||b - (I - K) x|| / ||b||` of the two rows.
    pub residual: f64,
    pub condition_estimate: f64,
}

impl<'a> BealsCoifmanSystem<'a> {
    pub fn solve(self, tol: &Tolerances) -> Result<RhpSolution<'a>> {
        let opts = GmresOptions {
            tol: (tol.solve * 1e-3).max(1e-15),
            restart: 200,
            max_iter: 3000,
        };
        let mut rows: [Vec<C64>; 2] = [Vec::new(), Vec::new()];
        let mut iterations = 0;
        let mut residual: f64 = 0.0;
        let mut condition: f64 = 0.0;
        for (row, slot) in rows.iter_mut().enumerate() {
            let b = self.rhs(row);
            let out = gmres(|x| self.apply(x), &b, opts);
            let ax = self.apply(&out.x);
            let r: Vec<C64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let rel = norm(&r) / norm(&b);
            iterations += out.iterations;
            residual = residual.max(if rel.is_finite() { rel } else { f64::INFINITY });
            condition = condition.max(out.condition_estimate);
            *slot = out.x;
        }
        if condition > ILL_POSED {
            log::warn!(
                "Beals-Coifman operator near-singular at y = {} (condition estimate {condition:.2e})",
                self.y
            );
        }
        if !(residual <= tol.solve) {
            return Err(Error::Solve {
                y: self.y,
                residual,
                iterations,
                condition,
            });
        }
        Ok(RhpSolution {
            system: self,
            rows,
            iterations,
            residual,
            condition_estimate: condition,
        })
    }
}

impl RhpSolution<'_> {
    /// The Beals-Coifman density (boundary values of the solved columns) at
    /// the collocation nodes.
    pub fn density(&self) -> Vec<Mat2> {
        let n = self.system.nodes.len();
        (0..n)
            .map(|i| {
                Mat2::from_rows(
                    [self.rows[0][i], self.rows[0][n + i]],
                    [self.rows[1][i], self.rows[1][n + i]],
                )
            })
            .collect()
    }

    /// For each pole, both rows of `M_other(at)`.
    pub fn pole_values(&self) -> Vec<[C64; 2]> {
        let off = 2 * self.system.nodes.len();
        (0..self.system.poles.len())
            .map(|q| [self.rows[0][off + q], self.rows[1][off + q]])
            .collect()
    }

    pub fn eval_with_derivative(&self, w: C64) -> (Mat2, Mat2) {
        let (v0, d0) = self.system.row_at(&self.rows[0], 0, w);
        let (v1, d1) = self.system.row_at(&self.rows[1], 1, w);
        (Mat2::from_rows(v0, v1), Mat2::from_rows(d0, d1))
    }

    pub fn eval(&self, w: C64) -> Mat2 {
        self.eval_with_derivative(w).0
    }

    /// `M(0)`, approached along the imaginary axis; z-plane only.
    pub fn at_zero(&self) -> Mat2 {
        assert_eq!(self.system.plane, Plane::Z, "M(0) is a z-plane functional");
        Mat2::from_rows(
            self.system.row_at_zero(&self.rows[0], 0),
            self.system.row_at_zero(&self.rows[1], 1),
        )
    }

    pub fn infinity_coefficient(&self) -> Mat2 {
        Mat2::from_rows(
            self.system.row_at_infinity(&self.rows[0]),
            self.system.row_at_infinity(&self.rows[1]),
        )
    }

    pub fn functionals(&self) -> Functionals {
        let (at_i, deriv_at_i) = self.eval_with_derivative(I);
        Functionals {
            at_i,
            deriv_at_i,
            at_zero: self.at_zero(),
            infinity: self.infinity_coefficient(),
        }
    }

    /// `max |M_+ - M_- V|` over the nodes.
    pub fn jump_residual(&self) -> f64 {
        let sys = &self.system;
        let left_form = sys.projections[0] == crate::spectral_core::Projection::Minus;
        let mut worst: f64 = 0.0;
        for row in 0..2 {
            let [plus, minus] = sys.boundary_rows(&self.rows[row], row);
            for i in 0..sys.nodes.len() {
                let (rho, ell) = (sys.rho[i], sys.ell[i]);
                let v = if left_form {
                    Mat2::new(1.0 + rho * ell, rho, ell, C64::new(1.0, 0.0))
                } else {
                    Mat2::new(C64::new(1.0, 0.0), rho, ell, 1.0 + rho * ell)
                };
                let m = minus[i];
                let jumped = [
                    m[0] * v.at(0, 0) + m[1] * v.at(1, 0),
                    m[0] * v.at(0, 1) + m[1] * v.at(1, 1),
                ];
                worst = worst
                    .max((plus[i][0] - jumped[0]).norm())
                    .max((plus[i][1] - jumped[1]).norm());
            }
        }
        worst
    }

    /// `max |M(w) - sigma1 conj(M(conj w)) sigma1|` over `points`; z-plane only.
    pub fn symmetry_residual(&self, points: &[C64]) -> f64 {
        let s1 = Mat2::sigma1();
        points
            .iter()
            .map(|&w| (self.eval(w) - s1 * self.eval(w.conj()).conj() * s1).max_abs())
            .fold(0.0, f64::max)
    }

    pub fn side(&self) -> Side {
        self.system.side
    }
}
