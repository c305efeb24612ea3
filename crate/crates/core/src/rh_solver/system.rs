use crate::scattering_data::ScatteringData;
use crate::spectral_core::{CauchyOps, KLineCauchy, Projection};
use crate::{Error, Result, Tolerances, C64, I};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Normalized at `x -> +inf`, used for `y >= 0`.
    Left,
    /// Normalized at `x -> -inf`, used for `y <= 0`.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    Z,
    K,
}

/// A simple pole of column `column` of `M` at `at`, with residue
/// `coef * M_other(at)` where `other = 1 - column`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole {
    pub at: C64,
    pub column: usize,
    pub coef: C64,
}

/// `theta(z) = -(i/4)(z - 1/z) y`.
pub fn theta(z: C64, y: f64) -> C64 {
    -0.25 * I * (z - 1.0 / z) * y
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Line<'a> {
    Z(&'a CauchyOps),
    K(&'a KLineCauchy),
}

impl Line<'_> {
    pub(crate) fn project(&self, f: &[C64], side: Projection) -> Vec<C64> {
        match self {
            Line::Z(ops) => ops.project(f, side),
            Line::K(line) => line.boundary(f, side),
        }
    }

    pub(crate) fn eval(&self, f: &[C64], w: C64) -> C64 {
        match self {
            Line::Z(ops) => ops.eval(f, w),
            Line::K(line) => line.eval(f, w),
        }
    }

    pub(crate) fn eval_with_derivative(&self, f: &[C64], w: C64) -> (C64, C64) {
        match self {
            Line::Z(ops) => ops.eval_with_derivative(f, w),
            Line::K(line) => line.eval_with_derivative(f, w),
        }
    }

    pub(crate) fn infinity_coefficient(&self, f: &[C64]) -> C64 {
        match self {
            Line::Z(ops) => ops.infinity_coefficient(f),
            Line::K(line) => line.infinity_coefficient(f),
        }
    }
}

/// Discretized Beals-Coifman equation for the rows of `M`.
///
/// With `f_a = u_b l` and `f_b = u_a rho` the unknown boundary values satisfy
/// `u_a = e_a + C^{s_a} f_a + poles`, `u_b = e_b + C^{s_b} f_b + poles`, so
/// `M_+ = M_- V` with `V = [[1 + rho l, rho], [l, 1]]` for `s = (-, +)` and
/// `V = [[1, rho], [l, 1 + rho l]]` for `s = (+, -)`.
#[derive(Clone, Debug)]
pub struct BealsCoifmanSystem<'a> {
    pub y: f64,
    pub side: Side,
    pub plane: Plane,
    /// Collocation nodes: `z` for the z-plane, `k` for the k-plane.
    pub nodes: Vec<f64>,
    /// Upper off-diagonal jump factor `rho`.
    pub rho: Vec<C64>,
    /// Lower off-diagonal jump factor `l`.
    pub ell: Vec<C64>,
    pub poles: Vec<Pole>,
    /// Boundary projections applied to columns `a` and `b`.
    pub projections: [Projection; 2],
    pub(crate) line: Line<'a>,
}

fn check_side(side: Side, y: f64) -> Result<()> {
    match side {
        Side::Left if y < 0.0 => Err(Error::WrongSide {
            side: "left",
            requirement: "y >= 0",
            y,
        }),
        Side::Right if y > 0.0 => Err(Error::WrongSide {
            side: "right",
            requirement: "y <= 0",
            y,
        }),
        _ => Ok(()),
    }
}

/// `max |r|` at the grid ends relative to `max |r|`.
fn check_reflection_tails(ops: &CauchyOps, r: &[C64], tol: &Tolerances) -> Result<()> {
    let r_max = r.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if r_max == 0.0 {
        return Ok(());
    }
    for i in ops.grid().end_indices() {
        if r[i].norm() > tol.reflection_tail * r_max {
            return Err(Error::Tail(format!(
                "|r| = {:.3e} at z = {} exceeds {:.1e} relative to max |r| = {r_max:.3e}",
                r[i].norm(),
                ops.grid().nodes()[i],
                tol.reflection_tail
            )));
        }
    }
    Ok(())
}

impl<'a> BealsCoifmanSystem<'a> {
    /// Builds the problem for `M^{(1)}` (z-plane) or `M^{(2)}` (k-plane) at
    /// `y` from the data on the side's half line.
    pub fn assemble(
        sd: &ScatteringData,
        y: f64,
        side: Side,
        plane: Plane,
        ops: &'a CauchyOps,
        tol: &Tolerances,
    ) -> Result<Self> {
        check_side(side, y)?;
        if !y.is_finite() {
            return Err(Error::Invariant(format!("y = {y} is not finite")));
        }
        if ops.grid() != sd.grid() {
            return Err(Error::Grid("Cauchy operators built for a different grid".into()));
        }
        let r = match side {
            Side::Left => sd.r(),
            Side::Right => sd.r_tilde(),
        };
        check_reflection_tails(ops, r, tol)?;
        let sp = sd.spectrum();
        let projections = match side {
            Side::Left => [Projection::Minus, Projection::Plus],
            Side::Right => [Projection::Plus, Projection::Minus],
        };
        let decay = |z: C64| match side {
            Side::Left => (y * z.im).exp(),
            Side::Right => (-y * z.im).exp(),
        };
        let mut poles = Vec::new();
        match plane {
            Plane::Z => {
                let nodes = ops.grid().nodes().to_vec();
                let mut rho = Vec::with_capacity(nodes.len());
                let mut ell = Vec::with_capacity(nodes.len());
                for (&s, &rv) in nodes.iter().zip(r) {
                    let e2 = (2.0 * theta(C64::new(s, 0.0), y)).exp();
                    rho.push(rv * e2);
                    ell.push(-rv.conj() / e2);
                }
                for j in 0..sp.len() {
                    let z = sp.eigenvalues[j];
                    let e = decay(z);
                    let (c, col) = match side {
                        Side::Left => (sp.c[j], 1),
                        Side::Right => (sp.c_tilde[j], 0),
                    };
                    poles.push(Pole {
                        at: z,
                        column: col,
                        coef: c * e,
                    });
                    poles.push(Pole {
                        at: z.conj(),
                        column: 1 - col,
                        coef: c.conj() * e,
                    });
                }
                Ok(Self {
                    y,
                    side,
                    plane,
                    nodes,
                    rho,
                    ell,
                    poles,
                    projections,
                    line: Line::Z(ops),
                })
            }
            Plane::K => {
                let half = ops.grid().half();
                let kappa = ops.grid().kappa().to_vec();
                let zpos = &ops.grid().nodes()[half..];
                let mut rho = Vec::with_capacity(half);
                let mut ell = Vec::with_capacity(half);
                for j in 0..half {
                    let (z, rv) = (zpos[j], r[half + j]);
                    let r1 = rv * z / (z * z + 1.0);
                    let r2 = rv.conj() * (z * z + 1.0) / z;
                    let e2 = (-0.5 * I * kappa[j] * y).exp();
                    rho.push(r1 * e2);
                    ell.push(-r2 / e2);
                }
                for j in 0..sp.len() {
                    let z = sp.eigenvalues[j];
                    if z.re <= 0.0 {
                        continue;
                    }
                    let k = z - 1.0 / z;
                    let e = decay(z);
                    let w = (2.0 * z.re).powi(2);
                    let (at_k, at_conj) = match side {
                        Side::Left => {
                            let d = z.conj() * sp.c[j];
                            ((d, 1), (w * d.conj(), 0))
                        }
                        Side::Right => {
                            let ct = sp.c_tilde[j];
                            ((w * z.conj() * ct, 0), (z * ct.conj(), 1))
                        }
                    };
                    poles.push(Pole {
                        at: k,
                        column: at_k.1,
                        coef: at_k.0 * e,
                    });
                    poles.push(Pole {
                        at: k.conj(),
                        column: at_conj.1,
                        coef: at_conj.0 * e,
                    });
                }
                Ok(Self {
                    y,
                    side,
                    plane,
                    nodes: kappa,
                    rho,
                    ell,
                    poles,
                    projections,
                    line: Line::K(ops.line()),
                })
            }
        }
    }

    /// Number of unknowns: two boundary-value columns plus one value per pole.
    pub fn dimension(&self) -> usize {
        2 * self.nodes.len() + self.poles.len()
    }

    fn pole_sum(&self, column: usize, x: &[C64], w: C64) -> C64 {
        let off = 2 * self.nodes.len();
        self.poles
            .iter()
            .enumerate()
            .filter(|(_, p)| p.column == column)
            .map(|(q, p)| p.coef * x[off + q] / (w - p.at))
            .sum()
    }

    fn densities(&self, x: &[C64]) -> [Vec<C64>; 2] {
        let n = self.nodes.len();
        let fa = x[n..2 * n].iter().zip(&self.ell).map(|(u, l)| u * l).collect();
        let fb = x[..n].iter().zip(&self.rho).map(|(u, r)| u * r).collect();
        [fa, fb]
    }

    /// `(I - K) x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.nodes.len();
        let f = self.densities(x);
        let mut out = x.to_vec();
        for col in 0..2 {
            let proj = self.line.project(&f[col], self.projections[col]);
            for i in 0..n {
                let s = C64::new(self.nodes[i], 0.0);
                out[col * n + i] -= proj[i] + self.pole_sum(col, x, s);
            }
        }
        for (q, p) in self.poles.iter().enumerate() {
            let other = 1 - p.column;
            out[2 * n + q] -= self.line.eval(&f[other], p.at) + self.pole_sum(other, x, p.at);
        }
        out
    }

    /// Right-hand side for row `row` of `M`.
    pub fn rhs(&self, row: usize) -> Vec<C64> {
        let n = self.nodes.len();
        let e = |c: usize| C64::new(if c == row { 1.0 } else { 0.0 }, 0.0);
        let mut b = Vec::with_capacity(self.dimension());
        b.extend(std::iter::repeat_n(e(0), n));
        b.extend(std::iter::repeat_n(e(1), n));
        b.extend(self.poles.iter().map(|p| e(1 - p.column)));
        b
    }

    /// Row `row` of `M(w)` and its derivative, from a solution vector.
    pub(crate) fn row_at(&self, x: &[C64], row: usize, w: C64) -> ([C64; 2], [C64; 2]) {
        let f = self.densities(x);
        let mut val = [C64::new(0.0, 0.0); 2];
        let mut der = [C64::new(0.0, 0.0); 2];
        for col in 0..2 {
            let (v, d) = self.line.eval_with_derivative(&f[col], w);
            let off = 2 * self.nodes.len();
            let (mut pv, mut pd) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for (q, p) in self.poles.iter().enumerate().filter(|(_, p)| p.column == col) {
                let t = p.coef * x[off + q] / (w - p.at);
                pv += t;
                pd -= t / (w - p.at);
            }
            val[col] = if col == row { 1.0 + v + pv } else { v + pv };
            der[col] = d + pd;
        }
        (val, der)
    }

    /// Row `row` of `M(0)`; z-plane only.
    pub(crate) fn row_at_zero(&self, x: &[C64], row: usize) -> [C64; 2] {
        let f = self.densities(x);
        let zero = C64::new(0.0, 0.0);
        let mut val = [zero; 2];
        for col in 0..2 {
            let v = self.line.eval(&f[col], zero) + self.pole_sum(col, x, zero);
            val[col] = if col == row { 1.0 + v } else { v };
        }
        val
    }

    /// Row `row` of `lim w (M(w) - I)` as `w -> inf`.
    pub(crate) fn row_at_infinity(&self, x: &[C64]) -> [C64; 2] {
        let f = self.densities(x);
        let off = 2 * self.nodes.len();
        let mut val = [C64::new(0.0, 0.0); 2];
        for col in 0..2 {
            val[col] = self.line.infinity_coefficient(&f[col])
                + self
                    .poles
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.column == col)
                    .map(|(q, p)| p.coef * x[off + q])
                    .sum::<C64>();
        }
        val
    }

    /// Boundary values `M_+`, `M_-` of row `row` at the nodes.
    pub(crate) fn boundary_rows(&self, x: &[C64], row: usize) -> [Vec<[C64; 2]>; 2] {
        let n = self.nodes.len();
        let f = self.densities(x);
        let mut out = [vec![[C64::new(0.0, 0.0); 2]; n], vec![[C64::new(0.0, 0.0); 2]; n]];
        for (slot, side) in [Projection::Plus, Projection::Minus].into_iter().enumerate() {
            for col in 0..2 {
                let proj = self.line.project(&f[col], side);
                for i in 0..n {
                    let s = C64::new(self.nodes[i], 0.0);
                    let base = if col == row { 1.0 } else { 0.0 };
                    out[slot][i][col] = base + proj[i] + self.pole_sum(col, x, s);
                }
            }
        }
        out
    }
}
