//! Cauchy integrals of sampled functions on the real line.
//!
//! On a uniform k-grid a sampled function is identified with its sinc
//! interpolant, whose Cauchy transform is known in closed form. The boundary
//! values reduce to a Toeplitz product (the discrete Hilbert kernel
//! `-2/(m - j)` on odd offsets), applied with a zero-padded FFT:
//!
//! ```text
//! C+- g(k_m) = +-g_m / 2 + (1 / 2 pi i) sum_{m - j odd} -2 g_j / (m - j)
//! ```
//!
//! On the z-line the substitution `k = z - 1/z` maps each branch `z > 0`,
//! `z < 0` onto the whole k-line, and
//!
//! ```text
//! ds / (s - z) = (s^2 + s / z) / (s^2 + 1) dk / (k(s) - k(z))
//! ```
//!
//! so a z-plane transform is a combination of two k-line transforms.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use super::SpectralGrid;
use crate::{Error, Result, C64, I};

/// Which boundary value of the Cauchy integral to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Projection {
    /// Limit from the upper half-plane.
    Plus,
    /// Limit from the lower half-plane.
    Minus,
}

impl Projection {
    pub fn sign(self) -> f64 {
        match self {
            Projection::Plus => 1.0,
            Projection::Minus => -1.0,
        }
    }
}

/// Known behaviour of a non-decaying input: `f(s) ~ inv_s / s` as
/// `|s| -> inf` and `f(0) = at_zero`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asymptotics {
    pub inv_s: C64,
    pub at_zero: C64,
}

impl Asymptotics {
    /// Coefficients of `alpha / (s - i) + beta / (s + i)` with the same
    /// behaviour at infinity and at zero.
    fn rational_part(&self) -> (C64, C64) {
        let alpha = (self.inv_s - I * self.at_zero) * 0.5;
        let beta = (self.inv_s + I * self.at_zero) * 0.5;
        (alpha, beta)
    }
}

/// Cauchy transform on a uniform grid `k_j = k_0 + j h`.
pub struct KLineCauchy {
    n: usize,
    h: f64,
    k0: f64,
    kernel_hat: Vec<C64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for KLineCauchy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KLineCauchy")
            .field("n", &self.n)
            .field("h", &self.h)
            .field("k0", &self.k0)
            .finish()
    }
}

impl KLineCauchy {
    pub fn new(n: usize, h: f64, k0: f64) -> Self {
        let len = 2 * n;
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        let mut kernel = vec![C64::new(0.0, 0.0); len];
        for d in 1..n {
            if d % 2 == 1 {
                let t = -2.0 / d as f64;
                kernel[d] = C64::new(t, 0.0);
                kernel[len - d] = C64::new(-t, 0.0);
            }
        }
        fwd.process(&mut kernel);
        Self {
            n,
            h,
            k0,
            kernel_hat: kernel,
            fwd,
            inv,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn node(&self, j: usize) -> f64 {
        self.k0 + j as f64 * self.h
    }

    /// `sum_{m - j odd} -2 g_j / (m - j)`, which is `pi / h` times the
    /// discrete Hilbert transform of the samples.
    pub fn principal_value(&self, g: &[C64]) -> Vec<C64> {
        assert_eq!(g.len(), self.n);
        let len = 2 * self.n;
        let mut buf = vec![C64::new(0.0, 0.0); len];
        buf[..self.n].copy_from_slice(g);
        self.fwd.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / len as f64;
        buf.truncate(self.n);
        for b in buf.iter_mut() {
            *b *= scale;
        }
        buf
    }

    pub fn boundary(&self, g: &[C64], side: Projection) -> Vec<C64> {
        let pv = self.principal_value(g);
        let c = 1.0 / (2.0 * PI * I);
        g.iter()
            .zip(pv)
            .map(|(gj, p)| gj * (0.5 * side.sign()) + p * c)
            .collect()
    }

    fn phase_factor(&self, w: C64) -> (C64, f64) {
        let s = if w.im >= 0.0 { 1.0 } else { -1.0 };
        let zeta0 = (w - self.k0) / self.h;
        ((I * (s * PI) * zeta0).exp(), s)
    }

    /// Cauchy integral at a point off the real axis.
    pub fn eval(&self, g: &[C64], w: C64) -> C64 {
        debug_assert!(w.im != 0.0);
        let (e0, _) = self.phase_factor(w);
        let mut acc = C64::new(0.0, 0.0);
        for (j, gj) in g.iter().enumerate() {
            let e = if j % 2 == 0 { e0 } else { -e0 };
            let zeta = (w - self.node(j)) / self.h;
            acc += gj * (e - 1.0) / zeta;
        }
        acc / (2.0 * PI * I)
    }

    /// Value and first derivative of the Cauchy integral off the real axis.
    pub fn eval_with_derivative(&self, g: &[C64], w: C64) -> (C64, C64) {
        debug_assert!(w.im != 0.0);
        let (e0, s) = self.phase_factor(w);
        let ipi = I * (s * PI);
        let mut val = C64::new(0.0, 0.0);
        let mut der = C64::new(0.0, 0.0);
        for (j, gj) in g.iter().enumerate() {
            let e = if j % 2 == 0 { e0 } else { -e0 };
            let zeta = (w - self.node(j)) / self.h;
            let q = (e - 1.0) / zeta;
            val += gj * q;
            der += gj * (ipi * e - q) / zeta;
        }
        let c = 1.0 / (2.0 * PI * I);
        (val * c, der * (c / self.h))
    }

    /// `lim w C g(w)` as `w -> inf`.
    pub fn infinity_coefficient(&self, g: &[C64]) -> C64 {
        let s: C64 = g.iter().sum();
        -(s * self.h) / (2.0 * PI * I)
    }
}

/// Cauchy operators on the z-line for a [`SpectralGrid`].
#[derive(Debug)]
pub struct CauchyOps {
    grid: SpectralGrid,
    line: KLineCauchy,
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl CauchyOps {
    pub fn new(grid: &SpectralGrid) -> Self {
        let line = KLineCauchy::new(grid.half(), grid.k_spacing(), grid.kappa()[0]);
        let w1 = grid.nodes().iter().map(|s| s * s / (s * s + 1.0)).collect();
        let w2 = grid.nodes().iter().map(|s| s / (s * s + 1.0)).collect();
        Self {
            grid: grid.clone(),
            line,
            w1,
            w2,
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn line(&self) -> &KLineCauchy {
        &self.line
    }

    fn split(&self, f: &[C64]) -> (Vec<C64>, Vec<C64>) {
        assert_eq!(f.len(), self.grid.len());
        let h = self.grid.half();
        let mut g1 = Vec::with_capacity(h);
        let mut g2 = Vec::with_capacity(h);
        for j in 0..h {
            let (a, b) = (j, j + h);
            g1.push(f[a] * self.w1[a] + f[b] * self.w1[b]);
            g2.push(f[a] * self.w2[a] + f[b] * self.w2[b]);
        }
        (g1, g2)
    }

    pub fn check_tails(&self, f: &[C64], tol: f64) -> Result<()> {
        for i in self.grid.end_indices() {
            if f[i].norm() > tol {
                return Err(Error::Tail(format!(
                    "|f| = {:.3e} at z = {} exceeds {tol:.1e}",
                    f[i].norm(),
                    self.grid.nodes()[i]
                )));
            }
        }
        Ok(())
    }

    /// Boundary values without a tail check.
    pub fn project(&self, f: &[C64], side: Projection) -> Vec<C64> {
        let (g1, g2) = self.split(f);
        let a = self.line.boundary(&g1, side);
        let b = self.line.boundary(&g2, side);
        let h = self.grid.half();
        self.grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &z)| a[i % h] + b[i % h] / z)
            .collect()
    }

    pub fn cauchy_plus(&self, f: &[C64], tail_tol: f64) -> Result<Vec<C64>> {
        self.check_tails(f, tail_tol)?;
        Ok(self.project(f, Projection::Plus))
    }

    pub fn cauchy_minus(&self, f: &[C64], tail_tol: f64) -> Result<Vec<C64>> {
        self.check_tails(f, tail_tol)?;
        Ok(self.project(f, Projection::Minus))
    }

    /// Boundary values of a function that does not decay at the grid ends.
    /// A rational function with the given behaviour is removed first and its
    /// boundary values are added back exactly.
    pub fn project_with_asymptotics(
        &self,
        f: &[C64],
        side: Projection,
        asym: Asymptotics,
        tail_tol: f64,
    ) -> Result<Vec<C64>> {
        let (alpha, beta) = asym.rational_part();
        let z = self.grid.nodes();
        let rational = |s: f64| alpha / (s - I) + beta / (s + I);
        let rest: Vec<C64> = f.iter().zip(z).map(|(v, &s)| v - rational(s)).collect();
        self.check_tails(&rest, tail_tol)?;
        let mut out = self.project(&rest, side);
        for (o, &s) in out.iter_mut().zip(z) {
            *o += match side {
                Projection::Plus => beta / (s + I),
                Projection::Minus => -alpha / (s - I),
            };
        }
        Ok(out)
    }

    /// Cauchy integral at `w` off the real axis; `w = 0` is allowed and
    /// returns the limit along the imaginary axis, which is finite when `f`
    /// vanishes at `z = 0`.
    pub fn eval(&self, f: &[C64], w: C64) -> C64 {
        let (g1, g2) = self.split(f);
        if w.norm() == 0.0 {
            let s: C64 = g2.iter().sum();
            return s * self.line.spacing() / (2.0 * PI * I);
        }
        let kw = w - 1.0 / w;
        self.line.eval(&g1, kw) + self.line.eval(&g2, kw) / w
    }

    pub fn eval_with_derivative(&self, f: &[C64], w: C64) -> (C64, C64) {
        let (g1, g2) = self.split(f);
        let kw = w - 1.0 / w;
        let dk = 1.0 + 1.0 / (w * w);
        let (a, da) = self.line.eval_with_derivative(&g1, kw);
        let (b, db) = self.line.eval_with_derivative(&g2, kw);
        (a + b / w, da * dk + db * dk / w - b / (w * w))
    }

    pub fn at_zero(&self, f: &[C64]) -> C64 {
        self.eval(f, C64::new(0.0, 0.0))
    }

    /// `lim z C f(z)` as `z -> inf`, i.e. `-(1 / 2 pi i) int f`.
    pub fn infinity_coefficient(&self, f: &[C64]) -> C64 {
        let (g1, _) = self.split(f);
        self.line.infinity_coefficient(&g1)
    }
}
