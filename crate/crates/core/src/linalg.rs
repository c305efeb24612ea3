//! Restarted GMRES for matrix-free complex operators.

use crate::C64;

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<C64>,
    pub iterations: usize,
    /// Final true residual ||b - A x|| / ||b||.
    pub residual: f64,
    pub converged: bool,
    /// Ratio of extreme diagonal entries of the last triangularized
    /// Hessenberg factor; a cheap lower bound for the condition number.
    pub condition_estimate: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub tol: f64,
    pub restart: usize,
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            restart: 200,
            max_iter: 2000,
        }
    }
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn givens(a: C64, b: C64) -> (f64, C64) {
    if a.norm() == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / t;
    let s = (a / a.norm()) * b.conj() / t;
    (c, s)
}

#[inline]
fn rotate(c: f64, s: C64, a: C64, b: C64) -> (C64, C64) {
    (a * c + s * b, -s.conj() * a + b * c)
}

/// Solves `A x = b` starting from `x = 0`.
pub fn gmres<F>(apply: F, b: &[C64], opts: GmresOptions) -> GmresOutcome
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![C64::new(0.0, 0.0); n];
    if bnorm == 0.0 {
        return GmresOutcome {
            x,
            iterations: 0,
            residual: 0.0,
            converged: true,
            condition_estimate: 1.0,
        };
    }
    let m = opts.restart.max(1).min(n.max(1));
    let mut iterations = 0usize;
    let mut condition_estimate = 1.0;

    loop {
        let ax = apply(&x);
        let r: Vec<C64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        if beta / bnorm <= opts.tol || iterations >= opts.max_iter {
            return GmresOutcome {
                x,
                iterations,
                residual: beta / bnorm,
                converged: beta / bnorm <= opts.tol,
                condition_estimate,
            };
        }

        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Column-major upper Hessenberg after rotations.
        let mut h: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(m);
        let mut g = vec![C64::new(0.0, 0.0); m + 1];
        g[0] = C64::new(beta, 0.0);
        let mut k_used = 0;

        for j in 0..m {
            let mut w = apply(&basis[j]);
            iterations += 1;
            let mut col = vec![C64::new(0.0, 0.0); j + 2];
            // Two passes of modified Gram-Schmidt.
            for _ in 0..2 {
                for (i, v) in basis.iter().enumerate() {
                    let hij = dot(v, &w);
                    col[i] += hij;
                    for (wk, vk) in w.iter_mut().zip(v) {
                        *wk -= hij * vk;
                    }
                }
            }
            let wn = norm(&w);
            col[j + 1] = C64::new(wn, 0.0);
            for (i, &(c, s)) in rot.iter().enumerate() {
                let (a, bb) = rotate(c, s, col[i], col[i + 1]);
                col[i] = a;
                col[i + 1] = bb;
            }
            let (c, s) = givens(col[j], col[j + 1]);
            let (a, _) = rotate(c, s, col[j], col[j + 1]);
            col[j] = a;
            col[j + 1] = C64::new(0.0, 0.0);
            let (g0, g1) = rotate(c, s, g[j], g[j + 1]);
            g[j] = g0;
            g[j + 1] = g1;
            rot.push((c, s));
            h.push(col);
            k_used = j + 1;

            let res = g[j + 1].norm() / bnorm;
            if res <= opts.tol || wn <= 1e-14 * bnorm || iterations >= opts.max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }

        // Back substitution on the k_used x k_used triangle.
        let mut yv = vec![C64::new(0.0, 0.0); k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for (l, yl) in yv.iter().enumerate().skip(i + 1) {
                s -= h[l][i] * yl;
            }
            yv[i] = s / h[i][i];
        }
        let (dmin, dmax) = (0..k_used).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
            let d = h[i][i].norm();
            (lo.min(d), hi.max(d))
        });
        if dmin > 0.0 {
            condition_estimate = dmax / dmin;
        } else {
            condition_estimate = f64::INFINITY;
        }
        for (yi, v) in yv.iter().zip(&basis) {
            for (xk, vk) in x.iter_mut().zip(v) {
                *xk += yi * vk;
            }
        }
    }
}
