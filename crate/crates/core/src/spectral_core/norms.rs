use std::fmt;

use super::SpatialGrid;

/// Weighted Sobolev norms `||f||_{H^{k,s}} = sum_{j<=k} ||<x>^s f^(j)||_2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WeightedNormReport {
    pub h21: f64,
    pub h12: f64,
    pub l1: f64,
}

impl fmt::Display for WeightedNormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h21={:e}", self.h21)?;
        writeln!(f, "h12={:e}", self.h12)?;
        writeln!(f, "l1={:e}", self.l1)
    }
}

/// Fourth-order finite-difference derivative on a uniform grid, with
/// one-sided stencils at the two nodes nearest each end.
pub fn fd4_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "need at least 5 samples");
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    let fwd0 = |g: &dyn Fn(usize) -> f64| {
        (-25.0 * g(0) + 48.0 * g(1) - 36.0 * g(2) + 16.0 * g(3) - 3.0 * g(4)) / (12.0 * h)
    };
    let fwd1 = |g: &dyn Fn(usize) -> f64| {
        (-3.0 * g(0) - 10.0 * g(1) + 18.0 * g(2) - 6.0 * g(3) + g(4)) / (12.0 * h)
    };
    d[0] = fwd0(&|k| f[k]);
    d[1] = fwd1(&|k| f[k]);
    d[n - 1] = -fwd0(&|k| f[n - 1 - k]);
    d[n - 2] = -fwd1(&|k| f[n - 1 - k]);
    d
}

/// Fourth-order second derivative, one-sided near the ends.
pub fn fd4_second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 6, "need at least 6 samples");
    let h2 = 12.0 * h * h;
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / h2;
    }
    let end0 = |g: &dyn Fn(usize) -> f64| {
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) / h2
    };
    let end1 = |g: &dyn Fn(usize) -> f64| {
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) / h2
    };
    d[0] = end0(&|k| f[k]);
    d[1] = end1(&|k| f[k]);
    d[n - 1] = end0(&|k| f[n - 1 - k]);
    d[n - 2] = end1(&|k| f[n - 1 - k]);
    d
}

fn weighted_l2(x: &[f64], f: &[f64], s: i32, h: f64) -> f64 {
    let n = f.len();
    let g = |i: usize| (1.0 + x[i] * x[i]).powf(0.5 * s as f64) * f[i];
    let sum: f64 = (0..n).map(|i| g(i).powi(2)).sum();
    (h * (sum - 0.5 * (g(0).powi(2) + g(n - 1).powi(2)))).max(0.0).sqrt()
}

pub fn weighted_norm(grid: &SpatialGrid, values: &[f64]) -> WeightedNormReport {
    assert_eq!(grid.len(), values.len());
    let h = grid.spacing();
    let x = grid.nodes();
    let d1 = fd4_derivative(values, h);
    let d2 = fd4_second_derivative(values, h);
    let h21 = weighted_l2(&x, values, 1, h) + weighted_l2(&x, &d1, 1, h) + weighted_l2(&x, &d2, 1, h);
    let h12 = weighted_l2(&x, values, 2, h) + weighted_l2(&x, &d1, 2, h);
    let n = values.len();
    let l1 = h * (values.iter().map(|v| v.abs()).sum::<f64>()
        - 0.5 * (values[0].abs() + values[n - 1].abs()));
    WeightedNormReport { h21, h12, l1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd4_is_fourth_order() {
        let err = |n: usize| {
            let g = SpatialGrid::new(0.0, 1.0, n).unwrap();
            let f: Vec<f64> = g.nodes().iter().map(|x| x.sin()).collect();
            let d = fd4_derivative(&f, g.spacing());
            g.nodes()
                .iter()
                .zip(d)
                .map(|(x, v)| (v - x.cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn second_derivative_stencils() {
        let g = SpatialGrid::new(0.0, 1.0, 81).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| x.powi(5)).collect();
        let d = fd4_second_derivative(&f, g.spacing());
        // Exact for quartics; residual for x^5 is O(h^4).
        for (x, v) in g.nodes().iter().zip(d) {
            assert!((v - 20.0 * x.powi(3)).abs() < 1e-5, "{x}: {v}");
        }
    }

    #[test]
    fn zero_function() {
        let g = SpatialGrid::new(-5.0, 5.0, 32).unwrap();
        assert_eq!(weighted_norm(&g, &[0.0; 32]), WeightedNormReport::default());
    }
}
