use crate::{Error, Result};

/// Uniform grid on `[x_min, x_max]` including both end points.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::Grid(format!("need at least 16 nodes, got {n}")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::Grid(format!("bad interval [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// Spectral nodes on the real z-line.
///
/// Nodes are uniform in `k = z - 1/z` with a half-step offset, taken on both
/// branches `z < 0` and `z > 0`. The offset keeps `0` and `+-1` off the grid
/// and makes the node set closed under `z -> -z` and `z -> 1/z`. Nodes are
/// stored in increasing order: the first half is the negative branch, the
/// second half the positive branch, each ordered by increasing `k`.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    zmax: f64,
    n: usize,
    kappa: Vec<f64>,
    nodes: Vec<f64>,
    k_spacing: f64,
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.zmax == other.zmax && self.n == other.n
    }
}

impl SpectralGrid {
    /// Offset of the k-nodes in units of the k-spacing.
    pub const OFFSET: f64 = 0.5;

    pub fn new(zmax: f64, n: usize) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::Grid(format!(
                "spectral node count must be even and at least 16, got {n}"
            )));
        }
        if !(zmax.is_finite() && zmax > 1.0) {
            return Err(Error::Grid(format!("zmax must exceed 1, got {zmax}")));
        }
        let half = n / 2;
        let kmax = zmax - 1.0 / zmax;
        let h = 2.0 * kmax / half as f64;
        let kappa: Vec<f64> = (0..half)
            .map(|j| (j as f64 + Self::OFFSET - half as f64 / 2.0) * h)
            .collect();
        let mut nodes = Vec::with_capacity(n);
        nodes.extend(kappa.iter().map(|&k| negative_branch(k)));
        nodes.extend(kappa.iter().map(|&k| positive_branch(k)));
        Ok(Self {
            zmax,
            n,
            kappa,
            nodes,
            k_spacing: h,
        })
    }

    pub fn zmax(&self) -> f64 {
        self.zmax
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Nodes per branch.
    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn k_spacing(&self) -> f64 {
        self.k_spacing
    }

    /// Index of the k-node underlying spectral node `i`.
    pub fn kappa_index(&self, i: usize) -> usize {
        i % self.half()
    }

    /// Index of the node equal to `1/z_i`.
    pub fn reciprocal_index(&self, i: usize) -> usize {
        let h = self.half();
        let j = i % h;
        (i - j) + (h - 1 - j)
    }

    /// Index of the node equal to `-z_i`.
    pub fn negation_index(&self, i: usize) -> usize {
        let h = self.half();
        let j = i % h;
        if i < h {
            h + (h - 1 - j)
        } else {
            h - 1 - j
        }
    }

    /// Node indices of the four grid ends: `z -> -inf`, `0-`, `0+`, `+inf`.
    pub fn end_indices(&self) -> [usize; 4] {
        let h = self.half();
        [0, h - 1, h, self.n - 1]
    }
}

pub(crate) fn positive_branch(k: f64) -> f64 {
    let s = (k * k + 4.0).sqrt();
    if k >= 0.0 {
        0.5 * (k + s)
    } else {
        2.0 / (s - k)
    }
}

pub(crate) fn negative_branch(k: f64) -> f64 {
    -positive_branch(-k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spatial_grid_invariants() {
        assert!(SpatialGrid::new(0.0, 1.0, 15).is_err());
        assert!(SpatialGrid::new(1.0, 1.0, 32).is_err());
        let g = SpatialGrid::new(-30.0, 30.0, 1024).unwrap();
        assert_eq!(g.node(0), -30.0);
        assert_eq!(g.node(1023), 30.0);
        assert!((g.spacing() - 60.0 / 1023.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_grid_excludes_special_points() {
        let g = SpectralGrid::new(20.05, 64).unwrap();
        let z = g.nodes();
        assert!(z.windows(2).all(|w| w[0] < w[1]));
        for &v in z {
            assert!(v.abs() > 1e-3 && (v.abs() - 1.0).abs() > 1e-3);
        }
        assert!(z[63] < 20.05 && z[0] > -20.05);
    }

    #[test]
    fn spectral_grid_symmetries() {
        let g = SpectralGrid::new(12.0, 128).unwrap();
        let z = g.nodes();
        for i in 0..g.len() {
            let r = g.reciprocal_index(i);
            let n = g.negation_index(i);
            assert!((z[r] - 1.0 / z[i]).abs() <= 1e-13 * (1.0 + z[r].abs()));
            assert!((z[n] + z[i]).abs() <= 1e-13 * (1.0 + z[i].abs()));
            assert_eq!(g.reciprocal_index(r), i);
            assert_eq!(g.negation_index(n), i);
        }
    }

    #[test]
    fn branches_invert_k() {
        for &k in &[-50.0, -1.0, -1e-9, 0.0, 0.3, 40.0] {
            let zp = positive_branch(k);
            let zm = negative_branch(k);
            assert!(zp > 0.0 && zm < 0.0);
            assert!((zp - 1.0 / zp - k).abs() < 1e-12 * (1.0 + k.abs()));
            assert!((zm - 1.0 / zm - k).abs() < 1e-12 * (1.0 + k.abs()));
        }
    }
}
