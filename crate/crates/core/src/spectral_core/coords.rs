use super::{midpoint_samples, MonotoneCubic, Potential};
use crate::{Error, Result};

/// `y(x) = x - int_x^inf (m - 1)` sampled on the potential's grid.
///
/// The partial integrals use Simpson's rule on each cell with band-limited
/// midpoint values.
pub fn y_of_x(p: &Potential) -> Result<Vec<f64>> {
    if let Some(i) = p.values().iter().position(|v| 1.0 + v <= 0.0) {
        return Err(Error::Invariant(format!(
            "m is not positive at node {i}"
        )));
    }
    let tail = right_tail_integrals(p.values(), p.grid().spacing());
    Ok(p.grid()
        .nodes()
        .iter()
        .zip(tail)
        .map(|(x, t)| x - t)
        .collect())
}

/// `int_{x_i}^{x_max} q` for every node.
pub(crate) fn right_tail_integrals(q: &[f64], h: f64) -> Vec<f64> {
    let mid = midpoint_samples(q);
    let n = q.len();
    let mut out = vec![0.0; n];
    for i in (0..n - 1).rev() {
        out[i] = out[i + 1] + h / 6.0 * (q[i] + 4.0 * mid[i] + q[i + 1]);
    }
    out
}

/// The map `x -> y` and its monotone inverse.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    x: Vec<f64>,
    y: Vec<f64>,
    inverse: MonotoneCubic,
}

impl CoordinateMap {
    pub fn new(p: &Potential) -> Result<Self> {
        let y = y_of_x(p)?;
        let x = p.grid().nodes();
        let inverse = MonotoneCubic::new(y.clone(), x.clone());
        Ok(Self { x, y, inverse })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x_of_y(&self, y: f64) -> f64 {
        self.inverse.eval(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::SpatialGrid;
    use proptest::prelude::*;

    #[test]
    fn background_is_identity() {
        let g = SpatialGrid::new(-5.0, 5.0, 64).unwrap();
        let y = y_of_x(&Potential::background(g.clone())).unwrap();
        for (a, b) in y.iter().zip(g.nodes()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_shift_at_left_end() {
        let g = SpatialGrid::new(-30.0, 30.0, 1024).unwrap();
        let p = Potential::from_fn(g.clone(), |x| 0.1 * (-x * x).exp()).unwrap();
        let y = y_of_x(&p).unwrap();
        let shift = y[0] - g.node(0);
        assert!((shift + 0.1 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn partial_integral_of_gaussian_matches_erfc() {
        // int_x^inf e^{-s^2} ds at x = 0 is sqrt(pi)/2.
        let g = SpatialGrid::new(-10.0, 10.0, 401).unwrap();
        let q: Vec<f64> = g.nodes().iter().map(|x| (-x * x).exp()).collect();
        let t = right_tail_integrals(&q, g.spacing());
        assert!((t[200] - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn inverse_map() {
        let g = SpatialGrid::new(-20.0, 20.0, 512).unwrap();
        let p = Potential::from_fn(g, |x| 0.5 * (-x * x / 4.0).exp()).unwrap();
        let map = CoordinateMap::new(&p).unwrap();
        for (&x, &y) in map.x().iter().zip(map.y()).step_by(17) {
            assert!((map.x_of_y(y) - x).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn y_strictly_increasing(amp in -0.9f64..3.0, width in 0.3f64..3.0, center in -3.0f64..3.0) {
            let g = SpatialGrid::new(-20.0, 20.0, 400).unwrap();
            let p = Potential::from_fn(g, |x| amp * (-((x - center) / width).powi(2)).exp()).unwrap();
            let y = y_of_x(&p).unwrap();
            prop_assert!(y.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
