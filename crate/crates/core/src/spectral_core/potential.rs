use std::fmt::Write as _;
use std::path::Path;

use super::SpatialGrid;
use crate::{Error, Result};

pub const POTENTIAL_HEADER: &str = "# mch-potential v1";

/// Samples of `m - 1` on a spatial grid. The background value 1 is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    grid: SpatialGrid,
    values: Vec<f64>,
}

impl Potential {
    pub fn new(grid: SpatialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invariant(format!(
                "{} samples for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!("non-finite sample at node {i}")));
        }
        if let Some(i) = values.iter().position(|v| 1.0 + v <= 0.0) {
            return Err(Error::Invariant(format!(
                "m = {} is not positive at x = {}",
                1.0 + values[i],
                grid.node(i)
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    /// The constant background `m = 1`.
    pub fn background(grid: SpatialGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// Samples of `m - 1`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn check_tails(&self, tol: f64) -> Result<()> {
        let n = self.values.len();
        for (i, end) in [(0, "left"), (n - 1, "right")] {
            if self.values[i].abs() > tol {
                return Err(Error::Tail(format!(
                    "|m - 1| = {:.3e} at the {end} end exceeds {tol:.1e}",
                    self.values[i].abs()
                )));
            }
        }
        Ok(())
    }

    /// Trapezoid rule for the integral of `m - 1`.
    pub fn mass(&self) -> f64 {
        let h = self.grid.spacing();
        let n = self.values.len();
        h * (self.values.iter().sum::<f64>() - 0.5 * (self.values[0] + self.values[n - 1]))
    }

    /// Band-limited interpolation of `m - 1` at `x`; zero outside the grid.
    pub fn interpolate(&self, x: &[f64]) -> Vec<f64> {
        let (lo, hi) = (self.grid.x_min(), self.grid.x_max());
        let vals = super::band_limited_eval(&self.values, self.grid.spacing(), lo, x);
        x.iter()
            .zip(vals)
            .map(|(&xv, v)| if xv < lo || xv > hi { 0.0 } else { v })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(48 * self.values.len());
        s.push_str(POTENTIAL_HEADER);
        s.push('\n');
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{:e},{:e}", self.grid.node(i), v);
        }
        s
    }

    /// Parses the two-column text format. Columns may be separated by a comma
    /// or by whitespace; further `#` lines are comments. Nodes must be
    /// uniformly spaced to within 1e-3 of the spacing and are snapped to the
    /// exact grid.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == POTENTIAL_HEADER => {}
            Some((_, l)) => {
                return Err(Error::Parse {
                    line: 1,
                    detail: format!("expected header `{POTENTIAL_HEADER}`, found `{}`", l.trim()),
                })
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    detail: "empty input".into(),
                })
            }
        }
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        let mut line_of = Vec::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = if l.contains(',') {
                l.split(',').map(str::trim).collect()
            } else {
                l.split_whitespace().collect()
            };
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line,
                    detail: format!("expected 2 columns, found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    detail: format!("`{s}`: {e}"),
                })
            };
            xs.push(parse(fields[0])?);
            vs.push(parse(fields[1])?);
            line_of.push(line);
        }
        let n = xs.len();
        if n < 2 {
            return Err(Error::Parse {
                line: n + 1,
                detail: "too few samples".into(),
            });
        }
        let grid = SpatialGrid::new(xs[0], xs[n - 1], n)?;
        let h = grid.spacing();
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.node(i)).abs() > 1e-3 * h {
                return Err(Error::Parse {
                    line: line_of[i],
                    detail: format!("node {x} breaks uniform spacing {h}"),
                });
            }
        }
        Self::new(grid, vs)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> Potential {
        let g = SpatialGrid::new(-10.0, 10.0, 101).unwrap();
        Potential::from_fn(g, |x| 0.1 * (-x * x).exp()).unwrap()
    }

    #[test]
    fn rejects_nonpositive_m() {
        let g = SpatialGrid::new(-1.0, 1.0, 16).unwrap();
        let mut v = vec![0.0; 16];
        v[3] = -1.0;
        assert!(matches!(Potential::new(g, v), Err(Error::Invariant(_))));
    }

    #[test]
    fn text_roundtrip_is_exact() {
        let p = gaussian();
        let q = Potential::parse(&p.to_text()).unwrap();
        assert_eq!(p.values(), q.values());
        assert_eq!(p.grid(), q.grid());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "# mch-potential v1\n0,0\n1,abc\n";
        match Potential::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            Potential::parse("x,m\n0,0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn rounded_nodes_are_snapped_and_uneven_ones_rejected() {
        let rows: String = (0..31).map(|i| format!("{:.4},0\n", i as f64 / 3.0)).collect();
        let p = Potential::parse(&format!("{POTENTIAL_HEADER}\n{rows}")).unwrap();
        assert_eq!(p.grid(), &SpatialGrid::new(0.0, 10.0, 31).unwrap());
        let rows: String = (0..20)
            .map(|i| format!("{},0\n", if i == 2 { 2.01 } else { i as f64 }))
            .collect();
        let uneven = format!("{POTENTIAL_HEADER}\n{rows}");
        assert!(matches!(Potential::parse(&uneven), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn whitespace_columns_accepted() {
        let mut text = String::from("# mch-potential v1\n");
        for i in 0..20 {
            text.push_str(&format!("{} 0\n", i as f64 * 0.5));
        }
        let p = Potential::parse(&text).unwrap();
        assert_eq!(p.grid().len(), 20);
    }

    #[test]
    fn tails_and_mass() {
        let p = gaussian();
        p.check_tails(1e-10).unwrap();
        assert!((p.mass() - 0.1 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let g = SpatialGrid::new(-1.0, 1.0, 16).unwrap();
        let wide = Potential::from_fn(g, |_| 0.5).unwrap();
        assert!(matches!(wide.check_tails(1e-10), Err(Error::Tail(_))));
    }
}
