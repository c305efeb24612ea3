use std::fmt::Write as _;
use std::path::Path;

use super::PointValues;
use crate::spectral_core::{fd4_derivative, MonotoneCubic, Potential, SpatialGrid};
use crate::{Error, Result};

pub const PROFILE_HEADER: &str = "# mch-profile v1";

/// Fields sampled at the nodes of a y-grid, with `x(y)` strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub t: f64,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub m: Vec<f64>,
    pub u: Vec<f64>,
    pub m_x: Vec<f64>,
}

/// Differences between a profile's `m` and a reference at the profile's `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    /// `(int (m - m_ref)^2 dx)^{1/2}`.
    pub l2: f64,
    /// `l2` over `(int (m_ref - 1)^2 dx)^{1/2}`.
    pub rel_l2: f64,
}

/// Invariant residuals of a [`Profile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileChecks {
    pub min_m: f64,
    pub x_increasing: bool,
    /// Largest `|m - 1|` at the two ends.
    pub tail: f64,
    /// `max |u - u_xx - m|` at interior nodes of a uniform y-grid.
    pub helmholtz_residual: f64,
}

impl Profile {
    pub fn new(t: f64, y: Vec<f64>, x: Vec<f64>, m: Vec<f64>, u: Vec<f64>, m_x: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if n < 2 || [x.len(), m.len(), u.len(), m_x.len()].iter().any(|&l| l != n) {
            return Err(Error::Invariant("profile columns must have equal length >= 2".into()));
        }
        if let Some(i) = (0..n - 1).find(|&i| x[i + 1] <= x[i]) {
            return Err(Error::Invariant(format!(
                "x is not increasing between y = {} and y = {}",
                y[i],
                y[i + 1]
            )));
        }
        if let Some(i) = m.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::Singular {
                y: y[i],
                detail: format!("m = {} is not positive", m[i]),
            });
        }
        Ok(Self { t, y, x, m, u, m_x })
    }

    pub(crate) fn from_points(t: f64, pts: &[PointValues]) -> Result<Self> {
        let col = |f: fn(&PointValues) -> f64| pts.iter().map(f).collect::<Vec<_>>();
        Self::new(t, col(|p| p.y), col(|p| p.x), col(|p| p.m), col(|p| p.u), col(|p| p.m_x))
    }

    /// The background `m = u = 1` on `ygrid`.
    pub fn background(t: f64, ygrid: &[f64]) -> Result<Self> {
        let n = ygrid.len();
        Self::new(
            t,
            ygrid.to_vec(),
            ygrid.iter().map(|y| y + t).collect(),
            vec![1.0; n],
            vec![1.0; n],
            vec![0.0; n],
        )
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Monotone-cubic interpolation of `field` in `x`; the background value is
    /// used outside the profile's x-range.
    pub fn resample_field(&self, field: &[f64], background: f64, x: &[f64]) -> Vec<f64> {
        let interp = MonotoneCubic::new(self.x.clone(), field.to_vec());
        let (lo, hi) = (self.x[0], self.x[self.x.len() - 1]);
        x.iter()
            .map(|&v| if v < lo || v > hi { background } else { interp.eval(v) })
            .collect()
    }

    /// `m - 1` on a uniform x-grid.
    pub fn resample(&self, grid: &SpatialGrid) -> Result<Potential> {
        let x = grid.nodes();
        let q: Vec<f64> = self
            .resample_field(&self.m, 1.0, &x)
            .into_iter()
            .map(|m| m - 1.0)
            .collect();
        Potential::new(grid.clone(), q)
    }

    pub fn checks(&self) -> ProfileChecks {
        let n = self.len();
        let min_m = self.m.iter().copied().fold(f64::INFINITY, f64::min);
        let x_increasing = self.x.windows(2).all(|w| w[0] < w[1]);
        let tail = (self.m[0] - 1.0).abs().max((self.m[n - 1] - 1.0).abs());
        // dy/dx = m, so u_xx = m d/dy (m du/dy); y is uniform when the profile
        // comes from a reconstruction.
        let helmholtz_residual = if let (Some(h), true) = (self.uniform_y(), n >= 6) {
            let uy = fd4_derivative(&self.u, h);
            let flux: Vec<f64> = uy.iter().zip(&self.m).map(|(d, m)| d * m).collect();
            let fy = fd4_derivative(&flux, h);
            (2..n - 2)
                .map(|i| (self.u[i] - self.m[i] * fy[i] - self.m[i]).abs())
                .fold(0.0, f64::max)
        } else {
            f64::NAN
        };
        ProfileChecks {
            min_m,
            x_increasing,
            tail,
            helmholtz_residual,
        }
    }

    fn uniform_y(&self) -> Option<f64> {
        let h = self.y[1] - self.y[0];
        self.y
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
            .then_some(h)
    }

    /// Trapezoid weights for `int . dx` at the nodes.
    fn x_weights(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let l = if i > 0 { self.x[i] - self.x[i - 1] } else { 0.0 };
                let r = if i + 1 < n { self.x[i + 1] - self.x[i] } else { 0.0 };
                0.5 * (l + r)
            })
            .collect()
    }

    /// `int (m - 1) dx`. On a uniform y-grid this is the trapezoid rule for
    /// `int (m - 1)/m dy`, which is spectrally accurate for decaying data.
    pub fn mass(&self) -> f64 {
        match self.uniform_y() {
            Some(h) => {
                let f: Vec<f64> = self.m.iter().map(|m| (m - 1.0) / m).collect();
                let n = f.len();
                h * (f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]))
            }
            None => self.x_weights().iter().zip(&self.m).map(|(w, m)| w * (m - 1.0)).sum(),
        }
    }

    /// Compares `m` with the reference `m - 1` given by `reference` at the
    /// profile's `x` nodes.
    pub fn deviation_from(&self, reference: &[f64]) -> Deviation {
        assert_eq!(reference.len(), self.len());
        let w = self.x_weights();
        let (mut max_abs, mut diff2, mut ref2) = (0.0f64, 0.0, 0.0);
        for i in 0..self.len() {
            let d = self.m[i] - 1.0 - reference[i];
            max_abs = max_abs.max(d.abs());
            diff2 += w[i] * d * d;
            ref2 += w[i] * reference[i] * reference[i];
        }
        Deviation {
            max_abs,
            l2: diff2.sqrt(),
            rel_l2: if ref2 > 0.0 { (diff2 / ref2).sqrt() } else { diff2.sqrt() },
        }
    }

    /// [`Self::deviation_from`] with `p` interpolated to the profile's `x`.
    pub fn deviation_from_potential(&self, p: &Potential) -> Deviation {
        self.deviation_from(&p.interpolate(&self.x))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(96 * self.len());
        let _ = writeln!(s, "{PROFILE_HEADER} t={}", self.t);
        s.push_str("# y x m u m_x\n");
        for i in 0..self.len() {
            let _ = writeln!(
                s,
                "{:e} {:e} {:e} {:e} {:e}",
                self.y[i], self.x[i], self.m[i], self.u[i], self.m_x[i]
            );
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let t = match lines.next() {
            Some((_, l)) => {
                let rest = l.trim().strip_prefix(PROFILE_HEADER).ok_or_else(|| Error::Parse {
                    line: 1,
                    detail: format!("expected header `{PROFILE_HEADER} t=<t>`"),
                })?;
                let t = rest.trim().strip_prefix("t=").ok_or_else(|| Error::Parse {
                    line: 1,
                    detail: "missing time stamp `t=<t>`".into(),
                })?;
                t.parse::<f64>().map_err(|e| Error::Parse {
                    line: 1,
                    detail: format!("time stamp `{t}`: {e}"),
                })?
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    detail: "empty input".into(),
                })
            }
        };
        let mut cols: [Vec<f64>; 5] = Default::default();
        for (idx, raw) in lines {
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = l.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: idx + 1,
                    detail: format!("expected 5 columns, found {}", fields.len()),
                });
            }
            for (c, f) in cols.iter_mut().zip(fields) {
                c.push(f.parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    detail: format!("`{f}`: {e}"),
                })?);
            }
        }
        let [y, x, m, u, m_x] = cols;
        Self::new(t, y, x, m, u, m_x)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
