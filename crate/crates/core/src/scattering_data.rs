//! The scattering-data record, its consistency report, closed-form time
//! evolution and versioned JSON form.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::direct_scattering::DiscreteSpectrum;
use crate::spectral_core::{fd4_derivative, SpectralGrid, WeightedNormReport};
use crate::{Error, Result, Tolerances, C64, I};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringData {
    grid: SpectralGrid,
    r: Vec<C64>,
    r_tilde: Vec<C64>,
    spectrum: DiscreteSpectrum,
    t: f64,
}

/// `-i phi(z)` is the phase rate of `r(z; t) = e^{phi(z) t} r(z; 0)`.
pub fn dispersion(z: C64) -> C64 {
    let z2 = z * z;
    4.0 * I * z * (z2 - 1.0) / ((z2 + 1.0) * (z2 + 1.0))
}

/// Growth rate of `c_j` for an eigenvalue on the unit circle:
/// `-2 Im z / Re^2 z`, the value of [`dispersion`] there.
pub fn eigenvalue_rate(z: C64) -> Result<f64> {
    if z.re == 0.0 {
        return Err(Error::Evolution(z));
    }
    Ok(-2.0 * z.im / (z.re * z.re))
}

impl ScatteringData {
    pub fn new(
        grid: SpectralGrid,
        r: Vec<C64>,
        r_tilde: Vec<C64>,
        spectrum: DiscreteSpectrum,
        t: f64,
    ) -> Result<Self> {
        if r.len() != grid.len() || r_tilde.len() != grid.len() {
            return Err(Error::Invariant(format!(
                "reflection samples ({}, {}) do not match the {} grid nodes",
                r.len(),
                r_tilde.len(),
                grid.len()
            )));
        }
        let n = spectrum.eigenvalues.len();
        if !n.is_multiple_of(2)
            || spectrum.b_constants.len() != n
            || spectrum.c.len() != n
            || spectrum.c_tilde.len() != n
        {
            return Err(Error::Invariant(
                "discrete spectrum must list 2 N0 eigenvalues with one constant of each kind".into(),
            ));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Invariant(format!("time stamp {t} must be nonnegative")));
        }
        let finite = r.iter().chain(&r_tilde).all(|v| v.is_finite())
            && spectrum
                .eigenvalues
                .iter()
                .chain(&spectrum.c)
                .chain(&spectrum.c_tilde)
                .all(|v| v.is_finite())
            && spectrum.b_constants.iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::Invariant("non-finite scattering data".into()));
        }
        Ok(Self {
            grid,
            r,
            r_tilde,
            spectrum,
            t,
        })
    }

    /// Data of the background `m = 1`.
    pub fn background(grid: SpectralGrid) -> Self {
        let n = grid.len();
        Self {
            grid,
            r: vec![C64::new(0.0, 0.0); n],
            r_tilde: vec![C64::new(0.0, 0.0); n],
            spectrum: DiscreteSpectrum::default(),
            t: 0.0,
        }
    }

    /// Reflectionless data with the given spectrum.
    pub fn reflectionless(grid: SpectralGrid, spectrum: DiscreteSpectrum) -> Result<Self> {
        let n = grid.len();
        let zero = vec![C64::new(0.0, 0.0); n];
        Self::new(grid, zero.clone(), zero, spectrum, 0.0)
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn r(&self) -> &[C64] {
        &self.r
    }

    pub fn r_tilde(&self) -> &[C64] {
        &self.r_tilde
    }

    pub fn spectrum(&self) -> &DiscreteSpectrum {
        &self.spectrum
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The same record stamped with a new time, without evolving it.
    pub fn with_time(&self, t: f64) -> Result<Self> {
        Self::new(
            self.grid.clone(),
            self.r.clone(),
            self.r_tilde.clone(),
            self.spectrum.clone(),
            t,
        )
    }

    /// Data at time `t` from a record stamped `t = 0`.
    pub fn evolve(&self, t: f64) -> Result<Self> {
        if self.t != 0.0 {
            return Err(Error::Invariant(format!(
                "evolution starts from a record at t = 0, this one is at t = {}",
                self.t
            )));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Invariant(format!("evolution time {t} must be nonnegative")));
        }
        let factors: Vec<C64> = self
            .grid
            .nodes()
            .iter()
            .map(|&z| (dispersion(C64::new(z, 0.0)) * t).exp())
            .collect();
        let r = self.r.iter().zip(&factors).map(|(r, f)| r * f).collect();
        let r_tilde = self.r_tilde.iter().zip(&factors).map(|(r, f)| r * f).collect();
        let mut spectrum = self.spectrum.clone();
        for j in 0..spectrum.len() {
            let rate = eigenvalue_rate(spectrum.eigenvalues[j])?;
            spectrum.c[j] *= (rate * t).exp();
            spectrum.c_tilde[j] *= (-rate * t).exp();
        }
        Self::new(self.grid.clone(), r, r_tilde, spectrum, t)
    }

    /// Discretized `H^{1,2}` and `H^{2,1}` norms of `r` in `z`, from
    /// fourth-order differences along the uniform `k`-nodes of each branch.
    pub fn reflection_norms(&self) -> WeightedNormReport {
        let half = self.grid.half();
        let h = self.grid.k_spacing();
        let mut acc = [[0.0f64; 3]; 2];
        let mut l1 = 0.0;
        for branch in 0..2 {
            let range = branch * half..(branch + 1) * half;
            let re: Vec<f64> = self.r[range.clone()].iter().map(|v| v.re).collect();
            let im: Vec<f64> = self.r[range.clone()].iter().map(|v| v.im).collect();
            let (dre, dim) = (fd4_derivative(&re, h), fd4_derivative(&im, h));
            let (ddre, ddim) = (fd4_derivative(&dre, h), fd4_derivative(&dim, h));
            for (j, &z) in self.grid.nodes()[range].iter().enumerate() {
                let kz = 1.0 + 1.0 / (z * z);
                let kzz = -2.0 / (z * z * z);
                let f = C64::new(re[j], im[j]);
                let df = C64::new(dre[j], dim[j]) * kz;
                let ddf = C64::new(ddre[j], ddim[j]) * kz * kz + C64::new(dre[j], dim[j]) * kzz;
                let w = h / kz;
                let x2 = 1.0 + z * z;
                for (slot, g) in [f, df, ddf].iter().enumerate() {
                    acc[0][slot] += w * x2 * g.norm_sqr();
                    acc[1][slot] += w * x2 * x2 * g.norm_sqr();
                }
                l1 += w * f.norm();
            }
        }
        WeightedNormReport {
            h21: acc[0].iter().map(|v| v.sqrt()).sum(),
            h12: acc[1][0].sqrt() + acc[1][1].sqrt(),
            l1,
        }
    }

    /// Discretized Y-norm: reflection norms plus `sum |z_j| + sum |c_j|`.
    pub fn y_norm(&self) -> f64 {
        let n = self.reflection_norms();
        n.h21
            + n.h12
            + self.spectrum.eigenvalues.iter().map(|z| z.norm()).sum::<f64>()
            + self.spectrum.c.iter().map(|c| c.norm()).sum::<f64>()
    }

    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let n = self.grid.len();
        let mut reciprocal: f64 = 0.0;
        let mut negation: f64 = 0.0;
        let mut tilde_modulus: f64 = 0.0;
        for i in 0..n {
            let r = self.r[i];
            reciprocal = reciprocal.max((r - self.r[self.grid.reciprocal_index(i)].conj()).norm());
            negation = negation.max((r + self.r[self.grid.negation_index(i)].conj()).norm());
            tilde_modulus = tilde_modulus.max((self.r_tilde[i].norm() - r.norm()).abs());
        }
        let r_max = self.r.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tail = self
            .grid
            .end_indices()
            .iter()
            .map(|&i| self.r[i].norm())
            .fold(0.0, f64::max);

        let sp = &self.spectrum;
        let n0 = sp.pairs();
        let mut circle: f64 = 0.0;
        let mut lower = true;
        let mut pairing: f64 = 0.0;
        let mut c_pairing: f64 = 0.0;
        let mut tilde_relation: f64 = 0.0;
        let mut exclusion = f64::INFINITY;
        for j in 0..sp.len() {
            let z = sp.eigenvalues[j];
            circle = circle.max((z.norm() - 1.0).abs());
            lower &= z.im < 0.0;
            exclusion = exclusion.min((z + I).norm()).min((z - 1.0).norm()).min((z + 1.0).norm());
            let scale = eigenvalue_rate(z).map(|g| (-2.0 * g * self.t).exp()).unwrap_or(f64::NAN);
            let b2 = sp.b_constants[j] * sp.b_constants[j];
            let expect = sp.c[j] * b2 * scale;
            tilde_relation =
                tilde_relation.max((sp.c_tilde[j] - expect).norm() / sp.c_tilde[j].norm().max(1e-300));
            if j < n0 {
                pairing = pairing.max((sp.eigenvalues[j + n0] + z.conj()).norm());
                c_pairing = c_pairing.max((sp.c[j + n0] - sp.c[j].conj()).norm());
            }
        }

        let norms = self.reflection_norms();
        let y_norm = self.y_norm();
        let mut failures = Vec::new();
        let mut check = |name: &str, value: f64, limit: f64| {
            if !(value <= limit) {
                failures.push(format!("{name} = {value:.3e} exceeds {limit:.1e}"));
            }
        };
        check("reciprocal_symmetry", reciprocal, tol.symmetry);
        check("negation_symmetry", negation, tol.symmetry);
        check("r_tilde_modulus", tilde_modulus, tol.symmetry);
        check("reflection_bound", r_max - 1.0, tol.unitarity);
        check("reflection_tail", tail, tol.reflection_tail * r_max.max(f64::MIN_POSITIVE));
        check("circle", circle, tol.circle);
        check("eigenvalue_pairing", pairing, tol.circle);
        check("norming_pairing", c_pairing, tol.bound_state);
        check("c_tilde_relation", tilde_relation, tol.bound_state);
        if !lower {
            failures.push("eigenvalue outside the lower half plane".into());
        }
        if !sp.is_empty() && exclusion < tol.spectrum_exclusion {
            failures.push(format!("eigenvalue within {exclusion:.3e} of -i or +-1"));
        }
        if !y_norm.is_finite() {
            failures.push("Y-norm is not finite".into());
        }
        ValidationReport {
            reciprocal_symmetry: reciprocal,
            negation_symmetry: negation,
            r_tilde_modulus: tilde_modulus,
            r_max,
            reflection_tail: tail,
            eigenvalues: sp.len(),
            circle,
            eigenvalue_pairing: pairing,
            norming_pairing: c_pairing,
            c_tilde_relation: tilde_relation,
            reflection_norms: norms,
            y_norm,
            failures,
        }
    }

    pub fn to_json(&self) -> String {
        let pairs = |v: &[C64]| v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>();
        let record = Record {
            version: FORMAT_VERSION,
            t: self.t,
            grid: GridRecord {
                zmin: -self.grid.zmax(),
                zmax: self.grid.zmax(),
                n: self.grid.len(),
                offset: SpectralGrid::OFFSET,
                spacing: K_UNIFORM.into(),
            },
            r: pairs(&self.r),
            r_tilde: pairs(&self.r_tilde),
            spectrum: SpectrumRecord {
                z: pairs(&self.spectrum.eigenvalues),
                b: self.spectrum.b_constants.clone(),
                c: pairs(&self.spectrum.c),
                c_tilde: pairs(&self.spectrum.c_tilde),
            },
        };
        serde_json::to_string_pretty(&record).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Corrupt(e.to_string()))?;
        match value.get("version") {
            None => return Err(Error::Corrupt("missing version tag".into())),
            Some(v) if v.as_u64() != Some(FORMAT_VERSION as u64) => {
                return Err(Error::Version(v.to_string()))
            }
            Some(_) => {}
        }
        let record: Record =
            serde_json::from_value(value).map_err(|e| Error::Corrupt(e.to_string()))?;
        let g = &record.grid;
        if g.spacing != K_UNIFORM || g.offset != SpectralGrid::OFFSET || g.zmin != -g.zmax {
            return Err(Error::Corrupt(format!(
                "unsupported grid layout {{zmin: {}, zmax: {}, offset: {}, spacing: {}}}",
                g.zmin, g.zmax, g.offset, g.spacing
            )));
        }
        let grid = SpectralGrid::new(g.zmax, g.n).map_err(|e| Error::Corrupt(e.to_string()))?;
        let complex = |v: &[[f64; 2]]| v.iter().map(|p| C64::new(p[0], p[1])).collect::<Vec<_>>();
        let spectrum = DiscreteSpectrum {
            eigenvalues: complex(&record.spectrum.z),
            b_constants: record.spectrum.b,
            c: complex(&record.spectrum.c),
            c_tilde: complex(&record.spectrum.c_tilde),
        };
        Self::new(
            grid,
            complex(&record.r),
            complex(&record.r_tilde),
            spectrum,
            record.t,
        )
        .map_err(|e| Error::Corrupt(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

const K_UNIFORM: &str = "k-uniform";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    version: u32,
    t: f64,
    grid: GridRecord,
    r: Vec<[f64; 2]>,
    r_tilde: Vec<[f64; 2]>,
    spectrum: SpectrumRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRecord {
    zmin: f64,
    zmax: f64,
    n: usize,
    offset: f64,
    spacing: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumRecord {
    z: Vec<[f64; 2]>,
    b: Vec<f64>,
    c: Vec<[f64; 2]>,
    c_tilde: Vec<[f64; 2]>,
}

/// Residual of every record invariant; `failures` is empty when all pass.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub reciprocal_symmetry: f64,
    pub negation_symmetry: f64,
    /// `max | |r~| - |r| |`, zero when `r~ conj(a) = r a`.
    pub r_tilde_modulus: f64,
    pub r_max: f64,
    pub reflection_tail: f64,
    pub eigenvalues: usize,
    pub circle: f64,
    /// `max |z_{j+N0} + conj z_j|`.
    pub eigenvalue_pairing: f64,
    /// `max |c_{j+N0} - conj c_j|`.
    pub norming_pairing: f64,
    /// Relative residual of `c~_j = b_j^2 e^{-2 g_j t} c_j`.
    pub c_tilde_relation: f64,
    pub reflection_norms: WeightedNormReport,
    pub y_norm: f64,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reciprocal_symmetry={:e}", self.reciprocal_symmetry)?;
        writeln!(f, "negation_symmetry={:e}", self.negation_symmetry)?;
        writeln!(f, "r_tilde_modulus={:e}", self.r_tilde_modulus)?;
        writeln!(f, "r_max={:e}", self.r_max)?;
        writeln!(f, "reflection_tail={:e}", self.reflection_tail)?;
        writeln!(f, "eigenvalues={}", self.eigenvalues)?;
        writeln!(f, "circle={:e}", self.circle)?;
        writeln!(f, "eigenvalue_pairing={:e}", self.eigenvalue_pairing)?;
        writeln!(f, "norming_pairing={:e}", self.norming_pairing)?;
        writeln!(f, "c_tilde_relation={:e}", self.c_tilde_relation)?;
        write!(f, "{}", self.reflection_norms)?;
        writeln!(f, "y_norm={:e}", self.y_norm)?;
        for msg in &self.failures {
            writeln!(f, "FAIL {msg}")?;
        }
        writeln!(f, "status={}", if self.passed() { "pass" } else { "fail" })
    }
}
