//! Run configuration: defaults, then the TOML file, then command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use mch_core::config::PipelineConfig;
use serde::Deserialize;

use crate::CliError;

/// Pass/fail thresholds of the comparison subcommands.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Checks {
    /// Largest `|m_rec - m_0|` accepted by `roundtrip`.
    pub roundtrip: f64,
    /// Largest relative L2 error of `m - 1` accepted by `pde-compare`.
    pub compare: f64,
    /// Largest spread of `int (m - 1) dx` over the compared times.
    pub conservation: f64,
}

impl Default for Checks {
    fn default() -> Self {
        Self {
            roundtrip: 1e-3,
            compare: 1e-2,
            conservation: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub times: Vec<f64>,
    /// Rayon worker threads; `None` uses one per core.
    pub workers: Option<usize>,
    /// Fixed step for the PDE integrator; `None` picks one from the CFL bound.
    pub pde_dt: Option<f64>,
    pub pipeline: PipelineConfig,
    pub checks: Checks,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            out: PathBuf::from("out"),
            times: vec![0.1, 0.25, 0.5],
            workers: None,
            pde_dt: None,
            pipeline: PipelineConfig::default(),
            checks: Checks::default(),
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Potential, scattering record or profile to read.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest |z| on the spectral grid.
    #[arg(long, global = true)]
    pub zmax: Option<f64>,
    /// Nodes of the spectral grid over both branches.
    #[arg(long, global = true)]
    pub znodes: Option<usize>,
    /// Half-width of the reconstruction y-grid.
    #[arg(long, global = true)]
    pub ymax: Option<f64>,
    /// Odd number of y-nodes.
    #[arg(long, global = true)]
    pub ynodes: Option<usize>,
    /// Comma-separated nonnegative times.
    #[arg(long, global = true, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Fixed PDE time step (default: from the CFL bound).
    #[arg(long = "pde-dt", global = true)]
    pub pde_dt: Option<f64>,
    #[arg(long = "tol-cauchy", global = true)]
    pub tol_cauchy: Option<f64>,
    #[arg(long = "tol-tail", global = true)]
    pub tol_tail: Option<f64>,
    #[arg(long = "tol-solve", global = true)]
    pub tol_solve: Option<f64>,
    #[arg(long = "tol-jump", global = true)]
    pub tol_jump: Option<f64>,
    #[arg(long = "tol-det", global = true)]
    pub tol_det: Option<f64>,
    #[arg(long = "tol-unitarity", global = true)]
    pub tol_unitarity: Option<f64>,
    #[arg(long = "tol-symmetry", global = true)]
    pub tol_symmetry: Option<f64>,
    #[arg(long = "tol-x-dependence", global = true)]
    pub tol_x_dependence: Option<f64>,
    #[arg(long = "tol-circle", global = true)]
    pub tol_circle: Option<f64>,
    #[arg(long = "tol-bound-state", global = true)]
    pub tol_bound_state: Option<f64>,
    #[arg(long = "tol-matching", global = true)]
    pub tol_matching: Option<f64>,
    #[arg(long = "tol-reflection-tail", global = true)]
    pub tol_reflection_tail: Option<f64>,
    #[arg(long = "tol-spectrum-exclusion", global = true)]
    pub tol_spectrum_exclusion: Option<f64>,
    #[arg(long = "tol-alpha-branch", global = true)]
    pub tol_alpha_branch: Option<f64>,
    #[arg(long = "tol-roundtrip", global = true)]
    pub tol_roundtrip: Option<f64>,
    #[arg(long = "tol-compare", global = true)]
    pub tol_compare: Option<f64>,
    #[arg(long = "tol-conservation", global = true)]
    pub tol_conservation: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(mch_core::Error::from)?;
        Self::from_toml(&text)
    }

    /// Defaults, then the file named by `--config`, then the flags.
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let mut c = match &o.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        c.apply(o);
        c.validate()?;
        Ok(c)
    }

    pub fn apply(&mut self, o: &Overrides) {
        fn set<T: Clone>(slot: &mut T, v: &Option<T>) {
            if let Some(v) = v {
                *slot = v.clone();
            }
        }
        if o.input.is_some() {
            self.input = o.input.clone();
        }
        set(&mut self.out, &o.out);
        set(&mut self.times, &o.times);
        if o.workers.is_some() {
            self.workers = o.workers;
        }
        if o.pde_dt.is_some() {
            self.pde_dt = o.pde_dt;
        }
        let p = &mut self.pipeline;
        set(&mut p.zmax, &o.zmax);
        set(&mut p.spectral_nodes, &o.znodes);
        set(&mut p.y_max, &o.ymax);
        set(&mut p.y_nodes, &o.ynodes);
        let t = &mut p.tolerances;
        for (slot, v) in [
            (&mut t.cauchy, o.tol_cauchy),
            (&mut t.tail, o.tol_tail),
            (&mut t.solve, o.tol_solve),
            (&mut t.jump, o.tol_jump),
            (&mut t.det, o.tol_det),
            (&mut t.unitarity, o.tol_unitarity),
            (&mut t.symmetry, o.tol_symmetry),
            (&mut t.x_dependence, o.tol_x_dependence),
            (&mut t.circle, o.tol_circle),
            (&mut t.bound_state, o.tol_bound_state),
            (&mut t.matching, o.tol_matching),
            (&mut t.reflection_tail, o.tol_reflection_tail),
            (&mut t.spectrum_exclusion, o.tol_spectrum_exclusion),
            (&mut t.alpha_branch, o.tol_alpha_branch),
            (&mut self.checks.roundtrip, o.tol_roundtrip),
            (&mut self.checks.compare, o.tol_compare),
            (&mut self.checks.conservation, o.tol_conservation),
        ] {
            set(slot, &v);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.pipeline.validate()?;
        let c = &self.checks;
        for (name, v) in [
            ("roundtrip", c.roundtrip),
            ("compare", c.compare),
            ("conservation", c.conservation),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("check threshold {name} must be positive, got {v}")));
            }
        }
        if self.times.is_empty() || self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(CliError::Config("times must be a nonempty list of nonnegative numbers".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        if let Some(dt) = self.pde_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(CliError::Config(format!("pde_dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }

    pub fn input(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Config("no input file; pass --input or set `input`".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_file_overrides_defaults() {
        let mut c = RunConfig::from_toml(
            "out = \"res\"\ntimes = [1.0]\n[pipeline]\nzmax = 10.0\n[pipeline.tolerances]\nsolve = 1e-9\n",
        )
        .unwrap();
        assert_eq!(c.pipeline.spectral_nodes, 1024);
        assert_eq!(c.pipeline.zmax, 10.0);
        let o = Overrides {
            zmax: Some(12.0),
            tol_jump: Some(1e-5),
            times: Some(vec![0.5, 2.0]),
            ..Overrides::default()
        };
        c.apply(&o);
        assert_eq!(c.pipeline.zmax, 12.0);
        assert_eq!(c.out, PathBuf::from("res"));
        assert_eq!(c.times, vec![0.5, 2.0]);
        assert_eq!(c.pipeline.tolerances.solve, 1e-9);
        assert_eq!(c.pipeline.tolerances.jump, 1e-5);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_and_bad_values_are_rejected() {
        assert!(matches!(RunConfig::from_toml("zmx = 3.0"), Err(CliError::Config(_))));
        let mut c = RunConfig::default();
        c.pipeline.tolerances.cauchy = -1.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.pipeline.y_nodes = 10;
        assert!(c.validate().is_err());
    }
}
