use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mch_core::direct_scattering::{scatter, ScatterOutput};
use mch_core::pde_oracle;
use mch_core::reconstruction::{Profile, Reconstructor, PROFILE_HEADER};
use mch_core::scattering_data::ScatteringData;
use mch_core::spectral_core::{weighted_norm, Potential, POTENTIAL_HEADER};

use crate::config::RunConfig;
use crate::{CliError, Command, Outcome};

const SUFFIXES: [&str; 5] = [".sd.json", ".profile.txt", ".json", ".txt", ".csv"];

/// Output stem: the input file name without its known suffix.
fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    SUFFIXES
        .iter()
        .find_map(|s| name.strip_suffix(s).filter(|b| !b.is_empty()))
        .unwrap_or(&name)
        .to_string()
}

struct Output {
    dir: PathBuf,
    stem: String,
}

impl Output {
    fn new(cfg: &RunConfig, input: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(&cfg.out).map_err(mch_core::Error::from)?;
        Ok(Self {
            dir: cfg.out.clone(),
            stem: stem(input),
        })
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.stem))
    }

    fn write(&self, suffix: &str, text: &str) -> Result<PathBuf, CliError> {
        let p = self.path(suffix);
        std::fs::write(&p, text).map_err(mch_core::Error::from)?;
        println!("wrote {}", p.display());
        Ok(p)
    }
}

fn time_tag(t: f64) -> String {
    format!(".t{t}")
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Scatter => cmd_scatter(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::Invert => cmd_invert(cfg),
        Command::Roundtrip => cmd_roundtrip(cfg),
        Command::PdeCompare => cmd_pde_compare(cfg),
        Command::Validate => cmd_validate(cfg),
    }
}

fn direct(p: &Potential, cfg: &RunConfig) -> Result<ScatterOutput, CliError> {
    let pc = &cfg.pipeline;
    let grid = pc.spectral_grid()?;
    Ok(scatter(p, &grid, &pc.eigen, &pc.tolerances).map_err(|e| e.at_stage("direct scattering"))?)
}

fn reconstruct(sd: &ScatteringData, cfg: &RunConfig) -> Result<(Reconstructor, Profile), CliError> {
    let stage = format!("reconstruction at t = {}", sd.t());
    let run = || {
        let rec = Reconstructor::new(sd, &cfg.pipeline.tolerances)?;
        let profile = rec.profile(&cfg.pipeline.y_grid()?)?;
        Ok::<_, mch_core::Error>((rec, profile))
    };
    Ok(run().map_err(|e| e.at_stage(stage))?)
}

fn scatter_report(out: &ScatterOutput, cfg: &RunConfig) -> (String, bool) {
    let tol = &cfg.pipeline.tolerances;
    let validation = out.data.validate(tol);
    let mut s = String::from("# mch-ist scatter report\n");
    let r = &out.reflection;
    let _ = writeln!(s, "unitarity={:e}", r.unitarity);
    let _ = writeln!(s, "generic_limit={:e}", r.generic_limit);
    let _ = writeln!(s, "winding={}", out.search.winding);
    let _ = writeln!(s, "contour_evaluations={}", out.search.contour_evaluations);
    let sp = out.data.spectrum();
    for j in 0..sp.len() {
        let (z, c, ct) = (sp.eigenvalues[j], sp.c[j], sp.c_tilde[j]);
        let _ = writeln!(
            s,
            "eigenvalue_{j}={:e},{:e} c={:e},{:e} c_tilde={:e},{:e} b={:e}",
            z.re, z.im, c.re, c.im, ct.re, ct.im, sp.b_constants[j]
        );
    }
    for (j, b) in out.bound_states.iter().enumerate() {
        let _ = writeln!(s, "bound_state_residual_{j}={:e}", b.residual);
    }
    s.push_str(&validation.to_string());
    let pass = validation.passed() && r.unitarity <= tol.unitarity;
    (s, pass)
}

fn reflection_table(out: &ScatterOutput) -> String {
    let mut s = String::from("# z re_r im_r re_r_tilde im_r_tilde re_a im_a re_b im_b\n");
    for v in &out.reflection.samples {
        let _ = writeln!(
            s,
            "{:e} {:e} {:e} {:e} {:e} {:e} {:e} {:e} {:e}",
            v.z, v.r.re, v.r.im, v.r_tilde.re, v.r_tilde.im, v.a.re, v.a.im, v.b.re, v.b.im
        );
    }
    s
}

fn cmd_scatter(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let p = Potential::read(input)?;
    let out = Output::new(cfg, input)?;
    let res = direct(&p, cfg)?;
    out.write(".sd.json", &res.data.to_json())?;
    out.write(".reflection.txt", &reflection_table(&res))?;
    let (report, pass) = scatter_report(&res, cfg);
    out.write(".scatter.txt", &report)?;
    print!("{report}");
    Ok(Outcome::from_pass(pass))
}

fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let sd = ScatteringData::read(input)?;
    let out = Output::new(cfg, input)?;
    let mut pass = true;
    for &t in &cfg.times {
        let ev = sd.evolve(t).map_err(|e| e.at_stage(format!("evolution to t = {t}")))?;
        let report = ev.validate(&cfg.pipeline.tolerances);
        pass &= report.passed();
        out.write(&format!("{}.sd.json", time_tag(t)), &ev.to_json())?;
        println!("t={t} status={}", if report.passed() { "pass" } else { "fail" });
    }
    Ok(Outcome::from_pass(pass))
}

fn checks_text(p: &Profile) -> String {
    let c = p.checks();
    format!(
        "t={}\nmin_m={:e}\nx_increasing={}\ntail={:e}\nhelmholtz_residual={:e}\nmass={:e}\n",
        p.t,
        c.min_m,
        c.x_increasing,
        c.tail,
        c.helmholtz_residual,
        p.mass()
    )
}

fn cmd_invert(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let sd = ScatteringData::read(input)?;
    let out = Output::new(cfg, input)?;
    let (_, profile) = reconstruct(&sd, cfg)?;
    out.write(".profile.txt", &profile.to_text())?;
    print!("{}", checks_text(&profile));
    // Positivity, monotone x and left/right matching are enforced while the
    // profile is built.
    Ok(Outcome::Pass)
}

fn cmd_roundtrip(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let p0 = Potential::read(input)?;
    let out = Output::new(cfg, input)?;
    let res = direct(&p0, cfg)?;
    let (_, scatter_pass) = scatter_report(&res, cfg);
    let (_, profile) = reconstruct(&res.data, cfg)?;
    out.write(&format!("{}.profile.txt", time_tag(0.0)), &profile.to_text())?;
    let dev = profile.deviation_from_potential(&p0);
    let mut table = String::from("# t max_error l2_error rel_l2_error mass_input mass_reconstructed\n");
    let _ = writeln!(
        table,
        "0 {:e} {:e} {:e} {:e} {:e}",
        dev.max_abs,
        dev.l2,
        dev.rel_l2,
        p0.mass(),
        profile.mass()
    );
    out.write(".roundtrip.txt", &table)?;
    print!("{table}");
    Ok(Outcome::from_pass(scatter_pass && dev.max_abs <= cfg.checks.roundtrip))
}

fn spread(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

fn cmd_pde_compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let p0 = Potential::read(input)?;
    let out = Output::new(cfg, input)?;
    let res = direct(&p0, cfg)?;
    let tail = cfg.pipeline.tolerances.tail;
    let mut table = String::from("# t rel_l2_error max_error l2_error mass_ist mass_pde pde_steps\n");
    let mut pass = true;
    let (mut mass_ist, mut mass_pde) = (Vec::new(), Vec::new());
    for &t in &cfg.times {
        let sd = res.data.evolve(t).map_err(|e| e.at_stage(format!("evolution to t = {t}")))?;
        let (_, profile) = reconstruct(&sd, cfg)?;
        let pde = pde_oracle::run(&p0, t, cfg.pde_dt, tail).map_err(|e| e.at_stage(format!("pde oracle to t = {t}")))?;
        let reference = pde.state.potential()?;
        let dev = profile.deviation_from_potential(&reference);
        pass &= dev.rel_l2 <= cfg.checks.compare;
        mass_ist.push(profile.mass());
        mass_pde.push(pde.state.mass());
        let _ = writeln!(
            table,
            "{t} {:e} {:e} {:e} {:e} {:e} {}",
            dev.rel_l2,
            dev.max_abs,
            dev.l2,
            profile.mass(),
            pde.state.mass(),
            pde.steps
        );
        out.write(&format!("{}.profile.txt", time_tag(t)), &profile.to_text())?;
        out.write(&format!("{}.pde.profile.txt", time_tag(t)), &pde.state.to_profile()?.to_text())?;
    }
    let _ = writeln!(
        table,
        "# mass_spread_ist={:e} mass_spread_pde={:e}",
        spread(&mass_ist),
        spread(&mass_pde)
    );
    pass &= spread(&mass_ist) <= cfg.checks.conservation && spread(&mass_pde) <= cfg.checks.conservation;
    out.write(".pde_compare.txt", &table)?;
    print!("{table}");
    Ok(Outcome::from_pass(pass))
}

fn cmd_validate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let input = cfg.input()?;
    let text = std::fs::read_to_string(input).map_err(mch_core::Error::from)?;
    let out = Output::new(cfg, input)?;
    let first = text.lines().next().unwrap_or("").trim();
    let (report, pass) = if text.trim_start().starts_with('{') {
        let sd = ScatteringData::from_json(&text)?;
        let r = sd.validate(&cfg.pipeline.tolerances);
        (format!("kind=scattering_data\nt={}\n{r}", sd.t()), r.passed())
    } else if first.starts_with(PROFILE_HEADER) {
        let p = Profile::parse(&text)?;
        let c = p.checks();
        let pass = c.x_increasing && c.min_m > 0.0;
        (format!("kind=profile\n{}status={}\n", checks_text(&p), status(pass)), pass)
    } else if first == POTENTIAL_HEADER {
        let p = Potential::parse(&text)?;
        let tails = p.check_tails(cfg.pipeline.tolerances.tail);
        let norms = weighted_norm(p.grid(), p.values());
        let mut s = format!("kind=potential\nnodes={}\nmass={:e}\n{norms}", p.grid().len(), p.mass());
        if let Err(e) = &tails {
            let _ = writeln!(s, "FAIL {e}");
        }
        let _ = writeln!(s, "status={}", status(tails.is_ok()));
        (s, tails.is_ok())
    } else {
        return Err(mch_core::Error::Parse {
            line: 1,
            detail: "unrecognized input: expected a potential, a profile or a scattering record".into(),
        }
        .into());
    };
    out.write(".validate.txt", &report)?;
    print!("{report}");
    Ok(Outcome::from_pass(pass))
}

fn status(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}
