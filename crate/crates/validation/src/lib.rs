//! Acceptance measurements for the inverse scattering pipeline.
//!
//! Each criterion is measured on shared fixtures and reported as an
//! [`Outcome`] with the measured values and their thresholds.

use std::cell::OnceCell;
use std::fmt;
use std::time::{Duration, Instant};

use mch_core::config::PipelineConfig;
use mch_core::direct_scattering::{scatter, DiscreteSpectrum, JostSolver, ScatterOutput};
use mch_core::pde_oracle::{self, PdeState};
use mch_core::reconstruction::{Profile, Reconstructor};
use mch_core::rh_solver::{BealsCoifmanSystem, Plane, Pole, Side};
use mch_core::scattering_data::ScatteringData;
use mch_core::spectral_core::{CauchyOps, Potential, SpatialGrid, SpectralGrid};
use mch_core::{Mat2, Result, Tolerances, C64};

/// Times at which the evolved solution is compared with the PDE oracle.
pub const TIMES: [f64; 3] = [0.1, 0.25, 0.5];

/// Tail tolerance for re-scattering a reconstructed profile; its ends sit
/// near 2e-9 because `x(y)` only reaches `|x| ~ 30`.
const RESCATTER_TAIL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

/// `m0 - 1 = 0.1 exp(-x^2)` on 1024 nodes of `[-30, 30]`.
pub fn gaussian_potential() -> Potential {
    Potential::from_fn(SpatialGrid::new(-30.0, 30.0, 1024).expect("grid"), |x| 0.1 * (-x * x).exp())
        .expect("potential")
}

/// One eigenvalue pair `e^{-i pi/4}`, `-e^{i pi/4}` with unit constants and no
/// reflection.
pub fn reflectionless_data() -> Result<ScatteringData> {
    let z1 = C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let one = C64::new(1.0, 0.0);
    let spectrum = DiscreteSpectrum {
        eigenvalues: vec![z1, -z1.conj()],
        b_constants: vec![1.0, 1.0],
        c: vec![one, one],
        c_tilde: vec![one, one],
    };
    ScatteringData::reflectionless(SpectralGrid::new(20.05, 1024)?, spectrum)
}

/// Evolved record at one of [`TIMES`] with its reconstruction.
pub struct Evolved {
    pub t: f64,
    pub reconstructor: Reconstructor,
    pub profile: Profile,
}

/// Gaussian fixture: scattered and reconstructed at `t = 0` (timed), with
/// evolved reconstructions and PDE runs computed on first use.
pub struct Fixture {
    pub config: PipelineConfig,
    pub potential: Potential,
    pub scattered: ScatterOutput,
    pub reconstructor: Reconstructor,
    pub profile: Profile,
    pub round_trip_time: Duration,
    evolved: OnceCell<std::result::Result<Vec<Evolved>, String>>,
    pde: OnceCell<std::result::Result<Vec<PdeState>, String>>,
}

impl Fixture {
    pub fn new() -> Result<Self> {
        let config = PipelineConfig::default();
        let potential = gaussian_potential();
        let start = Instant::now();
        let scattered = scatter(&potential, &config.spectral_grid()?, &config.eigen, &config.tolerances)?;
        let reconstructor = Reconstructor::new(&scattered.data, &config.tolerances)?;
        let profile = reconstructor.profile(&config.y_grid()?)?;
        let round_trip_time = start.elapsed();
        Ok(Self {
            config,
            potential,
            scattered,
            reconstructor,
            profile,
            round_trip_time,
            evolved: OnceCell::new(),
            pde: OnceCell::new(),
        })
    }

    fn tol(&self) -> &Tolerances {
        &self.config.tolerances
    }

    pub fn evolved(&self) -> Result<&[Evolved]> {
        let cached = self.evolved.get_or_init(|| {
            let ygrid = self.config.y_grid().map_err(|e| e.to_string())?;
            TIMES
                .iter()
                .map(|&t| {
                    let sd = self.scattered.data.evolve(t)?;
                    let reconstructor = Reconstructor::new(&sd, self.tol())?;
                    let profile = reconstructor.profile(&ygrid)?;
                    Ok(Evolved {
                        t,
                        reconstructor,
                        profile,
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.to_string())
        });
        cached.as_deref().map_err(|e| mch_core::Error::Invariant(e.clone()))
    }

    pub fn pde(&self) -> Result<&[PdeState]> {
        let cached = self.pde.get_or_init(|| {
            TIMES
                .iter()
                .map(|&t| pde_oracle::run(&self.potential, t, None, self.tol().tail).map(|r| r.state))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.to_string())
        });
        cached.as_deref().map_err(|e| mch_core::Error::Invariant(e.clone()))
    }
}

/// Criterion 1: reconstruction of the initial profile from its own data.
fn round_trip(fx: &Fixture) -> Result<(bool, String)> {
    let dev = fx.profile.deviation_from_potential(&fx.potential);
    let secs = fx.round_trip_time.as_secs_f64();
    let passed = dev.max_abs <= 1e-3 && secs <= 300.0;
    Ok((
        passed,
        format!(
            "max |m - m0| = {:.3e} (<= 1e-3), rel L2 = {:.3e}, runtime {secs:.1} s (<= 300 s)",
            dev.max_abs, dev.rel_l2
        ),
    ))
}

/// Criterion 2: `|a|^2 - |b|^2 = 1` on the real spectral grid.
fn unitarity(fx: &Fixture) -> Result<(bool, String)> {
    let u = fx.scattered.reflection.unitarity;
    Ok((u <= 1e-8, format!("max ||a|^2 - |b|^2 - 1| = {u:.3e} (<= 1e-8)")))
}

/// Criterion 3: `a(-i)` against `exp(+mass/2)`.
fn trace_identity(fx: &Fixture) -> Result<(bool, String)> {
    let a = JostSolver::new(&fx.potential)?.a_at(C64::new(0.0, -1.0))?;
    let mass = fx.potential.mass();
    let expect = (0.5 * mass).exp();
    let rel = (a - expect).norm() / expect;
    let flipped = (a - (-0.5 * mass).exp()).norm() / expect;
    Ok((
        rel <= 1e-6,
        format!(
            "a(-i) = {:.10} {:+.2e}i, exp(+mass/2) = {expect:.10}, relative {rel:.3e} (<= 1e-6); \
             against exp(-mass/2) {flipped:.3e}",
            a.re, a.im
        ),
    ))
}

/// Criterion 4: reciprocal and negation symmetry of `r`.
fn symmetry(fx: &Fixture) -> Result<(bool, String)> {
    let rep = &fx.scattered.reflection;
    let v = fx.scattered.data.validate(fx.tol());
    let worst = rep
        .symmetry()
        .max(v.reciprocal_symmetry)
        .max(v.negation_symmetry);
    Ok((
        worst <= 1e-6,
        format!(
            "r(z) vs conj r(1/z) {:.3e}, r(z) vs -conj r(-z) {:.3e} (<= 1e-6)",
            rep.reciprocal_symmetry.max(v.reciprocal_symmetry),
            rep.negation_symmetry.max(v.negation_symmetry)
        ),
    ))
}

/// Row `row` of the solution with simple poles only: column 0 has poles
/// `col0`, column 1 has poles `col1`, each with residue `coef * M_other(at)`.
/// The values `u_j = M_0(b_j)`, `v_i = M_1(a_i)` solve `u = d0 + A v`,
/// `v = d1 + B u`, so `(I - A B) u = d0 + A d1`.
fn residue_only_row(row: usize, col0: &[Pole], col1: &[Pole], w: C64) -> [C64; 2] {
    let (d0, d1) = if row == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
    let a = |j: usize, i: usize| col0[i].coef / (col1[j].at - col0[i].at);
    let b = |i: usize, j: usize| col1[j].coef / (col0[i].at - col1[j].at);
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    let mut rhs = [C64::new(d0, 0.0); 2];
    for (j, mj) in m.iter_mut().enumerate() {
        for (l, mjl) in mj.iter_mut().enumerate() {
            let ab: C64 = (0..2).map(|i| a(j, i) * b(i, l)).sum();
            *mjl = if j == l { 1.0 - ab } else { -ab };
        }
        rhs[j] += (0..2).map(|i| a(j, i) * d1).sum::<C64>();
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let u = [
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det,
    ];
    let v: Vec<C64> = (0..2).map(|i| d1 + (0..2).map(|j| b(i, j) * u[j]).sum::<C64>()).collect();
    let c0 = d0 + (0..2).map(|i| col0[i].coef * v[i] / (w - col0[i].at)).sum::<C64>();
    let c1 = d1 + (0..2).map(|j| col1[j].coef * u[j] / (w - col1[j].at)).sum::<C64>();
    [c0, c1]
}

/// Closed-form solution for two poles per column and no jump.
pub fn residue_only(poles: &[Pole], w: C64) -> Option<Mat2> {
    let col0: Vec<Pole> = poles.iter().copied().filter(|p| p.column == 0).collect();
    let col1: Vec<Pole> = poles.iter().copied().filter(|p| p.column == 1).collect();
    if col0.len() != 2 || col1.len() != 2 {
        return None;
    }
    Some(Mat2::from_rows(
        residue_only_row(0, &col0, &col1, w),
        residue_only_row(1, &col0, &col1, w),
    ))
}

/// Criterion 5: collocation solve against the closed form on reflectionless data.
fn reflectionless(_: &Fixture) -> Result<(bool, String)> {
    let sd = reflectionless_data()?;
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let probes = [
        C64::new(0.0, 1.0),
        C64::new(0.0, 0.0),
        C64::new(2.0, -0.5),
        C64::new(-0.3, 1.7),
    ];
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    // 20 values of y in [-28.5, 28.5], each solved on its own side.
    for s in 0..20 {
        let y = -28.5 + 3.0 * s as f64;
        let side = if y >= 0.0 { Side::Left } else { Side::Right };
        let sys = BealsCoifmanSystem::assemble(&sd, y, side, Plane::Z, &ops, &tol)?;
        let poles = sys.poles.clone();
        let sol = sys.solve(&tol)?;
        for &w in &probes {
            let Some(exact) = residue_only(&poles, w) else {
                return Ok((false, format!("expected two poles per column, got {}", poles.len())));
            };
            worst = worst.max((sol.eval(w) - exact).max_abs());
        }
        samples += 1;
    }
    Ok((
        worst <= 1e-10,
        format!("max |M - M_exact| = {worst:.3e} over {samples} y values (<= 1e-10)"),
    ))
}

/// Criterion 6: evolved solution against the PDE oracle, and isospectrality
/// of the evolved profiles.
fn pde_agreement(fx: &Fixture) -> Result<(bool, String)> {
    let evolved = fx.evolved()?;
    let pde = fx.pde()?;
    let z0 = &fx.scattered.data.spectrum().eigenvalues;
    let mut tol = fx.tol().clone();
    tol.tail = RESCATTER_TAIL;
    let grid = fx.config.spectral_grid()?;
    let mut worst_l2: f64 = 0.0;
    let mut worst_ist_shift: f64 = 0.0;
    let mut worst_pde_shift: f64 = 0.0;
    let mut per_time = Vec::new();
    for (e, state) in evolved.iter().zip(pde) {
        let dev = e.profile.deviation_from_potential(&state.potential()?);
        worst_l2 = worst_l2.max(dev.rel_l2);
        per_time.push(format!("t={} {:.2e}", e.t, dev.rel_l2));
        let resampled = e.profile.resample(fx.potential.grid())?;
        for (q, shift) in [(&resampled, &mut worst_ist_shift), (&state.potential()?, &mut worst_pde_shift)] {
            let z = scatter(q, &grid, &fx.config.eigen, &tol)?.data.spectrum().eigenvalues.clone();
            if z.len() != z0.len() {
                return Ok((false, format!("t = {}: {} eigenvalues, expected {}", e.t, z.len(), z0.len())));
            }
            for (a, b) in z.iter().zip(z0) {
                *shift = shift.max((a - b).norm());
            }
        }
    }
    let passed = worst_l2 <= 1e-2 && worst_ist_shift <= 1e-4 && worst_pde_shift <= 1e-4;
    Ok((
        passed,
        format!(
            "rel L2 [{}] (<= 1e-2); eigenvalue shift {:.3e} from IST m(t), {:.3e} from PDE m(t) (<= 1e-4), {} eigenvalues",
            per_time.join(", "),
            worst_ist_shift,
            worst_pde_shift,
            z0.len()
        ),
    ))
}

/// Criterion 7: left and right problems agree at `y = 0`.
fn matching(fx: &Fixture) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut recs = vec![(0.0, &fx.reconstructor)];
    recs.extend(fx.evolved()?.iter().map(|e| (e.t, &e.reconstructor)));
    for (_, rec) in &recs {
        let (l, r) = rec.matched_origin()?;
        worst = worst.max((l.m - r.m).abs());
    }
    Ok((
        worst <= 1e-6,
        format!("max |m_l(0) - m_r(0)| = {worst:.3e} over t = 0, 0.1, 0.25, 0.5 (<= 1e-6)"),
    ))
}

/// Criterion 8: `m_x` from the k-plane problem against `m dm/dy` with `dm/dy`
/// from central differences of the z-plane `m`.
fn derivative(fx: &Fixture) -> Result<(bool, String)> {
    let rec = &fx.reconstructor;
    let delta = 1e-2;
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in -20..=20 {
        let y = 0.3 * j as f64;
        let pt = rec.at(y)?;
        let dm = (rec.at(y + delta)?.m - rec.at(y - delta)?.m) / (2.0 * delta);
        err = err.max((pt.m_x - pt.m * dm).abs());
        scale = scale.max(pt.m_x.abs());
    }
    let rel = err / scale;
    Ok((
        rel <= 1e-3,
        format!("max |m_x - m dm/dy| / max |m_x| = {rel:.3e} at 41 y values, step {delta} (<= 1e-3)"),
    ))
}

/// Criterion 9: decay of the collocation density `mu - I` away from `y = 0`.
fn density_decay(fx: &Fixture) -> Result<(bool, String)> {
    let sd = &fx.scattered.data;
    let ops = CauchyOps::new(sd.grid());
    let tol = fx.tol();
    let deviation = |y: f64| -> Result<f64> {
        let sol = BealsCoifmanSystem::assemble(sd, y, Side::Left, Plane::Z, &ops, tol)?.solve(tol)?;
        Ok(sol
            .density()
            .iter()
            .map(|m| (*m - Mat2::identity()).max_abs())
            .fold(0.0, f64::max))
    };
    let (d0, d30) = (deviation(0.0)?, deviation(30.0)?);
    let ratio = d30 / d0;
    Ok((
        ratio <= 0.1,
        format!("max |mu - I| = {d0:.3e} at y = 0, {d30:.3e} at y = 30, ratio {ratio:.3e} (<= 0.1)"),
    ))
}

/// Criterion 10: conservation of `int (m - 1) dx` in both pipelines.
fn conservation(fx: &Fixture) -> Result<(bool, String)> {
    let spread = |v: &[f64]| {
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max) - v.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let mut ist = vec![fx.profile.mass()];
    ist.extend(fx.evolved()?.iter().map(|e| e.profile.mass()));
    let mut pde = vec![PdeState::new(&fx.potential, fx.tol().tail)?.mass()];
    pde.extend(fx.pde()?.iter().map(|s| s.mass()));
    let (si, sp) = (spread(&ist), spread(&pde));
    let cross = ist.iter().zip(&pde).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((
        si <= 1e-6 && sp <= 1e-6,
        format!(
            "spread over t = 0..0.5: IST {si:.3e}, PDE {sp:.3e} (<= 1e-6); IST vs PDE {cross:.3e}, mass {:.10}",
            pde[0]
        ),
    ))
}

/// Measures one criterion: whether it passed and a line of measured values.
pub type Measure = fn(&Fixture) -> Result<(bool, String)>;

pub const CRITERIA: [(u8, &str, Measure); 10] = [
    (1, "round trip at t = 0", round_trip),
    (2, "unitarity", unitarity),
    (3, "a(-i) trace identity", trace_identity),
    (4, "reflection symmetries", symmetry),
    (5, "reflectionless closed form", reflectionless),
    (6, "evolution vs PDE oracle", pde_agreement),
    (7, "left/right matching at y = 0", matching),
    (8, "k-plane m_x vs finite differences", derivative),
    (9, "density decay", density_decay),
    (10, "mass conservation", conservation),
];

/// All criteria in order; a fixture failure fails every criterion.
pub fn run_all() -> Vec<Outcome> {
    let fx = Fixture::new().map_err(|e| format!("fixture failed: {e}"));
    CRITERIA
        .iter()
        .map(|&(id, name, measure)| {
            let (passed, detail) = match &fx {
                Ok(fx) => measure(fx).unwrap_or_else(|e| (false, format!("error: {e}"))),
                Err(e) => (false, e.clone()),
            };
            Outcome {
                id,
                name,
                passed,
                detail,
            }
        })
        .collect()
}
