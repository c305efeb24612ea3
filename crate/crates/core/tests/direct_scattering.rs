mod common;

use std::f64::consts::PI;
use std::sync::OnceLock;

use mch_core::config::EigenSearch;
use mch_core::direct_scattering::{scatter, JostSolver, ScatterOutput};
use mch_core::spectral_core::{Potential, SpatialGrid, SpectralGrid};
use mch_core::{Error, Mat2, Tolerances};
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

/// Angle of the fourth-quadrant eigenvalue `e^{-i phi}` of the Gaussian
/// fixture, from an adaptive Dormand-Prince 8(5,3) integrator at rtol 1e-12
/// with Brent root finding.
const FIXTURE_PHI: f64 = 0.085_385_175_509_773_56;
/// `c_1` and `c~_1` of the same fixture and integrator.
const FIXTURE_C: C64 = C64::new(0.007_234_462_012_310_475, 0.084_521_372_243_399_6);
const FIXTURE_C_TILDE: C64 = C64::new(0.007_344_646_964_553_216, 0.085_808_680_594_493_92);

fn gaussian() -> Potential {
    Potential::from_fn(SpatialGrid::new(-30.0, 30.0, 1024).unwrap(), |x| {
        0.1 * (-x * x).exp()
    })
    .unwrap()
}

fn solver() -> &'static JostSolver {
    static S: OnceLock<JostSolver> = OnceLock::new();
    S.get_or_init(|| JostSolver::new(&gaussian()).unwrap())
}

fn fixture() -> &'static ScatterOutput {
    static S: OnceLock<ScatterOutput> = OnceLock::new();
    S.get_or_init(|| {
        scatter(
            &gaussian(),
            &SpectralGrid::new(20.05, 1024).unwrap(),
            &EigenSearch::default(),
            &Tolerances::default(),
        )
        .unwrap()
    })
}

#[test]
fn jost_column_matches_adaptive_integrator() {
    let z = C64::new(2.0, 0.0);
    let k = z - 1.0 / z;
    let lam = -(z + 1.0 / z) * 0.5;
    let rhs = |x: f64, v: [C64; 2]| {
        let q = 0.1 * (-x * x).exp();
        let p = q / (I * k);
        let m = 1.0 + q;
        [p * v[0] + lam * p * v[1], -lam * p * v[0] + (I * k * m * 0.5 - p) * v[1]]
    };
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let oracle = common::dopri5(rhs, -30.0, 0.0, [one, zero], 1e-12, 1e-14);

    // x = 0 is not a node of the 1024-point grid; use a finer grid containing it.
    let p = Potential::from_fn(SpatialGrid::new(-30.0, 30.0, 4097).unwrap(), |x| {
        0.1 * (-x * x).exp()
    })
    .unwrap();
    let pair = JostSolver::new(&p).unwrap().solve(z).unwrap();
    let mu = pair.mu_minus[2048];
    // Fourth-order Magnus error at h = 0.015 is below the oracle's own
    // accumulated error.
    assert!((mu.at(0, 0) - oracle[0]).norm() < 5e-11, "{} vs {}", mu.at(0, 0), oracle[0]);
    assert!((mu.at(1, 0) - oracle[1]).norm() < 5e-11);
    for m in pair.mu_minus.iter().chain(&pair.mu_plus) {
        assert!((m.det() - 1.0).norm() < 1e-10);
    }
}

#[test]
fn jost_symmetries() {
    let s = solver();
    let s1 = Mat2::sigma1();
    let s2 = Mat2::sigma2();
    for z in [C64::new(2.0, 0.0), C64::new(0.6, -0.3), C64::new(-0.4, -1.1)] {
        let j = s.solve(z).unwrap();
        let jc = s.solve(z.conj()).unwrap();
        let jn = s.solve(-z).unwrap();
        for i in (0..j.mu_plus.len()).step_by(97) {
            for (m, mc, mn) in [
                (j.mu_plus[i], jc.mu_plus[i], jn.mu_plus[i]),
                (j.mu_minus[i], jc.mu_minus[i], jn.mu_minus[i]),
            ] {
                assert!((m - s1 * mc.conj() * s1).max_abs() < 1e-10 * m.max_abs());
                assert!((m - s2 * mn * s2).max_abs() < 1e-10 * m.max_abs());
            }
        }
    }
}

#[test]
fn background_has_trivial_scattering() {
    let g = SpatialGrid::new(-20.0, 20.0, 256).unwrap();
    let out = scatter(
        &Potential::background(g),
        &SpectralGrid::new(10.0, 128).unwrap(),
        &EigenSearch {
            arc_samples: 256,
            ..EigenSearch::default()
        },
        &Tolerances::default(),
    )
    .unwrap();
    assert!(out.data.spectrum().is_empty());
    assert!(out.data.r().iter().all(|r| r.norm() == 0.0));
    for s in &out.reflection.samples {
        assert!((s.a - 1.0).norm() < 1e-12);
    }
}

#[test]
fn unitarity_and_symmetry_on_the_grid() {
    let rep = &fixture().reflection;
    assert!(rep.unitarity < 1e-8, "{}", rep.unitarity);
    assert!(rep.symmetry() < 1e-6, "{}", rep.symmetry());
    let r_max = rep.samples.iter().map(|s| s.r.norm()).fold(0.0, f64::max);
    assert!(r_max <= 1.0);
    for s in &rep.samples {
        assert!((s.r_tilde * s.a.conj() - s.r * s.a).norm() < 1e-12);
    }
    assert!(rep.generic_limit.is_finite());
}

#[test]
fn reflection_tends_to_generic_limits_at_plus_minus_one() {
    let tol = Tolerances::default();
    for (z, limit) in [(1.0 + 1e-4, -1.0), (1.0 - 1e-4, -1.0), (-1.0 - 1e-4, 1.0)] {
        let r = solver().scattering_at(z, &tol).unwrap().r;
        assert!((r - limit).norm() < 1e-2, "r({z}) = {r}");
    }
}

#[test]
fn coefficients_at_z_two() {
    let s = solver().scattering_at(2.0, &Tolerances::default()).unwrap();
    assert!((s.a.norm_sqr() - s.b.norm_sqr() - 1.0).abs() < 1e-8);
    let (_, _, spread) = solver().coefficients(C64::new(2.0, 0.0)).unwrap();
    assert!(spread < 1e-10, "{spread}");
}

#[test]
fn a_at_minus_i_is_exponential_of_minus_half_mass() {
    let a = solver().a_at(-I).unwrap();
    let expect = (-0.5 * common::gaussian_fixture_mass()).exp();
    assert!(a.im.abs() < 1e-12);
    assert!((a.re - expect).abs() < 1e-6 * expect, "{a} vs {expect}");
}

#[test]
fn eigenvalues_of_gaussian_fixture() {
    let out = fixture();
    let z = &out.data.spectrum().eigenvalues;
    assert_eq!(z.len(), 2);
    let z1 = C64::from_polar(1.0, -FIXTURE_PHI);
    assert!((z[0] - z1).norm() < 1e-9, "{} vs {z1}", z[0]);
    assert_eq!(z[1], -z[0].conj());
    for zj in z {
        assert!((zj.norm() - 1.0).abs() <= 1e-8);
    }
    assert_eq!(out.search.winding, 1);
}

#[test]
fn eigenvalue_count_matches_dense_winding_integral() {
    // Phase increments of a along the boundary of the lower half annulus
    // 0.8 < |z| < 1.2, sampled densely without adaptivity.
    let s = solver();
    let n = 4000;
    let mut path = Vec::new();
    for j in 0..=n {
        let t = j as f64 / n as f64;
        path.push(C64::from_polar(1.2, -PI * (0.002 + 0.996 * t)));
    }
    for j in 0..=n / 10 {
        path.push(C64::from_polar(1.2 - 0.4 * j as f64 / (n / 10) as f64, -PI * 0.998));
    }
    for j in 0..=n {
        let t = j as f64 / n as f64;
        path.push(C64::from_polar(0.8, -PI * (0.998 - 0.996 * t)));
    }
    for j in 0..=n / 10 {
        path.push(C64::from_polar(0.8 + 0.4 * j as f64 / (n / 10) as f64, -PI * 0.002));
    }
    let values: Vec<C64> = path.iter().map(|&z| s.a_at(z).unwrap()).collect();
    let total: f64 = values.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
    let winding = (-total / (2.0 * PI)).round() as usize;
    assert_eq!(winding, fixture().data.spectrum().len());
}

#[test]
fn norming_constants_of_gaussian_fixture() {
    let out = fixture();
    let sp = out.data.spectrum();
    assert!((sp.c[0] - FIXTURE_C).norm() < 1e-8 * FIXTURE_C.norm(), "{}", sp.c[0]);
    assert!((sp.c_tilde[0] - FIXTURE_C_TILDE).norm() < 1e-8 * FIXTURE_C_TILDE.norm());
    for (j, d) in out.bound_states.iter().enumerate() {
        assert!(d.b.im.abs() < 1e-8 * d.b.norm(), "{}", d.b);
        assert!(d.residual < 1e-8);
        let lhs = sp.c[j] * sp.c_tilde[j];
        let rhs = 1.0 / (d.a_prime * d.a_prime);
        assert!((lhs - rhs).norm() < 1e-8 * rhs.norm());
        assert!((sp.c_tilde[j] - sp.b_constants[j].powi(2) * sp.c[j]).norm() < 1e-8);
    }
    assert!((sp.c[1] - sp.c[0].conj()).norm() < 1e-8);
    assert!((sp.c_tilde[1] - sp.c_tilde[0].conj()).norm() < 1e-8);
}

#[test]
fn excluded_points_are_rejected() {
    assert!(matches!(solver().a_at(C64::new(1.0, 0.0)), Err(Error::Domain(_))));
}
