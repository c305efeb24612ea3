#![allow(dead_code)]

use num_complex::Complex64 as C64;

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, n: usize) -> C64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += f(a + i as f64 * h) * w;
    }
    s * (h / 3.0)
}

pub fn simpson_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    simpson(|x| C64::new(f(x), 0.0), a, b, n).re
}

/// `PV int_{-l}^{l} f(s) / (s - z) ds` by singularity subtraction.
pub fn principal_value<F: Fn(f64) -> C64>(f: F, z: f64, l: f64, n: usize) -> C64 {
    let fz = f(z);
    let g = |s: f64| {
        let d = s - z;
        if d.abs() < 1e-9 {
            // Central difference for the removable point.
            (f(z + 1e-6) - f(z - 1e-6)) / 2e-6
        } else {
            (f(s) - fz) / d
        }
    };
    simpson(g, -l, l, n) + fz * ((l - z) / (l + z)).ln()
}

pub fn gaussian_fixture_mass() -> f64 {
    0.1 * std::f64::consts::PI.sqrt()
}

/// Adaptive Dormand-Prince 5(4) integrator for `v' = f(x, v)` with a
/// 2-vector state. Used as an independent reference for the Jost solutions.
pub fn dopri5<F>(f: F, x0: f64, x1: f64, v0: [C64; 2], rtol: f64, atol: f64) -> [C64; 2]
where
    F: Fn(f64, [C64; 2]) -> [C64; 2],
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let dir = (x1 - x0).signum();
    let mut x = x0;
    let mut v = v0;
    let mut h = 1e-3 * dir;
    while (x1 - x) * dir > 0.0 {
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let mut k = [[C64::new(0.0, 0.0); 2]; 7];
        for s in 0..7 {
            let mut vs = v;
            for (j, kj) in k.iter().enumerate().take(s) {
                for c in 0..2 {
                    vs[c] += kj[c] * (h * A[s][j]);
                }
            }
            k[s] = f(x + C[s] * h, vs);
        }
        let mut v5 = v;
        let mut err = 0.0f64;
        for c in 0..2 {
            let mut d5 = C64::new(0.0, 0.0);
            let mut d4 = C64::new(0.0, 0.0);
            for s in 0..7 {
                d5 += k[s][c] * B5[s];
                d4 += k[s][c] * B4[s];
            }
            v5[c] += d5 * h;
            let sc = atol + rtol * v[c].norm().max(v5[c].norm());
            err = err.max(((d5 - d4) * h).norm() / sc);
        }
        if err <= 1.0 {
            x += h;
            v = v5;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    v
}

pub fn gaussian_potential() -> mch_core::spectral_core::Potential {
    use mch_core::spectral_core::{Potential, SpatialGrid};
    Potential::from_fn(SpatialGrid::new(-30.0, 30.0, 1024).unwrap(), |x| 0.1 * (-x * x).exp()).unwrap()
}

/// Scattering data of the Gaussian fixture at `t = 0` on the default grid.
pub fn gaussian_data() -> &'static mch_core::scattering_data::ScatteringData {
    use mch_core::config::PipelineConfig;
    static S: std::sync::OnceLock<mch_core::scattering_data::ScatteringData> = std::sync::OnceLock::new();
    S.get_or_init(|| {
        let cfg = PipelineConfig::default();
        mch_core::direct_scattering::scatter(
            &gaussian_potential(),
            &cfg.spectral_grid().unwrap(),
            &cfg.eigen,
            &cfg.tolerances,
        )
        .unwrap()
        .data
    })
}

/// One eigenvalue pair `z_1 = e^{-i pi/4}`, `z_2 = -conj z_1`, with `c = c~ = 1`
/// and `b = 1`, and no reflection.
pub fn single_pair_spectrum() -> mch_core::direct_scattering::DiscreteSpectrum {
    let z1 = C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let one = C64::new(1.0, 0.0);
    mch_core::direct_scattering::DiscreteSpectrum {
        eigenvalues: vec![z1, -z1.conj()],
        b_constants: vec![1.0, 1.0],
        c: vec![one, one],
        c_tilde: vec![one, one],
    }
}
