#![allow(clippy::needless_range_loop)]

mod common;

use mch_core::rh_solver::{theta, BealsCoifmanSystem, Plane, Pole, Side};
use mch_core::scattering_data::ScatteringData;
use mch_core::spectral_core::{CauchyOps, SpectralGrid};
use mch_core::{Error, Mat2, Tolerances};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

fn reflectionless() -> ScatteringData {
    ScatteringData::reflectionless(SpectralGrid::new(20.05, 1024).unwrap(), common::single_pair_spectrum()).unwrap()
}

/// Row `row` of a matrix whose column 0 has simple poles `col0` and column 1
/// has simple poles `col1`, each with residue `coef * M_other(at)`, and no
/// jump. The values `u_j = M_0(b_j)`, `v_i = M_1(a_i)` solve
/// `u = d0 + A v`, `v = d1 + B u`, i.e. `(I - A B) u = d0 + A d1`.
fn residue_only_row(row: usize, col0: &[Pole], col1: &[Pole], w: C64) -> [C64; 2] {
    assert_eq!((col0.len(), col1.len()), (2, 2));
    let (d0, d1) = if row == 0 { (1.0, 0.0) } else { (0.0, 1.0) };
    let a = |j: usize, i: usize| col0[i].coef / (col1[j].at - col0[i].at);
    let b = |i: usize, j: usize| col1[j].coef / (col0[i].at - col1[j].at);
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    let mut rhs = [C64::new(d0, 0.0); 2];
    for j in 0..2 {
        for l in 0..2 {
            let ab: C64 = (0..2).map(|i| a(j, i) * b(i, l)).sum();
            m[j][l] = if j == l { 1.0 - ab } else { -ab };
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

fn residue_only(poles: &[Pole], w: C64) -> Mat2 {
    let col0: Vec<Pole> = poles.iter().copied().filter(|p| p.column == 0).collect();
    let col1: Vec<Pole> = poles.iter().copied().filter(|p| p.column == 1).collect();
    Mat2::from_rows(residue_only_row(0, &col0, &col1, w), residue_only_row(1, &col0, &col1, w))
}

#[test]
fn reflectionless_solve_matches_residue_only_solution() {
    let sd = reflectionless();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let probes = [I, C64::new(0.0, 0.0), C64::new(2.0, -0.5), C64::new(-0.3, 1.7)];
    let mut worst: f64 = 0.0;
    for s in 0..20 {
        let y = 1.5 * s as f64;
        for side in [Side::Left, Side::Right] {
            let y = if side == Side::Left { y } else { -y };
            let sys = BealsCoifmanSystem::assemble(&sd, y, side, Plane::Z, &ops, &tol).unwrap();
            assert_eq!(sys.poles.len(), 4);
            let poles = sys.poles.clone();
            let sol = sys.solve(&tol).unwrap();
            for &w in &probes {
                worst = worst.max((sol.eval(w) - residue_only(&poles, w)).max_abs());
            }
        }
    }
    assert!(worst <= 1e-10, "max deviation {worst:.3e}");
}

#[test]
fn background_solution_is_identity() {
    let sd = ScatteringData::background(SpectralGrid::new(8.0, 64).unwrap());
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let sol = BealsCoifmanSystem::assemble(&sd, 3.0, Side::Left, Plane::Z, &ops, &tol)
        .unwrap()
        .solve(&tol)
        .unwrap();
    let f = sol.functionals();
    assert_eq!(f.at_i, Mat2::identity());
    assert_eq!(f.at_zero, Mat2::identity());
    assert_eq!(f.infinity, Mat2::zero());
    assert_eq!((f.alpha(), f.beta()), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
}

#[test]
fn theta_on_the_circle_is_real() {
    for phi in [0.2, 0.785, 1.3] {
        let z = C64::from_polar(1.0, -phi);
        let y = 4.0;
        let t2 = 2.0 * theta(z, y);
        assert!((t2 - y * z.im).norm() < 1e-14);
    }
}

#[test]
fn jump_factors_multiply_to_minus_reflection_squared() {
    let sd = common::gaussian_data();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    for plane in [Plane::Z, Plane::K] {
        let sys = BealsCoifmanSystem::assemble(sd, 2.0, Side::Left, plane, &ops, &tol).unwrap();
        let r2: Vec<f64> = match plane {
            Plane::Z => sd.r().iter().map(|r| r.norm_sqr()).collect(),
            Plane::K => sd.r()[sd.grid().half()..].iter().map(|r| r.norm_sqr()).collect(),
        };
        for (i, r2) in r2.iter().enumerate() {
            assert!((sys.rho[i] * sys.ell[i] + r2).norm() <= 1e-10);
        }
    }
}

#[test]
fn gaussian_solutions_satisfy_jump_and_symmetry() {
    let sd = common::gaussian_data();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let probes = [C64::new(0.5, 0.8), C64::new(-1.7, 0.3), C64::new(0.1, -2.0)];
    for (y, side) in [(0.0, Side::Left), (5.0, Side::Left), (0.0, Side::Right), (-5.0, Side::Right)] {
        let sol = BealsCoifmanSystem::assemble(sd, y, side, Plane::Z, &ops, &tol)
            .unwrap()
            .solve(&tol)
            .unwrap();
        assert!(sol.residual <= tol.solve);
        assert!(sol.jump_residual() <= tol.jump, "jump {:.3e} at y = {y}", sol.jump_residual());
        assert!(sol.symmetry_residual(&probes) <= 1e-8);
        let f = sol.functionals();
        assert!((f.at_i.det() - 1.0).norm() <= 1e-8);
        assert!(f.zero_structure_residual() <= 1e-8);
        let k = BealsCoifmanSystem::assemble(sd, y, side, Plane::K, &ops, &tol)
            .unwrap()
            .solve(&tol)
            .unwrap();
        assert!(k.jump_residual() <= tol.jump, "k-plane jump {:.3e} at y = {y}", k.jump_residual());
    }
}

#[test]
fn pole_unknowns_are_values_of_the_other_column() {
    let sd = common::gaussian_data();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let sol = BealsCoifmanSystem::assemble(sd, 1.0, Side::Left, Plane::Z, &ops, &tol)
        .unwrap()
        .solve(&tol)
        .unwrap();
    for (p, x) in sol.system.poles.iter().zip(sol.pole_values()) {
        let other = 1 - p.column;
        let m = sol.eval(p.at);
        for row in 0..2 {
            assert!((m.at(row, other) - x[row]).norm() <= 1e-12);
        }
        // Symmetric difference across the pole isolates the residue of `column`.
        let eps = 1e-5;
        let jump = sol.eval(p.at + eps).at(0, p.column) - sol.eval(p.at - eps).at(0, p.column);
        let expect = p.coef * x[0];
        assert!((jump * (0.5 * eps) - expect).norm() <= 1e-8, "{} vs {expect}", jump * (0.5 * eps));
    }
}

#[test]
fn gmres_agrees_with_dense_lu_on_a_small_grid() {
    let grid = SpectralGrid::new(8.0, 64).unwrap();
    let r: Vec<C64> = grid
        .nodes()
        .iter()
        .map(|&z| {
            let k = z - 1.0 / z;
            C64::from_polar(z.signum() * 0.6 * (-0.5 * k * k).exp(), 0.4 * k)
        })
        .collect();
    let mut sp = common::single_pair_spectrum();
    sp.c = vec![C64::new(0.2, 0.5), C64::new(0.2, -0.5)];
    sp.c_tilde = sp.c.clone();
    let sd = ScatteringData::new(grid, r.clone(), r, sp, 0.0).unwrap();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let sys = BealsCoifmanSystem::assemble(&sd, 1.5, Side::Left, Plane::Z, &ops, &tol).unwrap();
    let n = sys.dimension();
    let mut dense = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        for (i, v) in sys.apply(&e).into_iter().enumerate() {
            dense[(i, j)] = v;
        }
    }
    let lu = dense.lu();
    let direct: Vec<DVector<C64>> = (0..2).map(|row| lu.solve(&DVector::from_vec(sys.rhs(row))).unwrap()).collect();
    let sol = sys.solve(&tol).unwrap();
    let density = sol.density();
    let m = sol.system.nodes.len();
    for i in 0..m {
        for row in 0..2 {
            assert!((density[i].at(row, 0) - direct[row][i]).norm() <= 1e-10);
            assert!((density[i].at(row, 1) - direct[row][m + i]).norm() <= 1e-10);
        }
    }
}

#[test]
fn density_decays_away_from_the_origin() {
    let sd = common::gaussian_data();
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let deviation = |y: f64| {
        let sol = BealsCoifmanSystem::assemble(sd, y, Side::Left, Plane::Z, &ops, &tol)
            .unwrap()
            .solve(&tol)
            .unwrap();
        sol.density()
            .iter()
            .map(|m| (*m - Mat2::identity()).max_abs())
            .fold(0.0, f64::max)
    };
    let d: Vec<f64> = [0.0, 10.0, 30.0].iter().map(|&y| deviation(y)).collect();
    assert!(d[1] < d[0] && d[2] <= 0.1 * d[0], "{d:?}");
}

#[test]
fn problems_reject_the_wrong_half_line() {
    let sd = ScatteringData::background(SpectralGrid::new(8.0, 64).unwrap());
    let ops = CauchyOps::new(sd.grid());
    let tol = Tolerances::default();
    let left = BealsCoifmanSystem::assemble(&sd, -1.0, Side::Left, Plane::Z, &ops, &tol);
    assert!(matches!(left, Err(Error::WrongSide { .. })));
    let right = BealsCoifmanSystem::assemble(&sd, 1.0, Side::Right, Plane::K, &ops, &tol);
    assert!(matches!(right, Err(Error::WrongSide { .. })));
    let other = CauchyOps::new(&SpectralGrid::new(8.0, 128).unwrap());
    assert!(matches!(
        BealsCoifmanSystem::assemble(&sd, 1.0, Side::Left, Plane::Z, &other, &tol),
        Err(Error::Grid(_))
    ));
}

#[test]
fn undecayed_reflection_is_rejected() {
    let grid = SpectralGrid::new(8.0, 64).unwrap();
    let r = vec![C64::new(0.1, 0.0); grid.len()];
    let sd = ScatteringData::new(grid, r.clone(), r, Default::default(), 0.0).unwrap();
    let ops = CauchyOps::new(sd.grid());
    let res = BealsCoifmanSystem::assemble(&sd, 1.0, Side::Left, Plane::Z, &ops, &Tolerances::default());
    assert!(matches!(res, Err(Error::Tail(_))));
}
