//! The SOS optimum against dense spectra for finite groups, where the
//! largest `ε` with `Δ² - εΔ` a sum of squares is the spectral gap.

mod common;

use common::{laplacian_matrix, smallest_nonzero, whole_group};
use kazhdan::algebra::{convolve, laplacian, AlgebraElement, Rational};
use kazhdan::ball::DEFAULT_CAP;
use kazhdan::groups::{CyclicProduct, GroupModel, IntegerLattice, Symmetric3};
use kazhdan::sos::{build_sos_problem, maximize_epsilon, SolveOptions};

fn eps_star<M: GroupModel>(model: &M, radius: usize) -> f64 {
    let problem = build_sos_problem(model, radius, DEFAULT_CAP).unwrap();
    maximize_epsilon(&problem, &SolveOptions::default(), 1e-4).eps_star
}

#[test]
fn cyclic_gap_matches_dense_spectrum() {
    for m in 3..=8u64 {
        let model = CyclicProduct::cyclic(m);
        let ball = whole_group(&model);
        let gap = smallest_nonzero(&laplacian_matrix(&model, &ball));
        let closed = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / m as f64).cos();
        assert!((gap - closed).abs() < 1e-9, "m = {m}");
        let eps = eps_star(&model, (m / 2) as usize);
        assert!((eps - gap).abs() < 1e-3, "m = {m}: {eps} vs {gap}");
    }
}

#[test]
fn s3_gap_is_one() {
    let model = Symmetric3::new();
    let ball = whole_group(&model);
    let gap = smallest_nonzero(&laplacian_matrix(&model, &ball));
    assert!((gap - 1.0).abs() < 1e-9);
    assert!((eps_star(&model, 3) - 1.0).abs() < 1e-3);
}

#[test]
fn z3_laplacian_square_is_three_laplacian() {
    let model = CyclicProduct::cyclic(3);
    let d: AlgebraElement<_, Rational> = laplacian(&model).unwrap();
    let sq = convolve(&model, &d, &d);
    assert_eq!(sq, d.scale(&Rational::from_integer(3.into())));
}

#[test]
fn lattice_has_no_gap() {
    // amenable, so the optimum tends to zero
    let eps = eps_star(&IntegerLattice::new(2), 2);
    assert!(eps <= 1e-2, "{eps}");
}
