//! Ball enumeration and SOS certificates against independent recomputation.

use std::collections::HashMap;

use kazhdan::algebra::{convolve, laplacian, AlgebraElement, Rational};
use kazhdan::ball::{enumerate_ball, enumerate_cached, BallError, DEFAULT_CAP};
use kazhdan::exact::{ldl_psd, RatMatrix};
use kazhdan::groups::{CyclicProduct, FreeGroup, GroupModel, IntegerLattice, SpecialLinear, Symmetric3};
use kazhdan::sos::{
    build_sos_problem, round_and_certify, solve_feasibility, verify_certificate, CertifyOptions,
    GramCertificate, SolveOptions, SolveStatus, SolverMetadata,
};

#[test]
fn ball_sizes_match_closed_forms() {
    for r in 0..=4usize {
        let lattice = enumerate_ball(&IntegerLattice::new(2), r, DEFAULT_CAP).unwrap();
        assert_eq!(lattice.len(), 2 * r * r + 2 * r + 1);
        let free = enumerate_ball(&FreeGroup::new(2), r, DEFAULT_CAP).unwrap();
        assert_eq!(free.len(), 2 * 3usize.pow(r as u32) - 1);
    }
    assert_eq!(enumerate_ball(&Symmetric3::new(), 5, DEFAULT_CAP).unwrap().len(), 6);
    let sl = enumerate_ball(&SpecialLinear::new(3), 1, DEFAULT_CAP).unwrap();
    assert_eq!(sl.len(), 13);
}

fn check_geodesics<M: GroupModel>(model: &M, radius: usize) {
    let ball = enumerate_ball(model, radius, DEFAULT_CAP).unwrap();
    for (i, g) in ball.elements().iter().enumerate() {
        let word = ball.geodesic(i);
        assert_eq!(word.len(), ball.length(i));
        let prod = word.iter().fold(model.identity(), |acc, &k| model.multiply(&acc, &model.generators()[k]));
        assert_eq!(&prod, g);
        // no generator shortens past the previous sphere
        for s in model.generators() {
            if let Some(l) = ball.length_of(&model.multiply(g, s)) {
                assert!(l + 1 >= ball.length(i) && l <= ball.length(i) + 1);
            }
        }
    }
    assert!(ball.lengths().windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn geodesics_evaluate_to_their_elements() {
    check_geodesics(&FreeGroup::new(2), 3);
    check_geodesics(&IntegerLattice::new(3), 3);
    check_geodesics(&SpecialLinear::new(3), 2);
}

#[test]
fn cache_round_trip_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let model = SpecialLinear::new(3);
    let (a, hit_a) = enumerate_cached(&model, 2, DEFAULT_CAP, Some(dir.path())).unwrap();
    let (b, hit_b) = enumerate_cached(&model, 2, DEFAULT_CAP, Some(dir.path())).unwrap();
    assert!(!hit_a && hit_b);
    assert_eq!(a, b);
    assert!(matches!(
        enumerate_ball(&FreeGroup::new(3), 6, 1000),
        Err(BallError::CapExceeded { cap: 1000, .. })
    ));
}

fn z5_certificate() -> (CyclicProduct, GramCertificate) {
    let model = CyclicProduct::cyclic(5);
    let problem = build_sos_problem(&model, 2, DEFAULT_CAP).unwrap();
    let r = solve_feasibility(&problem, 1.3, &SolveOptions::default(), None);
    assert_eq!(r.status, SolveStatus::Feasible);
    let cert =
        round_and_certify(&model, &problem, &r.gram, 1.3, &CertifyOptions::default(), SolverMetadata::default())
            .unwrap();
    (model, cert)
}

#[test]
fn certificate_identity_recomputed_in_the_group_algebra() {
    let (model, cert) = z5_certificate();
    let ball = enumerate_ball(&model, cert.radius, DEFAULT_CAP).unwrap();
    let n = ball.len();
    assert_eq!(cert.dimension, n);
    // Σ G_ij g_i^{-1} g_j
    let mut sos: AlgebraElement<Vec<i64>, Rational> = AlgebraElement::zero();
    for i in 0..n {
        for j in 0..n {
            let g = model.multiply(&model.invert(&ball.elements()[i]), &ball.elements()[j]);
            sos.add_term(g, cert.gram[i * n + j].clone());
        }
    }
    let by_key: HashMap<_, _> = enumerate_ball(&model, 2 * cert.radius, DEFAULT_CAP)
        .unwrap()
        .elements()
        .iter()
        .map(|g| (model.key(g), g.clone()))
        .collect();
    let residual = AlgebraElement::from_terms(cert.residual.iter().map(|(k, c)| (by_key[k].clone(), c.clone())));
    let d: AlgebraElement<Vec<i64>, Rational> = laplacian(&model).unwrap();
    let target = convolve(&model, &d, &d).sub(&d.scale(&cert.epsilon));
    assert_eq!(target, sos.add(&residual));
    let mat: RatMatrix = cert.gram.chunks(n).map(|r| r.to_vec()).collect();
    assert!(ldl_psd(&mat).is_psd());
    assert!(cert.certified_epsilon <= cert.epsilon);
    assert!(cert.certified_epsilon > Rational::new(13.into(), 10.into()) - Rational::new(1.into(), 1000.into()));
}

#[test]
fn certificate_survives_serialization_and_rejects_tampering() {
    let (_, cert) = z5_certificate();
    let back = GramCertificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    assert!(verify_certificate(&back).valid);
    let mut bad = cert.clone();
    bad.gram[1] += Rational::new(1.into(), 1024.into());
    assert!(!verify_certificate(&bad).valid);
    let mut bad = cert.clone();
    bad.certified_epsilon += Rational::new(1.into(), (1i64 << 20).into());
    assert!(!verify_certificate(&bad).valid);
    let mut bad = cert;
    bad.model = "z7".into();
    assert!(!verify_certificate(&bad).valid);
}
