//! Dense regular-representation matrices for finite models.

#![allow(dead_code)]

use kazhdan::ball::{enumerate_ball, Ball, DEFAULT_CAP};
use kazhdan::groups::GroupModel;
use nalgebra::{DMatrix, SymmetricEigen};

/// The whole group, as a ball of radius `|G|`.
pub fn whole_group<M: GroupModel>(model: &M) -> Ball<M::Element> {
    let order = model.order().expect("finite model") as usize;
    let ball = enumerate_ball(model, order, DEFAULT_CAP).unwrap();
    assert_eq!(ball.len(), order);
    ball
}

/// Right regular action of `Σ c_g g`: the row of `h` has `c_g` at `h g`.
pub fn regular<M: GroupModel>(model: &M, ball: &Ball<M::Element>, terms: &[(M::Element, f64)]) -> DMatrix<f64> {
    let n = ball.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, h) in ball.elements().iter().enumerate() {
        for (g, c) in terms {
            let j = ball.index_of(&model.multiply(h, g)).unwrap();
            m[(i, j)] += c;
        }
    }
    m
}

pub fn laplacian_matrix<M: GroupModel>(model: &M, ball: &Ball<M::Element>) -> DMatrix<f64> {
    let mut terms = vec![(model.identity(), model.generators().len() as f64)];
    terms.extend(model.generators().iter().map(|s| (s.clone(), -1.0)));
    regular(model, ball, &terms)
}

pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut v: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn smallest_nonzero(m: &DMatrix<f64>) -> f64 {
    eigenvalues(m).into_iter().find(|&x| x > 1e-9).expect("nonzero eigenvalue")
}
