//! Sum-of-squares certification of `Δ² - εΔ`.
//!
//! A decomposition `Δ² - εΔ = Σ ξ_i* ξ_i` with `ξ_i` supported on the ball
//! `B_d` is a positive semidefinite Gram matrix `P` over `B_d` whose pairing
//! `Σ_{g_i^{-1} g_j = t} P_ij` matches the target coefficient at every `t`
//! of `B_{2d}`. The solver searches for `P` in floating point; certification
//! rounds it to rationals and re-checks everything exactly.

mod certify;
mod solver;

use nalgebra::DMatrix;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{convolve, laplacian, AlgebraError, Rational, Scalar};
use crate::ball::{enumerate_ball, Ball, BallError};
use crate::groups::GroupModel;
use crate::symmetry::{ball_permutations, symmetrize_gram};

pub use certify::{
    absorption_weights, round_and_certify, verify_certificate, CertifyOptions, GramCertificate,
    SolverMetadata, VerifyFailure, VerifyReport,
};
pub use solver::{
    maximize_epsilon, solve_feasibility, EpsilonSearch, Method, SolveOptions, SolveResult,
    SolveStatus,
};

#[derive(Debug, Error)]
pub enum SosError {
    #[error("Gram support radius must be at least 1")]
    ZeroRadius,
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("certification failed: certified epsilon {certified} <= 0 (residual l1 norm {residual_l1})")]
    CertificationFailed { certified: f64, residual_l1: f64 },
    #[error("Gram matrix has dimension {found}, problem needs {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// The linear data of the SOS feasibility problem over `B_d`.
#[derive(Clone, Debug)]
pub struct SosProblem<E> {
    descriptor: String,
    ball: Ball<E>,
    extended: Ball<E>,
    generator_count: usize,
    /// Extended-ball index of `g_i^{-1} g_j`, row-major over `N x N`.
    pair_row: Vec<u32>,
    row_sizes: Vec<usize>,
    delta: Vec<Rational>,
    delta_sq: Vec<Rational>,
    /// Index permutations of `B_d` induced by the model's symmetry generators.
    symmetry: Vec<Vec<usize>>,
}

/// Builds the constraint rows for Gram support `B_d`.
pub fn build_sos_problem<M: GroupModel>(
    model: &M,
    radius: usize,
    cap: usize,
) -> Result<SosProblem<M::Element>, SosError> {
    if radius == 0 {
        return Err(SosError::ZeroRadius);
    }
    let extended = enumerate_ball(model, 2 * radius, cap)?;
    let prefix = extended.prefix_len(radius);
    let ball = enumerate_ball(model, radius, cap)?;
    debug_assert_eq!(ball.len(), prefix);
    let n = ball.len();
    let inverses: Vec<_> = ball.elements().iter().map(|g| model.invert(g)).collect();
    let mut pair_row = vec![0u32; n * n];
    let mut row_sizes = vec![0usize; extended.len()];
    for i in 0..n {
        for j in 0..n {
            let t = extended
                .index_of(&model.multiply(&inverses[i], &ball.elements()[j]))
                .expect("B_d^{-1} B_d lies in B_2d");
            pair_row[i * n + j] = t as u32;
            row_sizes[t] += 1;
        }
    }
    let d = laplacian::<_, Rational>(model)?;
    let d2 = convolve(model, &d, &d);
    let mut delta = vec![Rational::zero(); extended.len()];
    let mut delta_sq = vec![Rational::zero(); extended.len()];
    for (g, c) in d.terms() {
        delta[extended.index_of(g).expect("Δ lies in B_1")] = c.clone();
    }
    for (g, c) in d2.terms() {
        delta_sq[extended.index_of(g).expect("Δ² lies in B_2")] = c.clone();
    }
    let symmetry = ball_permutations(model, &ball).unwrap_or_default();
    Ok(SosProblem {
        descriptor: model.descriptor(),
        ball,
        extended,
        generator_count: model.generators().len(),
        pair_row,
        row_sizes,
        delta,
        delta_sq,
        symmetry,
    })
}

impl<E: Clone + Eq + std::hash::Hash> SosProblem<E> {
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    /// Gram dimension `|B_d|`.
    pub fn dim(&self) -> usize {
        self.ball.len()
    }

    pub fn row_count(&self) -> usize {
        self.extended.len()
    }

    pub fn ball(&self) -> &Ball<E> {
        &self.ball
    }

    pub fn extended(&self) -> &Ball<E> {
        &self.extended
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn row_of(&self, i: usize, j: usize) -> usize {
        self.pair_row[i * self.dim() + j] as usize
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    /// Index pairs of every constraint row.
    pub fn rows(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.dim();
        let mut rows = vec![Vec::new(); self.row_count()];
        for i in 0..n {
            for j in 0..n {
                rows[self.row_of(i, j)].push((i, j));
            }
        }
        rows
    }

    pub fn symmetry(&self) -> &[Vec<usize>] {
        &self.symmetry
    }

    /// Coefficients of `Δ² - εΔ` over the extended ball.
    pub fn target(&self, epsilon: &Rational) -> Vec<Rational> {
        self.delta_sq.iter().zip(&self.delta).map(|(a, b)| a - epsilon * b).collect()
    }

    pub fn target_f64(&self, epsilon: f64) -> Vec<f64> {
        self.delta_sq
            .iter()
            .zip(&self.delta)
            .map(|(a, b)| a.to_f64() - epsilon * b.to_f64())
            .collect()
    }

    /// Row sums `A(P)` in floating point.
    pub fn pairing_f64(&self, p: &DMatrix<f64>) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; self.row_count()];
        for j in 0..n {
            for i in 0..n {
                out[self.pair_row[i * n + j] as usize] += p[(i, j)];
            }
        }
        out
    }

    /// Row sums `A(P)` in exact arithmetic (`p` row-major).
    pub fn pairing_exact(&self, p: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.row_count()];
        for (k, v) in p.iter().enumerate() {
            if !v.is_zero() {
                out[self.pair_row[k] as usize] += v;
            }
        }
        out
    }

    /// Averages a Gram matrix over the symmetry group acting on the ball.
    pub fn symmetrize(&self, gram: &DMatrix<f64>) -> DMatrix<f64> {
        symmetrize_gram(gram, &self.symmetry)
    }
}
