//! The five-point configuration `1, E_ac, E_bc, E_ac E_bc, E_ab`.
//!
//! Squared distances come from the star-value rule. Centered at `1`, the
//! four remaining points must have a positive semidefinite Gram matrix;
//! with `d²(E_ab, E_ac E_bc) = 2` they do not.

use num_traits::{One, Zero};

use super::rules::{gram_cut, star_value};
use super::system::WordConstraint;
use super::word::{e, SWord};
use crate::algebra::Rational;
use crate::exact::{determinant, ldl_psd, rank, PsdStatus, RatMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Figure1Report {
    pub d34: Rational,
    /// Gram matrix over `(E_ac, E_bc, E_ac E_bc, E_ab)` centered at `1`.
    pub gram: RatMatrix,
    pub det: Rational,
    pub psd: bool,
    pub rank: usize,
    /// `uᵀ G u < 0` when not PSD.
    pub direction: Option<Vec<Rational>>,
}

/// Squared distances between `1, E_ac, E_bc, E_ac E_bc, E_ab`, with the
/// last pair set to `d34`.
pub fn figure1_distances(d34: &Rational) -> RatMatrix {
    let i = |v: i64| Rational::from_integer(v.into());
    let mut d = vec![vec![Rational::zero(); 5]; 5];
    let mut set = |a: usize, b: usize, v: Rational| {
        d[a][b] = v.clone();
        d[b][a] = v;
    };
    set(0, 1, i(1));
    set(0, 2, i(1));
    set(0, 4, i(1));
    set(1, 2, i(2));
    set(1, 4, i(2));
    set(2, 4, i(2));
    set(0, 3, i(2));
    set(1, 3, i(1));
    set(2, 3, i(1));
    set(3, 4, d34.clone());
    d
}

pub fn figure1_report(d34: &Rational) -> Figure1Report {
    let d = figure1_distances(d34);
    let half = Rational::new(1.into(), 2.into());
    let gram: RatMatrix = (1..5)
        .map(|a| (1..5).map(|b| &half * (&d[0][a] + &d[0][b] - &d[a][b])).collect())
        .collect();
    let status = ldl_psd(&gram);
    let direction = match &status {
        PsdStatus::NotPsd { direction, .. } => Some(direction.clone()),
        PsdStatus::Psd { .. } => None,
    };
    Figure1Report {
        d34: d34.clone(),
        det: determinant(&gram),
        rank: rank(&gram),
        psd: status.is_psd(),
        gram,
        direction,
    }
}

/// The four centered points as words over places `a, b, c`.
pub fn figure1_points(a: i32, b: i32, c: i32) -> [SWord; 4] {
    [
        SWord::letter(e(a, c)),
        SWord::letter(e(b, c)),
        SWord(vec![e(a, c), e(b, c)]),
        SWord::letter(e(a, b)),
    ]
}

/// Star-value equalities for the star-shaped words behind every edge of
/// the configuration, plus the Gram cut `uᵀ G u >= 0` along the negative
/// direction of the `d34 = 2` configuration.
pub fn figure1_rules(a: i32, b: i32, c: i32) -> Vec<WordConstraint> {
    let stars = [
        SWord::letter(e(a, c)),
        SWord::letter(e(b, c)),
        SWord::letter(e(a, b)),
        SWord(vec![e(a, c), e(b, c)]),
        SWord(vec![e(a, -c), e(b, c)]),
        SWord(vec![e(a, -b), e(a, c)]),
        SWord(vec![e(a, -b), e(b, c)]),
        SWord(vec![e(a, b), e(b, -c)]),
    ];
    let mut out: Vec<WordConstraint> =
        stars.iter().map(|w| star_value(w).expect("star-shaped by construction")).collect();
    let two = Rational::one() + Rational::one();
    let u = figure1_report(&two).direction.expect("d34 = 2 is not PSD");
    out.push(gram_cut(&figure1_points(a, b, c), &u));
    out
}
