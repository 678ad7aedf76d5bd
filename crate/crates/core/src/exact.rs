//! Dense exact linear algebra over the rationals: `LDLᵀ` positive
//! semidefiniteness tests with explicit negative directions, determinants
//! and ranks.

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

/// Outcome of an exact PSD test.
#[derive(Clone, Debug, PartialEq)]
pub enum PsdStatus {
    /// PSD; the pivots of `LDLᵀ` are all nonnegative.
    Psd { rank: usize, pivots: Vec<Rational> },
    /// `vᵀ A v = value < 0`.
    NotPsd { direction: Vec<Rational>, value: Rational },
}

impl PsdStatus {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdStatus::Psd { .. })
    }
}

fn check_square(a: &RatMatrix) -> usize {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    n
}

/// `vᵀ A v`.
pub fn quadratic_form(a: &RatMatrix, v: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (i, row) in a.iter().enumerate() {
        if v[i].is_zero() {
            continue;
        }
        let mut s = Rational::zero();
        for (j, x) in row.iter().enumerate() {
            if !v[j].is_zero() && !x.is_zero() {
                s += x * &v[j];
            }
        }
        total += &v[i] * s;
    }
    total
}

/// Symmetric `LDLᵀ` without pivoting. A zero pivot is accepted only when
/// the rest of its column vanishes; otherwise a two-coordinate direction
/// of negative curvature is produced. The returned direction is mapped back
/// to the original coordinates and satisfies `vᵀ A v = value < 0` exactly.
pub fn ldl_psd(a: &RatMatrix) -> PsdStatus {
    let n = check_square(a);
    for i in 0..n {
        for j in 0..i {
            assert_eq!(a[i][j], a[j][i], "matrix must be symmetric");
        }
    }
    let mut s = a.clone();
    // l[i][k] multipliers below the diagonal
    let mut l: RatMatrix = vec![vec![Rational::zero(); n]; n];
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let d = s[k][k].clone();
        if d.is_negative() {
            let mut u = vec![Rational::zero(); n];
            u[k] = Rational::one();
            return negative(&l, u, a);
        }
        if d.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !s[k][j].is_zero()) {
                let mut u = vec![Rational::zero(); n];
                let t = -(s[j][j].clone() + Rational::one()) / (Rational::from_integer(2.into()) * &s[k][j]);
                u[k] = t;
                u[j] = Rational::one();
                return negative(&l, u, a);
            }
            pivots.push(d);
            continue;
        }
        let col: Vec<Rational> = (k + 1..n).map(|i| &s[i][k] / &d).collect();
        for (off, m) in col.iter().enumerate() {
            let i = k + 1 + off;
            l[i][k] = m.clone();
            if m.is_zero() {
                continue;
            }
            for j in i..n {
                let skj = &s[k][j];
                if skj.is_zero() {
                    continue;
                }
                let v = &s[i][j] - m * skj;
                s[i][j] = v.clone();
                s[j][i] = v;
            }
        }
        pivots.push(d);
    }
    let rank = pivots.iter().filter(|p| !p.is_zero()).count();
    PsdStatus::Psd { rank, pivots }
}

/// Boolean PSD test by fraction-free symmetric elimination on the matrix
/// scaled to integers. Pivot `k` equals the leading principal minor of the
/// pivots kept so far, so every division is exact. A zero pivot whose
/// remaining column vanishes is dropped, as in [`ldl_psd`].
pub fn is_psd(a: &RatMatrix) -> bool {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let n = check_square(a);
    let mut den = BigInt::one();
    for row in a {
        for v in row {
            if !v.denom().is_one() {
                den = den.lcm(v.denom());
            }
        }
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|v| v.numer() * (&den / v.denom())).collect())
        .collect();
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return false;
            }
        }
    }
    let mut prev = BigInt::one();
    let mut alive = vec![true; n];
    for k in 0..n {
        let d = m[k][k].clone();
        if d.is_negative() {
            return false;
        }
        let rest: Vec<usize> = (k + 1..n).filter(|&i| alive[i]).collect();
        if d.is_zero() {
            if rest.iter().any(|&j| !m[k][j].is_zero()) {
                return false;
            }
            alive[k] = false;
            continue;
        }
        for (x, &i) in rest.iter().enumerate() {
            for &j in &rest[x..] {
                let v = (&d * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[j][i] = v.clone();
                m[i][j] = v;
            }
        }
        prev = d;
        alive[k] = false;
    }
    true
}

/// Solves `Lᵀ v = u` for unit lower-triangular `L` and packages the witness.
fn negative(l: &RatMatrix, u: Vec<Rational>, a: &RatMatrix) -> PsdStatus {
    let n = u.len();
    let mut v = u;
    for i in (0..n).rev() {
        let mut acc = v[i].clone();
        for j in i + 1..n {
            if !l[j][i].is_zero() && !v[j].is_zero() {
                acc -= &l[j][i] * &v[j];
            }
        }
        v[i] = acc;
    }
    let value = quadratic_form(a, &v);
    assert!(value.is_negative(), "negative-curvature witness must be strict");
    PsdStatus::NotPsd { direction: v, value }
}

/// Row echelon form by Gaussian elimination; returns `(rank, determinant)`
/// where the determinant is meaningful for square input.
fn eliminate(a: &RatMatrix) -> (usize, Rational) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut det = Rational::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            det = Rational::zero();
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = -det;
        }
        let piv = m[rank][c].clone();
        det *= &piv;
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for j in c..cols {
                let sub = &f * &m[rank][j];
                m[r][j] -= sub;
            }
        }
        rank += 1;
    }
    if rank < rows {
        det = Rational::zero();
    }
    (rank, det)
}

pub fn determinant(a: &RatMatrix) -> Rational {
    check_square(a);
    if a.is_empty() {
        return Rational::one();
    }
    eliminate(a).1
}

pub fn rank(a: &RatMatrix) -> usize {
    eliminate(a).0
}

/// Integer rows as a rational matrix.
pub fn rat_matrix(rows: &[&[i64]]) -> RatMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn psd_examples() {
        let id = rat_matrix(&[&[1, 0], &[0, 1]]);
        assert_eq!(ldl_psd(&id), PsdStatus::Psd { rank: 2, pivots: vec![q(1, 1), q(1, 1)] });
        let bad = rat_matrix(&[&[1, 0], &[0, -1]]);
        match ldl_psd(&bad) {
            PsdStatus::NotPsd { direction, value } => {
                assert_eq!(quadratic_form(&bad, &direction), value);
                assert!(value < Rational::zero());
            }
            s => panic!("{s:?}"),
        }
        // zero pivot followed by a nonzero off-diagonal entry
        let z = rat_matrix(&[&[0, 1], &[1, 0]]);
        assert!(!ldl_psd(&z).is_psd());
        // singular PSD: J = 11ᵀ
        let j = rat_matrix(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]);
        assert!(is_psd(&j) && is_psd(&id) && !is_psd(&bad) && !is_psd(&z));
        assert!(matches!(ldl_psd(&j), PsdStatus::Psd { rank: 1, .. }));
        let zero = rat_matrix(&[&[0, 0], &[0, 0]]);
        assert!(matches!(ldl_psd(&zero), PsdStatus::Psd { rank: 0, .. }));
    }

    #[test]
    fn determinant_and_rank() {
        let m = rat_matrix(&[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(determinant(&m), q(1, 1));
        assert_eq!(rank(&m), 3);
        let s = rat_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&s), q(0, 1));
        assert_eq!(rank(&s), 1);
        let p = rat_matrix(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&p), q(-1, 1));
    }

    proptest! {
        /// Gram matrices `BᵀB` are PSD with rank equal to rank(B); shifting
        /// by `-I` after scaling small exposes a negative direction.
        #[test]
        fn gram_matrices(entries in prop::collection::vec(-4i64..5, 12), shift in 1i64..4) {
            let b: RatMatrix = entries.chunks(4).map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect();
            let n = 4;
            let g: RatMatrix = (0..n).map(|i| (0..n).map(|j| {
                b.iter().fold(Rational::zero(), |acc, row| acc + &row[i] * &row[j])
            }).collect()).collect();
            prop_assert!(is_psd(&g));
            let mut scaled = g.clone();
            for row in scaled.iter_mut() {
                for v in row.iter_mut() {
                    *v = &*v / q(3, 1);
                }
            }
            prop_assert!(is_psd(&scaled));
            match ldl_psd(&g) {
                PsdStatus::Psd { rank: r, .. } => prop_assert_eq!(r, rank(&b)),
                s => prop_assert!(false, "{:?}", s),
            }
            // rank(B) <= 3 < 4, so G - shift*I has a negative eigenvalue
            let mut h = g.clone();
            for (i, row) in h.iter_mut().enumerate() {
                row[i] -= q(shift, 1);
            }
            prop_assert!(!is_psd(&h));
            match ldl_psd(&h) {
                PsdStatus::NotPsd { direction, value } => {
                    prop_assert_eq!(quadratic_form(&h, &direction), value.clone());
                    prop_assert!(value < Rational::zero());
                }
                s => prop_assert!(false, "{:?}", s),
            }
        }
    }
}
