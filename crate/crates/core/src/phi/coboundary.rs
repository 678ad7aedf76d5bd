//! Coboundary forms from the permutation action of `SL(n, Z/2)` on the
//! points of `(Z/2)^n`.
//!
//! A vector `v` on the `2^n` points gives `⟨g - 1, h - 1⟩ = ⟨π(g)v - v,
//! π(h)v - v⟩` with `(π(g)f)(p) = f(p M(g))`, where `M(g)` is the
//! abelianization mod 2. Averaging over place relabelings gives the
//! symmetric values reported here.

use num_traits::{One, Zero};
use serde::Serialize;

use super::rules::delta_letters;
use super::word::SWord;
use super::PhiError;
use crate::algebra::Rational;
use crate::groups::{abelianize, GeneratorLabel};

/// The permutation of points induced by a word: `p -> p M(g)`, points
/// encoded with bit `i - 1` for place `i`.
pub fn point_permutation(n: usize, w: &SWord) -> Result<Vec<usize>, PhiError> {
    let m = abelianize(&w.to_aut(n)?).reduce_mod2();
    Ok((0..1usize << n)
        .map(|p| {
            let mut out = 0usize;
            for (i, row) in m.chunks(n).enumerate() {
                if p >> i & 1 == 1 {
                    for (j, &bit) in row.iter().enumerate() {
                        if bit == 1 {
                            out ^= 1 << j;
                        }
                    }
                }
            }
            out
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct CoboundaryForm {
    n: usize,
    v: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoboundaryReport {
    pub n: usize,
    /// `‖1 - E_ab‖²`
    pub phi_generator: String,
    /// `⟨Δ_ab, Δ_cd⟩` for four distinct places
    pub disjoint: Option<String>,
    /// `⟨Δ_ab, Δ_ac⟩`
    pub adjacent: String,
}

impl CoboundaryForm {
    pub fn new(n: usize, v: Vec<Rational>) -> Result<Self, PhiError> {
        if n < 2 {
            return Err(PhiError::TooFewPlaces { needed: 2, found: n });
        }
        if v.len() != 1 << n {
            return Err(PhiError::Dimension { expected: 1 << n, found: v.len() });
        }
        Ok(CoboundaryForm { n, v })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `π(g)v - v`.
    pub fn cocycle(&self, w: &SWord) -> Result<Vec<Rational>, PhiError> {
        let perm = point_permutation(self.n, w)?;
        Ok(perm.iter().enumerate().map(|(p, &q)| &self.v[q] - &self.v[p]).collect())
    }

    /// `⟨g - 1, h - 1⟩`.
    pub fn pairing(&self, g: &SWord, h: &SWord) -> Result<Rational, PhiError> {
        let (a, b) = (self.cocycle(g)?, self.cocycle(h)?);
        Ok(a.iter().zip(&b).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
    }

    pub fn phi(&self, g: &SWord) -> Result<Rational, PhiError> {
        self.pairing(g, g)
    }

    /// `⟨Δ_ab, Δ_cd⟩` for the unsymmetrized form.
    pub fn delta_pairing(&self, ab: (u32, u32), cd: (u32, u32)) -> Result<Rational, PhiError> {
        let sum = |a: u32, b: u32| -> Result<Vec<Rational>, PhiError> {
            let mut acc = vec![Rational::zero(); 1 << self.n];
            for l in delta_letters(a, b) {
                for (x, y) in acc.iter_mut().zip(self.cocycle(&SWord::letter(l))?) {
                    *x += y;
                }
            }
            Ok(acc)
        };
        let (x, y) = (sum(ab.0, ab.1)?, sum(cd.0, cd.1)?);
        Ok(x.iter().zip(&y).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Values averaged over all ordered tuples of distinct places, which is
    /// the average over signed relabelings since `Δ_ab` is invariant under
    /// sign changes and swapping `a, b`.
    pub fn report(&self) -> Result<CoboundaryReport, PhiError> {
        let n = self.n as u32;
        let places: Vec<u32> = (1..=n).collect();
        let mut gen_sum = Rational::zero();
        let mut gen_count = 0i64;
        for &a in &places {
            for &b in places.iter().filter(|&&b| b != a) {
                for sa in [true, false] {
                    for sb in [true, false] {
                        let l = GeneratorLabel::new(
                            crate::groups::SignedPlace::new(a, sa),
                            crate::groups::SignedPlace::new(b, sb),
                        )?;
                        gen_sum += self.phi(&SWord::letter(l))?;
                        gen_count += 1;
                    }
                }
            }
        }
        let avg = |s: Rational, c: i64| s / Rational::from_integer(c.into());
        let mut adj = Rational::zero();
        let mut adj_count = 0i64;
        let mut dis = Rational::zero();
        let mut dis_count = 0i64;
        for &a in &places {
            for &b in places.iter().filter(|&&b| b != a) {
                for &c in places.iter().filter(|&&c| c != a && c != b) {
                    adj += self.delta_pairing((a, b), (a, c))?;
                    adj_count += 1;
                    for &d in places.iter().filter(|&&d| d != a && d != b && d != c) {
                        dis += self.delta_pairing((a, b), (c, d))?;
                        dis_count += 1;
                    }
                }
            }
        }
        Ok(CoboundaryReport {
            n: self.n,
            phi_generator: avg(gen_sum, gen_count).to_string(),
            disjoint: (dis_count > 0).then(|| avg(dis, dis_count).to_string()),
            adjacent: avg(adj, adj_count).to_string(),
        })
    }
}

/// `zero`, `uniform`, `point:BITS` (bit `i` is the coordinate of place
/// `i`), or `2^n` comma-separated rationals.
pub fn parse_vector_spec(n: usize, spec: &str) -> Result<Vec<Rational>, PhiError> {
    let size = 1usize << n;
    let bad = || PhiError::VectorSpec(spec.to_string());
    match spec {
        "zero" => Ok(vec![Rational::zero(); size]),
        "uniform" => Ok(vec![Rational::one(); size]),
        _ if spec.starts_with("point:") => {
            let bits = &spec["point:".len()..];
            if bits.len() != n || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(bad());
            }
            let idx = bits.chars().enumerate().fold(0usize, |acc, (i, c)| acc | ((c == '1') as usize) << i);
            let mut v = vec![Rational::zero(); size];
            v[idx] = Rational::one();
            Ok(v)
        }
        _ => {
            let v: Vec<Rational> =
                spec.split(',').map(|s| s.trim().parse::<Rational>().map_err(|_| bad())).collect::<Result<_, _>>()?;
            if v.len() != size {
                return Err(PhiError::Dimension { expected: size, found: v.len() });
            }
            Ok(v)
        }
    }
}
