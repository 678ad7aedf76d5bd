use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CanonicalKey, GroupModel};

/// An `n x n` integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatElement {
    n: usize,
    entries: Vec<i64>,
}

impl MatElement {
    pub fn new(n: usize, entries: Vec<i64>) -> Self {
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        MatElement { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatElement { n, entries }
    }

    /// `I + sign * e_ij` (0-based indices).
    pub fn elementary(n: usize, i: usize, j: usize, sign: i64) -> Self {
        let mut m = Self::identity(n);
        m.entries[i * n + j] += sign;
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &MatElement) -> MatElement {
        let n = self.n;
        assert_eq!(n, other.n);
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        MatElement { n, entries: out }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.entries.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        (sign * a[n * n - 1]) as i64
    }

    /// Integer inverse of a unimodular matrix via Gauss-Jordan over the
    /// rationals. Returns `None` when the determinant is not `±1`.
    pub fn inverse(&self) -> Option<MatElement> {
        use num_rational::Ratio;
        let n = self.n;
        let det = self.determinant();
        if det != 1 && det != -1 {
            return None;
        }
        let mut a: Vec<Ratio<i128>> =
            self.entries.iter().map(|&v| Ratio::from_integer(v as i128)).collect();
        let mut inv: Vec<Ratio<i128>> = Self::identity(n)
            .entries
            .iter()
            .map(|&v| Ratio::from_integer(v as i128))
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != Ratio::from_integer(0))?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f == Ratio::from_integer(0) {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[r * n + j] -= f * ac;
                    inv[r * n + j] -= f * ic;
                }
            }
        }
        let entries = inv
            .iter()
            .map(|v| {
                debug_assert!(v.is_integer());
                v.to_integer() as i64
            })
            .collect();
        Some(MatElement { n, entries })
    }

    /// `P M P^{-1}` for the signed permutation matrix sending `e_i` to
    /// `signs[i] * e_{perm[i]}`.
    pub fn conjugate_signed_permutation(&self, perm: &[usize], signs: &[i64]) -> MatElement {
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                out[perm[i] * n + perm[j]] = signs[i] * signs[j] * self.entries[i * n + j];
            }
        }
        MatElement { n, entries: out }
    }

    pub fn reduce_mod2(&self) -> Vec<u8> {
        self.entries.iter().map(|v| v.rem_euclid(2) as u8).collect()
    }
}

impl fmt::Display for MatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// `SL(n, Z)` generated by the elementary matrices `I ± e_ij`, `i != j`.
#[derive(Clone, Debug)]
pub struct SpecialLinear {
    n: usize,
    generators: Vec<MatElement>,
    labels: Vec<String>,
}

impl SpecialLinear {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut generators = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for sign in [1, -1] {
                    generators.push(MatElement::elementary(n, i, j, sign));
                    labels.push(format!("E{}{}^{}", i + 1, j + 1, sign));
                }
            }
        }
        SpecialLinear { n, generators, labels }
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

impl GroupModel for SpecialLinear {
    type Element = MatElement;

    fn descriptor(&self) -> String {
        format!("sl:{}", self.n)
    }

    fn identity(&self) -> MatElement {
        MatElement::identity(self.n)
    }

    fn generators(&self) -> &[MatElement] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        self.labels[index].clone()
    }

    fn multiply(&self, a: &MatElement, b: &MatElement) -> MatElement {
        a.mul(b)
    }

    fn invert(&self, a: &MatElement) -> MatElement {
        a.inverse().expect("SL(n,Z) elements are unimodular")
    }

    fn key(&self, a: &MatElement) -> CanonicalKey {
        let mut v = Vec::with_capacity(1 + a.entries.len());
        v.push(self.n as i64);
        v.extend_from_slice(&a.entries);
        CanonicalKey(v)
    }

    /// Conjugation by adjacent transpositions and by the sign flip of `e_1`.
    fn symmetry_generator_count(&self) -> usize {
        self.n
    }

    fn apply_symmetry(&self, generator: usize, a: &MatElement) -> MatElement {
        let n = self.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut signs = vec![1i64; n];
        if generator + 1 < n {
            perm.swap(generator, generator + 1);
        } else {
            signs[0] = -1;
        }
        a.conjugate_signed_permutation(&perm, &signs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::contract_tests::check_contract;

    #[test]
    fn determinant_and_inverse() {
        let m = MatElement::new(3, vec![2, 1, 0, 1, 1, 0, 0, 3, 1]);
        assert_eq!(m.determinant(), 1);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatElement::identity(3));
        assert_eq!(MatElement::new(2, vec![2, 0, 0, 1]).inverse(), None);
        assert_eq!(MatElement::new(2, vec![0, 1, 1, 0]).determinant(), -1);
    }

    #[test]
    fn sl3_contract_and_symmetry() {
        let model = SpecialLinear::new(3);
        assert_eq!(model.generators().len(), 12);
        let g = model.generators();
        let samples = vec![
            g[0].clone(),
            g[3].clone(),
            model.multiply(&g[1], &g[6]),
            model.multiply(&model.multiply(&g[2], &g[9]), &g[4]),
        ];
        check_contract(&model, &samples);
        for k in 0..model.symmetry_generator_count() {
            for s in g {
                let img = model.apply_symmetry(k, s);
                assert!(g.contains(&img));
            }
            let (a, b) = (&samples[2], &samples[3]);
            assert_eq!(
                model.apply_symmetry(k, &model.multiply(a, b)),
                model.multiply(&model.apply_symmetry(k, a), &model.apply_symmetry(k, b))
            );
        }
    }
}
