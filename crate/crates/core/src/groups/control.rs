//! Control groups used as oracles: finite abelian groups, `Z^d`, `S_3` and
//! free groups.

use super::free::{FreeWord, SignedPlace};
use super::{CanonicalKey, GroupModel};

/// `Z/m_1 x ... x Z/m_k` with generators `±e_i` (a single `e_i` when `m_i = 2`).
#[derive(Clone, Debug)]
pub struct CyclicProduct {
    orders: Vec<u64>,
    generators: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl CyclicProduct {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(!orders.is_empty() && orders.iter().all(|&m| m >= 2), "factor orders must be >= 2");
        let k = orders.len();
        let mut generators = Vec::new();
        let mut labels = Vec::new();
        for (i, &m) in orders.iter().enumerate() {
            let mut plus = vec![0i64; k];
            plus[i] = 1;
            generators.push(plus);
            labels.push(format!("+e{}", i + 1));
            if m > 2 {
                let mut minus = vec![0i64; k];
                minus[i] = m as i64 - 1;
                generators.push(minus);
                labels.push(format!("-e{}", i + 1));
            }
        }
        CyclicProduct { orders, generators, labels }
    }

    pub fn cyclic(m: u64) -> Self {
        Self::new(vec![m])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// The element with the given residues.
    pub fn element(&self, residues: &[i64]) -> Vec<i64> {
        residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &m)| r.rem_euclid(m as i64))
            .collect()
    }
}

impl GroupModel for CyclicProduct {
    type Element = Vec<i64>;

    fn descriptor(&self) -> String {
        self.orders.iter().map(|m| format!("z{m}")).collect::<Vec<_>>().join("x")
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.orders.len()]
    }

    fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        self.labels[index].clone()
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), &m)| (x + y).rem_euclid(m as i64))
            .collect()
    }

    fn invert(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(&self.orders).map(|(x, &m)| (-x).rem_euclid(m as i64)).collect()
    }

    fn key(&self, a: &Vec<i64>) -> CanonicalKey {
        CanonicalKey(a.clone())
    }

    fn order(&self) -> Option<u64> {
        Some(self.orders.iter().product())
    }

    /// Negation of one factor at a time.
    fn symmetry_generator_count(&self) -> usize {
        self.orders.len()
    }

    fn apply_symmetry(&self, generator: usize, a: &Vec<i64>) -> Vec<i64> {
        let mut out = a.clone();
        let m = self.orders[generator] as i64;
        out[generator] = (-out[generator]).rem_euclid(m);
        out
    }
}

/// `Z^d` with generators `±e_i`.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    d: usize,
    generators: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn new(d: usize) -> Self {
        assert!(d >= 1);
        let mut generators = Vec::with_capacity(2 * d);
        for i in 0..d {
            for s in [1, -1] {
                let mut v = vec![0i64; d];
                v[i] = s;
                generators.push(v);
            }
        }
        IntegerLattice { d, generators }
    }
}

impl GroupModel for IntegerLattice {
    type Element = Vec<i64>;

    fn descriptor(&self) -> String {
        format!("zd:{}", self.d)
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.d]
    }

    fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        let sign = if index % 2 == 0 { '+' } else { '-' };
        format!("{sign}e{}", index / 2 + 1)
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn invert(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn key(&self, a: &Vec<i64>) -> CanonicalKey {
        CanonicalKey(a.clone())
    }

    /// Adjacent coordinate swaps and negation of the first coordinate.
    fn symmetry_generator_count(&self) -> usize {
        self.d
    }

    fn apply_symmetry(&self, generator: usize, a: &Vec<i64>) -> Vec<i64> {
        let mut out = a.clone();
        if generator + 1 < self.d {
            out.swap(generator, generator + 1);
        } else {
            out[0] = -out[0];
        }
        out
    }
}

/// The symmetric group on three points with the transpositions `(1 2)` and
/// `(2 3)` as generators. Products apply the left factor first.
#[derive(Clone, Debug)]
pub struct Symmetric3 {
    generators: Vec<[u8; 3]>,
}

impl Default for Symmetric3 {
    fn default() -> Self {
        Symmetric3 { generators: vec![[1, 0, 2], [0, 2, 1]] }
    }
}

impl Symmetric3 {
    pub fn new() -> Self {
        Self::default()
    }
}

impl GroupModel for Symmetric3 {
    type Element = [u8; 3];

    fn descriptor(&self) -> String {
        "s3".to_string()
    }

    fn identity(&self) -> [u8; 3] {
        [0, 1, 2]
    }

    fn generators(&self) -> &[[u8; 3]] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        ["(1 2)", "(2 3)"][index].to_string()
    }

    fn multiply(&self, a: &[u8; 3], b: &[u8; 3]) -> [u8; 3] {
        [b[a[0] as usize], b[a[1] as usize], b[a[2] as usize]]
    }

    fn invert(&self, a: &[u8; 3]) -> [u8; 3] {
        let mut out = [0u8; 3];
        for (i, &v) in a.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        out
    }

    fn key(&self, a: &[u8; 3]) -> CanonicalKey {
        CanonicalKey(a.iter().map(|&v| v as i64).collect())
    }

    fn order(&self) -> Option<u64> {
        Some(6)
    }

    /// Conjugation by `(1 3)`, which swaps the two generators.
    fn symmetry_generator_count(&self) -> usize {
        1
    }

    fn apply_symmetry(&self, _generator: usize, a: &[u8; 3]) -> [u8; 3] {
        let c = [2u8, 1, 0];
        self.multiply(&self.multiply(&c, a), &c)
    }
}

/// The free group `F_n` with generators `z_i^{±1}`.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    n: usize,
    generators: Vec<FreeWord>,
}

impl FreeGroup {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let generators = (1..=n as u32)
            .flat_map(|i| {
                [FreeWord::letter(SignedPlace::pos(i)), FreeWord::letter(SignedPlace::neg(i))]
            })
            .collect();
        FreeGroup { n, generators }
    }
}

impl GroupModel for FreeGroup {
    type Element = FreeWord;

    fn descriptor(&self) -> String {
        format!("free:{}", self.n)
    }

    fn identity(&self) -> FreeWord {
        FreeWord::identity()
    }

    fn generators(&self) -> &[FreeWord] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        self.generators[index].to_string()
    }

    fn multiply(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        a.concat(b)
    }

    fn invert(&self, a: &FreeWord) -> FreeWord {
        a.inverse()
    }

    fn key(&self, a: &FreeWord) -> CanonicalKey {
        CanonicalKey(a.letters().iter().map(|l| l.signed() as i64).collect())
    }

    fn symmetry_generator_count(&self) -> usize {
        self.n
    }

    fn apply_symmetry(&self, generator: usize, a: &FreeWord) -> FreeWord {
        let n = self.n as u32;
        FreeWord::from_letters(a.letters().iter().map(|&l| {
            let i = l.index();
            if generator + 1 < self.n {
                let (x, y) = (generator as u32 + 1, generator as u32 + 2);
                let j = if i == x { y } else if i == y { x } else { i };
                SignedPlace::new(j, l.is_positive())
            } else if i == 1 || n == 1 {
                l.inverse()
            } else {
                l
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::contract_tests::check_contract;

    #[test]
    fn cyclic_generators() {
        let z5 = CyclicProduct::cyclic(5);
        assert_eq!(z5.generators(), &[vec![1], vec![4]]);
        assert_eq!(z5.descriptor(), "z5");
        let z2z2 = CyclicProduct::new(vec![2, 2]);
        assert_eq!(z2z2.generators().len(), 2);
        assert_eq!(z2z2.descriptor(), "z2xz2");
        assert_eq!(z2z2.order(), Some(4));
        let samples: Vec<Vec<i64>> = (0..5).map(|i| vec![i]).collect();
        check_contract(&z5, &samples);
    }

    #[test]
    fn s3_is_a_group_of_order_six() {
        let s3 = Symmetric3::new();
        let g = s3.generators();
        let samples = vec![
            g[0],
            g[1],
            s3.multiply(&g[0], &g[1]),
            s3.multiply(&g[1], &g[0]),
            s3.multiply(&s3.multiply(&g[0], &g[1]), &g[0]),
        ];
        check_contract(&s3, &samples);
        assert_eq!(s3.apply_symmetry(0, &g[0]), g[1]);
    }

    #[test]
    fn lattice_and_free_contracts() {
        let z2 = IntegerLattice::new(2);
        check_contract(&z2, &[vec![1, 0], vec![-2, 3], vec![0, 5]]);
        let f2 = FreeGroup::new(2);
        let g = f2.generators().to_vec();
        let samples = vec![g[0].clone(), f2.multiply(&g[0], &g[2]), f2.multiply(&g[3], &g[1])];
        check_contract(&f2, &samples);
        for k in 0..f2.symmetry_generator_count() {
            for s in &g {
                assert!(g.contains(&f2.apply_symmetry(k, s)));
            }
        }
    }
}
