//! The signed-permutation symmetry group `Λ_n` acting on transvection
//! labels, on elements of `SAut(F_n)` and on group-algebra elements.
//!
//! `Ψ_{σ,s}` sends `E_ab` to `E_{σ(a)^{s(a)} σ(b)^{s(b)}}`. Orbits are
//! computed by closure under a generating set (adjacent transpositions and
//! one sign flip), so they are exact for every rank; the full group is only
//! enumerated on request ([`SignedPermutation::all`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::algebra::{AlgebraElement, Scalar};
use crate::ball::Ball;
use crate::groups::{AutElement, GeneratorLabel, GroupError, GroupModel, SignedPlace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("place index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: u32, rank: usize },
    #[error("rank mismatch: permutation of {perm} points, element of rank {element}")]
    RankMismatch { perm: usize, element: usize },
    #[error("not a permutation: {0:?}")]
    NotBijective(Vec<u32>),
    #[error("ball is not stable under the symmetry group (element {0} leaves it)")]
    BallNotStable(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `z_i -> z_{σ(i)}^{s(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    /// `images[i - 1] = σ(i)`
    images: Vec<u32>,
    signs: Vec<i32>,
}

impl SignedPermutation {
    pub fn new(images: Vec<u32>, signs: Vec<i32>) -> Result<Self, SymmetryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(SymmetryError::NotBijective(images));
            }
            seen[v as usize - 1] = true;
        }
        assert_eq!(signs.len(), n, "one sign per place");
        assert!(signs.iter().all(|&s| s == 1 || s == -1), "signs must be ±1");
        Ok(SignedPermutation { images, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { images: (1..=n as u32).collect(), signs: vec![1; n] }
    }

    /// Swaps places `i` and `j` (1-based), all signs positive.
    pub fn transposition(n: usize, i: u32, j: u32) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i as usize - 1, j as usize - 1);
        p
    }

    pub fn sign_flip(n: usize, i: u32) -> Self {
        let mut p = Self::identity(n);
        p.signs[i as usize - 1] = -1;
        p
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Adjacent transpositions followed by the sign flip of place 1.
    pub fn generating_set(n: usize) -> Vec<SignedPermutation> {
        let mut gens: Vec<_> =
            (1..n as u32).map(|i| Self::transposition(n, i, i + 1)).collect();
        gens.push(Self::sign_flip(n, 1));
        gens
    }

    /// All `2^n n!` elements, in a deterministic order.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut perms: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for v in 1..=n as u32 {
                    if !p.contains(&v) {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << n);
        for p in perms {
            for mask in 0..(1u32 << n) {
                let signs = (0..n).map(|i| if mask & (1 << i) == 0 { 1 } else { -1 }).collect();
                out.push(SignedPermutation { images: p.clone(), signs });
            }
        }
        out
    }

    pub fn act_on_place(&self, p: SignedPlace) -> Result<SignedPlace, SymmetryError> {
        let i = p.index() as usize;
        if i == 0 || i > self.rank() {
            return Err(SymmetryError::IndexOutOfRange { index: p.index(), rank: self.rank() });
        }
        Ok(SignedPlace::new(self.images[i - 1], p.sign() * self.signs[i - 1] > 0))
    }

    pub fn act_on_label(&self, l: GeneratorLabel) -> Result<GeneratorLabel, SymmetryError> {
        Ok(GeneratorLabel { a: self.act_on_place(l.a)?, b: self.act_on_place(l.b)? })
    }

    /// Relabels the generator word letterwise and rebuilds the element.
    pub fn act_on_element(&self, g: &AutElement) -> Result<AutElement, SymmetryError> {
        if g.rank() != self.rank() {
            return Err(SymmetryError::RankMismatch { perm: self.rank(), element: g.rank() });
        }
        let word = g
            .word()
            .iter()
            .map(|&l| self.act_on_label(l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AutElement::from_word(g.rank(), &word)?)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &SignedPermutation) -> SignedPermutation {
        let n = self.rank();
        let mut images = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let mid = self.images[i] as usize - 1;
            images[i] = other.images[mid];
            signs[i] = self.signs[i] * other.signs[mid];
        }
        SignedPermutation { images, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.rank();
        let mut images = vec![0; n];
        let mut signs = vec![1; n];
        for i in 0..n {
            let j = self.images[i] as usize - 1;
            images[j] = i as u32 + 1;
            signs[j] = self.signs[i];
        }
        SignedPermutation { images, signs }
    }
}

/// Closure of `item` under the given generator actions.
pub fn orbit_of<T, F>(item: &T, generator_count: usize, act: F) -> BTreeSet<T>
where
    T: Ord + Clone,
    F: Fn(usize, &T) -> T,
{
    let mut seen = BTreeSet::new();
    seen.insert(item.clone());
    let mut frontier = vec![item.clone()];
    while let Some(x) = frontier.pop() {
        for k in 0..generator_count {
            let y = act(k, &x);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    seen
}

/// Groups the input by orbit. Orbits are listed by their smallest member;
/// members are sorted. The union of the parts is the (deduplicated) input.
pub fn orbit_partition<T, F>(items: &[T], generator_count: usize, act: F) -> Vec<Vec<T>>
where
    T: Ord + Clone,
    F: Fn(usize, &T) -> T,
{
    let mut rep_of: BTreeMap<T, T> = BTreeMap::new();
    let mut parts: BTreeMap<T, BTreeSet<T>> = BTreeMap::new();
    for x in items {
        if rep_of.contains_key(x) {
            continue;
        }
        let orbit = orbit_of(x, generator_count, &act);
        let rep = orbit.iter().next().expect("orbit contains the item").clone();
        for y in &orbit {
            rep_of.insert(y.clone(), rep.clone());
        }
        parts.entry(rep).or_default().insert(x.clone());
        for y in items {
            if orbit.contains(y) {
                parts.get_mut(orbit.iter().next().unwrap()).unwrap().insert(y.clone());
            }
        }
    }
    parts.into_values().map(|s| s.into_iter().collect()).collect()
}

/// Orbits of transvection labels under `Λ_n`.
pub fn label_orbits(labels: &[GeneratorLabel], n: usize) -> Result<Vec<Vec<GeneratorLabel>>, SymmetryError> {
    for l in labels {
        if l.max_place() as usize > n {
            return Err(SymmetryError::IndexOutOfRange { index: l.max_place(), rank: n });
        }
    }
    let gens = SignedPermutation::generating_set(n);
    Ok(orbit_partition(labels, gens.len(), |k, l| {
        gens[k].act_on_label(*l).expect("validated")
    }))
}

/// Averages over the symmetry group of the model: each coefficient is spread
/// uniformly over the orbit of its support element. This equals the group
/// average because every orbit point is hit by the same number of group
/// elements.
pub fn average<M: GroupModel, S: Scalar>(
    model: &M,
    x: &AlgebraElement<M::Element, S>,
) -> AlgebraElement<M::Element, S> {
    let count = model.symmetry_generator_count();
    let mut out = AlgebraElement::zero();
    for (g, c) in x.terms() {
        let orbit = orbit_of(g, count, |k, e| model.apply_symmetry(k, e));
        let share = c.clone() / S::from_i64(orbit.len() as i64);
        for h in orbit {
            out.add_term(h, share.clone());
        }
    }
    out
}

/// The permutation of ball indices induced by each symmetry generator.
pub fn ball_permutations<M: GroupModel>(
    model: &M,
    ball: &Ball<M::Element>,
) -> Result<Vec<Vec<usize>>, SymmetryError> {
    (0..model.symmetry_generator_count())
        .map(|k| {
            ball.elements()
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    ball.index_of(&model.apply_symmetry(k, e)).ok_or(SymmetryError::BallNotStable(i))
                })
                .collect()
        })
        .collect()
}

/// Orbit id of every index pair `(i, j)` (row-major) under the simultaneous
/// action of the given index permutations, and the number of orbits.
pub fn pair_orbits(n: usize, perms: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in perms {
        for i in 0..n {
            for j in 0..n {
                let a = find(&mut parent, i * n + j);
                let b = find(&mut parent, p[i] * n + p[j]);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut ids = HashMap::new();
    let mut out = vec![0; n * n];
    for (x, slot) in out.iter_mut().enumerate() {
        let r = find(&mut parent, x);
        let next = ids.len();
        *slot = *ids.entry(r).or_insert(next);
    }
    (out, ids.len())
}

/// Averages a Gram matrix over the permutation matrices the symmetry group
/// induces on a ball index. The result commutes with every such permutation.
pub fn symmetrize_gram(gram: &DMatrix<f64>, perms: &[Vec<usize>]) -> DMatrix<f64> {
    let n = gram.nrows();
    let (orbit, count) = pair_orbits(n, perms);
    let mut sums = vec![0.0; count];
    let mut sizes = vec![0usize; count];
    for i in 0..n {
        for j in 0..n {
            sums[orbit[i * n + j]] += gram[(i, j)];
            sizes[orbit[i * n + j]] += 1;
        }
    }
    DMatrix::from_fn(n, n, |i, j| {
        let o = orbit[i * n + j];
        sums[o] / sizes[o] as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{convolve, laplacian, star, Rational};
    use crate::ball::enumerate_ball;
    use crate::groups::SAut;
    use num_traits::{One, Zero};

    fn lab(a: i32, b: i32) -> GeneratorLabel {
        GeneratorLabel::from_signed(a, b).unwrap()
    }

    #[test]
    fn label_action_examples() {
        let swap = SignedPermutation::transposition(3, 1, 2);
        assert_eq!(swap.act_on_label(lab(1, 2)).unwrap(), lab(2, 1));
        assert_eq!(SignedPermutation::identity(3).act_on_label(lab(1, 2)).unwrap(), lab(1, 2));
        let flip = SignedPermutation::sign_flip(3, 1);
        assert_eq!(flip.act_on_label(lab(1, 2)).unwrap(), lab(-1, 2));
        assert!(SignedPermutation::identity(2).act_on_label(lab(1, 3)).is_err());
    }

    #[test]
    fn element_action_examples() {
        let g = AutElement::from_word(3, &[lab(1, 2), lab(3, -1)]).unwrap();
        assert_eq!(SignedPermutation::identity(3).act_on_element(&g).unwrap(), g);
        let swap = SignedPermutation::transposition(3, 1, 2);
        let e12 = AutElement::generator(3, lab(1, 2)).unwrap();
        assert_eq!(swap.act_on_element(&e12).unwrap(), AutElement::generator(3, lab(2, 1)).unwrap());
        assert!(swap.act_on_element(&AutElement::identity(4)).is_err());
    }

    #[test]
    fn group_structure() {
        let all = SignedPermutation::all(3);
        assert_eq!(all.len(), 48);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 48);
        for p in all.iter().take(10) {
            assert_eq!(p.then(&p.inverse()), SignedPermutation::identity(3));
            for q in all.iter().step_by(7) {
                assert!(set.contains(&p.then(q)));
                let l = lab(2, -3);
                assert_eq!(
                    p.then(q).act_on_label(l).unwrap(),
                    q.act_on_label(p.act_on_label(l).unwrap()).unwrap()
                );
            }
        }
        // the generating set reaches the whole group
        let gens = SignedPermutation::generating_set(3);
        let closure = orbit_of(&SignedPermutation::identity(3), gens.len(), |k, p| p.then(&gens[k]));
        assert_eq!(closure.len(), 48);
    }

    #[test]
    fn generator_labels_form_one_orbit() {
        for (n, size) in [(3usize, 24usize), (4, 48)] {
            let labels = SAut::new(n).labels().to_vec();
            let orbits = label_orbits(&labels, n).unwrap();
            assert_eq!(orbits.len(), 1);
            assert_eq!(orbits[0].len(), size);
        }
    }

    #[test]
    fn identity_orbit_is_trivial() {
        let model = SAut::new(3);
        let e = model.identity();
        let orbit = orbit_of(&e, model.symmetry_generator_count(), |k, x| model.apply_symmetry(k, x));
        assert_eq!(orbit.len(), 1);
    }

    #[test]
    fn averaging_examples() {
        let model = SAut::new(3);
        let one = AlgebraElement::<AutElement, Rational>::delta(model.identity());
        assert_eq!(average(&model, &one), one);

        let e12 = AutElement::generator(3, lab(1, 2)).unwrap();
        let avg = average(&model, &AlgebraElement::<_, Rational>::delta(e12));
        assert_eq!(avg.support_size(), 24);
        let share = Rational::new(1.into(), 24.into());
        for g in model.generators() {
            assert_eq!(avg.coefficient(g), share);
        }
        assert_eq!(avg.augmentation(), Rational::one());
        assert_eq!(average(&model, &avg), avg);

        let delta = laplacian::<_, Rational>(&model).unwrap();
        assert_eq!(average(&model, &delta), delta);
    }

    #[test]
    fn averaging_agrees_with_full_group_enumeration() {
        // Full Λ_3 average as an independent route.
        let model = SAut::new(3);
        let g = AutElement::from_word(3, &[lab(1, 2), lab(3, -2)]).unwrap();
        let x = AlgebraElement::<AutElement, Rational>::delta(g.clone())
            .add(&AlgebraElement::delta(model.identity()).scale(&Rational::from_integer((-1).into())));
        let all = SignedPermutation::all(3);
        let mut full = AlgebraElement::zero();
        let w = Rational::new(1.into(), (all.len() as i64).into());
        for p in &all {
            for (h, c) in x.terms() {
                full.add_term(p.act_on_element(h).unwrap(), c.clone() * w.clone());
            }
        }
        assert_eq!(average(&model, &x), full);
        // averaging commutes with star
        assert_eq!(average(&model, &star(&model, &x)), star(&model, &average(&model, &x)));
        assert!(average(&model, &x).augmentation().is_zero());
    }

    #[test]
    fn action_is_a_homomorphism_on_ball_pairs() {
        use rand::{Rng, SeedableRng};
        let model = SAut::new(3);
        let ball = enumerate_ball(&model, 2, 1_000_000).unwrap();
        let all = SignedPermutation::all(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = &ball.elements()[rng.gen_range(0..ball.len())];
            let h = &ball.elements()[rng.gen_range(0..ball.len())];
            let p = &all[rng.gen_range(0..all.len())];
            let lhs = p.act_on_element(&model.multiply(g, h)).unwrap();
            let rhs = model.multiply(&p.act_on_element(g).unwrap(), &p.act_on_element(h).unwrap());
            assert_eq!(lhs, rhs);
        }
        // each generator permutes B_2 and preserves lengths
        let perms = ball_permutations(&model, &ball).unwrap();
        for p in &perms {
            let mut seen = p.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..ball.len()).collect::<Vec<_>>());
            for (i, &j) in p.iter().enumerate() {
                assert_eq!(ball.length(i), ball.length(j));
            }
        }
    }

    #[test]
    fn laplacian_square_is_invariant() {
        let model = SAut::new(3);
        let d = laplacian::<_, Rational>(&model).unwrap();
        let d2 = convolve(&model, &d, &d);
        for k in 0..model.symmetry_generator_count() {
            let mut moved = AlgebraElement::zero();
            for (g, c) in d2.terms() {
                moved.add_term(model.apply_symmetry(k, g), c.clone());
            }
            assert_eq!(moved, d2);
        }
    }

    #[test]
    fn gram_symmetrization() {
        let model = SAut::new(3);
        let ball = enumerate_ball(&model, 1, 1000).unwrap();
        let perms = ball_permutations(&model, &ball).unwrap();
        let n = ball.len();
        let id = DMatrix::<f64>::identity(n, n);
        assert_eq!(symmetrize_gram(&id, &perms), id);
        let m = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 11) as f64);
        let s = symmetrize_gram(&(&m + m.transpose()), &perms);
        let (_, orbit_count) = pair_orbits(n, &perms);
        let mut distinct: Vec<f64> = s.iter().copied().collect();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert!(distinct.len() <= orbit_count);
        for p in &perms {
            for i in 0..n {
                for j in 0..n {
                    assert!((s[(p[i], p[j])] - s[(i, j)]).abs() < 1e-12);
                }
            }
        }
    }
}
