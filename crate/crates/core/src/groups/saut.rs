//! `SAut(F_n)` generated by the transvections `E_ab`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::free::{reduce, FreeWord, SignedPlace};
use super::matrix::MatElement;
use super::{CanonicalKey, GroupError, GroupModel};
use crate::symmetry::SignedPermutation;

/// The transvection `E_ab`: sends `a` to `ab` and fixes every other basis
/// letter. Requires `place(a) != place(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorLabel {
    pub a: SignedPlace,
    pub b: SignedPlace,
}

impl GeneratorLabel {
    pub fn new(a: SignedPlace, b: SignedPlace) -> Result<Self, GroupError> {
        if a.index() == b.index() {
            return Err(GroupError::DegenerateLabel(format!("E({a},{b})")));
        }
        Ok(GeneratorLabel { a, b })
    }

    /// Shorthand taking signed integers, e.g. `label(1, -2)` is `E_{z1 z2^{-1}}`.
    pub fn from_signed(a: i32, b: i32) -> Result<Self, GroupError> {
        let a = SignedPlace::from_signed(a)
            .ok_or_else(|| GroupError::DegenerateLabel("zero place".into()))?;
        let b = SignedPlace::from_signed(b)
            .ok_or_else(|| GroupError::DegenerateLabel("zero place".into()))?;
        Self::new(a, b)
    }

    /// `E_ab^{-1} = E_{a b^{-1}}`.
    pub fn inverse(self) -> Self {
        GeneratorLabel { a: self.a, b: self.b.inverse() }
    }

    pub fn places(self) -> [u32; 2] {
        [self.a.index(), self.b.index()]
    }

    pub fn max_place(self) -> u32 {
        self.a.index().max(self.b.index())
    }

    pub fn involves(self, place: u32) -> bool {
        self.a.index() == place || self.b.index() == place
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E({},{})", self.a, self.b)
    }
}

/// Applies `E_ab` letterwise: `a -> ab`, `a^{-1} -> b^{-1} a^{-1}`.
pub fn apply_transvection(label: GeneratorLabel, w: &FreeWord) -> FreeWord {
    let (a, b) = (label.a, label.b);
    let mut out = Vec::with_capacity(w.len() + 2);
    for &l in w.letters() {
        if l == a {
            out.push(a);
            out.push(b);
        } else if l == a.inverse() {
            out.push(b.inverse());
            out.push(a.inverse());
        } else {
            out.push(l);
        }
    }
    reduce(out)
}

/// An automorphism of `F_n`, stored as the images of the basis letters
/// together with the generator word that produced it.
///
/// Equality, ordering and hashing only look at `(rank, images)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutElement {
    rank: usize,
    images: Vec<FreeWord>,
    word: Vec<GeneratorLabel>,
}

impl PartialEq for AutElement {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}

impl Eq for AutElement {}

impl Hash for AutElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.images.hash(state);
    }
}

impl PartialOrd for AutElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AutElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank, &self.images).cmp(&(other.rank, &other.images))
    }
}

impl AutElement {
    pub fn identity(rank: usize) -> Self {
        AutElement {
            rank,
            images: (1..=rank as u32).map(|i| FreeWord::letter(SignedPlace::pos(i))).collect(),
            word: Vec::new(),
        }
    }

    pub fn generator(rank: usize, label: GeneratorLabel) -> Result<Self, GroupError> {
        Self::from_word(rank, &[label])
    }

    /// The product of the labels, read left to right.
    pub fn from_word(rank: usize, labels: &[GeneratorLabel]) -> Result<Self, GroupError> {
        let mut g = Self::identity(rank);
        for &l in labels {
            g = g.times_generator(l)?;
        }
        Ok(g)
    }

    /// Right multiplication by a single transvection.
    pub fn times_generator(&self, label: GeneratorLabel) -> Result<Self, GroupError> {
        check_label(label, self.rank)?;
        let images = self.images.iter().map(|w| apply_transvection(label, w)).collect();
        let mut word = self.word.clone();
        word.push(label);
        Ok(AutElement { rank: self.rank, images, word })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn word(&self) -> &[GeneratorLabel] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [SignedPlace::pos(i as u32 + 1)])
    }

    /// Applies the automorphism to a word of `F_n`.
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(|i| self.images[i as usize - 1].clone())
    }

    /// `self * other`: first `self`, then `other`. The images of the product
    /// are `other` applied to the images of `self`; the word is the
    /// concatenation.
    pub fn compose(&self, other: &AutElement) -> Result<AutElement, GroupError> {
        if self.rank != other.rank {
            return Err(GroupError::RankMismatch(self.rank, other.rank));
        }
        let images = self.images.iter().map(|w| other.apply(w)).collect();
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(AutElement { rank: self.rank, images, word })
    }

    /// Inverse via the stored word: reverse it and invert every label.
    pub fn invert(&self) -> AutElement {
        let labels: Vec<GeneratorLabel> = self.word.iter().rev().map(|l| l.inverse()).collect();
        Self::from_word(self.rank, &labels).expect("labels of a valid element stay valid")
    }

    /// `(rank, |w_1|, w_1..., |w_2|, w_2..., ...)` with letters as signed places.
    pub fn key(&self) -> CanonicalKey {
        let mut v = Vec::with_capacity(1 + self.images.iter().map(|w| w.len() + 1).sum::<usize>());
        v.push(self.rank as i64);
        for w in &self.images {
            v.push(w.len() as i64);
            v.extend(w.letters().iter().map(|l| l.signed() as i64));
        }
        CanonicalKey(v)
    }
}

fn check_label(label: GeneratorLabel, rank: usize) -> Result<(), GroupError> {
    let m = label.max_place();
    if m as usize > rank {
        return Err(GroupError::PlaceOutOfRange { index: m, rank });
    }
    Ok(())
}

/// The image under `F_n -> Z^n`. Row `i` holds the exponent sums of the image
/// of `z_i`, which makes this a homomorphism for the left-to-right product.
pub fn abelianize(g: &AutElement) -> MatElement {
    let n = g.rank();
    let mut entries = Vec::with_capacity(n * n);
    for w in g.images() {
        entries.extend(w.exponent_sums(n));
    }
    MatElement::new(n, entries)
}

/// Gersten's relations retained in the presentation of `Γ_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationId {
    /// `E_ab E_{a b^{-1}} = 1`
    Inverse,
    /// `[E_ab, E_cd] = 1`
    DisjointCommute,
    /// `[E_ab, E_{a^{-1} c}] = [E_ab, E_{c b^{-1}}] = 1`
    SameTypeCommute,
    /// `[E_ab, E_bc] = E_ac`
    Pentagram,
    /// `[E_ab, E_cb] = 1`
    RightCommute,
}

impl RelationId {
    pub const ALL: [RelationId; 5] = [
        RelationId::Inverse,
        RelationId::DisjointCommute,
        RelationId::SameTypeCommute,
        RelationId::Pentagram,
        RelationId::RightCommute,
    ];

    /// Short tag used in reports.
    pub fn tag(self) -> &'static str {
        match self {
            RelationId::Inverse => "inverse",
            RelationId::DisjointCommute => "disjoint-commute",
            RelationId::SameTypeCommute => "same-type-commute",
            RelationId::Pentagram => "pentagram",
            RelationId::RightCommute => "right-commute",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.tag() == tag)
    }

    pub fn arity(self) -> usize {
        match self {
            RelationId::Inverse => 2,
            RelationId::DisjointCommute => 4,
            _ => 3,
        }
    }
}

fn commutator(x: &AutElement, y: &AutElement) -> AutElement {
    x.compose(y)
        .and_then(|p| p.compose(&x.invert()))
        .and_then(|p| p.compose(&y.invert()))
        .expect("equal ranks")
}

/// Whether the relation holds in the automorphism model of `SAut(F_n)`.
pub fn check_relation(
    relation: RelationId,
    places: &[SignedPlace],
    n: usize,
) -> Result<bool, GroupError> {
    let invalid = |reason: &str| GroupError::InvalidPlaces {
        relation: relation.tag().to_string(),
        reason: reason.to_string(),
    };
    if places.len() != relation.arity() {
        return Err(invalid(&format!("expected {} places, got {}", relation.arity(), places.len())));
    }
    let mut idx: Vec<u32> = places.iter().map(|p| p.index()).collect();
    if let Some(&m) = idx.iter().max() {
        if m as usize > n {
            return Err(GroupError::PlaceOutOfRange { index: m, rank: n });
        }
    }
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != places.len() {
        return Err(invalid("places must be distinct"));
    }
    let e = |a: SignedPlace, b: SignedPlace| {
        AutElement::generator(n, GeneratorLabel::new(a, b).expect("distinct places"))
    };
    let holds = match relation {
        RelationId::Inverse => {
            let (a, b) = (places[0], places[1]);
            e(a, b)?.compose(&e(a, b.inverse())?)?.is_identity()
        }
        RelationId::DisjointCommute => {
            let (a, b, c, d) = (places[0], places[1], places[2], places[3]);
            commutator(&e(a, b)?, &e(c, d)?).is_identity()
        }
        RelationId::SameTypeCommute => {
            let (a, b, c) = (places[0], places[1], places[2]);
            commutator(&e(a, b)?, &e(a.inverse(), c)?).is_identity()
                && commutator(&e(a, b)?, &e(c, b.inverse())?).is_identity()
        }
        RelationId::Pentagram => {
            let (a, b, c) = (places[0], places[1], places[2]);
            commutator(&e(a, b)?, &e(b, c)?) == e(a, c)?
        }
        RelationId::RightCommute => {
            let (a, b, c) = (places[0], places[1], places[2]);
            commutator(&e(a, b)?, &e(c, b)?).is_identity()
        }
    };
    Ok(holds)
}

/// Every ordered tuple of distinct places of `1..=n`, with all sign choices.
pub fn relation_instances(relation: RelationId, n: usize) -> Vec<Vec<SignedPlace>> {
    let k = relation.arity();
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(k);
    fn rec(n: u32, k: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in 1..=n {
            if !current.contains(&i) {
                current.push(i);
                rec(n, k, current, out);
                current.pop();
            }
        }
    }
    let mut tuples = Vec::new();
    rec(n as u32, k, &mut current, &mut tuples);
    for t in tuples {
        for mask in 0..(1u32 << k) {
            out.push(
                t.iter()
                    .enumerate()
                    .map(|(j, &i)| SignedPlace::new(i, mask & (1 << j) == 0))
                    .collect(),
            );
        }
    }
    out
}

/// `SAut(F_n)` with the `4n(n-1)` transvections as generators.
#[derive(Clone, Debug)]
pub struct SAut {
    rank: usize,
    labels: Vec<GeneratorLabel>,
    generators: Vec<AutElement>,
    symmetry: Vec<SignedPermutation>,
}

impl SAut {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 2, "SAut(F_n) needs n >= 2");
        let mut labels = Vec::with_capacity(4 * rank * (rank - 1));
        for i in 1..=rank as u32 {
            for j in 1..=rank as u32 {
                if i == j {
                    continue;
                }
                for (sa, sb) in [(true, true), (true, false), (false, true), (false, false)] {
                    labels.push(GeneratorLabel {
                        a: SignedPlace::new(i, sa),
                        b: SignedPlace::new(j, sb),
                    });
                }
            }
        }
        let generators = labels
            .iter()
            .map(|&l| AutElement::generator(rank, l).expect("in range"))
            .collect();
        SAut { rank, labels, generators, symmetry: SignedPermutation::generating_set(rank) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }
}

impl GroupModel for SAut {
    type Element = AutElement;

    fn descriptor(&self) -> String {
        format!("saut:{}", self.rank)
    }

    fn identity(&self) -> AutElement {
        AutElement::identity(self.rank)
    }

    fn generators(&self) -> &[AutElement] {
        &self.generators
    }

    fn generator_label(&self, index: usize) -> String {
        self.labels[index].to_string()
    }

    fn multiply(&self, a: &AutElement, b: &AutElement) -> AutElement {
        a.compose(b).expect("elements of one model share the rank")
    }

    fn invert(&self, a: &AutElement) -> AutElement {
        a.invert()
    }

    fn key(&self, a: &AutElement) -> CanonicalKey {
        a.key()
    }

    fn is_identity(&self, a: &AutElement) -> bool {
        a.is_identity()
    }

    fn symmetry_generator_count(&self) -> usize {
        self.symmetry.len()
    }

    fn apply_symmetry(&self, generator: usize, a: &AutElement) -> AutElement {
        self.symmetry[generator].act_on_element(a).expect("same rank")
    }
}
