//! Words over the transvection alphabet, letter types around a hub place,
//! star-shaped recognition and pentagram rewrites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PhiError;
use crate::groups::{AutElement, GeneratorLabel, SignedPlace};

/// A word of transvection labels over abstract places. No reduction is
/// applied; the syntactic length is the letter count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SWord(pub Vec<GeneratorLabel>);

impl SWord {
    pub fn empty() -> Self {
        SWord(Vec::new())
    }

    pub fn letter(l: GeneratorLabel) -> Self {
        SWord(vec![l])
    }

    pub fn letters(&self) -> &[GeneratorLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation of any number of words.
    pub fn cat(parts: &[&SWord]) -> SWord {
        SWord(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn inverse(&self) -> SWord {
        SWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Set of places occurring in the word.
    pub fn support(&self) -> BTreeSet<u32> {
        self.0.iter().flat_map(|l| l.places()).collect()
    }

    /// Occurrence count of every place.
    pub fn support_multiset(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for l in &self.0 {
            for p in l.places() {
                *m.entry(p).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn max_place(&self) -> u32 {
        self.0.iter().map(|l| l.max_place()).max().unwrap_or(0)
    }

    /// The automorphism of `F_rank` the word evaluates to.
    pub fn to_aut(&self, rank: usize) -> Result<AutElement, PhiError> {
        Ok(AutElement::from_word(rank, &self.0)?)
    }

    /// Places renumbered `1, 2, ...` in order of first occurrence, signs kept.
    pub fn compacted(&self) -> SWord {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        let mut relabel = |p: SignedPlace| {
            let next = map.len() as u32 + 1;
            let i = *map.entry(p.index()).or_insert(next);
            SignedPlace::new(i, p.is_positive())
        };
        SWord(self.0.iter().map(|l| GeneratorLabel { a: relabel(l.a), b: relabel(l.b) }).collect())
    }
}

impl fmt::Display for SWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Shorthand for a label from signed place integers; panics on equal places.
pub fn e(a: i32, b: i32) -> GeneratorLabel {
    GeneratorLabel::from_signed(a, b).expect("distinct nonzero places")
}

/// Position of a letter relative to a hub place `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LetterType {
    /// `E_{x z}`
    HubLeft,
    /// `E_{x̄ z}`
    InvHubLeft,
    /// `E_{z x}`
    HubRight,
    /// `E_{z x̄}`
    InvHubRight,
}

impl LetterType {
    pub const ALL: [LetterType; 4] =
        [LetterType::HubLeft, LetterType::InvHubLeft, LetterType::HubRight, LetterType::InvHubRight];

    pub fn of(label: GeneratorLabel, hub: u32) -> Option<LetterType> {
        if label.a.index() == hub {
            Some(if label.a.is_positive() { LetterType::HubLeft } else { LetterType::InvHubLeft })
        } else if label.b.index() == hub {
            Some(if label.b.is_positive() { LetterType::HubRight } else { LetterType::InvHubRight })
        } else {
            None
        }
    }

    /// The letter of this type joining `hub` to the leaf `z`.
    pub fn letter(self, hub: u32, z: SignedPlace) -> GeneratorLabel {
        let (x, xb) = (SignedPlace::pos(hub), SignedPlace::neg(hub));
        match self {
            LetterType::HubLeft => GeneratorLabel { a: x, b: z },
            LetterType::InvHubLeft => GeneratorLabel { a: xb, b: z },
            LetterType::HubRight => GeneratorLabel { a: z, b: x },
            LetterType::InvHubRight => GeneratorLabel { a: z, b: xb },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LetterType::HubLeft => "E_xz",
            LetterType::InvHubLeft => "E_x'z",
            LetterType::HubRight => "E_zx",
            LetterType::InvHubRight => "E_zx'",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordAnalysis {
    pub star_shaped: bool,
    /// Set when the hub is unique (words of length at least 2).
    pub hub: Option<u32>,
    /// Letter types in word order, relative to the hub.
    pub types: Vec<LetterType>,
}

/// Star-shaped: one place occurs in every letter and every other place in
/// at most one letter. The empty word is not star-shaped.
pub fn analyze_word(w: &SWord) -> WordAnalysis {
    let none = WordAnalysis { star_shaped: false, hub: None, types: Vec::new() };
    if w.is_empty() {
        return none;
    }
    if w.len() == 1 {
        return WordAnalysis { star_shaped: true, hub: None, types: Vec::new() };
    }
    let counts = w.support_multiset();
    let hubs: Vec<u32> = counts.iter().filter(|&(_, &c)| c == w.len()).map(|(&p, _)| p).collect();
    for &x in &hubs {
        if counts.iter().all(|(&p, &c)| p == x || c == 1) {
            let types = w.letters().iter().map(|&l| LetterType::of(l, x).expect("hub in letter")).collect();
            return WordAnalysis { star_shaped: true, hub: Some(x), types };
        }
    }
    none
}

/// Splits a word into the letter groups of the connected components of its
/// place graph, preserving letter order within each group.
pub fn components(w: &SWord) -> Vec<SWord> {
    let places: Vec<u32> = w.support().into_iter().collect();
    let idx = |p: u32| places.binary_search(&p).expect("place in support");
    let mut parent: Vec<usize> = (0..places.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for l in w.letters() {
        let [p, q] = l.places();
        let (a, b) = (find(&mut parent, idx(p)), find(&mut parent, idx(q)));
        parent[a] = b;
    }
    let mut groups: BTreeMap<usize, Vec<GeneratorLabel>> = BTreeMap::new();
    for &l in w.letters() {
        let root = find(&mut parent, idx(l.places()[0]));
        groups.entry(root).or_default().push(l);
    }
    let mut out: Vec<SWord> = groups.into_values().map(SWord).collect();
    out.sort_by_key(|c| w.letters().iter().position(|l| *l == c.0[0]));
    out
}

/// Every component of the place graph is star-shaped. Words of this shape
/// are the ones on which the length function is meant to be evaluated.
pub fn is_star_forest(w: &SWord) -> bool {
    components(w).iter().all(|c| analyze_word(c).star_shaped)
}

/// Hands out unused places in increasing order.
#[derive(Clone, Debug)]
pub struct PlaceAllocator {
    next: u32,
}

impl PlaceAllocator {
    /// The first place handed out is `first`.
    pub fn new(first: u32) -> Self {
        assert!(first >= 1);
        PlaceAllocator { next: first }
    }

    pub fn fresh(&mut self) -> u32 {
        let p = self.next;
        self.next += 1;
        p
    }

    pub fn fresh_signed(&mut self, positive: bool) -> SignedPlace {
        SignedPlace::new(self.fresh(), positive)
    }
}

/// Replaces the two letters at `pos` by the equal three-letter word:
/// `E_xa E_xb = E_{b ā} E_xb E_ba` or `E_ax E_bx = E_ab E_bx E_{a b̄}`.
/// The result is checked against the automorphism model before returning.
pub fn pentagram_rewrite(w: &SWord, pos: usize) -> Result<SWord, PhiError> {
    let mismatch = || PhiError::PatternMismatch { word: w.to_string(), pos };
    if pos + 1 >= w.len() {
        return Err(mismatch());
    }
    let (p, q) = (w.0[pos], w.0[pos + 1]);
    let replacement = if p.a == q.a && p.b.index() != q.b.index() {
        let (a, b) = (p.b, q.b);
        [GeneratorLabel { a: b, b: a.inverse() }, q, GeneratorLabel { a: b, b: a }]
    } else if p.b == q.b && p.a.index() != q.a.index() {
        let (a, b) = (p.a, q.a);
        [GeneratorLabel { a, b }, q, GeneratorLabel { a, b: b.inverse() }]
    } else {
        return Err(mismatch());
    };
    let mut out = w.0[..pos].to_vec();
    out.extend_from_slice(&replacement);
    out.extend_from_slice(&w.0[pos + 2..]);
    let out = SWord(out);
    // both words on one relabeling so the rank stays small
    let joint = SWord::cat(&[w, &out]).compacted();
    let (before, after) = joint.0.split_at(w.len());
    let rank = (joint.max_place() as usize).max(2);
    if SWord(before.to_vec()).to_aut(rank)? != SWord(after.to_vec()).to_aut(rank)? {
        return Err(PhiError::UnsoundRewrite { word: w.to_string(), pos });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::abelianize;

    #[test]
    fn star_examples() {
        // x = 1, z1 = 2, z2 = 3, z3 = 4
        let w = SWord(vec![e(1, 2), e(3, -1), e(1, 4)]);
        let a = analyze_word(&w);
        assert!(a.star_shaped);
        assert_eq!(a.hub, Some(1));
        assert_eq!(a.types, vec![LetterType::HubLeft, LetterType::InvHubRight, LetterType::HubLeft]);
        assert!(!analyze_word(&SWord(vec![e(1, 2), e(3, 4)])).star_shaped);
        assert!(!analyze_word(&SWord(vec![e(1, 2), e(1, 2)])).star_shaped);
        assert!(is_star_forest(&SWord(vec![e(1, 2), e(3, 4), e(1, -5)])));
        assert!(!is_star_forest(&SWord(vec![e(1, 2), e(2, 3), e(3, 1)])));
        let single = analyze_word(&SWord::letter(e(1, 2)));
        assert!(single.star_shaped && single.hub.is_none());
    }

    #[test]
    fn letter_types_round_trip() {
        for t in LetterType::ALL {
            for z in [SignedPlace::pos(5), SignedPlace::neg(5)] {
                assert_eq!(LetterType::of(t.letter(2, z), 2), Some(t));
            }
        }
    }

    #[test]
    fn pentagram_examples() {
        // x = 1, a = 2, b = 3
        let w = SWord(vec![e(1, 2), e(1, 3)]);
        let r = pentagram_rewrite(&w, 0).unwrap();
        assert_eq!(r, SWord(vec![e(3, -2), e(1, 3), e(3, 2)]));
        let w2 = SWord(vec![e(2, 1), e(3, 1)]);
        let r2 = pentagram_rewrite(&w2, 0).unwrap();
        assert_eq!(r2, SWord(vec![e(2, 3), e(3, 1), e(2, -3)]));
        for (u, v) in [(&w, &r), (&w2, &r2)] {
            assert_eq!(abelianize(&u.to_aut(3).unwrap()), abelianize(&v.to_aut(3).unwrap()));
            assert_eq!(v.len(), u.len() + 1);
        }
        assert!(matches!(
            pentagram_rewrite(&SWord(vec![e(1, 2), e(3, 4)]), 0),
            Err(PhiError::PatternMismatch { .. })
        ));
    }

    #[test]
    fn pentagram_all_signs() {
        for sx in [1, -1] {
            for sa in [1, -1] {
                for sb in [1, -1] {
                    let w = SWord(vec![e(sx, 2 * sa), e(sx, 3 * sb), e(4, 1)]);
                    assert!(pentagram_rewrite(&w, 0).is_ok());
                    let w = SWord(vec![e(2 * sa, sx), e(3 * sb, sx)]);
                    assert!(pentagram_rewrite(&w, 0).is_ok());
                }
            }
        }
    }

    #[test]
    fn compaction_and_components() {
        let w = SWord(vec![e(7, -3), e(9, 7)]);
        assert_eq!(w.compacted(), SWord(vec![e(1, -2), e(3, 1)]));
        let c = components(&SWord(vec![e(1, 2), e(5, 6), e(1, 3)]));
        assert_eq!(c, vec![SWord(vec![e(1, 2), e(1, 3)]), SWord(vec![e(5, 6)])]);
    }
}
