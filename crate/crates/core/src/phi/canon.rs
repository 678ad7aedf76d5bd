//! Canonical identifiers for words, up to the signed-permutation symmetry
//! and inversion (`Φ(γ) = Φ(γ⁻¹)`).
//!
//! In [`CanonMode::Automorphism`] two words get the same key when their
//! automorphisms of `F_n` agree after a signed relabeling of places. The
//! encoding lists the images of the basis letters in the order a traversal
//! discovers them. It is minimized over all starting letters and over every
//! tie when a traversal has to restart, so two automorphisms get the same
//! key exactly when a signed relabeling (and possibly inversion) maps one
//! to the other.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::word::SWord;
use super::PhiError;
use crate::groups::{AutElement, CanonicalKey, SignedPlace};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonMode {
    /// Identify words with equal images in `SAut(F_n)`.
    #[default]
    Automorphism,
    /// Identify words only up to relabeling of places and inversion.
    Syntactic,
}

impl CanonMode {
    pub fn name(self) -> &'static str {
        match self {
            CanonMode::Automorphism => "automorphism",
            CanonMode::Syntactic => "syntactic",
        }
    }
}

pub fn word_key(w: &SWord, mode: CanonMode) -> Result<CanonicalKey, PhiError> {
    match mode {
        CanonMode::Syntactic => Ok(syntactic_key(w)),
        CanonMode::Automorphism => {
            let c = w.compacted();
            let rank = (c.max_place() as usize).max(2);
            let g = c.to_aut(rank)?;
            if g.is_identity() {
                return Ok(CanonicalKey(Vec::new()));
            }
            Ok(CanonicalKey(encode(&g).min(encode(&g.invert()))))
        }
    }
}

fn syntactic_key(w: &SWord) -> CanonicalKey {
    fn normalized(w: &SWord) -> Vec<i64> {
        let mut map: HashMap<u32, (i64, i32)> = HashMap::new();
        let mut out = Vec::with_capacity(2 * w.len());
        for l in w.letters() {
            for p in [l.a, l.b] {
                let next = map.len() as i64 + 1;
                let (label, sign) = *map.entry(p.index()).or_insert((next, p.sign()));
                out.push(label * (p.sign() * sign) as i64);
            }
        }
        out
    }
    CanonicalKey(normalized(w).min(normalized(&w.inverse())))
}

/// Minimum traversal encoding over every starting place and sign.
fn encode(g: &AutElement) -> Vec<i64> {
    let moved: Vec<u32> = (1..=g.rank() as u32)
        .filter(|&p| g.images()[p as usize - 1].letters() != [SignedPlace::pos(p)])
        .collect();
    let mut best: Option<Vec<i64>> = None;
    for &p in &moved {
        for positive in [true, false] {
            let mut lab = Labeling { labels: HashMap::new(), order: Vec::new() };
            lab.assign(SignedPlace::new(p, positive));
            explore(g, &moved, lab, Vec::new(), 0, &mut best);
        }
    }
    best.unwrap_or_default()
}

#[derive(Clone)]
struct Labeling {
    /// place -> (label, sign of the place that the label stands for)
    labels: HashMap<u32, (i64, i32)>,
    order: Vec<u32>,
}

impl Labeling {
    fn assign(&mut self, p: SignedPlace) {
        let next = self.order.len() as i64 + 1;
        self.labels.insert(p.index(), (next, p.sign()));
        self.order.push(p.index());
    }

    fn code(&self, p: SignedPlace) -> Option<i64> {
        self.labels.get(&p.index()).map(|&(l, s)| l * (p.sign() * s) as i64)
    }
}

fn image_of(g: &AutElement, p: SignedPlace) -> Vec<SignedPlace> {
    let w = &g.images()[p.index() as usize - 1];
    if p.is_positive() {
        w.letters().to_vec()
    } else {
        w.inverse().letters().to_vec()
    }
}

/// Labels everything reachable from the queue, then branches over every
/// restart candidate with the smallest partially labeled image.
fn explore(
    g: &AutElement,
    moved: &[u32],
    mut lab: Labeling,
    mut out: Vec<i64>,
    mut q: usize,
    best: &mut Option<Vec<i64>>,
) {
    while q < lab.order.len() {
        let p = lab.order[q];
        let sign = lab.labels[&p].1;
        q += 1;
        if moved.binary_search(&p).is_err() {
            out.push(0);
            continue;
        }
        let img = image_of(g, SignedPlace::new(p, sign > 0));
        out.push(img.len() as i64);
        for l in img {
            if lab.code(l).is_none() {
                lab.assign(l);
            }
            out.push(lab.code(l).expect("assigned"));
        }
    }
    if let Some(b) = best.as_ref() {
        let n = out.len().min(b.len());
        if out[..n] > b[..n] {
            return;
        }
    }
    let mut sig_min: Option<Vec<i64>> = None;
    let mut tied: Vec<SignedPlace> = Vec::new();
    for &p in moved.iter().filter(|p| !lab.labels.contains_key(p)) {
        for positive in [true, false] {
            let s = SignedPlace::new(p, positive);
            let sig: Vec<i64> = image_of(g, s)
                .into_iter()
                .map(|l| {
                    if l.index() == p {
                        i64::MAX - 1 + if l.sign() == s.sign() { 0 } else { 1 }
                    } else {
                        lab.code(l).unwrap_or(i64::MAX - 2)
                    }
                })
                .collect();
            match sig_min.as_ref().map(|m| sig.cmp(m)) {
                Some(std::cmp::Ordering::Greater) => {}
                Some(std::cmp::Ordering::Equal) => tied.push(s),
                _ => {
                    sig_min = Some(sig);
                    tied = vec![s];
                }
            }
        }
    }
    if tied.is_empty() {
        if best.as_ref().is_none_or(|b| out < *b) {
            *best = Some(out);
        }
        return;
    }
    for s in tied {
        let mut next = lab.clone();
        next.assign(s);
        explore(g, moved, next, out.clone(), q, best);
    }
}
