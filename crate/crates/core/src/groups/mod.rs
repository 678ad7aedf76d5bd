//! Exact models of the groups the toolkit works with.
//!
//! Every model implements [`GroupModel`]: an identity, a symmetric generator
//! list, multiplication, inversion and a canonical key that decides equality.
//! Products are read left to right, so for automorphisms of `F_n` the element
//! `g h` first applies `g` and then `h` to a word (`(gh)(w) = h(g(w))`).

mod control;
mod descriptor;
mod free;
mod matrix;
mod saut;

use std::fmt;
use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use control::{CyclicProduct, FreeGroup, IntegerLattice, Symmetric3};
pub use descriptor::{parse_model, ModelSpec, ModelVisitor};
pub use free::{reduce, FreeWord, SignedPlace};
pub use matrix::{MatElement, SpecialLinear};
pub use saut::{
    abelianize, apply_transvection, check_relation, relation_instances, AutElement,
    GeneratorLabel, RelationId, SAut,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid place tuple for relation {relation}: {reason}")]
    InvalidPlaces { relation: String, reason: String },
    #[error("place index {index} out of range for rank {rank}")]
    PlaceOutOfRange { index: u32, rank: usize },
    #[error("labels must use two distinct places, got {0}")]
    DegenerateLabel(String),
    #[error("unknown group descriptor `{0}`")]
    UnknownDescriptor(String),
    #[error("malformed canonical key `{0}`")]
    MalformedKey(String),
}

/// Canonical, deterministic encoding of a group element as signed integers.
///
/// Two elements of the same model are equal iff their keys are equal.
/// Text form: comma-separated integers (the empty key is `"()"`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<i64>);

impl CanonicalKey {
    /// Length-prefixed little-endian encoding: `u32` count then `i64` values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 8 * self.0.len());
        out.extend_from_slice(&(self.0.len() as u32).to_le_bytes());
        for v in &self.0 {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalKey {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "()" {
            return Ok(CanonicalKey(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(CanonicalKey)
            .map_err(|_| GroupError::MalformedKey(s.to_string()))
    }
}

/// The group-model contract shared by every group the toolkit handles.
pub trait GroupModel: Sync {
    /// Ordering and hashing must agree with equality of canonical keys.
    type Element: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    /// Descriptor string, e.g. `z5` or `saut:3`.
    fn descriptor(&self) -> String;
    fn identity(&self) -> Self::Element;
    /// Symmetric generating list: closed under inversion, no duplicates.
    fn generators(&self) -> &[Self::Element];
    fn generator_label(&self, index: usize) -> String;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn invert(&self, a: &Self::Element) -> Self::Element;
    fn key(&self, a: &Self::Element) -> CanonicalKey;

    /// Exact order for finite groups.
    fn order(&self) -> Option<u64> {
        None
    }

    /// Number of generators of a group of automorphisms of the model that
    /// permutes the generating set (zero when none is modeled).
    fn symmetry_generator_count(&self) -> usize {
        0
    }

    fn apply_symmetry(&self, _generator: usize, a: &Self::Element) -> Self::Element {
        a.clone()
    }

    fn is_identity(&self, a: &Self::Element) -> bool {
        *a == self.identity()
    }
}

#[cfg(test)]
pub(crate) mod contract_tests {
    use super::*;

    /// Generic checks of the contract: symmetric generators, associativity on
    /// sampled triples, inverses and identity.
    pub fn check_contract<M: GroupModel>(model: &M, samples: &[M::Element]) {
        let gens = model.generators();
        for g in gens {
            let inv = model.invert(g);
            assert!(gens.contains(&inv), "generator list not symmetric");
        }
        let e = model.identity();
        for a in samples {
            assert_eq!(model.multiply(&e, a), *a);
            assert_eq!(model.key(&model.multiply(a, &e)), model.key(a));
            assert!(model.is_identity(&model.multiply(a, &model.invert(a))));
            for b in samples.iter().take(6) {
                for c in samples.iter().take(6) {
                    let left = model.multiply(&model.multiply(a, b), c);
                    let right = model.multiply(a, &model.multiply(b, c));
                    assert_eq!(model.key(&left), model.key(&right));
                }
            }
        }
    }

    #[test]
    fn key_text_round_trip() {
        let k = CanonicalKey(vec![3, -1, 0, 42]);
        assert_eq!(k.to_string(), "3,-1,0,42");
        assert_eq!("3,-1,0,42".parse::<CanonicalKey>().unwrap(), k);
        assert_eq!("()".parse::<CanonicalKey>().unwrap(), CanonicalKey::default());
        assert!("1,x".parse::<CanonicalKey>().is_err());
    }
}
