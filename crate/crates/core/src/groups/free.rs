//! Words in the free group `F_n` over the basis `z_1, ..., z_n`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A basis letter `z_i` or its inverse.
///
/// Stored as a nonzero signed integer: `+i` is `z_i`, `-i` is `z_i^{-1}`.
/// The *place* of a letter is its unsigned index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct SignedPlace(i32);

impl SignedPlace {
    /// Panics if `index` is zero.
    pub fn new(index: u32, positive: bool) -> Self {
        assert!(index >= 1, "place index must be positive");
        let v = index as i32;
        SignedPlace(if positive { v } else { -v })
    }

    pub fn pos(index: u32) -> Self {
        Self::new(index, true)
    }

    pub fn neg(index: u32) -> Self {
        Self::new(index, false)
    }

    pub fn from_signed(v: i32) -> Option<Self> {
        (v != 0).then_some(SignedPlace(v))
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        SignedPlace(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn with_sign(self, sign: i32) -> Self {
        if sign < 0 {
            self.inverse()
        } else {
            self
        }
    }
}

impl TryFrom<i32> for SignedPlace {
    type Error = String;
    fn try_from(v: i32) -> Result<Self, Self::Error> {
        SignedPlace::from_signed(v).ok_or_else(|| "signed place must be nonzero".to_string())
    }
}

impl From<SignedPlace> for i32 {
    fn from(p: SignedPlace) -> i32 {
        p.0
    }
}

impl fmt::Display for SignedPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "z{}", self.index())
        } else {
            write!(f, "z{}'", self.index())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FreeWord(Vec<SignedPlace>);

/// Free reduction with a single stack pass.
pub fn reduce<I: IntoIterator<Item = SignedPlace>>(letters: I) -> FreeWord {
    let mut out: Vec<SignedPlace> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    FreeWord(out)
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn letter(l: SignedPlace) -> Self {
        FreeWord(vec![l])
    }

    pub fn from_letters<I: IntoIterator<Item = SignedPlace>>(letters: I) -> Self {
        reduce(letters)
    }

    pub fn letters(&self) -> &[SignedPlace] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> Self {
        reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Replaces every letter `z_i^{±1}` by `image(i)^{±1}` and reduces.
    pub fn substitute<F>(&self, mut image: F) -> Self
    where
        F: FnMut(u32) -> FreeWord,
    {
        let mut out = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            let img = image(l.index());
            if l.is_positive() {
                out.extend(img.0.iter().copied());
            } else {
                out.extend(img.0.iter().rev().map(|x| x.inverse()));
            }
        }
        reduce(out)
    }

    /// Signed occurrence count of each place `1..=n` (the abelianized word).
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0i64; n];
        for l in &self.0 {
            v[l.index() as usize - 1] += l.sign() as i64;
        }
        v
    }

    pub fn max_place(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }
}

impl fmt::Display for FreeWord {
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
