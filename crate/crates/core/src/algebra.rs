//! Sparse group-algebra arithmetic over exact rationals or `f64`.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use thiserror::Error;

use crate::groups::{AutElement, GeneratorLabel, GroupError, GroupModel, SignedPlace};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator list is not closed under inversion (generator {0})")]
    AsymmetricGenerators(String),
    #[error("empty generator list")]
    NoGenerators,
    #[error("delta_pair needs distinct places within the rank (got {a}, {b}, rank {n})")]
    InvalidPair { a: u32, b: u32, n: usize },
    #[error("no word length known for a support element")]
    UnknownLength,
    #[error("malformed serialized term on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Scalar fields the algebra is instantiated over.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Exact scalars never round.
    const EXACT: bool;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_f64(v)
}

/// `Σ c_g g` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement<E: Ord, S> {
    terms: BTreeMap<E, S>,
}

impl<E: Ord + Debug, S: Debug> Debug for AlgebraElement<E, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<E: Ord + Clone, S: Scalar> Default for AlgebraElement<E, S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<E: Ord + Clone, S: Scalar> AlgebraElement<E, S> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn delta(e: E) -> Self {
        Self::from_terms([(e, S::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (E, S)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, e: E, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&E, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &E) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())))
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> S {
        self.terms.values().fold(S::zero(), |acc, v| acc + v.clone())
    }

    pub fn l1_norm(&self) -> S {
        self.terms.values().fold(S::zero(), |acc, v| acc + v.abs())
    }

    pub fn map_scalars<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> AlgebraElement<E, T> {
        AlgebraElement::from_terms(self.terms.iter().map(|(e, v)| (e.clone(), f(v))))
    }

    /// `(l1, augmentation, support size, max word length)`, with lengths
    /// supplied by the caller (a ball lookup or stored generator words).
    pub fn measures<F>(&self, length: F) -> Result<Measures<S>, AlgebraError>
    where
        F: Fn(&E) -> Option<usize>,
    {
        let mut max_len = 0;
        for e in self.terms.keys() {
            max_len = max_len.max(length(e).ok_or(AlgebraError::UnknownLength)?);
        }
        Ok(Measures {
            l1: self.l1_norm(),
            augmentation: self.augmentation(),
            support_size: self.support_size(),
            max_word_length: max_len,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measures<S> {
    pub l1: S,
    pub augmentation: S,
    pub support_size: usize,
    pub max_word_length: usize,
}

/// `x * y`, with `δ_g * δ_h = δ_{gh}`.
pub fn convolve<M: GroupModel, S: Scalar>(
    model: &M,
    x: &AlgebraElement<M::Element, S>,
    y: &AlgebraElement<M::Element, S>,
) -> AlgebraElement<M::Element, S> {
    let mut out = AlgebraElement::zero();
    for (g, a) in x.terms() {
        for (h, b) in y.terms() {
            out.add_term(model.multiply(g, h), a.clone() * b.clone());
        }
    }
    out
}

/// Coefficient of `g` in `star(x)` is the coefficient of `g^{-1}` in `x`.
pub fn star<M: GroupModel, S: Scalar>(
    model: &M,
    x: &AlgebraElement<M::Element, S>,
) -> AlgebraElement<M::Element, S> {
    AlgebraElement::from_terms(x.terms().map(|(g, c)| (model.invert(g), c.clone())))
}

/// `Δ = Σ_{s ∈ S} (1 - s)`.
pub fn laplacian<M: GroupModel, S: Scalar>(
    model: &M,
) -> Result<AlgebraElement<M::Element, S>, AlgebraError> {
    let gens = model.generators();
    if gens.is_empty() {
        return Err(AlgebraError::NoGenerators);
    }
    for (i, g) in gens.iter().enumerate() {
        if !gens.contains(&model.invert(g)) {
            return Err(AlgebraError::AsymmetricGenerators(model.generator_label(i)));
        }
    }
    let mut out = AlgebraElement::delta(model.identity()).scale(&S::from_i64(gens.len() as i64));
    for g in gens {
        out.add_term(g.clone(), -S::one());
    }
    Ok(out)
}

/// `Δ_ab = 8 - Σ E_xy` over the eight transvections whose places are
/// `{a, b}`. Summing over unordered pairs gives `Δ`; over ordered pairs `2Δ`.
pub fn delta_pair<S: Scalar>(
    a: u32,
    b: u32,
    n: usize,
) -> Result<AlgebraElement<AutElement, S>, AlgebraError> {
    if a == b || a == 0 || b == 0 || a as usize > n || b as usize > n {
        return Err(AlgebraError::InvalidPair { a, b, n });
    }
    let mut out = AlgebraElement::delta(AutElement::identity(n)).scale(&S::from_i64(8));
    for (x, y) in [(a, b), (b, a)] {
        for sx in [true, false] {
            for sy in [true, false] {
                let label = GeneratorLabel::new(SignedPlace::new(x, sx), SignedPlace::new(y, sy))?;
                out.add_term(AutElement::generator(n, label)?, -S::one());
            }
        }
    }
    Ok(out)
}

/// One `coefficient<TAB>key` line per term, sorted by canonical key.
pub fn to_text<M: GroupModel, S: Scalar>(model: &M, x: &AlgebraElement<M::Element, S>) -> String {
    let mut lines: Vec<_> = x.terms().map(|(g, c)| (model.key(g), c)).collect();
    lines.sort_by(|a, b| a.0.cmp(&b.0));
    lines.iter().map(|(k, c)| format!("{c}\t{k}\n")).collect()
}

/// Parses the text form, resolving keys through `resolve`.
pub fn from_text<E, S, F>(text: &str, resolve: F) -> Result<AlgebraElement<E, S>, AlgebraError>
where
    E: Ord + Clone,
    S: Scalar + std::str::FromStr,
    F: Fn(&crate::groups::CanonicalKey) -> Option<E>,
{
    let mut out = AlgebraElement::zero();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |reason: &str| AlgebraError::Parse { line: i + 1, reason: reason.to_string() };
        let (c, k) = line.split_once('\t').ok_or_else(|| err("missing tab"))?;
        let c: S = c.trim().parse().map_err(|_| err("bad coefficient"))?;
        let key = k.trim().parse().map_err(|_| err("bad key"))?;
        let e = resolve(&key).ok_or_else(|| err("unknown key"))?;
        out.add_term(e, c);
    }
    Ok(out)
}
