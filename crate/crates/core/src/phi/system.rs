//! Linear systems over the unknowns `Φ(w)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::canon::{word_key, CanonMode};
use super::word::{e, is_star_forest, SWord};
use super::PhiError;
use crate::algebra::Rational;
use crate::groups::CanonicalKey;

/// `expr = 0` or `expr <= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Le => "le",
        }
    }
}

/// Which rule produced a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    Normalization,
    DisjointLeft,
    DisjointRight,
    Cancellation,
    Reorder,
    ExpandLeft,
    ExpandRight,
    StarValue,
    AdjacentNonpositive,
    DisjointExact,
    Figure1Psd,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Normalization => "normalization",
            RuleTag::DisjointLeft => "disjoint-left",
            RuleTag::DisjointRight => "disjoint-right",
            RuleTag::Cancellation => "cancellation",
            RuleTag::Reorder => "reorder",
            RuleTag::ExpandLeft => "expand-left",
            RuleTag::ExpandRight => "expand-right",
            RuleTag::StarValue => "star-value",
            RuleTag::AdjacentNonpositive => "adjacent-nonpositive",
            RuleTag::DisjointExact => "disjoint-exact",
            RuleTag::Figure1Psd => "figure1-psd",
        }
    }
}

/// `Σ c_i Φ(w_i) + constant` over explicit words.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearExpr {
    pub terms: Vec<(Rational, SWord)>,
    pub constant: Rational,
}

impl LinearExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phi(w: &SWord) -> Self {
        LinearExpr { terms: vec![(Rational::one(), w.clone())], constant: Rational::zero() }
    }

    pub fn term(mut self, c: Rational, w: SWord) -> Self {
        self.terms.push((c, w));
        self
    }

    pub fn plus_constant(mut self, c: Rational) -> Self {
        self.constant += c;
        self
    }

    pub fn add(mut self, other: &LinearExpr) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self.constant += &other.constant;
        self
    }

    pub fn scale(mut self, c: &Rational) -> Self {
        for t in &mut self.terms {
            t.0 *= c;
        }
        self.constant *= c;
        self
    }

    /// Value under an assignment of `Φ` to words.
    pub fn eval<F: FnMut(&SWord) -> Rational>(&self, mut phi: F) -> Rational {
        self.terms.iter().fold(self.constant.clone(), |acc, (c, w)| acc + c * phi(w))
    }

    /// Value under `Φ(w) = |w|`.
    pub fn eval_length(&self) -> Rational {
        self.eval(|w| Rational::from_integer(w.len().into()))
    }
}

/// `⟨γ1 - 1, γ2 - 1⟩ = ½(Φ(γ1) + Φ(γ2) - Φ(γ1⁻¹γ2))`.
pub fn polarize(w1: &SWord, w2: &SWord) -> LinearExpr {
    let half = Rational::new(1.into(), 2.into());
    LinearExpr::new()
        .term(half.clone(), w1.clone())
        .term(half.clone(), w2.clone())
        .term(-half, SWord::cat(&[&w1.inverse(), w2]))
}

/// A rule instance before canonicalization.
#[derive(Clone, Debug, PartialEq)]
pub struct WordConstraint {
    pub expr: LinearExpr,
    pub relation: Relation,
    pub tag: RuleTag,
}

impl WordConstraint {
    pub fn eq(expr: LinearExpr, tag: RuleTag) -> Self {
        WordConstraint { expr, relation: Relation::Eq, tag }
    }

    pub fn le(expr: LinearExpr, tag: RuleTag) -> Self {
        WordConstraint { expr, relation: Relation::Le, tag }
    }

    /// Whether `Φ(w) = |w|` satisfies the constraint.
    pub fn holds_for_length(&self) -> bool {
        let v = self.expr.eval_length();
        match self.relation {
            Relation::Eq => v.is_zero(),
            Relation::Le => !v.is_positive(),
        }
    }
}

/// A canonicalized constraint `Σ coeffs[i] Φ_i + constant (= | <=) 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: BTreeMap<usize, Rational>,
    pub constant: Rational,
    pub relation: Relation,
    pub tag: RuleTag,
}

impl Constraint {
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().fold(self.constant.clone(), |acc, (&i, c)| acc + c * &x[i])
    }

    pub fn satisfied(&self, x: &[Rational]) -> bool {
        let v = self.value(x);
        match self.relation {
            Relation::Eq => v.is_zero(),
            Relation::Le => !v.is_positive(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unknown {
    pub key: CanonicalKey,
    /// The first word registered under this key.
    pub word: SWord,
    /// Syntactic length shared by every star-forest word with this key.
    pub length: Option<usize>,
}

/// Unknowns `Φ(w)` indexed by canonical keys, with their constraints.
#[derive(Clone, Debug)]
pub struct PhiSystem {
    mode: CanonMode,
    unknowns: Vec<Unknown>,
    index: HashMap<CanonicalKey, usize>,
    constraints: Vec<Constraint>,
    length_conflicts: usize,
}

pub const IDENTITY: usize = 0;
pub const GENERATOR: usize = 1;

impl PhiSystem {
    /// Starts with `Φ(1) = 0` and `Φ(E) = 1`.
    pub fn new(mode: CanonMode) -> Self {
        let mut s = PhiSystem {
            mode,
            unknowns: Vec::new(),
            index: HashMap::new(),
            constraints: Vec::new(),
            length_conflicts: 0,
        };
        let one = SWord::empty();
        let gen = SWord::letter(e(1, 2));
        s.unknown_of(&one).expect("identity");
        s.unknown_of(&gen).expect("generator");
        for (id, v) in [(IDENTITY, 0), (GENERATOR, -1)] {
            s.constraints.push(Constraint {
                coeffs: BTreeMap::from([(id, Rational::one())]),
                constant: Rational::from_integer(v.into()),
                relation: Relation::Eq,
                tag: RuleTag::Normalization,
            });
        }
        s
    }

    pub fn mode(&self) -> CanonMode {
        self.mode
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Star-forest words that share a key but differ in length.
    pub fn length_conflicts(&self) -> usize {
        self.length_conflicts
    }

    pub fn lookup(&self, w: &SWord) -> Result<Option<usize>, PhiError> {
        Ok(self.index.get(&word_key(w, self.mode)?).copied())
    }

    /// Registers `Φ(w)` and returns its id.
    pub fn unknown_of(&mut self, w: &SWord) -> Result<usize, PhiError> {
        let key = word_key(w, self.mode)?;
        let len = is_star_forest(w).then_some(w.len());
        if let Some(&id) = self.index.get(&key) {
            let u = &mut self.unknowns[id];
            match (u.length, len) {
                (None, Some(l)) => u.length = Some(l),
                (Some(a), Some(b)) if a != b => self.length_conflicts += 1,
                _ => {}
            }
            return Ok(id);
        }
        let id = self.unknowns.len();
        self.index.insert(key.clone(), id);
        self.unknowns.push(Unknown { key, word: w.clone(), length: len });
        Ok(id)
    }

    /// Canonical coefficients of an expression. `Φ(1)` terms are dropped.
    pub fn linearize(
        &mut self,
        expr: &LinearExpr,
    ) -> Result<(BTreeMap<usize, Rational>, Rational), PhiError> {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, w) in &expr.terms {
            let id = self.unknown_of(w)?;
            if id == IDENTITY {
                continue;
            }
            *coeffs.entry(id).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok((coeffs, expr.constant.clone()))
    }

    /// Adds a rule instance; returns `false` when it canonicalizes to a
    /// tautology.
    pub fn add(&mut self, c: &WordConstraint) -> Result<bool, PhiError> {
        let (coeffs, constant) = self.linearize(&c.expr)?;
        if coeffs.is_empty() {
            let trivial = match c.relation {
                Relation::Eq => constant.is_zero(),
                Relation::Le => !constant.is_positive(),
            };
            if trivial {
                return Ok(false);
            }
        }
        self.constraints.push(Constraint { coeffs, constant, relation: c.relation, tag: c.tag });
        Ok(true)
    }

    pub fn add_all(&mut self, cs: &[WordConstraint]) -> Result<usize, PhiError> {
        let mut n = 0;
        for c in cs {
            n += self.add(c)? as usize;
        }
        Ok(n)
    }

    /// `Φ = length`, when every unknown has a star-forest length.
    pub fn length_assignment(&self) -> Option<Vec<Rational>> {
        self.unknowns
            .iter()
            .map(|u| u.length.map(|l| Rational::from_integer(l.into())))
            .collect()
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.unknowns.len() && self.constraints.iter().all(|c| c.satisfied(x))
    }

    /// Unknowns, constraint rows with fraction strings, and rule tags.
    pub fn to_json(&self) -> Value {
        let unknowns: Vec<Value> = self
            .unknowns
            .iter()
            .enumerate()
            .map(|(i, u)| json!({ "id": i, "word": u.word.to_string(), "length": u.length }))
            .collect();
        let constraints: Vec<Value> =
            self.constraints.iter().map(|c| constraint_json(c, None)).collect();
        json!({
            "mode": self.mode.name(),
            "unknowns": unknowns,
            "constraints": constraints,
        })
    }
}

pub(crate) fn coeffs_json(coeffs: &BTreeMap<usize, Rational>) -> Value {
    Value::Object(coeffs.iter().map(|(i, c)| (i.to_string(), Value::String(c.to_string()))).collect())
}

pub(crate) fn constraint_json(c: &Constraint, multiplier: Option<&Rational>) -> Value {
    let mut v = json!({
        "tag": c.tag.name(),
        "relation": c.relation.name(),
        "constant": c.constant.to_string(),
        "coeffs": coeffs_json(&c.coeffs),
    });
    if let Some(m) = multiplier {
        v["multiplier"] = Value::String(m.to_string());
    }
    v
}
