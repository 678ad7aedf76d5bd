//! Group descriptor strings.
//!
//! Grammar:
//!
//! ```text
//! descriptor := cyclic ("x" cyclic)*     finite abelian, e.g. z5, z2xz2
//!             | "zd:" d                  Z^d
//!             | "s3"                     symmetric group on 3 points
//!             | "free:" n                free group F_n
//!             | "sl:" n                  SL(n, Z), elementary generators
//!             | "saut:" n                SAut(F_n), transvections
//! cyclic     := "z" m                    m >= 2
//! ```

use super::control::{CyclicProduct, FreeGroup, IntegerLattice, Symmetric3};
use super::matrix::SpecialLinear;
use super::saut::SAut;
use super::{GroupError, GroupModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Cyclic(Vec<u64>),
    Lattice(usize),
    Symmetric3,
    Free(usize),
    SpecialLinear(usize),
    SAut(usize),
}

/// Receives a concrete model behind a parsed descriptor.
pub trait ModelVisitor {
    type Output;
    fn visit<M: GroupModel>(self, model: &M) -> Self::Output;
}

pub fn parse_model(descriptor: &str) -> Result<ModelSpec, GroupError> {
    let s = descriptor.trim().to_ascii_lowercase();
    let bad = || GroupError::UnknownDescriptor(descriptor.to_string());
    let rank = |rest: &str, min: usize| -> Result<usize, GroupError> {
        let v: usize = rest.parse().map_err(|_| bad())?;
        if v < min || v > 64 {
            return Err(bad());
        }
        Ok(v)
    };
    if s == "s3" {
        return Ok(ModelSpec::Symmetric3);
    }
    if let Some(rest) = s.strip_prefix("zd:") {
        return Ok(ModelSpec::Lattice(rank(rest, 1)?));
    }
    if let Some(rest) = s.strip_prefix("free:") {
        return Ok(ModelSpec::Free(rank(rest, 1)?));
    }
    if let Some(rest) = s.strip_prefix("sl:") {
        return Ok(ModelSpec::SpecialLinear(rank(rest, 2)?));
    }
    if let Some(rest) = s.strip_prefix("saut:") {
        return Ok(ModelSpec::SAut(rank(rest, 2)?));
    }
    let orders = s
        .split('x')
        .map(|part| {
            let m: u64 = part.strip_prefix('z').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if m < 2 {
                return Err(bad());
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModelSpec::Cyclic(orders))
}

impl ModelSpec {
    pub fn visit<V: ModelVisitor>(&self, visitor: V) -> V::Output {
        match self {
            ModelSpec::Cyclic(orders) => visitor.visit(&CyclicProduct::new(orders.clone())),
            ModelSpec::Lattice(d) => visitor.visit(&IntegerLattice::new(*d)),
            ModelSpec::Symmetric3 => visitor.visit(&Symmetric3::new()),
            ModelSpec::Free(n) => visitor.visit(&FreeGroup::new(*n)),
            ModelSpec::SpecialLinear(n) => visitor.visit(&SpecialLinear::new(*n)),
            ModelSpec::SAut(n) => visitor.visit(&SAut::new(*n)),
        }
    }
}
