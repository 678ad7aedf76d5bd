//! Seeded random rule instances over star-shaped words, and the
//! consistency run built on them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::canon::{word_key, CanonMode};
use super::feasibility::{check_feasible, Feasibility};
use super::figure1::figure1_rules;
use super::rules::{gen_cancellation, gen_disjoint, gen_expansion, gen_reorder};
use super::system::{PhiSystem, WordConstraint};
use super::word::{pentagram_rewrite, LetterType, PlaceAllocator, SWord};
use super::PhiError;
use crate::groups::SignedPlace;

#[derive(Clone, Debug)]
pub struct InstanceConfig {
    /// Longest word emitted by the disjoint, cancellation and expansion
    /// rules. Reorder instances need ten letters regardless.
    pub max_len: usize,
    pub count: usize,
    pub seed: u64,
    pub mode: CanonMode,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig { max_len: 8, count: 1000, seed: 0, mode: CanonMode::Automorphism }
    }
}

/// A pentagram rewrite performed while generating instances.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteCheck {
    pub before: SWord,
    pub after: SWord,
    /// Same automorphism and same canonical key.
    pub sound: bool,
}

pub struct Instances {
    pub constraints: Vec<WordConstraint>,
    pub rewrites: Vec<RewriteCheck>,
    pub max_word_len: usize,
}

fn random_type<R: Rng>(rng: &mut R) -> LetterType {
    LetterType::ALL[rng.gen_range(0..4)]
}

fn leaf<R: Rng>(rng: &mut R, alloc: &mut PlaceAllocator) -> SignedPlace {
    let positive = rng.gen_bool(0.5);
    alloc.fresh_signed(positive)
}

/// A star-shaped word around `hub` with fresh leaves and random types.
pub fn random_star<R: Rng>(rng: &mut R, alloc: &mut PlaceAllocator, hub: u32, len: usize) -> SWord {
    SWord((0..len).map(|_| random_type(rng).letter(hub, leaf(rng, alloc))).collect())
}

fn rewrite_check(w: &SWord, pos: usize) -> Result<RewriteCheck, PhiError> {
    let (after, mut sound) = match pentagram_rewrite(w, pos) {
        Ok(a) => (a, true),
        Err(PhiError::UnsoundRewrite { .. }) => (w.clone(), false),
        Err(e) => return Err(e),
    };
    sound &= word_key(w, CanonMode::Automorphism)? == word_key(&after, CanonMode::Automorphism)?;
    Ok(RewriteCheck { before: w.clone(), after, sound })
}

/// Adjacent same-type positions of a star word, where a rewrite applies.
fn rewrite_positions(w: &SWord) -> Vec<usize> {
    w.letters()
        .windows(2)
        .enumerate()
        .filter(|(_, p)| p[0].a == p[1].a || p[0].b == p[1].b)
        .map(|(i, _)| i)
        .collect()
}

pub fn random_instances(cfg: &InstanceConfig) -> Result<Instances, PhiError> {
    if cfg.max_len < 3 {
        return Err(PhiError::InvalidConfig("max_len must be at least 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut alloc = PlaceAllocator::new(1);
    let mut constraints = Vec::new();
    let mut rewrites = Vec::new();
    let l = cfg.max_len;
    for _ in 0..cfg.count {
        let x = alloc.fresh();
        let emitted: Vec<WordConstraint> = match rng.gen_range(0..4) {
            0 => {
                let len = rng.gen_range(0..=l - 2);
                let w = random_star(&mut rng, &mut alloc, x, len);
                let l1 = rng.gen_range(1..=l - len - 1);
                let l2 = rng.gen_range(1..=l - len - l1);
                let w1 = if rng.gen_bool(0.5) {
                    random_star(&mut rng, &mut alloc, x, l1)
                } else {
                    let y = alloc.fresh();
                    random_star(&mut rng, &mut alloc, y, l1)
                };
                let z = alloc.fresh();
                let w2 = random_star(&mut rng, &mut alloc, z, l2);
                gen_disjoint(&w, &w1, &w2)?
            }
            1 => {
                let rest = rng.gen_range(0..=l - 2);
                let n1 = rng.gen_range(0..=rest);
                let w1 = random_star(&mut rng, &mut alloc, x, n1);
                let t = random_type(&mut rng);
                let x1 = t.letter(x, leaf(&mut rng, &mut alloc));
                let x2 = t.letter(x, leaf(&mut rng, &mut alloc));
                let w2 = random_star(&mut rng, &mut alloc, x, rest - n1);
                let c = gen_cancellation(&w1, x1, x2, &w2)?;
                let whole = SWord::cat(&[&w1, &SWord(vec![x1, x2]), &w2]);
                rewrites.push(rewrite_check(&whole, w1.len())?);
                vec![c]
            }
            2 => {
                let mut outer = || {
                    let mut types = LetterType::ALL.to_vec();
                    types.shuffle(&mut rng);
                    SWord(types.into_iter().map(|t| t.letter(x, leaf(&mut rng, &mut alloc))).collect())
                };
                let (w1, w2) = (outer(), outer());
                let xl = random_type(&mut rng).letter(x, leaf(&mut rng, &mut alloc));
                let yl = random_type(&mut rng).letter(x, leaf(&mut rng, &mut alloc));
                vec![gen_reorder(&w1, xl, yl, &w2)?]
            }
            _ => {
                let len = rng.gen_range(0..l);
                let w = random_star(&mut rng, &mut alloc, x, len);
                let a = alloc.fresh();
                gen_expansion(&w, x, a)?
            }
        };
        for c in &emitted {
            for (_, w) in &c.expr.terms {
                if let Some(&pos) = rewrite_positions(w).first() {
                    if rewrites.len() < 4 * cfg.count {
                        rewrites.push(rewrite_check(w, pos)?);
                    }
                }
            }
        }
        constraints.extend(emitted);
    }
    let max_word_len =
        constraints.iter().flat_map(|c| c.expr.terms.iter().map(|(_, w)| w.len())).max().unwrap_or(0);
    Ok(Instances { constraints, rewrites, max_word_len })
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiCheckReport {
    pub seed: u64,
    pub mode: &'static str,
    pub instances: usize,
    pub constraints: usize,
    pub unknowns: usize,
    pub max_word_len: usize,
    /// Every emitted instance holds for `Φ(w) = |w|`.
    pub length_satisfied: bool,
    pub length_conflicts: usize,
    pub base_feasible: bool,
    /// The base solution is the length function.
    pub base_solution_is_length: bool,
    pub figure1_feasible: bool,
    pub figure1_certificate_verified: bool,
    pub figure1_combined_constant: Option<String>,
    pub rewrites_checked: usize,
    pub rewrite_violations: usize,
}

pub struct PhiCheck {
    pub report: PhiCheckReport,
    pub base: PhiSystem,
    pub with_figure1: PhiSystem,
    pub base_result: Feasibility,
    pub figure1_result: Feasibility,
}

/// Builds the base system from random instances, solves it, then adds the
/// five-point configuration rules on places 1, 2, 3 and solves again.
pub fn phi_check(cfg: &InstanceConfig) -> Result<PhiCheck, PhiError> {
    let inst = random_instances(cfg)?;
    let mut base = PhiSystem::new(cfg.mode);
    base.add_all(&inst.constraints)?;
    let length_satisfied = inst.constraints.iter().all(|c| c.holds_for_length())
        && base.length_assignment().is_some_and(|x| base.satisfied_by(&x));
    let base_result = check_feasible(&base)?;
    let base_solution_is_length = match (&base_result, base.length_assignment()) {
        (Feasibility::Feasible { solution }, Some(len)) => *solution == len,
        _ => false,
    };
    let mut with_figure1 = base.clone();
    with_figure1.add_all(&figure1_rules(1, 2, 3))?;
    let figure1_result = check_feasible(&with_figure1)?;
    let (verified, constant) = match &figure1_result {
        Feasibility::Infeasible { certificate } => {
            let c = certificate.check(&with_figure1);
            (c.is_some(), c.map(|v| v.to_string()))
        }
        Feasibility::Feasible { .. } => (false, None),
    };
    let report = PhiCheckReport {
        seed: cfg.seed,
        mode: cfg.mode.name(),
        instances: cfg.count,
        constraints: base.len(),
        unknowns: base.unknowns().len(),
        max_word_len: inst.max_word_len,
        length_satisfied,
        length_conflicts: base.length_conflicts(),
        base_feasible: base_result.is_feasible(),
        base_solution_is_length,
        figure1_feasible: figure1_result.is_feasible(),
        figure1_certificate_verified: verified,
        figure1_combined_constant: constant,
        rewrites_checked: inst.rewrites.len(),
        rewrite_violations: inst.rewrites.iter().filter(|r| !r.sound).count(),
    };
    Ok(PhiCheck { report, base, with_figure1, base_result, figure1_result })
}
