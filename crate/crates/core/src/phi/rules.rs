//! Generators of linear `Φ`-constraints. Each takes explicit words and
//! places and returns the emitted instances without touching a system.

use num_traits::Zero;

use super::system::{polarize, LinearExpr, RuleTag, WordConstraint};
use super::word::{analyze_word, LetterType, SWord};
use super::PhiError;
use crate::algebra::Rational;
use crate::groups::{GeneratorLabel, SignedPlace};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `Φ(w) + Φ(w1 w2 w) - Φ(w1 w) - Φ(w2 w) = 0` and the right-multiplied
/// twin, for `w1`, `w2` with disjoint supports. Empty `w1` or `w2` gives
/// a tautology, which is suppressed.
pub fn gen_disjoint(w: &SWord, w1: &SWord, w2: &SWord) -> Result<Vec<WordConstraint>, PhiError> {
    let common: Vec<u32> = w1.support().intersection(&w2.support()).copied().collect();
    if !common.is_empty() {
        return Err(PhiError::OverlappingSupports(common));
    }
    if w1.is_empty() || w2.is_empty() {
        return Ok(Vec::new());
    }
    let left = LinearExpr::phi(w)
        .term(q(1), SWord::cat(&[w1, w2, w]))
        .term(q(-1), SWord::cat(&[w1, w]))
        .term(q(-1), SWord::cat(&[w2, w]));
    let right = LinearExpr::phi(w)
        .term(q(1), SWord::cat(&[w, w1, w2]))
        .term(q(-1), SWord::cat(&[w, w1]))
        .term(q(-1), SWord::cat(&[w, w2]));
    Ok(vec![
        WordConstraint::eq(left, RuleTag::DisjointLeft),
        WordConstraint::eq(right, RuleTag::DisjointRight),
    ])
}

fn star_hub(w: &SWord) -> Result<(u32, Vec<LetterType>), PhiError> {
    let a = analyze_word(w);
    match (a.star_shaped, a.hub) {
        (true, Some(h)) => Ok((h, a.types)),
        _ => Err(PhiError::NotStarShaped(w.to_string())),
    }
}

/// `Φ(w1 X1 X2 w2) = Φ(w1 X1 w2) + Φ(X1 X2) - 1` for a star-shaped word
/// with `X1`, `X2` of the same type.
pub fn gen_cancellation(
    w1: &SWord,
    x1: GeneratorLabel,
    x2: GeneratorLabel,
    w2: &SWord,
) -> Result<WordConstraint, PhiError> {
    let (a, b) = (SWord::letter(x1), SWord::letter(x2));
    let whole = SWord::cat(&[w1, &a, &b, w2]);
    let (hub, _) = star_hub(&whole)?;
    if LetterType::of(x1, hub) != LetterType::of(x2, hub) {
        return Err(PhiError::TypeMismatch { first: x1.to_string(), second: x2.to_string() });
    }
    let expr = LinearExpr::phi(&whole)
        .term(q(-1), SWord::cat(&[w1, &a, w2]))
        .term(q(-1), SWord::cat(&[&a, &b]))
        .plus_constant(q(1));
    Ok(WordConstraint::eq(expr, RuleTag::Cancellation))
}

/// `Φ(w1 X Y w2) = Φ(w1 Y X w2)` for a star-shaped word whose outer parts
/// each contain all four letter types.
pub fn gen_reorder(
    w1: &SWord,
    x: GeneratorLabel,
    y: GeneratorLabel,
    w2: &SWord,
) -> Result<WordConstraint, PhiError> {
    let (xs, ys) = (SWord::letter(x), SWord::letter(y));
    let whole = SWord::cat(&[w1, &xs, &ys, w2]);
    let (hub, types) = star_hub(&whole)?;
    let has_all = |range: &[LetterType]| LetterType::ALL.iter().all(|t| range.contains(t));
    let n1 = w1.len();
    if !has_all(&types[..n1]) || !has_all(&types[n1 + 2..]) {
        return Err(PhiError::MissingTypes { hub });
    }
    let expr = LinearExpr::phi(&whole).term(q(-1), SWord::cat(&[w1, &ys, &xs, w2]));
    Ok(WordConstraint::eq(expr, RuleTag::Reorder))
}

/// The four letters joining the hub `x` to a fresh place `a`:
/// `E_xa, E_x̄a, E_ax, E_ax̄`.
pub fn expansion_letters(x: u32, a: u32) -> [GeneratorLabel; 4] {
    let z = SignedPlace::pos(a);
    LetterType::ALL.map(|t| t.letter(x, z))
}

/// `4Φ(w) + 4 = Σ Φ(E w)` over the four letters joining `x` to the fresh
/// place `a`, and the right-multiplied twin.
pub fn gen_expansion(w: &SWord, x: u32, a: u32) -> Result<Vec<WordConstraint>, PhiError> {
    if a == x || w.support().contains(&a) {
        return Err(PhiError::NotFresh(a));
    }
    let letters = expansion_letters(x, a);
    let mut left = LinearExpr::new().term(q(4), w.clone()).plus_constant(q(4));
    let mut right = left.clone();
    for l in letters {
        let s = SWord::letter(l);
        left = left.term(q(-1), SWord::cat(&[&s, w]));
        right = right.term(q(-1), SWord::cat(&[w, &s]));
    }
    Ok(vec![
        WordConstraint::eq(left, RuleTag::ExpandLeft),
        WordConstraint::eq(right, RuleTag::ExpandRight),
    ])
}

/// `Φ(w) = |w|` for a star-shaped word (derived rule).
pub fn star_value(w: &SWord) -> Result<WordConstraint, PhiError> {
    if !analyze_word(w).star_shaped {
        return Err(PhiError::NotStarShaped(w.to_string()));
    }
    let expr = LinearExpr::phi(w).plus_constant(-q(w.len() as i64));
    Ok(WordConstraint::eq(expr, RuleTag::StarValue))
}

/// The eight generators in `Δ_ab`: `E_{a^± b^±}` and `E_{b^± a^±}`.
pub fn delta_letters(a: u32, b: u32) -> Vec<GeneratorLabel> {
    let mut out = Vec::with_capacity(8);
    for (p, r) in [(a, b), (b, a)] {
        for sp in [true, false] {
            for sr in [true, false] {
                out.push(GeneratorLabel { a: SignedPlace::new(p, sp), b: SignedPlace::new(r, sr) });
            }
        }
    }
    out
}

/// `⟨Δ_ab, Δ_cd⟩ = Σ_{s, t} ⟨1 - s, 1 - t⟩`.
pub fn delta_pairing(ab: (u32, u32), cd: (u32, u32)) -> LinearExpr {
    let mut expr = LinearExpr::new();
    for s in delta_letters(ab.0, ab.1) {
        for t in delta_letters(cd.0, cd.1) {
            expr = expr.add(&polarize(&SWord::letter(s), &SWord::letter(t)));
        }
    }
    expr
}

fn distinct(places: &[u32]) -> Result<(), PhiError> {
    let mut v = places.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != places.len() || v.contains(&0) {
        return Err(PhiError::PlacesNotDistinct(places.to_vec()));
    }
    Ok(())
}

/// `⟨Δ_xa, Δ_xb⟩ <= 0`.
pub fn adjacent_nonpositive(x: u32, a: u32, b: u32) -> Result<WordConstraint, PhiError> {
    distinct(&[x, a, b])?;
    Ok(WordConstraint::le(delta_pairing((x, a), (x, b)), RuleTag::AdjacentNonpositive))
}

/// `⟨Δ_ab, Δ_cd⟩ = 0` for four distinct places.
pub fn disjoint_exact(a: u32, b: u32, c: u32, d: u32) -> Result<WordConstraint, PhiError> {
    distinct(&[a, b, c, d])?;
    Ok(WordConstraint::eq(delta_pairing((a, b), (c, d)), RuleTag::DisjointExact))
}

/// `uᵀ G u >= 0` for the Gram matrix `G_ij = ⟨γ_i - 1, γ_j - 1⟩`.
pub fn gram_cut(points: &[SWord], u: &[Rational]) -> WordConstraint {
    let mut expr = LinearExpr::new();
    for (i, gi) in points.iter().enumerate() {
        for (j, gj) in points.iter().enumerate() {
            let c = -(&u[i] * &u[j]);
            if !c.is_zero() {
                expr = expr.add(&polarize(gi, gj).scale(&c));
            }
        }
    }
    WordConstraint::le(expr, RuleTag::Figure1Psd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::canon::CanonMode;
    use crate::phi::feasibility::{check_feasible, Feasibility};
    use crate::phi::system::PhiSystem;
    use crate::phi::word::e;

    fn w(letters: &[(i32, i32)]) -> SWord {
        SWord(letters.iter().map(|&(a, b)| e(a, b)).collect())
    }

    #[test]
    fn disjoint_pair_has_value_two() {
        let cs = gen_disjoint(&SWord::empty(), &w(&[(1, 2)]), &w(&[(3, 4)])).unwrap();
        let mut s = PhiSystem::new(CanonMode::Automorphism);
        s.add_all(&cs).unwrap();
        let id = s.unknown_of(&w(&[(1, 2), (3, 4)])).unwrap();
        assert_eq!(crate::phi::feasibility::implied_value(&s, id), Some(q(2)));
        assert!(gen_disjoint(&SWord::empty(), &SWord::empty(), &w(&[(3, 4)])).unwrap().is_empty());
        assert!(matches!(
            gen_disjoint(&SWord::empty(), &w(&[(1, 2)]), &w(&[(2, 4)])),
            Err(PhiError::OverlappingSupports(_))
        ));
    }

    #[test]
    fn nested_disjoint_products_have_value_k() {
        // induction oracle: Φ(E_1 ... E_k) = k for disjoint generators
        let mut s = PhiSystem::new(CanonMode::Syntactic);
        let gens: Vec<SWord> = (0..5).map(|i| w(&[(2 * i + 1, 2 * i + 2)])).collect();
        for k in 1..gens.len() {
            let prefix = SWord::cat(&gens[..k - 1].iter().collect::<Vec<_>>());
            s.add_all(&gen_disjoint(&SWord::empty(), &prefix, &gens[k - 1]).unwrap_or_default())
                .unwrap();
            let _ = s.add_all(&gen_disjoint(&SWord::empty(), &prefix, &gens[k]).unwrap());
            let next = SWord::cat(&gens[..k].iter().collect::<Vec<_>>());
            s.add_all(&gen_disjoint(&SWord::empty(), &next, &gens[k]).unwrap()).unwrap();
        }
        let Feasibility::Feasible { solution } = check_feasible(&s).unwrap() else {
            panic!("feasible")
        };
        for k in 1..=gens.len() {
            let word = SWord::cat(&gens[..k].iter().collect::<Vec<_>>());
            let id = s.lookup(&word).unwrap().unwrap();
            assert_eq!(solution[id], q(k as i64), "k = {k}");
        }
    }

    #[test]
    fn cancellation_examples() {
        // x = 1
        let c = gen_cancellation(&SWord::empty(), e(1, 2), e(1, 3), &w(&[(1, 4)])).unwrap();
        assert!(c.holds_for_length());
        assert_eq!(c.expr.terms.len(), 3);
        let c0 = gen_cancellation(&SWord::empty(), e(1, 2), e(1, 3), &SWord::empty()).unwrap();
        // Φ(X1X2) = Φ(X1) + Φ(X1X2) - 1 reduces to Φ(X1) = 1
        let mut s = PhiSystem::new(CanonMode::Automorphism);
        s.add(&c0).unwrap();
        let last = s.constraints().last().unwrap();
        assert_eq!(last.coeffs.len(), 1);
        assert!(matches!(
            gen_cancellation(&SWord::empty(), e(1, 2), e(3, 1), &SWord::empty()),
            Err(PhiError::TypeMismatch { .. })
        ));
        assert!(matches!(
            gen_cancellation(&w(&[(5, 6)]), e(1, 2), e(1, 3), &SWord::empty()),
            Err(PhiError::NotStarShaped(_))
        ));
    }

    #[test]
    fn reorder_examples() {
        // hub x = 1; w1 = w2 = E_xa E_x̄b E_cx E_dx̄ on fresh places
        let four = |base: i32| w(&[(1, base), (-1, base + 1), (base + 2, 1), (base + 3, -1)]);
        let (w1, w2) = (four(2), four(6));
        let c = gen_reorder(&w1, e(10, 1), e(1, 11), &w2).unwrap();
        assert!(c.holds_for_length());
        // same type: swapping the two leaves relabels one side into the other
        let same = gen_reorder(&w1, e(1, 10), e(1, 11), &w2).unwrap();
        for mode in [CanonMode::Automorphism, CanonMode::Syntactic] {
            let mut s = PhiSystem::new(mode);
            assert!(!s.add(&same).unwrap());
        }
        assert!(matches!(
            gen_reorder(&w(&[(1, 2)]), e(10, 1), e(1, 11), &w2),
            Err(PhiError::MissingTypes { .. })
        ));
    }

    #[test]
    fn expansion_examples() {
        let cs = gen_expansion(&SWord::empty(), 1, 2).unwrap();
        assert!(cs.iter().all(|c| c.holds_for_length()));
        let cs = gen_expansion(&w(&[(1, 3)]), 1, 2).unwrap();
        assert!(cs.iter().all(|c| c.holds_for_length()));
        assert_eq!(cs[0].expr.eval_length(), q(0));
        assert!(matches!(gen_expansion(&w(&[(1, 2)]), 1, 2), Err(PhiError::NotFresh(2))));
    }

    #[test]
    fn expansion_and_cancellation_leave_same_type_pairs_free() {
        // elimination oracle: expansion and cancellation around one hub,
        // over stars of length at most two, pin Φ(E) but not Φ(X1 X2)
        use crate::phi::feasibility::implied_value;
        use crate::phi::word::PlaceAllocator;
        let hub = 1;
        let mut alloc = PlaceAllocator::new(2);
        let star = |alloc: &mut PlaceAllocator, types: &[LetterType]| {
            SWord(types.iter().map(|t| t.letter(hub, alloc.fresh_signed(true))).collect())
        };
        let mut s = PhiSystem::new(CanonMode::Automorphism);
        let mut shapes: Vec<Vec<LetterType>> = vec![vec![]];
        shapes.extend(LetterType::ALL.map(|t| vec![t]));
        for t in LetterType::ALL {
            shapes.extend(LetterType::ALL.map(|u| vec![t, u]));
        }
        for shape in &shapes {
            let w = star(&mut alloc, shape);
            let a = alloc.fresh();
            s.add_all(&gen_expansion(&w, hub, a).unwrap()).unwrap();
        }
        for t in LetterType::ALL {
            for l in &shapes[..5] {
                for r in &shapes[..5] {
                    let (w1, pair, w2) = (star(&mut alloc, l), star(&mut alloc, &[t, t]), star(&mut alloc, r));
                    s.add(&gen_cancellation(&w1, pair.0[0], pair.0[1], &w2).unwrap()).unwrap();
                }
            }
        }
        assert_eq!(implied_value(&s, 1), Some(q(1)));
        let before = s.unknowns().len();
        let id = s.unknown_of(&w(&[(1, 50), (1, 51)])).unwrap();
        assert_eq!(s.unknowns().len(), before);
        assert_eq!(implied_value(&s, id), None);
        assert!(s.satisfied_by(&s.length_assignment().unwrap()));
    }

    #[test]
    fn delta_rules_hold_for_length() {
        assert_eq!(delta_letters(1, 2).len(), 8);
        let adj = adjacent_nonpositive(1, 2, 3).unwrap();
        assert_eq!(adj.expr.eval_length(), q(0));
        assert!(adj.holds_for_length());
        let dis = disjoint_exact(1, 2, 3, 4).unwrap();
        assert_eq!(dis.expr.eval_length(), q(0));
        assert!(adjacent_nonpositive(1, 1, 3).is_err());
    }
}
