//! Property tests for the Φ calculus: the length function satisfies every
//! generated rule, pentagram rewrites keep the automorphism, canonical keys
//! are invariant, and infeasibility certificates re-substitute.

use kazhdan::algebra::Rational;
use kazhdan::groups::{AutElement, GeneratorLabel, SignedPlace};
use kazhdan::phi::{
    is_star_forest, pentagram_rewrite, phi_check, random_instances, word_key, CanonMode, Feasibility,
    InstanceConfig, Relation, SWord,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Abelianization by hand: `E_{a^s b^t}` adds `s·t` times row `b` to row `a`
/// of the identity, and words multiply left to right.
fn abelian(n: usize, w: &SWord) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for l in w.letters() {
        let (a, b) = (l.a.index() as usize - 1, l.b.index() as usize - 1);
        let sign = if l.a.is_positive() == l.b.is_positive() { 1 } else { -1 };
        let mut e: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        e[a][b] = sign;
        m = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| m[i][k] * e[k][j]).sum()).collect()).collect();
    }
    m
}

fn label() -> impl Strategy<Value = GeneratorLabel> {
    (1u32..=5, any::<bool>(), 1u32..=5, any::<bool>())
        .prop_filter("distinct places", |(a, _, b, _)| a != b)
        .prop_map(|(a, sa, b, sb)| GeneratorLabel { a: SignedPlace::new(a, sa), b: SignedPlace::new(b, sb) })
}

fn word(max: usize) -> impl Strategy<Value = SWord> {
    prop::collection::vec(label(), 0..=max).prop_map(SWord)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn length_function_satisfies_random_instances(seed in any::<u64>(), max_len in 3usize..=8, count in 1usize..25) {
        let cfg = InstanceConfig { max_len, count, seed, mode: CanonMode::Automorphism };
        let inst = random_instances(&cfg).unwrap();
        for c in &inst.constraints {
            let mut total = c.expr.constant.clone();
            for (coef, w) in &c.expr.terms {
                prop_assert!(is_star_forest(w), "{}", w);
                prop_assert!(w.len() <= max_len.max(10));
                total += coef * q(w.len() as i64);
            }
            match c.relation {
                Relation::Eq => prop_assert!(total.is_zero()),
                Relation::Le => prop_assert!(!total.is_positive()),
            }
        }
        for r in &inst.rewrites {
            prop_assert!(r.sound);
        }
    }

    #[test]
    fn pentagram_rewrites_keep_the_automorphism(w in word(6)) {
        let letters = w.letters();
        for pos in 0..letters.len().saturating_sub(1) {
            let (p, r) = (letters[pos], letters[pos + 1]);
            let applies = (p.a == r.a && p.b.index() != r.b.index()) || (p.b == r.b && p.a.index() != r.a.index());
            match pentagram_rewrite(&w, pos) {
                Ok(out) => {
                    prop_assert!(applies);
                    prop_assert_eq!(out.len(), w.len() + 1);
                    prop_assert_eq!(abelian(5, &out), abelian(5, &w));
                    prop_assert_eq!(AutElement::from_word(5, out.letters()).unwrap(), AutElement::from_word(5, w.letters()).unwrap());
                }
                Err(_) => prop_assert!(!applies),
            }
        }
    }

    #[test]
    fn keys_ignore_inversion_and_relabeling(w in word(5), perm in Just((1u32..=5).collect::<Vec<_>>()).prop_shuffle(), signs in prop::collection::vec(any::<bool>(), 5)) {
        let relabel = |p: SignedPlace| {
            let i = p.index() as usize - 1;
            SignedPlace::new(perm[i] + 10, p.is_positive() == signs[i])
        };
        let moved = SWord(w.letters().iter().map(|l| GeneratorLabel { a: relabel(l.a), b: relabel(l.b) }).collect());
        for mode in [CanonMode::Automorphism, CanonMode::Syntactic] {
            let k = word_key(&w, mode).unwrap();
            prop_assert_eq!(&k, &word_key(&w.inverse(), mode).unwrap());
            prop_assert_eq!(&k, &word_key(&moved, mode).unwrap());
        }
    }

    #[test]
    fn equal_automorphisms_share_a_key(w in word(4)) {
        // appending a cancelling pair does not change the element
        let l = GeneratorLabel { a: SignedPlace::pos(1), b: SignedPlace::pos(2) };
        let padded = SWord::cat(&[&w, &SWord(vec![l, l.inverse()])]);
        prop_assert_eq!(word_key(&w, CanonMode::Automorphism).unwrap(), word_key(&padded, CanonMode::Automorphism).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn farkas_certificates_resubstitute(seed in any::<u64>()) {
        let cfg = InstanceConfig { count: 40, seed, ..Default::default() };
        let run = phi_check(&cfg).unwrap();
        prop_assert!(run.base_result.is_feasible());
        let Feasibility::Infeasible { certificate } = &run.figure1_result else {
            return Err(TestCaseError::fail("five-point rules must be infeasible"));
        };
        let cs = run.with_figure1.constraints();
        // the combination is the same positive constant at any assignment
        let n = run.with_figure1.unknowns().len();
        let at = |x: &dyn Fn(usize) -> Rational| {
            certificate.multipliers.iter().fold(Rational::zero(), |acc, (&k, m)| {
                let c = &cs[k];
                let v = c.coeffs.iter().fold(c.constant.clone(), |a, (&i, coef)| a + coef * x(i));
                acc + m * v
            })
        };
        let zero = at(&|_| Rational::zero());
        let spread = at(&|i| q((i as i64 * 7919) % 97 - 48));
        prop_assert!(zero.is_positive());
        prop_assert_eq!(&zero, &spread);
        prop_assert!(n > 2);
        for (&k, m) in &certificate.multipliers {
            if cs[k].relation == Relation::Le {
                prop_assert!(!m.is_negative());
            }
        }
    }
}
